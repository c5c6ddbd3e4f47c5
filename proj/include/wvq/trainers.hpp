#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wvq/matrix.hpp"
#include "wvq/metrics.hpp"
#include "wvq/rng.hpp"
#include "wvq/sampling.hpp"

namespace wvq {

enum class Strategy { Vanilla, EMA, Online, Linear, Wasserstein };

struct TrainerConfig {
    Strategy strategy = Strategy::Wasserstein;
    double learning_rate = 0.1;
    double ema_decay = 0.99;          // alpha
    double gamma = 0.5;               // W2 loss weight
    std::size_t steps = 200;
    std::size_t batch_size = 5000;
    double jitter = 1e-6;
    double dead_reinit_threshold = 1.0; // Online: decayed usage below this reinitializes
    std::size_t eval_batch_size = 50000;
};

struct TrainerState {
    Codebook codebook;       // the effective codebook (projected, for Linear)
    Matrix base_codebook;    // Linear only: frozen code vectors
    Matrix projection;       // Linear only: d x d weight, identity at init
    std::vector<double> bias;
    std::vector<double> usage; // Online only: decayed per-code usage
    bool usage_primed = false;
    std::uint64_t step = 0;
    Xoshiro256pp rng{Seed{0}}; // Online reinitialization stream
};

struct StepReport {
    CriterionTriple triple;
    double w2 = 0.0;
    std::uint64_t step = 0;
};

TrainerState init_trainer_state(const TrainerConfig& cfg, std::size_t codebook_size,
                                const SourceSpec& init_spec, Seed seed);

StepReport vanilla_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg);
StepReport ema_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg);
StepReport online_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg);
StepReport linear_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg);
StepReport wasserstein_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg);

StepReport train_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg);

// Samples a fresh batch per step, applies the configured update, and
// returns one report per step bracketed by held-out evaluations at step 0
// and after the final step.
std::vector<StepReport> run_training(const TrainerConfig& cfg, std::size_t codebook_size,
                                     const SourceSpec& feature_spec, const SourceSpec& init_spec,
                                     Seed seed);

} // namespace wvq
