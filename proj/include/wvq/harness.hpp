#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wvq/rng.hpp"
#include "wvq/trainers.hpp"

namespace wvq::harness {

enum class Experiment { Disks, GaussianSweep, UniformSweep, VarianceTable, Atomic, LloydCheck };

struct DiskCase {
    double offset = 0.0; // codebook disk center distance along x
    double radius = 1.0; // codebook disk radius
};

struct ExperimentConfig {
    Experiment experiment = Experiment::GaussianSweep;
    std::size_t codebook_size = 1024; // K
    std::size_t feature_count = 200000; // N
    std::size_t dim = 32;
    std::size_t repeats = 5;
    Seed base_seed{42};
    std::string output_dir = ".";

    // sweep lists: shift = mu or nu, scale = sigma or zeta
    std::vector<double> shift_values = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    std::vector<double> scale_values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    std::vector<double> variance_scales = {1e-4, 1e-3, 1e-2, 0.1, 1.0};

    // disks
    double feature_radius = 1.0;
    std::vector<DiskCase> disk_cases = {{2.4, 1.0}, {1.6, 1.0}, {0.8, 1.0}, {0.0, 1.0},
                                        {0.0, 0.4}, {0.0, 0.7}, {0.0, 1.3}, {0.0, 1.6}};

    // atomic
    TrainerConfig trainer;
    std::vector<double> atomic_shifts = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    bool full_scale = false;

    // lloyd
    std::size_t lloyd_centers = 256;
    std::size_t lloyd_bins = 16;
};

// One row of results.csv; column order is fixed:
// experiment,strategy,sweep_value,repeat,seed,quant_error,utilization,perplexity,w2,wall_ms
struct ResultRow {
    std::string experiment;
    std::string strategy = "-";
    double sweep_value = 0.0;
    std::size_t repeat = 0;
    std::uint64_t seed = 0;
    double quant_error = 0.0;
    double utilization = 0.0;
    double perplexity = 0.0;
    double w2 = 0.0;
    double wall_ms = 0.0;   // written to the CSV; pinned to 0 for determinism
    double measured_ms = 0.0; // real timing, surfaced via summary.json only
    bool flagged = false;   // diverged training
};

struct RunOutput {
    std::vector<ResultRow> rows;
    bool diverged = false;
};

ExperimentConfig default_config(Experiment e);
Experiment experiment_from_name(const std::string& name); // throws ConfigError

// Applies a JSON config document on top of the experiment defaults.
ExperimentConfig load_config(Experiment e, const std::string& json_path);

RunOutput run_disks(const ExperimentConfig& cfg);
RunOutput run_gaussian_sweep(const ExperimentConfig& cfg);
RunOutput run_uniform_sweep(const ExperimentConfig& cfg);
RunOutput run_variance_table(const ExperimentConfig& cfg);
RunOutput run_atomic(const ExperimentConfig& cfg);
RunOutput run_lloyd_check(const ExperimentConfig& cfg);

// Dispatches on cfg.experiment and writes results.csv, summary.json and the
// experiment's SVG plots into cfg.output_dir.
RunOutput run_experiment(const ExperimentConfig& cfg);

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
void emit_summary(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows,
                  const std::string& path);

std::string strategy_name(Strategy s);

} // namespace wvq::harness
