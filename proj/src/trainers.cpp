#include "wvq/trainers.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "wvq/distmatch.hpp"
#include "wvq/errors.hpp"
#include "wvq/kernels.hpp"
#include "wvq/quantizer.hpp"

namespace wvq {

namespace {

StepReport make_report(const FeatureBatch& batch, const Codebook& codebook, const Assignment& a,
                       const TrainerConfig& cfg, std::uint64_t step) {
    StepReport r;
    r.triple = criterion_triple(batch, codebook, a);
    r.w2 = w2_empirical(batch, codebook, cfg.jitter);
    r.step = step;
    return r;
}

// Gradient of the batch quantization loss (1/N) sum_i ||z_i - e_{r_i}||^2
// with respect to the code vectors: (2/N) sum_{z in S_k} (e_k - z).
Matrix vanilla_gradient(const FeatureBatch& batch, const Codebook& codebook, const Assignment& a) {
    const std::size_t k = codebook.rows;
    const std::size_t d = codebook.cols;
    const double inv_n = 1.0 / static_cast<double>(batch.rows);

    Matrix grad(k, d);
    for (std::size_t i = 0; i < batch.rows; ++i) {
        const double* z = batch.row(i);
        const double* e = codebook.row(a.indices[i]);
        double* g = grad.row(a.indices[i]);
        for (std::size_t j = 0; j < d; ++j) g[j] += 2.0 * inv_n * (e[j] - z[j]);
    }
    return grad;
}

void apply_sgd(Codebook& codebook, const Matrix& grad, double lr) {
    for (std::size_t i = 0; i < codebook.data.size(); ++i) codebook.data[i] -= lr * grad.data[i];
    if (!codebook.all_finite()) throw DivergedTraining("codebook left the finite range");
}

void require_strategy(const TrainerConfig& cfg, Strategy s, const char* name) {
    if (cfg.strategy != s) throw InvalidInput(std::string(name) + ": config strategy mismatch");
}

// Cluster means of the batch under the assignment; count 0 leaves the row
// untouched by the callers.
void cluster_means(const FeatureBatch& batch, const Assignment& a, Matrix& sums) {
    for (std::size_t i = 0; i < batch.rows; ++i) {
        const double* z = batch.row(i);
        double* s = sums.row(a.indices[i]);
        for (std::size_t j = 0; j < batch.cols; ++j) s[j] += z[j];
    }
}

void ema_update(Codebook& codebook, const FeatureBatch& batch, const Assignment& a, double alpha) {
    const std::size_t d = codebook.cols;
    Matrix sums(codebook.rows, d);
    cluster_means(batch, a, sums);
    for (std::size_t k = 0; k < codebook.rows; ++k) {
        if (a.counts[k] == 0) continue;
        double inv_c = 1.0 / static_cast<double>(a.counts[k]);
        double* e = codebook.row(k);
        const double* s = sums.row(k);
        for (std::size_t j = 0; j < d; ++j) e[j] = alpha * e[j] + (1.0 - alpha) * s[j] * inv_c;
    }
    if (!codebook.all_finite()) throw DivergedTraining("codebook left the finite range");
}

} // namespace

TrainerState init_trainer_state(const TrainerConfig& cfg, std::size_t codebook_size,
                                const SourceSpec& init_spec, Seed seed) {
    TrainerState state;
    state.codebook = sample(init_spec, codebook_size, derive_seed(seed, 1));
    state.rng = Xoshiro256pp(derive_seed(seed, 3));
    if (cfg.strategy == Strategy::Linear) {
        state.base_codebook = state.codebook;
        state.projection = Matrix::identity(init_spec.dim);
        state.bias.assign(init_spec.dim, 0.0);
    }
    if (cfg.strategy == Strategy::Online) state.usage.assign(codebook_size, 0.0);
    return state;
}

StepReport vanilla_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg) {
    require_strategy(cfg, Strategy::Vanilla, "vanilla_step");
    Assignment a = quantize(batch, state.codebook);
    StepReport report = make_report(batch, state.codebook, a, cfg, ++state.step);
    apply_sgd(state.codebook, vanilla_gradient(batch, state.codebook, a), cfg.learning_rate);
    return report;
}

StepReport ema_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg) {
    require_strategy(cfg, Strategy::EMA, "ema_step");
    Assignment a = quantize(batch, state.codebook);
    StepReport report = make_report(batch, state.codebook, a, cfg, ++state.step);
    ema_update(state.codebook, batch, a, cfg.ema_decay);
    return report;
}

StepReport online_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg) {
    require_strategy(cfg, Strategy::Online, "online_step");
    const std::size_t k = state.codebook.rows;
    const std::size_t d = state.codebook.cols;

    Assignment a = quantize(batch, state.codebook);
    StepReport report = make_report(batch, state.codebook, a, cfg, ++state.step);

    // Decayed usage; the first step seeds it directly from the counts so a
    // fresh state does not start in the all-dead regime.
    if (!state.usage_primed) {
        for (std::size_t i = 0; i < k; ++i) state.usage[i] = static_cast<double>(a.counts[i]);
        state.usage_primed = true;
    } else {
        for (std::size_t i = 0; i < k; ++i)
            state.usage[i] = cfg.ema_decay * state.usage[i] +
                             (1.0 - cfg.ema_decay) * static_cast<double>(a.counts[i]);
    }

    ema_update(state.codebook, batch, a, cfg.ema_decay);

    std::vector<std::size_t> dead;
    for (std::size_t i = 0; i < k; ++i)
        if (state.usage[i] < cfg.dead_reinit_threshold) dead.push_back(i);
    if (dead.size() > batch.rows) dead.resize(batch.rows);
    if (dead.empty()) return report;

    // k-means++ style reinitialization: distance-squared weighting against
    // the live codes plus the replacements already chosen this step.
    std::vector<double> weight(batch.rows, std::numeric_limits<double>::infinity());
    bool any_live = dead.size() < k;
    if (any_live) {
        std::vector<bool> is_dead(k, false);
        for (std::size_t idx : dead) is_dead[idx] = true;
        for (std::size_t i = 0; i < batch.rows; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                if (is_dead[c]) continue;
                double dist = kernels::l2sq(batch.row(i), state.codebook.row(c), d);
                if (dist < best) best = dist;
            }
            weight[i] = best;
        }
    }

    for (std::size_t idx : dead) {
        double total = 0.0;
        for (double w : weight)
            if (std::isfinite(w)) total += w;
        std::size_t pick;
        if (total > 0.0 && std::isfinite(total)) {
            double u = state.rng.next_double() * total;
            double acc = 0.0;
            pick = batch.rows - 1;
            for (std::size_t i = 0; i < batch.rows; ++i) {
                if (!std::isfinite(weight[i])) continue;
                acc += weight[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(state.rng.next_u64() % batch.rows);
        }
        std::memcpy(state.codebook.row(idx), batch.row(pick), d * sizeof(double));
        state.usage[idx] = 2.0 * cfg.dead_reinit_threshold; // grace period
        for (std::size_t i = 0; i < batch.rows; ++i) {
            double dist = kernels::l2sq(batch.row(i), batch.row(pick), d);
            if (!(dist >= weight[i])) weight[i] = dist;
        }
    }
    if (!state.codebook.all_finite()) throw DivergedTraining("codebook left the finite range");
    return report;
}

StepReport linear_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg) {
    require_strategy(cfg, Strategy::Linear, "linear_step");
    const std::size_t k = state.codebook.rows;
    const std::size_t d = state.codebook.cols;

    Assignment a = quantize(batch, state.codebook);
    StepReport report = make_report(batch, state.codebook, a, cfg, ++state.step);

    // Quantization loss on the projected codes e_k = W b_k + bias, with the
    // base codes frozen; gradient flows to (W, bias) only.
    Matrix w_grad(d, d);
    std::vector<double> b_grad(d, 0.0);
    const double scale = 2.0 / static_cast<double>(batch.rows);
    std::vector<double> resid(d);
    for (std::size_t i = 0; i < batch.rows; ++i) {
        const double* z = batch.row(i);
        std::uint32_t r = a.indices[i];
        const double* e = state.codebook.row(r);
        const double* base = state.base_codebook.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            resid[j] = scale * (e[j] - z[j]);
            b_grad[j] += resid[j];
        }
        for (std::size_t j = 0; j < d; ++j) {
            double* wr = w_grad.row(j);
            double rj = resid[j];
            for (std::size_t l = 0; l < d; ++l) wr[l] += rj * base[l];
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        double* wr = state.projection.row(j);
        const double* gr = w_grad.row(j);
        for (std::size_t l = 0; l < d; ++l) wr[l] -= cfg.learning_rate * gr[l];
        state.bias[j] -= cfg.learning_rate * b_grad[j];
    }
    if (!state.projection.all_finite()) throw DivergedTraining("projection left the finite range");

    // Refresh the effective codebook.
    for (std::size_t r = 0; r < k; ++r) {
        const double* base = state.base_codebook.row(r);
        double* e = state.codebook.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            double acc = state.bias[j];
            const double* wr = state.projection.row(j);
            for (std::size_t l = 0; l < d; ++l) acc += wr[l] * base[l];
            e[j] = acc;
        }
    }
    if (!state.codebook.all_finite()) throw DivergedTraining("codebook left the finite range");
    return report;
}

StepReport wasserstein_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg) {
    require_strategy(cfg, Strategy::Wasserstein, "wasserstein_step");
    Assignment a = quantize(batch, state.codebook);
    StepReport report = make_report(batch, state.codebook, a, cfg, ++state.step);

    Matrix grad = vanilla_gradient(batch, state.codebook, a);
    if (cfg.gamma > 0.0) {
        // Distribution-matching term. The per-code W2 gradient carries an
        // intrinsic 1/K factor, so it is rescaled by K to make the codebook
        // drift rate independent of the codebook size, and the squared
        // distance is used as the descent objective (2 * L * dL/de) so the
        // gradient vanishes smoothly at the matched point.
        try {
            WassersteinGrad wg = grad_w2_codebook(batch, state.codebook, cfg.jitter);
            double scale = cfg.gamma * 2.0 * wg.loss * static_cast<double>(state.codebook.rows);
            for (std::size_t i = 0; i < grad.data.size(); ++i)
                grad.data[i] += scale * wg.d_codebook.data[i];
        } catch (const DegenerateGradient&) {
            // matched distributions: the W2 term is skipped for this step
        }
    }
    apply_sgd(state.codebook, grad, cfg.learning_rate);
    return report;
}

StepReport train_step(TrainerState& state, const FeatureBatch& batch, const TrainerConfig& cfg) {
    switch (cfg.strategy) {
    case Strategy::Vanilla:
        return vanilla_step(state, batch, cfg);
    case Strategy::EMA:
        return ema_step(state, batch, cfg);
    case Strategy::Online:
        return online_step(state, batch, cfg);
    case Strategy::Linear:
        return linear_step(state, batch, cfg);
    case Strategy::Wasserstein:
        return wasserstein_step(state, batch, cfg);
    }
    throw InvalidInput("train_step: unknown strategy");
}

std::vector<StepReport> run_training(const TrainerConfig& cfg, std::size_t codebook_size,
                                     const SourceSpec& feature_spec, const SourceSpec& init_spec,
                                     Seed seed) {
    if (codebook_size < 1 || cfg.batch_size < 1) throw InvalidInput("run_training: empty sizes");
    TrainerState state = init_trainer_state(cfg, codebook_size, init_spec, seed);

    // Held-out batch with its own seed; training batches never reuse it.
    FeatureBatch eval_batch = sample(feature_spec, cfg.eval_batch_size, derive_seed(seed, 2));

    auto evaluate = [&](std::uint64_t step) {
        Assignment a = quantize(eval_batch, state.codebook);
        StepReport r;
        r.triple = criterion_triple(eval_batch, state.codebook, a);
        r.w2 = w2_empirical(eval_batch, state.codebook, cfg.jitter);
        r.step = step;
        return r;
    };

    std::vector<StepReport> reports;
    reports.reserve(cfg.steps + 2);
    reports.push_back(evaluate(0));
    for (std::size_t t = 1; t <= cfg.steps; ++t) {
        FeatureBatch batch = sample(feature_spec, cfg.batch_size, derive_seed(seed, 1000 + t));
        StepReport r = train_step(state, batch, cfg);
        r.step = t;
        reports.push_back(r);
    }
    if (cfg.steps > 0) reports.push_back(evaluate(cfg.steps));
    return reports;
}

} // namespace wvq
