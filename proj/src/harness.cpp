#include "wvq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "wvq/distmatch.hpp"
#include "wvq/errors.hpp"
#include "wvq/format.hpp"
#include "wvq/lloyd.hpp"
#include "wvq/metrics.hpp"
#include "wvq/quantizer.hpp"
#include "wvq/sampling.hpp"
#include "wvq/svg.hpp"

namespace wvq::harness {

namespace {

using nlohmann::json;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Seed case_seed(Seed base, std::uint64_t tag, std::uint64_t sweep, std::uint64_t repeat) {
    return derive_seed(derive_seed(derive_seed(base, tag), sweep), repeat);
}

// Samples both point sets, quantizes, and fills in the metric columns.
ResultRow evaluate_pair(const std::string& experiment, const SourceSpec& feature_spec,
                        const SourceSpec& code_spec, std::size_t n, std::size_t k, Seed seed,
                        double sweep_value, std::size_t repeat) {
    double t0 = now_ms();
    FeatureBatch features = sample(feature_spec, n, derive_seed(seed, 11));
    Codebook codes = sample(code_spec, k, derive_seed(seed, 12));
    Assignment a = quantize(features, codes);
    CriterionTriple triple = criterion_triple(features, codes, a);

    ResultRow row;
    row.experiment = experiment;
    row.sweep_value = sweep_value;
    row.repeat = repeat;
    row.seed = seed.value;
    row.quant_error = triple.quant_error;
    row.utilization = triple.utilization;
    row.perplexity = triple.perplexity;
    row.w2 = w2_empirical(features, codes, 0.0);
    row.measured_ms = now_ms() - t0;
    return row;
}

struct GroupStats {
    std::vector<double> sweep;
    std::vector<double> mean_qe, std_qe;
    std::vector<double> mean_util, std_util;
    std::vector<double> mean_ppl, std_ppl;
    std::vector<double> mean_w2, std_w2;
};

GroupStats group_by_sweep(const std::vector<ResultRow>& rows, const std::string& experiment,
                          const std::string& strategy) {
    std::map<double, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows)
        if (r.experiment == experiment && r.strategy == strategy && !r.flagged)
            groups[r.sweep_value].push_back(&r);

    auto mean_std = [](const std::vector<const ResultRow*>& g, auto getter, double& m, double& s) {
        m = 0.0;
        for (const auto* r : g) m += getter(*r);
        m /= static_cast<double>(g.size());
        s = 0.0;
        for (const auto* r : g) s += (getter(*r) - m) * (getter(*r) - m);
        s = g.size() > 1 ? std::sqrt(s / static_cast<double>(g.size() - 1)) : 0.0;
    };

    GroupStats out;
    for (const auto& [sv, g] : groups) {
        if (g.empty()) continue;
        out.sweep.push_back(sv);
        double m, s;
        mean_std(g, [](const ResultRow& r) { return r.quant_error; }, m, s);
        out.mean_qe.push_back(m);
        out.std_qe.push_back(s);
        mean_std(g, [](const ResultRow& r) { return r.utilization; }, m, s);
        out.mean_util.push_back(m);
        out.std_util.push_back(s);
        mean_std(g, [](const ResultRow& r) { return r.perplexity; }, m, s);
        out.mean_ppl.push_back(m);
        out.std_ppl.push_back(s);
        mean_std(g, [](const ResultRow& r) { return r.w2; }, m, s);
        out.mean_w2.push_back(m);
        out.std_w2.push_back(s);
    }
    return out;
}

svg::LineSeries ci_series(const std::string& label, const std::vector<double>& x,
                          const std::vector<double>& mean, const std::vector<double>& sd,
                          std::size_t repeats) {
    svg::LineSeries s;
    s.label = label;
    s.x = x;
    s.y = mean;
    if (repeats > 1) {
        double half = 1.96 / std::sqrt(static_cast<double>(repeats));
        for (std::size_t i = 0; i < mean.size(); ++i) {
            s.y_lo.push_back(mean[i] - half * sd[i]);
            s.y_hi.push_back(mean[i] + half * sd[i]);
        }
    }
    return s;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
    try {
        std::filesystem::create_directories(cfg.output_dir);
    } catch (const std::filesystem::filesystem_error& ex) {
        throw ReportWriteError(std::string("cannot create output directory: ") + ex.what());
    }
    return (std::filesystem::path(cfg.output_dir) / file).string();
}

void sweep_charts(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows,
                  const std::string& experiment, const std::string& x_label) {
    GroupStats g = group_by_sweep(rows, experiment, "-");
    struct Item {
        const char* file;
        const char* label;
        const std::vector<double>*mean, *sd;
        bool log_y;
    };
    Item items[] = {
        {"_quant_error.svg", "quantization error", &g.mean_qe, &g.std_qe, false},
        {"_utilization.svg", "utilization", &g.mean_util, &g.std_util, false},
        {"_perplexity.svg", "perplexity", &g.mean_ppl, &g.std_ppl, false},
    };
    for (const auto& item : items) {
        auto series = ci_series(experiment, g.sweep, *item.mean, *item.sd, cfg.repeats);
        svg::write_file(out_path(cfg, experiment + item.file),
                        svg::line_chart(experiment, x_label, item.label, {series}, item.log_y));
    }
}

ResultRow flagged_row(const std::string& experiment, const std::string& strategy,
                      double sweep_value, std::size_t repeat, Seed seed) {
    ResultRow row;
    row.experiment = experiment;
    row.strategy = strategy;
    row.sweep_value = sweep_value;
    row.repeat = repeat;
    row.seed = seed.value;
    row.quant_error = row.utilization = row.perplexity = row.w2 =
        std::numeric_limits<double>::quiet_NaN();
    row.flagged = true;
    return row;
}

void write_outputs(const ExperimentConfig& cfg, const RunOutput& out) {
    emit_csv(out.rows, out_path(cfg, "results.csv"));
    emit_summary(cfg, out.rows, out_path(cfg, "summary.json"));
}

} // namespace

std::string strategy_name(Strategy s) {
    switch (s) {
    case Strategy::Vanilla:
        return "vanilla";
    case Strategy::EMA:
        return "ema";
    case Strategy::Online:
        return "online";
    case Strategy::Linear:
        return "linear";
    case Strategy::Wasserstein:
        return "wasserstein";
    }
    return "?";
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    switch (e) {
    case Experiment::Disks:
        cfg.codebook_size = 400;
        cfg.feature_count = 10000;
        cfg.dim = 2;
        cfg.repeats = 1;
        break;
    case Experiment::GaussianSweep:
    case Experiment::UniformSweep:
        cfg.codebook_size = 1024;
        cfg.feature_count = 200000;
        cfg.dim = 32;
        cfg.repeats = 5;
        break;
    case Experiment::VarianceTable:
        cfg.codebook_size = 8192;
        cfg.feature_count = 100000;
        cfg.dim = 8;
        cfg.repeats = 5;
        break;
    case Experiment::Atomic:
        cfg.codebook_size = 2048;
        cfg.feature_count = 0;
        cfg.dim = 8;
        cfg.repeats = 1;
        break;
    case Experiment::LloydCheck:
        cfg.codebook_size = 0;
        cfg.feature_count = 0;
        cfg.dim = 1;
        cfg.repeats = 1;
        break;
    }
    return cfg;
}

Experiment experiment_from_name(const std::string& name) {
    if (name == "disks") return Experiment::Disks;
    if (name == "gaussian-sweep") return Experiment::GaussianSweep;
    if (name == "uniform-sweep") return Experiment::UniformSweep;
    if (name == "variance-table") return Experiment::VarianceTable;
    if (name == "atomic") return Experiment::Atomic;
    if (name == "lloyd-check") return Experiment::LloydCheck;
    throw ConfigError("unknown experiment: " + name);
}

ExperimentConfig load_config(Experiment e, const std::string& json_path) {
    ExperimentConfig cfg = default_config(e);
    std::ifstream in(json_path);
    if (!in) throw ConfigError("cannot read config file: " + json_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config parse error: ") + ex.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

    auto get_list = [](const json& v) {
        std::vector<double> out;
        for (const auto& x : v) out.push_back(x.get<double>());
        if (out.empty()) throw ConfigError("sweep list must be nonempty");
        return out;
    };

    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "K") cfg.codebook_size = value.get<std::size_t>();
            else if (key == "N") cfg.feature_count = value.get<std::size_t>();
            else if (key == "d") cfg.dim = value.get<std::size_t>();
            else if (key == "repeats") cfg.repeats = value.get<std::size_t>();
            else if (key == "seed") cfg.base_seed.value = value.get<std::uint64_t>();
            else if (key == "shift_values") cfg.shift_values = get_list(value);
            else if (key == "scale_values") cfg.scale_values = get_list(value);
            else if (key == "variance_scales") cfg.variance_scales = get_list(value);
            else if (key == "feature_radius") cfg.feature_radius = value.get<double>();
            else if (key == "disk_cases") {
                cfg.disk_cases.clear();
                for (const auto& c : value)
                    cfg.disk_cases.push_back({c.at("offset").get<double>(), c.at("radius").get<double>()});
                if (cfg.disk_cases.empty()) throw ConfigError("disk_cases must be nonempty");
            } else if (key == "atomic_shifts") cfg.atomic_shifts = get_list(value);
            else if (key == "full_scale") cfg.full_scale = value.get<bool>();
            else if (key == "lloyd_centers") cfg.lloyd_centers = value.get<std::size_t>();
            else if (key == "lloyd_bins") cfg.lloyd_bins = value.get<std::size_t>();
            else if (key == "trainer") {
                for (const auto& [tk, tv] : value.items()) {
                    if (tk == "learning_rate") cfg.trainer.learning_rate = tv.get<double>();
                    else if (tk == "ema_decay") cfg.trainer.ema_decay = tv.get<double>();
                    else if (tk == "gamma") cfg.trainer.gamma = tv.get<double>();
                    else if (tk == "steps") cfg.trainer.steps = tv.get<std::size_t>();
                    else if (tk == "batch_size") cfg.trainer.batch_size = tv.get<std::size_t>();
                    else if (tk == "jitter") cfg.trainer.jitter = tv.get<double>();
                    else if (tk == "dead_reinit_threshold")
                        cfg.trainer.dead_reinit_threshold = tv.get<double>();
                    else if (tk == "eval_batch_size") cfg.trainer.eval_batch_size = tv.get<std::size_t>();
                    else throw ConfigError("unknown trainer config key: " + tk);
                }
            } else throw ConfigError("unknown config key: " + key);
        }
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config value error: ") + ex.what());
    }

    if (cfg.repeats < 1) throw ConfigError("repeats must be >= 1");
    if (e != Experiment::LloydCheck && e != Experiment::Atomic) {
        if (cfg.codebook_size < 1 || cfg.feature_count < 1 || cfg.dim < 1)
            throw ConfigError("K, N and d must be positive");
    }
    return cfg;
}

RunOutput run_disks(const ExperimentConfig& cfg) {
    RunOutput out;
    for (std::size_t ci = 0; ci < cfg.disk_cases.size(); ++ci) {
        const DiskCase& dc = cfg.disk_cases[ci];
        SourceSpec features{SourceKind::UniformDisk, 2, 0.0, cfg.feature_radius, {0.0, 0.0}};
        SourceSpec codes{SourceKind::UniformDisk, 2, 0.0, dc.radius, {dc.offset, 0.0}};
        for (std::size_t r = 0; r < cfg.repeats; ++r) {
            Seed seed = case_seed(cfg.base_seed, 1, ci, r);
            ResultRow row = evaluate_pair("disks", features, codes, cfg.feature_count,
                                          cfg.codebook_size, seed, static_cast<double>(ci), r);
            out.rows.push_back(row);

            if (r == 0) {
                // scatter of 10% of the features and 90% of the codes
                FeatureBatch fb = sample(features, cfg.feature_count, derive_seed(seed, 11));
                Codebook cb = sample(codes, cfg.codebook_size, derive_seed(seed, 12));
                svg::ScatterGroup gf{"features (10%)", {}, {}};
                for (std::size_t i = 0; i < fb.rows; i += 10) {
                    gf.x.push_back(fb.at(i, 0));
                    gf.y.push_back(fb.at(i, 1));
                }
                svg::ScatterGroup gc{"codes (90%)", {}, {}};
                for (std::size_t i = 0; i < cb.rows; ++i) {
                    if (i % 10 == 9) continue;
                    gc.x.push_back(cb.at(i, 0));
                    gc.y.push_back(cb.at(i, 1));
                }
                std::string title = "disks offset=" + fmt_double(dc.offset) +
                                    " radius=" + fmt_double(dc.radius);
                svg::write_file(out_path(cfg, "disks_case" + std::to_string(ci) + ".svg"),
                                svg::scatter_chart(title, {gf, gc}));
            }
        }
    }
    write_outputs(cfg, out);
    return out;
}

// Sweep values within a repeat share one seed (common random numbers), so
// each per-repeat curve compares the same base samples under different
// shifts/scales instead of adding fresh sampling noise per point.
RunOutput run_gaussian_sweep(const ExperimentConfig& cfg) {
    RunOutput out;
    SourceSpec features{SourceKind::GaussianIso, cfg.dim, 0.0, 1.0, {}};
    for (std::size_t si = 0; si < cfg.shift_values.size(); ++si) {
        SourceSpec codes{SourceKind::GaussianIso, cfg.dim, cfg.shift_values[si], 1.0, {}};
        for (std::size_t r = 0; r < cfg.repeats; ++r)
            out.rows.push_back(evaluate_pair("gaussian_mean", features, codes, cfg.feature_count,
                                             cfg.codebook_size, case_seed(cfg.base_seed, 2, 0, r),
                                             cfg.shift_values[si], r));
    }
    for (std::size_t si = 0; si < cfg.scale_values.size(); ++si) {
        SourceSpec codes{SourceKind::GaussianIso, cfg.dim, 0.0, cfg.scale_values[si], {}};
        for (std::size_t r = 0; r < cfg.repeats; ++r)
            out.rows.push_back(evaluate_pair("gaussian_sigma", features, codes, cfg.feature_count,
                                             cfg.codebook_size, case_seed(cfg.base_seed, 3, 0, r),
                                             cfg.scale_values[si], r));
    }
    write_outputs(cfg, out);
    sweep_charts(cfg, out.rows, "gaussian_mean", "mean shift");
    sweep_charts(cfg, out.rows, "gaussian_sigma", "sigma");
    return out;
}

RunOutput run_uniform_sweep(const ExperimentConfig& cfg) {
    RunOutput out;
    SourceSpec features{SourceKind::UniformCube, cfg.dim, 0.0, 1.0, {}};
    for (std::size_t si = 0; si < cfg.shift_values.size(); ++si) {
        SourceSpec codes{SourceKind::UniformCube, cfg.dim, cfg.shift_values[si], 1.0, {}};
        for (std::size_t r = 0; r < cfg.repeats; ++r)
            out.rows.push_back(evaluate_pair("uniform_shift", features, codes, cfg.feature_count,
                                             cfg.codebook_size, case_seed(cfg.base_seed, 4, 0, r),
                                             cfg.shift_values[si], r));
    }
    for (std::size_t si = 0; si < cfg.scale_values.size(); ++si) {
        SourceSpec codes{SourceKind::UniformCube, cfg.dim, 0.0, cfg.scale_values[si], {}};
        for (std::size_t r = 0; r < cfg.repeats; ++r)
            out.rows.push_back(evaluate_pair("uniform_scale", features, codes, cfg.feature_count,
                                             cfg.codebook_size, case_seed(cfg.base_seed, 5, 0, r),
                                             cfg.scale_values[si], r));
    }
    write_outputs(cfg, out);
    sweep_charts(cfg, out.rows, "uniform_shift", "shift");
    sweep_charts(cfg, out.rows, "uniform_scale", "zeta");
    return out;
}

RunOutput run_variance_table(const ExperimentConfig& cfg) {
    RunOutput out;
    for (std::size_t si = 0; si < cfg.variance_scales.size(); ++si) {
        double scale = cfg.variance_scales[si];
        SourceSpec g{SourceKind::GaussianIso, cfg.dim, 0.0, scale, {}};
        SourceSpec u{SourceKind::UniformCube, cfg.dim, 0.0, scale, {}};
        for (std::size_t r = 0; r < cfg.repeats; ++r) {
            out.rows.push_back(evaluate_pair("variance_gaussian", g, g, cfg.feature_count,
                                             cfg.codebook_size, case_seed(cfg.base_seed, 6, si, r),
                                             scale, r));
            out.rows.push_back(evaluate_pair("variance_uniform", u, u, cfg.feature_count,
                                             cfg.codebook_size, case_seed(cfg.base_seed, 7, si, r),
                                             scale, r));
        }
    }
    write_outputs(cfg, out);

    for (const char* exp : {"variance_gaussian", "variance_uniform"}) {
        GroupStats g = group_by_sweep(out.rows, exp, "-");
        std::printf("%s (K=%zu, d=%zu, N=%zu, %zu repeats)\n", exp, cfg.codebook_size, cfg.dim,
                    cfg.feature_count, cfg.repeats);
        std::printf("%12s %14s %12s %12s\n", "scale", "quant_error", "utilization", "perplexity");
        for (std::size_t i = 0; i < g.sweep.size(); ++i)
            std::printf("%12g %14.6g %12.4f %12.1f\n", g.sweep[i], g.mean_qe[i], g.mean_util[i],
                        g.mean_ppl[i]);
    }
    return out;
}

RunOutput run_atomic(const ExperimentConfig& cfg) {
    RunOutput out;
    std::size_t k = cfg.codebook_size;
    TrainerConfig trainer = cfg.trainer;
    if (cfg.full_scale) {
        // the configuration the original study used on accelerator hardware
        k = 16384;
        trainer.steps = 2000;
        trainer.batch_size = 50000;
        trainer.eval_batch_size = std::max<std::size_t>(trainer.eval_batch_size, 50000);
    }

    const Strategy strategies[] = {Strategy::Vanilla, Strategy::EMA, Strategy::Online,
                                   Strategy::Linear, Strategy::Wasserstein};
    SourceSpec init_spec{SourceKind::GaussianIso, cfg.dim, 0.0, 1.0, {}};
    for (Strategy s : strategies) {
        trainer.strategy = s;
        for (std::size_t si = 0; si < cfg.atomic_shifts.size(); ++si) {
            double shift = cfg.atomic_shifts[si];
            SourceSpec feature_spec{SourceKind::GaussianIso, cfg.dim, shift, 1.0, {}};
            for (std::size_t r = 0; r < cfg.repeats; ++r) {
                Seed seed = case_seed(cfg.base_seed, 8 + static_cast<std::uint64_t>(s), si, r);
                double t0 = now_ms();
                try {
                    auto reports = run_training(trainer, k, feature_spec, init_spec, seed);
                    const StepReport& fin = reports.back();
                    ResultRow row;
                    row.experiment = "atomic";
                    row.strategy = strategy_name(s);
                    row.sweep_value = shift;
                    row.repeat = r;
                    row.seed = seed.value;
                    row.quant_error = fin.triple.quant_error;
                    row.utilization = fin.triple.utilization;
                    row.perplexity = fin.triple.perplexity;
                    row.w2 = fin.w2;
                    row.measured_ms = now_ms() - t0;
                    out.rows.push_back(row);
                } catch (const DivergedTraining&) {
                    out.rows.push_back(flagged_row("atomic", strategy_name(s), shift, r, seed));
                    out.diverged = true;
                }
            }
        }
    }
    write_outputs(cfg, out);

    struct Item {
        const char* file;
        const char* label;
        bool log_y;
        double (*get)(const GroupStats&, std::size_t);
    };
    const Item items[] = {
        {"atomic_quant_error.svg", "quantization error", false,
         [](const GroupStats& g, std::size_t i) { return g.mean_qe[i]; }},
        {"atomic_utilization.svg", "utilization", false,
         [](const GroupStats& g, std::size_t i) { return g.mean_util[i]; }},
        {"atomic_perplexity.svg", "perplexity", false,
         [](const GroupStats& g, std::size_t i) { return g.mean_ppl[i]; }},
        {"atomic_w2.svg", "w2", true,
         [](const GroupStats& g, std::size_t i) { return g.mean_w2[i]; }},
    };
    for (const auto& item : items) {
        std::vector<svg::LineSeries> series;
        for (Strategy s : strategies) {
            GroupStats g = group_by_sweep(out.rows, "atomic", strategy_name(s));
            svg::LineSeries line;
            line.label = strategy_name(s);
            line.x = g.sweep;
            for (std::size_t i = 0; i < g.sweep.size(); ++i) line.y.push_back(item.get(g, i));
            series.push_back(line);
        }
        svg::write_file(out_path(cfg, item.file),
                        svg::line_chart("atomic setting", "mean shift", item.label, series, item.log_y));
    }
    return out;
}

RunOutput run_lloyd_check(const ExperimentConfig& cfg) {
    RunOutput out;
    std::size_t k = cfg.lloyd_centers;

    lloyd::Density1D gauss{lloyd::DensityKind::Gaussian, 0.0, 1.0, -5.0, 5.0, 100000};
    lloyd::Density1D unif{lloyd::DensityKind::Uniform, 0.0, 1.0, 0.0, 1.0, 100000};

    double t0 = now_ms();
    auto g_centers = lloyd::lloyd_optimal_centers(gauss, k, 1e-9, 5000);
    double g_corr = lloyd::center_density_check(g_centers, gauss, cfg.lloyd_bins);
    ResultRow gr;
    gr.experiment = "lloyd_gaussian";
    gr.sweep_value = static_cast<double>(k);
    gr.seed = cfg.base_seed.value;
    gr.w2 = g_corr; // for lloyd rows the w2 column holds the density-law correlation
    gr.measured_ms = now_ms() - t0;
    out.rows.push_back(gr);

    t0 = now_ms();
    auto u_centers = lloyd::lloyd_optimal_centers(unif, k, 1e-9, 5000);
    double u_dev = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double lattice = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(k));
        u_dev = std::max(u_dev, std::abs(u_centers[i] - lattice));
    }
    ResultRow ur;
    ur.experiment = "lloyd_uniform";
    ur.sweep_value = static_cast<double>(k);
    ur.seed = cfg.base_seed.value;
    ur.quant_error = u_dev; // max deviation from the closed-form lattice
    ur.w2 = 1.0;
    ur.measured_ms = now_ms() - t0;
    out.rows.push_back(ur);

    write_outputs(cfg, out);

    // histogram vs normalized f^(1/3) profile
    std::vector<double> freq(cfg.lloyd_bins, 0.0), expected(cfg.lloyd_bins, 0.0), mids;
    double lo = g_centers.front(), hi = g_centers.back();
    double width = (hi - lo) / static_cast<double>(cfg.lloyd_bins);
    double total = 0.0;
    for (std::size_t b = 0; b < cfg.lloyd_bins; ++b) {
        double mid = lo + (static_cast<double>(b) + 0.5) * width;
        mids.push_back(mid);
        double f = std::exp(-0.5 * mid * mid);
        expected[b] = std::cbrt(f);
        total += expected[b];
    }
    for (double& v : expected) v /= total;
    for (double c : g_centers) {
        std::size_t b = std::min(static_cast<std::size_t>((c - lo) / width), cfg.lloyd_bins - 1);
        freq[b] += 1.0 / static_cast<double>(k);
    }
    svg::LineSeries obs{"center frequency", mids, freq, {}, {}};
    svg::LineSeries exp_s{"normalized f^(1/3)", mids, expected, {}, {}};
    svg::write_file(out_path(cfg, "lloyd_density.svg"),
                    svg::line_chart("optimal center density", "x", "probability", {obs, exp_s}));
    return out;
}

RunOutput run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
    case Experiment::Disks:
        return run_disks(cfg);
    case Experiment::GaussianSweep:
        return run_gaussian_sweep(cfg);
    case Experiment::UniformSweep:
        return run_uniform_sweep(cfg);
    case Experiment::VarianceTable:
        return run_variance_table(cfg);
    case Experiment::Atomic:
        return run_atomic(cfg);
    case Experiment::LloydCheck:
        return run_lloyd_check(cfg);
    }
    throw ConfigError("unknown experiment");
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ostringstream os;
    os << "experiment,strategy,sweep_value,repeat,seed,quant_error,utilization,perplexity,w2,wall_ms\n";
    for (const auto& r : rows) {
        os << r.experiment << ',' << r.strategy << ',' << fmt_double(r.sweep_value) << ',' << r.repeat
           << ',' << r.seed << ',' << fmt_double(r.quant_error) << ',' << fmt_double(r.utilization)
           << ',' << fmt_double(r.perplexity) << ',' << fmt_double(r.w2) << ','
           << fmt_double(r.wall_ms) << '\n';
    }
    svg::write_file(path, os.str());
}

void emit_summary(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows,
                  const std::string& path) {
    json doc;
    doc["repeats"] = cfg.repeats;
    doc["seed"] = cfg.base_seed.value;
    doc["K"] = cfg.codebook_size;
    doc["N"] = cfg.feature_count;
    doc["d"] = cfg.dim;

    std::size_t flagged = 0;
    for (const auto& r : rows)
        if (r.flagged) ++flagged;
    doc["diverged_rows"] = flagged;

    // one summary entry per (experiment, strategy) group
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& r : rows) {
        std::pair<std::string, std::string> key{r.experiment, r.strategy};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    doc["groups"] = json::array();
    for (const auto& [exp, strat] : keys) {
        GroupStats g = group_by_sweep(rows, exp, strat);
        double ms = 0.0;
        std::size_t count = 0;
        for (const auto& r : rows)
            if (r.experiment == exp && r.strategy == strat) {
                ms += r.measured_ms;
                ++count;
            }
        json entry;
        entry["experiment"] = exp;
        entry["strategy"] = strat;
        entry["sweep_values"] = g.sweep;
        entry["quant_error_mean"] = g.mean_qe;
        entry["quant_error_std"] = g.std_qe;
        entry["utilization_mean"] = g.mean_util;
        entry["utilization_std"] = g.std_util;
        entry["perplexity_mean"] = g.mean_ppl;
        entry["perplexity_std"] = g.std_ppl;
        entry["w2_mean"] = g.mean_w2;
        entry["w2_std"] = g.std_w2;
        entry["total_wall_ms"] = ms;
        entry["rows"] = count;
        doc["groups"].push_back(entry);
    }
    svg::write_file(path, doc.dump(2) + "\n");
}

} // namespace wvq::harness
