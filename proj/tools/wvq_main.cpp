#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "wvq/errors.hpp"
#include "wvq/harness.hpp"

namespace {

// exit codes: 0 success, 2 config error, 3 diverged-training present, 4 I/O error
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDiverged = 3;
constexpr int kIoError = 4;

struct SubcommandArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool full_scale = false;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wvq: vector quantization distribution-matching experiments"};
    app.require_subcommand(1);

    const char* names[] = {"disks", "gaussian-sweep", "uniform-sweep", "variance-table",
                           "atomic", "lloyd-check"};
    SubcommandArgs args;
    for (const char* name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "JSON config file (defaults when omitted)");
        sub->add_option("--out", args.out_dir, "output directory")->required();
        sub->add_option("--seed", args.seed, "base seed override")
            ->each([&](const std::string&) { args.seed_set = true; });
        sub->add_flag("--full-scale", args.full_scale, "full-size study configuration (atomic)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        std::string sub_name = app.get_subcommands().front()->get_name();
        wvq::harness::Experiment exp = wvq::harness::experiment_from_name(sub_name);
        wvq::harness::ExperimentConfig cfg =
            args.config_path.empty() ? wvq::harness::default_config(exp)
                                     : wvq::harness::load_config(exp, args.config_path);
        cfg.output_dir = args.out_dir;
        if (args.seed_set) cfg.base_seed.value = args.seed;
        if (args.full_scale) cfg.full_scale = true;

        wvq::harness::RunOutput out = wvq::harness::run_experiment(cfg);
        std::printf("%zu result rows written to %s\n", out.rows.size(), args.out_dir.c_str());
        if (out.diverged) {
            std::fprintf(stderr, "warning: diverged training rows present\n");
            return kDiverged;
        }
        return kOk;
    } catch (const wvq::ConfigError& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return kConfigError;
    } catch (const wvq::InvalidSpec& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return kConfigError;
    } catch (const wvq::ReportWriteError& ex) {
        std::fprintf(stderr, "i/o error: %s\n", ex.what());
        return kIoError;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
}
