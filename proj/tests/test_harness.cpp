#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "wvq/errors.hpp"
#include "wvq/harness.hpp"
#include "wvq/svg.hpp"

using namespace wvq;
using namespace wvq::harness;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("wvq_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

int run_tool(const std::string& args) {
    std::string cmd = std::string(WVQ_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

ExperimentConfig tiny_disks(const fs::path& out) {
    ExperimentConfig cfg = default_config(Experiment::Disks);
    cfg.codebook_size = 50;
    cfg.feature_count = 500;
    cfg.repeats = 2;
    cfg.disk_cases = {{1.5, 1.0}, {0.0, 0.5}};
    cfg.output_dir = out.string();
    return cfg;
}

} // namespace

TEST_CASE("default configs carry the study dimensions") {
    ExperimentConfig g = default_config(Experiment::GaussianSweep);
    CHECK(g.codebook_size == 1024);
    CHECK(g.feature_count == 200000);
    CHECK(g.dim == 32);
    CHECK(g.repeats == 5);
    CHECK(g.base_seed.value == 42);

    ExperimentConfig v = default_config(Experiment::VarianceTable);
    CHECK(v.codebook_size == 8192);
    CHECK(v.dim == 8);

    ExperimentConfig a = default_config(Experiment::Atomic);
    CHECK(a.codebook_size == 2048);
    CHECK(a.trainer.steps == 200);
    CHECK(a.trainer.batch_size == 5000);

    ExperimentConfig d = default_config(Experiment::Disks);
    CHECK(d.disk_cases.size() == 8);
}

TEST_CASE("experiment_from_name round trip") {
    CHECK(experiment_from_name("disks") == Experiment::Disks);
    CHECK(experiment_from_name("gaussian-sweep") == Experiment::GaussianSweep);
    CHECK(experiment_from_name("uniform-sweep") == Experiment::UniformSweep);
    CHECK(experiment_from_name("variance-table") == Experiment::VarianceTable);
    CHECK(experiment_from_name("atomic") == Experiment::Atomic);
    CHECK(experiment_from_name("lloyd-check") == Experiment::LloydCheck);
    CHECK_THROWS_AS(experiment_from_name("nope"), ConfigError);
}

TEST_CASE("load_config applies overrides and rejects junk") {
    TempDir tmp("cfg");
    fs::path good = tmp.path / "good.json";
    spit(good, R"({"K": 99, "seed": 7, "shift_values": [0.0, 1.0],
                   "trainer": {"gamma": 0.25, "steps": 11}})");
    ExperimentConfig cfg = load_config(Experiment::GaussianSweep, good.string());
    CHECK(cfg.codebook_size == 99);
    CHECK(cfg.base_seed.value == 7);
    CHECK(cfg.shift_values == std::vector<double>{0.0, 1.0});
    CHECK(cfg.trainer.gamma == 0.25);
    CHECK(cfg.trainer.steps == 11);
    CHECK(cfg.feature_count == 200000); // untouched default

    fs::path unknown = tmp.path / "unknown.json";
    spit(unknown, R"({"codebook": 12})");
    CHECK_THROWS_AS(load_config(Experiment::GaussianSweep, unknown.string()), ConfigError);

    fs::path unknown_t = tmp.path / "unknown_t.json";
    spit(unknown_t, R"({"trainer": {"momentum": 0.9}})");
    CHECK_THROWS_AS(load_config(Experiment::Atomic, unknown_t.string()), ConfigError);

    fs::path broken = tmp.path / "broken.json";
    spit(broken, "{not json");
    CHECK_THROWS_AS(load_config(Experiment::Disks, broken.string()), ConfigError);

    fs::path bad_val = tmp.path / "bad_val.json";
    spit(bad_val, R"({"K": 0})");
    CHECK_THROWS_AS(load_config(Experiment::Disks, bad_val.string()), ConfigError);

    CHECK_THROWS_AS(load_config(Experiment::Disks, (tmp.path / "missing.json").string()),
                    ConfigError);
}

TEST_CASE("emit_csv writes the fixed header and zeroed wall_ms") {
    TempDir tmp("csv");
    ResultRow row;
    row.experiment = "gaussian_mean";
    row.sweep_value = 0.5;
    row.repeat = 3;
    row.seed = 1234;
    row.quant_error = 1.25;
    row.utilization = 0.5;
    row.perplexity = 10.0;
    row.w2 = 0.125;
    row.measured_ms = 987.0; // must not leak into the CSV
    fs::path p = tmp.path / "results.csv";
    emit_csv({row}, p.string());

    std::string text = slurp(p);
    CHECK(text ==
          "experiment,strategy,sweep_value,repeat,seed,quant_error,utilization,perplexity,w2,wall_ms\n"
          "gaussian_mean,-,0.5,3,1234,1.25,0.5,10,0.125,0\n");
}

TEST_CASE("disks runner: row shape, output files, determinism") {
    TempDir a("disks_a"), b("disks_b");
    RunOutput ra = run_experiment(tiny_disks(a.path));
    CHECK(ra.rows.size() == 4); // 2 cases x 2 repeats
    CHECK_FALSE(ra.diverged);
    for (const auto& r : ra.rows) {
        CHECK(r.experiment == "disks");
        CHECK(r.strategy == "-");
        CHECK(r.utilization > 0.0);
        CHECK(r.perplexity >= 1.0);
    }
    CHECK(fs::exists(a.path / "results.csv"));
    CHECK(fs::exists(a.path / "summary.json"));
    CHECK(fs::exists(a.path / "disks_case0.svg"));
    CHECK(fs::exists(a.path / "disks_case1.svg"));

    run_experiment(tiny_disks(b.path));
    CHECK(slurp(a.path / "results.csv") == slurp(b.path / "results.csv"));
    CHECK(slurp(a.path / "disks_case0.svg") == slurp(b.path / "disks_case0.svg"));

    ExperimentConfig other = tiny_disks(b.path);
    other.base_seed.value = 43;
    run_experiment(other);
    CHECK(slurp(a.path / "results.csv") != slurp(b.path / "results.csv"));
}

TEST_CASE("offset disk separates from the matched disk") {
    TempDir tmp("disks_m");
    RunOutput out = run_experiment(tiny_disks(tmp.path));
    // case 0 is offset by 1.5 radii, case 1 is concentric: the offset case
    // must quantize worse and waste more codes
    double qe0 = 0.0, qe1 = 0.0, u0 = 0.0, u1 = 0.0;
    for (const auto& r : out.rows) {
        if (r.sweep_value == 0.0) {
            qe0 += r.quant_error;
            u0 += r.utilization;
        } else {
            qe1 += r.quant_error;
            u1 += r.utilization;
        }
    }
    CHECK(qe0 > qe1);
    CHECK(u0 < u1);
}

TEST_CASE("lloyd runner emits the two check rows") {
    TempDir tmp("lloyd");
    ExperimentConfig cfg = default_config(Experiment::LloydCheck);
    cfg.lloyd_centers = 64;
    cfg.lloyd_bins = 8;
    cfg.output_dir = tmp.path.string();
    RunOutput out = run_experiment(cfg);
    REQUIRE(out.rows.size() == 2);
    CHECK(out.rows[0].experiment == "lloyd_gaussian");
    CHECK(out.rows[0].w2 > 0.9); // density-law correlation
    CHECK(out.rows[1].experiment == "lloyd_uniform");
    CHECK(out.rows[1].quant_error < 1e-6); // lattice deviation
    CHECK(fs::exists(tmp.path / "lloyd_density.svg"));
}

TEST_CASE("atomic runner covers every strategy and shift") {
    TempDir tmp("atomic");
    ExperimentConfig cfg = default_config(Experiment::Atomic);
    cfg.codebook_size = 32;
    cfg.dim = 2;
    cfg.atomic_shifts = {0.0, 2.0};
    cfg.trainer.steps = 3;
    cfg.trainer.batch_size = 200;
    cfg.trainer.eval_batch_size = 400;
    cfg.output_dir = tmp.path.string();
    RunOutput out = run_experiment(cfg);
    REQUIRE(out.rows.size() == 10); // 5 strategies x 2 shifts

    std::vector<std::string> seen;
    for (const auto& r : out.rows) {
        CHECK(r.experiment == "atomic");
        seen.push_back(r.strategy);
    }
    for (const char* s : {"vanilla", "ema", "online", "linear", "wasserstein"})
        CHECK(std::count(seen.begin(), seen.end(), s) == 2);
    CHECK(fs::exists(tmp.path / "atomic_w2.svg"));
}

TEST_CASE("write_file reports unreachable paths") {
    CHECK_THROWS_AS(svg::write_file("/nonexistent_dir_wvq/x.svg", "hi"), ReportWriteError);
}

TEST_CASE("cli: exit codes and byte-identical reruns") {
    TempDir tmp("cli");
    fs::path cfg = tmp.path / "cfg.json";
    spit(cfg, R"({"K": 50, "N": 500, "repeats": 1,
                  "disk_cases": [{"offset": 0.0, "radius": 1.0}]})");

    fs::path out1 = tmp.path / "r1";
    fs::path out2 = tmp.path / "r2";
    CHECK(run_tool("disks --config " + cfg.string() + " --out " + out1.string()) == 0);
    CHECK(run_tool("disks --config " + cfg.string() + " --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "results.csv") == slurp(out2 / "results.csv"));
    // summary.json carries real wall-clock timings, so only the CSV is
    // expected to be byte-identical

    fs::path out3 = tmp.path / "r3";
    CHECK(run_tool("disks --config " + cfg.string() + " --seed 7 --out " + out3.string()) == 0);
    CHECK(slurp(out1 / "results.csv") != slurp(out3 / "results.csv"));

    fs::path bad = tmp.path / "bad.json";
    spit(bad, R"({"frobnicate": 1})");
    CHECK(run_tool("disks --config " + bad.string() + " --out " + (tmp.path / "r4").string()) == 2);
    CHECK(run_tool("disks --config " + (tmp.path / "nope.json").string() + " --out " +
                   (tmp.path / "r5").string()) == 2);
}
