#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmct/config.hpp"
#include "qmct/errors.hpp"
#include "qmct/first_passage.hpp"
#include "qmct/io.hpp"
#include "qmct/models.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace qmct;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cmd(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
#ifdef WEXITSTATUS
    return WEXITSTATUS(status);
#else
    return status;
#endif
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() /
                   ("qmct_cli_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("experiment kind registry") {
    const auto& kinds = experiment_kinds();
    CHECK(kinds.size() == 10);
    for (const char* k :
         {"ed-gap", "wkb", "pimc-spin", "pigs-spin", "pimc-well", "pimd-well",
          "temp-scan", "size-scan", "fit", "compare"})
        CHECK(is_experiment_kind(k));
    CHECK_FALSE(is_experiment_kind("nonsense"));
}

TEST_CASE("config text round trips through the schema") {
    ExperimentConfig cfg;
    cfg.kind = "pimc-spin";
    cfg.topology = "fully-connected";
    cfg.gamma = 0.65;
    cfg.h = 0.01;
    cfg.spatial_periodic = false;
    cfg.lambda = 0.15;
    cfg.mass = 0.5;
    cfg.engine = "pimc-ct";
    cfg.P = 96;
    cfg.beta = 12.5;
    cfg.flavor = "wolff";
    cfg.slice_threshold = 0.4;
    cfg.stop_fractions = {0.02, 0.25};
    cfg.pimc_step = 0.3;
    cfg.langevin.delta = 0.0125;
    cfg.langevin.gamma_friction = 8.0;
    cfg.start_sign = -1;
    cfg.L_values = {12, 14, 16};
    cfg.betas = {1.0, 2.0};
    cfg.lambdas = {0.1, 0.2};
    cfg.window_lo = 12;
    cfg.window_hi = 16;
    cfg.arrhenius_lo = 0.6;
    cfg.arrhenius_hi = 1.8;
    cfg.n_runs = 321;
    cfg.budget = 123456789;
    cfg.n_boot = 333;
    cfg.threads = 2;
    cfg.snapshot_bins = 64;
    cfg.master_seed = 0xDEADBEEFull;
    cfg.out = "some/dir";
    cfg.records_file = "r.csv";
    cfg.qmc_b = 0.54;
    cfg.qmc_err = 0.004;
    cfg.ed_mode = "linear";

    auto text = config_to_json_text(cfg, "test 0.0.0");
    auto back = config_from_json_text(text);

    CHECK(back.kind == cfg.kind);
    CHECK(back.topology == cfg.topology);
    CHECK(back.gamma == cfg.gamma);
    CHECK(back.h == cfg.h);
    CHECK(back.spatial_periodic == cfg.spatial_periodic);
    CHECK(back.lambda == cfg.lambda);
    CHECK(back.mass == cfg.mass);
    CHECK(back.engine == cfg.engine);
    CHECK(back.P == cfg.P);
    CHECK(back.beta == cfg.beta);
    CHECK(back.flavor == cfg.flavor);
    CHECK(back.slice_threshold == cfg.slice_threshold);
    CHECK(back.stop_fractions == cfg.stop_fractions);
    CHECK(back.pimc_step == cfg.pimc_step);
    CHECK(back.langevin.delta == cfg.langevin.delta);
    CHECK(back.langevin.gamma_friction == cfg.langevin.gamma_friction);
    CHECK(back.start_sign == cfg.start_sign);
    CHECK(back.L_values == cfg.L_values);
    CHECK(back.betas == cfg.betas);
    CHECK(back.lambdas == cfg.lambdas);
    CHECK(back.window_lo == cfg.window_lo);
    CHECK(back.window_hi == cfg.window_hi);
    CHECK(back.arrhenius_lo == cfg.arrhenius_lo);
    CHECK(back.arrhenius_hi == cfg.arrhenius_hi);
    CHECK(back.n_runs == cfg.n_runs);
    CHECK(back.budget == cfg.budget);
    CHECK(back.n_boot == cfg.n_boot);
    CHECK(back.threads == cfg.threads);
    CHECK(back.snapshot_bins == cfg.snapshot_bins);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.out == cfg.out);
    CHECK(back.records_file == cfg.records_file);
    CHECK(back.qmc_b == cfg.qmc_b);
    CHECK(back.qmc_err == cfg.qmc_err);
    CHECK(back.ed_mode == cfg.ed_mode);
}

TEST_CASE("unknown config keys are rejected by name") {
    try {
        config_from_json_text(R"({"kind":"wkb","gamm":0.5})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("gamm") != std::string::npos);
    }
    CHECK_THROWS_AS(config_from_json_text("not json at all"), ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"beta":"soon"})"), ConfigError);
}

TEST_CASE("flag-style overrides reuse the schema, including nested keys") {
    ExperimentConfig cfg;
    apply_override(cfg, "beta", "12.5");
    CHECK(cfg.beta == 12.5);
    apply_override(cfg, "L", "\"12..15\"");
    CHECK(cfg.L_values == std::vector<int>{12, 13, 14, 15});
    apply_override(cfg, "L", "[4,6]");
    CHECK(cfg.L_values == std::vector<int>{4, 6});
    apply_override(cfg, "flavor", "wolff");
    CHECK(cfg.flavor == "wolff");
    apply_override(cfg, "langevin.delta", "0.0025");
    CHECK(cfg.langevin.delta == 0.0025);
    CHECK(cfg.langevin.gamma_friction == 10.0); // untouched sibling
    apply_override(cfg, "stop_fractions", "[0.02,0.25,1.0]");
    CHECK(cfg.stop_fractions.size() == 3);
    CHECK_THROWS_AS(apply_override(cfg, "nonsense", "1"), ConfigError);
}

TEST_CASE("size and double list grammar") {
    CHECK(parse_int_list("14") == std::vector<int>{14});
    CHECK(parse_int_list("12,14,16") == std::vector<int>{12, 14, 16});
    CHECK(parse_int_list("12..15") == std::vector<int>{12, 13, 14, 15});
    CHECK_THROWS_AS(parse_int_list("16..12"), ConfigError);
    CHECK_THROWS_AS(parse_int_list(""), ConfigError);
    CHECK(parse_double_list("0.5") == std::vector<double>{0.5});
    CHECK(parse_double_list("0.5,0.75,1") ==
          std::vector<double>{0.5, 0.75, 1.0});
    CHECK_THROWS_AS(parse_double_list(""), ConfigError);
}

TEST_CASE("model and engine construction from config") {
    ExperimentConfig cfg;
    cfg.topology = "chain";
    cfg.gamma = 0.8;
    cfg.spatial_periodic = false;
    auto chain = model_from_config(cfg, 10);
    CHECK(chain.topology == Topology::Chain);
    CHECK(chain.L == 10);
    CHECK(chain.gamma == 0.8);
    CHECK_FALSE(chain.spatial_periodic);

    cfg.topology = "fully-connected";
    auto fc = model_from_config(cfg, 8);
    CHECK(fc.topology == Topology::FullyConnected);

    cfg.topology = "p-spin";
    cfg.p = 4;
    auto ps = model_from_config(cfg, 8);
    CHECK(ps.topology == Topology::MeanFieldPSpin);
    // g(m) = m^p/2 + h m
    CHECK(ps.g.value(0.5) == doctest::Approx(0.5 * 0.0625));
    cfg.p = 2;
    CHECK_THROWS_AS(model_from_config(cfg, 8), ConfigError);
    cfg.topology = "hypercube";
    CHECK_THROWS_AS(model_from_config(cfg, 8), ConfigError);

    ExperimentConfig fpc;
    fpc.kind = "pigs-spin";
    fpc.L_values = {6};
    fpc.beta = 24;
    auto fp = first_passage_from_config(fpc);
    CHECK(fp.engine == Engine::Pigs); // kind picks the default engine
    CHECK(fp.model.L == 6);
    fpc.engine = "pimc-discrete";
    CHECK_THROWS_AS(first_passage_from_config(fpc), ConfigError);

    ExperimentConfig wellc;
    wellc.kind = "pimd-well";
    wellc.lambda = 0.15;
    auto wp = first_passage_from_config(wellc);
    CHECK(wp.engine == Engine::PimdWell);
    CHECK(wp.well.lambda == 0.15);
}

TEST_CASE("config validation rejects out-of-range scalars") {
    ExperimentConfig cfg;
    cfg.kind = "pimc-spin";
    validate_config(cfg); // defaults are fine
    cfg.beta = -1;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg.beta = 8;
    cfg.n_runs = 0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg.n_runs = 10;
    cfg.kind = "made-up";
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("records CSV round trips bit-exactly") {
    auto dir = fresh_dir("records");
    std::vector<FirstPassageRecord> recs;
    FirstPassageRecord r;
    r.engine = Engine::PimcCt;
    r.topology = "chain";
    r.L = 14;
    r.gamma = 0.7000000000000123; // full-precision payloads must survive
    r.beta = 24.0;
    r.P = 0;
    r.seed = 0xFEEDFACEDEADBEEFull;
    r.sweeps_to_reversal = 123456789012345ll;
    r.censored = false;
    r.threshold = 0.25;
    recs.push_back(r);
    r.engine = Engine::PimdWell;
    r.topology = "well";
    r.L = 0;
    r.gamma = 1.0 / 3.0;
    r.censored = true;
    r.threshold = 0.125;
    recs.push_back(r);

    const auto path = (dir / "records.csv").string();
    write_records_csv(path, recs);
    auto back = read_records_csv(path);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].engine == recs[i].engine);
        CHECK(back[i].topology == recs[i].topology);
        CHECK(back[i].L == recs[i].L);
        CHECK(back[i].gamma == recs[i].gamma); // exact, not approximate
        CHECK(back[i].beta == recs[i].beta);
        CHECK(back[i].P == recs[i].P);
        CHECK(back[i].seed == recs[i].seed);
        CHECK(back[i].sweeps_to_reversal == recs[i].sweeps_to_reversal);
        CHECK(back[i].censored == recs[i].censored);
        CHECK(back[i].threshold == recs[i].threshold);
    }

    // the header carries the documented column contract
    auto text = slurp(path);
    CHECK(text.rfind("engine,topology,L,gamma,beta,P,seed,sweeps_to_reversal,"
                     "censored,threshold",
                     0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("full-precision formatting survives text round trips") {
    for (double v : {1.0 / 3.0, 0.1, 6.62607015e-34, 1.7976931348623157e308}) {
        CHECK(std::stod(fmt_full(v)) == v);
    }
}

#ifdef QMCT_CLI_BIN

TEST_CASE("cli end to end: list, describe, run, manifest round trip") {
    const std::string bin = QMCT_CLI_BIN;
    auto dir = fresh_dir("e2e");

    SUBCASE("list-experiments names all ten kinds") {
        auto out = dir / "list.txt";
        REQUIRE(run_cmd(bin + " list-experiments > " + out.string()) == 0);
        auto text = slurp(out);
        for (const auto& k : experiment_kinds())
            CHECK(text.find(k) != std::string::npos);
    }

    SUBCASE("describe every kind") {
        for (const auto& k : experiment_kinds())
            CHECK(run_cmd(bin + " describe " + k + " > /dev/null") == 0);
        CHECK(run_cmd(bin + " describe bogus 2> /dev/null") == 2);
    }

    SUBCASE("run writes the four artifact files") {
        auto exp = dir / "gap";
        REQUIRE(run_cmd(bin + " run ed-gap --gamma 0.7 --L 4,6,8 --out " +
                        exp.string() + " > /dev/null") == 0);
        for (const char* f : {"manifest", "records.csv", "summary.csv", "fits.csv"})
            CHECK(fs::exists(exp / f));
        // the fits file carries the gap-decay slope row
        CHECK(slurp(exp / "fits.csv").find("log_inv_delta_vs_L") !=
              std::string::npos);
    }

    SUBCASE("manifest re-runs to bit-identical records") {
        auto first = dir / "fp1";
        REQUIRE(run_cmd(bin +
                        " run pimc-spin --L 4 --gamma 1.5 --beta 2 --P 8"
                        " --n-runs 6 --budget 100000 --seed 5 --threads 1"
                        " --out " +
                        first.string() + " > /dev/null") == 0);
        auto second = dir / "fp2";
        REQUIRE(run_cmd(bin + " run " + (first / "manifest").string() +
                        " --out " + second.string() + " > /dev/null") == 0);
        CHECK(slurp(first / "records.csv") == slurp(second / "records.csv"));
    }

    SUBCASE("output root env var prefixes relative output dirs") {
        auto root = dir / "rooted";
        REQUIRE(run_cmd("QMCT_OUTPUT_ROOT=" + root.string() + " " + bin +
                        " run wkb --gamma 0.5 --out probe > /dev/null") == 0);
        CHECK(fs::exists(root / "probe" / "manifest"));
        CHECK(fs::exists(root / "probe" / "summary.csv"));
    }

    SUBCASE("config errors exit with code 2 and machine-readable stderr") {
        auto err = dir / "err.txt";
        CHECK(run_cmd(bin + " run no-such-kind 2> " + err.string() +
                      " > /dev/null") == 2);
        auto text = slurp(err);
        CHECK(text.find("\"error\"") != std::string::npos);
        CHECK(text.find("config") != std::string::npos);
    }

    fs::remove_all(dir);
}

#endif // QMCT_CLI_BIN
