#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "nsk/experiment.hpp"

using namespace nsk;
namespace fs = std::filesystem;

namespace {

json base_config() {
    return json::parse(R"({
        "grid": {"dim": 2, "n": 16, "period_over_2pi": 1},
        "params": {"mu_bar": 1.0, "lambda_bar": 1.0, "kappa_bar": 2.0, "rho_star": 1.0},
        "indices": {"p": 2.0, "q": 2.0, "j0": 0},
        "integrator": {"scheme": "etdrk2", "dt": 0.05, "t_end": 0.2},
        "initial": {"kind": "smooth-random", "amplitude": 1e-4},
        "seed": 7
    })");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("index gates: pass, warn, and hard errors") {
    // d = 3, p = 2, q = 2: all index conditions hold.
    json ok = base_config();
    ok["grid"]["dim"] = 3;
    ok["grid"]["n"] = 8;
    auto vr = validate_config(ok);
    REQUIRE(vr.ok());
    bool index_warn = false;
    for (const auto& w : vr.warnings)
        if (w.find("index condition") != std::string::npos) index_warn = true;
    CHECK_FALSE(index_warn);

    // d = 3, p = 3: p < d fails at the boundary -> warning, not error.
    json warn = ok;
    warn["indices"]["p"] = 3.0;
    warn["indices"]["q"] = 3.0;
    auto vr2 = validate_config(warn);
    REQUIRE(vr2.ok());
    bool found = false;
    for (const auto& w : vr2.warnings)
        if (w.find("p < d") != std::string::npos) found = true;
    CHECK(found);

    // kappa_bar < 0: hard error.
    json bad = base_config();
    bad["params"]["kappa_bar"] = -1.0;
    auto vr3 = validate_config(bad);
    CHECK_FALSE(vr3.ok());

    // Nonzero sound speed: hard error through the pressure gate.
    json snd = base_config();
    snd["params"]["pressure"] = {0.0, 1.0, 1.0};
    CHECK_FALSE(validate_config(snd).ok());
}

TEST_CASE("unknown keys are hard errors") {
    json cfg = base_config();
    cfg["params"]["viscosity"] = 1.0; // typo-like key
    auto vr = validate_config(cfg);
    REQUIRE_FALSE(vr.ok());
    CHECK(vr.errors.front().find("unknown key") != std::string::npos);

    json cfg2 = base_config();
    cfg2["grids"] = json::object();
    CHECK_FALSE(validate_config(cfg2).ok());
}

TEST_CASE("overrides") {
    json cfg = base_config();
    apply_override(cfg, "integrator.dt=0.01");
    CHECK(cfg["integrator"]["dt"].get<double>() == Catch::Approx(0.01));
    apply_override(cfg, "initial.kind=white");
    CHECK(cfg["initial"]["kind"] == "white");
    CHECK_THROWS_AS(apply_override(cfg, "no-equals-sign"), std::invalid_argument);
}

TEST_CASE("complex-regime nonlinear runs warn") {
    json cfg = base_config();
    cfg["params"]["mu_bar"] = 0.25;
    cfg["params"]["lambda_bar"] = 0.5; // nu = 1, kappa = 2: complex
    auto vr = validate_config(cfg, ExperimentKind::Simulate);
    REQUIRE(vr.ok());
    bool found = false;
    for (const auto& w : vr.warnings)
        if (w.find("complex spectral regime") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("classify experiment writes the regime table deterministically") {
    fs::path dir1 = fs::temp_directory_path() / "nsk_test_classify_1";
    fs::path dir2 = fs::temp_directory_path() / "nsk_test_classify_2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    json cfg = base_config();
    cfg["classify"] = {{"nu_min", 0.5}, {"nu_max", 4.0}, {"nu_count", 6},
                       {"kappa_min", 0.1}, {"kappa_max", 4.0}, {"kappa_count", 5}};
    for (const fs::path& d : {dir1, dir2}) {
        cfg["output"] = {{"dir", d.string()}};
        auto vr = validate_config(cfg, ExperimentKind::Classify);
        REQUIRE(vr.ok());
        run(*vr.config, vr.warnings);
    }
    std::string a = slurp(dir1 / "regimes.csv"), b = slurp(dir2 / "regimes.csv");
    REQUIRE_FALSE(a.empty());
    CHECK(a == b);

    // Three regimes appear and the boundary parabola separates them.
    CHECK(a.find("real-separated") != std::string::npos);
    CHECK(a.find("complex") != std::string::npos);

    // Manifest lists the output with its checksum.
    json manifest = json::parse(slurp(dir1 / "manifest.json"));
    REQUIRE(manifest["outputs"].size() >= 1);
    CHECK(manifest["outputs"][0]["path"] == "regimes.csv");
    CHECK(manifest["outputs"][0]["checksum"].get<std::string>().size() == 16);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("simulate experiment end to end with summary") {
    fs::path dir = fs::temp_directory_path() / "nsk_test_sim";
    fs::remove_all(dir);
    json cfg = base_config();
    cfg["output"] = {{"dir", dir.string()}, {"snapshots", "csv"}};
    auto vr = validate_config(cfg, ExperimentKind::Simulate);
    REQUIRE(vr.ok());
    json manifest = run(*vr.config, vr.warnings);
    CHECK(manifest["guard_events"].empty());
    CHECK(fs::exists(dir / "norms.csv"));
    CHECK(fs::exists(dir / "diagnostics.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "snapshot_000000.csv"));
    json summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary["completed"].get<bool>());
    CHECK(summary["epq_norm"].get<double>() > 0.0);
    fs::remove_all(dir);
}

TEST_CASE("zero data simulate produces zero trajectory outputs") {
    fs::path dir = fs::temp_directory_path() / "nsk_test_zero";
    fs::remove_all(dir);
    json cfg = base_config();
    cfg["initial"]["kind"] = "zero";
    cfg["output"] = {{"dir", dir.string()}};
    auto vr = validate_config(cfg, ExperimentKind::Simulate);
    REQUIRE(vr.ok());
    json manifest = run(*vr.config, vr.warnings);
    json summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary["epq_norm"].get<double>() == 0.0);
    CHECK(manifest["guard_events"].empty());
    fs::remove_all(dir);
}

TEST_CASE("sweep resumes without duplicating rows") {
    fs::path dir = fs::temp_directory_path() / "nsk_test_sweep";
    fs::remove_all(dir);
    json cfg = base_config();
    cfg["integrator"]["t_end"] = 0.1;
    cfg["sweep"] = {{"path", "initial.amplitude"},
                    {"values", {1e-3, 1e-4, 1e-5}},
                    {"kind", "simulate"}};
    cfg["output"] = {{"dir", dir.string()}};

    auto vr = validate_config(cfg, ExperimentKind::Sweep);
    REQUIRE(vr.ok());
    run(*vr.config, vr.warnings);
    auto rows1 = csv_first_column((dir / "sweep.csv").string());
    CHECK(rows1 == std::vector<std::string>{"0", "1", "2"});

    // Re-run: nothing recomputed, nothing duplicated.
    run(*vr.config, vr.warnings);
    auto rows2 = csv_first_column((dir / "sweep.csv").string());
    CHECK(rows2 == rows1);

    // Drop one point and its row: only that point is recomputed.
    fs::remove_all(dir / "point_1");
    std::string all = slurp(dir / "sweep.csv");
    std::string filtered;
    std::istringstream lines(all);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("1,", 0) != 0) filtered += line + "\n";
    std::ofstream(dir / "sweep.csv") << filtered;
    run(*vr.config, vr.warnings);
    auto rows3 = csv_first_column((dir / "sweep.csv").string());
    CHECK(rows3 == std::vector<std::string>{"0", "2", "1"});
    fs::remove_all(dir);
}

TEST_CASE("probe experiment writes reports") {
    fs::path dir = fs::temp_directory_path() / "nsk_test_probes";
    fs::remove_all(dir);
    json cfg = base_config();
    cfg["probes"] = {{"samples", 4}, {"n", 16}, {"dim", 2}};
    cfg["output"] = {{"dir", dir.string()}};
    auto vr = validate_config(cfg, ExperimentKind::ProbeEstimates);
    REQUIRE(vr.ok());
    run(*vr.config, vr.warnings);
    json reports = json::parse(slurp(dir / "probes.json"));
    CHECK(reports.size() >= 10);
    for (const auto& r : reports) {
        CHECK(std::isfinite(r["fitted_constant"].get<double>()));
        CHECK(r["n_samples"].get<int>() == 4);
    }
    fs::remove_all(dir);
}
