#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "xnse/cases.hpp"
#include "xnse/output.hpp"

using namespace xnse;

TEST_CASE("config parsing with case defaults and overrides") {
    const char* text = R"(
# rising bubble, first benchmark configuration
[case]
name = rising-bubble-tc1
degree = 2
dt = auto

[mesh]
resolution = 20

[solver]
imax = 12
verbose = false
)";
    CaseConfig cfg = CaseConfig::parse(text);
    CHECK(cfg.name == "rising-bubble-tc1");
    CHECK(cfg.resolution == 20);
    CHECK(cfg.dt < 0.0);
    CHECK(cfg.physics.rhoA == 100.0);
    CHECK(cfg.physics.rhoB == 1000.0);
    CHECK(cfg.physics.muA == 1.0);
    CHECK(cfg.physics.muB == 10.0);
    CHECK(cfg.physics.sigma == 24.5);
    CHECK(cfg.physics.gravity.y() == doctest::Approx(-0.98));
    CHECK(cfg.solver.imax == 12);

    CaseConfig ovr = CaseConfig::parse(
        "[case]\nname = capillary-wave\n[physics]\nmu_a = 1e-3\nmu_b = 1e-3\nsigma = 3e-3\n");
    CHECK(ovr.physics.muA == 1e-3);
    CHECK(ovr.physics.sigma == 3e-3);
    CHECK(ovr.physics.rhoA == 1e-3);  // default kept
}

TEST_CASE("config rejects unknown keys, sections and cases") {
    CHECK_THROWS(CaseConfig::parse("[case]\nname = static-droplet\nbogus = 1\n"));
    CHECK_THROWS(CaseConfig::parse("[case]\nname = static-droplet\n[extra]\nx = 1\n"));
    CHECK_THROWS(CaseConfig::parse("[case]\nname = no-such-case\n"));
    CHECK_THROWS(CaseConfig::parse("[case]\nname = static-droplet\ncoupling = sideways\n"));
    CHECK_THROWS(CaseConfig::parse("[mesh]\nresolution = 10\n"));  // missing name
    CHECK_THROWS(CaseConfig::parse("[case]\nname = static-droplet\nname = again\n"));
}

TEST_CASE("automatic step count reproduces the published rising-bubble count") {
    PhysicalParams par;
    par.rhoA = 100;
    par.rhoB = 1000;
    par.sigma = 24.5;
    double dts = capillaryDt(par, 1.0 / 20.0, 2);
    CHECK(autoStepCount(3.0, dts) == 600);
    // finer meshes need more steps, still multiples of 100
    CHECK(autoStepCount(3.0, capillaryDt(par, 1.0 / 40.0, 2)) % 100 == 0);
    CHECK(autoStepCount(3.0, capillaryDt(par, 1.0 / 40.0, 2)) > 600);
}

TEST_CASE("csv round trip keeps full precision") {
    std::string path = (std::filesystem::temp_directory_path() / "bench_roundtrip.csv").string();
    std::vector<std::vector<double>> rows = {{0.0, 1.0 / 3.0, -2.5e-17},
                                             {0.1, 9.87654321098765432e8, 3.0}};
    writeCsv(path, {"t", "a", "b"}, rows);
    CsvTable t = readCsv(path);
    REQUIRE(t.header.size() == 3);
    CHECK(t.column("a") == 1);
    CHECK(t.column("missing") == -1);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == 1.0 / 3.0);
    CHECK(t.rows[1][1] == 9.87654321098765432e8);
    CHECK(t.rows[0][2] == -2.5e-17);
    std::filesystem::remove(path);
}

TEST_CASE("time series column extraction") {
    TimeSeries ts;
    TimeSeries::Record r;
    r.t = 0.5;
    r.yc = 1.25;
    ts.records.push_back(r);
    Series s = ts.extract("y_c");
    CHECK(s.t[0] == 0.5);
    CHECK(s.q[0] == 1.25);
    CHECK_THROWS(ts.extract("nope"));
    CHECK(TimeSeries::columns().size() == ts.rows()[0].size());
}

TEST_CASE("manufactured single-phase solution stays close to the exact field") {
    CaseConfig cfg = CaseConfig::parse(
        "[case]\nname = single-phase-mms\ndt = 0.02\n[mesh]\nresolution = 8\n");
    cfg.outputDir.clear();
    CaseResult res = runCase(cfg, 5);
    REQUIRE(res.series.records.size() == 6);
    double e0 = res.series.records.front().aux;
    double eN = res.series.records.back().aux;
    CHECK(e0 < 2e-3);  // projection error of the initial field
    CHECK(eN < 1e-2);  // stays near the manufactured solution
}

TEST_CASE("static droplet short run writes outputs and conserves area") {
    std::string dir = (std::filesystem::temp_directory_path() / "bench_droplet").string();
    std::filesystem::remove_all(dir);
    CaseConfig cfg = CaseConfig::parse("[case]\nname = static-droplet\n[mesh]\nresolution = 8\n");
    cfg.outputDir = dir;
    cfg.vtkEvery = 2;
    CaseResult res = runCase(cfg, 2);
    CHECK(res.dt == 0.01);
    const auto& rec = res.series.records.back();
    CHECK(rec.areaA == doctest::Approx(M_PI * 0.25 * 0.25).epsilon(0.01));
    CHECK(rec.circ <= 1.0 + 1e-6);
    CHECK(rec.circ > 0.98);
    CHECK(std::filesystem::exists(dir + "/static-droplet_h8.csv"));
    CHECK(std::filesystem::exists(dir + "/static-droplet_h8_0.vtk"));
    CHECK(std::filesystem::exists(dir + "/static-droplet_h8_2.vtk"));
    CsvTable t = readCsv(dir + "/static-droplet_h8.csv");
    CHECK(t.header == TimeSeries::columns());
    std::filesystem::remove_all(dir);
}

TEST_CASE("capillary wave setup uses the restricted automatic time step") {
    CaseConfig cfg = CaseConfig::parse("[case]\nname = capillary-wave\n[mesh]\nresolution = 8\n");
    cfg.outputDir.clear();
    CaseResult res = runCase(cfg, 1);
    CHECK(res.nts == 600);
    double dts = capillaryDt(cfg.physics, res.mesh->h(), cfg.degree);
    CHECK(res.dt < dts);
    CHECK(res.series.records[0].aux == doctest::Approx(0.01).epsilon(1e-3));
    // one transported step keeps the crest near its initial height
    CHECK(std::abs(res.series.records[1].aux) < 0.02);
}
