#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "xnse/cases.hpp"
#include "xnse/norms.hpp"
#include "xnse/output.hpp"
#include "xnse/prosperetti.hpp"

using namespace xnse;

namespace {

Series seriesFromCsv(const std::string& path, const std::string& column) {
    CsvTable t = readCsv(path);
    int ct = t.column("t"), cq = t.column(column);
    if (ct < 0) throw std::runtime_error(path + ": no t column");
    if (cq < 0) throw std::runtime_error(path + ": no column " + column);
    Series s;
    for (const auto& row : t.rows) {
        s.t.push_back(row[ct]);
        s.q.push_back(row[cq]);
    }
    return s;
}

int runOne(const CaseConfig& cfg) {
    CaseResult res = runCase(cfg);
    const auto& last = res.series.records.back();
    std::printf("case %s  1/h=%d  k=%d  dt=%.6g  steps=%d\n", cfg.name.c_str(), cfg.resolution,
                cfg.degree, res.dt, res.nts);
    std::printf("final t=%.6g  y_c=%.8g  V_c=%.8g  circularity=%.8g  area=%.8g  aux=%.8g\n",
                last.t, last.yc, last.vc, last.circ, last.areaA, last.aux);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-phase sharp-interface flow benchmarks"};
    app.require_subcommand(1);

    std::string configPath, column = "y_c";
    std::vector<int> meshes;
    auto* run = app.add_subcommand("run", "run one benchmark case");
    run->add_option("config", configPath, "config file")->required();

    auto* sweep = app.add_subcommand("sweep", "mesh refinement study");
    sweep->add_option("config", configPath, "config file")->required();
    sweep->add_option("--mesh", meshes, "resolutions, finest last (reference)")
        ->delimiter(',')
        ->required();
    sweep->add_option("--column", column, "series column compared (default y_c)");

    std::vector<std::string> csvFiles;
    std::vector<double> hs;
    auto* comp = app.add_subcommand("compare", "error norms of csv series against a reference");
    comp->add_option("files", csvFiles, "csv files, reference last")->required()->expected(-2);
    comp->add_option("--column", column, "series column (default y_c)");
    comp->add_option("--h", hs, "mesh size per non-reference file (for the ROC table)")
        ->delimiter(',');

    auto* oracle = app.add_subcommand("oracle", "reference solutions");
    double orho = 1e-3, omu = 1e-4, osigma = 3e-2, owave = 1.0, oa0 = 0.01, oT = -1.0;
    int osamples = 1000;
    std::string oout = "prosperetti.csv";
    auto* prosp = oracle->add_subcommand("prosperetti", "capillary wave amplitude history");
    prosp->add_option("--rho", orho, "density (both phases)");
    prosp->add_option("--mu", omu, "dynamic viscosity (both phases)");
    prosp->add_option("--sigma", osigma, "surface tension");
    prosp->add_option("--wavelength", owave, "wavelength");
    prosp->add_option("--a0", oa0, "initial amplitude");
    prosp->add_option("--end", oT, "end time (default 25/omega0)");
    prosp->add_option("--samples", osamples, "number of samples");
    prosp->add_option("--out", oout, "output csv");
    oracle->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return runOne(CaseConfig::load(configPath));

        if (*sweep) {
            if (meshes.size() < 3) throw std::runtime_error("sweep needs at least 3 resolutions");
            CaseConfig cfg = CaseConfig::load(configPath);
            std::vector<Series> series;
            for (int r : meshes) {
                CaseConfig c = cfg;
                c.resolution = r;
                std::printf("running 1/h = %d ...\n", r);
                series.push_back(runCase(c).series.extract(column));
            }
            std::vector<double> errs, hvals;
            for (size_t i = 0; i + 1 < series.size(); ++i) {
                errs.push_back(errorNorms(series[i], series.back()).l2);
                hvals.push_back(1.0 / meshes[i]);
            }
            std::printf("%8s %14s %8s\n", "1/h", "l2", "ROC");
            std::vector<double> rates = errs.size() > 1 ? roc(errs, hvals) : std::vector<double>{};
            for (size_t i = 0; i < errs.size(); ++i)
                if (i == 0)
                    std::printf("%8d %14.6e %8s\n", meshes[i], errs[i], "-");
                else
                    std::printf("%8d %14.6e %8.3f\n", meshes[i], errs[i], rates[i - 1]);
            return 0;
        }

        if (*comp) {
            std::string ref = csvFiles.back();
            Series refS = seriesFromCsv(ref, column);
            std::vector<double> errs;
            for (size_t i = 0; i + 1 < csvFiles.size(); ++i) {
                ErrorNorms e = errorNorms(seriesFromCsv(csvFiles[i], column), refS);
                std::printf("%s: l1=%.6e l2=%.6e linf=%.6e\n", csvFiles[i].c_str(), e.l1, e.l2,
                            e.linf);
                errs.push_back(e.l2);
            }
            if (errs.size() > 1) {
                if (hs.empty())
                    for (size_t i = 0; i < errs.size(); ++i) hs.push_back(1.0 / (1 << i));
                if (hs.size() != errs.size())
                    throw std::runtime_error("--h needs one value per non-reference file");
                auto rates = roc(errs, hs);
                std::printf("ROC:");
                for (double r : rates) std::printf(" %.3f", r);
                std::printf("\n");
            }
            return 0;
        }

        if (*oracle) {
            PhysicalParams par;
            par.rhoA = par.rhoB = orho;
            par.muA = par.muB = omu;
            par.sigma = osigma;
            double k = 2.0 * M_PI / owave;
            double om0 = std::sqrt(osigma * k * k * k / (2.0 * orho));
            double T = oT > 0.0 ? oT : 25.0 / om0;
            std::vector<double> times;
            for (int i = 0; i <= osamples; ++i) times.push_back(T * i / osamples);
            std::vector<double> a = prosperettiAmplitude(par, owave, oa0, times);
            std::vector<std::vector<double>> rows;
            for (size_t i = 0; i < times.size(); ++i) rows.push_back({times[i], a[i]});
            writeCsv(oout, {"t", "aux"}, rows);
            std::printf("wrote %s (%zu samples, omega0 = %.6g)\n", oout.c_str(), times.size(),
                        om0);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
