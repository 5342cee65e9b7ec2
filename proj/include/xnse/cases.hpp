#pragma once

#include <memory>

#include "xnse/config.hpp"
#include "xnse/diagnostics.hpp"
#include "xnse/norms.hpp"
#include "xnse/timestepper.hpp"

namespace xnse {

/// Per-step scalar diagnostics of a benchmark run.  The aux column holds the
/// case-specific scalar: interface height a(t) for the capillary wave, the
/// velocity L2 error for the manufactured solution, 0 otherwise.
struct TimeSeries {
    struct Record {
        double t = 0, xc = 0, yc = 0, uc = 0, vc = 0, circ = 0;
        double kinetic = 0, surfEnergy = 0, dissipation = 0, surfDiv = 0;
        double areaA = 0, aux = 0;
    };
    std::vector<Record> records;

    static std::vector<std::string> columns();
    std::vector<std::vector<double>> rows() const;
    /// Column by name (one of columns()) as a time series.
    Series extract(const std::string& name) const;
};

struct CaseResult {
    TimeSeries series;
    double dt = 0.0;
    int nts = 0;
    std::shared_ptr<BackgroundMesh> mesh;
    std::shared_ptr<MixedSpace> space;
    LevelSetState ls;
    FlowState flow;
};

/// Number of steps under the capillary restriction: uniform steps, at most
/// 0.9 dt_sigma each, rounded up to a multiple of 100.
int autoStepCount(double endTime, double dtSigma);

/// Set up and run one benchmark case, recording diagnostics every step and
/// writing CSV/VTK outputs at the configured cadence (empty outputDir
/// disables file output).  maxSteps > 0 truncates the run (partial series).
CaseResult runCase(const CaseConfig& cfg, int maxSteps = -1);

}  // namespace xnse
