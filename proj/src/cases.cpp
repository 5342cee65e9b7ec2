#include "xnse/cases.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "xnse/output.hpp"
#include "xnse/quadrature.hpp"

namespace xnse {

std::vector<std::string> TimeSeries::columns() {
    return {"t",        "x_c",           "y_c",         "u_c",
            "v_c",      "circularity",   "kinetic_energy", "surface_energy",
            "dissipation", "surface_divergence", "area_a",      "aux"};
}

std::vector<std::vector<double>> TimeSeries::rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(records.size());
    for (const auto& r : records)
        out.push_back({r.t, r.xc, r.yc, r.uc, r.vc, r.circ, r.kinetic, r.surfEnergy,
                       r.dissipation, r.surfDiv, r.areaA, r.aux});
    return out;
}

Series TimeSeries::extract(const std::string& name) const {
    auto cols = columns();
    int idx = -1;
    for (size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == name) idx = static_cast<int>(i);
    if (idx < 0) throw std::invalid_argument("unknown series column " + name);
    Series s;
    auto all = rows();
    for (const auto& r : all) {
        s.t.push_back(r[0]);
        s.q.push_back(r[idx]);
    }
    return s;
}

int autoStepCount(double endTime, double dtSigma) {
    if (!(dtSigma > 0.0) || !std::isfinite(dtSigma))
        throw std::invalid_argument("capillary time step must be finite for automatic stepping");
    int n = static_cast<int>(std::ceil(endTime / (0.9 * dtSigma)));
    return 100 * static_cast<int>(std::ceil(n / 100.0));
}

namespace {

struct Setup {
    std::shared_ptr<BackgroundMesh> mesh;
    ScalarFunc phi0;
    double defaultT = 1.0;
    double defaultDt = -1.0;  // < 0: capillary-restricted
    bool twoPhase = true;
};

Setup buildSetup(const CaseConfig& cfg) {
    int res = cfg.resolution;
    Setup s;
    if (cfg.name == "capillary-wave") {
        double a0 = 0.01, lam = 1.0;
        std::array<BoundaryTag, 4> tags = {BoundaryTag::periodic(), BoundaryTag::periodic(),
                                           BoundaryTag::wall(), BoundaryTag::wall()};
        s.mesh = std::make_shared<BackgroundMesh>(0.0, lam, -1.5 * lam, 1.5 * lam, res, 3 * res,
                                                  tags);
        s.phi0 = [a0, lam](const Vec2& p) {
            return p.y() - a0 * std::cos(2.0 * M_PI * p.x() / lam);
        };
        double k = 2.0 * M_PI / lam;
        double om0 = std::sqrt(cfg.physics.sigma * k * k * k /
                               (cfg.physics.rhoA + cfg.physics.rhoB));
        s.defaultT = 25.0 / om0;
    } else if (cfg.name == "static-droplet" || cfg.name == "oscillating-droplet") {
        std::array<BoundaryTag, 4> tags = {BoundaryTag::wall(), BoundaryTag::wall(),
                                           BoundaryTag::wall(), BoundaryTag::wall()};
        s.mesh = std::make_shared<BackgroundMesh>(-0.5, 0.5, -0.5, 0.5, res, res, tags);
        double r = 0.25;
        if (cfg.name == "static-droplet") {
            s.phi0 = [r](const Vec2& p) { return p.norm() - r; };
            s.defaultT = 125.0;
            s.defaultDt = 0.01;
        } else {
            double a = 1.25 * r, b = 0.8 * r;
            s.phi0 = [a, b](const Vec2& p) {
                return p.x() * p.x() / (a * a) + p.y() * p.y() / (b * b) - 1.0;
            };
            s.defaultT = 100.0;
            s.defaultDt = 0.5;
        }
    } else if (cfg.name == "rising-bubble-tc1") {
        std::array<BoundaryTag, 4> tags = {BoundaryTag::freeSlip(), BoundaryTag::freeSlip(),
                                           BoundaryTag::wall(), BoundaryTag::wall()};
        s.mesh = std::make_shared<BackgroundMesh>(0.0, 1.0, 0.0, 2.0, res, 2 * res, tags);
        s.phi0 = [](const Vec2& p) { return (p - Vec2(0.5, 0.5)).norm() - 0.25; };
        s.defaultT = 3.0;
    } else if (cfg.name == "single-phase-mms") {
        double nu = cfg.physics.muB / cfg.physics.rhoB;
        auto uex = [nu](const Vec2& p, double t) {
            double decay = std::exp(-2.0 * M_PI * M_PI * nu * t);
            return Vec2(-std::cos(M_PI * p.x()) * std::sin(M_PI * p.y()),
                        std::sin(M_PI * p.x()) * std::cos(M_PI * p.y())) *
                   decay;
        };
        std::array<BoundaryTag, 4> tags = {BoundaryTag::dirichlet(uex), BoundaryTag::dirichlet(uex),
                                           BoundaryTag::dirichlet(uex), BoundaryTag::dirichlet(uex)};
        s.mesh = std::make_shared<BackgroundMesh>(0.0, 1.0, 0.0, 1.0, res, res, tags);
        s.phi0 = [](const Vec2&) { return 1.0; };
        s.defaultT = 0.5;
        s.defaultDt = 0.01;
        s.twoPhase = false;
    } else {
        throw std::invalid_argument("unknown case " + cfg.name);
    }
    return s;
}

Vec2 mmsVelocity(double nu, const Vec2& p, double t) {
    double decay = std::exp(-2.0 * M_PI * M_PI * nu * t);
    return Vec2(-std::cos(M_PI * p.x()) * std::sin(M_PI * p.y()),
                std::sin(M_PI * p.x()) * std::cos(M_PI * p.y())) *
           decay;
}

double mmsVelocityError(const MixedSpace& space, const CutCellData& cc, const Eigen::VectorXd& x,
                        double nu, double t) {
    const BackgroundMesh& mesh = space.mesh();
    QuadRule q = cellQuadrature(2 * space.degree() + 2, mesh.hx(), mesh.hy());
    double e2 = 0.0;
    for (int j = 0; j < mesh.numCells(); ++j) {
        int s = speciesOf(cc.kind(j));
        for (int i = 0; i < q.size(); ++i) {
            Vec2 u = space.velocity(x, j, s, q.nodes[i]);
            Vec2 ue = mmsVelocity(nu, mesh.toPhysical(j, q.nodes[i]), t);
            e2 += q.weights[i] * (u - ue).squaredNorm();
        }
    }
    return std::sqrt(e2);
}

}  // namespace

CaseResult runCase(const CaseConfig& cfg, int maxSteps) {
    Setup setup = buildSetup(cfg);
    const BackgroundMesh& mesh = *setup.mesh;
    auto space = std::make_shared<MixedSpace>(mesh, cfg.degree);

    double T = cfg.endTime > 0.0 ? cfg.endTime : setup.defaultT;
    double dt;
    int nts;
    if (cfg.dt > 0.0) {
        dt = cfg.dt;
        nts = static_cast<int>(std::ceil(T / dt - 1e-9));
    } else if (setup.defaultDt > 0.0) {
        dt = setup.defaultDt;
        nts = static_cast<int>(std::ceil(T / dt - 1e-9));
    } else {
        double dts = capillaryDt(cfg.physics, mesh.h(), cfg.degree);
        nts = autoStepCount(T, dts);
        dt = T / nts;
    }

    CaseResult out{TimeSeries{}, dt,
                   nts,          setup.mesh,
                   space,        LevelSetState::init(mesh, cfg.degree, setup.phi0,
                                                     cfg.solver.quadOrder),
                   FlowState{}};
    out.flow.x = Eigen::VectorXd::Zero(space->size());

    double nu = cfg.physics.muB / cfg.physics.rhoB;
    bool isMms = cfg.name == "single-phase-mms";
    bool isWave = cfg.name == "capillary-wave";
    if (isMms)
        projectVelocity(*space, *out.ls.cc,
                        [nu](const Vec2& p) { return mmsVelocity(nu, p, 0.0); }, out.flow.x);

    TimeStepper ts(*space, cfg.physics, cfg.solver);

    auto record = [&](double t) {
        TimeSeries::Record r;
        r.t = t;
        if (setup.twoPhase) {
            BubbleQuantities bq = bubbleQuantities(*space, *out.ls.cc, out.flow.x, cfg.physics);
            r.xc = bq.centerOfMass.x();
            r.yc = bq.centerOfMass.y();
            r.uc = bq.meanVelocity.x();
            r.vc = bq.meanVelocity.y();
            r.circ = bq.circularity;
            r.kinetic = bq.kineticEnergy;
            r.surfEnergy = bq.surfaceEnergy;
            r.dissipation = bq.dissipation;
            r.surfDiv = bq.surfaceDivergence;
            r.areaA = bq.areaA;
        }
        if (isWave) r.aux = waveAmplitude(out.ls.phi, 0.0);
        if (isMms) r.aux = mmsVelocityError(*space, *out.ls.cc, out.flow.x, nu, t);
        out.series.records.push_back(r);
    };

    bool files = !cfg.outputDir.empty();
    std::string stem;
    if (files) {
        std::filesystem::create_directories(cfg.outputDir);
        std::ostringstream os;
        os << cfg.outputDir << "/" << cfg.name << "_h" << cfg.resolution;
        stem = os.str();
    }
    auto vtk = [&](int step) {
        if (!files || cfg.vtkEvery <= 0) return;
        if (step % cfg.vtkEvery != 0 && step != nts) return;
        std::ostringstream os;
        os << stem << "_" << step << ".vtk";
        writeVtk(os.str(), *space, *out.ls.cc, out.flow.x, out.ls.phi);
    };

    record(0.0);
    vtk(0);
    int limit = maxSteps > 0 ? std::min(maxSteps, nts) : nts;
    for (int n = 1; n <= limit; ++n) {
        ts.step(out.ls, out.flow, dt);
        record(out.flow.t);
        vtk(n);
    }

    if (files) {
        auto all = out.series.rows();
        std::vector<std::vector<double>> kept;
        for (size_t i = 0; i < all.size(); ++i)
            if (cfg.csvEvery <= 1 || i % cfg.csvEvery == 0 || i + 1 == all.size())
                kept.push_back(all[i]);
        writeCsv(stem + ".csv", TimeSeries::columns(), kept);
    }
    return out;
}

}  // namespace xnse
