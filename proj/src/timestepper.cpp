#include "xnse/timestepper.hpp"

#include <Eigen/SparseLU>
#include <iostream>
#include <limits>

#include "xnse/quadrature.hpp"

namespace xnse {

std::array<double, 4> bdfCoefficients(int order) {
    switch (order) {
        case 1: return {1.0, 1.0, 0.0, 0.0};
        case 2: return {2.0 / 3.0, 4.0 / 3.0, -1.0 / 3.0, 0.0};
        case 3: return {6.0 / 11.0, 18.0 / 11.0, -9.0 / 11.0, 2.0 / 11.0};
        default: throw std::invalid_argument("BDF order must be 1, 2 or 3");
    }
}

MixedTransfer::MixedTransfer(const MixedSpace& space, const CutCellData& cc,
                             const AggregationMap& map) {
    const BackgroundMesh& mesh = space.mesh();
    int J = mesh.numCells(), nu = space.nu(), np = space.np();

    // pass 1: allocate reduced columns for independent active blocks
    std::vector<std::array<int, 3>> col(2 * J, {-1, -1, -1});  // u0, u1, p offsets
    int off = 0;
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < 2; ++s) {
            if (map.merged(j, s) || cc.frac(j, s) <= 0.0) continue;
            col[j * 2 + s] = {off, off + nu, off + 2 * nu};
            blocks_.emplace_back(off, nu);
            blocks_.emplace_back(off + nu, nu);
            blocks_.emplace_back(off + 2 * nu, np);
            off += 2 * nu + np;
        }
    reduced_ = off;

    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < 2; ++s) {
            if (!map.merged(j, s)) {
                if (col[j * 2 + s][0] < 0) continue;  // inactive: dropped
                for (int c = 0; c < 2; ++c)
                    for (int m = 0; m < nu; ++m)
                        trip.emplace_back(space.uBase(j, s, c) + m, col[j * 2 + s][c] + m, 1.0);
                for (int m = 0; m < np; ++m)
                    trip.emplace_back(space.pBase(j, s) + m, col[j * 2 + s][2] + m, 1.0);
                continue;
            }
            int r = map.root(j, s);
            if (col[r * 2 + s][0] < 0)
                throw std::runtime_error("agglomeration root block is not independent");
            Eigen::MatrixXd Eu = extensionMatrix(mesh, space.velBasis(), j, r);
            Eigen::MatrixXd Ep = extensionMatrix(mesh, space.presBasis(), j, r);
            for (int c = 0; c < 2; ++c)
                for (int l = 0; l < nu; ++l)
                    for (int m = 0; m < nu; ++m)
                        trip.emplace_back(space.uBase(j, s, c) + l, col[r * 2 + s][c] + m,
                                          Eu(l, m));
            for (int l = 0; l < np; ++l)
                for (int m = 0; m < np; ++m)
                    trip.emplace_back(space.pBase(j, s) + l, col[r * 2 + s][2] + m, Ep(l, m));
        }
    T_.resize(space.size(), reduced_);
    T_.setFromTriplets(trip.begin(), trip.end());
}

void extrapolateState(Eigen::VectorXd& x, const MixedSpace& space, const CutCellData& ccOld,
                      const CutCellData& ccNew, const AggregationMap& map) {
    const BackgroundMesh& mesh = space.mesh();
    int nu = space.nu(), np = space.np();
    for (int j = 0; j < mesh.numCells(); ++j)
        for (int s = 0; s < 2; ++s) {
            if (!(ccOld.frac(j, s) <= 0.0 && ccNew.frac(j, s) > 0.0)) continue;
            if (!map.merged(j, s)) continue;  // nothing to inherit from
            int r = map.root(j, s);
            Eigen::MatrixXd Eu = extensionMatrix(mesh, space.velBasis(), j, r);
            Eigen::MatrixXd Ep = extensionMatrix(mesh, space.presBasis(), j, r);
            for (int c = 0; c < 2; ++c)
                x.segment(space.uBase(j, s, c), nu) = Eu * x.segment(space.uBase(r, s, c), nu);
            x.segment(space.pBase(j, s), np) = Ep * x.segment(space.pBase(r, s), np);
        }
}

SpMat blockJacobiScaling(const SpMat& A, const std::vector<std::pair<int, int>>& blocks) {
    std::vector<Eigen::Triplet<double>> trip;
    for (auto [off, n] : blocks) {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
        for (int c = 0; c < n; ++c)
            for (SpMat::InnerIterator it(A, off + c); it; ++it) {
                int r = static_cast<int>(it.row()) - off;
                if (r >= 0 && r < n) D(r, c) = it.value();
            }
        Eigen::MatrixXd S = 0.5 * (D + D.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        double amax = es.eigenvalues().cwiseAbs().maxCoeff();
        Eigen::MatrixXd W;
        if (amax <= 0.0) {
            W = Eigen::MatrixXd::Identity(n, n);  // zero (saddle) block
        } else {
            Eigen::VectorXd scale(n);
            for (int i = 0; i < n; ++i) {
                double a = std::abs(es.eigenvalues()[i]);
                scale[i] = a > 1e-12 * amax ? 1.0 / std::sqrt(a) : 1.0;
            }
            W = es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().transpose();
        }
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (W(r, c) != 0.0) trip.emplace_back(off + r, off + c, W(r, c));
    }
    SpMat W(A.rows(), A.cols());
    W.setFromTriplets(trip.begin(), trip.end());
    return W;
}

Eigen::VectorXd solveLinear(const SpMat& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& pin, double tol) {
    int n = static_cast<int>(A.rows());
    bool withPin = pin.size() > 0;
    SpMat S;
    Eigen::VectorXd rhs;
    if (withPin) {
        std::vector<Eigen::Triplet<double>> trip;
        for (int k = 0; k < A.outerSize(); ++k)
            for (SpMat::InnerIterator it(A, k); it; ++it)
                trip.emplace_back(it.row(), it.col(), it.value());
        for (int i = 0; i < n; ++i)
            if (pin[i] != 0.0) {
                trip.emplace_back(i, n, pin[i]);
                trip.emplace_back(n, i, pin[i]);
            }
        S.resize(n + 1, n + 1);
        S.setFromTriplets(trip.begin(), trip.end());
        rhs = Eigen::VectorXd::Zero(n + 1);
        rhs.head(n) = b;
    } else {
        S = A;
        rhs = b;
    }
    Eigen::SparseLU<SpMat> lu;
    lu.compute(S);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("sparse factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd y = lu.solve(rhs);
    double res = (S * y - rhs).norm();
    if (res > tol * std::max(1.0, rhs.norm()))
        throw std::runtime_error("linear solve residual " + std::to_string(res) +
                                 " exceeds tolerance");
    return y.head(n);
}

TimeStepper::TimeStepper(const MixedSpace& space, const PhysicalParams& par, SolverConfig cfg)
    : space_(&space), par_(par), cfg_(std::move(cfg)) {}

Eigen::VectorXd TimeStepper::pressureMeanVector(const CutCellData& cc) const {
    const BackgroundMesh& mesh = space_->mesh();
    const ModalBasis& pb = space_->presBasis();
    int np = space_->np();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(space_->size());
    for (int j = 0; j < mesh.numCells(); ++j) {
        if (!cc.isCut(j)) {
            c[space_->pBase(j, speciesOf(cc.kind(j)))] = std::sqrt(mesh.cellArea());
            continue;
        }
        for (int s = 0; s < 2; ++s) {
            const QuadRule& q = s == 0 ? cc.cutRules(j).volA : cc.cutRules(j).volB;
            for (int i = 0; i < q.size(); ++i)
                c.segment(space_->pBase(j, s), np) +=
                    q.weights[i] * pb.eval(q.nodes[i].x(), q.nodes[i].y());
        }
    }
    return c;
}

StepInfo TimeStepper::solveFlow(const LevelSetState& ls, FlowState& st,
                                const AggregationMap& map, double dt, double tNew,
                                Eigen::VectorXd& xOut) const {
    const CutCellData& cc = *ls.cc;
    SpMat M = assembleMass(*space_, cc, par_);
    SpMat V = assembleViscous(*space_, cc, par_);
    SpMat B = assemblePressureConti(*space_, cc);
    Eigen::VectorXd fixed = gravityRhs(*space_, cc, par_) + surfaceTensionRhs(*space_, cc, par_) +
                            viscousBoundaryRhs(*space_, cc, par_, tNew) +
                            contiBoundaryRhs(*space_, cc, tNew);

    int order = std::min<int>(3, static_cast<int>(st.hist.size()));
    std::array<double, 4> d = bdfCoefficients(order);
    Eigen::VectorXd histRhs = Eigen::VectorXd::Zero(space_->size());
    for (int i = 1; i <= order; ++i) histRhs += d[i] * st.hist[i - 1];

    MixedTransfer tr(*space_, cc, map);
    const SpMat& T = tr.injection();
    SpMat Tt = T.transpose();

    bool needPin = true;
    for (int side = 0; side < 4; ++side)
        if (space_->mesh().sideTag(side).kind == BoundaryKind::Neumann) needPin = false;
    Eigen::VectorXd pinRed;
    if (needPin) pinRed = Tt * pressureMeanVector(cc);

    int merges = 0;
    for (int s = 0; s < 2; ++s)
        for (int p : map.parent[s]) merges += (p >= 0);

    Eigen::VectorXd xcur = xOut;  // initial guess (extrapolated previous state)
    StepInfo info;
    info.agglomerated = merges;
    for (int it = 1; it <= cfg_.imax; ++it) {
        auto [C, crhs] = assembleConvection(*space_, cc, par_, xcur, tNew);
        SpMat Afull = M + (d[0] * dt) * ((C + V + B).eval());
        Eigen::VectorXd bfull = (d[0] * dt) * (crhs + fixed) + histRhs;
        SpMat Ared = Tt * Afull * T;
        Eigen::VectorXd bred = Tt * bfull;
        SpMat W = blockJacobiScaling(Ared, tr.blocks());
        Eigen::VectorXd bp = W * bred;

        Eigen::VectorXd rfull = Afull * xcur - bfull;
        double res = (W * (Tt * rfull).eval()).norm() / std::max(bp.norm(), 1e-30);
        info.residual = res;
        if (cfg_.verbose)
            std::cout << "step " << stepIndex_ << " iter " << it << " res " << res
                      << " agglomerated " << merges << "\n";
        if (res < cfg_.epsNse) break;
        if (it == cfg_.imax)
            throw std::runtime_error("Picard iteration did not converge, residual " +
                                     std::to_string(res));
        SpMat Ap = W * Ared * W;
        Eigen::VectorXd pinP;
        if (needPin) pinP = W * pinRed;
        Eigen::VectorXd y = solveLinear(Ap, bp, pinP, cfg_.linTol);
        xcur = T * (W * y).eval();
        info.picardIters = it;
    }
    xOut = xcur;
    return info;
}

StepInfo TimeStepper::step(LevelSetState& ls, FlowState& st, double dt) {
    ++stepIndex_;
    const BackgroundMesh& mesh = space_->mesh();
    double tNew = st.t + dt;
    int nu = space_->nu();

    if (st.hist.empty()) {
        SpMat M0 = assembleMass(*space_, *ls.cc, par_);
        st.hist.push_back(M0 * st.x);
        st.histCc.push_back(std::make_shared<CutCellData>(*ls.cc));
    }
    auto ccOld = std::make_shared<CutCellData>(*ls.cc);
    Eigen::VectorXd xOld = st.x;
    Eigen::VectorXd evo0 = ls.phiEvo.coeffs(), phi0 = ls.phi.coeffs();
    bool moveInterface = !ls.cc->cutCells().empty();

    Eigen::VectorXd velForLs = st.x;
    Eigen::VectorXd prevPhi;
    Eigen::VectorXd xNew;
    StepInfo info;
    int outer = 0;
    while (true) {
        ++outer;
        if (moveInterface) {
            if (outer > 1) {  // redo the transport with the updated velocity
                ls.phiEvo.coeffs() = evo0;
                ls.phi.coeffs() = phi0;
                ls.cc = std::make_unique<CutCellData>(mesh, ls.phi, cfg_.quadOrder);
                ls.band = updateNarrowBand(mesh, *ls.cc);
            }
            XdgField ux(mesh, space_->degree()), uy(mesh, space_->degree());
            for (int j = 0; j < mesh.numCells(); ++j)
                for (int s = 0; s < 2; ++s) {
                    ux.block(j, s) = velForLs.segment(space_->uBase(j, s, 0), nu);
                    uy.block(j, s) = velForLs.segment(space_->uBase(j, s, 1), nu);
                }
            LevelSetOptions opt = cfg_.ls;
            opt.rhoA = par_.rhoA;
            opt.rhoB = par_.rhoB;
            updateLevelSet(ls, ux, uy, dt, opt);
        }

        AggregationMap map = buildSmallCellMap(*ls.cc, cfg_.alpha);
        map = unionMaps(map, buildTopologyMap(*ccOld, *ls.cc));
        for (const auto& h : st.histCc) map = unionMaps(map, buildTopologyMap(*h, *ls.cc));

        xNew = xOld;
        extrapolateState(xNew, *space_, *ccOld, *ls.cc, map);
        info = solveFlow(ls, st, map, dt, tNew, xNew);

        if (!cfg_.implicitLs || !moveInterface) break;
        if (outer > 1) {
            double diff = (ls.phi.coeffs() - prevPhi).norm();
            double scale = std::max(ls.phi.coeffs().norm(), 1e-30);
            if (diff / scale < cfg_.epsLs || outer >= cfg_.imax) break;
        }
        prevPhi = ls.phi.coeffs();
        velForLs = xNew;
    }
    info.lsOuterIters = outer;

    st.x = xNew;
    st.t = tNew;
    SpMat Mnew = assembleMass(*space_, *ls.cc, par_);
    st.hist.insert(st.hist.begin(), Mnew * st.x);
    st.histCc.insert(st.histCc.begin(), std::make_shared<CutCellData>(*ls.cc));
    if (st.hist.size() > 3) {
        st.hist.resize(3);
        st.histCc.resize(3);
    }
    if (cfg_.verbose)
        std::cout << "step " << stepIndex_ << " done t=" << st.t << " iters "
                  << info.picardIters << " res " << info.residual << " agglomerated "
                  << info.agglomerated << "\n";
    return info;
}

}  // namespace xnse
