#include "xnse/levelset.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace xnse {

NarrowBand updateNarrowBand(const BackgroundMesh& mesh, const CutCellData& cc) {
    NarrowBand b;
    b.mark.assign(mesh.numCells(), 0);
    for (int j : cc.cutCells()) {
        b.mark[j] = 2;
        b.cut.push_back(j);
    }
    for (int j : cc.cutCells())
        for (int n : mesh.pointNeighbors(j))
            if (b.mark[n] == 0) {
                b.mark[n] = 1;
                b.nearCells.push_back(n);
            }
    std::sort(b.nearCells.begin(), b.nearCells.end());
    return b;
}

Eigen::MatrixXd constraintRows(const BackgroundMesh& mesh, int edge, const ModalBasis& basis) {
    const Edge& ed = mesh.edge(edge);
    if (ed.isBoundary()) throw std::logic_error("constraintRows: boundary edge");
    int npts = basis.degree() + 1;
    std::vector<double> pts = gaussLobattoNodes(npts);
    Vec2 dir = (ed.axis == 0) ? Vec2(0, 1) : Vec2(1, 0);
    int N = basis.size();
    Eigen::MatrixXd rows(npts, 2 * N);
    for (int i = 0; i < npts; ++i) {
        Vec2 p = ed.midpoint + pts[i] * (ed.length / 2) * dir;
        Vec2 ri = mesh.toReference(ed.inner, p);
        Vec2 ro = mesh.toReference(ed.outer, p - ed.outerShift);
        rows.block(i, 0, 1, N) = basis.eval(ri.x(), ri.y()).transpose();
        rows.block(i, N, 1, N) = -basis.eval(ro.x(), ro.y()).transpose();
    }
    return rows;
}

DgField continuityProject(const DgField& phiEvo, const NarrowBand& band) {
    const BackgroundMesh& mesh = phiEvo.mesh();
    int k = phiEvo.degree();
    DgField out(mesh, k + 1);

    // Degree raise: mode ordering is nested, so the first blocks carry over.
    int Nk = phiEvo.blockSize(), N1 = out.blockSize();
    for (int j = 0; j < mesh.numCells(); ++j)
        out.cell(j).head(Nk) = phiEvo.cell(j);

    // Collect constraint edges: interior edges with both cells in the band.
    std::vector<int> cedges;
    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (ed.isInterior() && band.inBand(ed.inner) && band.inBand(ed.outer))
            cedges.push_back(e);
    }
    if (cedges.empty()) return out;

    int npts = out.basis().degree() + 1;
    int nrows = npts * static_cast<int>(cedges.size());
    long ndof = out.coeffs().size();

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nrows);
    for (size_t ei = 0; ei < cedges.size(); ++ei) {
        const Edge& ed = mesh.edge(cedges[ei]);
        Eigen::MatrixXd rows = constraintRows(mesh, cedges[ei], out.basis());
        for (int i = 0; i < npts; ++i) {
            int r = static_cast<int>(ei) * npts + i;
            for (int m = 0; m < N1; ++m) {
                trips.emplace_back(r, ed.inner * N1 + m, rows(i, m));
                trips.emplace_back(r, ed.outer * N1 + m, rows(i, N1 + m));
            }
            b[r] = rows.row(i).head(N1).dot(out.cell(ed.inner)) +
                   rows.row(i).tail(N1).dot(out.cell(ed.outer));
        }
    }
    Eigen::SparseMatrix<double> A(nrows, ndof);
    A.setFromTriplets(trips.begin(), trips.end());

    // Minimal-norm correction: lambda solves (A A^T) lambda = A x0, then
    // x = x0 - A^T lambda (mass matrix is the identity in this basis).
    Eigen::SparseMatrix<double> S = (A * Eigen::SparseMatrix<double>(A.transpose())).pruned();
    Eigen::VectorXd lambda;
    bool ok = false;
    {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
        if (ldlt.info() == Eigen::Success) {
            lambda = ldlt.solve(b);
            double rel = (S * lambda - b).norm() / std::max(b.norm(), 1e-300);
            ok = rel < 1e-10;
        }
    }
    if (!ok) {
        // rank-deficient constraints (duplicates at shared vertices)
        Eigen::MatrixXd Sd(S);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Sd);
        cod.setThreshold(1e-12);
        lambda = cod.solve(b);
    }
    out.coeffs() -= A.transpose() * lambda;
    return out;
}

namespace {

// Offset (in cell increments) from cell j to point-neighbor n, wrapped over
// periodic directions so it is always in {-1,0,1}^2.
std::pair<int, int> neighborOffset(const BackgroundMesh& mesh, int j, int n) {
    int dx = mesh.cellIx(n) - mesh.cellIx(j);
    int dy = mesh.cellIy(n) - mesh.cellIy(j);
    if (mesh.periodicX()) {
        if (dx > 1) dx -= mesh.nx();
        if (dx < -1) dx += mesh.nx();
    }
    if (mesh.periodicY()) {
        if (dy > 1) dy -= mesh.ny();
        if (dy < -1) dy += mesh.ny();
    }
    return {dx, dy};
}

}  // namespace

void fastMarchReinit(DgField& phi, const CutCellData& cc, const NarrowBand& band,
                     const std::vector<int>* only) {
    const BackgroundMesh& mesh = phi.mesh();
    int k = phi.degree();
    std::vector<char> accepted(mesh.numCells(), 0);
    for (int j : band.cut) accepted[j] = 1;
    if (only) {
        for (int j : band.nearCells) accepted[j] = 1;
        for (int j : *only) accepted[j] = 0;
    }

    std::vector<int> close = only ? *only : band.nearCells;
    std::sort(close.begin(), close.end(), [&](int a, int b) {
        return std::abs(phi.cellMean(a)) < std::abs(phi.cellMean(b));
    });

    const GaussRule1d& g = gaussLegendre(k + 2);
    const int nLat = k + 2;
    const int nSamp = k + 5;  // samples per shared face
    double hx = mesh.hx(), hy = mesh.hy();

    for (int j : close) {
        Vec2 cj = mesh.cellCenter(j);
        struct Nb {
            int cell;
            Vec2 shift;    // virtual position minus actual position
            Vec2 segA, segB;  // shared boundary segment in j's frame
        };
        std::vector<Nb> nbs;
        for (int n : mesh.pointNeighbors(j)) {
            if (!accepted[n]) continue;
            auto [dx, dy] = neighborOffset(mesh, j, n);
            Vec2 vCenter = cj + Vec2(dx * hx, dy * hy);
            Vec2 shift = vCenter - mesh.cellCenter(n);
            Vec2 a, b;
            if (dx != 0 && dy != 0) {
                a = b = cj + Vec2(dx * hx / 2, dy * hy / 2);
            } else if (dx != 0) {
                a = cj + Vec2(dx * hx / 2, -hy / 2);
                b = cj + Vec2(dx * hx / 2, hy / 2);
            } else {
                a = cj + Vec2(-hx / 2, dy * hy / 2);
                b = cj + Vec2(hx / 2, dy * hy / 2);
            }
            nbs.push_back({n, shift, a, b});
        }
        if (nbs.empty())
            throw std::runtime_error("fast march: near cell " + std::to_string(j) +
                                     " has no accepted neighbor");

        Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(phi.blockSize());
        for (int iy = 0; iy < nLat; ++iy)
            for (int ix = 0; ix < nLat; ++ix) {
                Vec2 ref(g.nodes[ix], g.nodes[iy]);
                Vec2 x = mesh.toPhysical(j, ref);
                double best = 1e300;
                double sign = 1.0;
                for (const Nb& nb : nbs) {
                    auto cost = [&](double t) {
                        Vec2 y = nb.segA + t * (nb.segB - nb.segA);
                        return std::abs(phi.evalPhys(nb.cell, y - nb.shift)) + (x - y).norm();
                    };
                    bool pointNb = (nb.segA - nb.segB).norm() < 1e-14;
                    double tBest = 0.5;
                    if (!pointNb) {
                        double cBest = 1e300;
                        for (int s = 0; s < nSamp; ++s) {
                            double t = double(s) / (nSamp - 1);
                            double c = cost(t);
                            if (c < cBest) {
                                cBest = c;
                                tBest = t;
                            }
                        }
                        // golden-section polish around the best sample
                        double lo = std::max(0.0, tBest - 1.0 / (nSamp - 1));
                        double hi = std::min(1.0, tBest + 1.0 / (nSamp - 1));
                        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
                        double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
                        double f1 = cost(c1), f2 = cost(c2);
                        for (int it = 0; it < 40; ++it) {
                            if (f1 < f2) {
                                hi = c2;
                                c2 = c1;
                                f2 = f1;
                                c1 = hi - gr * (hi - lo);
                                f1 = cost(c1);
                            } else {
                                lo = c1;
                                c1 = c2;
                                f1 = f2;
                                c2 = lo + gr * (hi - lo);
                                f2 = cost(c2);
                            }
                        }
                        tBest = 0.5 * (lo + hi);
                    }
                    double cand = cost(tBest);
                    if (cand < best) {
                        best = cand;
                        Vec2 y = nb.segA + tBest * (nb.segB - nb.segA);
                        sign = phi.evalPhys(nb.cell, y - nb.shift) < 0 ? -1.0 : 1.0;
                    }
                }
                double w = g.weights[ix] * g.weights[iy] * hx * hy / 4;
                coeffs += w * (sign * best) * phi.basis().eval(ref.x(), ref.y());
            }
        phi.cell(j) = coeffs;
        accepted[j] = 1;
    }
}

bool gradientRenormalize(DgField& phi, const CutCellData& cc, double epsReinit) {
    const BackgroundMesh& mesh = phi.mesh();
    int k = phi.degree();
    Eigen::VectorXd backup = phi.coeffs();

    // interface positions before
    std::vector<Vec2> ifacePts;
    for (int j : cc.cutCells()) {
        const CutRules& r = cc.cutRules(j);
        for (const Vec2& nref : r.iface.nodes) ifacePts.push_back(mesh.toPhysical(j, nref));
    }

    const GaussRule1d& g = gaussLegendre(k + 2);
    const int nLat = k + 2;
    double hx = mesh.hx(), hy = mesh.hy();

    // Fixed-point sweeps: replace phi by the projection of phi/|grad phi| on
    // each cut cell.  The sweep residual stops shrinking once it hits the
    // projection error floor of the basis; past that point further sweeps only
    // amplify noise, so we keep the best iterate instead of demanding a
    // machine-precision fixed point.
    double prevChange = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 20; ++iter) {
        Eigen::VectorXd snapshot = phi.coeffs();
        double maxChange = 0;
        for (int j : cc.cutCells()) {
            Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(phi.blockSize());
            for (int iy = 0; iy < nLat; ++iy)
                for (int ix = 0; ix < nLat; ++ix) {
                    Vec2 ref(g.nodes[ix], g.nodes[iy]);
                    double v = phi.evalRef(j, ref.x(), ref.y());
                    double gn = phi.gradRef(j, ref.x(), ref.y()).norm();
                    gn = std::clamp(gn, 0.3, 3.0);
                    double w = g.weights[ix] * g.weights[iy] * hx * hy / 4;
                    coeffs += w * (v / gn) * phi.basis().eval(ref.x(), ref.y());
                }
            maxChange = std::max(maxChange, (coeffs - Eigen::VectorXd(phi.cell(j))).lpNorm<Eigen::Infinity>());
            phi.cell(j) = coeffs;
        }
        if (maxChange < 1e-13) break;
        if (maxChange >= prevChange) {  // stagnated: undo this sweep and stop
            phi.coeffs() = snapshot;
            break;
        }
        prevChange = maxChange;
    }

    // Interface constraint: the renormalized field must keep its original
    // values (zeros) at the interface sample nodes.  Pull each cut cell back
    // by the minimal-L2 coefficient correction fitting those values; the
    // minimum-norm least-squares solve absorbs redundant or infeasible node
    // sets near tangencies.
    for (int j : cc.cutCells()) {
        const CutRules& r = cc.cutRules(j);
        int ni = int(r.iface.nodes.size());
        if (ni == 0) continue;
        Eigen::MatrixXd A(ni, phi.blockSize());
        Eigen::VectorXd res(ni);
        for (int i = 0; i < ni; ++i) {
            const Vec2& nref = r.iface.nodes[i];
            A.row(i) = phi.basis().eval(nref.x(), nref.y());
            double v0 = backup.segment(j * phi.blockSize(), phi.blockSize()).dot(A.row(i));
            res[i] = v0 - phi.evalRef(j, nref.x(), nref.y());
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
        cod.setThreshold(1e-10);
        phi.cell(j) += cod.solve(res);
    }

    // zero-set guard: displacement estimated from the new field at the old
    // interface sample points
    double maxMove = 0;
    for (const Vec2& p : ifacePts) {
        int j = phi.locate(p);
        double v = std::abs(phi.evalPhys(j, p));
        double gn = std::max(phi.gradPhys(j, p).norm(), 0.3);
        maxMove = std::max(maxMove, v / gn);
    }
    if (maxMove > 0.1 * mesh.h() * epsReinit) {
        phi.coeffs() = backup;
        return false;
    }
    return true;
}

}  // namespace xnse
