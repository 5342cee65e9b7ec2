#include "xnse/evolution.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

namespace xnse {

VectorField densityAverage(const XdgField& ux, const XdgField& uy, double rhoA, double rhoB,
                           const CutCellData& cc) {
    const BackgroundMesh& mesh = ux.mesh();
    VectorField out(mesh, ux.degree());
    double wA = rhoA / (rhoA + rhoB), wB = rhoB / (rhoA + rhoB);
    for (int j = 0; j < mesh.numCells(); ++j) {
        if (cc.isCut(j)) {
            out.x.cell(j) = wA * ux.block(j, 0) + wB * ux.block(j, 1);
            out.y.cell(j) = wA * uy.block(j, 0) + wB * uy.block(j, 1);
        } else {
            int s = speciesOf(cc.kind(j));
            out.x.cell(j) = ux.block(j, s);
            out.y.cell(j) = uy.block(j, s);
        }
    }
    return out;
}

namespace {

// Diffusion tensor of the extension problem at a point.
Eigen::Matrix2d extensionTensor(const DgField& phi, int j, const Vec2& ref, double eps) {
    Vec2 g = phi.gradRef(j, ref.x(), ref.y());
    double gn = g.norm();
    Vec2 n = gn > 1e-12 ? Vec2(g / gn) : Vec2(1, 0);
    return n * n.transpose() + eps * Eigen::Matrix2d::Identity();
}

}  // namespace

VectorField ellipticExtension(const VectorField& uAver, const CutCellData& cc,
                              const DgField& phiEvo, double eps) {
    const BackgroundMesh& mesh = phiEvo.mesh();
    int k = uAver.x.degree();
    const ModalBasis& basis = uAver.x.basis();
    int N = basis.size();
    double hx = mesh.hx(), hy = mesh.hy();
    double h = std::min(hx, hy);
    double eta = 4.0 * std::max(k, 1) * std::max(k, 1) * (1.0 + eps) / h;

    const std::vector<int>& cut = cc.cutCells();
    std::vector<int> local(mesh.numCells(), -1);
    for (size_t i = 0; i < cut.size(); ++i) local[cut[i]] = static_cast<int>(i);
    int ndof = static_cast<int>(cut.size()) * N;

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhsX = Eigen::VectorXd::Zero(ndof);
    Eigen::VectorXd rhsY = Eigen::VectorXd::Zero(ndof);

    auto add = [&](int row0, int col0, const Eigen::MatrixXd& blk) {
        for (int r = 0; r < blk.rows(); ++r)
            for (int c = 0; c < blk.cols(); ++c)
                if (blk(r, c) != 0.0) trips.emplace_back(row0 + r, col0 + c, blk(r, c));
    };

    // volume terms over the full background cell
    QuadRule vol = cellQuadrature(2 * k + 2, hx, hy);
    for (int j : cut) {
        Eigen::MatrixXd elem = Eigen::MatrixXd::Zero(N, N);
        for (int q = 0; q < vol.size(); ++q) {
            Eigen::MatrixXd G = basis.evalGrad(vol.nodes[q].x(), vol.nodes[q].y());
            Eigen::Matrix2d D = extensionTensor(phiEvo, j, vol.nodes[q], eps);
            elem += vol.weights[q] * G * D * G.transpose();
        }
        add(local[j] * N, local[j] * N, elem);
    }

    // SIP terms on edges shared by two cut cells; edges facing pure cells or
    // the domain boundary keep the natural zero-flux closure
    const GaussRule1d& eg = gaussLegendre(k + 2);
    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (ed.isBoundary()) continue;
        if (local[ed.inner] < 0 || local[ed.outer] < 0) continue;
        int li = local[ed.inner], lo = local[ed.outer];
        Vec2 dir = (ed.axis == 0) ? Vec2(0, 1) : Vec2(1, 0);
        Eigen::MatrixXd Aii = Eigen::MatrixXd::Zero(N, N), Aio = Aii, Aoi = Aii, Aoo = Aii;
        for (int q = 0; q < int(eg.nodes.size()); ++q) {
            double w = eg.weights[q] * ed.length / 2;
            Vec2 p = ed.midpoint + eg.nodes[q] * (ed.length / 2) * dir;
            Vec2 ri = mesh.toReference(ed.inner, p);
            Vec2 ro = mesh.toReference(ed.outer, p - ed.outerShift);
            Eigen::VectorXd vi = basis.eval(ri.x(), ri.y());
            Eigen::VectorXd vo = basis.eval(ro.x(), ro.y());
            Eigen::Matrix2d Di = extensionTensor(phiEvo, ed.inner, ri, eps);
            Eigen::Matrix2d Do = extensionTensor(phiEvo, ed.outer, ro, eps);
            Eigen::VectorXd fi = basis.evalGrad(ri.x(), ri.y()) * (Di * ed.normal);  // (D grad).n
            Eigen::VectorXd fo = basis.evalGrad(ro.x(), ro.y()) * (Do * ed.normal);
            // -{(D grad u).n}[v] - {(D grad v).n}[u] + eta [u][v]
            Aii += w * (-0.5 * (vi * fi.transpose() + fi * vi.transpose()) + eta * vi * vi.transpose());
            Aio += w * (-0.5 * vi * fo.transpose() + 0.5 * fi * vo.transpose() - eta * vi * vo.transpose());
            Aoi += w * (0.5 * vo * fi.transpose() - 0.5 * fo * vi.transpose() - eta * vo * vi.transpose());
            Aoo += w * (0.5 * (vo * fo.transpose() + fo * vo.transpose()) + eta * vo * vo.transpose());
        }
        add(li * N, li * N, Aii);
        add(li * N, lo * N, Aio);
        add(lo * N, li * N, Aoi);
        add(lo * N, lo * N, Aoo);
    }

    // Nitsche terms imposing uAver on the interface
    for (int j : cut) {
        const CutRules& r = cc.cutRules(j);
        Eigen::MatrixXd elem = Eigen::MatrixXd::Zero(N, N);
        Eigen::VectorXd bx = Eigen::VectorXd::Zero(N), by = bx;
        for (size_t q = 0; q < r.iface.nodes.size(); ++q) {
            double w = r.iface.weights[q];
            const Vec2& ref = r.iface.nodes[q];
            const Vec2& nI = r.ifaceNormals[q];
            Eigen::VectorXd v = basis.eval(ref.x(), ref.y());
            Eigen::Matrix2d D = extensionTensor(phiEvo, j, ref, eps);
            Eigen::VectorXd f = basis.evalGrad(ref.x(), ref.y()) * (D * nI);
            elem += w * (eta * v * v.transpose() - v * f.transpose() - f * v.transpose());
            Vec2 x = mesh.toPhysical(j, ref);
            double gx = uAver.x.evalPhys(j, x), gy = uAver.y.evalPhys(j, x);
            bx += w * (eta * v - f) * gx;
            by += w * (eta * v - f) * gy;
        }
        add(local[j] * N, local[j] * N, elem);
        rhsX.segment(local[j] * N, N) += bx;
        rhsY.segment(local[j] * N, N) += by;
    }

    Eigen::SparseMatrix<double> A(ndof, ndof);
    A.setFromTriplets(trips.begin(), trips.end());

    Eigen::VectorXd solX, solY;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    bool ok = ldlt.info() == Eigen::Success;
    if (ok) {
        solX = ldlt.solve(rhsX);
        solY = ldlt.solve(rhsY);
        double rx = (A * solX - rhsX).norm() / std::max(rhsX.norm(), 1e-300);
        double ry = (A * solY - rhsY).norm() / std::max(rhsY.norm(), 1e-300);
        ok = rx < 1e-10 && ry < 1e-10;
    }
    if (!ok) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("elliptic extension: singular system");
        solX = lu.solve(rhsX);
        solY = lu.solve(rhsY);
    }

    VectorField out(mesh, k);
    for (int j : cut) {
        out.x.cell(j) = solX.segment(local[j] * N, N);
        out.y.cell(j) = solY.segment(local[j] * N, N);
    }
    return out;
}

double extensionResidualRatio(const VectorField& uExt, const DgField& phiEvo,
                              const CutCellData& cc) {
    const BackgroundMesh& mesh = phiEvo.mesh();
    QuadRule vol = cellQuadrature(2 * uExt.x.degree() + 2, mesh.hx(), mesh.hy());
    double num = 0, den = 0;
    for (int j : cc.cutCells())
        for (int q = 0; q < vol.size(); ++q) {
            Vec2 g = phiEvo.gradRef(j, vol.nodes[q].x(), vol.nodes[q].y());
            double gn = g.norm();
            if (gn > 1e-12) g /= gn;
            for (const DgField* f : {&uExt.x, &uExt.y}) {
                Vec2 gu = f->gradRef(j, vol.nodes[q].x(), vol.nodes[q].y());
                num += vol.weights[q] * (g.dot(gu)) * (g.dot(gu));
                den += vol.weights[q] * gu.squaredNorm();
            }
        }
    return den > 1e-14 ? num / den : 0.0;
}

namespace {

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

struct NbSeg {
    int cell;
    Vec2 shift;       // virtual position minus actual (periodic wrap)
    Vec2 segA, segB;  // shared boundary segment in j's frame
};

std::vector<NbSeg> acceptedSegments(const BackgroundMesh& mesh, int j,
                                    const std::vector<char>& accepted) {
    double hx = mesh.hx(), hy = mesh.hy();
    Vec2 cj = mesh.cellCenter(j);
    std::vector<NbSeg> nbs;
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
    return nbs;
}

// Minimize cost over [0,1] by a coarse scan plus golden-section polish.
double minimizeOnSegment(const std::function<double(double)>& cost, int nSamp) {
    double tBest = 0.5, cBest = std::numeric_limits<double>::infinity();
    for (int s = 0; s < nSamp; ++s) {
        double t = double(s) / (nSamp - 1);
        double c = cost(t);
        if (c < cBest) {
            cBest = c;
            tBest = t;
        }
    }
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
    return 0.5 * (lo + hi);
}

}  // namespace

void fastMarchExtension(VectorField& uExt, const CutCellData& cc, const NarrowBand& band,
                        const DgField& phiEvo) {
    const BackgroundMesh& mesh = phiEvo.mesh();
    int k = uExt.x.degree();
    const GaussRule1d& g = gaussLegendre(k + 2);
    const int nLat = k + 2;
    const int nSamp = k + 5;
    double hx = mesh.hx(), hy = mesh.hy();

    for (int side : {-1, +1}) {
        std::vector<char> accepted(mesh.numCells(), 0);
        for (int j : band.cut) accepted[j] = 1;
        std::vector<int> close;
        for (int j : band.nearCells) {
            double m = phiEvo.cellMean(j);
            if ((side < 0 && m < 0) || (side > 0 && m >= 0)) close.push_back(j);
        }
        std::sort(close.begin(), close.end(), [&](int a, int b) {
            return std::abs(phiEvo.cellMean(a)) < std::abs(phiEvo.cellMean(b));
        });

        for (int j : close) {
            std::vector<NbSeg> nbs = acceptedSegments(mesh, j, accepted);
            if (nbs.empty())
                throw std::runtime_error("fast march extension: near cell " + std::to_string(j) +
                                         " has no accepted neighbor");

            Eigen::VectorXd cx = Eigen::VectorXd::Zero(uExt.x.blockSize());
            Eigen::VectorXd cy = cx;
            for (int iy = 0; iy < nLat; ++iy)
                for (int ix = 0; ix < nLat; ++ix) {
                    Vec2 ref(g.nodes[ix], g.nodes[iy]);
                    Vec2 x = mesh.toPhysical(j, ref);
                    double phiX = phiEvo.evalRef(j, ref.x(), ref.y());
                    double best = std::numeric_limits<double>::infinity();
                    Vec2 bestVal = Vec2::Zero();
                    for (const NbSeg& nb : nbs) {
                        // deviation from the characteristic through x: on it,
                        // |x - y| equals the difference of the distance values
                        auto cost = [&](double t) {
                            Vec2 y = nb.segA + t * (nb.segB - nb.segA);
                            double phiY = phiEvo.evalPhys(nb.cell, y - nb.shift);
                            return (x - y).norm() - std::abs(phiX - phiY);
                        };
                        bool pointNb = (nb.segA - nb.segB).norm() < 1e-14;
                        double t = pointNb ? 0.5 : minimizeOnSegment(cost, nSamp);
                        double c = cost(t);
                        if (c < best) {
                            best = c;
                            Vec2 y = nb.segA + t * (nb.segB - nb.segA);
                            bestVal = {uExt.x.evalPhys(nb.cell, y - nb.shift),
                                       uExt.y.evalPhys(nb.cell, y - nb.shift)};
                        }
                    }
                    double w = g.weights[ix] * g.weights[iy] * hx * hy / 4;
                    Eigen::VectorXd ph = uExt.x.basis().eval(ref.x(), ref.y());
                    cx += w * bestVal.x() * ph;
                    cy += w * bestVal.y() * ph;
                }
            uExt.x.cell(j) = cx;
            uExt.y.cell(j) = cy;
            accepted[j] = 1;
        }
    }
}

namespace {

// Spatial residual L(phi) of the upwind DG advection, restricted to the band.
Eigen::VectorXd advectionResidual(const DgField& phi, const VectorField& u,
                                  const NarrowBand& band) {
    const BackgroundMesh& mesh = phi.mesh();
    const ModalBasis& basis = phi.basis();
    int N = basis.size();
    int k = phi.degree();
    double hx = mesh.hx(), hy = mesh.hy();
    Eigen::VectorXd R = Eigen::VectorXd::Zero(phi.coeffs().size());

    QuadRule vol = cellQuadrature(2 * k + 2, hx, hy);
    std::vector<int> cells;
    cells.insert(cells.end(), band.cut.begin(), band.cut.end());
    cells.insert(cells.end(), band.nearCells.begin(), band.nearCells.end());
    for (int j : cells) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(N);
        for (int q = 0; q < vol.size(); ++q) {
            const Vec2& ref = vol.nodes[q];
            Vec2 g = phi.gradRef(j, ref.x(), ref.y());
            Vec2 uv(u.x.evalRef(j, ref.x(), ref.y()), u.y.evalRef(j, ref.x(), ref.y()));
            r -= vol.weights[q] * uv.dot(g) * basis.eval(ref.x(), ref.y());
        }
        R.segment(j * N, N) += r;
    }

    const GaussRule1d& eg = gaussLegendre(k + 2);
    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (ed.isBoundary()) continue;
        bool innerIn = band.inBand(ed.inner), outerIn = band.inBand(ed.outer);
        if (!innerIn && !outerIn) continue;
        // band-boundary edges use the inner trace on both sides: zero jump
        if (!innerIn || !outerIn) continue;
        Vec2 dir = (ed.axis == 0) ? Vec2(0, 1) : Vec2(1, 0);
        for (int q = 0; q < int(eg.nodes.size()); ++q) {
            double w = eg.weights[q] * ed.length / 2;
            Vec2 p = ed.midpoint + eg.nodes[q] * (ed.length / 2) * dir;
            Vec2 ri = mesh.toReference(ed.inner, p);
            Vec2 ro = mesh.toReference(ed.outer, p - ed.outerShift);
            Vec2 ui(u.x.evalRef(ed.inner, ri.x(), ri.y()), u.y.evalRef(ed.inner, ri.x(), ri.y()));
            Vec2 uo(u.x.evalRef(ed.outer, ro.x(), ro.y()), u.y.evalRef(ed.outer, ro.x(), ro.y()));
            double s = 0.5 * (ui + uo).dot(ed.normal);  // {u}.n, n points inner -> outer
            double fi = phi.evalRef(ed.inner, ri.x(), ri.y());
            double fo = phi.evalRef(ed.outer, ro.x(), ro.y());
            double up = s >= 0 ? fi : fo;  // ties resolve to the inner trace
            // cell residual: - (u.n_out)(phi_up - phi_own) theta
            R.segment(ed.inner * N, N) -= w * s * (up - fi) * basis.eval(ri.x(), ri.y());
            R.segment(ed.outer * N, N) -= w * (-s) * (up - fo) * basis.eval(ro.x(), ro.y());
        }
    }
    return R;
}

}  // namespace

void advectRk3(DgField& phiEvo, const VectorField& uExt, double dt, const NarrowBand& band) {
    const BackgroundMesh& mesh = phiEvo.mesh();
    double umax = 0;
    for (int j : band.cut) umax = std::max(umax, uExt.evalPhys(j, mesh.cellCenter(j)).norm());
    for (int j : band.nearCells)
        umax = std::max(umax, uExt.evalPhys(j, mesh.cellCenter(j)).norm());
    if (umax * dt / mesh.h() > 1.0)
        std::cerr << "advect_rk3: CFL number " << umax * dt / mesh.h() << " exceeds 1\n";

    // mass matrix is the identity (orthonormal basis), so stages are explicit
    Eigen::VectorXd p0 = phiEvo.coeffs();
    Eigen::VectorXd p1 = p0 + dt * advectionResidual(phiEvo, uExt, band);
    phiEvo.coeffs() = p1;
    Eigen::VectorXd p2 =
        0.75 * p0 + 0.25 * (p1 + dt * advectionResidual(phiEvo, uExt, band));
    phiEvo.coeffs() = p2;
    phiEvo.coeffs() =
        (1.0 / 3.0) * p0 + (2.0 / 3.0) * (p2 + dt * advectionResidual(phiEvo, uExt, band));
}

void jumpPenalize(DgField& phiEvo, double dt, const NarrowBand& band) {
    const BackgroundMesh& mesh = phiEvo.mesh();
    const ModalBasis& basis = phiEvo.basis();
    int N = basis.size();
    int k = phiEvo.degree();
    const double etaEvo = 10.0;
    double dtp = 0.001 * dt;
    double h = mesh.h();

    std::vector<int> cells;
    cells.insert(cells.end(), band.cut.begin(), band.cut.end());
    cells.insert(cells.end(), band.nearCells.begin(), band.nearCells.end());
    if (cells.empty()) return;
    std::vector<int> local(mesh.numCells(), -1);
    for (size_t i = 0; i < cells.size(); ++i) local[cells[i]] = static_cast<int>(i);
    int ndof = static_cast<int>(cells.size()) * N;

    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < ndof; ++i) trips.emplace_back(i, i, 1.0);

    const GaussRule1d& eg = gaussLegendre(k + 2);
    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (ed.isBoundary()) continue;
        if (local[ed.inner] < 0 || local[ed.outer] < 0) continue;
        int li = local[ed.inner], lo = local[ed.outer];
        Vec2 dir = (ed.axis == 0) ? Vec2(0, 1) : Vec2(1, 0);
        Eigen::MatrixXd Aii = Eigen::MatrixXd::Zero(N, N), Aio = Aii, Aoo = Aii;
        for (int q = 0; q < int(eg.nodes.size()); ++q) {
            double w = eg.weights[q] * ed.length / 2 * dtp * etaEvo / h;
            Vec2 p = ed.midpoint + eg.nodes[q] * (ed.length / 2) * dir;
            Vec2 ri = mesh.toReference(ed.inner, p);
            Vec2 ro = mesh.toReference(ed.outer, p - ed.outerShift);
            Eigen::VectorXd vi = basis.eval(ri.x(), ri.y());
            Eigen::VectorXd vo = basis.eval(ro.x(), ro.y());
            Aii += w * vi * vi.transpose();
            Aio -= w * vi * vo.transpose();
            Aoo += w * vo * vo.transpose();
        }
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) {
                if (Aii(r, c) != 0) trips.emplace_back(li * N + r, li * N + c, Aii(r, c));
                if (Aio(r, c) != 0) {
                    trips.emplace_back(li * N + r, lo * N + c, Aio(r, c));
                    trips.emplace_back(lo * N + c, li * N + r, Aio(r, c));
                }
                if (Aoo(r, c) != 0) trips.emplace_back(lo * N + r, lo * N + c, Aoo(r, c));
            }
    }

    Eigen::SparseMatrix<double> M(ndof, ndof);
    M.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd rhs(ndof);
    for (size_t i = 0; i < cells.size(); ++i)
        rhs.segment(i * N, N) = phiEvo.cell(cells[i]);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(M);
    Eigen::VectorXd sol = ldlt.solve(rhs);
    for (size_t i = 0; i < cells.size(); ++i) phiEvo.cell(cells[i]) = sol.segment(i * N, N);
}

namespace {

// Pin far cells to the constants -1 (inside A) / +1 (inside B).
void setFarConstants(DgField& phiEvo, const CutCellData& cc, const NarrowBand& band) {
    const BackgroundMesh& mesh = phiEvo.mesh();
    double c0 = std::sqrt(mesh.hx() * mesh.hy());  // constant-mode coefficient of value 1
    for (int j = 0; j < mesh.numCells(); ++j) {
        if (band.inBand(j)) continue;
        double sign = cc.kind(j) == CellKind::PureA ? -1.0 : 1.0;
        phiEvo.cell(j).setZero();
        phiEvo.cell(j)[0] = sign * c0;
    }
}

}  // namespace

LevelSetState LevelSetState::init(const BackgroundMesh& mesh, int degree, const ScalarFunc& phi0,
                                  int quadOrder) {
    DgField phiEvo(mesh, degree);
    phiEvo.project(phi0);
    CutCellData ccEvo(mesh, phiEvo, quadOrder);
    NarrowBand bandEvo = updateNarrowBand(mesh, ccEvo);
    DgField phi = continuityProject(phiEvo, bandEvo);
    auto cc = std::make_unique<CutCellData>(mesh, phi, quadOrder);
    NarrowBand band = updateNarrowBand(mesh, *cc);
    // pin far constants against the final band so no band cell starts out
    // holding a degenerate constant
    setFarConstants(phiEvo, *cc, band);
    return LevelSetState{std::move(phiEvo), std::move(phi), std::move(cc), std::move(band)};
}

void updateLevelSet(LevelSetState& st, const XdgField& ux, const XdgField& uy, double dt,
                    const LevelSetOptions& opt) {
    const BackgroundMesh& mesh = st.phiEvo.mesh();
    int quadOrder = st.cc->quadOrder();

    VectorField uAver = densityAverage(ux, uy, opt.rhoA, opt.rhoB, *st.cc);

    // cells that entered the band since the last step still hold far-field
    // constants; fill just those by marching from the valid band cells
    std::vector<int> fresh;
    for (int j : st.band.nearCells)
        if (st.phiEvo.gradPhys(j, mesh.cellCenter(j)).norm() < 1e-12) fresh.push_back(j);
    if (!fresh.empty()) fastMarchReinit(st.phiEvo, *st.cc, st.band, &fresh);

    VectorField uExt = ellipticExtension(uAver, *st.cc, st.phiEvo);
    fastMarchExtension(uExt, *st.cc, st.band, st.phiEvo);

    advectRk3(st.phiEvo, uExt, dt, st.band);
    jumpPenalize(st.phiEvo, dt, st.band);

    if (opt.fullReinit) {
        CutCellData ccEvo(mesh, st.phiEvo, quadOrder);
        gradientRenormalize(st.phiEvo, ccEvo, opt.epsReinit);
    }

    // project on the pre-update band: every cell of it carries valid advected
    // data, while cells entering the new band still hold far-field constants
    // (they are re-marched at the start of the next step)
    st.phi = continuityProject(st.phiEvo, st.band);
    st.cc = std::make_unique<CutCellData>(mesh, st.phi, quadOrder);
    st.band = updateNarrowBand(mesh, *st.cc);
    setFarConstants(st.phiEvo, *st.cc, st.band);
}

}  // namespace xnse
