#include "xnse/cutcell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xnse {

namespace {

constexpr int kMaxDepth = 8;
constexpr double kFracDrop = 1e-14;  // below this a species part is discarded

// Root of f on [lo,hi] given f(lo), f(hi) with opposite signs: bisection with
// a Newton polish through df.
template <class F, class DF>
double findRoot(const F& f, const DF& df, double lo, double hi, double flo, double fhi) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double a = lo, b = hi, fa = flo;
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        double d = df(x);
        if (std::abs(d) < 1e-300) break;
        double xn = x - f(x) / d;
        if (xn < lo || xn > hi) break;
        x = xn;
    }
    return x;
}

double horner(const std::vector<double>& c, int deg, double t) {
    double v = c[deg];
    for (int k = deg - 1; k >= 0; --k) v = v * t + c[k];
    return v;
}

// All real roots of the monomial polynomial c (degree deg) inside [a,b],
// bracketed between the stationary points so that paired roots from
// near-tangent interfaces are never lost.  Stationary points at which the
// polynomial nearly vanishes count as (tangency) roots too.
void polyRoots(const std::vector<double>& c, int deg, double a, double b, double tol,
               std::vector<double>& out) {
    if (deg < 1) return;
    if (deg == 1) {
        if (c[1] != 0.0) {
            double r = -c[0] / c[1];
            if (r >= a && r <= b) out.push_back(r);
        }
        return;
    }
    std::vector<double> dc(deg);
    for (int k = 1; k <= deg; ++k) dc[k - 1] = k * c[k];
    std::vector<double> stat;
    polyRoots(dc, deg - 1, a, b, tol, stat);
    std::sort(stat.begin(), stat.end());
    std::vector<double> brk{a};
    for (double s : stat)
        if (s > brk.back()) brk.push_back(s);
    if (b > brk.back()) brk.push_back(b);
    auto p = [&](double t) { return horner(c, deg, t); };
    auto dp = [&](double t) { return horner(dc, deg - 1, t); };
    for (size_t i = 0; i + 1 < brk.size(); ++i) {
        double lo = brk[i], hi = brk[i + 1];
        double flo = p(lo), fhi = p(hi);
        if ((flo < 0) != (fhi < 0) || flo == 0.0)
            out.push_back(findRoot(p, dp, lo, hi, flo, fhi));
    }
    for (double s : stat)
        if (std::abs(p(s)) <= tol) out.push_back(s);
}

// All real roots in [lo,hi] of a function known to be a polynomial of the
// given degree along the line: interpolate exactly at Chebyshev points, then
// bracket between stationary points.
template <class F>
std::vector<double> lineRoots(const F& f, int degree, double lo, double hi) {
    int n = degree + 1;
    Eigen::VectorXd xs(n), ys(n);
    double scale = 0;
    for (int i = 0; i < n; ++i) {
        double c = std::cos(M_PI * (2 * i + 1) / (2 * n));  // in (-1,1)
        xs[i] = c;
        ys[i] = f(0.5 * (lo + hi) + 0.5 * (hi - lo) * c);
        scale = std::max(scale, std::abs(ys[i]));
    }
    std::vector<double> roots;
    if (scale == 0) return roots;  // identically zero: grazing along the line
    Eigen::MatrixXd V(n, n);
    for (int i = 0; i < n; ++i) {
        double p = 1;
        for (int jj = 0; jj < n; ++jj) {
            V(i, jj) = p;
            p *= xs[i];
        }
    }
    Eigen::VectorXd cf = V.fullPivLu().solve(ys);
    int deg = n - 1;
    while (deg > 0 && std::abs(cf[deg]) < 1e-13 * scale) --deg;
    if (deg == 0) return roots;
    std::vector<double> c(cf.data(), cf.data() + deg + 1);
    std::vector<double> tr;
    polyRoots(c, deg, -1.0, 1.0, 1e-11 * scale, tr);
    for (double t : tr) roots.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * t);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return b - a < 1e-12 * (hi - lo); }),
                roots.end());
    return roots;
}

// Roots of an edge trace at which the sign genuinely flips; tangential
// grazing (double roots) produces no crossing.
template <class F>
std::vector<double> signChangeRoots(const F& f, int degree, double eps) {
    std::vector<double> out;
    for (double r : lineRoots(f, degree, -1.0, 1.0)) {
        double d = 1e-5;
        double fl = f(std::max(r - d, -1.0)), fr = f(std::min(r + d, 1.0));
        if ((fl < -eps && fr > eps) || (fl > eps && fr < -eps)) out.push_back(r);
    }
    return out;
}

}  // namespace

CutCellData::CutCellData(const BackgroundMesh& mesh, const DgField& phi, int quadOrder)
    : mesh_(&mesh), quadOrder_(quadOrder), n1d_(quadOrder / 2 + 1) {
    classify(phi);

    cutIndex_.assign(mesh.numCells(), -1);
    // Build rules for cut candidates; drop to pure when a species fraction
    // vanishes numerically.
    for (int j = 0; j < mesh.numCells(); ++j) {
        if (kind_[j] != CellKind::Cut) continue;
        CutRules r;
        buildCutRules(phi, j, r);
        if (r.fracA < kFracDrop) {
            kind_[j] = CellKind::PureB;
            continue;
        }
        if (r.fracB < kFracDrop) {
            kind_[j] = CellKind::PureA;
            continue;
        }
        cutIndex_[j] = static_cast<int>(rules_.size());
        rules_.push_back(std::move(r));
        cutCells_.push_back(j);
    }

    buildEdgeRules(phi);
    buildCrossings(phi);
}

void CutCellData::classify(const DgField& phi) {
    kind_.assign(mesh_->numCells(), CellKind::PureA);
    const double eps = 1e-10 * mesh_->h();
    const int ns = 16;
    for (int j = 0; j < mesh_->numCells(); ++j) {
        double mn = 1e300, mx = -1e300;
        for (int iy = 0; iy <= ns; ++iy) {
            for (int ix = 0; ix <= ns; ++ix) {
                double v = phi.evalRef(j, -1.0 + 2.0 * ix / ns, -1.0 + 2.0 * iy / ns);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
        }
        // Samples with |phi| below the grazing tolerance count as both signs,
        // forcing the cut classification; zero-fraction cut candidates drop
        // back to pure after the rules are built.
        if (mn < eps && mx > -eps)
            kind_[j] = CellKind::Cut;
        else if (mx < eps)
            kind_[j] = CellKind::PureA;
        else
            kind_[j] = CellKind::PureB;
    }
}

void CutCellData::buildCutRules(const DgField& phi, int j, CutRules& out) const {
    decompose(phi, j, -1.0, 1.0, -1.0, 1.0, 0, out);
    double area = mesh_->cellArea();
    out.fracA = out.volA.totalWeight() / area;
    out.fracB = out.volB.totalWeight() / area;
    out.ifaceLength = out.iface.totalWeight();
}

void CutCellData::decompose(const DgField& phi, int j, double ax, double bx, double ay, double by,
                            int depth, CutRules& out) const {
    const double hx = mesh_->hx(), hy = mesh_->hy();
    const double eps = 1e-10 * mesh_->h();

    // Uniform-sign shortcut: no interface inside this box.
    const int ns = 8;
    double mn = 1e300, mx = -1e300;
    for (int iy = 0; iy <= ns; ++iy)
        for (int ix = 0; ix <= ns; ++ix) {
            double v = phi.evalRef(j, ax + (bx - ax) * ix / ns, ay + (by - ay) * iy / ns);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
    if (mn > -eps || mx < eps) {
        QuadRule& dst = (mn > -eps) ? out.volB : out.volA;
        const GaussRule1d& g = gaussLegendre(n1d_);
        double jac = (bx - ax) * 0.5 * (hx / 2) * (by - ay) * 0.5 * (hy / 2);
        for (int i = 0; i < n1d_; ++i)
            for (int k = 0; k < n1d_; ++k) {
                double xi = 0.5 * (ax + bx) + 0.5 * (bx - ax) * g.nodes[i];
                double eta = 0.5 * (ay + by) + 0.5 * (by - ay) * g.nodes[k];
                dst.nodes.emplace_back(xi, eta);
                dst.weights.push_back(g.weights[i] * g.weights[k] * jac);
            }
        return;
    }

    // Pick a height direction along which the level set is monotone; with a
    // choice, take the one with the stronger gradient component so the graph
    // slope stays bounded.
    bool okY = true, okX = true;
    int sgnY = 0, sgnX = 0;
    double minAbsX = 1e300, minAbsY = 1e300;
    for (int iy = 0; iy <= ns && (okX || okY); ++iy)
        for (int ix = 0; ix <= ns; ++ix) {
            Vec2 g = phi.gradRef(j, ax + (bx - ax) * ix / ns, ay + (by - ay) * iy / ns);
            int sx = g.x() > 1e-12 ? 1 : (g.x() < -1e-12 ? -1 : 0);
            int sy = g.y() > 1e-12 ? 1 : (g.y() < -1e-12 ? -1 : 0);
            if (sy == 0 || (sgnY != 0 && sy != sgnY)) okY = false;
            if (sy != 0 && sgnY == 0) sgnY = sy;
            if (sx == 0 || (sgnX != 0 && sx != sgnX)) okX = false;
            if (sx != 0 && sgnX == 0) sgnX = sx;
            minAbsX = std::min(minAbsX, std::abs(g.x()));
            minAbsY = std::min(minAbsY, std::abs(g.y()));
        }

    int heightDir;
    if (okY && (!okX || minAbsY >= minAbsX))
        heightDir = 1;
    else if (okX)
        heightDir = 0;
    else {
        if (depth >= kMaxDepth)
            throw std::runtime_error("cut-cell quadrature: no monotone direction found in cell " +
                                     std::to_string(j) + " after max subdivision");
        double mxm = 0.5 * (ax + bx), mym = 0.5 * (ay + by);
        decompose(phi, j, ax, mxm, ay, mym, depth + 1, out);
        decompose(phi, j, mxm, bx, ay, mym, depth + 1, out);
        decompose(phi, j, ax, mxm, mym, by, depth + 1, out);
        decompose(phi, j, mxm, bx, mym, by, depth + 1, out);
        return;
    }

    // Graph case: interface is the graph of a function of the base coordinate.
    const GaussRule1d& g = gaussLegendre(n1d_);
    double baseLo = heightDir == 1 ? ax : ay;
    double baseHi = heightDir == 1 ? bx : by;
    double hgtLo = heightDir == 1 ? ay : ax;
    double hgtHi = heightDir == 1 ? by : bx;
    double basePhysHalf = (heightDir == 1 ? hx : hy) / 2;
    double hgtPhysHalf = (heightDir == 1 ? hy : hx) / 2;

    auto at = [&](double base, double hgt) {
        return heightDir == 1 ? Vec2(base, hgt) : Vec2(hgt, base);
    };

    // Split the base interval where the interface crosses the bottom or top
    // face, so every column strip is either fully crossed or untouched and
    // the height function stays smooth within a strip.
    std::vector<double> splits{baseLo, baseHi};
    for (double hgt : {hgtLo, hgtHi}) {
        auto ff = [&](double s) {
            Vec2 r = at(s, hgt);
            return phi.evalRef(j, r.x(), r.y());
        };
        for (double r : lineRoots(ff, phi.degree(), baseLo, baseHi)) splits.push_back(r);
    }
    std::sort(splits.begin(), splits.end());

    // Face values below this are sign noise: the interface grazes the face
    // there, so the column still carries an interface node at the face.
    const double tolF = 1e-12 * std::max(std::abs(mn), std::abs(mx));

    for (size_t si = 0; si + 1 < splits.size(); ++si) {
        double sLo = splits[si], sHi = splits[si + 1];
        if (sHi - sLo < 1e-13) continue;
        for (int i = 0; i < n1d_; ++i) {
            double base = 0.5 * (sLo + sHi) + 0.5 * (sHi - sLo) * g.nodes[i];
            double wBase = g.weights[i] * 0.5 * (sHi - sLo) * basePhysHalf;

            auto f = [&](double t) {
                Vec2 r = at(base, t);
                return phi.evalRef(j, r.x(), r.y());
            };
            auto df = [&](double t) {
                Vec2 r = at(base, t);
                Vec2 gr = phi.gradRef(j, r.x(), r.y());
                return (heightDir == 1 ? gr.y() * hy : gr.x() * hx) / 2;
            };

            auto addSegment = [&](double lo, double hi, QuadRule& dst) {
                if (hi - lo < 1e-14) return;
                double jac = wBase * 0.5 * (hi - lo) * hgtPhysHalf;
                for (int k = 0; k < n1d_; ++k) {
                    double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.nodes[k];
                    Vec2 r = at(base, t);
                    dst.nodes.emplace_back(r.x(), r.y());
                    dst.weights.push_back(g.weights[k] * jac);
                }
            };

            double flo = f(hgtLo), fhi = f(hgtHi);
            bool zlo = std::abs(flo) <= tolF, zhi = std::abs(fhi) <= tolF;
            double root;
            if (zlo && !zhi) {
                root = hgtLo;
                addSegment(hgtLo, hgtHi, fhi < 0 ? out.volA : out.volB);
            } else if (zhi && !zlo) {
                root = hgtHi;
                addSegment(hgtLo, hgtHi, flo < 0 ? out.volA : out.volB);
            } else if ((flo < 0) == (fhi < 0)) {
                addSegment(hgtLo, hgtHi, flo < 0 ? out.volA : out.volB);
                continue;
            } else {
                root = findRoot(f, df, hgtLo, hgtHi, flo, fhi);
                addSegment(hgtLo, root, flo < 0 ? out.volA : out.volB);
                addSegment(root, hgtHi, flo < 0 ? out.volB : out.volA);
            }

            Vec2 r = at(base, root);
            Vec2 grad = phi.gradRef(j, r.x(), r.y());  // physical gradient
            double gn = grad.norm();
            if (gn < 1e-300) continue;
            double slope;  // d(height)/d(base) in physical coordinates
            if (heightDir == 1)
                slope = -grad.x() / grad.y();
            else
                slope = -grad.y() / grad.x();
            out.iface.nodes.emplace_back(r.x(), r.y());
            out.iface.weights.push_back(wBase * std::sqrt(1.0 + slope * slope));
            out.ifaceNormals.push_back(grad / gn);
        }
    }
}

void CutCellData::buildEdgeRules(const DgField& phi) {
    edgeRules_.assign(mesh_->numEdges(), EdgeRule{});
    const GaussRule1d& g = gaussLegendre(n1d_);

    for (int e = 0; e < mesh_->numEdges(); ++e) {
        const Edge& ed = mesh_->edge(e);
        EdgeRule& er = edgeRules_[e];

        bool innerCut = isCut(ed.inner);
        bool outerCut = ed.isInterior() && isCut(ed.outer);

        if (!innerCut && !outerCut) {
            int sIn = speciesOf(kind_[ed.inner]);
            int sOut = ed.isInterior() ? speciesOf(kind_[ed.outer]) : sIn;
            if (sIn == sOut) {
                QuadRule& dst = (sIn == 0) ? er.a : er.b;
                for (int i = 0; i < n1d_; ++i) {
                    dst.nodes.emplace_back(g.nodes[i], 0.0);
                    dst.weights.push_back(g.weights[i] * ed.length / 2);
                }
                continue;
            }
            // fall through: species disagree across a grazing edge; split by trace
        }

        // Trace from a cut cell (prefer inner).
        int traceCell = innerCut ? ed.inner : (outerCut ? ed.outer : ed.inner);
        Vec2 shift = (traceCell == ed.outer && ed.periodic) ? ed.outerShift : Vec2(0, 0);
        Vec2 dir = (ed.axis == 0) ? Vec2(0, 1) : Vec2(1, 0);
        auto f = [&](double t) {
            Vec2 p = ed.midpoint + t * (ed.length / 2) * dir - shift;
            return phi.evalPhys(traceCell, p);
        };
        auto df = [&](double t) {
            Vec2 p = ed.midpoint + t * (ed.length / 2) * dir - shift;
            return phi.gradPhys(traceCell, p).dot(dir) * (ed.length / 2);
        };

        // Roots of the trace along the edge.
        std::vector<double> cuts{-1.0};
        for (double r : lineRoots(f, phi.degree(), -1.0, 1.0))
            if (r - cuts.back() > 1e-12) cuts.push_back(r);
        if (1.0 - cuts.back() > 1e-12)
            cuts.push_back(1.0);
        else
            cuts.back() = 1.0;

        for (size_t sgi = 0; sgi + 1 < cuts.size(); ++sgi) {
            double lo = cuts[sgi], hi = cuts[sgi + 1];
            if (hi - lo < 1e-12) continue;
            QuadRule& dst = (f(0.5 * (lo + hi)) < 0) ? er.a : er.b;
            for (int i = 0; i < n1d_; ++i) {
                double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.nodes[i];
                dst.nodes.emplace_back(t, 0.0);
                dst.weights.push_back(g.weights[i] * 0.5 * (hi - lo) * ed.length / 2);
            }
        }
    }
}

void CutCellData::buildCrossings(const DgField& phi) {
    for (int e = 0; e < mesh_->numEdges(); ++e) {
        const Edge& ed = mesh_->edge(e);
        bool innerCut = isCut(ed.inner);
        bool outerCut = ed.isInterior() && isCut(ed.outer);
        if (!innerCut && !outerCut) continue;

        int traceCell = innerCut ? ed.inner : ed.outer;
        Vec2 traceShift = (traceCell == ed.outer && ed.periodic) ? ed.outerShift : Vec2(0, 0);
        Vec2 dir = (ed.axis == 0) ? Vec2(0, 1) : Vec2(1, 0);
        auto f = [&](double t) {
            return phi.evalPhys(traceCell, ed.midpoint + t * (ed.length / 2) * dir - traceShift);
        };
        auto df = [&](double t) {
            Vec2 p = ed.midpoint + t * (ed.length / 2) * dir - traceShift;
            return phi.gradPhys(traceCell, p).dot(dir) * (ed.length / 2);
        };

        for (double r : signChangeRoots(f, phi.degree(), 1e-10 * mesh_->h())) {
            Crossing c;
            c.edge = e;
            c.point = ed.midpoint + r * (ed.length / 2) * dir;
            c.boundary = ed.isBoundary();
            auto conormal = [&](int cellJ, const Vec2& outward, const Vec2& shift) {
                Vec2 grad = phi.gradPhys(cellJ, c.point - shift);
                Vec2 tau(-grad.y(), grad.x());
                double n = tau.norm();
                if (n < 1e-300) return Vec2(0, 0);
                tau /= n;
                if (tau.dot(outward) < 0) tau = -tau;
                return tau;
            };
            if (innerCut) c.tauInner = conormal(ed.inner, ed.normal, Vec2(0, 0));
            if (outerCut)
                c.tauOuter =
                    conormal(ed.outer, -ed.normal, ed.periodic ? ed.outerShift : Vec2(0, 0));
            crossings_.push_back(c);
        }
    }
}

double CutCellData::frac(int j, int s) const {
    if (kind_[j] == CellKind::Cut) {
        const CutRules& r = rules_[cutIndex_[j]];
        return s == 0 ? r.fracA : r.fracB;
    }
    return speciesOf(kind_[j]) == s ? 1.0 : 0.0;
}

const CutRules& CutCellData::cutRules(int j) const {
    if (cutIndex_[j] < 0) throw std::logic_error("cutRules: cell is not cut");
    return rules_[cutIndex_[j]];
}

double CutCellData::ifaceLength(int j) const {
    return cutIndex_[j] >= 0 ? rules_[cutIndex_[j]].ifaceLength : 0.0;
}

double CutCellData::speciesPerimeter(int j, int s) const {
    double p = 0;
    for (int e : mesh_->cellEdges(j)) {
        if (e < 0) continue;
        const EdgeRule& er = edgeRules_[e];
        p += (s == 0 ? er.a : er.b).totalWeight();
    }
    return p + ifaceLength(j);
}

double CutCellData::totalIfaceLength() const {
    double s = 0;
    for (const CutRules& r : rules_) s += r.ifaceLength;
    return s;
}

double CutCellData::speciesArea(int s) const {
    double a = 0;
    for (int j = 0; j < mesh_->numCells(); ++j) a += frac(j, s) * mesh_->cellArea();
    return a;
}

}  // namespace xnse
