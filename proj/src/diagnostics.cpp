#include "xnse/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "xnse/quadrature.hpp"

namespace xnse {

double capillaryDt(const PhysicalParams& par, double h, int degree) {
    if (par.sigma <= 0.0) return std::numeric_limits<double>::infinity();
    double lmin = h / (degree + 1);
    return std::sqrt((par.rhoA + par.rhoB) * lmin * lmin * lmin / (2.0 * M_PI * par.sigma));
}

BubbleQuantities bubbleQuantities(const MixedSpace& space, const CutCellData& cc,
                                  const Eigen::VectorXd& x, const PhysicalParams& par) {
    const BackgroundMesh& mesh = cc.mesh();
    BubbleQuantities out;
    out.areaA = cc.speciesArea(0);
    if (out.areaA <= 0.0) throw std::runtime_error("phase A has no volume");
    out.ifaceLength = cc.totalIfaceLength();
    out.surfaceEnergy = par.sigma * out.ifaceLength;
    out.circularity =
        out.ifaceLength > 0.0 ? 2.0 * std::sqrt(M_PI * out.areaA) / out.ifaceLength : 0.0;

    QuadRule full = cellQuadrature(2 * space.degree() + 2, mesh.hx(), mesh.hy());
    double kin2 = 0.0, dis2 = 0.0;
    for (int j = 0; j < mesh.numCells(); ++j) {
        for (int s = 0; s < 2; ++s) {
            if (!cc.active(j, s)) continue;
            const QuadRule& q =
                cc.isCut(j) ? (s == 0 ? cc.cutRules(j).volA : cc.cutRules(j).volB) : full;
            double rho = par.rho(s);
            for (int i = 0; i < q.size(); ++i) {
                double w = q.weights[i];
                Vec2 ref = q.nodes[i];
                Vec2 u = space.velocity(x, j, s, ref);
                if (s == 0) {
                    Vec2 p = mesh.toPhysical(j, ref);
                    out.centerOfMass += w * p;
                    out.meanVelocity += w * u;
                }
                double ke = rho * u.squaredNorm();
                kin2 += w * ke * ke;
                Eigen::Matrix2d G = space.velocityGrad(x, j, s, ref);
                Eigen::Matrix2d D = 0.5 * (G + G.transpose());
                double tr = (D * D).trace();
                dis2 += w * tr * tr;
            }
        }
    }
    out.centerOfMass /= out.areaA;
    out.meanVelocity /= out.areaA;
    out.kineticEnergy = 0.5 * std::sqrt(kin2);
    out.dissipation = std::sqrt(dis2);

    double sd2 = 0.0;
    for (int j : cc.cutCells()) {
        const CutRules& r = cc.cutRules(j);
        for (int i = 0; i < r.iface.size(); ++i) {
            Vec2 ref = r.iface.nodes[i];
            const Vec2& n = r.ifaceNormals[i];
            Eigen::Matrix2d G = 0.5 * (space.velocityGrad(x, j, 0, ref) +
                                       space.velocityGrad(x, j, 1, ref));
            double div = G.trace() - n.dot(G * n);
            sd2 += r.iface.weights[i] * div * div;
        }
    }
    out.surfaceDivergence = std::sqrt(sd2);
    return out;
}

double waveAmplitude(const DgField& phi, double x) {
    const BackgroundMesh& m = phi.mesh();
    double xs = std::min(std::max(x, m.x0()), m.x1());
    int nsamp = 4 * m.ny();
    double ya = m.y0(), yb = m.y1();
    double prev = phi.eval(Vec2(xs, ya));
    double lo = ya, hi = ya;
    bool found = false;
    for (int i = 1; i <= nsamp; ++i) {
        double y = ya + (yb - ya) * i / nsamp;
        double v = phi.eval(Vec2(xs, y));
        if (prev == 0.0) return lo;
        if (prev * v < 0.0) {
            lo = ya + (yb - ya) * (i - 1) / nsamp;
            hi = y;
            found = true;
            break;
        }
        prev = v;
        lo = y;
    }
    if (!found) throw std::runtime_error("no interface crossing along the sampling line");
    double flo = phi.eval(Vec2(xs, lo));
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = phi.eval(Vec2(xs, mid));
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double ellipsePerimeter(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b <= 0.0) return 4.0 * a;
    double an = 1.0, bn = b / a;
    double e2 = 1.0 - bn * bn;
    double sum = 1.0 - 0.5 * e2;  // 1 - sum 2^(n-1) c_n^2, first term c_0^2 = e^2
    double c = std::sqrt(e2);
    double pow2 = 0.5;
    while (c > 1e-17) {
        double a2 = 0.5 * (an + bn), b2 = std::sqrt(an * bn);
        c = 0.5 * (an - bn);
        an = a2;
        bn = b2;
        pow2 *= 2.0;
        sum -= pow2 * c * c;
    }
    double K = M_PI / (2.0 * an);
    return 4.0 * a * sum * K;
}

}  // namespace xnse
