#include "xnse/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace xnse {

namespace {

// Newton iteration on Legendre roots (Golub-Welsch is overkill here).
GaussRule1d computeGauss(int n) {
    GaussRule1d r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0, p1 = 0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at converged x
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule1d& gaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("gaussLegendre: need n >= 1");
    static std::map<int, GaussRule1d> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, computeGauss(n)).first;
    return it->second;
}

std::vector<double> gaussLobattoNodes(int n) {
    if (n < 2) throw std::invalid_argument("gaussLobattoNodes: need n >= 2");
    // Roots of (1-x^2) P'_{n-1}(x): endpoints plus interior Newton solve.
    std::vector<double> x(n);
    x[0] = -1.0;
    x[n - 1] = 1.0;
    int m = n - 1;  // Legendre degree whose derivative roots we need
    for (int i = 1; i < n - 1; ++i) {
        double xi = std::cos(M_PI * i / m);  // Chebyshev initial guess (descending)
        for (int it = 0; it < 100; ++it) {
            // P_m and derivatives at xi
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = m * (xi * p1 - p0) / (xi * xi - 1.0);
            double d2p = (2.0 * xi * dp - m * (m + 1) * p1) / (1.0 - xi * xi);
            double dx = dp / d2p;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x[n - 1 - i] = xi;
    }
    return x;
}

QuadRule cellQuadrature(int exactness, double hx, double hy) {
    int n = exactness / 2 + 1;
    const GaussRule1d& g = gaussLegendre(n);
    QuadRule q;
    double jac = hx * hy / 4.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            q.nodes.emplace_back(g.nodes[i], g.nodes[j]);
            q.weights.push_back(g.weights[i] * g.weights[j] * jac);
        }
    return q;
}

QuadRule edgeQuadrature(int exactness, double length) {
    int n = exactness / 2 + 1;
    const GaussRule1d& g = gaussLegendre(n);
    QuadRule q;
    for (int i = 0; i < n; ++i) {
        q.nodes.emplace_back(g.nodes[i], 0.0);
        q.weights.push_back(g.weights[i] * length / 2.0);
    }
    return q;
}

}  // namespace xnse
