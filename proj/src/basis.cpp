#include "xnse/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace xnse {

ModalBasis::ModalBasis(int degree, double hx, double hy) : degree_(degree), hx_(hx), hy_(hy) {
    if (degree < 0) throw std::invalid_argument("basis: degree must be >= 0");
    if (!(hx > 0) || !(hy > 0)) throw std::invalid_argument("basis: cell size must be positive");
    // Order by total degree, then by x-exponent.
    for (int d = 0; d <= degree; ++d) {
        for (int i = d; i >= 0; --i) {
            int j = d - i;
            px_.push_back(i);
            py_.push_back(j);
            scale_.push_back(std::sqrt((2.0 * i + 1.0) * (2.0 * j + 1.0) / (hx * hy)));
        }
    }
}

std::vector<double> ModalBasis::legendre(int n, double t) {
    std::vector<double> p(n + 1);
    p[0] = 1.0;
    if (n >= 1) p[1] = t;
    for (int k = 2; k <= n; ++k) p[k] = ((2 * k - 1) * t * p[k - 1] - (k - 1) * p[k - 2]) / k;
    return p;
}

std::vector<double> ModalBasis::legendreDeriv(int n, double t) {
    std::vector<double> p = legendre(n, t);
    std::vector<double> dp(n + 1);
    dp[0] = 0.0;
    if (n >= 1) dp[1] = 1.0;
    for (int k = 2; k <= n; ++k) dp[k] = dp[k - 2] + (2 * k - 1) * p[k - 1];
    return dp;
}

Eigen::VectorXd ModalBasis::eval(double xi, double eta) const {
    std::vector<double> Lx = legendre(degree_, xi);
    std::vector<double> Ly = legendre(degree_, eta);
    Eigen::VectorXd v(size());
    for (int m = 0; m < size(); ++m) v[m] = scale_[m] * Lx[px_[m]] * Ly[py_[m]];
    return v;
}

Eigen::MatrixXd ModalBasis::evalGrad(double xi, double eta) const {
    std::vector<double> Lx = legendre(degree_, xi);
    std::vector<double> Ly = legendre(degree_, eta);
    std::vector<double> dLx = legendreDeriv(degree_, xi);
    std::vector<double> dLy = legendreDeriv(degree_, eta);
    Eigen::MatrixXd g(size(), 2);
    for (int m = 0; m < size(); ++m) {
        // chain rule: d xi / dx = 2/hx
        g(m, 0) = scale_[m] * dLx[px_[m]] * Ly[py_[m]] * (2.0 / hx_);
        g(m, 1) = scale_[m] * Lx[px_[m]] * dLy[py_[m]] * (2.0 / hy_);
    }
    return g;
}

}  // namespace xnse
