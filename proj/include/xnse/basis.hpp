#pragma once

#include <Eigen/Dense>
#include <vector>

namespace xnse {

/// Modal tensor-Legendre basis on the reference square [-1,1]^2, truncated to
/// total degree <= k, scaled so modes are orthonormal on a physical cell of
/// size hx x hy.  Mode m has exponents (px(m), py(m)).
class ModalBasis {
public:
    ModalBasis(int degree, double hx, double hy);

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(px_.size()); }
    int px(int m) const { return px_[m]; }
    int py(int m) const { return py_[m]; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

    /// Values of all modes at reference point (xi, eta).
    Eigen::VectorXd eval(double xi, double eta) const;
    /// Gradients w.r.t. physical coordinates (rows: modes, cols: d/dx, d/dy),
    /// evaluated at reference point (xi, eta).
    Eigen::MatrixXd evalGrad(double xi, double eta) const;

    /// Legendre values P_0..P_n at t (valid for any real t, also outside
    /// [-1,1], which agglomeration extension needs).
    static std::vector<double> legendre(int n, double t);
    static std::vector<double> legendreDeriv(int n, double t);

    static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

private:
    int degree_;
    double hx_, hy_;
    std::vector<int> px_, py_;
    std::vector<double> scale_;  // sqrt((2i+1)(2j+1)/(hx*hy))
};

}  // namespace xnse
