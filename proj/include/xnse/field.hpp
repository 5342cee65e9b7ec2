#pragma once

#include <functional>

#include "xnse/basis.hpp"
#include "xnse/mesh.hpp"
#include "xnse/quadrature.hpp"

namespace xnse {

using ScalarFunc = std::function<double(const Vec2&)>;

/// Scalar DG field: one modal coefficient block per background cell.
class DgField {
public:
    DgField(const BackgroundMesh& mesh, int degree);

    const BackgroundMesh& mesh() const { return *mesh_; }
    const ModalBasis& basis() const { return basis_; }
    int degree() const { return basis_.degree(); }
    int blockSize() const { return basis_.size(); }

    Eigen::VectorXd& coeffs() { return coeffs_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    Eigen::VectorBlock<Eigen::VectorXd> cell(int j) {
        return coeffs_.segment(j * blockSize(), blockSize());
    }
    Eigen::VectorBlock<const Eigen::VectorXd> cell(int j) const {
        return coeffs_.segment(j * blockSize(), blockSize());
    }

    /// L2 projection of f (exactness degree controls the quadrature used).
    void project(const ScalarFunc& f, int extraExactness = 2);
    /// Project onto a single cell only.
    void projectCell(int j, const ScalarFunc& f, int extraExactness = 2);

    /// Evaluate at a physical point (cell located by coordinates).
    double eval(const Vec2& x) const;
    /// Evaluate in a given cell at a reference point.
    double evalRef(int j, double xi, double eta) const;
    double evalPhys(int j, const Vec2& x) const;
    /// Physical gradient in cell j at a reference point.
    Vec2 gradRef(int j, double xi, double eta) const;
    Vec2 gradPhys(int j, const Vec2& x) const;

    /// Cell containing physical point x (clamped to the domain).
    int locate(const Vec2& x) const;

    double cellMean(int j) const;

private:
    const BackgroundMesh* mesh_;
    ModalBasis basis_;
    Eigen::VectorXd coeffs_;
};

}  // namespace xnse
