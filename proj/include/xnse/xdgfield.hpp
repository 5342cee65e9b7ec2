#pragma once

#include "xnse/cutcell.hpp"
#include "xnse/field.hpp"

namespace xnse {

/// Scalar field on the cut-cell mesh: every background cell carries one
/// coefficient block per species (A = 0 in {phi < 0}, B = 1 in {phi > 0}).
/// Storage is a fixed two-blocks-per-cell layout; which blocks are active is
/// decided by the cell classification, so the layout survives topology
/// changes between time levels.
class XdgField {
public:
    XdgField(const BackgroundMesh& mesh, int degree);

    const BackgroundMesh& mesh() const { return *mesh_; }
    const ModalBasis& basis() const { return basis_; }
    int degree() const { return basis_.degree(); }
    int blockSize() const { return basis_.size(); }

    Eigen::VectorXd& coeffs() { return coeffs_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }

    Eigen::VectorBlock<Eigen::VectorXd> block(int j, int s) {
        return coeffs_.segment((j * 2 + s) * blockSize(), blockSize());
    }
    Eigen::VectorBlock<const Eigen::VectorXd> block(int j, int s) const {
        return coeffs_.segment((j * 2 + s) * blockSize(), blockSize());
    }

    double evalRef(int j, int s, double xi, double eta) const;
    double evalPhys(int j, int s, const Vec2& x) const;

    /// Plain per-cell L2 projection of f into both species blocks.
    void project(const ScalarFunc& f, int extraExactness = 2);

private:
    const BackgroundMesh* mesh_;
    ModalBasis basis_;
    Eigen::VectorXd coeffs_;
};

}  // namespace xnse
