#pragma once

#include "xnse/basis.hpp"
#include "xnse/cutcell.hpp"
#include "xnse/mesh.hpp"

namespace xnse {

/// Mixed velocity/pressure coefficient layout on the two-blocks-per-cell
/// cut-cell mesh.  Velocity has degree k (two components), pressure degree
/// k-1 for inf-sup stability.  The flat index map is fixed by the background
/// mesh alone, so coefficient vectors keep their meaning when the interface
/// moves; blocks of species without support in a cell simply stay unused.
class MixedSpace {
public:
    MixedSpace(const BackgroundMesh& mesh, int degree)
        : mesh_(&mesh),
          k_(degree),
          velBasis_(degree, mesh.hx(), mesh.hy()),
          presBasis_(degree - 1, mesh.hx(), mesh.hy()) {
        if (degree < 1) throw std::invalid_argument("velocity degree must be at least 1");
        nu_ = velBasis_.size();
        np_ = presBasis_.size();
        velSize_ = mesh.numCells() * 2 * 2 * nu_;
        presSize_ = mesh.numCells() * 2 * np_;
    }

    const BackgroundMesh& mesh() const { return *mesh_; }
    int degree() const { return k_; }
    const ModalBasis& velBasis() const { return velBasis_; }
    const ModalBasis& presBasis() const { return presBasis_; }
    int nu() const { return nu_; }
    int np() const { return np_; }

    int velSize() const { return velSize_; }
    int presSize() const { return presSize_; }
    int size() const { return velSize_ + presSize_; }

    /// First velocity coefficient of (cell, species, component).
    int uBase(int j, int s, int c) const { return ((j * 2 + s) * 2 + c) * nu_; }
    /// First pressure coefficient of (cell, species).
    int pBase(int j, int s) const { return velSize_ + (j * 2 + s) * np_; }

    Vec2 velocity(const Eigen::VectorXd& x, int j, int s, const Vec2& ref) const {
        Eigen::VectorXd v = velBasis_.eval(ref.x(), ref.y());
        return Vec2(v.dot(x.segment(uBase(j, s, 0), nu_)), v.dot(x.segment(uBase(j, s, 1), nu_)));
    }
    /// Physical velocity gradient, rows = components, cols = d/dx, d/dy.
    Eigen::Matrix2d velocityGrad(const Eigen::VectorXd& x, int j, int s, const Vec2& ref) const {
        Eigen::MatrixXd g = velBasis_.evalGrad(ref.x(), ref.y());
        Eigen::Matrix2d out;
        for (int c = 0; c < 2; ++c)
            out.row(c) = (g.transpose() * x.segment(uBase(j, s, c), nu_)).transpose();
        return out;
    }
    double pressure(const Eigen::VectorXd& x, int j, int s, const Vec2& ref) const {
        return presBasis_.eval(ref.x(), ref.y()).dot(x.segment(pBase(j, s), np_));
    }

private:
    const BackgroundMesh* mesh_;
    int k_;
    ModalBasis velBasis_, presBasis_;
    int nu_, np_;
    int velSize_, presSize_;
};

}  // namespace xnse
