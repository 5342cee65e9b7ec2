#include "xnse/field.hpp"

#include <algorithm>
#include <cmath>

namespace xnse {

DgField::DgField(const BackgroundMesh& mesh, int degree)
    : mesh_(&mesh), basis_(degree, mesh.hx(), mesh.hy()) {
    coeffs_ = Eigen::VectorXd::Zero(static_cast<long>(mesh.numCells()) * basis_.size());
}

void DgField::project(const ScalarFunc& f, int extraExactness) {
    for (int j = 0; j < mesh_->numCells(); ++j) projectCell(j, f, extraExactness);
}

void DgField::projectCell(int j, const ScalarFunc& f, int extraExactness) {
    // Basis orthonormal on the physical cell, so projection is a plain
    // quadrature of f against each mode.
    QuadRule q = cellQuadrature(2 * basis_.degree() + extraExactness, mesh_->hx(), mesh_->hy());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(basis_.size());
    for (int n = 0; n < q.size(); ++n) {
        Vec2 x = mesh_->toPhysical(j, q.nodes[n]);
        c += q.weights[n] * f(x) * basis_.eval(q.nodes[n].x(), q.nodes[n].y());
    }
    cell(j) = c;
}

int DgField::locate(const Vec2& x) const {
    int ix = static_cast<int>(std::floor((x.x() - mesh_->x0()) / mesh_->hx()));
    int iy = static_cast<int>(std::floor((x.y() - mesh_->y0()) / mesh_->hy()));
    ix = std::clamp(ix, 0, mesh_->nx() - 1);
    iy = std::clamp(iy, 0, mesh_->ny() - 1);
    return mesh_->cellIndex(ix, iy);
}

double DgField::eval(const Vec2& x) const {
    int j = locate(x);
    return evalPhys(j, x);
}

double DgField::evalRef(int j, double xi, double eta) const {
    return basis_.eval(xi, eta).dot(cell(j));
}

double DgField::evalPhys(int j, const Vec2& x) const {
    Vec2 r = mesh_->toReference(j, x);
    return evalRef(j, r.x(), r.y());
}

Vec2 DgField::gradRef(int j, double xi, double eta) const {
    return basis_.evalGrad(xi, eta).transpose() * cell(j);
}

Vec2 DgField::gradPhys(int j, const Vec2& x) const {
    Vec2 r = mesh_->toReference(j, x);
    return gradRef(j, r.x(), r.y());
}

double DgField::cellMean(int j) const {
    // mode 0 is the constant sqrt(1/(hx*hy))
    return cell(j)[0] / std::sqrt(mesh_->hx() * mesh_->hy());
}

}  // namespace xnse
