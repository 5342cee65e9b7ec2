#include "xnse/xdgfield.hpp"

namespace xnse {

XdgField::XdgField(const BackgroundMesh& mesh, int degree)
    : mesh_(&mesh), basis_(degree, mesh.hx(), mesh.hy()) {
    coeffs_ = Eigen::VectorXd::Zero(static_cast<long>(mesh.numCells()) * 2 * basis_.size());
}

double XdgField::evalRef(int j, int s, double xi, double eta) const {
    return block(j, s).dot(basis_.eval(xi, eta));
}

double XdgField::evalPhys(int j, int s, const Vec2& x) const {
    Vec2 r = mesh_->toReference(j, x);
    return evalRef(j, s, r.x(), r.y());
}

void XdgField::project(const ScalarFunc& f, int extraExactness) {
    QuadRule q = cellQuadrature(2 * degree() + extraExactness, mesh_->hx(), mesh_->hy());
    for (int j = 0; j < mesh_->numCells(); ++j) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(blockSize());
        for (int i = 0; i < q.size(); ++i) {
            Vec2 x = mesh_->toPhysical(j, q.nodes[i]);
            c += q.weights[i] * f(x) * basis_.eval(q.nodes[i].x(), q.nodes[i].y());
        }
        block(j, 0) = c;
        block(j, 1) = c;
    }
}

}  // namespace xnse
