#pragma once

#include <Eigen/Dense>
#include <vector>

namespace xnse {

/// 1D Gauss-Legendre rule on [-1, 1].
struct GaussRule1d {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (exact for degree 2n-1).
const GaussRule1d& gaussLegendre(int npoints);

/// Gauss-Lobatto nodes on [-1, 1] (endpoints included); used for edge
/// constraint points, no weights needed.
std::vector<double> gaussLobattoNodes(int npoints);

/// Quadrature rule with 2D nodes; node coordinates are interpreted by the
/// caller (cell-reference or physical), weights always carry the physical
/// measure.
struct QuadRule {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
    double totalWeight() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
    void append(const QuadRule& other) {
        nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
        weights.insert(weights.end(), other.weights.begin(), other.weights.end());
    }
};

/// Tensor Gauss rule on the reference square [-1,1]^2; weights scaled by
/// jacobian (physical cell area / 4).
QuadRule cellQuadrature(int exactness, double hx, double hy);

/// 1D Gauss rule along an edge; nodes hold the 1D reference coordinate in
/// the x-component, weights scaled by (physical edge length / 2).
QuadRule edgeQuadrature(int exactness, double length);

}  // namespace xnse
