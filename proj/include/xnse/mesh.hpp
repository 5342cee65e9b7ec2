#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace xnse {

using Vec2 = Eigen::Vector2d;

/// Time-dependent velocity boundary data.
using VelocityFunc = std::function<Vec2(const Vec2&, double)>;

enum class BoundaryKind { Dirichlet, Neumann, FreeSlip, Periodic };

struct BoundaryTag {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    VelocityFunc velocity;  // Dirichlet data; null means homogeneous

    static BoundaryTag wall() { return {BoundaryKind::Dirichlet, nullptr}; }
    static BoundaryTag dirichlet(VelocityFunc f) { return {BoundaryKind::Dirichlet, std::move(f)}; }
    static BoundaryTag neumann() { return {BoundaryKind::Neumann, nullptr}; }
    static BoundaryTag freeSlip() { return {BoundaryKind::FreeSlip, nullptr}; }
    static BoundaryTag periodic() { return {BoundaryKind::Periodic, nullptr}; }
};

/// Sides of the rectangular domain, used for boundary tagging.
enum Side { SideLeft = 0, SideRight = 1, SideBottom = 2, SideTop = 3 };

struct Edge {
    int inner = -1;           // cell on the side the normal points away from
    int outer = -1;           // neighbor cell; -1 on non-periodic boundary edges
    int side = -1;            // Side enum if boundary/periodic edge, else -1
    int axis = 0;             // 0: normal along x, 1: normal along y
    Vec2 normal = Vec2::Zero();    // unit, points from inner to outer
    Vec2 midpoint = Vec2::Zero();
    double length = 0.0;
    Vec2 outerShift = Vec2::Zero();  // physical offset onto the periodic partner; zero otherwise
    bool periodic = false;

    bool isBoundary() const { return outer < 0; }
    bool isInterior() const { return outer >= 0; }
};

/// Uniform Cartesian mesh over a rectangle with cell/edge topology and
/// per-side boundary tags.
class BackgroundMesh {
public:
    BackgroundMesh(double x0, double x1, double y0, double y1, int nx, int ny,
                   std::array<BoundaryTag, 4> tags);

    int numCells() const { return nx_ * ny_; }
    int numEdges() const { return static_cast<int>(edges_.size()); }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double h() const { return std::max(hx_, hy_); }
    double x0() const { return x0_; }
    double x1() const { return x1_; }
    double y0() const { return y0_; }
    double y1() const { return y1_; }
    double domainArea() const { return (x1_ - x0_) * (y1_ - y0_); }

    int cellIndex(int ix, int iy) const { return iy * nx_ + ix; }
    int cellIx(int j) const { return j % nx_; }
    int cellIy(int j) const { return j / nx_; }
    Vec2 cellCenter(int j) const;
    /// Lower-left and upper-right corners.
    std::pair<Vec2, Vec2> cellBox(int j) const;
    double cellArea() const { return hx_ * hy_; }

    Vec2 toReference(int j, const Vec2& x) const;
    Vec2 toPhysical(int j, const Vec2& ref) const;

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }
    /// Edge indices bounding a given cell (4 entries).
    const std::array<int, 4>& cellEdges(int j) const { return cellEdges_[j]; }

    const BoundaryTag& sideTag(int side) const { return tags_[side]; }

    /// Cells sharing at least one vertex with j, excluding j itself.
    std::vector<int> pointNeighbors(int j) const;
    /// Cells sharing an edge with j.
    std::vector<int> edgeNeighbors(int j) const;

    bool periodicX() const { return periodicX_; }
    bool periodicY() const { return periodicY_; }

private:
    double x0_, x1_, y0_, y1_;
    int nx_, ny_;
    double hx_, hy_;
    std::array<BoundaryTag, 4> tags_;
    bool periodicX_ = false, periodicY_ = false;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 4>> cellEdges_;  // left, right, bottom, top
};

}  // namespace xnse
