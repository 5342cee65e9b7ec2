#include "xnse/mesh.hpp"

#include <algorithm>
#include <set>

namespace xnse {

BackgroundMesh::BackgroundMesh(double x0, double x1, double y0, double y1, int nx, int ny,
                               std::array<BoundaryTag, 4> tags)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), nx_(nx), ny_(ny), tags_(std::move(tags)) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("mesh: cell counts must be >= 2");
    if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("mesh: inverted or degenerate bounds");
    hx_ = (x1 - x0) / nx;
    hy_ = (y1 - y0) / ny;

    periodicX_ = tags_[SideLeft].kind == BoundaryKind::Periodic;
    periodicY_ = tags_[SideBottom].kind == BoundaryKind::Periodic;
    if (periodicX_ != (tags_[SideRight].kind == BoundaryKind::Periodic))
        throw std::invalid_argument("mesh: periodic sides must come in pairs (left/right)");
    if (periodicY_ != (tags_[SideTop].kind == BoundaryKind::Periodic))
        throw std::invalid_argument("mesh: periodic sides must come in pairs (bottom/top)");

    cellEdges_.assign(numCells(), {-1, -1, -1, -1});
    const double Lx = x1 - x0, Ly = y1 - y0;

    // Vertical edges (normal along x). Columns 0..nx; column nx only if not periodic.
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix <= nx; ++ix) {
            if (ix == nx && periodicX_) continue;
            Edge e;
            e.axis = 0;
            e.length = hy_;
            e.midpoint = Vec2(x0 + ix * hx_, y0 + (iy + 0.5) * hy_);
            if (ix == 0) {
                if (periodicX_) continue;  // handled at ix == nx? no: periodic pair built below
                e.inner = cellIndex(0, iy);
                e.outer = -1;
                e.side = SideLeft;
                e.normal = Vec2(-1, 0);
            } else if (ix == nx) {
                e.inner = cellIndex(nx - 1, iy);
                e.outer = -1;
                e.side = SideRight;
                e.normal = Vec2(1, 0);
            } else {
                e.inner = cellIndex(ix - 1, iy);
                e.outer = cellIndex(ix, iy);
                e.normal = Vec2(1, 0);
            }
            int id = static_cast<int>(edges_.size());
            edges_.push_back(e);
            if (e.outer >= 0) {
                cellEdges_[e.inner][1] = id;
                cellEdges_[e.outer][0] = id;
            } else if (e.side == SideLeft) {
                cellEdges_[e.inner][0] = id;
            } else {
                cellEdges_[e.inner][1] = id;
            }
        }
        if (periodicX_) {
            // One wrap edge per row joining the last and first column.
            Edge e;
            e.axis = 0;
            e.length = hy_;
            e.midpoint = Vec2(x1, y0 + (iy + 0.5) * hy_);
            e.inner = cellIndex(nx - 1, iy);
            e.outer = cellIndex(0, iy);
            e.normal = Vec2(1, 0);
            e.periodic = true;
            e.side = SideRight;
            e.outerShift = Vec2(Lx, 0);  // outer-cell coordinates = x_edge - shift... see toReference usage
            int id = static_cast<int>(edges_.size());
            edges_.push_back(e);
            cellEdges_[e.inner][1] = id;
            cellEdges_[e.outer][0] = id;
        }
    }

    // Horizontal edges (normal along y).
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy <= ny; ++iy) {
            if (iy == ny && periodicY_) continue;
            if (iy == 0 && periodicY_) continue;
            Edge e;
            e.axis = 1;
            e.length = hx_;
            e.midpoint = Vec2(x0 + (ix + 0.5) * hx_, y0 + iy * hy_);
            if (iy == 0) {
                e.inner = cellIndex(ix, 0);
                e.outer = -1;
                e.side = SideBottom;
                e.normal = Vec2(0, -1);
            } else if (iy == ny) {
                e.inner = cellIndex(ix, ny - 1);
                e.outer = -1;
                e.side = SideTop;
                e.normal = Vec2(0, 1);
            } else {
                e.inner = cellIndex(ix, iy - 1);
                e.outer = cellIndex(ix, iy);
                e.normal = Vec2(0, 1);
            }
            int id = static_cast<int>(edges_.size());
            edges_.push_back(e);
            if (e.outer >= 0) {
                cellEdges_[e.inner][3] = id;
                cellEdges_[e.outer][2] = id;
            } else if (e.side == SideBottom) {
                cellEdges_[e.inner][2] = id;
            } else {
                cellEdges_[e.inner][3] = id;
            }
        }
        if (periodicY_) {
            Edge e;
            e.axis = 1;
            e.length = hx_;
            e.midpoint = Vec2(x0 + (ix + 0.5) * hx_, y1);
            e.inner = cellIndex(ix, ny - 1);
            e.outer = cellIndex(ix, 0);
            e.normal = Vec2(0, 1);
            e.periodic = true;
            e.side = SideTop;
            e.outerShift = Vec2(0, Ly);
            int id = static_cast<int>(edges_.size());
            edges_.push_back(e);
            cellEdges_[e.inner][3] = id;
            cellEdges_[e.outer][2] = id;
        }
    }
}

Vec2 BackgroundMesh::cellCenter(int j) const {
    return Vec2(x0_ + (cellIx(j) + 0.5) * hx_, y0_ + (cellIy(j) + 0.5) * hy_);
}

std::pair<Vec2, Vec2> BackgroundMesh::cellBox(int j) const {
    Vec2 lo(x0_ + cellIx(j) * hx_, y0_ + cellIy(j) * hy_);
    return {lo, lo + Vec2(hx_, hy_)};
}

Vec2 BackgroundMesh::toReference(int j, const Vec2& x) const {
    Vec2 c = cellCenter(j);
    return Vec2(2.0 * (x.x() - c.x()) / hx_, 2.0 * (x.y() - c.y()) / hy_);
}

Vec2 BackgroundMesh::toPhysical(int j, const Vec2& ref) const {
    Vec2 c = cellCenter(j);
    return Vec2(c.x() + 0.5 * hx_ * ref.x(), c.y() + 0.5 * hy_ * ref.y());
}

std::vector<int> BackgroundMesh::pointNeighbors(int j) const {
    std::set<int> out;
    int ix = cellIx(j), iy = cellIy(j);
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            int nxi = ix + dx, nyi = iy + dy;
            if (periodicX_) nxi = (nxi + nx_) % nx_;
            if (periodicY_) nyi = (nyi + ny_) % ny_;
            if (nxi < 0 || nxi >= nx_ || nyi < 0 || nyi >= ny_) continue;
            int n = cellIndex(nxi, nyi);
            if (n != j) out.insert(n);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<int> BackgroundMesh::edgeNeighbors(int j) const {
    std::vector<int> out;
    for (int e : cellEdges_[j]) {
        if (e < 0) continue;
        const Edge& ed = edges_[e];
        if (ed.isBoundary()) continue;
        out.push_back(ed.inner == j ? ed.outer : ed.inner);
    }
    return out;
}

}  // namespace xnse
