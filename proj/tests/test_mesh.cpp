#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "xnse/mesh.hpp"

using namespace xnse;

namespace {
std::array<BoundaryTag, 4> allWalls() {
    return {BoundaryTag::wall(), BoundaryTag::wall(), BoundaryTag::wall(), BoundaryTag::wall()};
}
}  // namespace

TEST_CASE("edge count and orientation on a walled mesh") {
    BackgroundMesh m(0, 1, 0, 2, 4, 8, allWalls());
    CHECK(m.numCells() == 32);
    // vertical: (nx+1)*ny, horizontal: nx*(ny+1)
    CHECK(m.numEdges() == 5 * 8 + 4 * 9);
    int nBoundary = 0;
    for (const Edge& e : m.edges()) {
        CHECK(e.normal.norm() == doctest::Approx(1.0));
        if (e.isBoundary()) ++nBoundary;
    }
    CHECK(nBoundary == 2 * 4 + 2 * 8);
}

TEST_CASE("periodic pairing replaces boundary edges by wrap edges") {
    BackgroundMesh m(0, 1, 0, 3, 5, 6,
                     {BoundaryTag::periodic(), BoundaryTag::periodic(), BoundaryTag::wall(),
                      BoundaryTag::wall()});
    CHECK(m.periodicX());
    CHECK(!m.periodicY());
    CHECK(m.numEdges() == 5 * 6 + 5 * 7);
    int nWrap = 0;
    for (const Edge& e : m.edges())
        if (e.periodic) {
            ++nWrap;
            CHECK(e.inner == m.cellIndex(4, m.cellIy(e.inner)));
            CHECK(e.outer == m.cellIndex(0, m.cellIy(e.inner)));
            CHECK(e.outerShift.x() == doctest::Approx(1.0));
        }
    CHECK(nWrap == 6);
}

TEST_CASE("cell edge adjacency is mutually consistent") {
    BackgroundMesh m(-1, 1, -1, 1, 3, 3, allWalls());
    for (int j = 0; j < m.numCells(); ++j) {
        auto ce = m.cellEdges(j);
        for (int k = 0; k < 4; ++k) {
            REQUIRE(ce[k] >= 0);
            const Edge& e = m.edge(ce[k]);
            CHECK((e.inner == j || e.outer == j));
        }
    }
}

TEST_CASE("reference mapping round trips") {
    BackgroundMesh m(0, 2, -1, 0, 4, 2, allWalls());
    Vec2 p(1.3, -0.4);
    int j = m.cellIndex(2, 1);
    Vec2 r = m.toReference(j, p);
    Vec2 back = m.toPhysical(j, r);
    CHECK(back.x() == doctest::Approx(p.x()).epsilon(1e-14));
    CHECK(back.y() == doctest::Approx(p.y()).epsilon(1e-14));
}

TEST_CASE("point neighbors wrap around periodic directions") {
    BackgroundMesh m(0, 1, 0, 1, 4, 4,
                     {BoundaryTag::periodic(), BoundaryTag::periodic(), BoundaryTag::wall(),
                      BoundaryTag::wall()});
    auto nb = m.pointNeighbors(m.cellIndex(0, 1));
    CHECK(nb.size() == 8);
    CHECK(std::find(nb.begin(), nb.end(), m.cellIndex(3, 1)) != nb.end());

    BackgroundMesh w(0, 1, 0, 1, 4, 4, allWalls());
    auto corner = w.pointNeighbors(w.cellIndex(0, 0));
    CHECK(corner.size() == 3);
}
