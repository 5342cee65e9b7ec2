#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "xnse/cutcell.hpp"

using namespace xnse;

namespace {
std::array<BoundaryTag, 4> allWalls() {
    return {BoundaryTag::wall(), BoundaryTag::wall(), BoundaryTag::wall(), BoundaryTag::wall()};
}
}  // namespace

TEST_CASE("straight interface splits areas and edges exactly") {
    BackgroundMesh m(0, 1, 0, 1, 4, 4, allWalls());
    DgField phi(m, 1);
    phi.project([](const Vec2& x) { return x.y() - 0.3; });  // A below y=0.3
    CutCellData cc(m, phi, 8);

    CHECK(cc.speciesArea(0) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(cc.speciesArea(1) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(cc.totalIfaceLength() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(cc.cutCells().size() == 4);
    for (int j : cc.cutCells()) {
        const CutRules& r = cc.cutRules(j);
        CHECK(r.fracA == doctest::Approx(0.2).epsilon(1e-12));  // (0.3-0.25)/0.25
        for (const Vec2& n : r.ifaceNormals) {
            CHECK(n.x() == doctest::Approx(0.0).epsilon(1e-13));
            CHECK(n.y() == doctest::Approx(1.0).epsilon(1e-13));
        }
    }

    // vertical edges of the cut row are split 0.2 / 0.8
    int split = 0;
    for (int e = 0; e < m.numEdges(); ++e) {
        const EdgeRule& er = cc.edgeRule(e);
        double wa = er.a.totalWeight(), wb = er.b.totalWeight();
        if (wa > 1e-14 && wb > 1e-14) {
            ++split;
            CHECK(wa == doctest::Approx(0.05).epsilon(1e-12));
            CHECK(wb == doctest::Approx(0.20).epsilon(1e-12));
        }
    }
    CHECK(split == 5);  // five vertical edge columns through the cut row

    // one crossing per vertical edge of the cut row
    CHECK(cc.crossings().size() == 5);
    for (const Crossing& c : cc.crossings())
        CHECK(c.point.y() == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("quadratic circle level set recovers area and perimeter") {
    double r = 0.3;
    BackgroundMesh m(-1, 1, -1, 1, 20, 20, allWalls());
    DgField phi(m, 2);
    phi.project([r](const Vec2& x) { return (x.squaredNorm() - r * r) / (2 * r); });
    CutCellData cc(m, phi, 10);

    CHECK(cc.speciesArea(0) == doctest::Approx(M_PI * r * r).epsilon(1e-9));
    CHECK(cc.totalIfaceLength() == doctest::Approx(2 * M_PI * r).epsilon(1e-9));
    CHECK(cc.speciesArea(0) + cc.speciesArea(1) == doctest::Approx(4.0).epsilon(1e-12));

    // interface normals point out of the circle
    for (int j : cc.cutCells()) {
        const CutRules& rr = cc.cutRules(j);
        for (size_t i = 0; i < rr.ifaceNormals.size(); ++i) {
            Vec2 p = m.toPhysical(j, rr.iface.nodes[i]);
            CHECK(rr.ifaceNormals[i].dot(p.normalized()) == doctest::Approx(1.0).epsilon(1e-7));
        }
    }

    // conormals at crossings are tangent to the circle and outward per cell
    for (const Crossing& c : cc.crossings()) {
        CHECK(std::abs(c.tauInner.dot(c.point.normalized())) < 1e-6);
    }
}

TEST_CASE("grazing interface reclassifies to pure cells") {
    BackgroundMesh m(0, 1, 0, 1, 4, 4, allWalls());
    DgField phi(m, 1);
    phi.project([](const Vec2& x) { return x.y() - 0.25; });  // exactly on a grid line
    CutCellData cc(m, phi, 6);
    CHECK(cc.cutCells().empty());
    CHECK(cc.speciesArea(0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("small cut fraction reported accurately") {
    BackgroundMesh m(0, 1, 0, 1, 4, 4, allWalls());
    DgField phi(m, 1);
    phi.project([](const Vec2& x) { return x.y() - 0.26; });
    CutCellData cc(m, phi, 6);
    for (int j : cc.cutCells()) CHECK(cc.frac(j, 0) == doctest::Approx(0.04).epsilon(1e-10));
}

TEST_CASE("volume rules integrate polynomials over the species region") {
    // A = region below the line y = 0.4 + 0.2 x; integrate x*y over it
    BackgroundMesh m2(0, 1, 0, 1, 2, 2, allWalls());
    DgField phi(m2, 1);
    phi.project([](const Vec2& x) { return x.y() - (0.4 + 0.2 * x.x()); });
    CutCellData cc(m2, phi, 10);
    double s = 0;
    for (int j = 0; j < m2.numCells(); ++j) {
        auto addRule = [&](const QuadRule& q) {
            for (int i = 0; i < q.size(); ++i) {
                Vec2 p = m2.toPhysical(j, q.nodes[i]);
                s += q.weights[i] * p.x() * p.y();
            }
        };
        if (cc.isCut(j))
            addRule(cc.cutRules(j).volA);
        else if (cc.kind(j) == CellKind::PureA) {
            QuadRule q = cellQuadrature(6, m2.hx(), m2.hy());
            for (int i = 0; i < q.size(); ++i) {
                Vec2 p = m2.toPhysical(j, q.nodes[i]);
                s += q.weights[i] * p.x() * p.y();
            }
        }
    }
    // int_0^1 int_0^{0.4+0.2x} x*y dy dx = int_0^1 x (0.4+0.2x)^2/2 dx
    // = 0.5 * int x(0.16 + 0.16x + 0.04x^2) dx = 0.5*(0.08 + 0.16/3 + 0.01) = 0.0716666...
    CHECK(s == doctest::Approx(0.5 * (0.16 / 2 + 0.16 / 3 + 0.04 / 4)).epsilon(1e-12));
}
