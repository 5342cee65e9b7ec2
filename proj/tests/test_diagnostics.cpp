#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "xnse/diagnostics.hpp"

using namespace xnse;

namespace {

std::array<BoundaryTag, 4> allWalls() {
    return {BoundaryTag::wall(), BoundaryTag::wall(), BoundaryTag::wall(), BoundaryTag::wall()};
}

}  // namespace

TEST_CASE("capillary time step restriction") {
    PhysicalParams par;
    par.rhoA = par.rhoB = 1e-3;
    par.sigma = 3e-3;
    CHECK(capillaryDt(par, 1.0 / 8.0, 2) == doctest::Approx(0.002770432502787727).epsilon(1e-14));
    PhysicalParams p4 = par;
    p4.sigma *= 4.0;
    CHECK(capillaryDt(p4, 1.0 / 8.0, 2) ==
          doctest::Approx(0.5 * capillaryDt(par, 1.0 / 8.0, 2)).epsilon(1e-14));
    CHECK(capillaryDt(par, 1.0 / 16.0, 2) ==
          doctest::Approx(capillaryDt(par, 1.0 / 8.0, 2) * std::pow(2.0, -1.5)).epsilon(1e-14));
    PhysicalParams p0 = par;
    p0.sigma = 0.0;
    CHECK(std::isinf(capillaryDt(p0, 0.1, 2)));
}

TEST_CASE("ellipse perimeter oracle") {
    CHECK(ellipsePerimeter(0.3, 0.3) == doctest::Approx(2.0 * M_PI * 0.3).epsilon(1e-14));
    CHECK(ellipsePerimeter(1.0, 0.5) == doctest::Approx(4.8442241102738377).epsilon(1e-13));
    CHECK(ellipsePerimeter(0.5, 1.0) == ellipsePerimeter(1.0, 0.5));
    CHECK(ellipsePerimeter(1.25 * 0.25, 0.8 * 0.25) ==
          doctest::Approx(1.6295208671071184).epsilon(1e-13));
}

TEST_CASE("circle at rest has unit circularity and zero mean velocity") {
    BackgroundMesh m(0, 1, 0, 1, 20, 20, allWalls());
    MixedSpace space(m, 2);
    DgField phi(m, 3);
    double r = 0.25;
    // exactly representable circle: the diagnostics see the true geometry
    phi.project([r](const Vec2& p) { return (p - Vec2(0.5, 0.5)).squaredNorm() - r * r; });
    CutCellData cc(m, phi, 8);
    PhysicalParams par;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.size());
    BubbleQuantities bq = bubbleQuantities(space, cc, x, par);
    CHECK(bq.areaA == doctest::Approx(M_PI * r * r).epsilon(1e-6));
    CHECK(bq.circularity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(bq.meanVelocity.norm() < 1e-14);
    CHECK(bq.centerOfMass.x() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(bq.centerOfMass.y() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(bq.kineticEnergy == 0.0);
    CHECK(bq.dissipation == 0.0);
    CHECK(bq.surfaceDivergence == 0.0);
}

TEST_CASE("rigid translation gives the mean bubble velocity exactly") {
    BackgroundMesh m(0, 1, 0, 1, 12, 12, allWalls());
    MixedSpace space(m, 2);
    DgField phi(m, 3);
    phi.project([](const Vec2& p) { return (p - Vec2(0.5, 0.5)).norm() - 0.3; });
    CutCellData cc(m, phi, 8);
    PhysicalParams par;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.size());
    double c = 0.37;
    projectVelocity(space, cc, [c](const Vec2&) { return Vec2(0.0, c); }, x);
    BubbleQuantities bq = bubbleQuantities(space, cc, x, par);
    CHECK(bq.meanVelocity.y() == doctest::Approx(c).epsilon(1e-10));
    CHECK(std::abs(bq.meanVelocity.x()) < 1e-10);
    CHECK(bq.surfaceDivergence < 1e-8);  // rigid motion does not stretch the interface
}

TEST_CASE("ellipse circularity matches the elliptic-integral oracle and stays below 1") {
    BackgroundMesh m(-0.5, 0.5, -0.5, 0.5, 24, 24, allWalls());
    MixedSpace space(m, 2);
    double r = 0.25, a = 1.25 * r, b = 0.8 * r;
    DgField phi(m, 3);
    phi.project([a, b](const Vec2& p) {
        return p.x() * p.x() / (a * a) + p.y() * p.y() / (b * b) - 1.0;
    });
    CutCellData cc(m, phi, 8);
    PhysicalParams par;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.size());
    BubbleQuantities bq = bubbleQuantities(space, cc, x, par);
    double expected = 2.0 * std::sqrt(M_PI * M_PI * a * b) / ellipsePerimeter(a, b);
    CHECK(bq.circularity == doctest::Approx(expected).epsilon(1e-4));
    CHECK(bq.circularity < 1.0);
}

TEST_CASE("uniform flow kinetic energy diagnostic") {
    BackgroundMesh m(0, 1, 0, 1, 6, 6, allWalls());
    MixedSpace space(m, 2);
    DgField phi(m, 3);
    phi.project([](const Vec2& p) { return (p - Vec2(0.5, 0.5)).norm() - 0.25; });
    CutCellData cc(m, phi, 8);
    PhysicalParams par;  // rho = 1 both phases
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.size());
    double c = 2.0;
    projectVelocity(space, cc, [c](const Vec2&) { return Vec2(c, 0.0); }, x);
    BubbleQuantities bq = bubbleQuantities(space, cc, x, par);
    // 1/2 * L2 norm of rho |u|^2 = c^2 on the unit-area domain
    CHECK(bq.kineticEnergy == doctest::Approx(0.5 * c * c).epsilon(1e-8));
    CHECK(bq.dissipation < 1e-8);
}

TEST_CASE("wave amplitude extraction by vertical root finding") {
    std::array<BoundaryTag, 4> tags = {BoundaryTag::periodic(), BoundaryTag::periodic(),
                                       BoundaryTag::wall(), BoundaryTag::wall()};
    BackgroundMesh m(0, 1, -1.5, 1.5, 8, 24, tags);
    DgField flat(m, 3);
    flat.project([](const Vec2& p) { return p.y() - 0.3; });
    CHECK(waveAmplitude(flat, 0.0) == doctest::Approx(0.3).epsilon(1e-10));

    double a0 = 0.01;
    DgField wavy(m, 3);
    wavy.project([a0](const Vec2& p) { return p.y() - a0 * std::cos(2.0 * M_PI * p.x()); });
    CHECK(waveAmplitude(wavy, 0.0) == doctest::Approx(a0).epsilon(1e-4));
    CHECK(waveAmplitude(wavy, 0.5) == doctest::Approx(-a0).epsilon(1e-4));

    DgField none(m, 3);
    none.project([](const Vec2&) { return 1.0; });
    CHECK_THROWS(waveAmplitude(none, 0.0));
}

TEST_CASE("empty phase A is rejected") {
    BackgroundMesh m(0, 1, 0, 1, 4, 4, allWalls());
    MixedSpace space(m, 2);
    DgField phi(m, 3);
    phi.project([](const Vec2&) { return 1.0; });
    CutCellData cc(m, phi, 8);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(space.size());
    CHECK_THROWS(bubbleQuantities(space, cc, x, PhysicalParams{}));
}
