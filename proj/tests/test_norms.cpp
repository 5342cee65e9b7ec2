#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "xnse/norms.hpp"

using namespace xnse;

TEST_CASE("linear interpolation with clamping") {
    Series s{{0.0, 1.0, 3.0}, {2.0, 4.0, 0.0}};
    CHECK(interpolate(s, 0.5) == doctest::Approx(3.0));
    CHECK(interpolate(s, 2.0) == doctest::Approx(2.0));
    CHECK(interpolate(s, -1.0) == 2.0);
    CHECK(interpolate(s, 5.0) == 0.0);
    CHECK(interpolate(s, 1.0) == 4.0);
}

TEST_CASE("identical series give zero norms") {
    Series q{{0, 1, 2}, {1.0, -2.0, 3.0}};
    ErrorNorms e = errorNorms(q, q);
    CHECK(e.l1 == 0.0);
    CHECK(e.l2 == 0.0);
    CHECK(e.linf == 0.0);
}

TEST_CASE("doubling the reference gives unit normalized norms") {
    Series ref{{0, 1, 2, 3}, {1.0, -2.0, 3.0, 0.5}};
    Series q = ref;
    for (double& v : q.q) v *= 2.0;
    ErrorNorms e = errorNorms(q, ref);
    CHECK(e.l1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.l2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.linf == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reference on a finer grid is interpolated exactly for linear data") {
    Series ref, q;
    for (int i = 0; i <= 100; ++i) {
        ref.t.push_back(i * 0.01);
        ref.q.push_back(3.0 * i * 0.01 - 1.0);
    }
    for (int i = 0; i <= 7; ++i) {
        q.t.push_back(i / 7.0);
        q.q.push_back(3.0 * i / 7.0 - 1.0);
    }
    ErrorNorms e = errorNorms(q, ref);
    CHECK(e.l2 < 1e-13);
}

TEST_CASE("zero reference is rejected") {
    Series q{{0, 1}, {1.0, 2.0}}, ref{{0, 1}, {0.0, 0.0}};
    CHECK_THROWS(errorNorms(q, ref));
}

TEST_CASE("rate of convergence") {
    auto r = roc({1e-2, 2.5e-3}, {0.1, 0.05});
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
    auto r3 = roc({1.0, 0.25, 0.0625}, {1.0, 0.5, 0.25});
    CHECK(r3[0] == doctest::Approx(2.0));
    CHECK(r3[1] == doctest::Approx(2.0));
    CHECK_THROWS(roc({1.0}, {0.5}));
}
