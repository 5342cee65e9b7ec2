#include "xnse/prosperetti.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace xnse {

namespace {

using Cd = std::complex<double>;

// Weideman rational approximation of the Faddeeva function (N = 64);
// relative accuracy ~1e-14 in the closed upper half plane.
constexpr double kWeidemanL = 6.727171322029716;
constexpr double kWeidemanCoeff[] = {
    -1.11022302462515654e-16, -1.94289029309402395e-16, -1.66533453693773481e-16,
    0.00000000000000000e+00,  -8.32667268468867405e-17, 0.00000000000000000e+00,
    -2.08166817117216851e-16, -2.84494650060196363e-16, -1.11022302462515654e-16,
    -2.01227923213309623e-16, -5.55111512312578270e-17, -1.73472347597680709e-17,
    0.00000000000000000e+00,  9.62771529167127937e-17,  2.34187669256868958e-17,
    3.16587034365767295e-17,  7.65446733774766130e-17,  7.03376159399971002e-17,
    9.71716197090133349e-17,  -6.19790948164916644e-17, 1.58638259592416148e-16,
    4.86509996277097265e-16,  -8.85511694870782372e-16, -4.41762600926368185e-15,
    -2.65784625315079829e-16, 3.28880727162185218e-14,  5.91163896953633862e-14,
    -1.54970065884787656e-13, -7.92077318234354933e-13, -3.93901093394669980e-13,
    5.83263065097824359e-12,  1.75014116976657529e-11,  -6.47063343642395579e-12,
    -1.75606024737338853e-10, -4.53391384808232071e-10, 2.44347960652172873e-10,
    5.18695575822882120e-09,  1.59268139747379318e-08,  7.43571090103970320e-09,
    -1.36102612370350790e-07, -6.65042412029008859e-07, -1.55477227828466802e-06,
    -7.56424411400655484e-08, 1.79018015860694939e-05,  1.02270067989147388e-04,
    3.96274510398093426e-04,  1.25497880499813035e-03,  3.46020794810753332e-03,
    8.56538141317590707e-03,  1.93803990245382633e-02,  4.05528465295800777e-02,
    7.91165506760257015e-02,  1.44778599735864127e-01,  2.49639699945355620e-01,
    4.07044303039873490e-01,  6.29386834337436696e-01,  9.24976025263808621e-01,
    1.29443775171751607e+00,  1.72750608578711695e+00,  2.20125657128641006e+00,
    2.68073263955908381e+00,  3.12244818940203661e+00,  3.48049610398504194e+00,
    3.71416979319770224e+00};

Cd faddeevaUpper(Cd z) {
    const double L = kWeidemanL;
    Cd iz(- z.imag(), z.real());
    Cd d = L - iz;
    Cd Z = (L + iz) / d;
    Cd p = 0.0;
    for (double a : kWeidemanCoeff) p = p * Z + a;
    return 2.0 * p / (d * d) + (1.0 / std::sqrt(M_PI)) / d;
}

}  // namespace

Cd faddeeva(Cd z) {
    if (z.imag() >= 0.0) return faddeevaUpper(z);
    // reflection w(z) = 2 exp(-z^2) - w(-z)
    return 2.0 * std::exp(-z * z) - faddeevaUpper(-z);
}

Cd erfcxComplex(Cd z) {
    if (z.real() >= 0.0) return faddeevaUpper(Cd(-z.imag(), z.real()));
    // erfcx(z) = 2 exp(z^2) - erfcx(-z)
    return 2.0 * std::exp(z * z) - erfcxComplex(-z);
}

Cd erfcComplex(Cd z) { return std::exp(-z * z) * erfcxComplex(z); }

std::vector<double> prosperettiAmplitude(const PhysicalParams& par, double wavelength, double a0,
                                         const std::vector<double>& times) {
    double nuA = par.muA / par.rhoA, nuB = par.muB / par.rhoB;
    if (std::abs(nuA - nuB) > 1e-12 * std::max(nuA, nuB))
        throw std::invalid_argument("amplitude solution requires equal kinematic viscosities");
    if (par.sigma <= 0.0) throw std::invalid_argument("surface tension must be positive");

    double k = 2.0 * M_PI / wavelength;
    double nu = nuA;
    double om0sq = par.sigma * k * k * k / (par.rhoA + par.rhoB);
    double beta = par.rhoA * par.rhoB / ((par.rhoA + par.rhoB) * (par.rhoA + par.rhoB));
    double eps = std::sqrt(nu * k * k);

    // z^4 - 4 b e z^3 + 2(1-6b) e^2 z^2 + 4(1-3b) e^3 z + (1-4b) e^4 + om0^2
    double c3 = -4.0 * beta * eps;
    double c2 = 2.0 * (1.0 - 6.0 * beta) * eps * eps;
    double c1 = 4.0 * (1.0 - 3.0 * beta) * eps * eps * eps;
    double c0 = (1.0 - 4.0 * beta) * eps * eps * eps * eps + om0sq;
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    comp(0, 3) = -c0;
    comp(1, 3) = -c1;
    comp(2, 3) = -c2;
    comp(3, 3) = -c3;
    comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix4d> es(comp);
    std::array<Cd, 4> z;
    for (int i = 0; i < 4; ++i) z[i] = es.eigenvalues()[i];
    std::array<Cd, 4> Z;
    for (int i = 0; i < 4; ++i) {
        Z[i] = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) Z[i] *= z[j] - z[i];
    }

    double head = 4.0 * (1.0 - 4.0 * beta) * nu * nu * k * k * k * k;
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        double visc = std::exp(-nu * k * k * t);
        double a = head / (2.0 * head + om0sq) * a0 *
                   std::real(erfcComplex(std::sqrt(nu * k * k * t)));
        for (int i = 0; i < 4; ++i) {
            Cd term = z[i] / Z[i] * (om0sq * a0) / (z[i] * z[i] - nu * k * k) * visc *
                      erfcxComplex(z[i] * std::sqrt(t));
            a += term.real();
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace xnse
