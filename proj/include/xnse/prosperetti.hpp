#pragma once

#include <complex>
#include <vector>

#include "xnse/forms.hpp"

namespace xnse {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), any z.
std::complex<double> faddeeva(std::complex<double> z);

/// Complementary error function of complex argument.
std::complex<double> erfcComplex(std::complex<double> z);

/// Scaled complement exp(z^2) erfc(z), stable for large |z| in the right
/// half plane.
std::complex<double> erfcxComplex(std::complex<double> z);

/// Analytical amplitude history of a small-amplitude capillary wave between
/// two superposed viscous fluids with equal kinematic viscosities
/// (Prosperetti's initial-value solution: quartic roots and complementary
/// error functions of complex argument).  Throws if the kinematic
/// viscosities differ.
std::vector<double> prosperettiAmplitude(const PhysicalParams& par, double wavelength, double a0,
                                         const std::vector<double>& times);

}  // namespace xnse
