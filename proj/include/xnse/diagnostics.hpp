#pragma once

#include "xnse/cutcell.hpp"
#include "xnse/forms.hpp"
#include "xnse/spaces.hpp"

namespace xnse {

/// Capillary time step restriction based on the minimal resolved wavelength
/// h/(k+1); returns +inf when surface tension is absent.
double capillaryDt(const PhysicalParams& par, double h, int degree);

/// Scalar measures of the dispersed phase (species A) and energy diagnostics
/// of the flow field.
struct BubbleQuantities {
    Vec2 centerOfMass = Vec2::Zero();
    Vec2 meanVelocity = Vec2::Zero();
    double circularity = 0.0;
    double areaA = 0.0;
    double ifaceLength = 0.0;
    double kineticEnergy = 0.0;   // 1/2 || rho u.u ||_L2 over the bulk
    double surfaceEnergy = 0.0;   // sigma |iface|
    double dissipation = 0.0;     // || tr(D(u)^2) ||_L2
    double surfaceDivergence = 0.0;  // || div_iface u ||_L2 on the interface
};

/// All quantities via cut-cell quadrature; throws if phase A has no volume.
BubbleQuantities bubbleQuantities(const MixedSpace& space, const CutCellData& cc,
                                  const Eigen::VectorXd& x, const PhysicalParams& par);

/// Interface height: zero crossing of phi along the vertical line through x,
/// found by scanning for a sign change and bisecting to ~1e-12.
double waveAmplitude(const DgField& phi, double x);

/// Perimeter of the ellipse with semi-axes a, b (AGM form of the complete
/// elliptic integral of the second kind).
double ellipsePerimeter(double a, double b);

}  // namespace xnse
