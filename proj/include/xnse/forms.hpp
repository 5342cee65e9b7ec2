#pragma once

#include <Eigen/Sparse>

#include "xnse/cutcell.hpp"
#include "xnse/spaces.hpp"

namespace xnse {

using SpMat = Eigen::SparseMatrix<double>;

struct PhysicalParams {
    double rhoA = 1.0, rhoB = 1.0;
    double muA = 1.0, muB = 1.0;
    double sigma = 0.0;  // surface tension, force per length
    Vec2 gravity = Vec2::Zero();
    double eta0 = 4.0;  // penalty safety factor

    double rho(int s) const { return s == 0 ? rhoA : rhoB; }
    double mu(int s) const { return s == 0 ? muA : muB; }
};

// Sign convention: all forms are assembled so the momentum system reads
//   M du/dt + C(u*) u + V u + G p = rhs,   G^T u = rhs_q,
// i.e. the viscous form V is positive semidefinite and the pressure
// coupling G is the weak gradient; the pressure rows are exactly G^T.

/// Velocity mass matrix weighted by the phase density; pressure rows stay
/// empty.  Species blocks without support in their cell stay empty too.
SpMat assembleMass(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par);

/// Symmetric interior penalty viscous form with transposed-gradient terms,
/// positive semidefinite.  The interface acts as an interior edge between
/// the two species blocks of a cut cell; free-slip walls contribute
/// normal-component terms only.
SpMat assembleViscous(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par);

/// Dirichlet-data contribution of the viscous form to the right-hand side.
Eigen::VectorXd viscousBoundaryRhs(const MixedSpace& space, const CutCellData& cc,
                                   const PhysicalParams& par, double time);

/// Weak pressure gradient in the velocity rows and its exact transpose in
/// the pressure rows; the pressure-pressure block is identically zero.
SpMat assemblePressureConti(const MixedSpace& space, const CutCellData& cc);

/// Dirichlet normal-flux data of the continuity rows.
Eigen::VectorXd contiBoundaryRhs(const MixedSpace& space, const CutCellData& cc, double time);

/// Linearized convection c(u*; u, v) with local Lax-Friedrichs edge flux
/// (lambda = max of |u*.n| over both traces per node); the interface carries
/// no convective edge term.  Returns the matrix and the Dirichlet-data
/// right-hand side.
std::pair<SpMat, Eigen::VectorXd> assembleConvection(const MixedSpace& space,
                                                     const CutCellData& cc,
                                                     const PhysicalParams& par,
                                                     const Eigen::VectorXd& ustar, double time);

/// Gravity force with phase-wise density.
Eigen::VectorXd gravityRhs(const MixedSpace& space, const CutCellData& cc,
                           const PhysicalParams& par);

/// Laplace-Beltrami surface tension: tangential-divergence integral over the
/// interface plus conormal point terms where the interface crosses cell
/// edges; exactly force-free on closed interfaces.
Eigen::VectorXd surfaceTensionRhs(const MixedSpace& space, const CutCellData& cc,
                                  const PhysicalParams& par);

/// SIP penalty of the species-s part of an edge (per-cell geometric ratio
/// |dK|/|K| times eta0 k^2, viscosity- and side-maximized).
double viscousPenalty(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par,
                      int edge, int s);
/// Penalty of the interface segment inside a cut cell.
double interfacePenalty(const MixedSpace& space, const CutCellData& cc,
                        const PhysicalParams& par, int cell);

/// L2 projection of a velocity field into every active species block.
void projectVelocity(const MixedSpace& space, const CutCellData& cc,
                     const std::function<Vec2(const Vec2&)>& f, Eigen::VectorXd& x);

}  // namespace xnse
