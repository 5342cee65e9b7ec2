#pragma once

#include <memory>

#include "xnse/levelset.hpp"
#include "xnse/xdgfield.hpp"

namespace xnse {

/// Two scalar DG components treated as a vector field.
struct VectorField {
    DgField x, y;

    VectorField(const BackgroundMesh& mesh, int degree) : x(mesh, degree), y(mesh, degree) {}

    Vec2 evalPhys(int j, const Vec2& p) const { return {x.evalPhys(j, p), y.evalPhys(j, p)}; }
};

/// Density-weighted average of the two species velocity blocks: on cut cells
/// the coefficient blocks are combined with weights rho_s/(rho_A + rho_B), on
/// pure cells the occupying species' block is copied.
VectorField densityAverage(const XdgField& ux, const XdgField& uy, double rhoA, double rhoB,
                           const CutCellData& cc);

/// Extension velocity on the cut cells: per component, SIP discretization of
/// the anisotropic diffusion problem with diffusion tensor n n^T + eps I
/// (n = normalized grad phi), interface values imposed weakly from uAver.
VectorField ellipticExtension(const VectorField& uAver, const CutCellData& cc,
                              const DgField& phiEvo, double eps = 1e-4);

/// Ratio of the directional-derivative residual integral (grad phi . grad u)^2
/// to the gradient energy |grad u|^2 over the cut cells; small after a good
/// extension solve.
double extensionResidualRatio(const VectorField& uExt, const DgField& phiEvo,
                              const CutCellData& cc);

/// Propagate the cut-cell extension velocity onto the near band, marching the
/// negative and positive sides separately in ascending |cell mean phi| order.
/// Node values are taken from the accepted-neighbor boundary point that best
/// lies on the characteristic through the node (|x - y| = |phi(x) - phi(y)|
/// for a signed-distance phi), then projected per cell.
void fastMarchExtension(VectorField& uExt, const CutCellData& cc, const NarrowBand& band,
                        const DgField& phiEvo);

/// Three-stage TVD Runge-Kutta step of the upwind DG advection of phiEvo by
/// uExt over the narrow band.  Band-boundary edges close the stencil with the
/// inner trace.  Warns (non-fatal) if max |u| dt / h exceeds 1.
void advectRk3(DgField& phiEvo, const VectorField& uExt, double dt, const NarrowBand& band);

/// One implicit-Euler step of the interior-edge jump penalty
/// (eta_evo/h) [phi][theta] over the band, eta_evo = 10, with the penalty
/// time step 0.001 dt.  Continuous fields are fixed points.
void jumpPenalize(DgField& phiEvo, double dt, const NarrowBand& band);

struct LevelSetOptions {
    double rhoA = 1.0, rhoB = 1.0;
    bool fullReinit = false;   // gradient renormalization stage
    double epsReinit = 1e-2;
};

/// Interface-tracking state: the evolution field (degree k), the continuous
/// projected field (degree k+1) the flow solver cuts against, and the
/// geometry derived from it.
struct LevelSetState {
    DgField phiEvo;
    DgField phi;
    std::unique_ptr<CutCellData> cc;
    NarrowBand band;

    static LevelSetState init(const BackgroundMesh& mesh, int degree, const ScalarFunc& phi0,
                              int quadOrder);
};

/// One interface-evolution step: density average, reinit of degenerate near
/// cells, elliptic + fast-march extension, RK3 advection, jump penalization,
/// optional renormalization, continuity projection, band/geometry refresh.
void updateLevelSet(LevelSetState& st, const XdgField& ux, const XdgField& uy, double dt,
                    const LevelSetOptions& opt);

}  // namespace xnse
