#pragma once

#include <array>
#include <memory>

#include "xnse/agglom.hpp"
#include "xnse/evolution.hpp"
#include "xnse/forms.hpp"

namespace xnse {

/// Backward-differentiation coefficients (d0..d3) for orders 1..3; the
/// history weights d1.. sum to 1.
std::array<double, 4> bdfCoefficients(int order);

/// Transfer between the fixed mixed coefficient layout and the agglomerated
/// solve space: species blocks without support are dropped, merged blocks
/// are slaved to their root polynomial (separately for both velocity
/// components and the pressure).
class MixedTransfer {
public:
    MixedTransfer(const MixedSpace& space, const CutCellData& cc, const AggregationMap& map);

    const SpMat& injection() const { return T_; }
    int reducedSize() const { return reduced_; }
    /// Offsets/sizes of the reduced scalar sub-blocks (for block-Jacobi).
    const std::vector<std::pair<int, int>>& blocks() const { return blocks_; }

private:
    SpMat T_;
    int reduced_ = 0;
    std::vector<std::pair<int, int>> blocks_;
};

/// Fill species blocks that newly gained support with the polynomial of
/// their agglomeration root; all other coefficients stay unchanged.
void extrapolateState(Eigen::VectorXd& x, const MixedSpace& space, const CutCellData& ccOld,
                      const CutCellData& ccNew, const AggregationMap& map);

/// Symmetric block-diagonal congruence scaling that maps the symmetric part
/// of each diagonal block to a signature matrix (entries near 0, -1, +1).
SpMat blockJacobiScaling(const SpMat& A, const std::vector<std::pair<int, int>>& blocks);

/// Sparse direct solve; `pin` (if nonempty) is appended as a rank-1
/// Lagrange constraint pin . x = 0 (mean-pressure pinning).  Throws if the
/// factorization fails or the relative residual exceeds tol.
Eigen::VectorXd solveLinear(const SpMat& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& pin, double tol);

struct SolverConfig {
    double epsNse = 1e-8;  // Picard tolerance (preconditioned relative residual)
    int imax = 10;
    bool implicitLs = false;  // re-couple the interface until its residual settles
    double epsLs = 1e-8;
    double linTol = 1e-10;
    double alpha = 0.1;  // agglomeration volume-fraction threshold
    int quadOrder = 8;
    bool verbose = false;
    LevelSetOptions ls;
};

struct FlowState {
    double t = 0.0;
    Eigen::VectorXd x;  // mixed layout (velocity + pressure)
    // momentum history M^m s^m, newest first, each formed with the mass
    // matrix and geometry of its own time level
    std::vector<Eigen::VectorXd> hist;
    std::vector<std::shared_ptr<CutCellData>> histCc;
};

struct StepInfo {
    int picardIters = 0;
    double residual = 0.0;
    int agglomerated = 0;
    int lsOuterIters = 1;
};

/// One moving-interface time step: advance the level set with the current
/// velocity, rebuild geometry and aggregation (small cells plus topology
/// changes against every history level), extrapolate, then Picard-iterate
/// the BDF flow system on the agglomerated space.
class TimeStepper {
public:
    TimeStepper(const MixedSpace& space, const PhysicalParams& par, SolverConfig cfg);

    StepInfo step(LevelSetState& ls, FlowState& st, double dt);

private:
    StepInfo solveFlow(const LevelSetState& ls, FlowState& st, const AggregationMap& map,
                       double dt, double tNew, Eigen::VectorXd& xOut) const;
    Eigen::VectorXd pressureMeanVector(const CutCellData& cc) const;

    const MixedSpace* space_;
    PhysicalParams par_;
    SolverConfig cfg_;
    int stepIndex_ = 0;
};

}  // namespace xnse
