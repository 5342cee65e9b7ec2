#pragma once

#include "xnse/cutcell.hpp"
#include "xnse/field.hpp"

namespace xnse {

/// Band partition around the interface: cut cells, their point neighbors,
/// and the far remainder.
struct NarrowBand {
    std::vector<int> cut;
    std::vector<int> nearCells;
    std::vector<char> mark;  // 0 far, 1 near, 2 cut

    bool isCut(int j) const { return mark[j] == 2; }
    bool isNear(int j) const { return mark[j] == 1; }
    bool inBand(int j) const { return mark[j] != 0; }
};

NarrowBand updateNarrowBand(const BackgroundMesh& mesh, const CutCellData& cc);

/// Constraint rows tying the traces of the two cells of an interior edge
/// together at degree+2 Gauss-Lobatto points (degree is the target field
/// degree; its edge trace has degree+1 coefficients, so the points pin it
/// down exactly).  Columns: [inner-cell modes | outer-cell modes].
Eigen::MatrixXd constraintRows(const BackgroundMesh& mesh, int edge, const ModalBasis& basis);

/// Raise phiEvo by one degree and make it continuous across interior
/// narrow-band edges: minimal-L2 correction subject to trace equality,
/// solved via the Schur complement of the constraint system.
DgField continuityProject(const DgField& phiEvo, const NarrowBand& band);

/// Propagate signed-distance data from the cut cells onto the near band by
/// fast marching in ascending |cell mean| order.  When `only` is given, just
/// those near cells are rebuilt and the remaining band cells count as valid
/// sources (used to fill cells that newly entered the band).
void fastMarchReinit(DgField& phiEvo, const CutCellData& cc, const NarrowBand& band,
                     const std::vector<int>* only = nullptr);

/// Node-wise gradient renormalization on cut cells, iterated to push
/// |grad phi| toward 1 while keeping the zero set in place.  Returns false
/// (leaving the field untouched) if the iteration stalls or the interface
/// would move more than epsReinit*0.1*h.
bool gradientRenormalize(DgField& phiEvo, const CutCellData& cc, double epsReinit = 1e-2);

}  // namespace xnse
