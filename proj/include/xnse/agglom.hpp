#pragma once

#include <Eigen/Sparse>
#include <string>

#include "xnse/cutcell.hpp"

namespace xnse {

/// Directed merges of cut-cell species blocks into edge-neighbor blocks of
/// the same species.  parent[s][j] is the direct merge target of (cell j,
/// species s), or -1; after construction all chains are compressed so parents
/// are roots.
struct AggregationMap {
    std::array<std::vector<int>, 2> parent;

    explicit AggregationMap(int numCells = 0) {
        parent[0].assign(numCells, -1);
        parent[1].assign(numCells, -1);
    }

    bool empty() const {
        for (int s = 0; s < 2; ++s)
            for (int p : parent[s])
                if (p >= 0) return false;
        return true;
    }
    bool merged(int j, int s) const { return parent[s][j] >= 0; }
    int root(int j, int s) const { return merged(j, s) ? parent[s][j] : j; }

    /// One line per merge: species, source cell, target cell, fractions.
    std::vector<std::string> dumpLines(const CutCellData& cc) const;
};

/// Merge every cut cell with species fraction in (0, alpha) into its
/// largest-fraction same-species edge-neighbor (ties to the lowest cell
/// index); chains are compressed to roots with fraction >= alpha.
/// Throws if a small cell has no same-species neighbor with positive volume.
AggregationMap buildSmallCellMap(const CutCellData& cc, double alpha = 0.1);

/// Merges for species blocks that appear (zero volume before, positive now)
/// or vanish (positive before, zero now) between two cut-cell states on the
/// same background mesh; targets chosen by the current-state fractions.
AggregationMap buildTopologyMap(const CutCellData& prev, const CutCellData& cur);

/// Union of two maps (first map wins on conflicts), re-compressed.
AggregationMap unionMaps(const AggregationMap& a, const AggregationMap& b);

/// Coefficients of a root-cell polynomial re-expanded in the basis of a
/// source cell: E_lm = int_{K_src} Phi^src_l Phi^root_m (exact).
Eigen::MatrixXd extensionMatrix(const BackgroundMesh& mesh, const ModalBasis& basis, int srcCell,
                                int rootCell);

/// Transfer operators between the full two-blocks-per-cell coefficient
/// layout (block j*2+s, size N each) and the agglomerated layout where
/// merged source blocks are dropped.  Injection extends each root polynomial
/// onto its merged cells (coefficients unchanged on the root); restriction
/// is the L2 left inverse.
class AggBasisOps {
public:
    AggBasisOps(const BackgroundMesh& mesh, const AggregationMap& map, int degree);

    int fullSize() const { return fullSize_; }
    int reducedSize() const { return reducedSize_; }
    /// Reduced block index of (cell, species); -1 for merged source blocks.
    int reducedBlock(int j, int s) const { return reducedBlock_[j * 2 + s]; }

    const Eigen::SparseMatrix<double>& injection() const { return T_; }
    const Eigen::SparseMatrix<double>& restriction() const { return R_; }

private:
    int fullSize_ = 0, reducedSize_ = 0;
    std::vector<int> reducedBlock_;
    Eigen::SparseMatrix<double> T_, R_;
};

/// Galerkin restriction of an assembled system onto the agglomerated space.
std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> agglomerateSystem(
    const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, const AggBasisOps& ops);

/// Injection of an agglomerated solution back to the full layout.
Eigen::VectorXd revertAgglomeration(const Eigen::VectorXd& xRed, const AggBasisOps& ops);

}  // namespace xnse
