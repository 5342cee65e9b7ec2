#pragma once

#include "xnse/field.hpp"
#include "xnse/mesh.hpp"
#include "xnse/quadrature.hpp"

namespace xnse {

/// Species A occupies { phi < 0 }, species B { phi > 0 }.
enum class CellKind { PureA, PureB, Cut };

inline int speciesOf(CellKind k) { return k == CellKind::PureA ? 0 : 1; }

/// Per cut cell: species volume rules (nodes in cell-reference coordinates,
/// weights carrying physical measure), interface rule with unit normals
/// pointing from A into B, and volume fractions.
struct CutRules {
    QuadRule volA, volB;
    QuadRule iface;
    std::vector<Vec2> ifaceNormals;
    double fracA = 0.0, fracB = 0.0;
    double ifaceLength = 0.0;
};

/// Edge rule split by species; node x-components hold the 1D edge parameter
/// t in [-1,1] along the edge tangent, weights carry physical length.
struct EdgeRule {
    QuadRule a, b;
};

/// Point where the interface crosses a background edge, with the outward
/// interface conormals seen from each adjacent cell.
struct Crossing {
    int edge = -1;
    Vec2 point;       // physical, inner-cell side
    Vec2 tauInner;    // unit, tangent to interface, points out of the inner cell
    Vec2 tauOuter;    // same for the outer cell (unset on boundary edges)
    bool boundary = false;
};

/// Cut-cell geometry for a fixed level set: classification, species volume
/// and interface quadrature on cut cells, species-split edge rules, and
/// interface/edge crossing points.
class CutCellData {
public:
    CutCellData(const BackgroundMesh& mesh, const DgField& phi, int quadOrder);

    const BackgroundMesh& mesh() const { return *mesh_; }
    int quadOrder() const { return quadOrder_; }

    CellKind kind(int j) const { return kind_[j]; }
    bool isCut(int j) const { return kind_[j] == CellKind::Cut; }
    const std::vector<int>& cutCells() const { return cutCells_; }

    /// Volume fraction of species s (0 = A, 1 = B) in cell j.
    double frac(int j, int s) const;
    /// True if species s has any support in cell j.
    bool active(int j, int s) const { return frac(j, s) > 0.0; }

    /// Cut rules; only valid for cut cells.
    const CutRules& cutRules(int j) const;
    /// Species part of an edge (valid for every mesh edge).
    const EdgeRule& edgeRule(int e) const { return edgeRules_[e]; }

    const std::vector<Crossing>& crossings() const { return crossings_; }

    /// Interface length within cell j (0 for pure cells).
    double ifaceLength(int j) const;
    /// Species-s boundary measure of cell j: species edge parts plus the
    /// interface segment.
    double speciesPerimeter(int j, int s) const;

    double totalIfaceLength() const;
    /// Total area occupied by species s.
    double speciesArea(int s) const;

private:
    void classify(const DgField& phi);
    void buildCutRules(const DgField& phi, int j, CutRules& out) const;
    void decompose(const DgField& phi, int j, double ax, double bx, double ay, double by,
                   int depth, CutRules& out) const;
    void buildEdgeRules(const DgField& phi);
    void buildCrossings(const DgField& phi);

    const BackgroundMesh* mesh_;
    int quadOrder_;
    int n1d_;
    std::vector<CellKind> kind_;
    std::vector<int> cutCells_;
    std::vector<int> cutIndex_;  // cell -> index into rules_, -1 if pure
    std::vector<CutRules> rules_;
    std::vector<EdgeRule> edgeRules_;
    std::vector<Crossing> crossings_;
};

}  // namespace xnse
