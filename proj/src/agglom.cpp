#include "xnse/agglom.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "xnse/basis.hpp"
#include "xnse/quadrature.hpp"

namespace xnse {

namespace {

// Follow merge chains to their ends; throws on cycles.
void compress(AggregationMap& map) {
    int n = static_cast<int>(map.parent[0].size());
    for (int s = 0; s < 2; ++s) {
        for (int j = 0; j < n; ++j) {
            if (map.parent[s][j] < 0) continue;
            int r = j, steps = 0;
            while (map.parent[s][r] >= 0) {
                r = map.parent[s][r];
                if (++steps > n) throw std::runtime_error("agglomeration map has a cycle");
            }
            map.parent[s][j] = r;
        }
    }
}

// Largest-fraction same-species edge-neighbor, ties to the lowest index.
int bestNeighbor(const CutCellData& cc, int j, int s) {
    int best = -1;
    double bestFrac = 0.0;
    for (int nb : cc.mesh().edgeNeighbors(j)) {
        double f = cc.frac(nb, s);
        if (f <= 0.0) continue;
        if (f > bestFrac + 1e-14 || (std::abs(f - bestFrac) <= 1e-14 && (best < 0 || nb < best))) {
            best = nb;
            bestFrac = f;
        }
    }
    return best;
}

}  // namespace

std::vector<std::string> AggregationMap::dumpLines(const CutCellData& cc) const {
    std::vector<std::string> lines;
    for (int s = 0; s < 2; ++s) {
        for (int j = 0; j < static_cast<int>(parent[s].size()); ++j) {
            if (parent[s][j] < 0) continue;
            int r = parent[s][j];
            std::ostringstream os;
            os << "species " << (s == 0 ? 'A' : 'B') << ": cell " << j << " (frac "
               << cc.frac(j, s) << ") -> cell " << r << " (frac " << cc.frac(r, s) << ")";
            lines.push_back(os.str());
        }
    }
    return lines;
}

AggregationMap buildSmallCellMap(const CutCellData& cc, double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("agglomeration threshold must be in (0, 0.5)");
    AggregationMap map(cc.mesh().numCells());
    for (int j : cc.cutCells()) {
        for (int s = 0; s < 2; ++s) {
            double f = cc.frac(j, s);
            if (f <= 0.0 || f >= alpha) continue;
            int target = bestNeighbor(cc, j, s);
            if (target < 0)
                throw std::runtime_error("isolated small cut cell " + std::to_string(j) +
                                         " has no same-species neighbor to merge into");
            map.parent[s][j] = target;
        }
    }
    compress(map);
    return map;
}

AggregationMap buildTopologyMap(const CutCellData& prev, const CutCellData& cur) {
    int n = cur.mesh().numCells();
    AggregationMap map(n);
    for (int j = 0; j < n; ++j) {
        for (int s = 0; s < 2; ++s) {
            bool before = prev.frac(j, s) > 0.0;
            bool now = cur.frac(j, s) > 0.0;
            if (before == now) continue;
            int target = bestNeighbor(cur, j, s);
            if (target < 0)
                throw std::runtime_error("appearing/vanishing species block in cell " +
                                         std::to_string(j) + " has no merge target");
            map.parent[s][j] = target;
        }
    }
    compress(map);
    return map;
}

AggregationMap unionMaps(const AggregationMap& a, const AggregationMap& b) {
    AggregationMap out(static_cast<int>(a.parent[0].size()));
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < static_cast<int>(out.parent[s].size()); ++j)
            out.parent[s][j] = a.parent[s][j] >= 0 ? a.parent[s][j] : b.parent[s][j];
    compress(out);
    return out;
}

Eigen::MatrixXd extensionMatrix(const BackgroundMesh& mesh, const ModalBasis& basis, int srcCell,
                                int rootCell) {
    int N = basis.size();
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(N, N);
    QuadRule q = cellQuadrature(2 * basis.degree(), mesh.hx(), mesh.hy());
    for (int i = 0; i < q.size(); ++i) {
        Vec2 phys = mesh.toPhysical(srcCell, q.nodes[i]);
        Vec2 refRoot = mesh.toReference(rootCell, phys);
        Eigen::VectorXd vs = basis.eval(q.nodes[i].x(), q.nodes[i].y());
        Eigen::VectorXd vr = basis.eval(refRoot.x(), refRoot.y());
        E += q.weights[i] * vs * vr.transpose();
    }
    return E;
}

AggBasisOps::AggBasisOps(const BackgroundMesh& mesh, const AggregationMap& map, int degree) {
    ModalBasis basis(degree, mesh.hx(), mesh.hy());
    int N = basis.size();
    int J = mesh.numCells();
    fullSize_ = 2 * J * N;

    reducedBlock_.assign(2 * J, -1);
    int nred = 0;
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < 2; ++s)
            if (!map.merged(j, s)) reducedBlock_[j * 2 + s] = nred++;
    reducedSize_ = nred * N;

    // Injection: identity on unmerged blocks; merged blocks carry the root
    // polynomial extended onto the source cell, E_lm = int_{K_src} Phi^src_l
    // Phi^root_m (exact for the degree-2k integrand).
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < J; ++j) {
        for (int s = 0; s < 2; ++s) {
            int rowBase = (j * 2 + s) * N;
            if (!map.merged(j, s)) {
                int colBase = reducedBlock_[j * 2 + s] * N;
                for (int m = 0; m < N; ++m) trip.emplace_back(rowBase + m, colBase + m, 1.0);
                continue;
            }
            int r = map.root(j, s);
            int colBase = reducedBlock_[r * 2 + s] * N;
            if (colBase < 0) throw std::runtime_error("agglomeration root is itself merged");
            Eigen::MatrixXd E = extensionMatrix(mesh, basis, j, r);
            for (int l = 0; l < N; ++l)
                for (int m = 0; m < N; ++m)
                    if (std::abs(E(l, m)) > 1e-300) trip.emplace_back(rowBase + l, colBase + m, E(l, m));
        }
    }
    T_.resize(fullSize_, reducedSize_);
    T_.setFromTriplets(trip.begin(), trip.end());

    // L2 restriction R = (T^T T)^-1 T^T; T^T T is block diagonal over reduced
    // blocks (identity except on roots, which gain sum E^T E), so invert per
    // cluster.
    Eigen::SparseMatrix<double> Tt = T_.transpose();
    Eigen::SparseMatrix<double> G = Tt * T_;
    std::vector<Eigen::Triplet<double>> rtrip;
    Eigen::MatrixXd Gb(N, N), Gi(N, N);
    for (int rb = 0; rb < nred; ++rb) {
        Gb.setZero();
        for (int cm = 0; cm < N; ++cm)
            for (Eigen::SparseMatrix<double>::InnerIterator it(G, rb * N + cm); it; ++it)
                Gb(it.row() - rb * N, cm) = it.value();
        Gi = Gb.ldlt().solve(Eigen::MatrixXd::Identity(N, N));
        // rows rb*N.. of R = Gi * (rows of T^T)
        for (int cm = 0; cm < N; ++cm)
            for (Eigen::SparseMatrix<double>::InnerIterator it(T_, rb * N + cm); it; ++it) {
                // column rb*N+cm of T contributes to R rows via Gi column cm
                for (int l = 0; l < N; ++l) {
                    double v = Gi(l, cm) * it.value();
                    if (std::abs(v) > 1e-300) rtrip.emplace_back(rb * N + l, it.row(), v);
                }
            }
    }
    R_.resize(reducedSize_, fullSize_);
    R_.setFromTriplets(rtrip.begin(), rtrip.end());
}

std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> agglomerateSystem(
    const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b, const AggBasisOps& ops) {
    const auto& T = ops.injection();
    Eigen::SparseMatrix<double> Ared = T.transpose() * A * T;
    Eigen::VectorXd bred = T.transpose() * b;
    return {std::move(Ared), std::move(bred)};
}

Eigen::VectorXd revertAgglomeration(const Eigen::VectorXd& xRed, const AggBasisOps& ops) {
    return ops.injection() * xRed;
}

}  // namespace xnse
