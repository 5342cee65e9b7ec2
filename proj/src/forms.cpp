#include "xnse/forms.hpp"

#include <stdexcept>

#include "xnse/quadrature.hpp"

namespace xnse {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

Vec2 edgeTangent(const Edge& ed) { return ed.axis == 0 ? Vec2(0, 1) : Vec2(1, 0); }

Vec2 edgePoint(const Edge& ed, double t) {
    return ed.midpoint + t * (ed.length / 2) * edgeTangent(ed);
}

Vec2 dirichletData(const BoundaryTag& tag, const Vec2& p, double time) {
    return tag.velocity ? tag.velocity(p, time) : Vec2::Zero();
}

// |dK_s| / |K_s| of species s in cell j; 0 if the species has no support.
double geomRatio(const CutCellData& cc, int j, int s) {
    const BackgroundMesh& m = cc.mesh();
    if (!cc.isCut(j)) {
        if (speciesOf(cc.kind(j)) != s) return 0.0;
        return 2.0 * (m.hx() + m.hy()) / m.cellArea();
    }
    double f = cc.frac(j, s);
    if (f <= 0.0) return 0.0;
    double ratio = cc.speciesPerimeter(j, s) / (f * m.cellArea());
    if (!(ratio > 0.0)) throw std::runtime_error("nonpositive cut-cell geometric factor");
    return ratio;
}

double etaTilde(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par,
                int j, int s) {
    int k = space.degree();
    return par.eta0 * k * k * geomRatio(cc, j, s);
}

void addBlock(Triplets& trip, int rowBase, int colBase, const Eigen::MatrixXd& blk) {
    for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c)
            if (blk(r, c) != 0.0) trip.emplace_back(rowBase + r, colBase + c, blk(r, c));
}

// Stacked local velocity dof layout for one edge: [side0 comp0, side0 comp1,
// side1 comp0, side1 comp1], each of length nu.
struct EdgeSide {
    int cell = -1;
    int species = 0;
    bool present = false;
    Eigen::VectorXd val;   // basis values at the current node
    Eigen::MatrixXd grad;  // physical gradients, nu x 2
};

// Test/flux vectors in the stacked layout.
Eigen::VectorXd stackedTest(const EdgeSide sides[2], int nu, int side, int c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(4 * nu);
    v.segment((side * 2 + c) * nu, nu) = sides[side].val;
    return v;
}

Eigen::VectorXd stackedFlux(const EdgeSide sides[2], int nu, int side, int c, const Vec2& n,
                            double mu) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(4 * nu);
    const Eigen::MatrixXd& g = sides[side].grad;
    // mu * ((grad u + grad u^T) n)_c for trial component d
    for (int d = 0; d < 2; ++d) {
        Eigen::VectorXd part = mu * n[d] * g.col(c);
        if (d == c) part += mu * (g * Eigen::Vector2d(n)).eval();
        f.segment((side * 2 + d) * nu, nu) += part;
    }
    return f;
}

void scatterEdgeBlock(Triplets& trip, const MixedSpace& space, const EdgeSide sides[2],
                      const Eigen::MatrixXd& local) {
    int nu = space.nu();
    for (int a = 0; a < 2; ++a) {
        if (!sides[a].present) continue;
        for (int b = 0; b < 2; ++b) {
            if (!sides[b].present) continue;
            for (int ca = 0; ca < 2; ++ca)
                for (int cb = 0; cb < 2; ++cb)
                    addBlock(trip, space.uBase(sides[a].cell, sides[a].species, ca),
                             space.uBase(sides[b].cell, sides[b].species, cb),
                             local.block((a * 2 + ca) * nu, (b * 2 + cb) * nu, nu, nu));
        }
    }
}

}  // namespace

SpMat assembleMass(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& vb = space.velBasis();
    int nu = space.nu();
    Triplets trip;
    for (int j = 0; j < mesh.numCells(); ++j) {
        if (!cc.isCut(j)) {
            int s = speciesOf(cc.kind(j));
            for (int c = 0; c < 2; ++c)
                for (int m = 0; m < nu; ++m) {
                    int i = space.uBase(j, s, c) + m;
                    trip.emplace_back(i, i, par.rho(s));
                }
            continue;
        }
        for (int s = 0; s < 2; ++s) {
            const QuadRule& q = s == 0 ? cc.cutRules(j).volA : cc.cutRules(j).volB;
            if (q.size() == 0) continue;
            Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nu, nu);
            for (int i = 0; i < q.size(); ++i) {
                Eigen::VectorXd v = vb.eval(q.nodes[i].x(), q.nodes[i].y());
                gram += q.weights[i] * v * v.transpose();
            }
            gram *= par.rho(s);
            for (int c = 0; c < 2; ++c)
                addBlock(trip, space.uBase(j, s, c), space.uBase(j, s, c), gram);
        }
    }
    SpMat M(space.size(), space.size());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

double viscousPenalty(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par,
                      int edge, int s) {
    const Edge& ed = space.mesh().edge(edge);
    double et = etaTilde(space, cc, par, ed.inner, s);
    if (ed.isInterior()) et = std::max(et, etaTilde(space, cc, par, ed.outer, s));
    return par.mu(s) * et;
}

double interfacePenalty(const MixedSpace& space, const CutCellData& cc,
                        const PhysicalParams& par, int cell) {
    double et = std::max(etaTilde(space, cc, par, cell, 0), etaTilde(space, cc, par, cell, 1));
    return std::max(par.muA, par.muB) * et;
}

namespace {

// Shared machinery for the viscous SIP form and its Dirichlet right-hand
// side: walks every edge segment and the interface once; if `rhs` is given,
// only the boundary-data terms are accumulated, otherwise matrix triplets.
void viscousWalk(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par,
                 Triplets* trip, Eigen::VectorXd* rhs, double time) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& vb = space.velBasis();
    int nu = space.nu();

    if (trip) {
        // volume term: mu (grad u : grad v + grad u^T : grad v)
        QuadRule full = cellQuadrature(2 * space.degree(), mesh.hx(), mesh.hy());
        for (int j = 0; j < mesh.numCells(); ++j) {
            for (int s = 0; s < 2; ++s) {
                const QuadRule* q = nullptr;
                if (cc.isCut(j))
                    q = s == 0 ? &cc.cutRules(j).volA : &cc.cutRules(j).volB;
                else if (speciesOf(cc.kind(j)) == s)
                    q = &full;
                if (!q || q->size() == 0) continue;
                double mu = par.mu(s);
                Eigen::MatrixXd local = Eigen::MatrixXd::Zero(2 * nu, 2 * nu);
                for (int i = 0; i < q->size(); ++i) {
                    Eigen::MatrixXd g = vb.evalGrad(q->nodes[i].x(), q->nodes[i].y());
                    double w = mu * q->weights[i];
                    Eigen::MatrixXd gg = w * g * g.transpose();
                    for (int c = 0; c < 2; ++c) {
                        local.block(c * nu, c * nu, nu, nu) += gg;
                        for (int d = 0; d < 2; ++d)
                            local.block(c * nu, d * nu, nu, nu) +=
                                w * g.col(d) * g.col(c).transpose();
                    }
                }
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d)
                        addBlock(*trip, space.uBase(j, s, c), space.uBase(j, s, d),
                                 local.block(c * nu, d * nu, nu, nu));
            }
        }
    }

    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        BoundaryKind bk = BoundaryKind::Periodic;
        if (ed.isBoundary()) {
            bk = mesh.sideTag(ed.side).kind;
            if (bk == BoundaryKind::Neumann) continue;
        }
        for (int s = 0; s < 2; ++s) {
            const QuadRule& er = s == 0 ? cc.edgeRule(e).a : cc.edgeRule(e).b;
            if (er.totalWeight() < 1e-14) continue;
            bool haveOut = ed.isInterior() && cc.frac(ed.outer, s) > 0.0;
            if (ed.isInterior() && !haveOut) continue;  // zero-jump closure
            if (cc.frac(ed.inner, s) <= 0.0) continue;

            double eta = viscousPenalty(space, cc, par, e, s);
            double mu = par.mu(s);
            EdgeSide sides[2];
            sides[0] = {ed.inner, s, true, {}, {}};
            if (haveOut) sides[1] = {ed.outer, s, true, {}, {}};

            Eigen::MatrixXd local = Eigen::MatrixXd::Zero(4 * nu, 4 * nu);
            Eigen::VectorXd rlocal = Eigen::VectorXd::Zero(4 * nu);
            for (int i = 0; i < er.size(); ++i) {
                double w = er.weights[i];
                Vec2 p = edgePoint(ed, er.nodes[i].x());
                Vec2 ri = mesh.toReference(ed.inner, p);
                sides[0].val = vb.eval(ri.x(), ri.y());
                sides[0].grad = vb.evalGrad(ri.x(), ri.y());
                if (haveOut) {
                    Vec2 ro = mesh.toReference(ed.outer, p - ed.outerShift);
                    sides[1].val = vb.eval(ro.x(), ro.y());
                    sides[1].grad = vb.evalGrad(ro.x(), ro.y());
                }

                if (ed.isBoundary() && bk == BoundaryKind::FreeSlip) {
                    // normal components only, homogeneous data
                    Eigen::VectorXd jn = Eigen::VectorXd::Zero(4 * nu);
                    Eigen::VectorXd fn = Eigen::VectorXd::Zero(4 * nu);
                    for (int c = 0; c < 2; ++c) {
                        jn += ed.normal[c] * stackedTest(sides, nu, 0, c);
                        fn += ed.normal[c] * stackedFlux(sides, nu, 0, c, ed.normal, mu);
                    }
                    if (trip)
                        local += w * (eta * jn * jn.transpose() - jn * fn.transpose() -
                                      fn * jn.transpose());
                    continue;
                }

                Vec2 ub = Vec2::Zero();
                bool datum = ed.isBoundary();
                if (datum) ub = dirichletData(mesh.sideTag(ed.side), p, time);

                for (int c = 0; c < 2; ++c) {
                    Eigen::VectorXd jt = stackedTest(sides, nu, 0, c);
                    Eigen::VectorXd af = stackedFlux(sides, nu, 0, c, ed.normal, mu);
                    if (haveOut) {
                        jt -= stackedTest(sides, nu, 1, c);
                        af = 0.5 * (af + stackedFlux(sides, nu, 1, c, ed.normal, mu));
                    }
                    if (trip)
                        local += w * (eta * jt * jt.transpose() - jt * af.transpose() -
                                      af * jt.transpose());
                    if (rhs && datum) rlocal += w * ub[c] * (eta * jt - af);
                }
            }
            if (trip) scatterEdgeBlock(*trip, space, sides, local);
            if (rhs) {
                for (int c = 0; c < 2; ++c)
                    rhs->segment(space.uBase(ed.inner, s, c), nu) +=
                        rlocal.segment(c * nu, nu);
            }
        }
    }

    // interface as an interior edge between the species blocks of a cut cell
    if (trip) {
        for (int j : cc.cutCells()) {
            const CutRules& cr = cc.cutRules(j);
            if (cr.iface.size() == 0) continue;
            double eta = interfacePenalty(space, cc, par, j);
            EdgeSide sides[2];
            sides[0] = {j, 0, true, {}, {}};
            sides[1] = {j, 1, true, {}, {}};
            Eigen::MatrixXd local = Eigen::MatrixXd::Zero(4 * nu, 4 * nu);
            for (int i = 0; i < cr.iface.size(); ++i) {
                double w = cr.iface.weights[i];
                const Vec2& n = cr.ifaceNormals[i];
                Vec2 ref = cr.iface.nodes[i];
                sides[0].val = sides[1].val = vb.eval(ref.x(), ref.y());
                sides[0].grad = sides[1].grad = vb.evalGrad(ref.x(), ref.y());
                for (int c = 0; c < 2; ++c) {
                    Eigen::VectorXd jt =
                        stackedTest(sides, nu, 0, c) - stackedTest(sides, nu, 1, c);
                    Eigen::VectorXd af = 0.5 * (stackedFlux(sides, nu, 0, c, n, par.muA) +
                                                stackedFlux(sides, nu, 1, c, n, par.muB));
                    local += w * (eta * jt * jt.transpose() - jt * af.transpose() -
                                  af * jt.transpose());
                }
            }
            scatterEdgeBlock(*trip, space, sides, local);
        }
    }
}

}  // namespace

SpMat assembleViscous(const MixedSpace& space, const CutCellData& cc, const PhysicalParams& par) {
    Triplets trip;
    viscousWalk(space, cc, par, &trip, nullptr, 0.0);
    SpMat A(space.size(), space.size());
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

Eigen::VectorXd viscousBoundaryRhs(const MixedSpace& space, const CutCellData& cc,
                                   const PhysicalParams& par, double time) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.size());
    viscousWalk(space, cc, par, nullptr, &rhs, time);
    return rhs;
}

SpMat assemblePressureConti(const MixedSpace& space, const CutCellData& cc) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& vb = space.velBasis();
    const ModalBasis& pb = space.presBasis();
    int nu = space.nu(), np = space.np();
    Triplets trip;
    auto addSym = [&](int urow, int pcol, double v) {
        if (v == 0.0) return;
        trip.emplace_back(urow, pcol, v);  // velocity row, pressure column
        trip.emplace_back(pcol, urow, v);  // exact transpose in pressure rows
    };

    // volume: -int p div v per species region
    QuadRule full = cellQuadrature(2 * space.degree(), mesh.hx(), mesh.hy());
    for (int j = 0; j < mesh.numCells(); ++j) {
        for (int s = 0; s < 2; ++s) {
            const QuadRule* q = nullptr;
            if (cc.isCut(j))
                q = s == 0 ? &cc.cutRules(j).volA : &cc.cutRules(j).volB;
            else if (speciesOf(cc.kind(j)) == s)
                q = &full;
            if (!q || q->size() == 0) continue;
            for (int i = 0; i < q->size(); ++i) {
                Eigen::MatrixXd g = vb.evalGrad(q->nodes[i].x(), q->nodes[i].y());
                Eigen::VectorXd pv = pb.eval(q->nodes[i].x(), q->nodes[i].y());
                for (int c = 0; c < 2; ++c)
                    for (int l = 0; l < nu; ++l) {
                        double gv = -q->weights[i] * g(l, c);
                        if (gv == 0.0) continue;
                        for (int m = 0; m < np; ++m)
                            addSym(space.uBase(j, s, c) + l, space.pBase(j, s) + m, gv * pv[m]);
                    }
            }
        }
    }

    // edges: + {p} [[v]].n over interior, Dirichlet and free-slip boundaries
    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (ed.isBoundary() && mesh.sideTag(ed.side).kind == BoundaryKind::Neumann) continue;
        for (int s = 0; s < 2; ++s) {
            const QuadRule& er = s == 0 ? cc.edgeRule(e).a : cc.edgeRule(e).b;
            if (er.totalWeight() < 1e-14) continue;
            bool haveIn = cc.frac(ed.inner, s) > 0.0;
            bool haveOut = ed.isInterior() && cc.frac(ed.outer, s) > 0.0;
            if (!haveIn && !haveOut) continue;
            double avg = haveIn && haveOut ? 0.5 : 1.0;
            for (int i = 0; i < er.size(); ++i) {
                double w = er.weights[i];
                Vec2 p = edgePoint(ed, er.nodes[i].x());
                Vec2 ri = mesh.toReference(ed.inner, p);
                Vec2 ro = haveOut ? Vec2(mesh.toReference(ed.outer, p - ed.outerShift))
                                  : Vec2::Zero();
                for (int side = 0; side < 2; ++side) {  // test (jump) side
                    if (side == 0 && !haveIn) continue;
                    if (side == 1 && !haveOut) continue;
                    int jc = side == 0 ? ed.inner : ed.outer;
                    const Vec2& r = side == 0 ? ri : ro;
                    double sgn = side == 0 ? 1.0 : -1.0;
                    Eigen::VectorXd vv = vb.eval(r.x(), r.y());
                    for (int pside = 0; pside < 2; ++pside) {  // trial (average) side
                        if (pside == 0 && !haveIn) continue;
                        if (pside == 1 && !haveOut) continue;
                        int jp = pside == 0 ? ed.inner : ed.outer;
                        const Vec2& rp = pside == 0 ? ri : ro;
                        Eigen::VectorXd pv = pb.eval(rp.x(), rp.y());
                        for (int c = 0; c < 2; ++c) {
                            double f = w * sgn * ed.normal[c] * avg;
                            for (int l = 0; l < nu; ++l)
                                for (int m = 0; m < np; ++m)
                                    addSym(space.uBase(jc, s, c) + l, space.pBase(jp, s) + m,
                                           f * vv[l] * pv[m]);
                        }
                    }
                }
            }
        }
    }

    // interface: jump of v across species, average of p
    for (int j : cc.cutCells()) {
        const CutRules& cr = cc.cutRules(j);
        for (int i = 0; i < cr.iface.size(); ++i) {
            double w = cr.iface.weights[i];
            const Vec2& n = cr.ifaceNormals[i];
            Vec2 ref = cr.iface.nodes[i];
            Eigen::VectorXd vv = vb.eval(ref.x(), ref.y());
            Eigen::VectorXd pv = pb.eval(ref.x(), ref.y());
            for (int sv = 0; sv < 2; ++sv) {
                double sgn = sv == 0 ? 1.0 : -1.0;
                for (int sp = 0; sp < 2; ++sp)
                    for (int c = 0; c < 2; ++c) {
                        double f = 0.5 * w * sgn * n[c];
                        for (int l = 0; l < nu; ++l)
                            for (int m = 0; m < np; ++m)
                                addSym(space.uBase(j, sv, c) + l, space.pBase(j, sp) + m,
                                       f * vv[l] * pv[m]);
                    }
            }
        }
    }

    SpMat B(space.size(), space.size());
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

Eigen::VectorXd contiBoundaryRhs(const MixedSpace& space, const CutCellData& cc, double time) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& pb = space.presBasis();
    int np = space.np();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.size());
    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (!ed.isBoundary()) continue;
        const BoundaryTag& tag = mesh.sideTag(ed.side);
        if (tag.kind != BoundaryKind::Dirichlet) continue;  // free-slip data is u.n = 0
        for (int s = 0; s < 2; ++s) {
            const QuadRule& er = s == 0 ? cc.edgeRule(e).a : cc.edgeRule(e).b;
            if (er.totalWeight() < 1e-14 || cc.frac(ed.inner, s) <= 0.0) continue;
            for (int i = 0; i < er.size(); ++i) {
                Vec2 p = edgePoint(ed, er.nodes[i].x());
                double un = dirichletData(tag, p, time).dot(ed.normal);
                if (un == 0.0) continue;
                Vec2 ri = mesh.toReference(ed.inner, p);
                rhs.segment(space.pBase(ed.inner, s), np) +=
                    er.weights[i] * un * pb.eval(ri.x(), ri.y());
            }
        }
    }
    return rhs;
}

std::pair<SpMat, Eigen::VectorXd> assembleConvection(const MixedSpace& space,
                                                     const CutCellData& cc,
                                                     const PhysicalParams& par,
                                                     const Eigen::VectorXd& ustar, double time) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& vb = space.velBasis();
    int nu = space.nu();
    Triplets trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.size());

    // volume: -int rho u_c (u* . grad v_c)
    QuadRule full = cellQuadrature(3 * space.degree(), mesh.hx(), mesh.hy());
    for (int j = 0; j < mesh.numCells(); ++j) {
        for (int s = 0; s < 2; ++s) {
            const QuadRule* q = nullptr;
            if (cc.isCut(j))
                q = s == 0 ? &cc.cutRules(j).volA : &cc.cutRules(j).volB;
            else if (speciesOf(cc.kind(j)) == s)
                q = &full;
            if (!q || q->size() == 0) continue;
            double rho = par.rho(s);
            Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nu, nu);
            for (int i = 0; i < q->size(); ++i) {
                Vec2 us = space.velocity(ustar, j, s, q->nodes[i]);
                Eigen::MatrixXd g = vb.evalGrad(q->nodes[i].x(), q->nodes[i].y());
                Eigen::VectorXd vv = vb.eval(q->nodes[i].x(), q->nodes[i].y());
                local -= (rho * q->weights[i]) * (g * Eigen::Vector2d(us)) * vv.transpose();
            }
            for (int c = 0; c < 2; ++c)
                addBlock(trip, space.uBase(j, s, c), space.uBase(j, s, c), local);
        }
    }

    // edge flux {u (u*.n)} + (lambda/2)[[u]], tested with [[rho v]]; the
    // interface carries no edge term, free-slip walls have u*.n = 0
    for (int e = 0; e < mesh.numEdges(); ++e) {
        const Edge& ed = mesh.edge(e);
        BoundaryKind bk = BoundaryKind::Periodic;
        if (ed.isBoundary()) {
            bk = mesh.sideTag(ed.side).kind;
            if (bk == BoundaryKind::FreeSlip) continue;
        }
        for (int s = 0; s < 2; ++s) {
            const QuadRule& er = s == 0 ? cc.edgeRule(e).a : cc.edgeRule(e).b;
            if (er.totalWeight() < 1e-14 || cc.frac(ed.inner, s) <= 0.0) continue;
            bool haveOut = ed.isInterior() && cc.frac(ed.outer, s) > 0.0;
            if (ed.isInterior() && !haveOut) continue;  // zero-jump closure
            double rho = par.rho(s);
            Eigen::MatrixXd Aii = Eigen::MatrixXd::Zero(nu, nu), Aio = Aii, Aoi = Aii, Aoo = Aii;
            Eigen::MatrixXd rhsIn = Eigen::MatrixXd::Zero(nu, 2);
            for (int i = 0; i < er.size(); ++i) {
                double w = er.weights[i];
                Vec2 p = edgePoint(ed, er.nodes[i].x());
                Vec2 ri = mesh.toReference(ed.inner, p);
                Eigen::VectorXd vi = vb.eval(ri.x(), ri.y());
                double ain = space.velocity(ustar, ed.inner, s, ri).dot(ed.normal);
                if (haveOut) {
                    Vec2 ro = mesh.toReference(ed.outer, p - ed.outerShift);
                    Eigen::VectorXd vo = vb.eval(ro.x(), ro.y());
                    double aout = space.velocity(ustar, ed.outer, s, ro).dot(ed.normal);
                    double lam = std::max(std::abs(ain), std::abs(aout));
                    // test [[rho v]] = rho (v_in - v_out), same species both sides
                    double ci = 0.5 * ain + 0.5 * lam, co = 0.5 * aout - 0.5 * lam;
                    Aii += (w * rho * ci) * vi * vi.transpose();
                    Aio += (w * rho * co) * vi * vo.transpose();
                    Aoi -= (w * rho * ci) * vo * vi.transpose();
                    Aoo -= (w * rho * co) * vo * vo.transpose();
                } else if (bk == BoundaryKind::Dirichlet) {
                    Vec2 ub = dirichletData(mesh.sideTag(ed.side), p, time);
                    double ab = ub.dot(ed.normal);
                    double lam = std::max(std::abs(ain), std::abs(ab));
                    Aii += (w * rho * (0.5 * ain + 0.5 * lam)) * vi * vi.transpose();
                    for (int c = 0; c < 2; ++c)
                        rhsIn.col(c) -= (w * rho * (0.5 * ab - 0.5 * lam) * ub[c]) * vi;
                } else {  // Neumann outflow: one-sided flux
                    Aii += (w * rho * ain) * vi * vi.transpose();
                }
            }
            for (int c = 0; c < 2; ++c) {
                addBlock(trip, space.uBase(ed.inner, s, c), space.uBase(ed.inner, s, c), Aii);
                if (haveOut) {
                    addBlock(trip, space.uBase(ed.inner, s, c), space.uBase(ed.outer, s, c), Aio);
                    addBlock(trip, space.uBase(ed.outer, s, c), space.uBase(ed.inner, s, c), Aoi);
                    addBlock(trip, space.uBase(ed.outer, s, c), space.uBase(ed.outer, s, c), Aoo);
                }
                rhs.segment(space.uBase(ed.inner, s, c), nu) += rhsIn.col(c);
            }
        }
    }

    SpMat C(space.size(), space.size());
    C.setFromTriplets(trip.begin(), trip.end());
    return {std::move(C), std::move(rhs)};
}

Eigen::VectorXd gravityRhs(const MixedSpace& space, const CutCellData& cc,
                           const PhysicalParams& par) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& vb = space.velBasis();
    int nu = space.nu();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.size());
    if (par.gravity.isZero()) return rhs;
    QuadRule full = cellQuadrature(space.degree() + 1, mesh.hx(), mesh.hy());
    for (int j = 0; j < mesh.numCells(); ++j) {
        for (int s = 0; s < 2; ++s) {
            const QuadRule* q = nullptr;
            if (cc.isCut(j))
                q = s == 0 ? &cc.cutRules(j).volA : &cc.cutRules(j).volB;
            else if (speciesOf(cc.kind(j)) == s)
                q = &full;
            if (!q || q->size() == 0) continue;
            double rho = par.rho(s);
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(nu);
            for (int i = 0; i < q->size(); ++i)
                acc += q->weights[i] * vb.eval(q->nodes[i].x(), q->nodes[i].y());
            for (int c = 0; c < 2; ++c)
                rhs.segment(space.uBase(j, s, c), nu) += (rho * par.gravity[c]) * acc;
        }
    }
    return rhs;
}

Eigen::VectorXd surfaceTensionRhs(const MixedSpace& space, const CutCellData& cc,
                                  const PhysicalParams& par) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& vb = space.velBasis();
    int nu = space.nu();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.size());
    if (par.sigma == 0.0) return rhs;

    // - sigma int_I P : grad_I {v}, with {v} the species average
    for (int j : cc.cutCells()) {
        const CutRules& cr = cc.cutRules(j);
        for (int i = 0; i < cr.iface.size(); ++i) {
            double w = cr.iface.weights[i];
            const Vec2& n = cr.ifaceNormals[i];
            Eigen::Matrix2d P = Eigen::Matrix2d::Identity() - n * n.transpose();
            Eigen::MatrixXd g = vb.evalGrad(cr.iface.nodes[i].x(), cr.iface.nodes[i].y());
            Eigen::MatrixXd pg = g * P;  // (P grad phi_m)_c = pg(m, c)
            for (int s = 0; s < 2; ++s)
                for (int c = 0; c < 2; ++c)
                    rhs.segment(space.uBase(j, s, c), nu) -= (0.5 * par.sigma * w) * pg.col(c);
        }
    }

    // + sigma {tau} . [[{v}]] at interface-edge crossings; per cell the
    // species-averaged trace is used
    for (const Crossing& cr : cc.crossings()) {
        const Edge& ed = mesh.edge(cr.edge);
        Vec2 tbar = cr.boundary ? cr.tauInner : Vec2(0.5 * (cr.tauInner - cr.tauOuter));
        auto add = [&](int j, const Vec2& pt, double sign) {
            Vec2 ref = mesh.toReference(j, pt);
            Eigen::VectorXd vv = vb.eval(ref.x(), ref.y());
            double wspec = cc.isCut(j) ? 0.5 : 1.0;
            for (int s = 0; s < 2; ++s) {
                if (!cc.isCut(j) && speciesOf(cc.kind(j)) != s) continue;
                for (int c = 0; c < 2; ++c)
                    rhs.segment(space.uBase(j, s, c), nu) +=
                        (sign * wspec * par.sigma * tbar[c]) * vv;
            }
        };
        add(ed.inner, cr.point, 1.0);
        if (!cr.boundary) add(ed.outer, cr.point - ed.outerShift, -1.0);
    }
    return rhs;
}

void projectVelocity(const MixedSpace& space, const CutCellData& cc,
                     const std::function<Vec2(const Vec2&)>& f, Eigen::VectorXd& x) {
    const BackgroundMesh& mesh = space.mesh();
    const ModalBasis& vb = space.velBasis();
    int nu = space.nu();
    QuadRule q = cellQuadrature(2 * space.degree() + 2, mesh.hx(), mesh.hy());
    for (int j = 0; j < mesh.numCells(); ++j) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nu, 2);
        for (int i = 0; i < q.size(); ++i) {
            Vec2 val = f(mesh.toPhysical(j, q.nodes[i]));
            Eigen::VectorXd vv = vb.eval(q.nodes[i].x(), q.nodes[i].y());
            for (int c = 0; c < 2; ++c) acc.col(c) += (q.weights[i] * val[c]) * vv;
        }
        for (int s = 0; s < 2; ++s) {
            if (cc.frac(j, s) <= 0.0) continue;
            for (int c = 0; c < 2; ++c) x.segment(space.uBase(j, s, c), nu) = acc.col(c);
        }
    }
}

}  // namespace xnse
