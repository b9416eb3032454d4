#include "billiards/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace billiards {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Distance on the quotient cylinder (phi mod cell, p euclidean).
double cyl_dist(const PhasePoint& a, const PhasePoint& b, double cell) {
    return std::hypot(std::remainder(b.phi - a.phi, cell), b.p - a.p);
}

Vec2 edge_vec(const PhasePoint& a, const PhasePoint& b, double cell) {
    return {std::remainder(b.phi - a.phi, cell), b.p - a.p};
}

Vec2 apply_jacobian(const Jacobian2& J, const Vec2& v) {
    return {J.dphi1_dphi * v.x + J.dphi1_dp * v.y,
            J.dp1_dphi * v.x + J.dp1_dp * v.y};
}

Vec2 apply_inverse_jacobian(const Jacobian2& J, const Vec2& v) {
    double det = J.det();
    return {(J.dp1_dp * v.x - J.dphi1_dp * v.y) / det,
            (-J.dp1_dphi * v.x + J.dphi1_dphi * v.y) / det};
}

struct SegmentEvaluator {
    const Oval& oval;
    double cell;
    QuotientPoint anchor;
    bool unstable;
    int side;
    double seedDistance;
    double logGrowth;  // log of the per-step expansion along the branch
    Vec2 dir;          // unit eigendirection of the branch

    SegmentEvaluator(const Oval& ov, const ManifoldSegment& seg)
        : oval(ov), cell(kTwoPi / ov.order()), anchor(seg.anchor),
          unstable(seg.branch == Branch::Unstable), side(seg.side),
          seedDistance(seg.seedDistance) {
        EigenDirections eig = eigen_directions(ov, seg.anchor.phi, seg.anchor.m);
        double growth = unstable ? eig.lambdaU : 1.0 / eig.lambdaS;
        if (!(growth > 0.0))
            throw InvalidResult("manifold growth requires a positive eigenvalue");
        logGrowth = std::log(growth);
        dir = unstable ? eig.vU : eig.vS;
    }

    ManifoldPoint at(double gamma) const {
        int k = static_cast<int>(std::floor(gamma));
        double t = gamma - k;
        double r = side * seedDistance * std::exp(logGrowth * t);
        QuotientPoint q{wrap_to(anchor.phi + r * dir.x, cell), anchor.p + r * dir.y,
                        anchor.m};
        Vec2 tan = (side > 0 ? dir : Vec2{-dir.x, -dir.y});
        for (int i = 0; i < k; ++i) {
            if (unstable) {
                Jacobian2 J = jacobian_numeric(oval, {q.phi, q.p});
                q = quotient_step(oval, q);
                tan = apply_jacobian(J, tan);
            } else {
                q = quotient_step_inverse(oval, q);
                Jacobian2 J = jacobian_numeric(oval, {q.phi, q.p});
                tan = apply_inverse_jacobian(J, tan);
            }
            tan = tan.normalized();
        }
        ManifoldPoint out;
        out.gamma = gamma;
        out.x = {q.phi, q.p};
        out.tangent = tan.normalized();
        return out;
    }
};

}  // namespace

EigenDirections eigen_directions(const Oval& oval, double phi0, int m) {
    Jacobian2 J = dt_symmetric_fixed_point(oval, phi0, m);
    double tr = J.trace();
    if (std::fabs(tr) <= 2.0 + 1e-12)
        throw NotHyperbolic("fixed point is not hyperbolic: |trace| <= 2");
    double disc = std::sqrt(tr * tr - 4.0);
    double sign = tr > 0 ? 1.0 : -1.0;
    EigenDirections eig;
    eig.lambdaU = (tr + sign * disc) / 2.0;
    eig.lambdaS = (tr - sign * disc) / 2.0;
    // For J = [[a, b], [c, d]] an eigenvector for lambda is (b, lambda - a);
    // flip so the phi-component is positive (b < 0 for billiard steps).
    auto unit_vec = [&](double lambda) {
        Vec2 v{J.dphi1_dp, lambda - J.dphi1_dphi};
        if (v.x < 0) v = {-v.x, -v.y};
        return v.normalized();
    };
    eig.vU = unit_vec(eig.lambdaU);
    eig.vS = unit_vec(eig.lambdaS);
    return eig;
}

ManifoldPoint manifold_point_at(const Oval& oval, const ManifoldSegment& seg,
                                double gamma) {
    return SegmentEvaluator(oval, seg).at(gamma);
}

ManifoldSegment grow_manifold(const Oval& oval, QuotientPoint anchor,
                              Branch branch, int side, double seedDistance,
                              double maxArc, std::size_t maxPoints) {
    if (side != 1 && side != -1)
        throw std::invalid_argument("grow_manifold: side must be +1 or -1");
    if (!(seedDistance > 0.0) || !(maxArc > 0.0) || maxPoints < 8)
        throw std::invalid_argument("grow_manifold: bad seedDistance/maxArc/maxPoints");
    int n = oval.order();
    double cell = kTwoPi / n;
    double pm = std::cos(anchor.m * (kTwoPi / 2.0) / n);
    if (std::fabs(anchor.p - pm) > 1e-9)
        throw std::invalid_argument("grow_manifold: anchor momentum does not match cos(m*pi/n)");

    ManifoldSegment seg;
    seg.anchor = anchor;
    seg.branch = branch;
    seg.side = side;
    seg.seedDistance = seedDistance;
    SegmentEvaluator eval(oval, seg);
    {
        EigenDirections eig = eigen_directions(oval, anchor.phi, anchor.m);
        seg.eigenvalue = (branch == Branch::Unstable) ? eig.lambdaU : eig.lambdaS;
    }

    const double maxEdge = maxArc / 256.0;
    const double maxTurn = 0.1;       // radians between consecutive edges
    const double maxSagitta = 2.5e-7; // chord deviation bound (invariance budget)
    const double minGammaSpan = 1e-7; // refinement floor in parameter space

    std::vector<ManifoldPoint>& pts = seg.points;
    double arc = 0.0;
    bool done = false;
    const int maxDomains = 200;
    for (int k = 0; k < maxDomains && !done; ++k) {
        // Sample the fundamental domain [k, k+1] and refine it until every
        // edge is short and the polyline turns slowly.
        std::vector<ManifoldPoint> dom;
        for (int i = 0; i <= 4; ++i) dom.push_back(eval.at(k + i / 4.0));
        for (;;) {
            if (pts.size() + dom.size() > maxPoints)
                throw RefinementLimit("grow_manifold: maxPoints exhausted before maxArc");
            std::vector<double> inserts;
            auto splittable = [&](std::size_t i) {
                return dom[i + 1].gamma - dom[i].gamma > minGammaSpan;
            };
            for (std::size_t i = 0; i + 1 < dom.size(); ++i) {
                if (cyl_dist(dom[i].x, dom[i + 1].x, cell) > maxEdge && splittable(i))
                    inserts.push_back((dom[i].gamma + dom[i + 1].gamma) / 2.0);
            }
            for (std::size_t i = 1; i + 1 < dom.size(); ++i) {
                Vec2 e1 = edge_vec(dom[i - 1].x, dom[i].x, cell);
                Vec2 e2 = edge_vec(dom[i].x, dom[i + 1].x, cell);
                double turn = std::fabs(std::atan2(cross(e1, e2), dot(e1, e2)));
                double l1 = std::hypot(e1.x, e1.y);
                double l2 = std::hypot(e2.x, e2.y);
                // The sagitta estimate turn*len/8 keeps the chord deviation
                // from the true curve well under the 1e-6 invariance budget.
                if ((turn > maxTurn || turn * l1 / 8.0 > maxSagitta) && splittable(i - 1))
                    inserts.push_back((dom[i - 1].gamma + dom[i].gamma) / 2.0);
                if ((turn > maxTurn || turn * l2 / 8.0 > maxSagitta) && splittable(i))
                    inserts.push_back((dom[i].gamma + dom[i + 1].gamma) / 2.0);
            }
            if (inserts.empty()) break;
            std::sort(inserts.begin(), inserts.end());
            inserts.erase(std::unique(inserts.begin(), inserts.end()), inserts.end());
            if (pts.size() + dom.size() + inserts.size() > maxPoints)
                throw RefinementLimit("grow_manifold: maxPoints exhausted before maxArc");
            for (double g : inserts) dom.push_back(eval.at(g));
            std::sort(dom.begin(), dom.end(),
                      [](const ManifoldPoint& a, const ManifoldPoint& b) {
                          return a.gamma < b.gamma;
                      });
        }
        // Append; the first sample duplicates the previous domain's endpoint.
        for (std::size_t i = (pts.empty() ? 0 : 1); i < dom.size(); ++i) {
            if (!pts.empty()) arc += cyl_dist(pts.back().x, dom[i].x, cell);
            pts.push_back(dom[i]);
            if (arc >= maxArc) {
                done = true;
                break;
            }
        }
        if (!done && pts.size() >= maxPoints)
            throw RefinementLimit("grow_manifold: maxPoints exhausted before maxArc");
    }
    if (!done)
        throw InvalidResult("grow_manifold: arc length failed to accumulate");
    seg.arcLength = arc;
    return seg;
}

std::vector<CrossingReport> find_crossings(const Oval& oval,
                                           const ManifoldSegment& segU,
                                           const ManifoldSegment& segS,
                                           double tangencyTol) {
    if (segU.branch != Branch::Unstable || segS.branch != Branch::Stable)
        throw std::invalid_argument(
            "find_crossings: expects an unstable segment followed by a stable one");
    int n = oval.order();
    double cell = kTwoPi / n;
    SegmentEvaluator evalU(oval, segU);
    SegmentEvaluator evalS(oval, segS);
    const auto& U = segU.points;
    const auto& S = segS.points;

    struct Candidate {
        double gu, gs;
        double norm = 0.0;  // final residual of the refinement
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i + 1 < U.size(); ++i) {
        Vec2 da = edge_vec(U[i].x, U[i + 1].x, cell);
        for (std::size_t j = 0; j + 1 < S.size(); ++j) {
            Vec2 db = edge_vec(S[j].x, S[j + 1].x, cell);
            Vec2 rb{std::remainder(S[j].x.phi - U[i].x.phi, cell),
                    S[j].x.p - U[i].x.p};
            // Quick reject on bounding boxes (relative coordinates).
            double margin = 1e-12;
            if (std::max(0.0, da.x) + margin < rb.x + std::min(0.0, db.x) ||
                rb.x + std::max(0.0, db.x) < std::min(0.0, da.x) - margin)
                continue;
            if (std::max(0.0, da.y) + margin < rb.y + std::min(0.0, db.y) ||
                rb.y + std::max(0.0, db.y) < std::min(0.0, da.y) - margin)
                continue;
            // Solve s*da - u*db = rb for the parametric intersection.
            double det = -da.x * db.y + db.x * da.y;
            double scale = (std::fabs(da.x) + std::fabs(da.y)) *
                           (std::fabs(db.x) + std::fabs(db.y));
            if (std::fabs(det) < 1e-14 * scale) continue;  // parallel edges
            double s = (-rb.x * db.y + db.x * rb.y) / det;
            double u = (da.x * rb.y - da.y * rb.x) / det;
            double tol = 1e-9;
            if (s < -tol || s > 1 + tol || u < -tol || u > 1 + tol) continue;
            cands.push_back({U[i].gamma + s * (U[i + 1].gamma - U[i].gamma),
                             S[j].gamma + u * (S[j + 1].gamma - S[j].gamma)});
        }
    }

    std::vector<CrossingReport> out;
    std::vector<Candidate> refined;
    for (const Candidate& c : cands) {
        // Newton refinement on the parameter pair; the residual is the
        // cylinder displacement between the two manifold points.
        double gu = c.gu, gs = c.gs;
        auto residual = [&](double a, double b) {
            ManifoldPoint Pu = evalU.at(a);
            ManifoldPoint Ps = evalS.at(b);
            return Vec2{std::remainder(Pu.x.phi - Ps.x.phi, cell), Pu.x.p - Ps.x.p};
        };
        Vec2 g0 = residual(gu, gs);
        double bestNorm = std::hypot(g0.x, g0.y);
        double bestGu = gu, bestGs = gs;
        for (int iter = 0; iter < 25 && bestNorm >= 1e-12; ++iter) {
            const double h = 1e-6;
            Vec2 gu1 = residual(gu + h, gs);
            Vec2 gs1 = residual(gu, gs + h);
            Vec2 cu{(gu1.x - g0.x) / h, (gu1.y - g0.y) / h};
            Vec2 cs{(gs1.x - g0.x) / h, (gs1.y - g0.y) / h};
            double det = cu.x * cs.y - cu.y * cs.x;
            if (std::fabs(det) < 1e-8 * std::hypot(cu.x, cu.y) * std::hypot(cs.x, cs.y))
                break;  // ill conditioned (near-tangent): keep best estimate
            double du = (-g0.x * cs.y + cs.x * g0.y) / det;
            double ds = (-cu.x * g0.y + g0.x * cu.y) / det;
            if (!std::isfinite(du) || !std::isfinite(ds)) break;
            bool improved = false;
            for (double step = 1.0; step > 0.05; step /= 2.0) {
                if (std::fabs(step * du) > 0.5 || std::fabs(step * ds) > 0.5)
                    continue;  // never leave the bracketing edges far behind
                Vec2 g1 = residual(gu + step * du, gs + step * ds);
                double n1 = std::hypot(g1.x, g1.y);
                if (n1 < bestNorm) {
                    gu += step * du;
                    gs += step * ds;
                    g0 = g1;
                    bestNorm = n1;
                    bestGu = gu;
                    bestGs = gs;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        refined.push_back({bestGu, bestGs, bestNorm});
    }

    // Keep only candidates that genuinely landed on both curves.  Two ways to
    // qualify.  A residual at true-contact scale (<= 1e-9) means the curves
    // really touch there; this is how tangencies are kept.  Otherwise the
    // refinement stalled, which happens for two very different reasons: far
    // from the anchor the evaluator's floating-point noise is amplified by the
    // cumulative stretch (arc/seedDistance ~ 5e7, so ~5e-9 of fuzz) and stops
    // Newton above 1e-9 even at honest crossings, while near-coincident
    // stretches the polylines crisscross through chord error and stall at the
    // true inter-curve gap.  The two are separated by the crossing angle: an
    // honest crossing keeps a finite angle between the tangents, whereas a
    // stalled near-miss converges to the gap minimum where the curves run
    // parallel (the connecting vector is normal to both), so sin(theta)
    // collapses to ~sqrt(gap).
    std::sort(refined.begin(), refined.end(),
              [](const Candidate& a, const Candidate& b) { return a.gu < b.gu; });
    std::vector<Candidate> unique;
    for (const Candidate& c : refined) {
        if (c.norm > 1e-9) {
            if (c.norm > 1e-6) continue;
            ManifoldPoint du = evalU.at(c.gu);
            ManifoldPoint ds = evalS.at(c.gs);
            double sinTheta = std::fabs(du.tangent.x * ds.tangent.y -
                                        du.tangent.y * ds.tangent.x) /
                              (std::hypot(du.tangent.x, du.tangent.y) *
                               std::hypot(ds.tangent.x, ds.tangent.y));
            if (sinTheta < 1e-2) continue;
        }
        if (!unique.empty() && std::fabs(c.gu - unique.back().gu) < 1e-6 &&
            std::fabs(c.gs - unique.back().gs) < 1e-6)
            continue;
        unique.push_back(c);
    }

    for (const Candidate& c : unique) {
        ManifoldPoint Pu = evalU.at(c.gu);
        ManifoldPoint Ps = evalS.at(c.gs);
        CrossingReport rep;
        double dphi = std::remainder(Pu.x.phi - Ps.x.phi, cell);
        rep.location.phi = wrap_to(Pu.x.phi - dphi / 2.0, cell);
        rep.location.p = (Pu.x.p + Ps.x.p) / 2.0;
        rep.gammaU = c.gu;
        rep.gammaS = c.gs;
        double sinAlpha = std::sqrt(std::max(0.0, 1.0 - rep.location.p * rep.location.p));
        auto alpha_slope = [&](const Vec2& tan) {
            // p = cos(alpha): dp/dphi converts to dalpha/dphi by -1/sin(alpha)
            double dpdphi = tan.y / tan.x;
            return -dpdphi / sinAlpha;
        };
        rep.slopeU = alpha_slope(Pu.tangent);
        rep.slopeS = alpha_slope(Ps.tangent);
        rep.kind = (std::fabs(rep.slopeU - rep.slopeS) < tangencyTol)
                       ? CrossingKind::Tangent
                       : CrossingKind::Transversal;
        double R = oval.embed(rep.location.phi).R;
        rep.dPlus = R * sinAlpha / (1.0 + rep.slopeS);
        rep.dMinus = R * sinAlpha / (1.0 - rep.slopeU);
        out.push_back(rep);
    }

    // A run of tangent-kind crossings contiguous in parameter is one
    // physical contact; keep the best-touching representative.
    std::vector<CrossingReport> merged;
    for (const CrossingReport& rep : out) {
        if (!merged.empty()) {
            CrossingReport& prev = merged.back();
            if (rep.kind == CrossingKind::Tangent &&
                prev.kind == CrossingKind::Tangent &&
                std::fabs(rep.gammaU - prev.gammaU) < 0.05 &&
                std::fabs(rep.gammaS - prev.gammaS) < 0.05) {
                if (std::fabs(rep.slopeU - rep.slopeS) <
                    std::fabs(prev.slopeU - prev.slopeS))
                    prev = rep;
                continue;
            }
        }
        merged.push_back(rep);
    }
    return merged;
}

PerturbedCurve tangency_break(const Oval& oval, const CrossingReport& crossing,
                              double eps, double delta1, double delta2,
                              int horizon) {
    if (crossing.kind != CrossingKind::Tangent)
        throw std::invalid_argument("tangency_break: crossing must be tangent");
    const auto* sf = dynamic_cast<const SupportFunction*>(&oval.curve());
    if (!sf)
        throw std::invalid_argument(
            "tangency_break: base curve must be an unperturbed support function");
    int n = oval.order();
    double cell = kTwoPi / n;
    double phiStar = crossing.location.phi;

    // The bump support must stay clear of the orbit through the tangency
    // (so both manifolds are carried by unperturbed dynamics into the
    // crossing) and of the symmetric points (so the fixed points survive).
    std::vector<double> guarded;
    PhasePoint x = crossing.location;
    for (int j = 0; j < horizon; ++j) {
        x = billiard_step(oval, x).next;
        guarded.push_back(x.phi);
    }
    x = crossing.location;
    for (int j = 0; j < horizon; ++j) {
        x = billiard_inverse(oval, x);
        guarded.push_back(x.phi);
    }
    for (const CriticalPoint& cp : critical_points(oval.curve()))
        guarded.push_back(cp.phi0);
    for (double phi : guarded) {
        if (circ_dist(phi, phiStar, cell) <= delta2)
            throw SupportTooWide(
                "tangency_break: bump support reaches an orbit impact or a symmetric point");
    }
    return perturb_bump(*sf, phiStar, eps, 2, delta1, delta2);
}

}  // namespace billiards
