#ifndef BILLIARDS_HYPERBOLIC_HPP
#define BILLIARDS_HYPERBOLIC_HPP

#include <cstddef>
#include <vector>

#include "billiards/dynamics.hpp"
#include "billiards/geometry.hpp"
#include "billiards/vec2.hpp"

namespace billiards {

enum class Branch { Unstable, Stable };

// Eigenpairs of the closed-form Jacobian at a hyperbolic symmetric fixed
// point.  lambdaU * lambdaS = 1 (unit determinant); vectors are unit
// (dphi, dp) directions normalized to positive first component.
struct EigenDirections {
    double lambdaU = 0.0;
    Vec2 vU;
    double lambdaS = 0.0;
    Vec2 vS;
};

struct ManifoldPoint {
    double gamma = 0.0;  // k + t: t in [0,1) on the fundamental segment,
                         // k = number of map applications
    PhasePoint x;        // quotient cylinder coordinates
    Vec2 tangent;        // unit tangent in (phi, p), oriented along gamma
};

struct ManifoldSegment {
    QuotientPoint anchor;
    Branch branch = Branch::Unstable;
    int side = +1;              // +1 / -1 along the eigendirection
    double eigenvalue = 0.0;    // lambdaU (unstable) or lambdaS (stable)
    double seedDistance = 0.0;  // offset of the gamma = 0 point
    std::vector<ManifoldPoint> points;
    double arcLength = 0.0;
};

// Re-evaluates the manifold point at parameter gamma from the segment's
// seed data (used internally by crossing refinement; exposed for tests).
ManifoldPoint manifold_point_at(const Oval& oval, const ManifoldSegment& seg,
                                double gamma);

enum class CrossingKind { Transversal, Tangent };

// Intersection of an unstable and a stable segment.  Slopes are
// d(alpha)/d(phi) of the two manifolds at the crossing (converted from
// (phi, p) via d(alpha) = -dp / sin(alpha)); the focusing distances are
//   dPlus  = R sin(alpha) / (1 + slopeS)   (forward, stable side)
//   dMinus = R sin(alpha) / (1 - slopeU)   (backward, unstable side)
// and coincide with the common-slope pencil formulas at a tangency.
struct CrossingReport {
    PhasePoint location;
    CrossingKind kind = CrossingKind::Transversal;
    double slopeU = 0.0;
    double slopeS = 0.0;
    double dPlus = 0.0;
    double dMinus = 0.0;
    double gammaU = 0.0;  // parameter on the unstable segment
    double gammaS = 0.0;  // parameter on the stable segment
};

// Eigenvalues and eigendirections at the (phi0, m) fixed point; throws
// NotHyperbolic when |trace| <= 2.
EigenDirections eigen_directions(const Oval& oval, double phi0, int m);

// Grows one branch of W^u (forward map) or W^s (inverse map) of the
// quotient map from the hyperbolic anchor: the fundamental segment
// between anchor + side*seedDistance*v and its image is sampled and
// iterated, inserting parameter midpoints until consecutive points are
// closer than maxArc/256 and turn angles stay below 0.1 rad.  Stops at
// total arclength maxArc; throws RefinementLimit if maxPoints is
// exhausted first.  Tangents are transported with per-step Jacobians.
ManifoldSegment grow_manifold(const Oval& oval, QuotientPoint anchor,
                              Branch branch, int side,
                              double seedDistance = 1e-7, double maxArc = 5.0,
                              std::size_t maxPoints = 20000);

// All intersections between an unstable and a stable segment in the
// quotient cylinder: polyline edge pairs are intersected (handling the
// seam shift), refined by a 2-variable Newton iteration on the segment
// parameters, deduplicated, and classified by the slope difference
// against tangencyTol.  Ordered by gammaU.
std::vector<CrossingReport> find_crossings(const Oval& oval,
                                           const ManifoldSegment& segU,
                                           const ManifoldSegment& segS,
                                           double tangencyTol = 1e-4);

// Power-2 bump of size eps at the crossing angle, the transversality
// restorer for a tangent crossing: shifts R there by 2*eps and splits
// the two slopes by 4*eps/R to first order while keeping both manifolds
// (their finite computed orbits avoid the support).  Verifies support
// disjointness from the crossing's orbit out to +-horizon bounces and
// from all critical points of g; throws SupportTooWide on conflict.
PerturbedCurve tangency_break(const Oval& oval, const CrossingReport& crossing,
                              double eps, double delta1, double delta2,
                              int horizon = 50);

} // namespace billiards

#endif
