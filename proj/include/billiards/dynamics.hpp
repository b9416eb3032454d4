#ifndef BILLIARDS_DYNAMICS_HPP
#define BILLIARDS_DYNAMICS_HPP

#include <cstddef>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

// Point on the phase cylinder: phi mod 2pi, p = cos(alpha) in (-1, 1)
// where alpha is the outgoing angle from the tangent.
struct PhasePoint {
    double phi = 0.0;
    double p = 0.0;
};

// Point of the m-quotient cylinder: phi reduced mod 2pi/n.
struct QuotientPoint {
    double phi = 0.0;
    double p = 0.0;
    int m = 1;
};

struct Jacobian2 {
    double dphi1_dphi = 0.0;
    double dphi1_dp = 0.0;
    double dp1_dphi = 0.0;
    double dp1_dp = 0.0;

    double trace() const { return dphi1_dphi + dp1_dp; }
    double det() const {
        return dphi1_dphi * dp1_dp - dphi1_dp * dp1_dphi;
    }
};

struct StepResult {
    PhasePoint next;
    double chordLength = 0.0;
};

// Grazing cutoff: inputs with |p| >= 1 - kGrazingTol are rejected.
inline constexpr double kGrazingTol = 1e-12;

// One bounce: follows the ray leaving Gamma(phi) at angle alpha from the
// tangent to its unique next intersection with the boundary and applies
// the reflection law p1 = <v, tangent(psi)>.
StepResult billiard_step(const Oval& oval, PhasePoint x);

// T^{-1} = I o T o I with I(phi, p) = (phi, -p).
PhasePoint billiard_inverse(const Oval& oval, PhasePoint x);

// steps+1 points starting at x0; step failures are rethrown as
// IterationError carrying the failing index.
std::vector<PhasePoint> iterate(const Oval& oval, PhasePoint x0,
                                std::size_t steps);

// One step of the m-quotient map: full step, then phi reduced mod 2pi/n.
QuotientPoint quotient_step(const Oval& oval, QuotientPoint q);
QuotientPoint quotient_step_inverse(const Oval& oval, QuotientPoint q);

// Central-difference Jacobian of billiard_step in (phi, p), Richardson
// refined (h and h/2).  Oracle for the closed form below.
Jacobian2 jacobian_numeric(const Oval& oval, PhasePoint x, double h = 1e-6);

// Closed-form Jacobian of the quotient map at a symmetric fixed point
// (phi0 critical, p = cos(m pi / n)):
//   [ (L - R0 s)/(R0 s)      -L/(R0 s^2)      ]
//   [ -(L - 2 R0 s)/R0       (L - R0 s)/(R0 s)]
// with s = sin(m pi/n), L = 2 g(phi0) s; det = 1,
// trace = 2L/(R0 s) - 2.  Throws NotCritical if |g'(phi0)| > critTol.
Jacobian2 dt_symmetric_fixed_point(const Oval& oval, double phi0, int m,
                                   double critTol = 1e-9);

// Conversion of a (phi, p) Jacobian at x0 -> x1 into arclength-tangential
// coordinates (s, p): ds = R dphi at each endpoint.  The (s, p) form has
// determinant exactly 1 for the billiard map.
Jacobian2 to_arclength_frame(const Oval& oval, PhasePoint x0, PhasePoint x1,
                             const Jacobian2& j);

// Arclength derivatives of the curvature radius, via the chain rule
// dR/ds = R'_phi / R and d^2R/ds^2 = R''_phi / R^2 - (R'_phi)^2 / R^3.
struct RadiusDerivs {
    double dRds = 0.0;
    double d2Rds2 = 0.0;
};
RadiusDerivs radius_arclength_derivs(const Curve& curve, double phi);

} // namespace billiards

#endif
