#ifndef BILLIARDS_SYMMETRIC_ORBITS_HPP
#define BILLIARDS_SYMMETRIC_ORBITS_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "billiards/dynamics.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

enum class Stability { Elliptic, Hyperbolic, Parabolic };

// One rotation class m of the family anchored at a critical angle phi0:
// the orbit visits phi0 + 2km pi/n and closes after ntilde = n/gcd(n,m)
// bounces; there are 2 gcd(n,m) distinct trajectories (rotated copies and
// their reversals).
struct FamilyMember {
    int m = 1;
    int period = 0;      // ntilde = n / gcd(n, m)
    double alpha = 0.0;  // m pi / n
    double p = 0.0;      // cos(alpha)
    int count = 0;       // 2 gcd(n, m)
    double L = 0.0;      // side length at phi0
};

struct OrbitFamily {
    double phi0 = 0.0;
    Stability kind = Stability::Parabolic;
    double gValue = 0.0;
    double RValue = 0.0;
    std::vector<FamilyMember> members;
};

struct StabilityReport {
    double trace = 0.0;
    double det = 0.0;
    std::complex<double> eig1, eig2;   // eig1 carries +sqrt branch
    std::optional<double> zeta;        // rotation angle, elliptic only
};

struct ResonanceFlags {
    bool res3 = false;  // 3 g(phi0) - g''(phi0) = 0  (cube root of unity)
    bool res4 = false;  // g(phi0) - g''(phi0) = 0    (fourth root of unity)
};

struct SideLength {
    double L = 0.0;
    double dLdphi = 0.0;
};

// Result of the rotation-number fit advance(r) = zetaFit + tauFit * r^2.
struct OracleFit {
    double zetaFit = 0.0;
    double tauFit = 0.0;
};

// Vertex angles phi + 2km pi/n (mod 2pi) for k = 0..ntilde-1, in orbit
// order.
std::vector<double> polygon_vertices(const Oval& oval, double phi, int m);

// Chord length of one polygon side, L = 2 sin(m pi/n) sqrt(g^2 + g'^2),
// and its phi-derivative 4 sin^2(m pi/n) g' R / L.  At critical points of
// g the derivative vanishes and L = 2 g(phi0) sin(m pi/n).
SideLength side_length(const Oval& oval, double phi, int m);

// One OrbitFamily per critical point of g in [0, 2pi/n), members fully
// populated for m = 1..n-1.  Every rotational representative is verified
// to close up after ntilde bounces to 1e-8; InvalidResult otherwise.
std::vector<OrbitFamily> find_families(const Oval& oval);

// Linear stability of the (phi0, m) fixed point of the quotient map from
// the closed-form Jacobian, cross-checked against the finite-difference
// Jacobian of the full map (InvalidResult on disagreement).
StabilityReport classify(const Oval& oval, const OrbitFamily& family, int m);

// Resonance flags of the fixed point (independent of m).
ResonanceFlags resonance_check(const Curve& curve, double phi0,
                               double tol = 1e-9);

// First Birkhoff coefficient tau of the elliptic fixed point (phi0, m):
//   tau = -1/(8 R0 s^3)
//         + 3 c^2 / (8 s^2 (2L - R0 s))
//         - (1/8) L/(L - 2 R0 s)^2 (3 + (L - R0 s)/(2L - R0 s)) (dR/ds)^2
//         - L/(8 s (L - 2 R0 s)) d2R/ds2
// with s = sin(m pi/n), c = cos(m pi/n), L = 2 g(phi0) s, R0 = R(phi0)
// and arclength derivatives of R at phi0.  Throws NotCritical,
// NotElliptic (parabolic included), Resonant.
double twist_coefficient(const Oval& oval, double phi0, int m);

// Independent check of twist_coefficient: rings of initial conditions at
// the given chart radii are iterated itersPerRadius times through the
// quotient map; the mean angular advance per iterate, measured in the
// canonical Jordan coordinates of the linearization (rotation-normalized
// and preserving the invariant area ds ^ dp), is fitted against
// zeta + tau r^2.  Throws EscapedNeighborhood if an orbit leaves the
// annulus [0.3 r, 3 r] around the fixed point.
OracleFit rotation_number_oracle(const Oval& oval, double phi0, int m,
                                 const std::vector<double>& radii,
                                 std::size_t itersPerRadius,
                                 int workers = 1);

// Default fitting radii: 8 values linearly spaced in [1e-4, 1e-3].
std::vector<double> default_oracle_radii();

// Solution x of the linear equation A + B x = 0 equivalent to tau = 0
// with x standing for sin^2(m pi/n); nullopt when phi0 is not elliptic
// or the equation degenerates.
std::optional<double> tau_zero_sin2(const Curve& curve, double phi0);

// Integer m in 1..floor(n/2) whose sin^2(m pi/n) matches tau_zero_sin2
// within 1e-9, if any.  At most one such m exists.
std::optional<int> tau_zero_m(const Curve& curve, double phi0);

} // namespace billiards

#endif
