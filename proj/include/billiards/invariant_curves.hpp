#ifndef BILLIARDS_INVARIANT_CURVES_HPP
#define BILLIARDS_INVARIANT_CURVES_HPP

#include <vector>

#include "billiards/dynamics.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

// Gutkin family verification record.  alpha0 holds every root of
// tan(n a) = n tan(a) in (0, pi/2], ascending (pi/2 appears exactly, and
// only for odd n); p0 holds the matching cos values.  maxDeviation is the
// measured sup |p - p0| along iterated orbits seeded on the invariant
// curve of the first root (the interior one whenever n >= 4).
struct GutkinResult {
    int n = 0;
    double a1 = 0.0;
    std::vector<double> alpha0;
    std::vector<double> p0;
    double maxDeviation = 0.0;
};

// Constant-width verdict.  width is the midpoint of the sampled band of
// w(phi) = g(phi) + g(phi + pi); isConstantWidth means the band is tighter
// than 1e-10.  p0Deviation is the measured invariance defect of the p = 0
// curve when constant width holds, and NaN otherwise.
struct ConstantWidthReport {
    bool isConstantWidth = false;
    double width = 0.0;
    double p0Deviation = 0.0;
};

// Support function of the Gutkin oval with curvature radius
// R(phi) = 1 + a1 cos(n phi), i.e. g = 1 + a1 cos(n phi)/(1 - n^2).
// Requires |a1| < 1 (InvalidAmplitude otherwise).  Orders 2 and 3 are
// accepted but warn on stderr: the invariant-curve statement is made for
// n >= 4 (n = 2 has no nonzero root and n = 3 only pi/2).
SupportFunction gutkin_oval(int n, double a1);

// All roots of tan(n a) = n tan(a) in (0, pi/2], ascending.  Works on the
// pole-free residual h(a) = sin(n a)cos(a) - n cos(n a)sin(a), bracketing
// its sign changes over 1e4 subintervals; pi/2 is appended exactly for
// odd n (h only touches zero there, so no bracket exists).
std::vector<double> gutkin_alpha(int n);

// Sup of |p - p0| over `seeds` equispaced starts iterated `iters` bounces
// at initial momentum p0.  Requires |p0| < 1 - 1e-9.  Seeds iterate
// independently; the reduction is a per-seed max table so the result is
// identical for every worker count.
double check_horizontal_invariance(const Oval& oval, double p0, int seeds,
                                   int iters, int workers = 1);

// Samples the width w(phi) = g(phi) + g(phi + pi).  When the width is
// constant the p = 0 midline must be invariant: the report carries its
// measured deviation, and the two-bounce property T(phi, 0) = (phi+pi, 0)
// is checked to 1e-8 (InvalidResult on failure, since constant width
// forces it).
ConstantWidthReport constant_width_check(const Oval& oval);

// Builds gutkin_oval(n, a1), finds the roots, and measures the invariance
// deviation at the first root's momentum level.
GutkinResult gutkin_verify(int n, double a1, int seeds = 10,
                           int iters = 10000);

} // namespace billiards

#endif
