#ifndef BILLIARDS_GEOMETRY_HPP
#define BILLIARDS_GEOMETRY_HPP

#include <memory>
#include <optional>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/vec2.hpp"

namespace billiards {

// g and its first four derivatives at one tangent angle.  The third and
// fourth derivatives feed the arclength chain rule used by the twist
// coefficient.
struct SupportValues {
    double g = 0.0;
    double dg = 0.0;
    double d2g = 0.0;
    double d3g = 0.0;
    double d4g = 0.0;
};

// Common evaluation interface for every curve representation.  All
// downstream operations (dynamics, orbit analysis, ...) accept a Curve so
// that bumped curves flow through the same code paths as plain series.
class Curve {
public:
    virtual ~Curve() = default;

    // Exact evaluation of g, g', g'', g''', g'''' at phi (taken mod 2pi).
    virtual SupportValues eval(double phi) const = 0;

    // Rotational symmetry order n (>= 2): g(phi + 2pi/n) = g(phi).
    virtual int order() const = 0;

    // Bandwidth hint controlling default validation sample density.
    virtual int maxHarmonic() const = 0;

    // True when g' vanishes identically (critical points not isolated).
    virtual bool isCircle() const = 0;

    virtual std::shared_ptr<const Curve> clone() const = 0;
};

// One stored Fourier term: k must be a positive multiple of the symmetry
// order.
struct Harmonic {
    int k = 0;
    double cosAmp = 0.0;
    double sinAmp = 0.0;
};

// Finite cosine/sine series a0 + sum_k (a_k cos k phi + b_k sin k phi)
// restricted to harmonics divisible by n, which enforces the rotational
// symmetry structurally.
class SupportFunction : public Curve {
public:
    // Throws std::invalid_argument for n < 2, a0 <= 0, k <= 0, or k not a
    // multiple of n.  Positivity/convexity of the resulting curve is the
    // job of validate(), not the constructor.
    SupportFunction(int n, double a0, std::vector<Harmonic> harmonics);

    SupportValues eval(double phi) const override;
    int order() const override { return n_; }
    int maxHarmonic() const override;
    bool isCircle() const override;
    std::shared_ptr<const Curve> clone() const override;

    double a0() const { return a0_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }

private:
    int n_;
    double a0_;
    std::vector<Harmonic> harmonics_;
};

// Localized non-polynomial perturbation added to a series:
//   g_eps(phi) = g(phi) + eps * y^power * rho(y),  y = phi - center,
// replicated with period 2pi/n to preserve the symmetry.  rho is a smooth
// even plateau bump: 1 on [-delta1, delta1], 0 outside [-delta2, delta2],
// monotone in between (exp(-1/x) smooth-step construction).
struct BumpSpec {
    double center = 0.0;
    double eps = 0.0;
    int power = 4; // 2 or 4
    double delta1 = 0.0;
    double delta2 = 0.0;
};

class PerturbedCurve : public Curve {
public:
    PerturbedCurve(SupportFunction base, BumpSpec bump);

    SupportValues eval(double phi) const override;
    int order() const override { return base_.order(); }
    int maxHarmonic() const override;
    bool isCircle() const override;
    std::shared_ptr<const Curve> clone() const override;

    const SupportFunction& base() const { return base_; }
    const BumpSpec& bump() const { return bump_; }

private:
    SupportFunction base_;
    BumpSpec bump_;
};

enum class CritKind { Minimum, Maximum, Degenerate };

struct CriticalPoint {
    double phi0 = 0.0; // representative in [0, 2pi/n)
    CritKind kind = CritKind::Degenerate;
    double gValue = 0.0;
    double gSecond = 0.0;
};

struct ValidationReport {
    bool pass = false;
    double minG = 0.0;
    double minR = 0.0;
    double phiMinG = 0.0;
    double phiMinR = 0.0;
    int samples = 0;
};

// Derived geometric evaluator over a Curve, with a cached arclength table.
// Construction validates membership in the admissible class (g > 0 and
// R = g + g'' > 0 everywhere) and throws InvalidResult otherwise.
class Oval {
public:
    explicit Oval(std::shared_ptr<const Curve> curve);
    explicit Oval(const SupportFunction& sf);
    explicit Oval(const PerturbedCurve& pc);

    const Curve& curve() const { return *curve_; }
    std::shared_ptr<const Curve> curvePtr() const { return curve_; }
    int order() const { return curve_->order(); }

    // Boundary point with unit tangent (cos phi, sin phi), inward unit
    // normal (-sin phi, cos phi), and curvature radius R = g + g''.
    struct EmbedResult {
        Vec2 point;
        Vec2 tangent;
        Vec2 normal;
        double R = 0.0;
    };
    EmbedResult embed(double phi) const;

    // Arclength s(phi) with s(0) = 0 and ds = R dphi; monotone over all of
    // R, with s(phi + 2pi) = s(phi) + totalLength().
    double arclength(double phi) const;
    double phiOfS(double s) const;
    double totalLength() const { return total_; }

private:
    std::shared_ptr<const Curve> curve_;
    std::vector<double> knotPhi_;  // uniform grid over [0, 2pi]
    std::vector<double> knotS_;    // cumulative arclength at the knots
    std::vector<double> knotInvSlope_; // dphi/ds = 1/R at the knots
    double total_ = 0.0;
};

SupportValues eval_support(const Curve& curve, double phi);

// Dense sampling (default 1024 * maxHarmonic points, at least 4096) plus
// Newton polish of the local minima of g and R, to tolerance 1e-12.
ValidationReport validate(const Curve& curve, int samples = 0);

// All roots of g' in [0, 2pi/n), classified by the sign of g''
// (|g''| <= degenerateTol counts as degenerate).  Grid of 4096 samples,
// sign-change brackets bisected to rootTol.  Throws DegenerateCircle when
// g' vanishes identically.
std::vector<CriticalPoint> critical_points(const Curve& curve,
                                           double rootTol = 1e-13,
                                           double degenerateTol = 1e-9);

// g -> g + eps.  Critical points and all derivatives are unchanged;
// throws InvalidResult if the result leaves the admissible class.
SupportFunction perturb_constant(const SupportFunction& sf, double eps);

// g -> g + eps * (phi-center)^power * rho(phi-center), replicated with
// period 2pi/n.  power 4 leaves g..g''' unchanged at the center and shifts
// g'''' by exactly 24 eps; power 2 leaves g, g' unchanged and shifts g''
// (hence R) by exactly 2 eps.  Throws SupportTooWide when the support is
// malformed, wraps past the fundamental domain, or (power 4) contains a
// critical point other than the center / (power 2) contains any critical
// point.
PerturbedCurve perturb_bump(const SupportFunction& sf, double center,
                            double eps, int power, double delta1,
                            double delta2);

// Angle helpers shared across modules.
double wrap_angle(double phi);                 // into [0, 2pi)
double wrap_to(double phi, double period);     // into [0, period)
double angle_diff(double a, double b);         // shortest signed a-b mod 2pi
double circ_dist(double a, double b, double period);

} // namespace billiards

#endif
