#include "billiards/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "billiards/roots.hpp"

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_not_grazing(double p) {
    if (std::fabs(p) >= 1.0 - kGrazingTol)
        throw GrazingOrbit("|p| = " + std::to_string(std::fabs(p)) +
                           " is inside the grazing cutoff");
}

} // namespace

StepResult billiard_step(const Oval& oval, PhasePoint x) {
    require_not_grazing(x.p);
    double phi = wrap_angle(x.phi);
    double alpha = std::acos(x.p);
    double sinA = std::sin(alpha);

    Oval::EmbedResult here = oval.embed(phi);
    Vec2 v = x.p * here.tangent + sinA * here.normal; // unit ray direction

    // f(psi) = cross(v, Gamma(psi) - Gamma(phi)) has exactly one root in
    // (phi, phi + 2pi) by strict convexity: negative before the impact,
    // positive after.
    auto f = [&](double psi) {
        return cross(v, oval.embed(psi).point - here.point);
    };

    // Clear the trivial root at psi = phi on both ends.  The nontrivial
    // root sits ~2*alpha past phi (and ~2*(pi-alpha) before phi + 2pi), so
    // scale the clearance down when the ray is nearly tangent.
    double lo = phi + std::fmin(1e-7, alpha / 100.0);
    double hi = phi + kTwoPi - std::fmin(1e-7, (std::numbers::pi - alpha) / 100.0);

    const int coarse = 64;
    double a = lo, fa = f(lo);
    double b = hi, fb = fa;
    int signChanges = 0;
    double prevX = lo, prevF = fa;
    for (int i = 1; i <= coarse; ++i) {
        double xi = lo + (hi - lo) * i / coarse;
        double fi = f(xi);
        if ((prevF <= 0.0) != (fi <= 0.0)) {
            if (++signChanges == 1) {
                a = prevX;
                fa = prevF;
                b = xi;
                fb = fi;
            }
        }
        prevX = xi;
        prevF = fi;
    }
    if (signChanges != 1)
        throw RootNotBracketed(
            "chord scan found " + std::to_string(signChanges) +
            " sign changes (expected exactly 1) at phi = " +
            std::to_string(phi) + ", p = " + std::to_string(x.p));

    double psi = brent_root(f, a, b, fa, fb, 1e-13);

    Oval::EmbedResult there = oval.embed(psi);
    StepResult out;
    out.next.phi = wrap_angle(psi);
    out.next.p = dot(v, there.tangent);
    out.chordLength = (there.point - here.point).norm();
    return out;
}

PhasePoint billiard_inverse(const Oval& oval, PhasePoint x) {
    PhasePoint flipped{x.phi, -x.p};
    PhasePoint y = billiard_step(oval, flipped).next;
    return {y.phi, -y.p};
}

std::vector<PhasePoint> iterate(const Oval& oval, PhasePoint x0,
                                std::size_t steps) {
    std::vector<PhasePoint> orbit;
    orbit.reserve(steps + 1);
    orbit.push_back(x0);
    for (std::size_t i = 0; i < steps; ++i) {
        try {
            orbit.push_back(billiard_step(oval, orbit.back()).next);
        } catch (const BilliardError& e) {
            throw IterationError(i, e.what());
        }
    }
    return orbit;
}

namespace {

void require_valid_m(int m, int n) {
    if (m < 1 || m > n - 1)
        throw std::invalid_argument("quotient index m = " + std::to_string(m) +
                                    " must lie in [1, n-1] for n = " +
                                    std::to_string(n));
}

} // namespace

QuotientPoint quotient_step(const Oval& oval, QuotientPoint q) {
    require_valid_m(q.m, oval.order());
    double period = kTwoPi / oval.order();
    PhasePoint next = billiard_step(oval, {q.phi, q.p}).next;
    return {wrap_to(next.phi, period), next.p, q.m};
}

QuotientPoint quotient_step_inverse(const Oval& oval, QuotientPoint q) {
    require_valid_m(q.m, oval.order());
    double period = kTwoPi / oval.order();
    PhasePoint prev = billiard_inverse(oval, {q.phi, q.p});
    return {wrap_to(prev.phi, period), prev.p, q.m};
}

namespace {

// Central difference of the step map, unwrapping the phi difference.
Jacobian2 central_jacobian(const Oval& oval, PhasePoint x, double h) {
    PhasePoint fp = billiard_step(oval, {x.phi + h, x.p}).next;
    PhasePoint fm = billiard_step(oval, {x.phi - h, x.p}).next;
    PhasePoint gp = billiard_step(oval, {x.phi, x.p + h}).next;
    PhasePoint gm = billiard_step(oval, {x.phi, x.p - h}).next;
    Jacobian2 j;
    j.dphi1_dphi = angle_diff(fp.phi, fm.phi) / (2 * h);
    j.dp1_dphi = (fp.p - fm.p) / (2 * h);
    j.dphi1_dp = angle_diff(gp.phi, gm.phi) / (2 * h);
    j.dp1_dp = (gp.p - gm.p) / (2 * h);
    return j;
}

} // namespace

Jacobian2 jacobian_numeric(const Oval& oval, PhasePoint x, double h) {
    require_not_grazing(x.p);
    if (std::fabs(x.p) + h >= 1.0 - kGrazingTol)
        throw GrazingOrbit("finite-difference stencil would cross the "
                           "grazing cutoff");
    // Richardson extrapolation of the central difference: (4 J_{h/2} - J_h)/3.
    Jacobian2 jh = central_jacobian(oval, x, h);
    Jacobian2 jh2 = central_jacobian(oval, x, h / 2);
    Jacobian2 j;
    j.dphi1_dphi = (4 * jh2.dphi1_dphi - jh.dphi1_dphi) / 3;
    j.dphi1_dp = (4 * jh2.dphi1_dp - jh.dphi1_dp) / 3;
    j.dp1_dphi = (4 * jh2.dp1_dphi - jh.dp1_dphi) / 3;
    j.dp1_dp = (4 * jh2.dp1_dp - jh.dp1_dp) / 3;
    return j;
}

Jacobian2 dt_symmetric_fixed_point(const Oval& oval, double phi0, int m,
                                   double critTol) {
    int n = oval.order();
    require_valid_m(m, n);
    SupportValues v = oval.curve().eval(phi0);
    if (std::fabs(v.dg) > critTol)
        throw NotCritical("g'(phi0) = " + std::to_string(v.dg) +
                          " exceeds the critical tolerance");
    double s = std::sin(m * std::numbers::pi / n);
    double R0 = v.g + v.d2g;
    double L = 2.0 * v.g * s;
    Jacobian2 j;
    j.dphi1_dphi = (L - R0 * s) / (R0 * s);
    j.dphi1_dp = -L / (R0 * s * s);
    j.dp1_dphi = -(L - 2.0 * R0 * s) / R0;
    j.dp1_dp = j.dphi1_dphi;
    return j;
}

Jacobian2 to_arclength_frame(const Oval& oval, PhasePoint x0, PhasePoint x1,
                             const Jacobian2& j) {
    double r0 = oval.embed(x0.phi).R;
    double r1 = oval.embed(x1.phi).R;
    Jacobian2 out;
    out.dphi1_dphi = j.dphi1_dphi * r1 / r0;
    out.dphi1_dp = j.dphi1_dp * r1;
    out.dp1_dphi = j.dp1_dphi / r0;
    out.dp1_dp = j.dp1_dp;
    return out;
}

RadiusDerivs radius_arclength_derivs(const Curve& curve, double phi) {
    SupportValues v = curve.eval(phi);
    double r = v.g + v.d2g;
    double rp = v.dg + v.d3g;   // dR/dphi
    double rpp = v.d2g + v.d4g; // d^2R/dphi^2
    RadiusDerivs out;
    out.dRds = rp / r;
    out.d2Rds2 = rpp / (r * r) - rp * rp / (r * r * r);
    return out;
}

} // namespace billiards
