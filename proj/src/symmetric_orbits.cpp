#include "billiards/symmetric_orbits.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "billiards/parallel.hpp"

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_valid_m(int m, int n) {
    if (m < 1 || m > n - 1)
        throw std::invalid_argument("rotation class m = " + std::to_string(m) +
                                    " must lie in [1, n-1] for n = " +
                                    std::to_string(n));
}

} // namespace

std::vector<double> polygon_vertices(const Oval& oval, double phi, int m) {
    int n = oval.order();
    require_valid_m(m, n);
    int ntilde = n / std::gcd(n, m);
    std::vector<double> out;
    out.reserve(ntilde);
    for (int k = 0; k < ntilde; ++k)
        out.push_back(wrap_angle(phi + kTwoPi * k * m / n));
    return out;
}

SideLength side_length(const Oval& oval, double phi, int m) {
    int n = oval.order();
    require_valid_m(m, n);
    SupportValues v = oval.curve().eval(phi);
    double s = std::sin(m * std::numbers::pi / n);
    SideLength out;
    out.L = 2.0 * s * std::sqrt(v.g * v.g + v.dg * v.dg);
    out.dLdphi = 4.0 * s * s * v.dg * (v.g + v.d2g) / out.L;
    return out;
}

std::vector<OrbitFamily> find_families(const Oval& oval) {
    int n = oval.order();
    std::vector<OrbitFamily> out;
    for (const CriticalPoint& cp : critical_points(oval.curve())) {
        // Polish the critical angle to machine precision with Newton on
        // g': closure errors below are amplified by the orbit's linear
        // stretching, so every digit of phi0 matters at hyperbolic
        // families.
        double phi0 = cp.phi0;
        for (int it = 0; it < 4; ++it) {
            SupportValues v = oval.curve().eval(phi0);
            if (v.d2g == 0.0) break;
            double step = v.dg / v.d2g;
            phi0 -= step;
            if (std::fabs(step) < 1e-14) break;
        }

        OrbitFamily fam;
        fam.phi0 = wrap_angle(phi0);
        SupportValues v0 = oval.curve().eval(fam.phi0);
        fam.gValue = v0.g;
        fam.RValue = v0.g + v0.d2g;
        switch (cp.kind) {
        case CritKind::Minimum: fam.kind = Stability::Elliptic; break;
        case CritKind::Maximum: fam.kind = Stability::Hyperbolic; break;
        case CritKind::Degenerate: fam.kind = Stability::Parabolic; break;
        }
        for (int m = 1; m < n; ++m) {
            int g = std::gcd(n, m);
            FamilyMember mem;
            mem.m = m;
            mem.period = n / g;
            mem.alpha = m * std::numbers::pi / n;
            mem.p = std::cos(mem.alpha);
            mem.count = 2 * g;
            mem.L = side_length(oval, fam.phi0, m).L;
            // Each rotational representative must close up after ntilde
            // bounces.  The certificate is conditioned by the orbit's
            // amplification |lambda|^ntilde: once that exceeds what
            // double precision can resolve, the absolute 1e-8 bound is
            // relaxed proportionally instead of rejecting a perfectly
            // admissible oval.
            double s = std::sin(mem.alpha);
            double tr = 2.0 * mem.L / (fam.RValue * s) - 2.0;
            double lam =
                std::fabs(tr) <= 2.0
                    ? 1.0
                    : (std::fabs(tr) + std::sqrt(tr * tr - 4.0)) / 2.0;
            double tol = 1e-8 + std::pow(lam, mem.period) * 1e-14;
            for (int k = 0; k < g; ++k) {
                PhasePoint start{wrap_angle(fam.phi0 + kTwoPi * k / n), mem.p};
                PhasePoint x = start;
                for (int t = 0; t < mem.period; ++t)
                    x = billiard_step(oval, x).next;
                if (circ_dist(x.phi, start.phi, kTwoPi) > tol ||
                    std::fabs(x.p - start.p) > tol)
                    throw InvalidResult(
                        "orbit at phi0 = " + std::to_string(fam.phi0) +
                        ", m = " + std::to_string(m) + ", copy " +
                        std::to_string(k) + " fails to close after " +
                        std::to_string(mem.period) + " bounces");
            }
            fam.members.push_back(mem);
        }
        out.push_back(fam);
    }
    return out;
}

StabilityReport classify(const Oval& oval, const OrbitFamily& family, int m) {
    int n = oval.order();
    require_valid_m(m, n);
    Jacobian2 jc = dt_symmetric_fixed_point(oval, family.phi0, m);
    StabilityReport rep;
    rep.trace = jc.trace();
    rep.det = jc.det();
    double half = rep.trace / 2.0;
    if (std::fabs(half) < 1.0) {
        double w = std::sqrt(1.0 - half * half);
        rep.eig1 = {half, w};
        rep.eig2 = {half, -w};
        rep.zeta = std::acos(half);
    } else {
        double w = std::sqrt(half * half - 1.0);
        rep.eig1 = {half + w, 0.0};
        rep.eig2 = {half - w, 0.0};
    }
    // Independent finite-difference check of the closed form.
    double pm = std::cos(m * std::numbers::pi / n);
    if (std::fabs(pm) < 1.0 - 1e-6) {
        Jacobian2 jn = jacobian_numeric(oval, {family.phi0, pm});
        double tol = 1e-3 * std::fmax(1.0, std::fabs(rep.trace));
        if (std::fabs(jn.trace() - rep.trace) > tol)
            throw InvalidResult(
                "closed-form trace " + std::to_string(rep.trace) +
                " disagrees with finite differences " +
                std::to_string(jn.trace()) + " at phi0 = " +
                std::to_string(family.phi0) + ", m = " + std::to_string(m));
    }
    return rep;
}

ResonanceFlags resonance_check(const Curve& curve, double phi0, double tol) {
    SupportValues v = curve.eval(phi0);
    ResonanceFlags f;
    f.res3 = std::fabs(3.0 * v.g - v.d2g) < tol;
    f.res4 = std::fabs(v.g - v.d2g) < tol;
    return f;
}

double twist_coefficient(const Oval& oval, double phi0, int m) {
    int n = oval.order();
    require_valid_m(m, n);
    SupportValues v = oval.curve().eval(phi0);
    if (std::fabs(v.dg) > 1e-9)
        throw NotCritical("g'(phi0) = " + std::to_string(v.dg) +
                          " at phi0 = " + std::to_string(phi0));
    double g0 = v.g;
    double R0 = v.g + v.d2g;
    if (!(g0 < R0 - 1e-9))
        throw NotElliptic("g(phi0) = " + std::to_string(g0) +
                          " is not below R(phi0) = " + std::to_string(R0));
    ResonanceFlags rf = resonance_check(oval.curve(), phi0);
    if (rf.res3 || rf.res4)
        throw Resonant(std::string("fixed point is resonant (") +
                       (rf.res3 ? "cube" : "fourth") + " root of unity)");

    double s = std::sin(m * std::numbers::pi / n);
    double c = std::cos(m * std::numbers::pi / n);
    double L = 2.0 * g0 * s;
    RadiusDerivs rd = radius_arclength_derivs(oval.curve(), phi0);

    double t1 = -1.0 / (8.0 * R0 * s * s * s);
    double t2 = 3.0 * c * c / (8.0 * s * s * (2.0 * L - R0 * s));
    double d = L - 2.0 * R0 * s;
    double t3 = -(L / (8.0 * d * d)) *
                (3.0 + (L - R0 * s) / (2.0 * L - R0 * s)) * rd.dRds * rd.dRds;
    double t4 = -(L / (8.0 * s * d)) * rd.d2Rds2;
    return t1 + t2 + t3 + t4;
}

OracleFit rotation_number_oracle(const Oval& oval, double phi0, int m,
                                 const std::vector<double>& radii,
                                 std::size_t itersPerRadius, int workers) {
    if (radii.size() < 2)
        throw std::invalid_argument(
            "rotation-number fit needs at least two radii");
    int n = oval.order();
    Jacobian2 j = dt_symmetric_fixed_point(oval, phi0, m);
    double half = j.trace() / 2.0;
    if (std::fabs(half) >= 1.0)
        throw NotElliptic("fixed point has |trace| >= 2");
    double zeta = std::acos(half);
    // Canonical Jordan chart: x = sqrt(R0/beta) dphi, y = sqrt(R0 beta) dp
    // turns the linearization into the rotation by +zeta while keeping
    // dx ^ dy = R0 dphi ^ dp = ds ^ dp, the invariant area at the fixed
    // point.  Only in such a chart is the r^2 coefficient of the angular
    // advance the Birkhoff coefficient itself (a chart rescale by kappa
    // would multiply it by kappa^2).
    double beta = std::sqrt(-j.dphi1_dp / j.dp1_dphi);
    double R0 = oval.embed(phi0).R;
    double cx = std::sqrt(R0 / beta);
    double cy = std::sqrt(R0 * beta);
    double cell = kTwoPi / n;
    double pm = std::cos(m * std::numbers::pi / n);
    const int ringSeeds = 16;

    std::vector<double> advance(radii.size(), 0.0);
    std::vector<std::exception_ptr> errors(radii.size());
    parallel_for(radii.size(), workers, [&](std::size_t ri) {
        try {
            double r = radii[ri];
            double ringSum = 0.0;
            for (int seed = 0; seed < ringSeeds; ++seed) {
                double theta0 = kTwoPi * seed / ringSeeds;
                double x = r * std::cos(theta0);
                double y = r * std::sin(theta0);
                QuotientPoint q{wrap_to(phi0 + x / cx, cell), pm + y / cy, m};
                double prev = theta0;
                double total = 0.0;
                for (std::size_t t = 0; t < itersPerRadius; ++t) {
                    q = quotient_step(oval, q);
                    double dx = std::remainder(q.phi - phi0, cell) * cx;
                    double dy = (q.p - pm) * cy;
                    double rad = std::hypot(dx, dy);
                    if (rad < 0.3 * r || rad > 3.0 * r)
                        throw EscapedNeighborhood(
                            "orbit at radius " + std::to_string(r) +
                            " drifted to " + std::to_string(rad) +
                            " after " + std::to_string(t + 1) + " iterates");
                    double theta = std::atan2(dy, dx);
                    // Unwrap assuming the advance stays within pi of zeta.
                    total += std::remainder(theta - prev - zeta, kTwoPi) + zeta;
                    prev = theta;
                }
                ringSum += total / static_cast<double>(itersPerRadius);
            }
            advance[ri] = ringSum / ringSeeds;
        } catch (...) {
            errors[ri] = std::current_exception();
        }
    });
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    // Least squares advance = zetaFit + tauFit * r^2.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto N = static_cast<double>(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double x = radii[i] * radii[i];
        sx += x;
        sy += advance[i];
        sxx += x * x;
        sxy += x * advance[i];
    }
    double denom = N * sxx - sx * sx;
    OracleFit fit;
    fit.tauFit = (N * sxy - sx * sy) / denom;
    fit.zetaFit = (sy - fit.tauFit * sx) / N;
    return fit;
}

std::vector<double> default_oracle_radii() {
    std::vector<double> radii(8);
    for (int i = 0; i < 8; ++i)
        radii[i] = 1e-4 + (1e-3 - 1e-4) * i / 7.0;
    return radii;
}

std::optional<double> tau_zero_sin2(const Curve& curve, double phi0) {
    SupportValues v = curve.eval(phi0);
    double g0 = v.g;
    double R0 = v.g + v.d2g;
    if (!(g0 < R0 - 1e-9))
        return std::nullopt;  // not elliptic
    double denom = 4.0 * g0 - R0;
    if (std::fabs(denom) < 1e-9)
        return std::nullopt;  // resonant pole of the equation
    RadiusDerivs rd = radius_arclength_derivs(curve, phi0);
    double A = 4.0 * (g0 - R0) / (R0 * denom);
    double B = 3.0 / denom +
               (g0 / (2.0 * (g0 - R0) * (g0 - R0))) *
                   (3.0 + (2.0 * g0 - R0) / denom) * rd.dRds * rd.dRds +
               (g0 / (g0 - R0)) * rd.d2Rds2;
    if (B == 0.0)
        return std::nullopt;
    return -A / B;
}

std::optional<int> tau_zero_m(const Curve& curve, double phi0) {
    std::optional<double> x = tau_zero_sin2(curve, phi0);
    if (!x || *x <= 0.0 || *x > 1.0)
        return std::nullopt;
    int n = curve.order();
    for (int m = 1; m <= n / 2; ++m) {
        double s = std::sin(m * std::numbers::pi / n);
        if (std::fabs(s * s - *x) < 1e-9)
            return m;
    }
    return std::nullopt;
}

} // namespace billiards
