#include "billiards/invariant_curves.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/parallel.hpp"
#include "billiards/roots.hpp"

namespace billiards {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Pole-free residual for tan(n a) = n tan(a).  Multiplying through by
// cos(n a)cos(a) removes both tangents' singularities; the only zeros
// gained are a = pi/2 for odd n, which is exactly the boundary solution
// the family needs anyway.
double gutkin_residual(int n, double a) {
    return std::sin(n * a) * std::cos(a) - n * std::cos(n * a) * std::sin(a);
}

} // namespace

SupportFunction gutkin_oval(int n, double a1) {
    if (n < 2)
        throw std::invalid_argument("gutkin_oval: order must be >= 2");
    if (!(std::fabs(a1) < 1.0))
        throw InvalidAmplitude("gutkin_oval: |a1| must be < 1");
    if (n < 4)
        std::cerr << "gutkin_oval: warning: invariant-curve statement needs"
                     " n >= 4 (n = " << n << " has no interior root)\n";
    // solve c (1 - n^2) = a1 for the cosine coefficient of g
    SupportFunction sf(n, 1.0, {{n, a1 / (1.0 - double(n) * n), 0.0}});
    ValidationReport rep = validate(sf);
    if (!rep.pass)
        throw InvalidResult("gutkin_oval: curve failed validation");
    return sf;
}

std::vector<double> gutkin_alpha(int n) {
    if (n < 2)
        throw std::invalid_argument("gutkin_alpha: order must be >= 2");
    // The residual rises like a^3 n(n^2-1)/3 off the triple zero at the
    // origin, so starting one subinterval in skips it without losing a
    // bracket.  Near pi/2 the residual only touches zero (odd n), which a
    // sign scan cannot see; that root is appended exactly below.
    const int kSub = 10000;
    std::vector<double> roots;
    double prev = kPi / 2.0 / kSub;
    double fprev = gutkin_residual(n, prev);
    for (int i = 2; i <= kSub; ++i) {
        double x = kPi / 2.0 * i / kSub;
        double fx = gutkin_residual(n, x);
        if (fprev == 0.0) {
            roots.push_back(prev);
        } else if (fprev * fx < 0.0) {
            roots.push_back(brent_root(
                [n](double t) { return gutkin_residual(n, t); }, prev, x));
        }
        prev = x;
        fprev = fx;
    }
    if (fprev == 0.0) roots.push_back(prev);
    if (n % 2 == 1) {
        while (!roots.empty() && roots.back() > kPi / 2.0 - 1e-9)
            roots.pop_back();
        roots.push_back(kPi / 2.0);
    }
    return roots;
}

double check_horizontal_invariance(const Oval& oval, double p0, int seeds,
                                   int iters, int workers) {
    if (!(std::fabs(p0) < 1.0 - 1e-9))
        throw GrazingOrbit("check_horizontal_invariance: |p0| too close to 1");
    if (seeds < 1 || iters < 1)
        throw std::invalid_argument(
            "check_horizontal_invariance: seeds and iters must be >= 1");
    std::vector<double> worst(static_cast<std::size_t>(seeds), 0.0);
    parallel_for(static_cast<std::size_t>(seeds), workers, [&](std::size_t s) {
        PhasePoint x{2.0 * kPi * double(s) / double(seeds), p0};
        double w = 0.0;
        for (int k = 0; k < iters; ++k) {
            x = billiard_step(oval, x).next;
            w = std::fmax(w, std::fabs(x.p - p0));
        }
        worst[s] = w;
    });
    double dev = 0.0;
    for (double w : worst) dev = std::fmax(dev, w);
    return dev;
}

ConstantWidthReport constant_width_check(const Oval& oval) {
    const Curve& curve = oval.curve();
    const int kSamples = 4096;
    double wMin = std::numeric_limits<double>::infinity();
    double wMax = -wMin;
    for (int i = 0; i < kSamples; ++i) {
        double phi = 2.0 * kPi * i / kSamples;
        double w = curve.eval(phi).g + curve.eval(phi + kPi).g;
        wMin = std::fmin(wMin, w);
        wMax = std::fmax(wMax, w);
    }
    ConstantWidthReport rep;
    rep.width = (wMin + wMax) / 2.0;
    rep.isConstantWidth = (wMax - wMin) < 1e-10;
    if (!rep.isConstantWidth) {
        rep.p0Deviation = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    // constant width forces the two-bounce midline: T(phi, 0) = (phi+pi, 0)
    for (int i = 0; i < 100; ++i) {
        double phi = 2.0 * kPi * i / 100.0;
        PhasePoint y = billiard_step(oval, {phi, 0.0}).next;
        double dphi = std::remainder(y.phi - (phi + kPi), 2.0 * kPi);
        if (std::fabs(dphi) > 1e-8 || std::fabs(y.p) > 1e-8)
            throw InvalidResult(
                "constant_width_check: midline is not two-periodic");
    }
    rep.p0Deviation = check_horizontal_invariance(oval, 0.0, 16, 2000);
    return rep;
}

GutkinResult gutkin_verify(int n, double a1, int seeds, int iters) {
    GutkinResult res;
    res.n = n;
    res.a1 = a1;
    SupportFunction sf = gutkin_oval(n, a1);
    res.alpha0 = gutkin_alpha(n);
    res.p0.reserve(res.alpha0.size());
    for (double a : res.alpha0)
        res.p0.push_back(a == kPi / 2.0 ? 0.0 : std::cos(a));
    if (res.alpha0.empty()) {
        res.maxDeviation = std::numeric_limits<double>::quiet_NaN();
        return res;
    }
    Oval oval(sf);
    res.maxDeviation =
        check_horizontal_invariance(oval, res.p0.front(), seeds, iters);
    return res;
}

} // namespace billiards
