#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "billiards/jet.hpp"
#include "billiards/roots.hpp"

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGaussX[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGaussW[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

template <typename F>
double gauss8(F&& f, double a, double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) sum += kGaussW[i] * f(mid + half * kGaussX[i]);
    return half * sum;
}

// Adaptive refinement of the 8-point rule: subdivide until the two-panel
// estimate agrees with the one-panel estimate.
template <typename F>
double adaptive_gauss(F&& f, double a, double b, double tol, int depth = 0) {
    double whole = gauss8(f, a, b);
    double mid = 0.5 * (a + b);
    double split = gauss8(f, a, mid) + gauss8(f, mid, b);
    if (std::fabs(split - whole) <= tol * std::fmax(1.0, std::fabs(split)) ||
        depth >= 12)
        return split;
    return adaptive_gauss(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gauss(f, mid, b, 0.5 * tol, depth + 1);
}

// Smooth plateau profile rho(y): 1 on [-d1, d1], 0 outside [-d2, d2],
// built from the classic exp(-1/x) step.  Returns the value and the first
// four derivatives with respect to y.
Jet4 bump_profile(double y, double d1, double d2) {
    double ay = std::fabs(y);
    if (ay <= d1) return Jet4::constant(1.0);
    if (ay >= d2) return Jet4::constant(0.0);

    // Transition variable t in (0, 1); dt/dy = sign(y)/(d2 - d1).
    double scale = 1.0 / (d2 - d1);
    Jet4 t;
    t.d[0] = (ay - d1) * scale;
    t.d[1] = (y > 0.0 ? scale : -scale);

    // h(t) = exp(-1/t), flat to all orders at t = 0.  Guard the underflow
    // region so huge intermediate derivatives of 1/t cannot produce NaNs.
    auto h = [](const Jet4& u) {
        if (u.d[0] <= 1.0 / 700.0) return Jet4::constant(0.0);
        return exp(Jet4::constant(-1.0) / u);
    };
    Jet4 one = Jet4::constant(1.0);
    Jet4 hq = h(t);
    Jet4 hr = h(one - t);
    // S rises smoothly from 0 to 1 across the transition; rho = 1 - S.
    Jet4 s = hq / (hq + hr);
    return one - s;
}

// Full bump term eps * y^power * rho(y) with y the offset from the nearest
// replicated center; zero jet outside the support.
Jet4 bump_term(const BumpSpec& b, int n, double phi) {
    double period = kTwoPi / n;
    double y = std::remainder(phi - b.center, period);
    if (std::fabs(y) >= b.delta2) return Jet4::constant(0.0);
    Jet4 yj = Jet4::variable(y);
    Jet4 pw = yj * yj;
    if (b.power == 4) pw = pw * pw;
    return b.eps * (pw * bump_profile(y, b.delta1, b.delta2));
}

} // namespace

double wrap_angle(double phi) { return wrap_to(phi, kTwoPi); }

double wrap_to(double phi, double period) {
    double r = phi - period * std::floor(phi / period);
    if (r >= period) r -= period; // guards the floor rounding edge
    if (r < 0.0) r += period;
    return r;
}

double angle_diff(double a, double b) { return std::remainder(a - b, kTwoPi); }

double circ_dist(double a, double b, double period) {
    return std::fabs(std::remainder(a - b, period));
}

// ---------------------------------------------------------------------------
// SupportFunction

SupportFunction::SupportFunction(int n, double a0,
                                 std::vector<Harmonic> harmonics)
    : n_(n), a0_(a0), harmonics_(std::move(harmonics)) {
    if (n_ < 2) throw std::invalid_argument("symmetry order must be >= 2");
    if (!(a0_ > 0.0)) throw std::invalid_argument("constant term a0 must be > 0");
    for (const Harmonic& h : harmonics_) {
        if (h.k <= 0)
            throw std::invalid_argument("harmonic index must be positive");
        if (h.k % n_ != 0)
            throw std::invalid_argument(
                "harmonic index " + std::to_string(h.k) +
                " is not a multiple of the symmetry order " +
                std::to_string(n_));
    }
}

SupportValues SupportFunction::eval(double phi) const {
    SupportValues v;
    v.g = a0_;
    for (const Harmonic& h : harmonics_) {
        double k = static_cast<double>(h.k);
        double c = std::cos(k * phi);
        double s = std::sin(k * phi);
        double k2 = k * k;
        v.g += h.cosAmp * c + h.sinAmp * s;
        v.dg += k * (-h.cosAmp * s + h.sinAmp * c);
        v.d2g += k2 * (-h.cosAmp * c - h.sinAmp * s);
        v.d3g += k2 * k * (h.cosAmp * s - h.sinAmp * c);
        v.d4g += k2 * k2 * (h.cosAmp * c + h.sinAmp * s);
    }
    return v;
}

int SupportFunction::maxHarmonic() const {
    int m = 1;
    for (const Harmonic& h : harmonics_) m = std::max(m, h.k);
    return m;
}

bool SupportFunction::isCircle() const {
    for (const Harmonic& h : harmonics_)
        if (h.cosAmp != 0.0 || h.sinAmp != 0.0) return false;
    return true;
}

std::shared_ptr<const Curve> SupportFunction::clone() const {
    return std::make_shared<SupportFunction>(*this);
}

// ---------------------------------------------------------------------------
// PerturbedCurve

PerturbedCurve::PerturbedCurve(SupportFunction base, BumpSpec bump)
    : base_(std::move(base)), bump_(bump) {
    if (bump_.power != 2 && bump_.power != 4)
        throw std::invalid_argument("bump power must be 2 or 4");
    if (!(0.0 < bump_.delta1 && bump_.delta1 < bump_.delta2))
        throw SupportTooWide("bump requires 0 < delta1 < delta2");
    if (!(bump_.delta2 < std::numbers::pi / base_.order()))
        throw SupportTooWide(
            "bump support must fit strictly inside one fundamental domain");
}

SupportValues PerturbedCurve::eval(double phi) const {
    SupportValues v = base_.eval(phi);
    Jet4 b = bump_term(bump_, base_.order(), phi);
    v.g += b.d[0];
    v.dg += b.d[1];
    v.d2g += b.d[2];
    v.d3g += b.d[3];
    v.d4g += b.d[4];
    return v;
}

int PerturbedCurve::maxHarmonic() const {
    // The bump is not band-limited; report an effective bandwidth so the
    // default validation grid resolves the transition region.
    double width = bump_.delta2 - bump_.delta1;
    int effective = static_cast<int>(std::ceil(kTwoPi / width));
    return std::max(base_.maxHarmonic(), effective);
}

bool PerturbedCurve::isCircle() const {
    return base_.isCircle() && bump_.eps == 0.0;
}

std::shared_ptr<const Curve> PerturbedCurve::clone() const {
    return std::make_shared<PerturbedCurve>(*this);
}

// ---------------------------------------------------------------------------
// Free operations

SupportValues eval_support(const Curve& curve, double phi) {
    return curve.eval(phi);
}

namespace {

// Newton polish of a local minimum of f (given f' and f'' evaluators),
// starting from x0 with the two grid neighbours as a trust region.
template <typename D1, typename D2>
double polish_minimum(D1&& d1, D2&& d2, double x0, double lo, double hi) {
    double x = x0;
    for (int i = 0; i < 60; ++i) {
        double f1 = d1(x);
        double f2 = d2(x);
        if (f2 <= 0.0) break; // not a convex spot; keep the grid value
        double step = f1 / f2;
        double xn = x - step;
        if (xn < lo || xn > hi) break;
        x = xn;
        if (std::fabs(step) < 1e-12) break;
    }
    return x;
}

} // namespace

ValidationReport validate(const Curve& curve, int samples) {
    if (samples <= 0)
        samples = std::max(4096, 1024 * curve.maxHarmonic());
    ValidationReport rep;
    rep.samples = samples;

    double minG = std::numeric_limits<double>::infinity();
    double minR = minG;
    double argG = 0.0, argR = 0.0;
    std::vector<double> gs(samples), rs(samples);
    for (int i = 0; i < samples; ++i) {
        double phi = kTwoPi * i / samples;
        SupportValues v = curve.eval(phi);
        gs[i] = v.g;
        rs[i] = v.g + v.d2g;
        if (gs[i] < minG) {
            minG = gs[i];
            argG = phi;
        }
        if (rs[i] < minR) {
            minR = rs[i];
            argR = phi;
        }
    }

    // Refine: polish every sampled local minimum and keep the smallest.
    double h = kTwoPi / samples;
    auto gPrime = [&](double phi) { return curve.eval(phi).dg; };
    auto gSecond = [&](double phi) { return curve.eval(phi).d2g; };
    auto rPrime = [&](double phi) {
        SupportValues v = curve.eval(phi);
        return v.dg + v.d3g;
    };
    auto rSecond = [&](double phi) {
        SupportValues v = curve.eval(phi);
        return v.d2g + v.d4g;
    };
    for (int i = 0; i < samples; ++i) {
        int prev = (i + samples - 1) % samples;
        int next = (i + 1) % samples;
        double phi = kTwoPi * i / samples;
        if (gs[i] <= gs[prev] && gs[i] <= gs[next]) {
            double x = polish_minimum(gPrime, gSecond, phi, phi - h, phi + h);
            double val = curve.eval(x).g;
            if (val < minG) {
                minG = val;
                argG = wrap_angle(x);
            }
        }
        if (rs[i] <= rs[prev] && rs[i] <= rs[next]) {
            double x = polish_minimum(rPrime, rSecond, phi, phi - h, phi + h);
            SupportValues v = curve.eval(x);
            double val = v.g + v.d2g;
            if (val < minR) {
                minR = val;
                argR = wrap_angle(x);
            }
        }
    }

    rep.minG = minG;
    rep.minR = minR;
    rep.phiMinG = argG;
    rep.phiMinR = argR;
    rep.pass = (minG > 0.0) && (minR > 0.0);
    return rep;
}

std::vector<CriticalPoint> critical_points(const Curve& curve, double rootTol,
                                           double degenerateTol) {
    if (curve.isCircle())
        throw DegenerateCircle(
            "circle: critical points of g are not isolated");

    int n = curve.order();
    double period = kTwoPi / n;
    const int grid = 4096;
    auto gPrime = [&](double phi) { return curve.eval(phi).dg; };

    std::vector<double> vals(grid + 1);
    double maxAbs = 0.0;
    for (int i = 0; i <= grid; ++i) {
        vals[i] = gPrime(period * i / grid);
        maxAbs = std::fmax(maxAbs, std::fabs(vals[i]));
    }
    // A numerically flat derivative means the harmonics cancel to rounding:
    // treat like the circle rather than inventing spurious roots.
    if (maxAbs < 1e-14)
        throw DegenerateCircle(
            "support derivative is numerically zero everywhere");

    std::vector<CriticalPoint> out;
    for (int i = 0; i < grid; ++i) {
        double a = period * i / grid;
        double b = period * (i + 1) / grid;
        double fa = vals[i];
        double fb = vals[i + 1];
        double root;
        if (fa == 0.0) {
            root = a;
        } else if (fa * fb < 0.0) {
            root = bisect_root(gPrime, a, b, rootTol);
        } else {
            continue;
        }
        root = wrap_to(root, period);
        // Merge duplicates produced by roots landing on grid nodes.
        bool dup = false;
        for (const CriticalPoint& c : out)
            if (circ_dist(c.phi0, root, period) < 10 * rootTol) dup = true;
        if (dup) continue;

        SupportValues v = curve.eval(root);
        CriticalPoint cp;
        cp.phi0 = root;
        cp.gValue = v.g;
        cp.gSecond = v.d2g;
        if (std::fabs(v.d2g) <= degenerateTol)
            cp.kind = CritKind::Degenerate;
        else
            cp.kind = v.d2g > 0.0 ? CritKind::Minimum : CritKind::Maximum;
        out.push_back(cp);
    }
    std::sort(out.begin(), out.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) {
                  return a.phi0 < b.phi0;
              });
    return out;
}

SupportFunction perturb_constant(const SupportFunction& sf, double eps) {
    if (!(sf.a0() + eps > 0.0))
        throw InvalidResult(
            "constant shift leaves the admissible class (a0 + eps = " +
            std::to_string(sf.a0() + eps) + " <= 0)");
    SupportFunction shifted(sf.order(), sf.a0() + eps, sf.harmonics());
    ValidationReport rep = validate(shifted);
    if (!rep.pass)
        throw InvalidResult(
            "constant shift leaves the admissible class (min g = " +
            std::to_string(rep.minG) + ", min R = " + std::to_string(rep.minR) +
            ")");
    return shifted;
}

PerturbedCurve perturb_bump(const SupportFunction& sf, double center,
                            double eps, int power, double delta1,
                            double delta2) {
    if (power != 2 && power != 4)
        throw std::invalid_argument("bump power must be 2 or 4");
    BumpSpec spec;
    spec.center = wrap_angle(center);
    spec.eps = eps;
    spec.power = power;
    spec.delta1 = delta1;
    spec.delta2 = delta2;
    PerturbedCurve curve(sf, spec); // validates the support geometry

    // Disjointness from the symmetric periodic impacts (the critical points
    // of g, modulo the replication period).  A power-4 bump sits at a
    // critical point by design, so only *other* critical points are
    // excluded; a power-2 bump must avoid them all.
    double period = kTwoPi / sf.order();
    try {
        for (const CriticalPoint& cp : critical_points(sf)) {
            double dist = circ_dist(cp.phi0, spec.center, period);
            if (power == 4 && dist < 1e-9) continue; // the center itself
            if (dist <= delta2)
                throw SupportTooWide(
                    "bump support contains a critical point at phi = " +
                    std::to_string(cp.phi0));
        }
    } catch (const DegenerateCircle&) {
        // A circle has no isolated critical points to avoid.
    }

    if (eps != 0.0) {
        ValidationReport rep = validate(curve);
        if (!rep.pass)
            throw InvalidResult("bump leaves the admissible class (min R = " +
                                std::to_string(rep.minR) + ")");
    }
    return curve;
}

// ---------------------------------------------------------------------------
// Oval

Oval::Oval(std::shared_ptr<const Curve> curve) : curve_(std::move(curve)) {
    if (!curve_) throw std::invalid_argument("null curve");
    ValidationReport rep = validate(*curve_);
    if (!rep.pass)
        throw InvalidResult("curve is not a valid oval (min g = " +
                            std::to_string(rep.minG) +
                            ", min R = " + std::to_string(rep.minR) + ")");

    auto radius = [this](double phi) {
        SupportValues v = curve_->eval(phi);
        return v.g + v.d2g;
    };

    const int knots = 4096;
    knotPhi_.resize(knots + 1);
    knotS_.resize(knots + 1);
    knotInvSlope_.resize(knots + 1);
    knotS_[0] = 0.0;
    for (int i = 0; i <= knots; ++i) {
        knotPhi_[i] = kTwoPi * i / knots;
        knotInvSlope_[i] = 1.0 / radius(knotPhi_[i]);
        if (i > 0)
            knotS_[i] = knotS_[i - 1] + adaptive_gauss(radius, knotPhi_[i - 1],
                                                       knotPhi_[i], 1e-14);
    }
    total_ = knotS_.back();
}

Oval::Oval(const SupportFunction& sf)
    : Oval(std::static_pointer_cast<const Curve>(
          std::make_shared<SupportFunction>(sf))) {}

Oval::Oval(const PerturbedCurve& pc)
    : Oval(std::static_pointer_cast<const Curve>(
          std::make_shared<PerturbedCurve>(pc))) {}

Oval::EmbedResult Oval::embed(double phi) const {
    SupportValues v = curve_->eval(phi);
    double c = std::cos(phi);
    double s = std::sin(phi);
    EmbedResult r;
    r.tangent = {c, s};
    r.normal = {-s, c};
    // Gamma = -g * normal + g' * tangent; the unique point whose tangent
    // line has direction (cos phi, sin phi) and signed distance g from the
    // origin.  Satisfies dGamma/dphi = R * tangent.
    r.point = {v.g * s + v.dg * c, -v.g * c + v.dg * s};
    r.R = v.g + v.d2g;
    return r;
}

double Oval::arclength(double phi) const {
    double turns = std::floor(phi / kTwoPi);
    double rem = phi - kTwoPi * turns;
    if (rem >= kTwoPi) { // floor edge case
        rem -= kTwoPi;
        turns += 1.0;
    }
    int knots = static_cast<int>(knotPhi_.size()) - 1;
    int i = std::min(static_cast<int>(rem / kTwoPi * knots), knots - 1);
    auto radius = [this](double x) {
        SupportValues v = curve_->eval(x);
        return v.g + v.d2g;
    };
    double partial = gauss8(radius, knotPhi_[i], rem);
    return turns * total_ + knotS_[i] + partial;
}

double Oval::phiOfS(double s) const {
    double turns = std::floor(s / total_);
    double rem = s - total_ * turns;
    if (rem >= total_) {
        rem -= total_;
        turns += 1.0;
    }
    // Bracketing knot interval (knotS_ is strictly increasing).
    auto it = std::upper_bound(knotS_.begin(), knotS_.end(), rem);
    int i = std::max(0, static_cast<int>(it - knotS_.begin()) - 1);
    i = std::min(i, static_cast<int>(knotS_.size()) - 2);

    // Monotone cubic Hermite guess on (s -> phi), slopes 1/R clamped the
    // Fritsch-Carlson way, then Newton polish on s(phi) - s = 0.
    double h = knotS_[i + 1] - knotS_[i];
    double t = (rem - knotS_[i]) / h;
    double secant = (knotPhi_[i + 1] - knotPhi_[i]) / h;
    double m0 = std::min(knotInvSlope_[i], 3.0 * secant);
    double m1 = std::min(knotInvSlope_[i + 1], 3.0 * secant);
    double t2 = t * t, t3 = t2 * t;
    double phi = (2 * t3 - 3 * t2 + 1) * knotPhi_[i] +
                 (t3 - 2 * t2 + t) * h * m0 +
                 (-2 * t3 + 3 * t2) * knotPhi_[i + 1] + (t3 - t2) * h * m1;

    for (int iter = 0; iter < 50; ++iter) {
        double f = arclength(phi) - rem;
        SupportValues v = curve_->eval(phi);
        double step = f / (v.g + v.d2g);
        phi -= step;
        if (std::fabs(step) < 1e-14) break;
    }
    return phi + kTwoPi * turns;
}

} // namespace billiards
