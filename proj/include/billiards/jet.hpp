#ifndef BILLIARDS_JET_HPP
#define BILLIARDS_JET_HPP

#include <array>
#include <cmath>

namespace billiards {

// Value plus first four derivatives with respect to one scalar variable,
// combined with Leibniz-rule arithmetic.  Trigonometric series are
// differentiated term by term elsewhere; this type exists for the
// non-polynomial bump profile, whose exact derivatives feed the
// twist-coefficient chain rule.
struct Jet4 {
    // d[i] holds the i-th derivative; d[0] is the value itself.
    std::array<double, 5> d{};

    static Jet4 constant(double c) {
        Jet4 j;
        j.d[0] = c;
        return j;
    }
    static Jet4 variable(double x) {
        Jet4 j;
        j.d[0] = x;
        j.d[1] = 1.0;
        return j;
    }
};

namespace detail {
// Pascal's triangle up to row 4, for Leibniz products of derivatives.
inline constexpr double kBinom[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
};
} // namespace detail

inline Jet4 operator+(const Jet4& a, const Jet4& b) {
    Jet4 c;
    for (int k = 0; k <= 4; ++k) c.d[k] = a.d[k] + b.d[k];
    return c;
}

inline Jet4 operator-(const Jet4& a, const Jet4& b) {
    Jet4 c;
    for (int k = 0; k <= 4; ++k) c.d[k] = a.d[k] - b.d[k];
    return c;
}

inline Jet4 operator*(const Jet4& a, double c) {
    Jet4 r;
    for (int k = 0; k <= 4; ++k) r.d[k] = a.d[k] * c;
    return r;
}

inline Jet4 operator*(double c, const Jet4& a) { return a * c; }

inline Jet4 operator*(const Jet4& a, const Jet4& b) {
    Jet4 c;
    for (int k = 0; k <= 4; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i)
            s += detail::kBinom[k][i] * a.d[i] * b.d[k - i];
        c.d[k] = s;
    }
    return c;
}

// Solves w*b = a for w degree by degree (b.d[0] must be nonzero).
inline Jet4 operator/(const Jet4& a, const Jet4& b) {
    Jet4 w;
    for (int k = 0; k <= 4; ++k) {
        double s = a.d[k];
        for (int i = 0; i < k; ++i)
            s -= detail::kBinom[k][i] * w.d[i] * b.d[k - i];
        w.d[k] = s / b.d[0];
    }
    return w;
}

// exp(u) via the recurrence e' = u'*e differentiated with Leibniz.
inline Jet4 exp(const Jet4& u) {
    Jet4 e;
    e.d[0] = std::exp(u.d[0]);
    for (int k = 1; k <= 4; ++k) {
        double s = 0.0;
        for (int i = 0; i < k; ++i)
            s += detail::kBinom[k - 1][i] * u.d[i + 1] * e.d[k - 1 - i];
        e.d[k] = s;
    }
    return e;
}

} // namespace billiards

#endif
