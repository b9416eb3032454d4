#ifndef BILLIARDS_ERRORS_HPP
#define BILLIARDS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace billiards {

// Base class for every failure this library can signal.  Each concrete
// type is a distinguishable condition so tests can assert "never occurs"
// separately from conditions that are legitimate outcomes.
class BilliardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |p| reached the grazing cutoff: the chord solver would be ill-posed.
class GrazingOrbit : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// The chord solver failed to bracket its root.  Must not happen for a
// valid convex oval; treated as an internal bug signal.
class RootNotBracketed : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// The support function has no isolated critical points (perfect circle).
class DegenerateCircle : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// An operation that requires g'(phi0) = 0 was called away from a
// critical point.
class NotCritical : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// Twist-coefficient machinery refused a resonant fixed point.
class Resonant : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// The fixed point is not elliptic (twist analysis) ...
class NotElliptic : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// ... or not hyperbolic (manifold analysis).
class NotHyperbolic : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// A bump perturbation's support violates its disjointness preconditions.
class SupportTooWide : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// A construction produced a curve outside the admissible class, or an
// internal consistency check failed.
class InvalidResult : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// Gutkin family: |a1| >= 1.
class InvalidAmplitude : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// A rotation-number ring orbit left its fitting annulus.
class EscapedNeighborhood : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// Manifold refinement could not meet its resolution target within the
// point budget.
class RefinementLimit : public BilliardError {
public:
    using BilliardError::BilliardError;
};

// Wraps a step failure inside iterate() with the failing index.
class IterationError : public BilliardError {
public:
    IterationError(std::size_t index, const std::string& cause)
        : BilliardError("step " + std::to_string(index) + ": " + cause),
          index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// Curve-config parse failure carrying the 1-based source line.
class ConfigError : public BilliardError {
public:
    ConfigError(int line, const std::string& message)
        : BilliardError("line " + std::to_string(line) + ": " + message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace billiards

#endif
