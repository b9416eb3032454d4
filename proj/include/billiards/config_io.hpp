#ifndef BILLIARDS_CONFIG_IO_HPP
#define BILLIARDS_CONFIG_IO_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

// Parsed curve definition file.  Structured text, one `key = value` per
// line, `#` comments:
//   n = 3
//   a0 = 1.0
//   harmonic = {3, 0.05, 0.0}        # k, cos amplitude, sin amplitude
//   bump = {0.7, 1e-4, 2, 0.05, 0.15} # center, eps, power, delta1, delta2
// `n` and `a0` are required and single; `harmonic` repeats; `bump` is
// optional and single.  `n` must precede every `harmonic` so the
// multiple-of-n rule can be checked where the line number is known.
struct CurveConfig {
    int n = 0;
    double a0 = 0.0;
    std::vector<Harmonic> harmonics;
    std::optional<BumpSpec> bump;
};

// Throws ConfigError carrying the 1-based line of the offending entry.
CurveConfig load_curve_config(const std::string& path);

// Materializes the configured curve; the bump, when present, wraps the
// series in a PerturbedCurve.  Constructor rejections (bad order, bad
// amplitudes, bad bump widths) propagate as std::invalid_argument.
std::shared_ptr<const Curve> build_curve(const CurveConfig& config);

} // namespace billiards

#endif
