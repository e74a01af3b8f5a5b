#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <utility>

// Empirical constants measured on the default configurations (seed 0) and
// frozen. Re-measure and update together with any change to the numerics.
namespace lpdecay::pinned {

/// Relative headroom before a pinned constant counts as exceeded.
inline constexpr double kTolerance = 0.01;

struct DecayPin {
  double alpha;
  double max_ratio;  // max over samples and dyadic t <= 2^10 of R(t)
};

inline constexpr DecayPin kDecay[] = {
    {0.5, 0.4127},
    {0.35, 0.4921},
    {0.4, 0.4590},
    {0.45, 0.4329},
};

/// Maxima of the lemma-suite rows, 100 samples, k in [-8, 8].
inline constexpr std::pair<std::string_view, double> kLemma[] = {
    {"bern(2,inf)", 0.5657}, {"bern(1,inf)", 0.2514}, {"bern2 lower", 1.822},
    {"bern2 upper", 1.785},  {"lemma1", 2.598},      {"lemma2", 0.6258},
};

struct TracePin {
  double t;
  double low, near, stationary, far, high;  // max bound ratios over the 10-sample suite
};

/// Ratios that measure at quadrature-noise level are capped here instead.
inline constexpr double kNoiseCeiling = 1e-12;

inline constexpr TracePin kTrace[] = {
    {2048.0, 1.032e-10, kNoiseCeiling, 0.01123, kNoiseCeiling, 0.8500},
    {4096.0, kNoiseCeiling, kNoiseCeiling, 0.04409, kNoiseCeiling, 0.8516},
    {8192.0, kNoiseCeiling, kNoiseCeiling, 0.09680, kNoiseCeiling, 0.7092},
};

/// Smallest q0 ratio over the admissible suite (t in {2^11, 2^12, 2^13}, stationary
/// middle-band k, every ring meeting the annulus), rounded down.
struct Q0Floor {
  double alpha;
  double ratio;
};

inline constexpr Q0Floor kQ0Floor[] = {
    {0.4, 0.006042},
    {0.5, 0.004195},
};

inline std::optional<double> decay_max(double alpha) {
  for (const auto& p : kDecay)
    if (p.alpha == alpha && std::isfinite(p.max_ratio)) return p.max_ratio;
  return std::nullopt;
}

inline std::optional<double> q0_floor(double alpha) {
  for (const auto& p : kQ0Floor)
    if (p.alpha == alpha) return p.ratio;
  return std::nullopt;
}

inline const TracePin* trace_pin(double t) {
  for (const auto& p : kTrace)
    if (p.t == t) return &p;
  return nullptr;
}

/// measured <= pinned * (1 + kTolerance)
inline bool within(double measured, double pin) { return std::isfinite(measured) && measured <= pin * (1.0 + kTolerance); }

}  // namespace lpdecay::pinned
