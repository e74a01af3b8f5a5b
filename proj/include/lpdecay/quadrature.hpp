#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "lpdecay/grid.hpp"
#include "lpdecay/phase.hpp"

namespace lpdecay {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

using Amplitude = std::function<Complex(double)>;

struct QuadratureOptions {
  double rel_tol = 1e-12;
  /// Largest admissible |Q'| * (panel width).
  double max_phase_step = std::numbers::pi / 4.0;
  std::size_t max_panels = std::size_t{1} << 24;
  /// Absolute floor on the error budget, for amplitudes that may be pure noise.
  double abs_tol = 0.0;
};

struct QuadratureResult {
  Complex value{};
  double error_estimate = 0.0;
  double amplitude_l1 = 0.0;  // estimate of \int |a|
  std::size_t panels = 0;
};

/// \int e^{i Q(xi)} a(xi) dxi over the union of `support` intervals by adaptive
/// 8-point Gauss-Legendre panels. Panels are first split until the phase
/// increment |Q'| * width is at most max_phase_step, then bisected until the
/// one-level refinement difference meets the tolerance. Intervals must not
/// contain xi = 0 in their interior when t != 0.
QuadratureResult oscillatory_integral(const Amplitude& amplitude, std::span<const Interval> support,
                                      const PhaseSpec& phase, const QuadratureOptions& options = {});

/// Local equispaced Lagrange interpolation of spectral samples; zero outside
/// the frequency grid.
class SpectralInterpolant {
 public:
  explicit SpectralInterpolant(const SpectralFunction& samples, int order = 12);

  Complex operator()(double xi) const;

  const SpectralFunction& samples() const noexcept { return samples_; }
  int order() const noexcept { return order_; }

 private:
  SpectralFunction samples_;
  int order_;
  std::vector<double> base_weights_;
};

/// Where a spectral sample set is numerically alive (|f_hat| > threshold * max).
struct SpectralSupport {
  std::vector<Interval> intervals;  // sign branches, never straddling 0 unless `touches_zero`
  bool touches_zero = false;
  double inner_radius = 0.0;        // smallest occupied |xi|
  double outer_radius = 0.0;        // largest occupied |xi|
  double excluded_mass = 0.0;       // \int_{|xi| < inner_radius} |f_hat|
};

SpectralSupport spectral_support(const SpectralFunction& f_hat, double threshold = 1e-13, int pad_nodes = 6);

}  // namespace lpdecay
