#pragma once

#include <cstdint>
#include <vector>

#include "lpdecay/grid.hpp"

namespace lpdecay {

/// Frequency band lo <= |xi| <= hi.
struct Band {
  double lo = 0.25;
  double hi = 32.0;
};

/// One term c * exp(-a (x - x0)^2 + i b x).
struct GaussianAtom {
  double a = 1.0;
  double x0 = 0.0;
  double b = 0.0;
  Complex c{1.0, 0.0};

  Complex operator()(double x) const;
  /// Closed-form transform under f_hat(xi) = \int f e^{-i xi x} dx.
  Complex transform(double xi) const;
};

struct GaussianMixture {
  std::vector<GaussianAtom> atoms;

  Complex operator()(double x) const;
  Complex transform(double xi) const;
};

/// Deterministic draw of 1..4 atoms with a in [0.2, 5], |x0| <= 10, |b| <= 20
/// and coefficient modulus in [1/4, 1].
GaussianMixture draw_mixture(std::uint64_t seed, std::uint64_t index);

/// Unfiltered mixture sampled on the grid.
SampledFunction random_schwartz(std::uint64_t seed, std::uint64_t index, const GridSpec& grid);

/// Smooth band-pass window with exact support lo <= |xi| <= hi: rises on
/// [lo, 2 lo] and falls on [hi/2, hi].
double band_window(const Band& band, double xi);

/// Mixture band-pass filtered to `band` on the spectral side.
SampledFunction generate_schwartz(std::uint64_t seed, std::uint64_t index, const GridSpec& grid, const Band& band);

/// Filters arbitrary samples to the band (throws on an empty or unresolved band).
SampledFunction band_pass(const SampledFunction& f, const Band& band);

/// Data whose transform is a Gaussian ring exp(-(|xi| - center)^2 / (2 width^2)),
/// windowed to `band` so that its support is exact.
SampledFunction gaussian_ring(const GridSpec& grid, double center, double width, const Band& band);

}  // namespace lpdecay
