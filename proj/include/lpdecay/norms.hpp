#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lpdecay/grid.hpp"

namespace lpdecay {

/// Norms of the initial data that appear on the right of the decay bound.
struct NormBundle {
  double l2 = 0.0;
  double h1 = 0.0;
  double weighted = 0.0;  // ||x d/dx f||_{L^2}
  std::map<double, double> hs;
  std::vector<std::string> warnings;
};

struct SupNorm {
  double value = 0.0;
  double argmax = 0.0;
};

/// Applies the Fourier multiplier |xi|^s. The zero mode maps to 0 for s > 0;
/// for s < 0 it must already vanish. Requires s > -1.
SampledFunction fractional_derivative(const SampledFunction& f, double s);

/// Spectral first derivative (multiplier i xi, Nyquist mode dropped).
SampledFunction spectral_derivative(const SampledFunction& f);

/// L^2 via trapezoid; H^s on the spectral side; weighted norm as
/// ||x * (spectral d/dx f)||_{L^2}. `sobolev_exponents` selects the hs entries.
NormBundle norms(const SampledFunction& f, std::span<const double> sobolev_exponents = {});

/// ||(1 + |xi|^2)^{s/2} f_hat||_{L^2} / sqrt(2 pi).
double sobolev_norm(const SpectralFunction& f_hat, double s);

/// L^p norm for p in {1, 2, 4, inf} (pass INFINITY for the sup norm).
double lp_norm(const SampledFunction& f, double p);

/// Grid maximum of |f|, refined by a three-point quadratic fit.
SupNorm sup_norm(const SampledFunction& f);

}  // namespace lpdecay
