#pragma once

#include <map>
#include <optional>
#include <utility>

#include "lpdecay/grid.hpp"

namespace lpdecay {

/// Smooth even cutoff: 1 on |x| <= 1, 0 on |x| >= 2, monotone in between.
///
/// The transition is theta(u) = g(u) / (g(u) + g(1 - u)) with the glue
/// g(u) = exp(-sharpness / u), so plateau and support are exact.
class BumpFunction {
 public:
  explicit BumpFunction(double sharpness = 1.0) : sharpness_(sharpness) {}

  double sharpness() const noexcept { return sharpness_; }

  /// Smooth step on [0, 1]: 0 at u <= 0, 1 at u >= 1.
  double step(double u) const noexcept;
  double step_derivative(double u) const noexcept;

  double operator()(double x) const noexcept { return value(x); }
  double value(double x) const noexcept;
  double derivative(double x) const noexcept;

  /// psi_k(xi) = psi(xi / 2^k) - psi(xi / 2^{k-1}), supported on 2^{k-1} <= |xi| <= 2^{k+1}.
  double piece(int k, double xi) const noexcept;
  double piece_derivative(int k, double xi) const noexcept;

 private:
  double sharpness_;
};

/// Builds the cutoff; sharpness must lie in (0, 10].
BumpFunction make_bump(double transition_sharpness = 1.0);

/// Littlewood-Paley pieces psi_k * f_hat for k in [k_min, k_max] plus the
/// low-frequency remainder psi(xi / 2^{k_min - 1}) * f_hat.
struct DyadicProjection {
  SampledFunction source;
  int k_min = 0;
  int k_max = 0;
  std::map<int, SpectralFunction> pieces;
  SpectralFunction low_remainder;
  BumpFunction bump;

  /// Sum of all pieces and the remainder on the spectral side.
  SpectralFunction reconstruct() const;
};

DyadicProjection decompose(const SampledFunction& f, int k_min, int k_max, const BumpFunction& bump = BumpFunction{});

/// P_k f. Throws OutOfBand if 2^{k+1} exceeds the grid Nyquist frequency.
SampledFunction project(const SampledFunction& f, int k, const BumpFunction& bump = BumpFunction{});
SpectralFunction project_spectral(const SpectralFunction& f_hat, int k, const BumpFunction& bump = BumpFunction{});

/// Dyadic indices whose annulus holds at least one grid node where psi_k is
/// positive and whose outer radius 2^{k+1} lies below Nyquist.
std::pair<int, int> resolved_k_range(const GridSpec& grid, int k_lo, int k_hi, const BumpFunction& bump = BumpFunction{});

// Ratio checks. An empty optional is the undefined-ratio signal (the relevant
// piece or denominator is identically zero).

/// ||P_k f||_{L^q} / (2^{k(1/p - 1/q)} ||P_k f||_{L^p}), p <= q in {1, 2, 4, inf}.
std::optional<double> bernstein_ratio(const SampledFunction& f, int k, double p, double q,
                                      const BumpFunction& bump = BumpFunction{});

struct DerivativeRatios {
  double lower = 0.0;  // ||P_k g||_p / (2^{-sk} ||D^s P_k g||_p)
  double upper = 0.0;  // 2^{-sk} ||D^s P_k g||_p / ||P_k g||_p
};

std::optional<DerivativeRatios> bernstein_derivative_ratio(const SampledFunction& f, int k, double s, double p,
                                                           const BumpFunction& bump = BumpFunction{});

/// Weighted-norm inequality: 2^k ||d_xi(psi_k f_hat)||_{L^2_xi} / (||f||_2 + ||x f'||_2).
std::optional<double> lemma1_ratio(const SampledFunction& f, int k, const BumpFunction& bump = BumpFunction{});

/// ||psi_k f_hat||_inf / (||P_k f||_2 + 2^{-sk}(||f||_2 + ||x f'||_2)), 1/2 < s < 1.
std::optional<double> lemma2_ratio(const SampledFunction& f, int k, double s, const BumpFunction& bump = BumpFunction{});

/// d_xi g_hat computed as the transform of -i x g(x).
SpectralFunction frequency_derivative(const SampledFunction& g);

}  // namespace lpdecay
