#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lpdecay/grid.hpp"
#include "lpdecay/phase.hpp"
#include "lpdecay/quadrature.hpp"

namespace lpdecay {

/// Fraction of the half-width that the fastest occupied wave packet may cover.
inline constexpr double kWrapAroundFraction = 0.4;
/// Relative spectral amplitude below which a mode counts as unoccupied.
inline constexpr double kOccupancyThreshold = 1e-13;

struct WrapAroundGuard {
  double inner_radius = 0.0;    // smallest occupied nonzero |xi| (at least one grid step)
  double max_group_speed = 0.0; // alpha * inner_radius^{alpha - 1}
  double reach = 0.0;           // max_group_speed * |t|
  double min_half_width = 0.0;  // reach / kWrapAroundFraction
  bool ok = true;
};

WrapAroundGuard wrap_around_guard(const SpectralFunction& phi_hat, double t, double alpha);

/// u(t) = e^{i t |D|^alpha} phi by spectral multiplication. Throws
/// DomainTooSmallError when the wrap-around guard fails.
SampledFunction evolve_spectral(const SampledFunction& phi, double t, double alpha = 0.5);
SpectralFunction evolve_spectral(const SpectralFunction& phi_hat, double t, double alpha = 0.5);

struct QuadratureEvaluation {
  std::vector<Complex> values;
  double excluded_mass = 0.0;
  double max_error_estimate = 0.0;
};

/// u(t, x) = (1/2pi) \int e^{i(x xi + t |xi|^alpha)} phi_hat(xi) dxi at each
/// requested x, by adaptive panel quadrature over an interpolant of the
/// spectral samples. No periodicity is assumed.
QuadratureEvaluation evolve_quadrature(const SpectralFunction& phi_hat, double t, std::span<const double> x_points,
                                       double alpha = 0.5, const QuadratureOptions& options = {});

/// Same integral for an amplitude given in closed form on explicit support.
Complex evolve_quadrature_at(const Amplitude& amplitude, std::span<const Interval> support, double t, double x,
                             double alpha, const QuadratureOptions& options = {});

/// Unique real root of x + t Phi_alpha'(xi) = 0, if one exists.
std::optional<double> stationary_point(double t, double x, double alpha = 0.5);

struct FactorizationResidual {
  double residual = 0.0;
  /// dt^2 * max|xi| / 12: size of the leading truncation term relative to |D|u.
  double truncation_scale = 0.0;
};

/// ||D_t^2 u + |D| u|| / |||D| u|| with D_t^2 the centered second difference of
/// e^{i t |D|^{1/2}} phi at t - dt, t, t + dt. Empty when |D| u vanishes.
std::optional<FactorizationResidual> factorization_residual(const SampledFunction& phi, double t, double dt = 1e-3);

}  // namespace lpdecay
