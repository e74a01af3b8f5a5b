#include "lpdecay/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpdecay/error.hpp"
#include "lpdecay/norms.hpp"

namespace lpdecay {

WrapAroundGuard wrap_around_guard(const SpectralFunction& phi_hat, double t, double alpha) {
  require_alpha(alpha);
  const auto& grid = phi_hat.grid;
  double peak = 0.0;
  for (const auto& v : phi_hat.values) peak = std::max(peak, std::abs(v));
  WrapAroundGuard g;
  if (peak == 0.0 || t == 0.0) return g;
  double inner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < phi_hat.values.size(); ++i)
    if (std::abs(phi_hat.values[i]) > kOccupancyThreshold * peak) inner = std::min(inner, std::abs(grid.xi(i)));
  g.inner_radius = std::max(inner, grid.frequency_spacing());
  g.max_group_speed = alpha * std::pow(g.inner_radius, alpha - 1.0);
  g.reach = g.max_group_speed * std::abs(t);
  g.min_half_width = g.reach / kWrapAroundFraction;
  g.ok = g.reach < kWrapAroundFraction * grid.half_width();
  return g;
}

SpectralFunction evolve_spectral(const SpectralFunction& phi_hat, double t, double alpha) {
  require_finite(phi_hat.values, "evolve_spectral input");
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidParameter, "time must be finite");
  const auto guard = wrap_around_guard(phi_hat, t, alpha);
  if (!guard.ok)
    throw DomainTooSmallError("fastest occupied packet travels " + std::to_string(guard.reach) +
                                  ", beyond 0.4 * L = " + std::to_string(kWrapAroundFraction * phi_hat.grid.half_width()),
                              guard.min_half_width);
  if (t == 0.0) return phi_hat;
  SpectralFunction out = phi_hat;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.values[i] == Complex{}) continue;
    const double phase = t * dispersion(alpha, out.grid.xi(i));
    out.values[i] *= Complex(std::cos(phase), std::sin(phase));
  }
  return out;
}

SampledFunction evolve_spectral(const SampledFunction& phi, double t, double alpha) {
  if (t == 0.0) {
    require_alpha(alpha);
    require_finite(phi.values, "evolve_spectral input");
    return phi;
  }
  auto out = inverse_ft(evolve_spectral(forward_ft(phi), t, alpha));
  out.band_limit = phi.band_limit;
  return out;
}

QuadratureEvaluation evolve_quadrature(const SpectralFunction& phi_hat, double t, std::span<const double> x_points,
                                       double alpha, const QuadratureOptions& options) {
  require_alpha(alpha);
  require_finite(phi_hat.values, "evolve_quadrature input");
  const auto support = spectral_support(phi_hat, kOccupancyThreshold);
  if (t != 0.0 && support.touches_zero)
    throw Error(ErrorKind::Precondition,
                "spectral amplitude does not vanish near xi = 0; quadrature requires data supported away from 0");
  const SpectralInterpolant interpolant(phi_hat);
  const Amplitude amplitude = [&interpolant](double xi) { return interpolant(xi); };
  QuadratureEvaluation out;
  out.excluded_mass = support.excluded_mass;
  out.values.reserve(x_points.size());
  for (double x : x_points) {
    const auto r = oscillatory_integral(amplitude, support.intervals, PhaseSpec{alpha, t, x}, options);
    out.values.push_back(r.value / (2.0 * std::numbers::pi));
    out.max_error_estimate = std::max(out.max_error_estimate, r.error_estimate / (2.0 * std::numbers::pi));
  }
  return out;
}

Complex evolve_quadrature_at(const Amplitude& amplitude, std::span<const Interval> support, double t, double x,
                             double alpha, const QuadratureOptions& options) {
  require_alpha(alpha);
  return oscillatory_integral(amplitude, support, PhaseSpec{alpha, t, x}, options).value / (2.0 * std::numbers::pi);
}

std::optional<double> stationary_point(double t, double x, double alpha) {
  require_alpha(alpha);
  if (t == 0.0 || x == 0.0) return std::nullopt;
  // alpha |xi|^{alpha-1} = |x/t|, with sign(xi) = -sign(x t).
  const double magnitude = std::pow(alpha * std::abs(t / x), 1.0 / (1.0 - alpha));
  if (!std::isfinite(magnitude) || magnitude == 0.0) return std::nullopt;
  return (x * t < 0.0) ? magnitude : -magnitude;
}

std::optional<FactorizationResidual> factorization_residual(const SampledFunction& phi, double t, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidParameter, "time step must be positive");
  constexpr double alpha = 0.5;
  const auto phi_hat = forward_ft(phi);
  const auto before = inverse_ft(evolve_spectral(phi_hat, t - dt, alpha));
  const auto now = inverse_ft(evolve_spectral(phi_hat, t, alpha));
  const auto after = inverse_ft(evolve_spectral(phi_hat, t + dt, alpha));
  const auto lifted = fractional_derivative(now, 1.0);
  const double denom = lp_norm(lifted, 2.0);
  if (denom == 0.0) return std::nullopt;
  SampledFunction residual = lifted;
  const double inv = 1.0 / (dt * dt);
  for (std::size_t i = 0; i < residual.values.size(); ++i)
    residual.values[i] += (after.values[i] - 2.0 * now.values[i] + before.values[i]) * inv;
  const auto support = spectral_support(phi_hat, kOccupancyThreshold, 0);
  return FactorizationResidual{lp_norm(residual, 2.0) / denom, dt * dt * support.outer_radius / 12.0};
}

}  // namespace lpdecay
