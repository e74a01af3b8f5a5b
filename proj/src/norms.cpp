#include "lpdecay/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lpdecay/error.hpp"

namespace lpdecay {

SampledFunction fractional_derivative(const SampledFunction& f, double s) {
  if (!(s > -1.0) || !std::isfinite(s))
    throw Error(ErrorKind::InvalidParameter, "fractional derivative order must satisfy s > -1");
  if (s == 0.0) {
    require_finite(f.values, "fractional_derivative input");
    return f;
  }
  auto spec = forward_ft(f);
  const auto zero = f.grid.zero_index();
  if (s < 0.0) {
    double peak = 0.0;
    for (const auto& v : spec.values) peak = std::max(peak, std::abs(v));
    if (std::abs(spec.values[zero]) > 1e-14 * peak)
      throw Error(ErrorKind::SingularMultiplier, "|xi|^s with s < 0 applied to data with a nonzero zero mode");
  }
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    spec.values[i] = i == zero ? Complex{} : spec.values[i] * std::pow(std::abs(f.grid.xi(i)), s);
  auto out = inverse_ft(spec);
  out.band_limit = f.band_limit;
  return out;
}

SampledFunction spectral_derivative(const SampledFunction& f) {
  auto spec = forward_ft(f);
  for (std::size_t i = 0; i < spec.values.size(); ++i) spec.values[i] *= Complex(0.0, f.grid.xi(i));
  spec.values[0] = 0.0;  // Nyquist node has no symmetric partner
  auto out = inverse_ft(spec);
  out.band_limit = f.band_limit;
  return out;
}

double sobolev_norm(const SpectralFunction& f_hat, double s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f_hat.values.size(); ++i) {
    const double xi = f_hat.grid.xi(i);
    sum += std::pow(1.0 + xi * xi, s) * std::norm(f_hat.values[i]);
  }
  return std::sqrt(sum * f_hat.grid.frequency_spacing() / (2.0 * std::numbers::pi));
}

double lp_norm(const SampledFunction& f, double p) {
  require_finite(f.values, "lp_norm input");
  if (std::isinf(p)) return sup_norm(f).value;
  const double h = f.grid.spacing();
  double sum = 0.0;
  if (p == 1.0) {
    for (const auto& v : f.values) sum += std::abs(v);
    return h * sum;
  }
  if (p == 2.0) {
    for (const auto& v : f.values) sum += std::norm(v);
    return std::sqrt(h * sum);
  }
  if (p == 4.0) {
    for (const auto& v : f.values) sum += std::norm(v) * std::norm(v);
    return std::pow(h * sum, 0.25);
  }
  throw Error(ErrorKind::InvalidParameter, "L^p norm supported only for p in {1, 2, 4, inf}");
}

NormBundle norms(const SampledFunction& f, std::span<const double> sobolev_exponents) {
  require_finite(f.values, "norms input");
  NormBundle out;
  out.l2 = lp_norm(f, 2.0);
  const auto spec = forward_ft(f);
  out.h1 = sobolev_norm(spec, 1.0);
  for (double s : sobolev_exponents) out.hs[s] = sobolev_norm(spec, s);

  auto derivative = spectral_derivative(f);
  const auto n = f.grid.size();
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    derivative.values[i] *= f.grid.x(i);
    peak = std::max(peak, std::abs(derivative.values[i]));
  }
  out.weighted = lp_norm(derivative, 2.0);
  const auto edge = std::max<std::size_t>(1, n / 20);
  double outer = 0.0;
  for (std::size_t i = 0; i < edge; ++i)
    outer = std::max({outer, std::abs(derivative.values[i]), std::abs(derivative.values[n - 1 - i])});
  if (peak > 0.0 && outer > 1e-10 * peak)
    out.warnings.push_back("x * d/dx f does not decay at the grid boundary; weighted norm unreliable");
  return out;
}

SupNorm sup_norm(const SampledFunction& f) {
  require_finite(f.values, "sup_norm input");
  const auto n = f.values.size();
  std::size_t best = 0;
  double top = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(f.values[i]);
    if (a > top) {
      top = a;
      best = i;
    }
  }
  SupNorm out{top, f.grid.x(best)};
  if (top == 0.0) return out;
  const double left = std::abs(f.values[(best + n - 1) % n]);
  const double right = std::abs(f.values[(best + 1) % n]);
  const double curvature = left - 2.0 * top + right;
  if (curvature < 0.0) {
    const double h = f.grid.spacing();
    const double offset = 0.5 * (left - right) / curvature;  // in units of h, within [-1/2, 1/2]
    out.value = top - 0.125 * (left - right) * (left - right) / curvature;
    out.argmax = f.grid.x(best) + offset * h;
  }
  return out;
}

}  // namespace lpdecay
