#include "lpdecay/littlewood_paley.hpp"

#include <cmath>

#include "lpdecay/error.hpp"
#include "lpdecay/norms.hpp"

namespace lpdecay {

double BumpFunction::step(double u) const noexcept {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double z = sharpness_ / u - sharpness_ / (1.0 - u);
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double BumpFunction::step_derivative(double u) const noexcept {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double z = sharpness_ / u - sharpness_ / (1.0 - u);
  const double e = std::exp(-std::abs(z));
  const double logistic = e / ((1.0 + e) * (1.0 + e));
  return logistic * sharpness_ * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)));
}

double BumpFunction::value(double x) const noexcept {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return 1.0 - step(a - 1.0);
}

double BumpFunction::derivative(double x) const noexcept {
  const double a = std::abs(x);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  const double d = -step_derivative(a - 1.0);
  return x < 0.0 ? -d : d;
}

double BumpFunction::piece(int k, double xi) const noexcept {
  return value(std::ldexp(xi, -k)) - value(std::ldexp(xi, -(k - 1)));
}

double BumpFunction::piece_derivative(int k, double xi) const noexcept {
  return std::ldexp(derivative(std::ldexp(xi, -k)), -k) - std::ldexp(derivative(std::ldexp(xi, -(k - 1))), -(k - 1));
}

BumpFunction make_bump(double transition_sharpness) {
  if (!(transition_sharpness > 0.0 && transition_sharpness <= 10.0))
    throw Error(ErrorKind::InvalidParameter, "bump sharpness must lie in (0, 10]");
  return BumpFunction(transition_sharpness);
}

SpectralFunction project_spectral(const SpectralFunction& f_hat, int k, const BumpFunction& bump) {
  if (std::ldexp(1.0, k + 1) > f_hat.grid.nyquist())
    throw Error(ErrorKind::OutOfBand, "annulus 2^{k+1} = " + std::to_string(std::ldexp(1.0, k + 1)) +
                                          " exceeds grid Nyquist " + std::to_string(f_hat.grid.nyquist()));
  SpectralFunction out = f_hat;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= bump.piece(k, f_hat.grid.xi(i));
  return out;
}

SampledFunction project(const SampledFunction& f, int k, const BumpFunction& bump) {
  return inverse_ft(project_spectral(forward_ft(f), k, bump));
}

SpectralFunction DyadicProjection::reconstruct() const {
  SpectralFunction total = low_remainder;
  for (const auto& [k, piece] : pieces)
    for (std::size_t i = 0; i < total.values.size(); ++i) total.values[i] += piece.values[i];
  return total;
}

DyadicProjection decompose(const SampledFunction& f, int k_min, int k_max, const BumpFunction& bump) {
  if (k_min > k_max) throw Error(ErrorKind::InvalidParameter, "empty dyadic range");
  const auto spec = forward_ft(f);
  SpectralFunction remainder = spec;
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    remainder.values[i] *= bump.value(std::ldexp(spec.grid.xi(i), -(k_min - 1)));
  DyadicProjection out{f, k_min, k_max, {}, std::move(remainder), bump};
  for (int k = k_min; k <= k_max; ++k) out.pieces.emplace(k, project_spectral(spec, k, bump));
  return out;
}

std::pair<int, int> resolved_k_range(const GridSpec& grid, int k_lo, int k_hi, const BumpFunction& bump) {
  const double dxi = grid.frequency_spacing();
  int first = k_hi + 1;
  int last = k_lo - 1;
  for (int k = k_lo; k <= k_hi; ++k) {
    if (std::ldexp(1.0, k + 1) > grid.nyquist()) continue;
    // psi_k peaks at 2^k, so the node nearest to it decides
    const double node = std::max(1.0, std::round(std::ldexp(1.0, k) / dxi)) * dxi;
    if (bump.piece(k, node) <= 0.0) continue;
    first = std::min(first, k);
    last = std::max(last, k);
  }
  if (first > last) throw Error(ErrorKind::OutOfBand, "no dyadic annulus is resolved by this grid");
  return {first, last};
}

namespace {

bool valid_exponent(double p) { return p == 1.0 || p == 2.0 || p == 4.0 || std::isinf(p); }

double inverse_exponent(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

bool identically_zero(const SampledFunction& g) {
  for (const auto& v : g.values)
    if (v != Complex{}) return false;
  return true;
}

}  // namespace

std::optional<double> bernstein_ratio(const SampledFunction& f, int k, double p, double q, const BumpFunction& bump) {
  if (!valid_exponent(p) || !valid_exponent(q) || p > q)
    throw Error(ErrorKind::InvalidParameter, "Bernstein exponents must satisfy p <= q with p, q in {1, 2, 4, inf}");
  const auto piece = project(f, k, bump);
  if (identically_zero(piece)) return std::nullopt;
  const double low = lp_norm(piece, p);
  if (low == 0.0) return std::nullopt;
  if (p == q) return 1.0;
  const double scale = std::exp2(k * (inverse_exponent(p) - inverse_exponent(q)));
  return lp_norm(piece, q) / (scale * low);
}

std::optional<DerivativeRatios> bernstein_derivative_ratio(const SampledFunction& f, int k, double s, double p,
                                                           const BumpFunction& bump) {
  if (!valid_exponent(p)) throw Error(ErrorKind::InvalidParameter, "L^p exponent must be in {1, 2, 4, inf}");
  if (!(s >= 0.0 && s <= 2.0)) throw Error(ErrorKind::InvalidParameter, "derivative order must lie in [0, 2]");
  const auto piece = project(f, k, bump);
  if (identically_zero(piece)) return std::nullopt;
  const double base = lp_norm(piece, p);
  if (base == 0.0) return std::nullopt;
  if (s == 0.0) return DerivativeRatios{1.0, 1.0};
  const double lifted = std::exp2(-s * k) * lp_norm(fractional_derivative(piece, s), p);
  if (lifted == 0.0) return std::nullopt;
  return DerivativeRatios{base / lifted, lifted / base};
}

SpectralFunction frequency_derivative(const SampledFunction& g) {
  SampledFunction weighted = g;
  for (std::size_t n = 0; n < weighted.values.size(); ++n) weighted.values[n] *= Complex(0.0, -g.grid.x(n));
  return forward_ft(weighted);
}

namespace {

double spectral_l2(const SpectralFunction& s) {
  double sum = 0.0;
  for (const auto& v : s.values) sum += std::norm(v);
  return std::sqrt(sum * s.grid.frequency_spacing());
}

}  // namespace

std::optional<double> lemma1_ratio(const SampledFunction& f, int k, const BumpFunction& bump) {
  const auto bundle = norms(f);
  const double denom = bundle.l2 + bundle.weighted;
  if (denom == 0.0) return std::nullopt;
  const auto piece = project(f, k, bump);
  return std::exp2(k) * spectral_l2(frequency_derivative(piece)) / denom;
}

std::optional<double> lemma2_ratio(const SampledFunction& f, int k, double s, const BumpFunction& bump) {
  if (!(s > 0.5 && s < 1.0)) throw Error(ErrorKind::InvalidParameter, "lemma 2 exponent must satisfy 1/2 < s < 1");
  const auto bundle = norms(f);
  const auto piece_hat = project_spectral(forward_ft(f), k, bump);
  const auto piece = inverse_ft(piece_hat);
  const double denom = lp_norm(piece, 2.0) + std::exp2(-s * k) * (bundle.l2 + bundle.weighted);
  if (denom == 0.0) return std::nullopt;
  double top = 0.0;
  for (const auto& v : piece_hat.values) top = std::max(top, std::abs(v));
  return top / denom;
}

}  // namespace lpdecay
