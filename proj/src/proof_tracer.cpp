#include "lpdecay/proof_tracer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "lpdecay/error.hpp"
#include "lpdecay/propagator.hpp"

namespace lpdecay {

double low_threshold(double t) { return 1024.0 / (1.0 + std::abs(t)); }
double high_threshold(double t) { return (1.0 + std::abs(t)) / 1024.0; }

double effective_margin(double alpha, double margin) { return alpha == 0.5 ? kHalfWaveMargin : margin; }

RegimeMembership classify_frequency(int k, double t, double x, double alpha, double margin) {
  require_alpha(alpha);
  RegimeMembership out;
  if (x == 0.0) {
    out.non_stationary_low = true;
    return out;
  }
  const double m = effective_margin(alpha, margin);
  const double ratio = std::abs(t / x);
  const double scale = std::exp2(k * (1.0 - alpha));
  out.non_stationary_low = scale <= ratio / m;
  out.stationary = ratio / m <= scale && scale <= m * ratio;
  out.non_stationary_high = scale >= m * ratio;
  return out;
}

bool BandPartition::in(const std::vector<int>& set, int k) const {
  return std::find(set.begin(), set.end(), k) != set.end();
}

BandPartition build_partition(double t, double x, double alpha, double margin, int k_lo, int k_hi) {
  require_alpha(alpha);
  if (t == 0.0 || !std::isfinite(t)) throw Error(ErrorKind::InvalidParameter, "partition requires finite t != 0");
  if (!(margin >= 1.0)) throw Error(ErrorKind::InvalidParameter, "index-set margin must be >= 1");
  BandPartition p;
  p.t = t;
  p.x = x;
  p.alpha = alpha;
  p.margin = effective_margin(alpha, margin);
  p.lambda_t = low_threshold(t);
  p.Lambda_t = high_threshold(t);
  p.x_is_zero = x == 0.0;
  p.k_lo = k_lo;
  p.k_hi = k_hi;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double scale = std::ldexp(1.0, k);
    const bool low = scale <= p.lambda_t;
    const bool middle = p.lambda_t <= scale && scale <= p.Lambda_t;
    const bool high = scale >= p.Lambda_t;
    if (low) p.low.push_back(k);
    if (middle) p.middle.push_back(k);
    if (high) p.high.push_back(k);
    int hits = int(low) + int(middle) + int(high);
    if (middle) {
      const auto r = classify_frequency(k, t, x, alpha, margin);
      if (r.non_stationary_low) p.near.push_back(k);
      if (r.stationary) p.stationary.push_back(k);
      if (r.non_stationary_high) p.far.push_back(k);
      hits = std::max(hits, int(r.non_stationary_low) + int(r.stationary) + int(r.non_stationary_high));
    }
    if (hits > 1) p.shared.push_back(k);
  }
  return p;
}

namespace {

constexpr int kInfimumSamples = 1 << 14;

std::array<Interval, 2> annulus(int k) {
  const double inner = std::ldexp(1.0, k - 1);
  const double outer = std::ldexp(1.0, k + 1);
  return {Interval{-outer, -inner}, Interval{inner, outer}};
}

std::vector<Interval> intersect(std::span<const Interval> a, std::span<const Interval> b) {
  std::vector<Interval> out;
  for (const auto& u : a)
    for (const auto& v : b) {
      const double lo = std::max(u.lo, v.lo);
      const double hi = std::min(u.hi, v.hi);
      if (hi > lo) out.push_back({lo, hi});
    }
  return out;
}

template <class F>
double grid_minimum(const Interval& iv, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kInfimumSamples; ++j) {
    const double xi = (j == kInfimumSamples - 1) ? iv.hi : iv.lo + iv.width() * j / (kInfimumSamples - 1);
    best = std::min(best, f(xi));
  }
  return best;
}

}  // namespace

KernelBound kernel_lower_bound(int k, double t, double x, double alpha, double margin) {
  const auto regime = classify_frequency(k, t, x, alpha, margin);
  if (t == 0.0) throw Error(ErrorKind::InvalidParameter, "kernel bound requires t != 0");
  if (!regime.non_stationary_low && !regime.non_stationary_high)
    throw Error(ErrorKind::Precondition, "k is not in a non-stationary index set for this (t, x)");
  const double drift = x / t;
  auto kernel = [&](double xi) { return std::abs(drift + dispersion_d1(alpha, xi)); };
  KernelBound out;
  out.minimum = std::numeric_limits<double>::infinity();
  out.endpoint_minimum = std::numeric_limits<double>::infinity();
  for (const auto& iv : annulus(k)) {
    out.minimum = std::min(out.minimum, grid_minimum(iv, kernel));
    out.endpoint_minimum = std::min({out.endpoint_minimum, kernel(iv.lo), kernel(iv.hi)});
  }
  out.ratio = out.minimum / std::exp2(-k * (1.0 - alpha));
  return out;
}

std::optional<Q0Estimate> q0_estimate(int k, int l, double t, double x, double alpha, double margin) {
  if (!classify_frequency(k, t, x, alpha, margin).stationary)
    throw Error(ErrorKind::Precondition, "k is not in the stationary index set for this (t, x)");
  const auto xi0 = stationary_point(t, x, alpha);
  if (!xi0) throw Error(ErrorKind::Precondition, "no stationary point for this (t, x)");
  const double inner = std::ldexp(1.0, l - 1);
  const double outer = std::ldexp(1.0, l + 1);
  const std::array<Interval, 2> ring{Interval{*xi0 - outer, *xi0 - inner}, Interval{*xi0 + inner, *xi0 + outer}};
  const auto region = intersect(annulus(k), ring);
  if (region.empty()) return std::nullopt;
  const PhaseSpec phase{alpha, t, x};
  Q0Estimate out;
  out.region = region;
  out.infimum = std::numeric_limits<double>::infinity();
  for (const auto& iv : region) out.infimum = std::min(out.infimum, grid_minimum(iv, [&](double xi) {
                                                        return std::abs(phase.dq(xi));
                                                      }));
  out.ratio = out.infimum / (std::abs(t) * std::exp2(l - (2.0 - alpha) * k));
  return out;
}

// ---------------------------------------------------------------------------

TraceData::TraceData(const SampledFunction& phi, double alpha, const BumpFunction& bump)
    : phi_(phi),
      spectrum_(forward_ft(phi)),
      interpolant_(spectrum_),
      derivative_(frequency_derivative(phi)),
      bump_(bump),
      alpha_(alpha) {
  require_alpha(alpha);
  const double s = stationary_exponent();
  norms_ = norms(phi, std::span<const double>(&s, 1));
  h_stationary_ = norms_.hs.at(s);
  const auto support = spectral_support(spectrum_, kOccupancyThreshold);
  if (support.touches_zero)
    throw Error(ErrorKind::Precondition, "proof tracing requires data supported away from xi = 0");
  inner_radius_ = support.inner_radius;
  outer_radius_ = support.outer_radius;
  support_ = support.intervals;
  for (const auto& v : spectrum_.values) spectral_l1_ += std::abs(v);
  spectral_l1_ *= spectrum_.grid.frequency_spacing();
}

double TraceData::piece_l2(int k) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < spectrum_.values.size(); ++i)
    sum += std::norm(bump_.piece(k, spectrum_.grid.xi(i)) * spectrum_.values[i]);
  return std::sqrt(sum * spectrum_.grid.frequency_spacing() / (2.0 * std::numbers::pi));
}

Complex TraceData::piece_amplitude(int k, double xi) const {
  const double w = bump_.piece(k, xi);
  return w == 0.0 ? Complex{} : w * interpolant_(xi);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex integrate(const Amplitude& amp, std::span<const Interval> region, double t, double x, double alpha,
                  const QuadratureOptions& options) {
  if (region.empty()) return {};
  return oscillatory_integral(amp, region, PhaseSpec{alpha, t, x}, options).value / kTwoPi;
}

std::vector<Interval> occupied_annulus(const TraceData& data, int k) {
  return intersect(annulus(k), data.support());
}

QuadratureOptions with_floor(const TraceData& data, QuadratureOptions options) {
  options.abs_tol = std::max(options.abs_tol, kTraceAbsTolerance * data.spectral_l1());
  return options;
}

// Composite Gauss-Legendre for the non-oscillatory integration-by-parts bounds.
template <class F>
double composite_gauss(std::span<const Interval> region, F&& f, int panels = 512) {
  static constexpr std::array<double, 4> nodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                               0.9602898564975363};
  static constexpr std::array<double, 4> weights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                 0.1012285362903763};
  double total = 0.0;
  for (const auto& iv : region) {
    const double w = iv.width() / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = iv.lo + (p + 0.5) * w;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        total += 0.5 * w * weights[i] * (f(mid - 0.5 * w * nodes[i]) + f(mid + 0.5 * w * nodes[i]));
    }
  }
  return total;
}

}  // namespace

AnnulusDecomposition annulus_decomposition(const TraceData& data, int k, double t, double x,
                                           const QuadratureOptions& quadrature) {
  const double alpha = data.alpha();
  const auto options = with_floor(data, quadrature);
  if (!classify_frequency(k, t, x, alpha).stationary)
    throw Error(ErrorKind::Precondition, "k is not in the stationary index set for this (t, x)");
  const auto xi0 = stationary_point(t, x, alpha);
  if (!xi0) throw Error(ErrorKind::Precondition, "no stationary point for this (t, x)");

  AnnulusDecomposition out;
  out.k = k;
  out.xi0 = *xi0;
  out.s = data.stationary_exponent();
  out.l0 = static_cast<int>(std::lround((2.0 - alpha) * k / 2.0 - 0.5 * std::log2(std::abs(t))));

  const auto support = occupied_annulus(data, k);
  const auto& bump = data.bump();
  const double center = *xi0;

  const std::array<Interval, 1> core{Interval{center - std::ldexp(1.0, out.l0 + 1), center + std::ldexp(1.0, out.l0 + 1)}};
  const auto core_region = intersect(support, core);
  out.center_value = integrate(
      [&](double xi) { return data.piece_amplitude(k, xi) * bump.value(std::ldexp(xi - center, -out.l0)); },
      core_region, t, x, alpha, options);
  out.center_magnitude = std::abs(out.center_value);
  const double rhs = std::ldexp(data.piece_l2(k), out.l0) +
                     std::exp2(out.l0 - out.s * k) * (data.l2() + data.weighted());
  out.center_bound_ratio = rhs > 0.0 ? out.center_magnitude / rhs : 0.0;

  // psi((.)/2^{l0}) + sum_{l0 < l <= L} psi_l = psi((.)/2^L), which is 1 on supp psi_k once
  // 2^L reaches the largest distance from xi0 to the annulus.
  const double reach = std::abs(center) + std::ldexp(1.0, k + 1);
  const int l_end = std::max(out.l0 + 1, static_cast<int>(std::ceil(std::log2(reach))));
  Complex sum = out.center_value;
  out.magnitude_sum = out.center_magnitude;
  for (int l = out.l0 + 1; l <= l_end; ++l) {
    AnnulusPiece piece;
    piece.l = l;
    const double inner = std::ldexp(1.0, l - 1);
    const double outer = std::ldexp(1.0, l + 1);
    const std::array<Interval, 2> ring{Interval{center - outer, center - inner}, Interval{center + inner, center + outer}};
    const auto region = intersect(support, ring);
    if (!region.empty()) {
      piece.value = integrate(
          [&](double xi) { return data.piece_amplitude(k, xi) * bump.piece(l, xi - center); }, region, t, x, alpha,
          options);
      piece.magnitude = std::abs(piece.value);
      piece.q0 = q0_estimate(k, l, t, x, alpha);
    }
    sum += piece.value;
    out.magnitude_sum += piece.magnitude;
    out.pieces.push_back(std::move(piece));
  }
  out.undecomposed = integrate([&](double xi) { return data.piece_amplitude(k, xi); }, support, t, x, alpha, options);
  out.equality_defect = std::abs(sum - out.undecomposed);
  return out;
}

AnnulusDecomposition annulus_decomposition(const SampledFunction& phi, int k, double t, double x, double alpha) {
  return annulus_decomposition(TraceData(phi, alpha), k, t, x);
}

double non_stationary_rate(double t, double alpha) {
  const double a = std::abs(t);
  if (alpha == 0.5) return std::log(1.0 + a) / a;
  return std::pow(a, -0.5 - alpha);
}

double stationary_rate(double t, double alpha) {
  const double a = std::abs(t);
  return std::pow(a, -0.5) + std::pow(a, (2.0 - 3.0 * alpha) / 4.0 - 0.75);
}

ProofTrace trace_terms(const TraceData& data, double t, double x, bool with_annuli,
                       const QuadratureOptions& quadrature) {
  const double alpha = data.alpha();
  if (data.support().empty()) {
    // phi = 0: every term vanishes
    ProofTrace zero;
    zero.t = t;
    zero.x = x;
    zero.alpha = alpha;
    zero.partition = build_partition(t, x, alpha, kHalfWaveMargin, 0, 0);
    return zero;
  }
  const auto options = with_floor(data, quadrature);
  const int k_min = static_cast<int>(std::floor(std::log2(data.inner_radius())));
  const int k_max = static_cast<int>(std::ceil(std::log2(data.outer_radius())));

  ProofTrace trace;
  trace.t = t;
  trace.x = x;
  trace.alpha = alpha;
  trace.partition = build_partition(t, x, alpha, kHalfWaveMargin, k_min, k_max);
  const auto& part = trace.partition;

  const auto& interp = data.interpolant();
  trace.u = integrate([&](double xi) { return interp(xi); }, data.support(), t, x, alpha, options);

  // Everything below 2^{k_min} lies under the occupied band; kept for the identity check.
  const double cap = std::ldexp(1.0, k_min);
  const std::array<Interval, 2> low_disk{Interval{-cap, 0.0}, Interval{0.0, cap}};
  const auto low_region = intersect(data.support(), low_disk);
  const auto& bump = data.bump();
  const Complex remainder = integrate([&](double xi) { return bump.value(std::ldexp(xi, -(k_min - 1))) * interp(xi); },
                                      low_region, t, x, alpha, options);
  trace.low_remainder = std::abs(remainder);
  trace.reconstruction = remainder;

  for (int k = k_min; k <= k_max; ++k) {
    PieceTrace piece;
    piece.k = k;
    piece.in_low = part.in(part.low, k);
    piece.in_middle = part.in(part.middle, k);
    piece.in_high = part.in(part.high, k);
    piece.in_near = part.in(part.near, k);
    piece.in_stationary = part.in(part.stationary, k);
    piece.in_far = part.in(part.far, k);
    const auto region = occupied_annulus(data, k);
    piece.value = integrate([&](double xi) { return data.piece_amplitude(k, xi); }, region, t, x, alpha, options);
    piece.magnitude = std::abs(piece.value);
    trace.reconstruction += piece.value;

    if (piece.in_near || piece.in_far) {
      const PhaseSpec phase{alpha, t, x};
      const auto& deriv = data.derivative_interpolant();
      piece.ibp_first = composite_gauss(region, [&](double xi) {
                          const Complex d = bump.piece_derivative(k, xi) * interp(xi) + bump.piece(k, xi) * deriv(xi);
                          return std::abs(d) / std::abs(phase.dq(xi));
                        }) / kTwoPi;
      piece.ibp_second = composite_gauss(region, [&](double xi) {
                           const double dq = phase.dq(xi);
                           return std::abs(phase.ddq(xi)) * std::abs(data.piece_amplitude(k, xi)) / (dq * dq);
                         }) / kTwoPi;
      piece.kernel = kernel_lower_bound(k, t, x, alpha);
    }
    if (piece.in_stationary && with_annuli && stationary_point(t, x, alpha))
      piece.annulus = annulus_decomposition(data, k, t, x, options);
    trace.pieces.push_back(std::move(piece));
  }
  trace.reconstruction_defect = std::abs(trace.reconstruction - trace.u);

  const double decay = 1.0 / std::sqrt(1.0 + std::abs(t));
  const double weighted_sum = data.l2() + data.weighted();
  trace.low.bound = decay * data.l2();
  trace.high.bound = decay * data.h1();
  trace.near.bound = non_stationary_rate(t, alpha) * weighted_sum;
  trace.far.bound = trace.near.bound;
  trace.stationary.bound = stationary_rate(t, alpha) * (data.h_stationary() + data.weighted());
  trace.total_magnitude = trace.low_remainder;
  for (const auto& p : trace.pieces) {
    if (p.in_low) trace.low.magnitude += p.magnitude;
    if (p.in_high) trace.high.magnitude += p.magnitude;
    if (p.in_near) trace.near.magnitude += p.magnitude;
    if (p.in_stationary) trace.stationary.magnitude += p.magnitude;
    if (p.in_far) trace.far.magnitude += p.magnitude;
    trace.total_magnitude += p.magnitude;
  }
  for (auto* term : {&trace.low, &trace.near, &trace.stationary, &trace.far, &trace.high})
    term->ratio = term->bound > 0.0 ? term->magnitude / term->bound : 0.0;
  return trace;
}

ProofTrace trace_terms(const SampledFunction& phi, double t, double x, double alpha) {
  return trace_terms(TraceData(phi, alpha), t, x);
}

}  // namespace lpdecay
