#include "lpdecay/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lpdecay/error.hpp"

namespace lpdecay {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidParameter, "alpha must lie in (0, 1)");
}

namespace {

constexpr std::array<double, 4> kGaussNodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                            0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};

struct PanelSum {
  Complex value;
  double magnitude;
};

// Q(xi) - Q(ref) without forming Q itself. At large |t| the phase reaches 1e4 rad and
// its absolute rounding would swamp the refinement estimate.
double phase_offset(const PhaseSpec& phase, double xi, double ref) {
  double dphi = 0.0;
  if (phase.t != 0.0) {
    const double r = std::abs(ref);
    if (r > 0.0 && (xi < 0.0) == (ref < 0.0))
      dphi = std::pow(r, phase.alpha) * std::expm1(phase.alpha * std::log1p((std::abs(xi) - r) / r));
    else
      dphi = phase.phi(xi) - phase.phi(ref);
  }
  return phase.x * (xi - ref) + phase.t * dphi;
}

PanelSum gauss8(const Amplitude& a, const PhaseSpec& phase, double lo, double hi, double ref) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Complex sum{};
  double mag = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      const double xi = mid + sign * half * kGaussNodes[i];
      const Complex amp = a(xi);
      const double q = phase_offset(phase, xi, ref);
      sum += kGaussWeights[i] * amp * Complex(std::cos(q), std::sin(q));
      mag += kGaussWeights[i] * std::abs(amp);
    }
  }
  return {half * sum, half * mag};
}

double max_abs_dq(const PhaseSpec& phase, double lo, double hi) {
  // Q' is monotone on each sign branch, so its extremes sit at the endpoints.
  return std::max(std::abs(phase.dq(lo)), std::abs(phase.dq(hi)));
}

}  // namespace

QuadratureResult oscillatory_integral(const Amplitude& amplitude, std::span<const Interval> support,
                                      const PhaseSpec& phase, const QuadratureOptions& options) {
  struct Panel {
    double lo, hi;
    Complex whole;
    int depth;
    double ref;  // shared by a root panel and its children so rounding of Q(ref) cancels
    Complex rotation;
  };

  // Phase-resolved initial panels.
  std::vector<std::pair<double, double>> initial;
  double total_width = 0.0;
  for (const auto& iv : support) {
    if (!(iv.hi > iv.lo)) continue;
    if (phase.t != 0.0 && iv.lo < 0.0 && iv.hi > 0.0)
      throw Error(ErrorKind::Precondition, "quadrature interval straddles xi = 0 with t != 0");
    total_width += iv.width();
    double a = iv.lo;
    while (a < iv.hi) {
      double w = iv.hi - a;
      while (max_abs_dq(phase, a, a + w) * w > options.max_phase_step) {
        w *= 0.5;
        if (!(w > 1e-300 * std::max(1.0, std::abs(a))))
          throw Error(ErrorKind::Precondition, "phase derivative unbounded on the integration interval");
      }
      const double b = (w == iv.hi - a) ? iv.hi : a + w;
      initial.emplace_back(a, b);
      a = b;
      if (initial.size() > options.max_panels)
        throw AccuracyNotMetError("phase resolution requires more panels than the budget allows",
                                  std::numeric_limits<double>::infinity());
    }
  }

  QuadratureResult out;
  if (initial.empty()) return out;

  std::vector<Panel> stack;
  stack.reserve(initial.size());
  for (auto it = initial.rbegin(); it != initial.rend(); ++it) {
    const double ref = 0.5 * (it->first + it->second);
    const double q = phase.q(ref);
    const auto s = gauss8(amplitude, phase, it->first, it->second, ref);
    out.amplitude_l1 += s.magnitude;
    stack.push_back({it->first, it->second, s.value, 0, ref, Complex(std::cos(q), std::sin(q))});
  }
  const double scale = std::max(out.amplitude_l1, std::numeric_limits<double>::min());
  const double budget = std::max(options.rel_tol * scale, options.abs_tol);
  const double density = budget / total_width;

  std::size_t panels = stack.size();
  double unresolved = 0.0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const auto left = gauss8(amplitude, phase, p.lo, mid, p.ref);
    const auto right = gauss8(amplitude, phase, mid, p.hi, p.ref);
    const Complex refined = left.value + right.value;
    const double diff = std::abs(refined - p.whole);
    const double allowed = density * (p.hi - p.lo);
    if (diff <= allowed || p.depth >= 50 || mid == p.lo || mid == p.hi) {
      out.value += p.rotation * refined;
      out.error_estimate += diff;
      if (diff > allowed) unresolved += diff;
      continue;
    }
    panels += 1;
    if (panels > options.max_panels)
      throw AccuracyNotMetError("adaptive refinement budget exhausted", out.error_estimate + diff);
    stack.push_back({mid, p.hi, right.value, p.depth + 1, p.ref, p.rotation});
    stack.push_back({p.lo, mid, left.value, p.depth + 1, p.ref, p.rotation});
  }
  out.panels = panels;
  if (unresolved > 100.0 * budget)
    throw AccuracyNotMetError("panels reached minimum width without meeting tolerance", out.error_estimate);
  return out;
}

SpectralInterpolant::SpectralInterpolant(const SpectralFunction& samples, int order)
    : samples_(samples), order_(order) {
  if (order < 2 || order % 2 != 0 || static_cast<std::size_t>(order) > samples.values.size())
    throw Error(ErrorKind::InvalidParameter, "interpolation order must be even and not exceed the grid size");
  // Barycentric weights for equispaced nodes: (-1)^j binom(order - 1, j).
  base_weights_.resize(static_cast<std::size_t>(order));
  double c = 1.0;
  for (int j = 0; j < order; ++j) {
    base_weights_[static_cast<std::size_t>(j)] = (j % 2 == 0) ? c : -c;
    c = c * static_cast<double>(order - 1 - j) / static_cast<double>(j + 1);
  }
}

Complex SpectralInterpolant::operator()(double xi) const {
  const auto& grid = samples_.grid;
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  const double dxi = grid.frequency_spacing();
  const double pos = xi / dxi + static_cast<double>(n / 2);  // fractional index
  if (pos < 0.0 || pos > static_cast<double>(n - 1)) return {};
  const auto base = static_cast<std::ptrdiff_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(base);
  if (frac == 0.0) return samples_.values[static_cast<std::size_t>(base)];
  std::ptrdiff_t start = base - order_ / 2 + 1;
  start = std::clamp<std::ptrdiff_t>(start, 0, n - order_);
  Complex num{};
  double den = 0.0;
  for (int j = 0; j < order_; ++j) {
    const auto idx = start + j;
    const double w = base_weights_[static_cast<std::size_t>(j)] / (pos - static_cast<double>(idx));
    num += w * samples_.values[static_cast<std::size_t>(idx)];
    den += w;
  }
  return num / den;
}

SpectralSupport spectral_support(const SpectralFunction& f_hat, double threshold, int pad_nodes) {
  const auto& grid = f_hat.grid;
  const auto n = grid.size();
  double peak = 0.0;
  for (const auto& v : f_hat.values) peak = std::max(peak, std::abs(v));
  SpectralSupport out;
  if (peak == 0.0) return out;
  const double cut = threshold * peak;
  const double dxi = grid.frequency_spacing();
  const double pad = pad_nodes * dxi;
  const auto zero = grid.zero_index();

  std::ptrdiff_t lo_neg = -1, hi_neg = -1, lo_pos = -1, hi_pos = -1;
  bool zero_live = std::abs(f_hat.values[zero]) > cut;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(f_hat.values[i]) <= cut || i == zero) continue;
    const auto si = static_cast<std::ptrdiff_t>(i);
    if (i < zero) {
      if (lo_neg < 0) lo_neg = si;
      hi_neg = si;
    } else {
      if (lo_pos < 0) lo_pos = si;
      hi_pos = si;
    }
  }

  double inner = std::numeric_limits<double>::infinity();
  double outer = 0.0;
  if (hi_neg >= 0) {
    inner = std::min(inner, -grid.xi(static_cast<std::size_t>(hi_neg)));
    outer = std::max(outer, -grid.xi(static_cast<std::size_t>(lo_neg)));
  }
  if (lo_pos >= 0) {
    inner = std::min(inner, grid.xi(static_cast<std::size_t>(lo_pos)));
    outer = std::max(outer, grid.xi(static_cast<std::size_t>(hi_pos)));
  }
  if (zero_live) inner = 0.0;
  out.inner_radius = inner;
  out.outer_radius = outer;
  out.touches_zero = zero_live || inner <= pad;

  const double xi_lo = grid.xi(0);
  const double xi_hi = grid.xi(n - 1);
  if (out.touches_zero) {
    out.intervals.push_back({std::max(xi_lo, -outer - pad), std::min(xi_hi, outer + pad)});
    return out;
  }
  if (hi_neg >= 0)
    out.intervals.push_back({std::max(xi_lo, grid.xi(static_cast<std::size_t>(lo_neg)) - pad),
                             grid.xi(static_cast<std::size_t>(hi_neg)) + pad});
  if (lo_pos >= 0)
    out.intervals.push_back({grid.xi(static_cast<std::size_t>(lo_pos)) - pad,
                             std::min(xi_hi, grid.xi(static_cast<std::size_t>(hi_pos)) + pad)});
  double excluded = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(grid.xi(i)) < inner - pad) excluded += std::abs(f_hat.values[i]);
  out.excluded_mass = excluded * dxi;
  return out;
}

}  // namespace lpdecay
