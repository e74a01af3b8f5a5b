#include "lpdecay/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "lpdecay/error.hpp"
#include "lpdecay/littlewood_paley.hpp"
#include "lpdecay/propagator.hpp"

namespace lpdecay {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGolden = 0.6180339887498949;
}  // namespace

std::string to_string(BackendPolicy policy) {
  switch (policy) {
    case BackendPolicy::Auto: return "auto";
    case BackendPolicy::Spectral: return "spectral";
    case BackendPolicy::Quadrature: return "quadrature";
  }
  return "auto";
}

BackendPolicy parse_backend(const std::string& text) {
  if (text == "auto") return BackendPolicy::Auto;
  if (text == "spectral") return BackendPolicy::Spectral;
  if (text == "quadrature") return BackendPolicy::Quadrature;
  throw Error(ErrorKind::InvalidParameter, "unknown backend '" + text + "' (auto, spectral, quadrature)");
}

std::vector<double> dyadic_times(int lo_exp, int hi_exp) {
  std::vector<double> out;
  for (int e = lo_exp; e <= hi_exp; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

void SuiteConfig::validate() const {
  if (samples < 1) throw Error(ErrorKind::InvalidParameter, "sample count must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidParameter, "alpha must lie in (0, 1)");
  if (times.empty()) throw Error(ErrorKind::InvalidParameter, "time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw Error(ErrorKind::InvalidParameter, "time grid must be finite");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(ErrorKind::InvalidParameter, "time grid must be strictly increasing");
  }
  const auto g = grid();
  if (!(band.lo > 0.0 && band.hi > band.lo))
    throw Error(ErrorKind::InvalidParameter, "band must satisfy 0 < lo < hi");
  if (!(band.hi < g.nyquist()))
    throw Error(ErrorKind::InvalidParameter, "band upper edge " + std::to_string(band.hi) +
                                                 " must lie below the grid Nyquist frequency " +
                                                 std::to_string(g.nyquist()));
}

SuiteConfig decay_defaults() { return SuiteConfig{}; }

SuiteConfig lemma_defaults() {
  SuiteConfig c;
  c.samples = 100;
  c.half_width = 200.0;
  return c;
}

SuiteConfig trace_defaults() {
  SuiteConfig c;
  c.samples = 10;
  c.times = dyadic_times(11, 13);
  c.half_width = 32768.0;
  c.grid_n = std::size_t{1} << 20;
  return c;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> failures(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
  }
  // lowest index wins so the reported failure does not depend on scheduling
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

// ---------------------------------------------------------------------------
// sup search

namespace {

template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iterations = 48) {
  double a = lo, b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Indices of the `count` largest local maxima of `values`.
std::vector<std::size_t> top_local_maxima(const std::vector<double>& values, int count, bool periodic) {
  const std::size_t n = values.size();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const bool has_left = periodic || i > 0;
    const bool has_right = periodic || i + 1 < n;
    const double left = has_left ? values[(i + n - 1) % n] : -1.0;
    const double right = has_right ? values[(i + 1) % n] : -1.0;
    if (values[i] >= left && values[i] >= right && values[i] > 0.0) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > static_cast<std::size_t>(count)) peaks.resize(count);
  return peaks;
}

// Trigonometric interpolant of the periodic grid function, restricted to its occupied modes.
class TrigEvaluator {
 public:
  explicit TrigEvaluator(const SpectralFunction& f_hat) : dxi_(f_hat.grid.frequency_spacing()) {
    double peak = 0.0;
    for (const auto& v : f_hat.values) peak = std::max(peak, std::abs(v));
    const long half = static_cast<long>(f_hat.grid.size() / 2);
    for (std::size_t i = 0; i < f_hat.values.size(); ++i)
      if (std::abs(f_hat.values[i]) > 1e-17 * peak) {
        index_.push_back(static_cast<long>(i) - half);
        coeff_.push_back(f_hat.values[i]);
      }
  }

  double operator()(double x) const {
    // e^{i j dxi x} by a recurrence that restarts from an exact value every block
    constexpr std::size_t kBlock = 32;
    Complex sum{};
    const Complex step = std::polar(1.0, dxi_ * x);
    for (std::size_t b = 0; b < index_.size(); b += kBlock) {
      Complex w = std::polar(1.0, static_cast<double>(index_[b]) * dxi_ * x);
      const std::size_t end = std::min(index_.size(), b + kBlock);
      for (std::size_t m = b; m < end; ++m) {
        if (m > b) {
          const long gap = index_[m] - index_[m - 1];
          w = gap == 1 ? w * step : std::polar(1.0, static_cast<double>(index_[m]) * dxi_ * x);
        }
        sum += coeff_[m] * w;
      }
    }
    return std::abs(sum) * dxi_ / (2.0 * std::numbers::pi);
  }

 private:
  double dxi_;
  std::vector<long> index_;
  ComplexVector coeff_;
};

}  // namespace

SupNorm refined_sup(const SpectralFunction& f_hat, int candidates) {
  const auto f = inverse_ft(f_hat);
  std::vector<double> mags(f.values.size());
  for (std::size_t n = 0; n < mags.size(); ++n) mags[n] = std::abs(f.values[n]);
  const auto peaks = top_local_maxima(mags, candidates, true);
  if (peaks.empty()) return {};
  const TrigEvaluator eval(f_hat);
  const double h = f.grid.spacing();
  SupNorm best{mags[peaks.front()], f.grid.x(peaks.front())};
  for (auto i : peaks) {
    const double x = f.grid.x(i);
    const auto [xm, vm] = golden_max(eval, x - h, x + h);
    if (vm > best.value) best = {vm, xm};
  }
  return best;
}

SupNorm quadrature_sup(const SampledFunction& phi, double t, double alpha, const QuadratureSupOptions& options) {
  require_alpha(alpha);
  const auto phi_hat = forward_ft(phi);
  const auto support = spectral_support(phi_hat, kOccupancyThreshold);
  if (support.intervals.empty()) return {};
  if (t != 0.0 && support.touches_zero)
    throw Error(ErrorKind::Precondition, "quadrature sup search requires data supported away from xi = 0");
  const SpectralInterpolant interp(phi_hat);
  const Amplitude amp = [&interp](double xi) { return interp(xi); };

  double peak = 0.0;
  for (const auto& v : phi.values) peak = std::max(peak, std::abs(v));
  std::size_t first = phi.values.size(), last = 0;
  for (std::size_t n = 0; n < phi.values.size(); ++n)
    if (std::abs(phi.values[n]) > options.extent_threshold * peak) {
      first = std::min(first, n);
      last = n;
    }
  const double inner = std::max(support.inner_radius, phi_hat.grid.frequency_spacing());
  const double reach = std::abs(t) * alpha * std::pow(inner, alpha - 1.0);
  const double lo = phi.grid.x(first) - reach;
  const double hi = phi.grid.x(last) + reach;
  const double step = options.step > 0.0 ? options.step : std::numbers::pi / (2.0 * support.outer_radius);

  auto eval = [&](double x) {
    return std::abs(evolve_quadrature_at(amp, support.intervals, t, x, alpha, options.quadrature));
  };
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
  std::vector<double> coarse(count);
  for (std::size_t i = 0; i < count; ++i)
    coarse[i] = std::abs(evolve_quadrature_at(amp, support.intervals, t, lo + step * static_cast<double>(i), alpha,
                                              options.scan));
  const auto peaks = top_local_maxima(coarse, options.candidates, false);
  if (peaks.empty()) return {0.0, lo};
  SupNorm best{coarse[peaks.front()], lo + step * static_cast<double>(peaks.front())};
  for (auto i : peaks) {
    const double x = lo + step * static_cast<double>(i);
    const auto [xm, vm] = golden_max(eval, x - step, x + step, 40);
    if (vm > best.value) best = {vm, xm};
  }
  return best;
}

// ---------------------------------------------------------------------------
// decay

double DecayReport::max_ratio() const {
  double m = 0.0;
  for (double r : ratios)
    if (std::isfinite(r)) m = std::max(m, r);
  return m;
}

std::optional<double> DecayReport::max_ratio_between(double lo, double hi) const {
  std::optional<double> m;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= lo && times[i] <= hi && std::isfinite(ratios[i])) m = std::max(m.value_or(0.0), ratios[i]);
  return m;
}

DecayReport decay_report(const SampledFunction& phi, const SuiteConfig& config, std::uint64_t sample) {
  require_alpha(config.alpha);
  DecayReport report;
  report.alpha = config.alpha;
  report.seed = config.seed;
  report.sample = sample;
  report.norms = norms(phi);
  const double denom = report.norms.h1 + report.norms.weighted;
  if (denom == 0.0) throw Error(ErrorKind::InvalidInput, "decay ratio undefined for identically zero data");
  const auto phi_hat = forward_ft(phi);
  report.initial_ratio = refined_sup(phi_hat).value / denom;

  for (double t : config.times) {
    SupNorm sup{kNaN, kNaN};
    std::string backend;
    std::string error;
    bool use_quadrature = config.backend == BackendPolicy::Quadrature;
    if (!use_quadrature) {
      const auto guard = wrap_around_guard(phi_hat, t, config.alpha);
      if (guard.ok) {
        sup = refined_sup(evolve_spectral(phi_hat, t, config.alpha));
        backend = "spectral";
      } else if (config.backend == BackendPolicy::Spectral) {
        backend = "guard-failed";
        error = "wrap-around guard: half-width " + std::to_string(guard.min_half_width) + " required";
      } else {
        use_quadrature = true;
      }
    }
    if (use_quadrature) {
      sup = quadrature_sup(phi, t, config.alpha);
      backend = "quadrature";
    }
    report.times.push_back(t);
    report.sup_norms.push_back(sup.value);
    report.argmax_x.push_back(sup.argmax);
    report.ratios.push_back(std::sqrt(1.0 + std::abs(t)) * sup.value / denom);
    report.backends.push_back(backend);
    report.errors.push_back(error);
  }
  return report;
}

std::vector<DecayReport> run_decay(const SuiteConfig& config) {
  config.validate();
  const auto grid = config.grid();
  std::vector<DecayReport> reports(config.samples);
  parallel_for(
      reports.size(),
      [&](std::size_t i) { reports[i] = decay_report(generate_schwartz(config.seed, i, grid, config.band), config, i); },
      config.threads);
  return reports;
}

LateGrowth late_growth(const std::vector<DecayReport>& reports, double early_end, double late_lo, double late_hi) {
  LateGrowth g;
  for (const auto& r : reports) {
    const auto early = r.max_ratio_between(0.0, early_end);
    const auto late = r.max_ratio_between(late_lo, late_hi);
    if (early) g.early_max = std::max(g.early_max, *early);
    if (late) g.late_max = std::max(g.late_max, *late);
    if (early && late && *early > 0.0) g.worst_sample_ratio = std::max(g.worst_sample_ratio, *late / *early);
  }
  g.ratio = g.early_max > 0.0 ? g.late_max / g.early_max : kNaN;
  return g;
}

// ---------------------------------------------------------------------------
// lemma suites

namespace {

bool identically_zero(const SampledFunction& g) {
  return std::all_of(g.values.begin(), g.values.end(), [](const Complex& v) { return v == Complex{}; });
}

double spectral_l2(const SpectralFunction& s) {
  double sum = 0.0;
  for (const auto& v : s.values) sum += std::norm(v);
  return std::sqrt(sum * s.grid.frequency_spacing());
}

double inverse_exponent(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

std::optional<DerivativeRatios> derivative_ratios(const SampledFunction& piece, int k, double s, double base) {
  const double lifted = std::exp2(-s * k) * lp_norm(fractional_derivative(piece, s), 2.0);
  if (lifted == 0.0) return std::nullopt;
  return DerivativeRatios{base / lifted, lifted / base};
}

}  // namespace

PieceAnalyzer::PieceAnalyzer(const SampledFunction& f, const BumpFunction& bump)
    : f_(f), spectrum_(forward_ft(f)), bump_(bump), norms_(norms(f)) {}

PieceRatios PieceAnalyzer::lemma_ratios(int k) const {
  PieceRatios out;
  out.k = k;
  const auto piece_hat = project_spectral(spectrum_, k, bump_);
  const auto piece = inverse_ft(piece_hat);
  const double weighted_sum = norms_.l2 + norms_.weighted;
  const double l2 = lp_norm(piece, 2.0);
  if (!identically_zero(piece)) {
    const double sup = lp_norm(piece, INFINITY);
    const double l1 = lp_norm(piece, 1.0);
    if (l2 > 0.0) out.bern_2_inf = sup / (std::exp2(0.5 * k) * l2);
    if (l1 > 0.0) out.bern_1_inf = sup / (std::exp2(k) * l1);
    if (l2 > 0.0)
      if (const auto d = derivative_ratios(piece, k, 1.0, l2)) {
        out.bern2_lower = d->lower;
        out.bern2_upper = d->upper;
      }
  }
  if (weighted_sum > 0.0) out.lemma1 = std::exp2(k) * spectral_l2(frequency_derivative(piece)) / weighted_sum;
  const double denom = l2 + std::exp2(-0.75 * k) * weighted_sum;
  if (denom > 0.0) {
    double top = 0.0;
    for (const auto& v : piece_hat.values) top = std::max(top, std::abs(v));
    out.lemma2 = top / denom;
  }
  return out;
}

std::vector<std::pair<std::string, std::optional<double>>> PieceAnalyzer::bernstein_ratios(int k) const {
  static const std::vector<double> exponents{1.0, 2.0, 4.0, INFINITY};
  static const std::vector<std::string> labels{"1", "2", "4", "inf"};
  const auto piece = inverse_ft(project_spectral(spectrum_, k, bump_));
  const bool zero = identically_zero(piece);
  std::vector<double> lp(exponents.size(), 0.0);
  if (!zero)
    for (std::size_t i = 0; i < exponents.size(); ++i) lp[i] = lp_norm(piece, exponents[i]);

  std::vector<std::pair<std::string, std::optional<double>>> out;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    for (std::size_t j = i + 1; j < exponents.size(); ++j) {
      std::optional<double> r;
      if (!zero && lp[i] > 0.0) {
        const double scale = std::exp2(k * (inverse_exponent(exponents[i]) - inverse_exponent(exponents[j])));
        r = lp[j] / (scale * lp[i]);
      }
      out.emplace_back("bern(" + labels[i] + "," + labels[j] + ")", r);
    }
  for (double s : {0.5, 1.0, 2.0}) {
    std::optional<DerivativeRatios> d;
    if (!zero && lp[1] > 0.0) d = derivative_ratios(piece, k, s, lp[1]);
    const std::string tag = s == 0.5 ? "0.5" : (s == 1.0 ? "1" : "2");
    out.emplace_back("bern2(s=" + tag + ") lower", d ? std::optional(d->lower) : std::nullopt);
    out.emplace_back("bern2(s=" + tag + ") upper", d ? std::optional(d->upper) : std::nullopt);
  }
  return out;
}

bool SuiteTable::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

namespace {

using RatioList = std::vector<std::pair<std::string, std::optional<double>>>;

SuiteTable tabulate(const std::vector<SampledFunction>& samples, int k_lo, int k_hi, unsigned threads,
                    const std::function<RatioList(const PieceAnalyzer&, int)>& per_k) {
  if (samples.empty()) throw Error(ErrorKind::InvalidParameter, "suite needs at least one sample");
  SuiteTable table;
  int lo = 0, hi = 0;
  try {
    std::tie(lo, hi) = resolved_k_range(samples.front().grid, k_lo, k_hi);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OutOfBand) throw;
    throw Error(ErrorKind::SuiteDegenerate, "no dyadic annulus in the requested range is resolved by the grid");
  }
  table.k_lo = lo;
  table.k_hi = hi;
  for (int k = k_lo; k <= k_hi; ++k)
    if (k < lo || k > hi) table.unresolved.push_back(k);

  std::vector<std::vector<RatioList>> results(samples.size());
  parallel_for(
      samples.size(),
      [&](std::size_t i) {
        const PieceAnalyzer analyzer(samples[i]);
        for (int k = lo; k <= hi; ++k) results[i].push_back(per_k(analyzer, k));
      },
      threads);

  const auto& names = results.front().front();
  for (std::size_t r = 0; r < names.size(); ++r) {
    SuiteRow row;
    row.name = names[r].first;
    std::vector<double> values;
    for (const auto& sample : results)
      for (const auto& list : sample) {
        const auto& v = list[r].second;
        if (v && std::isfinite(*v))
          values.push_back(*v);
        else
          ++row.undefined;
      }
    row.count = values.size();
    const std::size_t total = row.count + row.undefined;
    if (static_cast<double>(row.undefined) > kUndefinedShare * static_cast<double>(total))
      throw Error(ErrorKind::SuiteDegenerate, row.name + ": " + std::to_string(row.undefined) + " of " +
                                                  std::to_string(total) + " ratios undefined");
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      row.max = values.back();
      const std::size_t m = values.size() / 2;
      row.median = values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

RatioList lemma_list(const PieceAnalyzer& a, int k) {
  const auto r = a.lemma_ratios(k);
  return {{"bern(2,inf)", r.bern_2_inf}, {"bern(1,inf)", r.bern_1_inf}, {"bern2 lower", r.bern2_lower},
          {"bern2 upper", r.bern2_upper}, {"lemma1", r.lemma1},         {"lemma2", r.lemma2}};
}

std::vector<SampledFunction> suite_samples(const SuiteConfig& config) {
  config.validate();
  const auto grid = config.grid();
  std::vector<SampledFunction> samples;
  samples.reserve(config.samples);
  for (int i = 0; i < config.samples; ++i) samples.push_back(random_schwartz(config.seed, i, grid));
  return samples;
}

}  // namespace

SuiteTable lemma_table(const std::vector<SampledFunction>& samples, int k_lo, int k_hi, unsigned threads) {
  return tabulate(samples, k_lo, k_hi, threads, lemma_list);
}

SuiteTable bernstein_table(const std::vector<SampledFunction>& samples, int k_lo, int k_hi, unsigned threads) {
  return tabulate(samples, k_lo, k_hi, threads,
                  [](const PieceAnalyzer& a, int k) { return a.bernstein_ratios(k); });
}

SuiteTable run_lemma_suites(const SuiteConfig& config, int k_lo, int k_hi) {
  return lemma_table(suite_samples(config), k_lo, k_hi, config.threads);
}

SuiteTable run_bernstein_suite(const SuiteConfig& config, int k_lo, int k_hi) {
  return bernstein_table(suite_samples(config), k_lo, k_hi, config.threads);
}

void apply_pins(SuiteTable& table, const std::vector<std::pair<std::string, double>>& pins, double tolerance) {
  for (auto& row : table.rows)
    for (const auto& [name, value] : pins)
      if (row.name == name) {
        row.pinned = value;
        row.pass = std::isfinite(row.max) && row.max <= value * (1.0 + tolerance);
      }
}

// ---------------------------------------------------------------------------
// tracing

std::vector<TraceRecord> run_trace(const SuiteConfig& config, double t) {
  config.validate();
  if (std::abs(t) < 1024.0 && !config.allow_empty_band)
    throw Error(ErrorKind::InvalidParameter,
                "the middle frequency band is empty for |t| < 1024; pass --allow-empty-band to trace anyway");
  const auto grid = config.grid();
  std::vector<TraceRecord> records(config.samples);
  parallel_for(
      records.size(),
      [&](std::size_t i) {
        const auto phi = generate_schwartz(config.seed, i, grid, config.band);
        const auto u_hat = evolve_spectral(forward_ft(phi), t, config.alpha);
        const auto sup = refined_sup(u_hat);
        const TraceData data(phi, config.alpha);
        records[i] = TraceRecord{i, sup.argmax, sup.value, trace_terms(data, t, sup.argmax)};
      },
      config.threads);
  return records;
}

TraceSummary summarize(const std::vector<TraceRecord>& records, double t) {
  TraceSummary s;
  s.t = t;
  for (const auto& r : records) {
    const auto& tr = r.trace;
    s.low = std::max(s.low, tr.low.ratio);
    s.near = std::max(s.near, tr.near.ratio);
    s.stationary = std::max(s.stationary, tr.stationary.ratio);
    s.far = std::max(s.far, tr.far.ratio);
    s.high = std::max(s.high, tr.high.ratio);
    s.max_reconstruction_defect = std::max(s.max_reconstruction_defect, tr.reconstruction_defect);
    for (double v : {tr.low.ratio, tr.near.ratio, tr.stationary.ratio, tr.far.ratio, tr.high.ratio})
      s.finite = s.finite && std::isfinite(v);
  }
  return s;
}

}  // namespace lpdecay
