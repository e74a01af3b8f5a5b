#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lpdecay/grid.hpp"
#include "lpdecay/norms.hpp"
#include "lpdecay/proof_tracer.hpp"
#include "lpdecay/quadrature.hpp"
#include "lpdecay/schwartz.hpp"

namespace lpdecay {

enum class BackendPolicy { Auto, Spectral, Quadrature };

std::string to_string(BackendPolicy policy);
BackendPolicy parse_backend(const std::string& text);

/// {2^lo, ..., 2^hi}.
std::vector<double> dyadic_times(int lo_exp, int hi_exp);

struct SuiteConfig {
  std::uint64_t seed = 0;
  int samples = 20;
  double alpha = 0.5;
  std::vector<double> times = dyadic_times(0, 10);
  double half_width = 4096.0;
  std::size_t grid_n = std::size_t{1} << 17;
  Band band{};
  BackendPolicy backend = BackendPolicy::Auto;
  std::string out;
  bool allow_empty_band = false;
  unsigned threads = 0;  // 0: hardware concurrency

  GridSpec grid() const { return GridSpec(half_width, grid_n); }
  /// Throws InvalidParameter on a malformed configuration.
  void validate() const;
};

/// Defaults of the individual commands.
SuiteConfig decay_defaults();
SuiteConfig lemma_defaults();
SuiteConfig trace_defaults();

/// Runs body(0..n-1) on a small thread pool. Results must be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

/// |f| maximum over the real line of a band-limited periodic grid function,
/// refined off-grid by golden-section search on the trigonometric interpolant
/// around the `candidates` largest local grid maxima.
SupNorm refined_sup(const SpectralFunction& f_hat, int candidates = 3);

struct QuadratureSupOptions {
  int candidates = 3;
  double step = 0.0;  // coarse spacing; 0 picks pi / (2 * outer radius)
  /// The scan covers where |phi| exceeds this fraction of its peak, widened by the travel distance.
  double extent_threshold = 1e-3;
  QuadratureOptions scan{1e-6, std::numbers::pi};
  QuadratureOptions quadrature{};
};

/// Sup of |u(t, .)| by quadrature: coarse scan of the causal interval then
/// golden-section refinement around the largest candidates.
SupNorm quadrature_sup(const SampledFunction& phi, double t, double alpha, const QuadratureSupOptions& options = {});

/// sup |phi| / ||phi||_{H^1} <= 1/sqrt(2) under the norm conventions used here.
inline constexpr double kEmbeddingConstant = 0.70710678118654752;

struct DecayReport {
  double alpha = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  NormBundle norms;
  double initial_ratio = 0.0;  // R(0)
  std::vector<double> times;
  std::vector<double> sup_norms;
  std::vector<double> argmax_x;
  std::vector<double> ratios;
  std::vector<std::string> backends;  // "spectral", "quadrature" or "guard-failed"
  std::vector<std::string> errors;    // empty unless the time point failed

  double max_ratio() const;
  /// max over times in [lo, hi] (empty if none finite there).
  std::optional<double> max_ratio_between(double lo, double hi) const;
};

/// R(t) = (1 + |t|)^{1/2} sup|u(t)| / (||phi||_{H^1} + ||x phi'||_{L^2}).
DecayReport decay_report(const SampledFunction& phi, const SuiteConfig& config, std::uint64_t sample = 0);
std::vector<DecayReport> run_decay(const SuiteConfig& config);

struct LateGrowth {
  double early_max = 0.0;  // max over samples and t <= 2^6
  double late_max = 0.0;   // max over samples and 2^9 <= t <= 2^10
  double ratio = 0.0;
  double worst_sample_ratio = 0.0;
};
LateGrowth late_growth(const std::vector<DecayReport>& reports, double early_end = 64.0, double late_lo = 512.0,
                       double late_hi = 1024.0);

// ---------------------------------------------------------------------------
// Lemma and Bernstein suites

/// All per-k ratios of one sample. Values are empty where undefined.
struct PieceRatios {
  int k = 0;
  std::optional<double> bern_2_inf;
  std::optional<double> bern_1_inf;
  std::optional<double> bern2_lower;  // s = 1, p = 2
  std::optional<double> bern2_upper;
  std::optional<double> lemma1;
  std::optional<double> lemma2;  // s = 3/4
};

/// Cached spectral analysis of one sample. Matches bernstein_ratio,
/// bernstein_derivative_ratio, lemma1_ratio and lemma2_ratio for each k.
class PieceAnalyzer {
 public:
  explicit PieceAnalyzer(const SampledFunction& f, const BumpFunction& bump = BumpFunction{});

  PieceRatios lemma_ratios(int k) const;
  /// All Bernstein rows for one k: "bern(p,q)" for p < q and bern2 bounds for s in {1/2, 1, 2}.
  std::vector<std::pair<std::string, std::optional<double>>> bernstein_ratios(int k) const;

 private:
  SampledFunction f_;
  SpectralFunction spectrum_;
  BumpFunction bump_;
  NormBundle norms_;
};

struct SuiteRow {
  std::string name;
  double max = 0.0;
  double median = 0.0;
  std::size_t count = 0;
  std::size_t undefined = 0;
  std::optional<double> pinned;
  bool pass = true;
};

struct SuiteTable {
  int k_lo = 0;
  int k_hi = 0;
  std::vector<int> unresolved;  // requested k with no resolved grid annulus
  std::vector<SuiteRow> rows;
  bool pass() const;
};

/// Undefined ratios above this share of cases make a suite degenerate.
inline constexpr double kUndefinedShare = 0.05;

/// Suites over the unfiltered mixtures of the config (lemma data is not band-passed).
SuiteTable run_lemma_suites(const SuiteConfig& config, int k_lo = -8, int k_hi = 8);
SuiteTable run_bernstein_suite(const SuiteConfig& config, int k_lo = -8, int k_hi = 8);

/// Same tables over explicit samples sharing one grid.
SuiteTable lemma_table(const std::vector<SampledFunction>& samples, int k_lo = -8, int k_hi = 8,
                       unsigned threads = 0);
SuiteTable bernstein_table(const std::vector<SampledFunction>& samples, int k_lo = -8, int k_hi = 8,
                           unsigned threads = 0);

/// Fills pinned/pass for every row named in `pins` (measured <= pinned * (1 + tolerance)).
void apply_pins(SuiteTable& table, const std::vector<std::pair<std::string, double>>& pins, double tolerance);

// ---------------------------------------------------------------------------
// Proof tracing

struct TraceRecord {
  std::uint64_t sample = 0;
  double x = 0.0;  // location of sup |u(t, .)|
  double sup_norm = 0.0;
  ProofTrace trace;
};

/// Traces every sample of the suite at time t, at the sup-norm argmax.
std::vector<TraceRecord> run_trace(const SuiteConfig& config, double t);

struct TraceSummary {
  double t = 0.0;
  double low = 0.0;  // max ratios over the suite
  double near = 0.0;
  double stationary = 0.0;
  double far = 0.0;
  double high = 0.0;
  double max_reconstruction_defect = 0.0;
  bool finite = true;
};
TraceSummary summarize(const std::vector<TraceRecord>& records, double t);

}  // namespace lpdecay
