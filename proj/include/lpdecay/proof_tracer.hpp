#pragma once

#include <optional>
#include <vector>

#include "lpdecay/grid.hpp"
#include "lpdecay/littlewood_paley.hpp"
#include "lpdecay/norms.hpp"
#include "lpdecay/quadrature.hpp"

namespace lpdecay {

/// Absolute quadrature floor of the tracer, relative to \int |phi_hat|.
inline constexpr double kTraceAbsTolerance = 1e-14;

/// Margin used by the alpha = 1/2 index sets (the "16" in 2^{k/2} <= |t/x| / 16).
inline constexpr double kHalfWaveMargin = 16.0;

/// lambda(t) = 2^{10} / (1 + |t|) and Lambda(t) = (1 + |t|) / 2^{10}.
double low_threshold(double t);
double high_threshold(double t);

/// Position of 2^{k(1-alpha)} relative to |t/x| with margin M (closed inequalities).
struct RegimeMembership {
  bool non_stationary_low = false;   // 2^{k(1-alpha)} <= |t/x| / M
  bool stationary = false;           // |t/x| / M <= 2^{k(1-alpha)} <= M |t/x|
  bool non_stationary_high = false;  // 2^{k(1-alpha)} >= M |t/x|
};

/// Margin actually used: the fixed 16 at alpha = 1/2, else `margin`.
double effective_margin(double alpha, double margin);

RegimeMembership classify_frequency(int k, double t, double x, double alpha = 0.5, double margin = kHalfWaveMargin);

struct BandPartition {
  double t = 0.0;
  double x = 0.0;
  double alpha = 0.5;
  double margin = kHalfWaveMargin;
  double lambda_t = 0.0;
  double Lambda_t = 0.0;
  bool x_is_zero = false;
  int k_lo = 0;  // window of dyadic indices considered
  int k_hi = 0;
  std::vector<int> low;     // 2^k <= lambda(t)
  std::vector<int> middle;  // lambda(t) <= 2^k <= Lambda(t)
  std::vector<int> high;    // 2^k >= Lambda(t)
  std::vector<int> near;    // I_1 (or I'_1)
  std::vector<int> stationary;  // I_2 (or I'_2)
  std::vector<int> far;     // I_3 (or I'_3)
  std::vector<int> shared;  // indices that satisfy two closed inequalities at once

  bool in(const std::vector<int>& set, int k) const;
};

/// Throws InvalidParameter for t = 0. For alpha = 1/2 the margin is fixed at 16.
BandPartition build_partition(double t, double x, double alpha = 0.5, double margin = kHalfWaveMargin,
                              int k_lo = -40, int k_hi = 40);

struct KernelBound {
  double minimum = 0.0;          // min over supp psi_k of |x/t + Phi'(xi)|
  double endpoint_minimum = 0.0; // same, over the four annulus endpoints only
  double ratio = 0.0;            // minimum / 2^{-k(1-alpha)}
};

/// Requires k in the non-stationary regimes (I_1 / I_3 shape) for (t, x).
KernelBound kernel_lower_bound(int k, double t, double x, double alpha = 0.5, double margin = kHalfWaveMargin);

struct Q0Estimate {
  double infimum = 0.0;  // inf |Q'| over supp psi_k intersected with xi0 + supp psi_l
  double ratio = 0.0;    // infimum / (|t| 2^{l - (2-alpha) k})
  std::vector<Interval> region;
};

/// Empty when the intersection is empty. Requires k in the stationary regime
/// and an existing stationary point.
std::optional<Q0Estimate> q0_estimate(int k, int l, double t, double x, double alpha = 0.5,
                                      double margin = kHalfWaveMargin);

/// Cached spectral data of phi shared by the tracing operations.
class TraceData {
 public:
  TraceData(const SampledFunction& phi, double alpha, const BumpFunction& bump = BumpFunction{});

  const SampledFunction& phi() const noexcept { return phi_; }
  const SpectralFunction& spectrum() const noexcept { return spectrum_; }
  const SpectralInterpolant& interpolant() const noexcept { return interpolant_; }
  const SpectralInterpolant& derivative_interpolant() const noexcept { return derivative_; }
  const BumpFunction& bump() const noexcept { return bump_; }
  double alpha() const noexcept { return alpha_; }
  /// Sobolev exponent s = (2 - alpha) / 2 used in the stationary estimate.
  double stationary_exponent() const noexcept { return (2.0 - alpha_) / 2.0; }

  double l2() const noexcept { return norms_.l2; }
  double h1() const noexcept { return norms_.h1; }
  double weighted() const noexcept { return norms_.weighted; }
  double h_stationary() const noexcept { return h_stationary_; }
  double piece_l2(int k) const;

  /// Smallest and largest occupied |xi| of phi_hat.
  double inner_radius() const noexcept { return inner_radius_; }
  double outer_radius() const noexcept { return outer_radius_; }
  /// Occupied sign branches of phi_hat.
  const std::vector<Interval>& support() const noexcept { return support_; }
  /// \int |phi_hat| dxi
  double spectral_l1() const noexcept { return spectral_l1_; }

  /// psi_k(xi) * phi_hat(xi)
  Complex piece_amplitude(int k, double xi) const;

 private:
  SampledFunction phi_;
  SpectralFunction spectrum_;
  SpectralInterpolant interpolant_;
  SpectralInterpolant derivative_;
  BumpFunction bump_;
  double alpha_;
  NormBundle norms_;
  double h_stationary_ = 0.0;
  double inner_radius_ = 0.0;
  double outer_radius_ = 0.0;
  std::vector<Interval> support_;
  double spectral_l1_ = 0.0;
};

struct AnnulusPiece {
  int l = 0;
  Complex value{};
  double magnitude = 0.0;
  std::optional<Q0Estimate> q0;
};

struct AnnulusDecomposition {
  int k = 0;
  int l0 = 0;
  double s = 0.0;
  double xi0 = 0.0;
  Complex center_value{};
  double center_magnitude = 0.0;
  /// center magnitude / (2^{l0} ||P_k phi||_2 + 2^{l0 - s k}(||phi||_2 + ||x phi'||_2))
  double center_bound_ratio = 0.0;
  std::vector<AnnulusPiece> pieces;
  Complex undecomposed{};
  double magnitude_sum = 0.0;
  double equality_defect = 0.0;  // |center + sum pieces - undecomposed|
};

/// Requires k in the stationary regime and an existing stationary point.
AnnulusDecomposition annulus_decomposition(const TraceData& data, int k, double t, double x,
                                           const QuadratureOptions& options = {});
AnnulusDecomposition annulus_decomposition(const SampledFunction& phi, int k, double t, double x, double alpha = 0.5);

struct PieceTrace {
  int k = 0;
  bool in_low = false;
  bool in_middle = false;
  bool in_high = false;
  bool in_near = false;
  bool in_stationary = false;
  bool in_far = false;
  Complex value{};
  double magnitude = 0.0;
  /// Integration-by-parts bound (\int |d(psi_k phi_hat)| / |Q'| + \int |Q''| |psi_k phi_hat| / |Q'|^2) / 2pi.
  std::optional<double> ibp_first;
  std::optional<double> ibp_second;
  std::optional<KernelBound> kernel;
  std::optional<AnnulusDecomposition> annulus;
};

struct TermBound {
  double magnitude = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct ProofTrace {
  BandPartition partition;
  double t = 0.0;
  double x = 0.0;
  double alpha = 0.5;
  Complex u{};               // direct quadrature of the full solution at (t, x)
  Complex reconstruction{};  // sum of all pieces and the low remainder
  double reconstruction_defect = 0.0;
  double low_remainder = 0.0;
  std::vector<PieceTrace> pieces;
  TermBound low;        // (A): / ((1+|t|)^{-1/2} ||phi||_2)
  TermBound near;       // (B)_1
  TermBound stationary; // (B)_2
  TermBound far;        // (B)_3
  TermBound high;       // (C): / ((1+|t|)^{-1/2} ||phi||_{H^1})
  double total_magnitude = 0.0;
};

/// Bound used for (B)_1 and (B)_3: |t|^{-1} log(1+|t|) at alpha = 1/2 and
/// |t|^{-1/2-alpha} otherwise, times (||phi||_2 + ||x phi'||_2).
double non_stationary_rate(double t, double alpha);
/// (|t|^{-1/2} + |t|^{(2-3 alpha)/4 - 3/4}).
double stationary_rate(double t, double alpha);

ProofTrace trace_terms(const TraceData& data, double t, double x, bool with_annuli = true,
                       const QuadratureOptions& options = {});
ProofTrace trace_terms(const SampledFunction& phi, double t, double x, double alpha = 0.5);

}  // namespace lpdecay
