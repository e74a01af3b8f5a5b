#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpdecay {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Uniform grid on [-L, L) with N samples and its dual frequency grid.
///
/// Physical nodes are x_n = -L + n h with h = 2L/N. Frequency nodes are
/// xi_j = pi j / L for j in [-N/2, N/2), stored in increasing order so that
/// index i corresponds to j = i - N/2. N must be a power of two, at least 16.
class GridSpec {
 public:
  GridSpec(double half_width, std::size_t size);

  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return spacing_; }
  double frequency_spacing() const noexcept;
  /// Largest |xi| on the grid, pi N / (2L).
  double nyquist() const noexcept;

  double x(std::size_t n) const noexcept { return -half_width_ + static_cast<double>(n) * spacing_; }
  double xi(std::size_t i) const noexcept;
  /// Index of the zero frequency node.
  std::size_t zero_index() const noexcept { return size_ / 2; }

  std::vector<double> x_nodes() const;
  std::vector<double> xi_nodes() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double half_width_;
  std::size_t size_;
  double spacing_;
};

/// Samples f(x_n) on a GridSpec.
struct SampledFunction {
  SampledFunction(GridSpec grid, ComplexVector values, std::optional<double> band_limit = std::nullopt);

  static SampledFunction from(const GridSpec& grid, const std::function<Complex(double)>& f);
  static SampledFunction zero(const GridSpec& grid);

  GridSpec grid;
  ComplexVector values;
  std::optional<double> band_limit;
  std::vector<std::string> warnings;
};

/// Samples of the Fourier transform at the dual-grid nodes xi_j.
struct SpectralFunction {
  SpectralFunction(GridSpec grid, ComplexVector values);

  static SpectralFunction from(const GridSpec& grid, const std::function<Complex(double)>& f);

  GridSpec grid;
  ComplexVector values;
  std::vector<std::string> warnings;
};

/// f_hat(xi) = \int f(x) e^{-i xi x} dx by the trapezoid rule on the grid.
SpectralFunction forward_ft(const SampledFunction& f);

/// f(x) = (1/2pi) \int f_hat(xi) e^{i x xi} dxi; exact inverse of forward_ft.
SampledFunction inverse_ft(const SpectralFunction& f);

/// Relative mismatch between ||f_hat||^2 and 2 pi ||f||^2, each integrated by
/// the open-interval trapezoid rule on its own grid. Large values flag data that
/// has not decayed at the edge of either domain.
double plancherel_defect(const SampledFunction& f);

/// Relative l2 distance ||a - b|| / ||b|| (returns ||a|| when b is zero).
double relative_l2(std::span<const Complex> a, std::span<const Complex> b);

void require_finite(std::span<const Complex> values, const char* what);

}  // namespace lpdecay
