#include "lpdecay/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "lpdecay/error.hpp"

namespace lpdecay {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::InvalidParameter: return "invalid parameter";
    case ErrorKind::SingularMultiplier: return "singular multiplier";
    case ErrorKind::OutOfBand: return "out of band";
    case ErrorKind::DomainTooSmall: return "domain too small";
    case ErrorKind::AccuracyNotMet: return "accuracy not met";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::SuiteDegenerate: return "suite degenerate";
  }
  return "unknown";
}

GridSpec::GridSpec(double half_width, std::size_t size) : half_width_(half_width), size_(size) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorKind::InvalidParameter, "grid half-width must be positive and finite");
  if (size < 16 || !std::has_single_bit(size))
    throw Error(ErrorKind::InvalidParameter, "grid size must be a power of two >= 16");
  spacing_ = 2.0 * half_width / static_cast<double>(size);
}

double GridSpec::frequency_spacing() const noexcept { return std::numbers::pi / half_width_; }

double GridSpec::nyquist() const noexcept {
  return std::numbers::pi * static_cast<double>(size_) / (2.0 * half_width_);
}

double GridSpec::xi(std::size_t i) const noexcept {
  auto j = static_cast<double>(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(size_ / 2));
  return std::numbers::pi * j / half_width_;
}

std::vector<double> GridSpec::x_nodes() const {
  std::vector<double> out(size_);
  for (std::size_t n = 0; n < size_; ++n) out[n] = x(n);
  return out;
}

std::vector<double> GridSpec::xi_nodes() const {
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = xi(i);
  return out;
}

void require_finite(std::span<const Complex> values, const char* what) {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::InvalidInput, std::string(what) + " contains non-finite values");
}

SampledFunction::SampledFunction(GridSpec g, ComplexVector v, std::optional<double> limit)
    : grid(g), values(std::move(v)), band_limit(limit) {
  if (values.size() != grid.size()) throw Error(ErrorKind::InvalidInput, "sample count does not match grid size");
  if (band_limit && !(*band_limit > 0.0)) throw Error(ErrorKind::InvalidParameter, "band limit must be positive");
}

SampledFunction SampledFunction::from(const GridSpec& grid, const std::function<Complex(double)>& f) {
  ComplexVector v(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) v[n] = f(grid.x(n));
  return SampledFunction(grid, std::move(v));
}

SampledFunction SampledFunction::zero(const GridSpec& grid) { return SampledFunction(grid, ComplexVector(grid.size())); }

SpectralFunction::SpectralFunction(GridSpec g, ComplexVector v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw Error(ErrorKind::InvalidInput, "spectral sample count does not match grid size");
}

SpectralFunction SpectralFunction::from(const GridSpec& grid, const std::function<Complex(double)>& f) {
  ComplexVector v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.xi(i));
  return SpectralFunction(grid, std::move(v));
}

namespace {

// (-1)^j with j = i - N/2; N/2 is even for N >= 16.
inline double parity(std::size_t i) { return (i & 1U) ? -1.0 : 1.0; }

std::optional<std::string> boundary_warning(const SampledFunction& f) {
  const auto n = f.values.size();
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return std::nullopt;
  const auto edge = std::max<std::size_t>(1, n / 20);
  double outer = 0.0;
  for (std::size_t i = 0; i < edge; ++i) {
    outer = std::max(outer, std::abs(f.values[i]));
    outer = std::max(outer, std::abs(f.values[n - 1 - i]));
  }
  if (outer > 1e-14 * peak)
    return "samples do not decay below 1e-14 in the outer 5% of the grid (relative edge level " +
           std::to_string(outer / peak) + ")";
  return std::nullopt;
}

}  // namespace

SpectralFunction forward_ft(const SampledFunction& f) {
  require_finite(f.values, "forward_ft input");
  const auto n = f.grid.size();
  ComplexVector work = f.values;
  detail::fft_inplace(work, -1);
  ComplexVector out(n);
  const double h = f.grid.spacing();
  for (std::size_t i = 0; i < n; ++i) out[i] = h * parity(i) * work[(i + n / 2) % n];
  SpectralFunction result(f.grid, std::move(out));
  if (auto w = boundary_warning(f)) result.warnings.push_back(*w);
  return result;
}

SampledFunction inverse_ft(const SpectralFunction& f) {
  require_finite(f.values, "inverse_ft input");
  const auto n = f.grid.size();
  ComplexVector work(n);
  for (std::size_t i = 0; i < n; ++i) work[(i + n / 2) % n] = parity(i) * f.values[i];
  detail::fft_inplace(work, +1);
  const double scale = 1.0 / (static_cast<double>(n) * f.grid.spacing());
  for (auto& v : work) v *= scale;
  return SampledFunction(f.grid, std::move(work));
}

namespace {

double open_trapezoid_sq(std::span<const Complex> v, double step) {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  sum -= 0.5 * (std::norm(v.front()) + std::norm(v.back()));
  return step * sum;
}

}  // namespace

double plancherel_defect(const SampledFunction& f) {
  const double phys = open_trapezoid_sq(f.values, f.grid.spacing());
  if (phys == 0.0) {
    require_finite(f.values, "plancherel_defect input");
    return 0.0;
  }
  const auto spec = forward_ft(f);
  const double freq = open_trapezoid_sq(spec.values, f.grid.frequency_spacing());
  const double target = 2.0 * std::numbers::pi * phys;
  return std::abs(freq - target) / target;
}

double relative_l2(std::span<const Complex> a, std::span<const Complex> b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace lpdecay
