#include "lpdecay/schwartz.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "lpdecay/error.hpp"
#include "lpdecay/littlewood_paley.hpp"

namespace lpdecay {

Complex GaussianAtom::operator()(double x) const {
  const double d = x - x0;
  return c * std::exp(Complex(-a * d * d, b * x));
}

Complex GaussianAtom::transform(double xi) const {
  // \int e^{-a(x-x0)^2 + i b x - i xi x} dx = sqrt(pi/a) e^{-(xi-b)^2/(4a)} e^{-i (xi-b) x0}
  const double shift = xi - b;
  return c * std::sqrt(std::numbers::pi / a) * std::exp(Complex(-shift * shift / (4.0 * a), -shift * x0));
}

Complex GaussianMixture::operator()(double x) const {
  Complex sum{};
  for (const auto& atom : atoms) sum += atom(x);
  return sum;
}

Complex GaussianMixture::transform(double xi) const {
  Complex sum{};
  for (const auto& atom : atoms) sum += atom.transform(xi);
  return sum;
}

GaussianMixture draw_mixture(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  GaussianMixture mix;
  const auto count = 1 + rng() % 4;
  for (std::uint64_t i = 0; i < count; ++i) {
    GaussianAtom atom;
    atom.a = uniform(0.2, 5.0);
    atom.x0 = uniform(-10.0, 10.0);
    atom.b = uniform(-20.0, 20.0);
    atom.c = std::polar(uniform(0.25, 1.0), uniform(0.0, 2.0 * std::numbers::pi));
    mix.atoms.push_back(atom);
  }
  return mix;
}

SampledFunction random_schwartz(std::uint64_t seed, std::uint64_t index, const GridSpec& grid) {
  const auto mix = draw_mixture(seed, index);
  return SampledFunction::from(grid, [&mix](double x) { return mix(x); });
}

double band_window(const Band& band, double xi) {
  static const BumpFunction glue{};
  const double a = std::abs(xi);
  if (a <= band.lo || a >= band.hi) return 0.0;
  const double half = 0.5 * band.hi;
  return glue.step((a - band.lo) / band.lo) * (1.0 - glue.step((a - half) / half));
}

namespace {

void check_band(const Band& band, const GridSpec& grid) {
  if (!(band.lo > 0.0 && band.hi > band.lo))
    throw Error(ErrorKind::InvalidParameter, "band must satisfy 0 < lo < hi");
  if (!(band.hi < grid.nyquist()))
    throw Error(ErrorKind::InvalidParameter, "band upper edge " + std::to_string(band.hi) +
                                                 " must lie below the grid Nyquist frequency " +
                                                 std::to_string(grid.nyquist()));
}

}  // namespace

SampledFunction band_pass(const SampledFunction& f, const Band& band) {
  check_band(band, f.grid);
  auto spec = forward_ft(f);
  for (std::size_t i = 0; i < spec.values.size(); ++i) spec.values[i] *= band_window(band, spec.grid.xi(i));
  auto out = inverse_ft(spec);
  out.band_limit = band.hi;
  return out;
}

SampledFunction generate_schwartz(std::uint64_t seed, std::uint64_t index, const GridSpec& grid, const Band& band) {
  check_band(band, grid);
  return band_pass(random_schwartz(seed, index, grid), band);
}

SampledFunction gaussian_ring(const GridSpec& grid, double center, double width, const Band& band) {
  check_band(band, grid);
  auto spec = SpectralFunction::from(grid, [&](double xi) {
    const double d = std::abs(xi) - center;
    return Complex(band_window(band, xi) * std::exp(-d * d / (2.0 * width * width)), 0.0);
  });
  auto out = inverse_ft(spec);
  out.band_limit = band.hi;
  return out;
}

}  // namespace lpdecay
