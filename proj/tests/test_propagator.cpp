#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lpdecay/error.hpp"
#include "lpdecay/norms.hpp"
#include "lpdecay/propagator.hpp"
#include "lpdecay/schwartz.hpp"
#include "oracles.hpp"

using namespace lpdecay;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi = std::numbers::pi;

// Root of x + t alpha |xi|^{alpha-1} sign(xi) by bisection on log|xi|.
double bisect_root(double t, double x, double alpha) {
  const double sign = (x * t < 0.0) ? 1.0 : -1.0;
  auto g = [&](double e) { return std::abs(x) - std::abs(t) * alpha * std::exp((alpha - 1.0) * e); };
  double lo = -200.0, hi = 200.0;  // g increasing in e
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return sign * std::exp(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("phase derivatives match finite differences") {
  for (double alpha : {0.35, 0.5, 0.8}) {
    PhaseSpec q{alpha, 3.7, -1.3};
    for (double xi : {-9.0, -0.7, 0.4, 2.5, 30.0}) {
      const double h = 1e-6 * std::abs(xi);
      CHECK_THAT(q.dq(xi), WithinRel((q.q(xi + h) - q.q(xi - h)) / (2 * h), 1e-7));
      CHECK_THAT(q.ddq(xi), WithinRel((q.dq(xi + h) - q.dq(xi - h)) / (2 * h), 1e-6));
    }
  }
}

TEST_CASE("spectral propagator identity, unitarity and group law") {
  GridSpec g(4096.0, 1 << 17);
  const Band band{0.25, 32.0};
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> e(0, 9);
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto phi = generate_schwartz(3, i, g, band);
    auto same = evolve_spectral(phi, 0.0);
    CHECK(relative_l2(same.values, phi.values) == 0.0);
    const double t = std::ldexp(1.0, e(rng)), s = std::ldexp(1.0, e(rng)) / 2.0;
    auto u = evolve_spectral(phi, t);
    CHECK_THAT(lp_norm(u, 2.0), WithinRel(lp_norm(phi, 2.0), 1e-12));
    auto ab = evolve_spectral(evolve_spectral(phi, s), t - s);
    CHECK(relative_l2(ab.values, u.values) < 1e-12);
  }
}

TEST_CASE("wrap-around guard") {
  GridSpec g(64.0, 4096);
  auto phi = generate_schwartz(0, 0, g, Band{0.5, 8.0});
  const auto hat = forward_ft(phi);
  auto guard = wrap_around_guard(hat, 1024.0, 0.5);
  CHECK_FALSE(guard.ok);
  try {
    evolve_spectral(phi, 1024.0);
    FAIL("expected DomainTooSmall");
  } catch (const DomainTooSmallError& e) {
    CHECK(e.kind() == ErrorKind::DomainTooSmall);
    CHECK_THAT(e.min_half_width(), WithinRel(guard.min_half_width, 1e-15));
    CHECK(e.min_half_width() > 64.0);
  }
  CHECK(wrap_around_guard(hat, 1.0, 0.5).ok);
}

TEST_CASE("spectral and quadrature propagators agree") {
  GridSpec g(512.0, 1 << 14);
  for (std::uint64_t i = 0; i < 3; ++i) {
    auto phi = generate_schwartz(4, i, g, Band{0.5, 8.0});
    auto u = evolve_spectral(phi, 20.0);
    std::vector<double> xs;
    std::vector<Complex> ref;
    for (int j = 0; j < 50; ++j) {
      const std::size_t n = g.size() / 2 - 1600 + 64 * j;
      xs.push_back(g.x(n));
      ref.push_back(u.values[n]);
    }
    auto q = evolve_quadrature(forward_ft(phi), 20.0, xs);
    for (std::size_t j = 0; j < xs.size(); ++j) CHECK(std::abs(q.values[j] - ref[j]) < 1e-6);
  }
}

TEST_CASE("quadrature at t = 0 reproduces the data") {
  GridSpec g(40.0, 4096);
  auto phi = SampledFunction::from(g, [](double x) { return std::exp(Complex(-x * x, 2.0 * x)); });
  std::vector<double> xs{-1.5, -0.25, 0.0, 0.6, 2.0};
  auto q = evolve_quadrature(forward_ft(phi), 0.0, xs);
  for (std::size_t j = 0; j < xs.size(); ++j)
    CHECK(std::abs(q.values[j] - std::exp(Complex(-xs[j] * xs[j], 2.0 * xs[j]))) < 1e-10);
}

TEST_CASE("gaussian ring at the origin") {
  GridSpec g(256.0, 1 << 14);
  const Band band{1.0, 8.0};
  auto ring = gaussian_ring(g, 4.0, 0.5, band);
  auto amp = [&](double xi) {
    const double d = std::abs(xi) - 4.0;
    return Complex(std::exp(-d * d / 0.5) * band_window(band, xi));
  };
  const double t = 100.0;
  auto integrand = [&](double xi) { return std::polar(1.0, t * std::sqrt(std::abs(xi))) * amp(xi); };
  const Complex ref =
      (oracle::riemann(integrand, -8.0, -1.0, 1 << 20) + oracle::riemann(integrand, 1.0, 8.0, 1 << 20)) / (2.0 * kPi);
  auto u = evolve_spectral(ring, t);
  CHECK(std::abs(u.values[g.zero_index()] - ref) < 1e-7);
  const std::vector<double> x0{0.0};
  CHECK(std::abs(evolve_quadrature(forward_ft(ring), t, x0).values[0] - ref) < 1e-7);
  const std::vector<Interval> support{{-8.0, -1.0}, {1.0, 8.0}};
  CHECK(std::abs(evolve_quadrature_at(amp, support, t, 0.0, 0.5) - ref) < 1e-10);
}

TEST_CASE("sup of the evolved data on a finer quadrature grid") {
  GridSpec g(512.0, 1 << 14);
  auto phi = generate_schwartz(6, 0, g, Band{0.5, 8.0});
  auto u = evolve_spectral(phi, 50.0);
  const auto s = sup_norm(u);
  std::vector<double> xs;
  for (int j = -50; j <= 50; ++j) xs.push_back(s.argmax + j * g.spacing() / 10.0);
  auto q = evolve_quadrature(forward_ft(phi), 50.0, xs);
  double fine = 0.0;
  for (const auto& v : q.values) fine = std::max(fine, std::abs(v));
  CHECK_THAT(s.value, WithinRel(fine, 1e-4));
}

TEST_CASE("quadrature errors") {
  const std::vector<Interval> support{{1.0, 200.0}};
  auto amp = [](double xi) { return Complex(std::exp(-xi)); };
  QuadratureOptions tiny;
  tiny.max_panels = 4;
  try {
    oscillatory_integral(amp, support, PhaseSpec{0.5, 1000.0, 3.0}, tiny);
    FAIL("expected AccuracyNotMet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AccuracyNotMet);
  }
  const std::vector<Interval> straddle{{-1.0, 1.0}};
  try {
    oscillatory_integral(amp, straddle, PhaseSpec{0.5, 1.0, 0.0});
    FAIL("expected Precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  GridSpec g(40.0, 4096);
  auto gauss = SampledFunction::from(g, [](double x) { return Complex(std::exp(-x * x)); });
  const std::vector<double> xs{0.0};
  try {
    evolve_quadrature(forward_ft(gauss), 1.0, xs);
    FAIL("expected Precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("oscillatory integral against a closed form") {
  // \int_0^1 e^{i (x xi)} dxi with t = 0
  const std::vector<Interval> support{{0.0, 1.0}};
  for (double x : {0.5, 40.0, 900.0}) {
    auto r = oscillatory_integral([](double) { return Complex(1.0); }, support, PhaseSpec{0.5, 0.0, x});
    const Complex exact = (std::polar(1.0, x) - 1.0) / Complex(0.0, x);
    CHECK(std::abs(r.value - exact) < 1e-13);
  }
}

TEST_CASE("stationary points") {
  CHECK_THAT(*stationary_point(8.0, -1.0), WithinRel(16.0, 1e-15));
  CHECK_THAT(*stationary_point(8.0, -2.0), WithinRel(4.0, 1e-15));
  CHECK_THAT(*stationary_point(8.0, 2.0), WithinRel(-4.0, 1e-15));
  CHECK_THAT(*stationary_point(1.0, -0.2, 0.4), WithinRel(bisect_root(1.0, -0.2, 0.4), 1e-12));
  CHECK(!stationary_point(0.0, 1.0));
  CHECK(!stationary_point(1.0, 0.0));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.3, 0.7);
  for (int i = 0; i < 1000; ++i) {
    const double t = std::ldexp(u(rng), 10), x = std::ldexp(u(rng), 6), alpha = a(rng);
    auto xi0 = stationary_point(t, x, alpha);
    REQUIRE(xi0);
    PhaseSpec q{alpha, t, x};
    // |Q'| against the size of t Phi' at the root
    CHECK(std::abs(q.dq(*xi0)) <= 1e-12 * std::abs(x) * 4.0);
    CHECK_THAT(*xi0, WithinRel(bisect_root(t, x, alpha), 1e-10));
  }
}

TEST_CASE("second time difference reproduces |D|") {
  GridSpec g(4096.0, 1 << 17);
  auto phi = generate_schwartz(0, 0, g, Band{0.25, 8.0});
  auto r1 = factorization_residual(phi, 10.0, 1e-3);
  auto r2 = factorization_residual(phi, 10.0, 5e-4);
  REQUIRE(r1);
  REQUIRE(r2);
  CHECK(r1->residual < 1e-6);
  CHECK(r1->residual <= 2.0 * r1->truncation_scale);
  CHECK_THAT(r1->residual / r2->residual, WithinAbs(4.0, 0.8));
  CHECK(!factorization_residual(SampledFunction::zero(g), 1.0));
  CHECK_THROWS_AS(factorization_residual(phi, 1.0, 0.0), Error);
}
