#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "lpdecay/error.hpp"
#include "lpdecay/proof_tracer.hpp"
#include "lpdecay/propagator.hpp"
#include "lpdecay/schwartz.hpp"
#include "oracles.hpp"

using namespace lpdecay;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

// Brute-force minimum of f over n equispaced points of each interval.
template <class F>
double brute_min(const std::vector<Interval>& ivs, F&& f, int n = 1000000) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : ivs)
    for (int j = 0; j < n; ++j) best = std::min(best, f(iv.lo + iv.width() * j / (n - 1)));
  return best;
}

const Band kRingBand{1.0, 8.0};

SampledFunction ring() { return gaussian_ring(GridSpec(256.0, 1 << 14), 4.0, 0.5, kRingBand); }

}  // namespace

TEST_CASE("frequency thresholds and the middle band") {
  CHECK_THAT(low_threshold(2048.0), WithinRel(1024.0 / 2049.0, 1e-15));
  CHECK_THAT(high_threshold(-2048.0), WithinRel(2049.0 / 1024.0, 1e-15));
  auto p = build_partition(2048.0, 5.0);
  CHECK(p.middle == std::vector<int>{-1, 0, 1});
  CHECK(build_partition(1.0, 5.0).middle.empty());
  CHECK(kind_of([] { build_partition(0.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { build_partition(1.0, 1.0, 0.5, 0.5); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("stationary set at |t/x| = 1") {
  int count = 0;
  for (int k = -40; k <= 40; ++k)
    if (classify_frequency(k, 2048.0, -2048.0).stationary) ++count;
  CHECK(count == 17);
  auto p = build_partition(2048.0, -2048.0);
  CHECK(p.stationary == p.middle);
}

TEST_CASE("index sets cover every index") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double t = std::ldexp(u(rng), 14), x = std::ldexp(u(rng), 12);
    const double alpha = trial % 2 ? 0.5 : 0.4;
    auto p = build_partition(t, x, alpha, 8.0, -40, 40);
    int stationary = 0;
    for (int k = -40; k <= 40; ++k) {
      CHECK((p.in(p.low, k) || p.in(p.middle, k) || p.in(p.high, k)));
      if (p.in(p.middle, k)) CHECK((p.in(p.near, k) || p.in(p.stationary, k) || p.in(p.far, k)));
      const auto r = classify_frequency(k, t, x, alpha, 8.0);
      if (r.stationary) ++stationary;
    }
    // 2^{k(1-alpha)} ranges over a factor M^2 inside the stationary set
    const double m = effective_margin(alpha, 8.0);
    CHECK(stationary <= static_cast<int>(std::floor(2.0 * std::log2(m) / (1.0 - alpha))) + 1);
    if (alpha == 0.5) CHECK(stationary <= 17);
  }
}

TEST_CASE("boundary indices are shared") {
  // |t/x| / 16 = 1 = 2^{0/2}
  auto p = build_partition(2048.0, 128.0);
  CHECK(p.in(p.near, 0));
  CHECK(p.in(p.stationary, 0));
  CHECK(p.in(p.shared, 0));
  auto z = build_partition(2048.0, 0.0);
  CHECK(z.x_is_zero);
  CHECK(z.stationary.empty());
  CHECK(z.near == z.middle);
}

TEST_CASE("kernel lower bound against brute force") {
  const double t = 4096.0, x = -64.0;
  for (int k : {0, 2, 4, 20, 22}) {
    auto kb = kernel_lower_bound(k, t, x);
    const double in = std::ldexp(1.0, k - 1), out = std::ldexp(1.0, k + 1);
    const double ref = brute_min({{-out, -in}, {in, out}},
                                 [&](double xi) { return std::abs(x / t + dispersion_d1(0.5, xi)); });
    CHECK_THAT(kb.minimum, WithinRel(ref, 1e-6));
    CHECK(kb.minimum <= kb.endpoint_minimum);
    CHECK(kb.ratio > 0.0);
  }
  CHECK(kind_of([] { kernel_lower_bound(10, 4096.0, -64.0); }) == ErrorKind::Precondition);
}

TEST_CASE("q0 estimate against brute force") {
  const double t = 4096.0, x = -64.0;
  const int k = 10;
  const PhaseSpec q{0.5, t, x};
  for (int l = 0; l <= 10; ++l) {
    auto est = q0_estimate(k, l, t, x);
    REQUIRE(est);
    const double ref = brute_min(est->region, [&](double xi) { return std::abs(q.dq(xi)); });
    CHECK_THAT(est->infimum, WithinRel(ref, 0.01));
    CHECK(est->ratio > 0.0);
  }
  CHECK(!q0_estimate(k, 13, t, x));
  CHECK(kind_of([] { q0_estimate(2, 3, 4096.0, -64.0); }) == ErrorKind::Precondition);
  CHECK(kind_of([] { q0_estimate(2, 3, 4096.0, 0.0); }) == ErrorKind::Precondition);
}

TEST_CASE("q0 infimum grows with the ring index") {
  const double t = 4096.0, x = -64.0;
  double prev = 0.0;
  for (int l = -4; l <= 10; ++l) {
    auto est = q0_estimate(10, l, t, x);
    REQUIRE(est);
    CHECK(est->infimum >= prev);
    prev = est->infimum;
  }
}

TEST_CASE("annulus decomposition telescopes") {
  const auto phi = ring();
  const TraceData data(phi, 0.5);
  // xi0 = (t/x)^2 / 4 = 4 sits on the ring
  for (int k : {1, 2, 3}) {
    auto d = annulus_decomposition(data, k, 2048.0, -512.0);
    CHECK_THAT(d.xi0, WithinRel(4.0, 1e-14));
    CHECK(d.equality_defect < 1e-8);
    CHECK(d.magnitude_sum >= std::abs(d.undecomposed) * (1.0 - 1e-9));
    CHECK(std::isfinite(d.center_bound_ratio));
    for (const auto& p : d.pieces)
      if (p.magnitude > 0.0) CHECK(p.q0);
  }
  CHECK(kind_of([&] { annulus_decomposition(data, 2, 2048.0, -2.0); }) == ErrorKind::Precondition);
}

TEST_CASE("trace reconstructs the solution") {
  const auto phi = ring();
  for (double x : {-512.0, -8.0, 300.0}) {
    auto tr = trace_terms(phi, 2048.0, x);
    CHECK(tr.reconstruction_defect < 1e-8);
    // u against a direct quadrature of the full solution
    const std::vector<double> xs{x};
    const auto direct = evolve_quadrature(forward_ft(phi), 2048.0, xs).values[0];
    CHECK(std::abs(tr.u - direct) < 1e-10);
    for (const auto* term : {&tr.low, &tr.near, &tr.stationary, &tr.far, &tr.high}) {
      CHECK(std::isfinite(term->ratio));
      CHECK(term->ratio >= 0.0);
    }
    CHECK(std::abs(tr.u) <= tr.total_magnitude * (1.0 + 1e-9) + 1e-12);
  }
}

TEST_CASE("integration by parts bound holds") {
  const auto phi = ring();
  auto tr = trace_terms(phi, 2048.0, -8.0);
  int checked = 0;
  for (const auto& p : tr.pieces) {
    if (!p.ibp_first) continue;
    REQUIRE(p.ibp_second);
    REQUIRE(p.kernel);
    CHECK(p.magnitude <= (*p.ibp_first + *p.ibp_second) * (1.0 + 1e-6) + 1e-14);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("zero data traces to zero") {
  auto zero = SampledFunction::zero(GridSpec(256.0, 1 << 12));
  auto tr = trace_terms(zero, 2048.0, 3.0);
  CHECK(tr.u == Complex{});
  CHECK(tr.total_magnitude == 0.0);
  for (const auto* term : {&tr.low, &tr.near, &tr.stationary, &tr.far, &tr.high}) CHECK(term->magnitude == 0.0);
}

TEST_CASE("tracing requires data away from zero frequency") {
  GridSpec g(64.0, 4096);
  auto gauss = SampledFunction::from(g, [](double x) { return Complex(std::exp(-x * x)); });
  CHECK(kind_of([&] { TraceData(gauss, 0.5); }) == ErrorKind::Precondition);
}

TEST_CASE("decay rates") {
  CHECK_THAT(non_stationary_rate(2048.0, 0.5), WithinRel(std::log(2049.0) / 2048.0, 1e-15));
  CHECK_THAT(non_stationary_rate(-2048.0, 0.4), WithinRel(std::pow(2048.0, -0.9), 1e-15));
  CHECK_THAT(stationary_rate(4096.0, 0.5), WithinRel(1.0 / 64.0 + std::pow(4096.0, -0.625), 1e-15));
}
