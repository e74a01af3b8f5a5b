#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lpdecay/error.hpp"
#include "lpdecay/harness.hpp"
#include "lpdecay/norms.hpp"
#include "lpdecay/schwartz.hpp"
#include "oracles.hpp"

using namespace lpdecay;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi = std::numbers::pi;

SampledFunction gaussian(const GridSpec& g, double a) {
  return SampledFunction::from(g, [a](double x) { return Complex(std::exp(-a * x * x)); });
}

}  // namespace

TEST_CASE("fractional derivative identity and second derivative") {
  GridSpec g(40.0, 4096);
  auto f = gaussian(g, 1.0);
  auto same = fractional_derivative(f, 0.0);
  CHECK(relative_l2(same.values, f.values) == 0.0);

  auto d2 = fractional_derivative(f, 2.0);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    err = std::max(err, std::abs(d2.values[i] - Complex((2.0 - 4.0 * x * x) * std::exp(-x * x))));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("fractional derivatives compose") {
  GridSpec g(40.0, 4096);
  auto f = SampledFunction::from(g, [](double x) { return Complex(x * std::exp(-x * x)); });
  auto a = fractional_derivative(fractional_derivative(f, 0.3), 0.5);
  auto b = fractional_derivative(f, 0.8);
  CHECK(relative_l2(a.values, b.values) < 1e-12);
  // odd data has no zero mode, so negative orders are allowed and invert positive ones
  auto back = fractional_derivative(fractional_derivative(f, 0.5), -0.5);
  CHECK(relative_l2(back.values, f.values) < 1e-10);
}

TEST_CASE("negative order on a live zero mode is singular") {
  GridSpec g(40.0, 1024);
  auto f = gaussian(g, 1.0);
  try {
    fractional_derivative(f, -0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMultiplier);
  }
  try {
    fractional_derivative(f, -1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("gaussian norms in closed form") {
  GridSpec g(40.0, 4096);
  auto f = gaussian(g, 0.5);
  const double s = 0.5;
  auto n = norms(f, std::span<const double>(&s, 1));
  CHECK_THAT(n.l2, WithinRel(std::pow(kPi, 0.25), 1e-12));
  CHECK_THAT(n.weighted, WithinRel(std::sqrt(0.75 * std::sqrt(kPi)), 1e-12));
  CHECK_THAT(n.h1, WithinRel(std::sqrt(1.5 * std::sqrt(kPi)), 1e-12));
  // ||f||_{H^{1/2}}^2 = (1/2pi) \int (1+xi^2)^{1/2} 2 pi e^{-xi^2} dxi
  const double hs_ref = std::sqrt(
      oracle::simpson([](double xi) { return Complex(std::sqrt(1.0 + xi * xi) * std::exp(-xi * xi)); }, -20.0, 20.0)
          .real());
  CHECK_THAT(n.hs.at(0.5), WithinRel(hs_ref, 1e-10));
  CHECK(n.warnings.empty());
}

TEST_CASE("sup norm off grid") {
  GridSpec g(40.0, 4096);
  auto f = SampledFunction::from(g, [](double x) { return Complex(2.5 * std::exp(-(x - 0.3) * (x - 0.3))); });
  auto s = sup_norm(f);
  CHECK_THAT(s.value, WithinRel(2.5, 1e-5));
  CHECK_THAT(s.argmax, WithinAbs(0.3, 1e-3));
}

TEST_CASE("lp norms of a gaussian") {
  GridSpec g(40.0, 4096);
  auto f = gaussian(g, 1.0);
  CHECK_THAT(lp_norm(f, 1.0), WithinRel(std::sqrt(kPi), 1e-12));
  CHECK_THAT(lp_norm(f, 2.0), WithinRel(std::pow(kPi / 2.0, 0.25), 1e-12));
  CHECK_THAT(lp_norm(f, 4.0), WithinRel(std::pow(std::sqrt(kPi) / 2.0, 0.25), 1e-12));
  CHECK_THAT(lp_norm(f, INFINITY), WithinRel(1.0, 1e-12));
  CHECK_THROWS_AS(lp_norm(f, 3.0), Error);
}

TEST_CASE("embedding and interpolation inequalities over random data") {
  GridSpec g(64.0, 1 << 14);
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto f = random_schwartz(11, i, g);
    auto n = norms(f);
    const double sup = sup_norm(f).value;
    const double l1 = lp_norm(f, 1.0), l2 = lp_norm(f, 2.0), l4 = lp_norm(f, 4.0);
    CHECK(sup <= kEmbeddingConstant * n.h1 * (1.0 + 1e-12));
    CHECK(l4 <= std::sqrt(l2 * sup) * (1.0 + 1e-12));
    CHECK(l2 * l2 <= l1 * sup * (1.0 + 1e-12));
    CHECK(n.l2 <= n.h1);
  }
}

TEST_CASE("weighted norm against closed-form derivative") {
  GridSpec g(64.0, 1 << 14);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto mix = draw_mixture(5, i);
    auto f = SampledFunction::from(g, [&](double x) { return mix(x); });
    // x f'(x) for atoms c exp(-a (x - x0)^2 + i b x)
    auto xfp = [&](double x) {
      Complex sum{};
      for (const auto& at : mix.atoms) sum += Complex(-2.0 * at.a * (x - at.x0), at.b) * at(x);
      return x * sum;
    };
    const double ref = std::sqrt(
        oracle::simpson([&](double x) { return Complex(std::norm(xfp(x))); }, -64.0, 64.0, 1e-10, 256).real());
    CHECK_THAT(norms(f).weighted, WithinRel(ref, 1e-8));
  }
}
