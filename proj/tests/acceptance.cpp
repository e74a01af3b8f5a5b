// One PASS/FAIL line per acceptance criterion, also written to
// acceptance_report.txt. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lpdecay/error.hpp"
#include "lpdecay/harness.hpp"
#include "lpdecay/littlewood_paley.hpp"
#include "lpdecay/norms.hpp"
#include "lpdecay/pinned.hpp"
#include "lpdecay/proof_tracer.hpp"
#include "lpdecay/propagator.hpp"

using namespace lpdecay;

namespace {

using Clock = std::chrono::steady_clock;

FILE* g_log = nullptr;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool report(int id, bool pass, const std::string& detail) {
  for (FILE* f : {stdout, g_log}) {
    if (!f) continue;
    std::fprintf(f, "criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(f);
  }
  return pass;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

bool unitarity() {
  const auto start = Clock::now();
  const auto config = decay_defaults();
  const auto grid = config.grid();
  double worst_norm = 0.0, worst_group = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto phi = generate_schwartz(config.seed, i, grid, config.band);
    const auto phi_hat = forward_ft(phi);
    const double base = lp_norm(phi, 2.0);
    // u(t/2) of the previous dyadic step, propagated again by t/2
    auto half = inverse_ft(evolve_spectral(phi_hat, 0.5));
    for (double t : dyadic_times(0, 10)) {
      auto u = inverse_ft(evolve_spectral(phi_hat, t));
      worst_norm = std::max(worst_norm, std::abs(lp_norm(u, 2.0) / base - 1.0));
      const auto twice = evolve_spectral(half, 0.5 * t);
      worst_group = std::max(worst_group, relative_l2(twice.values, u.values));
      half = std::move(u);
    }
  }
  const double secs = seconds_since(start);
  return report(1, worst_norm < 1e-12 && worst_group < 1e-12 && secs < 60.0,
                "max |norm ratio - 1| " + fmt("%.3g", worst_norm) + ", group-law defect " + fmt("%.3g", worst_group) +
                    ", " + fmt("%.1f", secs) + " s (limits 1e-12, 1e-12, 60 s)");
}

// --- 2 ---------------------------------------------------------------------

bool partition_of_unity() {
  const BumpFunction psi;
  double worst = 0.0;
  const int n = 1 << 20;
  for (int i = 0; i <= n; ++i) {
    const double xi = std::exp2(-7.0 + 14.0 * i / n);
    for (double s : {-1.0, 1.0}) {
      double sum = 0.0;
      for (int k = -8; k <= 8; ++k) sum += psi.piece(k, s * xi);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return report(2, worst < 1e-12, "max |sum psi_k - 1| " + fmt("%.3g", worst) + " on 2^-7 <= |xi| <= 2^7 (limit 1e-12)");
}

// --- 3, 4 ------------------------------------------------------------------

struct DecayCheck {
  bool pass = true;
  std::string detail;
};

DecayCheck decay_suite(double alpha) {
  auto config = decay_defaults();
  config.alpha = alpha;
  const auto reports = run_decay(config);
  bool finite = true;
  double global = 0.0;
  for (const auto& r : reports) {
    for (double v : r.ratios) finite = finite && std::isfinite(v);
    global = std::max(global, r.max_ratio());
  }
  const auto growth = late_growth(reports);
  const auto pin = pinned::decay_max(alpha);
  const bool pinned_ok = pin && pinned::within(global, *pin);

  // spectral sup against quadrature at t = 2^6
  const auto grid = config.grid();
  double worst_cross = 0.0;
  for (const auto& r : reports) {
    std::size_t j = 0;
    while (r.times[j] != 64.0) ++j;
    const auto phi = generate_schwartz(config.seed, r.sample, grid, config.band);
    const auto q = quadrature_sup(phi, 64.0, alpha);
    worst_cross = std::max(worst_cross, std::abs(q.value - r.sup_norms[j]) / r.sup_norms[j]);
  }
  DecayCheck out;
  out.pass = finite && pinned_ok && growth.ratio <= 1.1 && worst_cross <= 1e-4;
  out.detail = "alpha " + fmt("%.2f", alpha) + ": max R " + fmt("%.6f", global) + " (pin " +
               (pin ? fmt("%.6g", *pin) : std::string("unset")) + "), late/early " + fmt("%.4f", growth.ratio) +
               " (limit 1.1), spectral vs quadrature " + fmt("%.2g", worst_cross) + " (limit 1e-4)" +
               (finite ? "" : ", non-finite R");
  return out;
}

bool decay_half() {
  const auto start = Clock::now();
  auto c = decay_suite(0.5);
  const double secs = seconds_since(start);
  return report(3, c.pass && secs < 600.0, c.detail + ", " + fmt("%.0f", secs) + " s (limit 600 s)");
}

bool decay_other() {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (double alpha : {0.35, 0.4, 0.45}) {
    auto c = decay_suite(alpha);
    pass = pass && c.pass;
    detail += c.detail + "; ";
  }
  const double secs = seconds_since(start);
  return report(4, pass && secs < 1800.0, detail + fmt("%.0f", secs) + " s (limit 1800 s)");
}

// --- 5 ---------------------------------------------------------------------

bool lemma_suites() {
  auto a_config = lemma_defaults();
  auto b_config = lemma_defaults();
  b_config.seed = 1;
  const auto a = run_lemma_suites(a_config);
  const auto b = run_lemma_suites(b_config);
  bool pass = true;
  std::string detail;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const auto& ra = a.rows[r];
    const auto& rb = b.rows[r];
    const bool finite = std::isfinite(ra.max) && std::isfinite(rb.max) && ra.max > 0.0 && rb.max > 0.0;
    const double spread = finite ? std::max(ra.max / rb.max, rb.max / ra.max) : INFINITY;
    double pin = NAN;
    for (const auto& [name, value] : pinned::kLemma)
      if (name == ra.name) pin = value;
    const bool ok = finite && spread <= 2.0 && pinned::within(ra.max, pin);
    pass = pass && ok;
    detail += ra.name + " " + fmt("%.6g", ra.max) + "/" + fmt("%.6g", rb.max) + (ok ? "" : " (bad)") + "; ";
  }
  detail += "k in [" + std::to_string(a.k_lo) + ", " + std::to_string(a.k_hi) + "], seeds 0/1 within 2x, pinned";
  return report(5, pass, detail);
}

// --- 6 ---------------------------------------------------------------------

bool stationary_points() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> sign(-1.0, 1.0), expo(-4.0, 13.0), aunif(0.3, 0.7);
  double worst = 0.0;
  int rooted = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t = std::copysign(std::exp2(expo(rng)), sign(rng));
    const double x = std::copysign(std::exp2(expo(rng)), sign(rng));
    const double alpha = aunif(rng);
    const auto xi0 = stationary_point(t, x, alpha);
    if (!xi0) continue;
    ++rooted;
    // |Phi'(xi0)| never exceeds its maximum over a neighbourhood of xi0, and stays finite
    // when that neighbourhood reaches 0
    const double scale = std::abs(t) * std::abs(dispersion_d1(alpha, *xi0));
    worst = std::max(worst, std::abs(PhaseSpec{alpha, t, x}.dq(*xi0)) / scale);
  }
  double closed = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = std::copysign(std::exp2(expo(rng)), sign(rng));
    const double x = std::copysign(std::exp2(expo(rng)), sign(rng));
    const double ref = (x * t < 0.0 ? 0.25 : -0.25) * (t / x) * (t / x);
    closed = std::max(closed, std::abs(*stationary_point(t, x, 0.5) - ref) / std::abs(ref));
  }
  return report(6, rooted == 1000 && worst <= 1e-12 && closed <= 1e-12,
                std::to_string(rooted) + " roots, max |Q'(xi0)| / |t Phi'(xi0)| " + fmt("%.3g", worst) +
                    ", closed form at alpha 1/2 " + fmt("%.3g", closed) + " (limits 1e-12)");
}

// --- 7 ---------------------------------------------------------------------

struct Q0Case {
  int k, l;
  double t, x, alpha;
  Q0Estimate estimate;
};

// Stationary middle-band indices for (t, x) with every ring that meets the annulus.
std::vector<Q0Case> admissible_suite(double alpha) {
  std::vector<Q0Case> out;
  std::mt19937_64 rng(alpha == 0.5 ? 70 : 71);
  std::uniform_real_distribution<double> sign(-1.0, 1.0), ratio_exp(-3.0, 7.0);
  for (double t : {2048.0, 4096.0, 8192.0}) {
    for (int draw = 0; draw < 20; ++draw) {
      const double x = std::copysign(t / std::exp2(ratio_exp(rng)), sign(rng));
      const auto part = build_partition(t, x, alpha);
      const auto xi0 = stationary_point(t, x, alpha);
      for (int k : part.stationary) {
        const int l0 = static_cast<int>(std::lround((2.0 - alpha) * k / 2.0 - 0.5 * std::log2(t)));
        const int l_end = static_cast<int>(std::ceil(std::log2(std::abs(*xi0) + std::ldexp(1.0, k + 1))));
        for (int l = l0 + 1; l <= std::max(l0 + 1, l_end); ++l)
          if (auto e = q0_estimate(k, l, t, x, alpha)) out.push_back({k, l, t, x, alpha, *e});
      }
    }
  }
  return out;
}

bool q0_bound() {
  bool pass = true;
  std::string detail;
  std::vector<Q0Case> spots;
  for (double alpha : {0.4, 0.5}) {
    const auto suite = admissible_suite(alpha);
    double floor = INFINITY;
    for (const auto& c : suite) floor = std::min(floor, c.estimate.ratio);
    const auto recorded = pinned::q0_floor(alpha);
    const bool ok = !suite.empty() && floor > 0.0 && recorded && floor >= *recorded * (1.0 - pinned::kTolerance);
    pass = pass && ok;
    detail += "alpha " + fmt("%.1f", alpha) + ": " + std::to_string(suite.size()) + " cases, min ratio " +
              fmt("%.6g", floor) + " (recorded " + fmt("%.6g", recorded.value_or(NAN)) + "); ";
    for (std::size_t i = 0; i < 5 && !suite.empty(); ++i) spots.push_back(suite[(i * 7919) % suite.size()]);
  }
  double worst = 0.0;
  for (const auto& c : spots) {
    const PhaseSpec q{c.alpha, c.t, c.x};
    const int n = 1000000;
    double brute = INFINITY;
    double total = 0.0;
    for (const auto& iv : c.estimate.region) total += iv.width();
    for (const auto& iv : c.estimate.region) {
      const int m = std::max(2, static_cast<int>(n * iv.width() / total));
      for (int j = 0; j < m; ++j) brute = std::min(brute, std::abs(q.dq(iv.lo + iv.width() * j / (m - 1))));
    }
    worst = std::max(worst, std::abs(c.estimate.infimum - brute) / brute);
  }
  pass = pass && spots.size() == 10 && worst <= 0.01;
  return report(7, pass, detail + "brute force on " + std::to_string(spots.size()) + " spot cases within " +
                             fmt("%.2g", worst) + " (limit 0.01)");
}

// --- 8 ---------------------------------------------------------------------

bool factorization() {
  auto config = decay_defaults();
  config.band = Band{0.25, 8.0};
  const auto grid = config.grid();
  double worst = 0.0, lo_ratio = INFINITY, hi_ratio = 0.0;
  bool defined = true;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto phi = generate_schwartz(0, i, grid, config.band);
    for (double t : {1.0, 64.0}) {
      const auto a = factorization_residual(phi, t, 1e-3);
      const auto b = factorization_residual(phi, t, 5e-4);
      if (!a || !b) {
        defined = false;
        continue;
      }
      worst = std::max(worst, a->residual);
      lo_ratio = std::min(lo_ratio, a->residual / b->residual);
      hi_ratio = std::max(hi_ratio, a->residual / b->residual);
    }
  }
  return report(8, defined && worst < 1e-6 && lo_ratio >= 3.2 && hi_ratio <= 4.8,
                "max residual " + fmt("%.3g", worst) + " at dt 1e-3 (limit 1e-6), halving ratio in [" +
                    fmt("%.4f", lo_ratio) + ", " + fmt("%.4f", hi_ratio) + "] (limit 4 +- 20%)");
}

// --- 9 ---------------------------------------------------------------------

bool proof_terms() {
  const auto start = Clock::now();
  const auto config = trace_defaults();
  bool pass = true;
  std::string detail;
  for (double t : {2048.0, 4096.0, 8192.0}) {
    const auto s = summarize(run_trace(config, t), t);
    const auto* pin = pinned::trace_pin(t);
    const bool ok = s.finite && pin && pinned::within(s.low, pin->low) && pinned::within(s.near, pin->near) &&
                    pinned::within(s.stationary, pin->stationary) && pinned::within(s.far, pin->far) &&
                    pinned::within(s.high, pin->high);
    pass = pass && ok;
    detail += "t " + fmt("%.0f", t) + ": A " + fmt("%.6g", s.low) + " B1 " + fmt("%.6g", s.near) + " B2 " +
              fmt("%.6g", s.stationary) + " B3 " + fmt("%.6g", s.far) + " C " + fmt("%.6g", s.high) +
              (ok ? "" : " (bad)") + "; ";
  }
  const double secs = seconds_since(start);
  return report(9, pass && secs < 900.0, detail + fmt("%.0f", secs) + " s (limit 900 s)");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<bool()>> checks{unitarity,        partition_of_unity, decay_half,
                                                  decay_other,      lemma_suites,       stationary_points,
                                                  q0_bound,         factorization,      proof_terms};
  g_log = std::fopen("acceptance_report.txt", "w");
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    try {
      all = checks[i]() && all;
    } catch (const std::exception& e) {
      all = report(id, false, std::string("error: ") + e.what()) && all;
    }
  }
  if (g_log) std::fclose(g_log);
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
