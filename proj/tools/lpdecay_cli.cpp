#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lpdecay/csv.hpp"
#include "lpdecay/error.hpp"
#include "lpdecay/harness.hpp"
#include "lpdecay/pinned.hpp"
#include "lpdecay/propagator.hpp"

using namespace lpdecay;

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kBadConfig = 2, kGuardFailure = 3 };

struct CommonFlags {
  double alpha = 0.5;
  std::uint64_t seed = 0;
  int samples = 0;
  std::size_t grid_n = 0;
  double half_width = 0.0;
  std::string band;
  std::string t_grid;
  std::string backend = "auto";
  std::string out;
  bool allow_empty_band = false;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--alpha", f.alpha, "dispersion exponent in (0, 1)")->capture_default_str();
  cmd->add_option("--seed", f.seed, "suite seed")->capture_default_str();
  cmd->add_option("--samples", f.samples, "number of samples");
  cmd->add_option("--grid-n", f.grid_n, "grid size (power of two)");
  cmd->add_option("--half-width", f.half_width, "grid half-width L");
  cmd->add_option("--band", f.band, "frequency band lo:hi");
  cmd->add_option("--t-grid", f.t_grid, "'dyadic', 'dyadic:lo:hi' (exponents) or a comma list of times");
  cmd->add_option("--backend", f.backend, "auto, spectral or quadrature")->capture_default_str();
  cmd->add_option("--out", f.out, "CSV output path");
  cmd->add_flag("--allow-empty-band", f.allow_empty_band, "trace times with an empty middle band");
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(ErrorKind::InvalidParameter, "not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_times(const std::string& text, const std::vector<double>& fallback) {
  if (text.empty() || text == "dyadic") return fallback;
  if (text.rfind("dyadic:", 0) == 0) {
    const auto rest = text.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::InvalidParameter, "expected dyadic:lo:hi");
    return dyadic_times(static_cast<int>(parse_number(rest.substr(0, colon))),
                        static_cast<int>(parse_number(rest.substr(colon + 1))));
  }
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number(item));
  return out;
}

Band parse_band(const std::string& text, const Band& fallback) {
  if (text.empty()) return fallback;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidParameter, "band must be given as lo:hi");
  return Band{parse_number(text.substr(0, colon)), parse_number(text.substr(colon + 1))};
}

SuiteConfig build_config(const CommonFlags& f, SuiteConfig c) {
  c.alpha = f.alpha;
  c.seed = f.seed;
  if (f.samples != 0) c.samples = f.samples;
  if (f.grid_n != 0) c.grid_n = f.grid_n;
  if (f.half_width != 0.0) c.half_width = f.half_width;
  c.band = parse_band(f.band, c.band);
  c.times = parse_times(f.t_grid, c.times);
  c.backend = parse_backend(f.backend);
  c.out = f.out;
  c.allow_empty_band = f.allow_empty_band;
  c.threads = f.threads;
  c.validate();
  return c;
}

// Pinned constants only describe the default suites.
bool matches(const SuiteConfig& c, const SuiteConfig& d) {
  return c.seed == d.seed && c.samples == d.samples && c.half_width == d.half_width && c.grid_n == d.grid_n &&
         c.band.lo == d.band.lo && c.band.hi == d.band.hi && c.times == d.times && c.backend == d.backend;
}

template <class Writer>
void write_out(const std::string& path, Writer&& write) {
  if (path.empty()) return;
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::InvalidParameter, "cannot open output file " + path);
  write(file);
}

int verify_decay(const CommonFlags& flags) {
  const auto config = build_config(flags, decay_defaults());
  const auto reports = run_decay(config);
  write_out(config.out, [&](std::ostream& o) { write_decay_csv(o, reports); });

  int status = kPass;
  double global = 0.0;
  std::cout << std::setprecision(6);
  for (const auto& r : reports) {
    global = std::max(global, r.max_ratio());
    std::cout << "sample " << r.sample << ": max R = " << r.max_ratio() << ", R(0) = " << r.initial_ratio << '\n';
    for (std::size_t i = 0; i < r.times.size(); ++i)
      if (!r.errors[i].empty()) {
        std::cout << "  t = " << r.times[i] << ": " << r.errors[i] << '\n';
        status = kGuardFailure;
      }
  }
  std::cout << "global max R = " << global << '\n';
  if (config.times.back() >= 1024.0 && config.times.front() <= 64.0) {
    const auto g = late_growth(reports);
    const bool ok = g.ratio <= 1.1;
    std::cout << "late/early max ratio = " << g.ratio << " (worst single sample " << g.worst_sample_ratio << ") "
              << (ok ? "ok" : "LATE GROWTH") << '\n';
    if (!ok && status == kPass) status = kCheckFailed;
  }
  if (matches(config, decay_defaults()))
    if (const auto pin = pinned::decay_max(config.alpha)) {
      const bool ok = pinned::within(global, *pin);
      std::cout << "pinned max R = " << *pin << ' ' << (ok ? "ok" : "EXCEEDED") << '\n';
      if (!ok && status == kPass) status = kCheckFailed;
    }
  return status;
}

void print_table(const SuiteTable& table) {
  std::cout << "k range [" << table.k_lo << ", " << table.k_hi << "]";
  if (!table.unresolved.empty()) {
    std::cout << ", unresolved k:";
    for (int k : table.unresolved) std::cout << ' ' << k;
  }
  std::cout << '\n' << std::setprecision(6);
  for (const auto& row : table.rows) {
    std::cout << std::left << std::setw(22) << row.name << " max " << std::setw(12) << row.max << " median "
              << std::setw(12) << row.median << " n " << row.count;
    if (row.undefined) std::cout << " undefined " << row.undefined;
    if (row.pinned) std::cout << " pinned " << *row.pinned << (row.pass ? " ok" : " EXCEEDED");
    std::cout << '\n';
  }
}

int suite_command(const CommonFlags& flags, int k_lo, int k_hi, bool bernstein) {
  const auto config = build_config(flags, lemma_defaults());
  auto table = bernstein ? run_bernstein_suite(config, k_lo, k_hi) : run_lemma_suites(config, k_lo, k_hi);
  if (!bernstein && matches(config, lemma_defaults()) && k_lo == -8 && k_hi == 8) {
    std::vector<std::pair<std::string, double>> pins;
    for (const auto& [name, value] : pinned::kLemma)
      if (std::isfinite(value)) pins.emplace_back(std::string(name), value);
    apply_pins(table, pins, pinned::kTolerance);
  }
  write_out(config.out, [&](std::ostream& o) { write_suite_csv(o, table); });
  print_table(table);
  return table.pass() ? kPass : kCheckFailed;
}

int trace_proof(const CommonFlags& flags) {
  const auto config = build_config(flags, trace_defaults());
  std::vector<TraceRecord> all;
  int status = kPass;
  std::cout << std::setprecision(6);
  for (double t : config.times) {
    auto records = run_trace(config, t);
    const auto s = summarize(records, t);
    std::cout << "t = " << t << ": A " << s.low << ", B1 " << s.near << ", B2 " << s.stationary << ", B3 " << s.far
              << ", C " << s.high << ", reconstruction defect " << s.max_reconstruction_defect << '\n';
    if (!s.finite) status = kCheckFailed;
    const auto* pin = matches(config, trace_defaults()) ? pinned::trace_pin(t) : nullptr;
    if (pin && std::isfinite(pin->low)) {
      const bool ok = pinned::within(s.low, pin->low) && pinned::within(s.near, pin->near) &&
                      pinned::within(s.stationary, pin->stationary) && pinned::within(s.far, pin->far) &&
                      pinned::within(s.high, pin->high);
      std::cout << "  pinned ratios " << (ok ? "ok" : "EXCEEDED") << '\n';
      if (!ok) status = kCheckFailed;
    }
    all.insert(all.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
  }
  write_out(config.out, [&](std::ostream& o) { write_trace_csv(o, all); });
  return status;
}

int stationary(double t, double x, double alpha) {
  require_alpha(alpha);
  const auto xi0 = stationary_point(t, x, alpha);
  std::cout << std::setprecision(17);
  if (!xi0) {
    std::cout << "no stationary point\n";
    return kPass;
  }
  const PhaseSpec phase{alpha, t, x};
  std::cout << "xi0 = " << *xi0 << "\n|Q'(xi0)| = " << std::abs(phase.dq(*xi0)) << '\n';
  return kPass;
}

int factorization(const CommonFlags& flags, double t, double dt) {
  SuiteConfig defaults = decay_defaults();
  defaults.samples = 1;
  defaults.band = Band{0.25, 8.0};
  auto config = build_config(flags, defaults);
  if (config.alpha != 0.5) throw Error(ErrorKind::InvalidParameter, "the factorization identity holds at alpha = 1/2");
  int status = kPass;
  std::cout << std::setprecision(6);
  for (int i = 0; i < config.samples; ++i) {
    const auto phi = generate_schwartz(config.seed, i, config.grid(), config.band);
    const auto full = factorization_residual(phi, t, dt);
    const auto half = factorization_residual(phi, t, dt / 2.0);
    if (!full || !half) {
      std::cout << "sample " << i << ": |D|u vanishes\n";
      continue;
    }
    const double order = full->residual / half->residual;
    const bool ok = full->residual < 1e-6 && std::abs(order - 4.0) <= 0.8;
    std::cout << "sample " << i << ": residual " << full->residual << ", halved dt " << half->residual
              << ", reduction " << order << (ok ? " ok" : " FAIL") << '\n';
    if (!ok) status = kCheckFailed;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of dispersive decay for e^{it|D|^alpha}"};
  app.require_subcommand(1);

  CommonFlags decay_flags, lemma_flags, bern_flags, trace_flags, fact_flags;
  auto* decay = app.add_subcommand("verify-decay", "decay ratios R(t) over a seeded suite");
  add_common(decay, decay_flags);

  int k_lo = -8, k_hi = 8;
  auto* lemma = app.add_subcommand("lemma-suite", "Bernstein and weighted-norm ratio tables");
  add_common(lemma, lemma_flags);
  lemma->add_option("--k-min", k_lo)->capture_default_str();
  lemma->add_option("--k-max", k_hi)->capture_default_str();

  auto* bern = app.add_subcommand("bernstein-suite", "all Bernstein exponent pairs");
  add_common(bern, bern_flags);
  bern->add_option("--k-min", k_lo)->capture_default_str();
  bern->add_option("--k-max", k_hi)->capture_default_str();

  auto* trace = app.add_subcommand("trace-proof", "per-band terms of the decay estimate at the sup location");
  add_common(trace, trace_flags);

  double sp_t = 0.0, sp_x = 0.0, sp_alpha = 0.5;
  auto* sp = app.add_subcommand("stationary-point", "root of x + t Phi'(xi)");
  sp->add_option("--t", sp_t)->required();
  sp->add_option("--x", sp_x)->required();
  sp->add_option("--alpha", sp_alpha)->capture_default_str();

  double f_t = 1.0, f_dt = 1e-3;
  auto* fact = app.add_subcommand("factorization-check", "u_tt + |D| u residual for the alpha = 1/2 flow");
  add_common(fact, fact_flags);
  fact->add_option("--t", f_t)->capture_default_str();
  fact->add_option("--dt", f_dt)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kBadConfig;
  }

  try {
    if (*decay) return verify_decay(decay_flags);
    if (*lemma) return suite_command(lemma_flags, k_lo, k_hi, false);
    if (*bern) return suite_command(bern_flags, k_lo, k_hi, true);
    if (*trace) return trace_proof(trace_flags);
    if (*sp) return stationary(sp_t, sp_x, sp_alpha);
    if (*fact) return factorization(fact_flags, f_t, f_dt);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::InvalidInput:
      case ErrorKind::InvalidParameter: return kBadConfig;
      default: return kGuardFailure;
    }
  }
  return kPass;
}
