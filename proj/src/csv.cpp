#include "lpdecay/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lpdecay/error.hpp"

namespace lpdecay {

namespace {

constexpr const char* kDecayHeader = "seed,sample,alpha,t,sup_norm,argmax_x,ratio,backend";

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "malformed number '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorKind::InvalidInput, "malformed number '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorKind::InvalidInput, "malformed integer '" + s + "'");
  return v;
}

std::string sets_of(const PieceTrace& p) {
  std::string s;
  auto add = [&s](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += '|';
    s += name;
  };
  add(p.in_low, "A");
  add(p.in_near, "B1");
  add(p.in_stationary, "B2");
  add(p.in_far, "B3");
  add(p.in_high, "C");
  return s;
}

}  // namespace

bool DecayRow::same_as(const DecayRow& o) const {
  return seed == o.seed && sample == o.sample && same(alpha, o.alpha) && same(t, o.t) && same(sup_norm, o.sup_norm) &&
         same(argmax_x, o.argmax_x) && same(ratio, o.ratio) && backend == o.backend;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<DecayRow> decay_rows(const std::vector<DecayReport>& reports) {
  std::vector<DecayRow> rows;
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.times.size(); ++i)
      rows.push_back({r.seed, r.sample, r.alpha, r.times[i], r.sup_norms[i], r.argmax_x[i], r.ratios[i], r.backends[i]});
  return rows;
}

void write_decay_csv(std::ostream& out, const std::vector<DecayReport>& reports) {
  out << kDecayHeader << '\n';
  for (const auto& row : decay_rows(reports))
    out << row.seed << ',' << row.sample << ',' << format_double(row.alpha) << ',' << format_double(row.t) << ','
        << format_double(row.sup_norm) << ',' << format_double(row.argmax_x) << ',' << format_double(row.ratio) << ','
        << row.backend << '\n';
}

std::vector<DecayRow> read_decay_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kDecayHeader)
    throw Error(ErrorKind::InvalidInput, "missing verify-decay header");
  std::vector<DecayRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw Error(ErrorKind::InvalidInput, "expected 8 fields in '" + line + "'");
    rows.push_back({parse_uint(f[0]), parse_uint(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4]),
                    parse_double(f[5]), parse_double(f[6]), f[7]});
  }
  return rows;
}

void write_suite_csv(std::ostream& out, const SuiteTable& table) {
  out << "check,max,median,count,undefined,pinned,status\n";
  for (const auto& row : table.rows)
    out << row.name << ',' << format_double(row.max) << ',' << format_double(row.median) << ',' << row.count << ','
        << row.undefined << ',' << (row.pinned ? format_double(*row.pinned) : "") << ','
        << (row.pass ? "pass" : "fail") << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << "kind,sample,t,x,k,sets,magnitude,bound,ratio,ibp_bound,kernel_ratio,l0,center_ratio,annulus_defect\n";
  for (const auto& rec : records) {
    const auto& tr = rec.trace;
    const std::string head = std::to_string(rec.sample) + ',' + format_double(tr.t) + ',' + format_double(tr.x) + ',';
    for (const auto& p : tr.pieces) {
      out << "piece," << head << p.k << ',' << sets_of(p) << ',' << format_double(p.magnitude) << ",,,";
      if (p.ibp_first && p.ibp_second) out << format_double(*p.ibp_first + *p.ibp_second);
      out << ',';
      if (p.kernel) out << format_double(p.kernel->ratio);
      out << ',';
      if (p.annulus) out << p.annulus->l0 << ',' << format_double(p.annulus->center_bound_ratio) << ','
                         << format_double(p.annulus->equality_defect);
      else out << ",,";
      out << '\n';
    }
    const std::pair<const char*, const TermBound*> terms[] = {
        {"A", &tr.low}, {"B1", &tr.near}, {"B2", &tr.stationary}, {"B3", &tr.far}, {"C", &tr.high}};
    for (const auto& [name, term] : terms)
      out << "term," << head << ',' << name << ',' << format_double(term->magnitude) << ','
          << format_double(term->bound) << ',' << format_double(term->ratio) << ",,,,,\n";
    // magnitude |u(t, x)|, bound = sum of traced magnitudes, ratio = |reconstruction - u|
    out << "reconstruction," << head << ",," << format_double(std::abs(tr.u)) << ','
        << format_double(tr.total_magnitude) << ',' << format_double(tr.reconstruction_defect) << ",,,,,\n";
  }
}

}  // namespace lpdecay
