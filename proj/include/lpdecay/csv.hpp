#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lpdecay/harness.hpp"

namespace lpdecay {

/// One verify-decay row: seed,sample,alpha,t,sup_norm,argmax_x,ratio,backend.
struct DecayRow {
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  double alpha = 0.0;
  double t = 0.0;
  double sup_norm = 0.0;
  double argmax_x = 0.0;
  double ratio = 0.0;
  std::string backend;

  /// Field-wise equality; NaN equals NaN.
  bool same_as(const DecayRow& other) const;
};

/// 17 significant digits, so doubles round-trip exactly.
std::string format_double(double v);

std::vector<DecayRow> decay_rows(const std::vector<DecayReport>& reports);
void write_decay_csv(std::ostream& out, const std::vector<DecayReport>& reports);
/// Throws InvalidInput on a missing header or malformed row.
std::vector<DecayRow> read_decay_csv(std::istream& in);

void write_suite_csv(std::ostream& out, const SuiteTable& table);

/// One row per traced piece plus one per aggregated term and a reconstruction row.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& records);

}  // namespace lpdecay
