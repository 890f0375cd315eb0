#pragma once

// The acceptance suite: every criterion as one row of
// (criterion, measured value, relation, tolerance, verdict).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace harnack {

struct CriterionRow {
  std::string id;           // "1", "3b", "7d", ...
  std::string description;
  double value = 0.0;
  bool at_least = false;    // value >= tolerance passes; otherwise value <= tolerance
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct AcceptanceOptions {
  /// Linear heat criteria only (the P estimate and Li-Yau: 2, 3a, 3b).
  bool linear_only = false;
  /// Criterion ids to run; empty means all.
  std::set<std::string> only;
  std::set<std::string> exclude;
  /// Per-criterion tolerance overrides, keyed by id.
  std::map<std::string, double> tolerance;
  std::uint64_t seed = 1;
  /// Progress lines go here when set.
  std::ostream* log = nullptr;
};

struct AcceptanceSummary {
  std::vector<CriterionRow> rows;
  double seconds = 0.0;

  bool passed() const;
};

/// Criterion ids in table order.
std::vector<std::string> criterion_ids();

AcceptanceSummary run_acceptance_suite(const AcceptanceOptions& options);

void print_table(const AcceptanceSummary& summary, std::ostream& os);

}  // namespace harnack
