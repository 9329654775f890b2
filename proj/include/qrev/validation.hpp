#pragma once

// Acceptance checks across all modules, one report row per check.

#include <string>
#include <vector>

namespace qrev {

struct ValidationRow {
  int id = 0;
  std::string name;
  std::string source;      ///< where the predicted value comes from
  double measured = 0.0;
  double predicted = 0.0;
  double rel_error = 0.0;  ///< the quantity compared against `tolerance`
  double tolerance = 0.0;
  bool pass = false;
  std::string note;        ///< sub-check values
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool all_pass() const;
};

/// Number of acceptance checks (ids 1..count).
int validation_count();

/// Short identifier of check `id`, e.g. "mathieu_exactness".
const char* validation_name(int id);

/// Runs check `id`.  Library errors inside a check are caught and reported
/// as a failing row.
ValidationRow run_validation(int id);

/// Runs the given checks (all when empty) in order.
ValidationReport run_validation(const std::vector<int>& ids);

/// "PASS|FAIL  id name  measured=... predicted=... err=... tol=... (note)"
std::string format_row(const ValidationRow& row);

}  // namespace qrev
