#pragma once

#include <string>
#include <vector>

#include "zsq/analytic.hpp"

namespace zsq {

enum class VerifyLevel { quick, full };

/// Outcome of one verification check. status is "pass", "fail" or
/// "skipped"; skipped checks carry the reason in detail and do not fail
/// the battery.
struct CheckResult {
  std::string name;
  std::string where;  // parameter point, empty for parameter-free checks
  std::string status;
  double value = 0.0;  // measured quantity (worst case over the check)
  double bound = 0.0;  // threshold it was compared against
  std::string detail;
};

struct VerificationReport {
  std::string level;
  std::vector<CheckResult> checks;

  bool passed() const;
  /// Name of the first failed check, empty when everything passed.
  std::string first_failure() const;
};

/// Runs the cross-validation battery. quick exercises the single reference
/// point (tau_bar = 0.9 pi, g_bar = 1, dp_bar = 0.4); full repeats the
/// matrix-level checks over a 3x3x3 non-degenerate parameter grid.
VerificationReport run_verification(VerifyLevel level);

/// Machine-readable JSON rendering of the report.
std::string report_to_json(const VerificationReport& report);

/// One human-readable line per check.
std::string report_to_text(const VerificationReport& report);

}  // namespace zsq
