#pragma once

#include <string>
#include <vector>

#include "triplink/core.hpp"

namespace triplink {

// One row of the self-check table. `measured` is the headline number the
// check compares against `limit` (usually a residual or worst deviation, so
// smaller is better unless `detail` says otherwise).
struct VerifyCheck {
  std::string name;
  bool pass = false;
  double measured = 0;
  double limit = 0;
  double seconds = 0;   // wall time, informational only
  std::string detail;
};

struct VerifyReport {
  std::string level;
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
  double total_seconds() const;
};

// Runs the identity suite on built-in inputs. "quick" covers the kernel and
// cycle identities, the pairwise cross-method corpus, the triple-invariant
// benchmarks, and the potential solver; "full" repeats those and adds the
// tube helicity benchmark and the energy scaling audit. Throws DomainError
// on any other level string. Individual check failures never throw; they
// land in the table as pass = false.
VerifyReport run_verify(const std::string& level, Exec exec = Exec::parallel);

}  // namespace triplink
