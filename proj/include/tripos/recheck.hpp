#pragma once

#include <string>

#include "tripos/doctrine.hpp"

namespace tripos {

/// Outcome of re-evaluating a refutation payload against an instance using
/// only fibers, reindexing tables, adjoints computed from scratch and
/// composition in the base.
struct Recheck {
  enum class Status { confirmed, rejected, unsupported };
  Status status = Status::unsupported;
  std::string detail;

  bool confirmed() const { return status == Status::confirmed; }
};

std::string_view to_string(Recheck::Status s);

/// Dispatches on payload["law"].
Recheck recheck_payload(const Doctrine& d, const json& payload);
/// Re-evaluates a refuted verdict; other outcomes are unsupported.
Recheck recheck_verdict(const Doctrine& d, const Verdict& v);

/// Checks the witnesses under the instance's "declared" block:
/// delta, comprehension, cocomprehension, epsilon, negation, power_objects.
/// Holds when there is nothing to check.
Verdict check_declared(const Doctrine& d);

}  // namespace tripos
