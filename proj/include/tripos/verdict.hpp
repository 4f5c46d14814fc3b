#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace tripos {

using json = nlohmann::json;

/// Result of a universally quantified check over a finite window.
///
/// `refuted` is conclusive and carries a counterexample payload that can be
/// re-evaluated on its own. `holds` is only as strong as the window it names.
/// `not_applicable` means a hypothesis or a piece of required structure was
/// missing; `window_limited` distinguishes "the window was too small to
/// decide" from "the structure is genuinely absent".
enum class Outcome { holds, refuted, not_applicable };

struct Verdict {
  Outcome outcome = Outcome::not_applicable;
  std::string detail;
  json payload;
  bool window_limited = false;

  static Verdict holds(std::string window);
  static Verdict refuted(std::string what, json payload);
  static Verdict not_applicable(std::string reason, bool window_limited = false);

  bool ok() const { return outcome == Outcome::holds; }
  bool is_refuted() const { return outcome == Outcome::refuted; }
  bool is_not_applicable() const { return outcome == Outcome::not_applicable; }

  /// Prefix the detail with the name of the clause that produced it.
  Verdict within(std::string_view clause) const;
};

std::string_view to_string(Outcome o);
json to_json(const Verdict& v);
Verdict verdict_from_json(const json& j);

// Error categories. Law violations are reported as refuted verdicts; these
// are for inputs that cannot be evaluated at all.

/// A table is malformed (missing composite, reindexing between the wrong fibers).
struct MalformedInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An object or arrow outside the materialized window was requested.
struct WindowExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A derived operation needs structure the doctrine does not have.
struct StructureMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tripos
