#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tripos/constructions.hpp"
#include "tripos/logic.hpp"

namespace tripos {

/// Named classification checks over one doctrine, computed on first use.
/// Not thread safe; use one per thread.
class Classifier {
 public:
  explicit Classifier(Doctrine d);

  const Doctrine& doctrine() const { return an_.doctrine(); }
  const Analysis& analysis() const { return an_; }
  const std::string& hash() const;

  /// Throws std::invalid_argument for unknown names.
  const Verdict& check(const std::string& name) const;
  const HeacoChecklist& heaco_checklist() const;

  /// Check names in definitional order.
  static const std::vector<std::string>& names();
  static bool known(const std::string& name);
  static std::string describe(const std::string& name);

 private:
  Analysis an_;
  mutable std::string hash_;
  mutable std::map<std::string, Verdict> cache_;
  mutable std::unique_ptr<HeacoChecklist> heaco_;
};

struct TheoremCheck {
  std::string id;
  std::string statement;
  std::vector<std::string> hypotheses;  // Classifier check names
  std::function<Verdict(const Classifier&)> conclusion;
  std::function<json(const Classifier&)> witnesses;  // optional
};

struct TheoremReport {
  std::string id;
  std::string hash;
  std::vector<std::pair<std::string, Verdict>> hypotheses;
  Verdict conclusion;
  json witnesses;
  double seconds = 0;

  bool hypotheses_hold() const;
  /// Hypotheses satisfied and conclusion refuted.
  bool violated() const { return hypotheses_hold() && conclusion.is_refuted(); }
};

json to_json(const TheoremReport& r, bool timing = false);

const std::vector<TheoremCheck>& theorem_registry();
/// Throws std::invalid_argument for unknown ids.
const TheoremCheck& find_theorem(const std::string& id);

TheoremReport check_theorem(const std::string& id, const Classifier& cls);
TheoremReport check_theorem(const std::string& id, const Doctrine& d);
std::vector<TheoremReport> check_all(const Classifier& cls);

/// Holds when both sides hold or both are refuted; not applicable when
/// either side is; otherwise refuted with both verdicts embedded.
Verdict biconditional(const std::string& left_name, const Verdict& left,
                      const std::string& right_name, const Verdict& right,
                      const std::string& window);

}  // namespace tripos
