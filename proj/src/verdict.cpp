#include "tripos/verdict.hpp"

namespace tripos {

Verdict Verdict::holds(std::string window) {
  return Verdict{Outcome::holds, std::move(window), json(), false};
}

Verdict Verdict::refuted(std::string what, json payload) {
  return Verdict{Outcome::refuted, std::move(what), std::move(payload), false};
}

Verdict Verdict::not_applicable(std::string reason, bool window_limited) {
  return Verdict{Outcome::not_applicable, std::move(reason), json(), window_limited};
}

Verdict Verdict::within(std::string_view clause) const {
  Verdict v = *this;
  v.detail = std::string(clause) + ": " + detail;
  return v;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::refuted: return "refuted";
    case Outcome::not_applicable: return "not_applicable";
  }
  return "?";
}

json to_json(const Verdict& v) {
  json j;
  j["outcome"] = std::string(to_string(v.outcome));
  j["detail"] = v.detail;
  if (v.is_refuted()) j["counterexample"] = v.payload;
  if (v.is_not_applicable()) j["window_limited"] = v.window_limited;
  return j;
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  const auto o = j.at("outcome").get<std::string>();
  if (o == "holds") v.outcome = Outcome::holds;
  else if (o == "refuted") v.outcome = Outcome::refuted;
  else v.outcome = Outcome::not_applicable;
  v.detail = j.value("detail", "");
  if (j.contains("counterexample")) v.payload = j["counterexample"];
  v.window_limited = j.value("window_limited", false);
  return v;
}

}  // namespace tripos
