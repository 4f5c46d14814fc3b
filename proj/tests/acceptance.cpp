// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance <tripos-cli>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "tripos/catalog.hpp"
#include "tripos/enumerate.hpp"
#include "tripos/io.hpp"
#include "tripos/recheck.hpp"
#include "tripos/theorems.hpp"

using namespace tripos;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

// Counts checks; the first failure is kept for the report.
struct Tally {
  std::size_t checked = 0, failed = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) first = what;
  }
  Result result(const std::string& summary) const {
    if (failed == 0) return {true, summary + " (" + std::to_string(checked) + " checks)"};
    return {false, std::to_string(failed) + " of " + std::to_string(checked) + " failed, first: " + first};
  }
};

std::string capture(const std::string& cmd, int* rc) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    *rc = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  *rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// Σ and Π along both projections of every product of window objects, and
// along the registered projection class, against image and ∀-image.
Result criterion1() {
  const Doctrine d = powerset_finset(2, 0);
  const Base& c = d.base();
  Tally t;
  std::set<ArrId> arrows;
  for (ObjId a : c.objects())
    for (ObjId b : c.objects()) {
      arrows.insert(c.product(a, b).first);
      arrows.insert(c.product(a, b).second);
    }
  for (const ArrId& f : projection_class(c).members) arrows.insert(f);
  for (const ArrId& f : arrows) {
    const auto& s = d.sigma(f);
    const auto& p = d.pi(f);
    t.expect(s.has_value() && p.has_value(), "missing adjoint along " + d.arrow_name(f));
    if (!s || !p) continue;
    for (Elem x = 0; x < d.fiber(f.dom).size(); ++x) {
      const std::uint64_t m = oracle::mask(d, f.dom, x);
      t.expect(oracle::mask(d, f.cod, (*s)[x]) == oracle::image(d, f, m), "sigma along " + d.arrow_name(f));
      t.expect(oracle::mask(d, f.cod, (*p)[x]) == oracle::forall_image(d, f, m), "pi along " + d.arrow_name(f));
    }
  }
  return t.result(std::to_string(arrows.size()) + " projections");
}

Result criterion2() {
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  Tally t;
  // every arrow between the objects 0, 1, 2; the equality predicate on a
  // product of two of them would need a set beyond the size cap
  const Base& c = d.base();
  std::vector<ArrId> arrows;
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& f : c.hom(a, b)) arrows.push_back(f);
  for (const ArrId& f : arrows) {
    const auto& s = d.sigma(f);
    for (Elem x = 0; x < d.fiber(f.dom).size(); ++x) {
      const auto v = derived_sigma(an, f, x);
      t.expect(s && v && *v == (*s)[x], "derived sigma along " + d.arrow_name(f));
      t.expect(v && oracle::mask(d, f.cod, *v) == oracle::image(d, f, oracle::mask(d, f.dom, x)),
               "derived sigma vs image along " + d.arrow_name(f));
    }
  }
  return t.result(std::to_string(arrows.size()) + " arrows");
}

Result criterion3() {
  Tally t;
  std::size_t applicable = 0;
  for (const auto& e : catalog()) {
    const Classifier c(e.make());
    const Doctrine& d = c.doctrine();
    const TheoremReport r = check_theorem("bingo", c);
    if (!r.hypotheses_hold()) continue;
    ++applicable;
    const Verdict v = implication_axioms(c.analysis(), derived_provider(c.analysis()));
    t.expect(v.ok(), e.id + ": " + v.detail);
    if (e.id.rfind("ps-", 0) != 0) continue;
    for (ObjId a : d.base().objects())
      for (Elem x = 0; x < d.fiber(a).size(); ++x)
        for (Elem y = 0; y < d.fiber(a).size(); ++y) {
          const auto i = c.analysis().derived_implication(a, x, y);
          const std::uint64_t boolean = (oracle::full(d, a) & ~oracle::mask(d, a, x)) | oracle::mask(d, a, y);
          t.expect(i && oracle::mask(d, a, *i) == boolean, e.id + ": not the Boolean implication");
        }
  }
  t.expect(applicable > 0, "no catalog instance meets the hypotheses");
  return t.result(std::to_string(applicable) + " instances meet the hypotheses");
}

Result criterion4() {
  EnumerationParams p;
  p.bases = default_bases();
  p.max_fiber = 3;
  p.budget = 100000;
  Tally t;
  std::size_t both_sides = 0;
  std::map<std::string, std::size_t> applicable;
  const auto stats = enumerate_doctrines(p, [&](const Doctrine&, const Classifier& c) {
    for (const char* id : {"bingo", "bingo_converse", "negation_iii"}) {
      const TheoremReport r = check_theorem(id, c);
      applicable[id] += r.hypotheses_hold();
      t.expect(!r.violated(), std::string(id) + " on " + c.hash() + ": " + r.conclusion.detail);
    }
    // the biconditionals read directly off the checks
    auto decided = [&](const char* n) { return !c.check(n).is_not_applicable(); };
    if (c.check("pi").ok() && c.check("comprehension").ok() && c.check("restricted_pi_cp").ok() &&
        decided("full_comprehension") && decided("derived_implication")) {
      ++both_sides;
      t.expect(c.check("full_comprehension").ok() == c.check("derived_implication").ok(),
               "fullness vs implication on " + c.hash());
    }
    if (c.check("comprehension").ok() && c.check("negation").ok() && c.check("full_comprehension").ok() &&
        decided("full_cocomprehension") && decided("classical"))
      t.expect(c.check("full_cocomprehension").ok() == c.check("classical").ok(),
               "co-comprehension vs classical on " + c.hash());
    return true;
  });
  t.expect(!stats.budget_exhausted, "budget exhausted before the space was covered");
  std::string hyps;
  for (const auto& [id, n] : applicable) {
    t.expect(n > 0, "no enumerated doctrine meets the hypotheses of " + id);
    hyps += ", " + id + " " + std::to_string(n);
  }
  return t.result(std::to_string(stats.emitted) + " doctrines from " + std::to_string(stats.candidates) +
                  " candidates; hypotheses met: " + hyps.substr(2) + "; fullness decided both ways on " +
                  std::to_string(both_sides));
}

Result criterion5() {
  const Doctrine d = catalog_instance("sier");
  const Classifier c(d);
  Tally t;
  t.expect(c.check("full_comprehension").ok(), "full comprehension: " + c.check("full_comprehension").detail);
  t.expect(c.check("full_cocomprehension").ok(), "full co-comprehension: " + c.check("full_cocomprehension").detail);
  const Verdict& neg = c.check("negation");
  t.expect(neg.is_refuted(), "negation is not refuted");
  if (!neg.is_refuted()) return t.result("");
  t.expect(recheck_verdict(d, neg).confirmed(), "counterexample not confirmed");
  // the counterexample map, re-evaluated with brute-force pseudocomplements
  const Base& b = d.base();
  const std::string map = neg.payload.at("f");
  const auto parsed = b.parse_arrow(map);
  t.expect(parsed.has_value(), "payload map " + map);
  if (!parsed) return t.result("");
  const ArrId f = *parsed;
  const std::string beta = neg.payload.at("beta");
  const auto elem = d.fiber(f.cod).find(beta.substr(beta.find(':') + 1));
  t.expect(elem.has_value(), "payload element " + beta);
  if (!elem) return t.result("");
  auto pseudo = [&](ObjId a, Elem x) {
    const FinPoset& p = d.fiber(a);
    return oracle::brute_implies(p, x, *p.ops().bottom);
  };
  const auto nb = pseudo(f.cod, *elem);
  const auto nfb = pseudo(f.dom, d.reindex(f, *elem));
  t.expect(nb && nfb && d.reindex(f, *nb) != *nfb, "map " + map + " is not a naturality counterexample");
  return t.result("negation refuted along " + map);
}

Result criterion6() {
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  const Base& c = d.base();
  Tally t;
  for (ObjId g : c.objects())
    for (ObjId a : c.objects()) {
      if (oracle::spaces(d).space(a).size() == 0) continue;
      const ProductEntry pr = c.product(g, a);
      for (Elem psi = 0; psi < d.fiber(pr.object).size(); ++psi) {
        const auto e = an.epsilon(g, a, psi);
        const std::string at = c.object_name(g) + "," + c.object_name(a) + "," + std::to_string(psi);
        t.expect(e.has_value(), "no epsilon at " + at);
        if (!e) continue;
        const std::uint64_t exists = oracle::image(d, pr.first, oracle::mask(d, pr.object, psi));
        const Elem chosen = d.reindex(c.pair(c.identity(g), *e), psi);
        t.expect(oracle::mask(d, g, chosen) == exists, "epsilon does not realize the image at " + at);
        for (const ArrId& h : c.hom(g, a))
          t.expect(oracle::subset(oracle::mask(d, g, d.reindex(c.pair(c.identity(g), h), psi)),
                                  oracle::mask(d, g, chosen)),
                   "section exceeds epsilon at " + at);
      }
    }
  const Classifier cls(d);
  for (const char* id : {"bc_lemma", "nonne0", "nonne1"}) {
    const TheoremReport r = check_theorem(id, cls);
    t.expect(r.hypotheses_hold(), std::string(id) + ": hypotheses do not hold");
    t.expect(r.conclusion.ok(), std::string(id) + ": " + r.conclusion.detail);
  }
  t.expect(cls.check("ac").ok(), "choice: " + cls.check("ac").detail);
  return t.result("PS(2,0)");
}

Result criterion7() {
  Tally t;
  for (const char* id : {"ps-1-1", "triv-ps"}) {
    const Classifier c(catalog_instance(id));
    const std::string tag = std::string(id) + ": ";
    t.expect(heaco_verdict(c.heaco_checklist()).ok(), tag + heaco_verdict(c.heaco_checklist()).detail);
    const HeacoResult r = heaco_to_tripos(c.analysis());
    t.expect(r.checklist.ok(), tag + "checklist " + r.checklist.detail);
    t.expect(r.tripos.ok(), tag + "dual tripos " + r.tripos.detail);
    t.expect(r.characterization.ok(), tag + "dual characterization " + r.characterization.detail);
    const Classifier dual(r.dual);
    t.expect(is_tripos(dual.analysis()).ok() && is_tripos_via_characterization(dual.analysis()).ok(),
             tag + "checkers disagree on the dual");
    for (const char* th : {"checazzo2", "baggins", "frodo", "finite_joins", "caratterino"}) {
      const TheoremReport rep = check_theorem(th, c);
      t.expect(rep.hypotheses_hold() && rep.conclusion.ok(), tag + th + ": " + rep.conclusion.detail);
    }
  }
  return t.result("ps-1-1 and triv-ps");
}

Result criterion8() {
  Tally t;
  std::size_t reports = 0;
  auto audit = [&](const Classifier& c, const std::string& name) {
    for (const auto& r : check_all(c)) {
      ++reports;
      t.expect(!r.violated(), r.id + " on " + name + ": " + r.conclusion.detail);
    }
  };
  for (const auto& e : catalog()) audit(Classifier(e.make()), e.id);
  EnumerationParams p;
  p.bases = default_bases();
  p.max_fiber = 4;
  p.budget = budget_ceiling();
  std::size_t enumerated = 0;
  enumerate_doctrines(p, [&](const Doctrine&, const Classifier& c) {
    audit(c, c.hash());
    return ++enumerated < 10000;
  });
  t.expect(enumerated == 10000, "only " + std::to_string(enumerated) + " doctrines enumerated");
  return t.result(std::to_string(catalog().size()) + " catalog + " + std::to_string(enumerated) +
                  " enumerated doctrines, " + std::to_string(reports) + " reports");
}

Result criterion9(const std::string& cli) {
  Tally t;
  for (const auto& e : catalog()) {
    const Doctrine d = e.make();
    const std::string text = dump_instance(d);
    t.expect(dump_instance(parse_instance(text)) == text, e.id + ": text round trip");
    t.expect(serialize_instance(parse_instance(serialize_instance(d))) == serialize_instance(d),
             e.id + ": document round trip");
    for (const char* mode : {" --json -", ""}) {
      int rc1 = 0, rc2 = 0;
      const std::string cmd = "'" + cli + "' classify catalog:" + e.id + mode + " 2>&1";
      const std::string a = capture(cmd, &rc1), b = capture(cmd, &rc2);
      t.expect(rc1 == rc2 && rc1 >= 0 && rc1 <= 1, e.id + ": classify exit " + std::to_string(rc1));
      t.expect(!a.empty() && a == b, e.id + ": classify output differs between runs");
    }
  }
  return t.result(std::to_string(catalog().size()) + " instances");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <tripos-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  struct Criterion {
    int number;
    double limit;  // seconds, 0 = none
    std::function<Result()> run;
  };
  const std::vector<Criterion> all = {
      {1, 10, criterion1},  {2, 0, criterion2},   {3, 0, criterion3},
      {4, 300, criterion4}, {5, 0, criterion5},   {6, 30, criterion6},
      {7, 120, criterion7}, {8, 0, criterion8},   {9, 0, [&] { return criterion9(cli); }},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Result o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && secs >= c.limit) {
      o.pass = false;
      o.detail += ", over the " + std::to_string(static_cast<int>(c.limit)) + " s limit";
    }
    std::ostringstream line;
    line << "criterion " << c.number << " " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << " ["
         << std::fixed << std::setprecision(2) << secs << " s]";
    std::cout << line.str() << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
