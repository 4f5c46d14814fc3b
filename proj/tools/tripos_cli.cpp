#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tripos/catalog.hpp"
#include "tripos/enumerate.hpp"
#include "tripos/io.hpp"
#include "tripos/recheck.hpp"
#include "tripos/theorems.hpp"

using namespace tripos;

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  std::string instance;
  std::string json_path;
  std::string what;
  std::string theorem_id;
  bool all = false;
  std::string filter;
  std::size_t budget = 0;
  std::size_t window = 0;
  std::size_t limit = 10;
  bool list = false;
  std::string emit;
  bool timing = false;
};

// Human text goes to stdout, machine records to --json (one JSON value per line).
class Output {
 public:
  explicit Output(const Options& o) : path_(o.json_path) {}

  std::ostringstream human;

  void record(json r) { records_.push_back(std::move(r)); }

  void flush() {
    std::cout << human.str() << std::flush;
    if (path_.empty()) return;
    std::ostringstream text;
    for (const auto& r : records_) text << r.dump() << "\n";
    if (path_ == "-") {
      std::cout << text.str();
      return;
    }
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path_);
    out << text.str();
  }

 private:
  std::string path_;
  std::vector<json> records_;
};

json header(const std::string& command, const Doctrine& d) {
  return {{"schema", "tripos-report"},
          {"version", kSchemaVersion},
          {"command", command},
          {"instance", d.name()},
          {"hash", instance_hash(d)},
          {"window", d.base().window()}};
}

std::string outcome_word(const Verdict& v) {
  switch (v.outcome) {
    case Outcome::holds:
      return "holds";
    case Outcome::refuted:
      return "REFUTED";
    case Outcome::not_applicable:
      return v.window_limited ? "n/a (window)" : "n/a";
  }
  return "?";
}

void verdict_line(std::ostream& out, const std::string& name, const Verdict& v, std::size_t width = 24) {
  out << "  " << std::left << std::setw(static_cast<int>(width)) << name << outcome_word(v);
  if (!v.ok() && !v.detail.empty()) out << "  " << v.detail;
  out << "\n";
}

// Adds a re-verification line under refuted verdicts.
void recheck_line(std::ostream& out, const Doctrine& d, const Verdict& v) {
  if (!v.is_refuted()) return;
  const Recheck r = recheck_verdict(d, v);
  out << "    counterexample " << to_string(r.status) << ": " << r.detail << "\n";
}

int cmd_validate(const Options& o) {
  const Doctrine d = load_instance(o.instance);
  Output out(o);
  const Verdict laws = validate_doctrine(d);
  const Verdict declared = check_declared(d);
  out.human << "instance " << d.name() << " (" << instance_hash(d) << ")\n";
  out.human << "window   " << d.base().window() << "\n";
  verdict_line(out.human, "functor laws", laws);
  recheck_line(out.human, d, laws);
  verdict_line(out.human, "declared witnesses", declared);
  json rec = header("validate", d);
  rec["laws"] = to_json(laws);
  rec["declared"] = to_json(declared);
  out.record(rec);
  out.flush();
  return laws.is_refuted() || declared.is_refuted() ? 1 : 0;
}

int cmd_classify(const Options& o) {
  const Doctrine d = load_instance(o.instance);
  Output out(o);
  const Verdict laws = validate_doctrine(d);
  out.human << "instance " << d.name() << " (" << instance_hash(d) << ")\n";
  out.human << "window   " << d.base().window() << "\n";
  if (laws.is_refuted()) {
    verdict_line(out.human, "functor laws", laws);
    recheck_line(out.human, d, laws);
    json rec = header("classify", d);
    rec["laws"] = to_json(laws);
    out.record(rec);
    out.flush();
    return 1;
  }
  const Classifier cls(d);
  json checks = json::array();
  for (const auto& name : Classifier::names()) {
    const auto start = std::chrono::steady_clock::now();
    const Verdict& v = cls.check(name);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    verdict_line(out.human, name, v);
    recheck_line(out.human, d, v);
    json c = {{"check", name}, {"verdict", to_json(v)}};
    if (o.timing) c["seconds"] = secs;
    checks.push_back(c);
  }
  json rec = header("classify", d);
  rec["laws"] = to_json(laws);
  rec["checks"] = checks;
  out.record(rec);
  out.flush();
  return 0;
}

std::string elem_name(const Doctrine& d, ObjId a, std::optional<Elem> x) {
  return x ? d.label(a, *x) : "-";
}

int cmd_derive(const Options& o) {
  const Doctrine d = load_instance(o.instance);
  Output out(o);
  const Base& c = d.base();
  const Analysis an(d);
  json rec = header("derive", d);
  rec["what"] = o.what;
  json table = json::object();
  Verdict verdict = Verdict::holds(c.window());

  if (o.what == "sigma") {
    for (ObjId a : c.objects())
      for (ObjId b : c.objects())
        for (const ArrId& f : c.hom(a, b)) {
          const auto& adj = d.sigma(f);
          json row = json::object();
          out.human << d.arrow_name(f) << "\n";
          for (Elem x = 0; x < d.fiber(a).size(); ++x) {
            const auto v = derived_sigma(an, f, x);
            row[d.label(a, x)] = elem_name(d, b, v);
            out.human << "  " << d.label(a, x) << " |-> " << elem_name(d, b, v);
            if (adj) out.human << "  (adjoint " << d.label(b, (*adj)[x]) << ")";
            out.human << "\n";
          }
          table[d.arrow_name(f)] = row;
        }
    verdict = check_derived_sigma(an);
  } else if (o.what == "implication") {
    for (ObjId a : c.objects()) {
      json rows = json::object();
      const FinPoset& p = d.fiber(a);
      out.human << d.object_name(a) << "\n";
      for (Elem x = 0; x < p.size(); ++x)
        for (Elem y = 0; y < p.size(); ++y) {
          const auto v = an.derived_implication(a, x, y);
          rows[p.label(x) + " => " + p.label(y)] = elem_name(d, a, v);
          out.human << "  " << p.label(x) << " => " << p.label(y) << " = " << elem_name(d, a, v) << "\n";
        }
      table[d.object_name(a)] = rows;
    }
    verdict = implication_axioms(an, derived_provider(an));
  } else if (o.what == "cocomp") {
    for (ObjId a : c.objects()) {
      json rows = json::object();
      out.human << d.object_name(a) << "\n";
      for (Elem x = 0; x < d.fiber(a).size(); ++x) {
        const auto m = cocomp_from_negation(an, a, x);
        const std::string s = m ? d.arrow_name(*m) : "-";
        rows[d.label(a, x)] = s;
        out.human << "  " << d.label(a, x) << " : " << s << "\n";
      }
      table[d.object_name(a)] = rows;
    }
    verdict = check_cocomp_from_negation(an);
  } else if (o.what == "dual") {
    const Doctrine dual = dualize(d);
    table = serialize_instance(dual);
    out.human << dump_instance(dual);
  } else if (o.what == "graph") {
    for (ObjId x : c.objects())
      for (ObjId a : c.objects())
        for (const ArrId& f : c.hom(x, a)) {
          const auto g = graph(an, f);
          const ObjId xa = c.product(x, a).object;
          table[d.arrow_name(f)] = elem_name(d, xa, g);
          out.human << "  " << d.arrow_name(f) << " : " << elem_name(d, xa, g) << "\n";
        }
    verdict = find_equality(an).verdict.within("graph needs equality");
    if (verdict.is_refuted()) verdict = Verdict::not_applicable(verdict.detail);
  } else if (o.what == "epsilon") {
    const auto found = ac_check(an);
    verdict = found.verdict;
    if (found.witness)
      for (const auto& [key, e] : found.witness->eps) {
        const auto& [g, a, psi] = key;
        const ObjId ga = c.product(g, a).object;
        const std::string k = d.object_name(g) + " | " + d.object_name(a) + " | " + d.label(ga, psi);
        table[k] = d.arrow_name(e);
        out.human << "  " << k << " : " << d.arrow_name(e) << "\n";
      }
  } else {
    throw CLI::ValidationError("--what", "unknown construction " + o.what);
  }
  if (o.what != "dual") {
    verdict_line(out.human, o.what, verdict);
    recheck_line(out.human, d, verdict);
    rec["verdict"] = to_json(verdict);
  }
  rec["table"] = table;
  out.record(rec);
  out.flush();
  return verdict.is_refuted() ? 1 : 0;
}

int cmd_theorem(const Options& o) {
  if (o.all == !o.theorem_id.empty()) throw CLI::ValidationError("theorem", "give exactly one of --id and --all");
  const Doctrine d = load_instance(o.instance);
  Output out(o);
  const Classifier cls(d);
  std::vector<TheoremReport> reports;
  if (o.all)
    reports = check_all(cls);
  else
    reports.push_back(check_theorem(o.theorem_id, cls));
  out.record(header("theorem", d));
  bool violated = false;
  out.human << "instance " << d.name() << " (" << cls.hash() << ")\n";
  for (const auto& r : reports) {
    const auto& t = find_theorem(r.id);
    out.human << r.id << ": " << t.statement << "\n";
    for (const auto& [h, v] : r.hypotheses) verdict_line(out.human, "hyp " + h, v, 28);
    verdict_line(out.human, "conclusion", r.conclusion, 28);
    recheck_line(out.human, d, r.conclusion);
    if (o.timing) out.human << "  time " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
    if (r.violated()) {
      violated = true;
      out.human << "  VIOLATION: hypotheses hold and the conclusion is refuted\n";
    }
    out.record(to_json(r, o.timing));
  }
  out.flush();
  return violated ? 1 : 0;
}

int cmd_search(const Options& o) {
  EnumerationParams params;
  params.bases = default_bases();
  params.filter = o.filter;
  if (o.window) params.max_fiber = o.window;
  if (o.budget) params.budget = o.budget;
  Filter::parse(o.filter.empty() ? "true" : o.filter);  // report syntax errors before enumerating
  Output out(o);
  std::size_t shown = 0;
  const EnumerationStats stats = enumerate_doctrines(params, [&](const Doctrine& d, const Classifier& cls) {
    json rec = {{"kind", "match"}, {"name", d.name()}, {"hash", cls.hash()}, {"instance", serialize_instance(d)}};
    out.record(rec);
    out.human << "match " << d.name() << " (" << cls.hash() << ")\n";
    for (ObjId a : d.base().objects()) {
      const FinPoset& p = d.fiber(a);
      out.human << "  " << d.object_name(a) << ": " << p.size() << (p.size() == 1 ? " element" : " elements") << ", order";
      for (Elem x = 0; x < p.size(); ++x)
        for (Elem y = 0; y < p.size(); ++y)
          if (x != y && p.leq(x, y)) out.human << " " << p.label(x) << "<" << p.label(y);
      out.human << "\n";
    }
    return ++shown < o.limit;
  });
  out.human << "candidates " << stats.candidates << ", non-isomorphic " << stats.canonical << ", matches "
            << stats.emitted << (stats.budget_exhausted ? " (budget exhausted)" : "") << "\n";
  out.record({{"kind", "stats"},
              {"filter", o.filter},
              {"candidates", stats.candidates},
              {"canonical", stats.canonical},
              {"emitted", stats.emitted},
              {"budget_exhausted", stats.budget_exhausted}});
  out.flush();
  return 0;
}

int cmd_catalog(const Options& o) {
  if (o.list == !o.emit.empty()) throw CLI::ValidationError("catalog", "give exactly one of --list and --emit");
  if (o.list) {
    for (const auto& e : catalog()) std::cout << std::left << std::setw(14) << e.id << e.description << "\n";
    return 0;
  }
  std::cout << dump_instance(catalog_instance(o.emit));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite doctrines: classification, derived structure and theorem checks"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool instance) {
    if (instance)
      sub->add_option("instance", o.instance, "instance file, or catalog:<id>")->required();
    sub->add_option("--json", o.json_path, "write machine-readable records here ('-' for stdout)");
    sub->add_flag("--timing", o.timing, "include timings");
  };

  auto* validate = app.add_subcommand("validate", "check the instance laws and declared witnesses");
  add_common(validate, true);
  auto* classify = app.add_subcommand("classify", "evaluate every classification check");
  add_common(classify, true);
  auto* derive = app.add_subcommand("derive", "tabulate a derived construction");
  add_common(derive, true);
  derive->add_option("--what", o.what, "construction")
      ->required()
      ->check(CLI::IsMember({"sigma", "implication", "cocomp", "dual", "graph", "epsilon"}));
  auto* theorem = app.add_subcommand("theorem", "check registry theorems on an instance");
  add_common(theorem, true);
  theorem->add_option("--id", o.theorem_id, "theorem id");
  theorem->add_flag("--all", o.all, "every theorem");
  auto* search = app.add_subcommand("search", "enumerate doctrines over small thin bases");
  add_common(search, false);
  search->add_option("--filter", o.filter, "boolean filter over check names");
  search->add_option("--budget", o.budget, "candidate budget");
  search->add_option("--window", o.window, "largest fiber size")->check(CLI::Range(1, 5));
  search->add_option("--limit", o.limit, "stop after this many matches")->check(CLI::PositiveNumber);
  auto* cat = app.add_subcommand("catalog", "built-in instances");
  cat->add_flag("--list", o.list, "list ids");
  cat->add_option("--emit", o.emit, "print the instance file for an id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*classify) return cmd_classify(o);
    if (*derive) return cmd_derive(o);
    if (*theorem) return cmd_theorem(o);
    if (*search) return cmd_search(o);
    if (*cat) return cmd_catalog(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
