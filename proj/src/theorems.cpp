#include "tripos/theorems.hpp"

#include <chrono>
#include <stdexcept>

#include "tripos/io.hpp"

namespace tripos {

namespace {

using Check = std::function<Verdict(const Classifier&)>;

struct CheckDef {
  std::string name;
  std::string description;
  Check run;
};

Verdict needs(const Classifier& c, const std::string& name, Verdict (*then)(const Classifier&)) {
  const Verdict& v = c.check(name);
  if (!v.ok()) return Verdict::not_applicable("no " + name + " (" + v.detail + ")", v.window_limited);
  return then(c);
}

ArrowClass prj(const Classifier& c) { return projection_class(c.doctrine().base()); }

Verdict nonempty_fibers(const Classifier& c) {
  const Doctrine& d = c.doctrine();
  for (ObjId a : d.base().objects())
    if (d.fiber(a).size() == 0)
      return Verdict::refuted("empty fiber", {{"law", "nonempty"}, {"A", d.object_name(a)}});
  return Verdict::holds(d.base().window());
}

Verdict initial_singleton(const Classifier& c) {
  const Doctrine& d = c.doctrine();
  const auto z = stable_initial(d.base());
  if (!z) return Verdict::holds(d.base().window());
  if (d.fiber(*z).size() != 1)
    return Verdict::refuted("the fiber over the stable initial object is not a singleton",
                            {{"law", "singleton"},
                             {"object", d.object_name(*z)},
                             {"size", d.fiber(*z).size()}});
  return Verdict::holds(d.base().window());
}

Verdict has_initial(const Classifier& c) {
  const Base& b = c.doctrine().base();
  if (!stable_initial(b)) return Verdict::not_applicable("no stable initial object in the window");
  return Verdict::holds(b.window());
}

const std::vector<CheckDef>& defs() {
  static const std::vector<CheckDef> all = {
      {"primary", "binary meets preserved by reindexing",
       [](const Classifier& c) { return is_primary(c.doctrine()); }},
      {"tops", "tops preserved by reindexing", [](const Classifier& c) { return has_tops(c.doctrine()); }},
      {"bottoms", "bottoms preserved by reindexing",
       [](const Classifier& c) { return has_bottoms(c.doctrine()); }},
      {"propositional", "Heyting fibers and Heyting reindexing",
       [](const Classifier& c) { return is_propositional(c.doctrine()); }},
      {"sigma", "left adjoints along projections with Beck-Chevalley",
       [](const Classifier& c) { return is_sigma_doctrine(c.doctrine(), prj(c)); }},
      {"pi", "right adjoints along projections with Beck-Chevalley",
       [](const Classifier& c) { return is_pi_doctrine(c.doctrine(), prj(c)); }},
      {"existential", "Sigma-doctrine with Frobenius reciprocity",
       [](const Classifier& c) { return is_existential(c.doctrine()); }},
      {"elementary", "equality predicates", [](const Classifier& c) { return is_elementary(c.analysis()); }},
      {"substitutive", "equality predicates are substitutive",
       [](const Classifier& c) {
         return needs(c, "elementary", [](const Classifier& c) {
           return check_substitutive(c.analysis(), *find_equality(c.analysis()).witness);
         });
       }},
      {"derived_sigma", "Sigma_f from equality and Sigma along projections",
       [](const Classifier& c) { return check_derived_sigma(c.analysis()); }},
      {"comprehension", "comprehension arrows", [](const Classifier& c) { return has_comprehension(c.analysis()); }},
      {"full_comprehension", "comprehension reflects the order",
       [](const Classifier& c) { return is_full_comprehension(c.analysis()); }},
      {"restricted_sigma_cp", "restricted Beck-Chevalley for left adjoints along comprehension arrows",
       [](const Classifier& c) {
         return needs(c, "comprehension", [](const Classifier& c) {
           return is_sigma_doctrine(c.doctrine(), comprehension_class(c.analysis()), true);
         });
       }},
      {"restricted_pi_cp", "restricted Beck-Chevalley for right adjoints along comprehension arrows",
       [](const Classifier& c) {
         return needs(c, "comprehension", [](const Classifier& c) {
           return is_pi_doctrine(c.doctrine(), comprehension_class(c.analysis()), true);
         });
       }},
      {"frobenius_cp", "left adjoints along comprehension arrows with Frobenius",
       [](const Classifier& c) {
         return needs(c, "comprehension", [](const Classifier& c) {
           return frobenius(c.doctrine(), comprehension_class(c.analysis()));
         });
       }},
      {"cocomprehension", "co-comprehension arrows",
       [](const Classifier& c) { return has_cocomprehension(c.analysis()); }},
      {"full_cocomprehension", "co-comprehension reflects the order",
       [](const Classifier& c) { return is_full_cocomprehension(c.analysis()); }},
      {"restricted_sigma_cp_co", "restricted Beck-Chevalley for left adjoints along co-comprehension arrows",
       [](const Classifier& c) {
         return needs(c, "cocomprehension", [](const Classifier& c) {
           return is_sigma_doctrine(c.doctrine(), cocomprehension_class(c.analysis()), true);
         });
       }},
      {"negation", "natural pseudocomplement", [](const Classifier& c) { return has_negation(c.analysis()); }},
      {"classical", "double negation is the identity",
       [](const Classifier& c) { return is_classical(c.analysis()); }},
      {"cocomp_from_negation", "comprehension of the negation is a co-comprehension",
       [](const Classifier& c) { return check_cocomp_from_negation(c.analysis()); }},
      {"implicational", "an implication satisfying stability, exchange and the pointwise laws",
       [](const Classifier& c) {
         return implication_axioms(c.analysis(), characterization_provider(c.analysis()));
       }},
      {"derived_implication", "the comprehension-derived implication satisfies the implication laws",
       [](const Classifier& c) { return implication_axioms(c.analysis(), derived_provider(c.analysis())); }},
      {"higher_order", "weak power objects", [](const Classifier& c) { return is_higher_order(c.analysis()); }},
      {"tripos", "tripos by definition", [](const Classifier& c) { return is_tripos(c.analysis()); }},
      {"tripos_characterization", "tripos by the implicational characterization",
       [](const Classifier& c) { return is_tripos_via_characterization(c.analysis()); }},
      {"stable_initial", "a stable initial object exists", has_initial},
      {"nonempty_fibers", "every fiber is nonempty", nonempty_fibers},
      {"initial_singleton", "the fiber over a stable initial object is a singleton", initial_singleton},
      {"ac", "axiom of choice", [](const Classifier& c) { return ac_check(c.analysis()).verdict; }},
      {"eaco", "elementary, full co-comprehension, choice, compatibility",
       [](const Classifier& c) { return eaco_verdict(c.heaco_checklist()); }},
      {"heaco", "higher order eaco", [](const Classifier& c) { return heaco_verdict(c.heaco_checklist()); }},
  };
  return all;
}

const CheckDef& def(const std::string& name) {
  for (const auto& d : defs())
    if (d.name == name) return d;
  throw std::invalid_argument("unknown check: " + name);
}

}  // namespace

Classifier::Classifier(Doctrine d) : an_(std::move(d)) {}

const std::string& Classifier::hash() const {
  if (hash_.empty()) hash_ = instance_hash(doctrine());
  return hash_;
}

const Verdict& Classifier::check(const std::string& name) const {
  auto it = cache_.find(name);
  if (it != cache_.end()) return it->second;
  Verdict v = def(name).run(*this);
  return cache_.emplace(name, std::move(v)).first->second;
}

const HeacoChecklist& Classifier::heaco_checklist() const {
  if (!heaco_) heaco_ = std::make_unique<HeacoChecklist>(tripos::heaco_checklist(an_));
  return *heaco_;
}

const std::vector<std::string>& Classifier::names() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> n;
    for (const auto& d : defs()) n.push_back(d.name);
    return n;
  }();
  return out;
}

bool Classifier::known(const std::string& name) {
  for (const auto& d : defs())
    if (d.name == name) return true;
  return false;
}

std::string Classifier::describe(const std::string& name) { return def(name).description; }

// ---------------------------------------------------------------- reports

bool TheoremReport::hypotheses_hold() const {
  for (const auto& [name, v] : hypotheses)
    if (!v.ok()) return false;
  return true;
}

json to_json(const TheoremReport& r, bool timing) {
  json hyps = json::array();
  for (const auto& [name, v] : r.hypotheses) hyps.push_back({{"check", name}, {"verdict", to_json(v)}});
  json out = {{"theorem", r.id},
              {"instance", r.hash},
              {"hypotheses", hyps},
              {"conclusion", to_json(r.conclusion)},
              {"witnesses", r.witnesses}};
  if (timing) out["seconds"] = r.seconds;
  return out;
}

Verdict biconditional(const std::string& left_name, const Verdict& left,
                      const std::string& right_name, const Verdict& right,
                      const std::string& window) {
  if (left.is_not_applicable())
    return Verdict::not_applicable(left_name + " undecided (" + left.detail + ")", left.window_limited);
  if (right.is_not_applicable())
    return Verdict::not_applicable(right_name + " undecided (" + right.detail + ")",
                                   right.window_limited);
  if (left.ok() == right.ok()) return Verdict::holds(window);
  return Verdict::refuted(left_name + (left.ok() ? " holds but " : " fails but ") + right_name +
                              (right.ok() ? " holds" : " fails"),
                          {{"law", "biconditional"},
                           {"left", {{"check", left_name}, {"verdict", to_json(left)}}},
                           {"right", {{"check", right_name}, {"verdict", to_json(right)}}}});
}

namespace {

std::string window(const Classifier& c) { return c.doctrine().base().window(); }

Verdict first_of(std::initializer_list<std::pair<const char*, Verdict>> parts, const std::string& w) {
  for (const auto& [name, v] : parts)
    if (!v.ok()) return v.within(name);
  return Verdict::holds(w);
}

// Σ_{⌊α⌋} ⊤ = α for every α.
Verdict sigma_of_top(const Classifier& c) {
  const Doctrine& d = c.doctrine();
  const Analysis& an = c.analysis();
  for (ObjId a : d.base().objects())
    for (Elem alpha = 0; alpha < d.fiber(a).size(); ++alpha) {
      const auto m = an.comprehension(a, alpha);
      if (!m) return Verdict::not_applicable("no comprehension arrow for " + d.object_name(a));
      const auto& sigma = d.sigma(*m);
      const auto top = d.ops(m->dom).top;
      if (!sigma || !top) return Verdict::not_applicable("no left adjoint along " + d.arrow_name(*m));
      const Elem v = (*sigma)[*top];
      if (v != alpha)
        return Verdict::refuted("left adjoint of the top along a comprehension arrow differs",
                                {{"law", "sigma_top"},
                                 {"A", d.object_name(a)},
                                 {"alpha", elem_json(d, a, alpha)},
                                 {"m", d.arrow_name(*m)},
                                 {"value", elem_json(d, a, v)}});
    }
  return Verdict::holds(window(c));
}

Verdict arrows_into_initial_iso(const Classifier& c) {
  const Base& b = c.doctrine().base();
  const ObjId z = *stable_initial(b);
  for (ObjId x : b.objects())
    for (const ArrId& k : b.hom(x, z))
      if (!is_iso(b, k))
        return Verdict::refuted("an arrow into the stable initial object is not an isomorphism",
                                {{"law", "zero"}, {"k", b.arrow_name(k)}});
  return Verdict::holds(b.window());
}

Verdict bc_inequality(const Classifier& c) {
  const Doctrine& d = c.doctrine();
  const Base& b = d.base();
  for (ObjId a : b.objects()) {
    if (is_stable_initial(b, a).ok()) continue;
    for (ObjId g : b.objects()) {
      const ObjId p = b.product(g, a).object;
      const FinPoset& fib = d.fiber(g);
      for (Elem psi = 0; psi < d.fiber(p).size(); ++psi) {
        const auto e = c.analysis().epsilon(g, a, psi);
        if (!e) return Verdict::not_applicable("no choice arrow for " + elem_json(d, p, psi).get<std::string>());
        const Elem rhs = d.reindex(b.pair(b.identity(g), *e), psi);
        for (const ArrId& h : b.hom(g, a)) {
          const Elem lhs = d.reindex(b.pair(b.identity(g), h), psi);
          if (!fib.leq(lhs, rhs))
            return Verdict::refuted("a section exceeds the choice section",
                                    {{"law", "bc_lemma"},
                                     {"Gamma", d.object_name(g)},
                                     {"A", d.object_name(a)},
                                     {"psi", elem_json(d, p, psi)},
                                     {"h", d.arrow_name(h)},
                                     {"eps", d.arrow_name(*e)},
                                     {"lhs", elem_json(d, g, lhs)},
                                     {"rhs", elem_json(d, g, rhs)}});
        }
      }
    }
  }
  return Verdict::holds(b.window());
}

Verdict joins(const Classifier& c) {
  const Doctrine& d = c.doctrine();
  for (ObjId a : d.base().objects()) {
    const auto& ops = d.ops(a);
    if (!ops.bottom || !ops.join)
      return Verdict::refuted("a fiber lacks finite joins", {{"law", "finite_joins"}, {"A", d.object_name(a)}});
  }
  return Verdict::holds(window(c));
}

Verdict on_dual(const Classifier& c) {
  const Classifier dual(c.doctrine().dualized());
  return first_of({{"dual tripos", dual.check("tripos")},
                   {"dual full comprehension", dual.check("full_comprehension")}},
                  window(c));
}

Check same(const char* name) {
  return [name](const Classifier& c) { return c.check(name); };
}

Check iff(const char* left, const char* right) {
  return [left, right](const Classifier& c) {
    return biconditional(left, c.check(left), right, c.check(right), window(c));
  };
}

json initial_fiber(const Classifier& c) {
  const Doctrine& d = c.doctrine();
  const auto z = stable_initial(d.base());
  if (!z) return nullptr;
  return {{"initial", d.object_name(*z)}, {"fiber", d.fiber(*z).labels()}};
}

json into_initial(const Classifier& c) {
  const Base& b = c.doctrine().base();
  const auto z = stable_initial(b);
  if (!z) return nullptr;
  json arrows = json::array();
  for (ObjId x : b.objects())
    for (const ArrId& k : b.hom(x, *z)) arrows.push_back(b.arrow_name(k));
  return {{"initial", b.object_name(*z)}, {"arrows", arrows}};
}

json equality_witness(const Classifier& c) {
  const auto w = find_equality(c.analysis());
  if (!w.witness) return nullptr;
  const Doctrine& d = c.doctrine();
  json out = json::object();
  for (const auto& [a, delta] : w.witness->delta)
    out[d.object_name(a)] = elem_json(d, d.base().product(a, a).object, delta);
  return {{"delta", out}};
}

}  // namespace

const std::vector<TheoremCheck>& theorem_registry() {
  static const std::vector<TheoremCheck> all = {
      {"nonloso",
       "primary, full comprehension and Frobenius along comprehension arrows give restricted "
       "Beck-Chevalley along them, and the left adjoint of top along a comprehension arrow is "
       "the predicate",
       {"primary", "full_comprehension", "frobenius_cp"},
       [](const Classifier& c) {
         return first_of({{"restricted Sigma along comprehension arrows", c.check("restricted_sigma_cp")},
                          {"Sigma of top", sigma_of_top(c)}},
                         window(c));
       },
       {}},
      {"bingo", "Pi-doctrine with full comprehension and restricted Pi along comprehension arrows is implicational",
       {"pi", "full_comprehension", "restricted_pi_cp"}, same("derived_implication"), {}},
      {"bingo_converse", "if the derived implication satisfies the laws, comprehension is full",
       {"pi", "comprehension", "derived_implication"}, same("full_comprehension"), {}},
      {"negation_i", "comprehension and negation give co-comprehension",
       {"comprehension", "negation"},
       [](const Classifier& c) {
         return first_of({{"co-comprehension", c.check("cocomprehension")},
                          {"from negation", c.check("cocomp_from_negation")}},
                         window(c));
       },
       {}},
      {"negation_ii", "restricted Sigma along comprehension arrows passes to co-comprehension arrows",
       {"comprehension", "negation", "restricted_sigma_cp"}, same("restricted_sigma_cp_co"), {}},
      {"negation_iii", "with full comprehension, full co-comprehension iff classical",
       {"comprehension", "negation", "full_comprehension"}, iff("full_cocomprehension", "classical"), {}},
      {"zero", "under choice every arrow into the stable initial object is an isomorphism",
       {"ac", "stable_initial", "nonempty_fibers"},
       [](const Classifier& c) { return arrows_into_initial_iso(c); }, into_initial},
      {"bc_lemma", "every section of a relation lies below the choice section",
       {"ac"}, [](const Classifier& c) { return bc_inequality(c); }, {}},
      {"nonne0", "choice with bottoms and a trivial initial fiber gives a Sigma-doctrine",
       {"ac", "bottoms", "initial_singleton"}, same("sigma"), {}},
      {"nonne1", "a primary doctrine as in nonne0 is existential",
       {"primary", "ac", "bottoms", "initial_singleton"}, same("existential"), {}},
      {"sinistra",
       "higher order Sigma-doctrine with full co-comprehension and restricted Sigma along "
       "co-comprehension arrows has a dual tripos with full comprehension",
       {"higher_order", "sigma", "full_cocomprehension", "restricted_sigma_cp_co"},
       [](const Classifier& c) { return on_dual(c); }, {}},
      {"checazzo2", "an eaco has a singleton fiber over the stable initial object",
       {"eaco", "stable_initial"}, [](const Classifier& c) { return initial_singleton(c); }, initial_fiber},
      {"eaco_existential", "every eaco is existential", {"eaco"}, same("existential"), equality_witness},
      {"baggins", "every eaco has restricted Sigma along co-comprehension arrows",
       {"eaco"}, same("restricted_sigma_cp_co"), {}},
      {"frodo", "every heaco is a Pi-doctrine", {"heaco"}, same("pi"), {}},
      {"finite_joins", "every heaco has finite joins in its fibers",
       {"heaco"}, [](const Classifier& c) { return joins(c); }, {}},
      {"caratterino", "a heaco is implicational iff it is a tripos", {"heaco"}, iff("implicational", "tripos"), {}},
      {"prop1_equiv", "tripos by definition iff tripos by the characterization",
       {}, iff("tripos", "tripos_characterization"), {}},
  };
  return all;
}

const TheoremCheck& find_theorem(const std::string& id) {
  for (const auto& t : theorem_registry())
    if (t.id == id) return t;
  throw std::invalid_argument("unknown theorem id: " + id);
}

TheoremReport check_theorem(const std::string& id, const Classifier& cls) {
  const TheoremCheck& t = find_theorem(id);
  const auto start = std::chrono::steady_clock::now();
  TheoremReport r;
  r.id = t.id;
  r.hash = cls.hash();
  bool hold = true;
  for (const auto& h : t.hypotheses) {
    r.hypotheses.emplace_back(h, cls.check(h));
    hold = hold && r.hypotheses.back().second.ok();
  }
  if (hold) {
    r.conclusion = t.conclusion(cls);
    if (t.witnesses) r.witnesses = t.witnesses(cls);
  } else {
    for (const auto& [name, v] : r.hypotheses)
      if (!v.ok()) {
        r.conclusion = Verdict::not_applicable("hypothesis " + name + " not satisfied (" + v.detail + ")",
                                               v.window_limited);
        break;
      }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

TheoremReport check_theorem(const std::string& id, const Doctrine& d) {
  const Classifier cls(d);
  return check_theorem(id, cls);
}

std::vector<TheoremReport> check_all(const Classifier& cls) {
  std::vector<TheoremReport> out;
  for (const auto& t : theorem_registry()) out.push_back(check_theorem(t.id, cls));
  return out;
}

}  // namespace tripos
