#include "tripos/doctrine.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace tripos {

// ---------------------------------------------------------------- models

namespace {

const SpaceWindow& spaces_of(const Base& base) {
  auto* s = dynamic_cast<const SpaceWindow*>(&base);
  if (!s) throw MalformedInstance("open-set fibers need a space base");
  return *s;
}

std::string open_label(const FiniteSpace& s, std::uint64_t mask) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (mask >> i & 1) {
      out += (first ? "" : ",") + s.points[i];
      first = false;
    }
  return out + "}";
}

}  // namespace

FinPoset OpensModel::fiber(const Base& base, ObjId a) const {
  const FiniteSpace& s = spaces_of(base).space(a);
  std::vector<std::string> labels;
  for (std::uint64_t u : s.opens) labels.push_back(open_label(s, u));
  return FinPoset::from_relation(
      s.opens.size(), [&](Elem x, Elem y) { return (s.opens[x] & ~s.opens[y]) == 0; },
      std::move(labels));
}

std::vector<Elem> OpensModel::reindex(const Base& base, const ArrId& f) const {
  const SpaceWindow& w = spaces_of(base);
  const FiniteSpace& dom = w.space(f.dom);
  const FiniteSpace& cod = w.space(f.cod);
  std::vector<Elem> t;
  for (std::uint64_t u : cod.opens) {
    const std::uint64_t pre = w.preimage(f, u);
    auto it = std::lower_bound(dom.opens.begin(), dom.opens.end(), pre);
    if (it == dom.opens.end() || *it != pre)
      throw MalformedInstance("arrow " + w.arrow_name(f) + " is not continuous");
    t.push_back(static_cast<Elem>(it - dom.opens.begin()));
  }
  return t;
}

FinPoset TrivialModel::fiber(const Base&, ObjId) const {
  return FinPoset::from_relation(1, [](Elem, Elem) { return true; }, {"*"});
}

std::vector<Elem> TrivialModel::reindex(const Base&, const ArrId&) const { return {0}; }

FinPoset ExplicitModel::fiber(const Base& base, ObjId a) const {
  if (a.value >= fibers_.size())
    throw MalformedInstance("no fiber for object " + base.object_name(a));
  return fibers_[a.value];
}

std::vector<Elem> ExplicitModel::reindex(const Base& base, const ArrId& f) const {
  auto it = tables_.find(f);
  if (it != tables_.end()) return it->second;
  if (f == base.identity(f.dom)) {
    std::vector<Elem> t(fiber(base, f.dom).size());
    for (Elem i = 0; i < t.size(); ++i) t[i] = i;
    return t;
  }
  throw MalformedInstance("no reindexing table for arrow " + base.arrow_name(f));
}

std::vector<Elem> OverrideModel::reindex(const Base& base, const ArrId& f) const {
  auto it = tables_.find(f);
  if (it != tables_.end()) return it->second;
  return inner_->reindex(base, f);
}

// ---------------------------------------------------------------- Doctrine

struct Doctrine::Cache {
  std::mutex mutex;
  std::unordered_map<ObjId, std::shared_ptr<const FinPoset>> fibers;
  std::unordered_map<ArrId, std::unique_ptr<const std::vector<Elem>>> tables;
  std::unordered_map<ArrId, std::unique_ptr<const std::optional<std::vector<Elem>>>> sigma;
  std::unordered_map<ArrId, std::unique_ptr<const std::optional<std::vector<Elem>>>> pi;
};

Doctrine::Doctrine(std::shared_ptr<const Base> base, std::shared_ptr<const FiberModel> model,
                   std::string name, bool dual, json declared)
    : base_(std::move(base)),
      model_(std::move(model)),
      name_(std::move(name)),
      dual_(dual),
      declared_(std::move(declared)),
      cache_(std::make_shared<Cache>()) {}

std::shared_ptr<const FinPoset> Doctrine::fiber_ptr(ObjId a) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->fibers.find(a);
    if (it != cache_->fibers.end()) return it->second;
  }
  FinPoset p = model_->fiber(*base_, a);
  if (dual_) p = p.reversed();
  auto ptr = std::make_shared<const FinPoset>(std::move(p));
  std::lock_guard lock(cache_->mutex);
  return cache_->fibers.emplace(a, ptr).first->second;
}

const std::vector<Elem>& Doctrine::reindex_table(const ArrId& f) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->tables.find(f);
    if (it != cache_->tables.end()) return *it->second;
  }
  auto t = std::make_unique<const std::vector<Elem>>(model_->reindex(*base_, f));
  const std::size_t n_cod = fiber(f.cod).size(), n_dom = fiber(f.dom).size();
  if (t->size() != n_cod)
    throw MalformedInstance("reindexing table of " + arrow_name(f) + " has " +
                            std::to_string(t->size()) + " entries, fiber of " +
                            object_name(f.cod) + " has " + std::to_string(n_cod));
  for (Elem x : *t)
    if (x >= n_dom)
      throw MalformedInstance("reindexing table of " + arrow_name(f) +
                              " leaves the fiber of " + object_name(f.dom));
  std::lock_guard lock(cache_->mutex);
  return *cache_->tables.emplace(f, std::move(t)).first->second;
}

MonotoneMap Doctrine::reindex_map(const ArrId& f) const {
  return MonotoneMap{fiber_ptr(f.cod), fiber_ptr(f.dom), reindex_table(f)};
}

const std::optional<std::vector<Elem>>& Doctrine::sigma(const ArrId& f) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->sigma.find(f);
    if (it != cache_->sigma.end()) return *it->second;
  }
  std::optional<std::vector<Elem>> t;
  if (auto l = left_adjoint(reindex_map(f))) t = std::move(l->table);
  auto ptr = std::make_unique<const std::optional<std::vector<Elem>>>(std::move(t));
  std::lock_guard lock(cache_->mutex);
  return *cache_->sigma.emplace(f, std::move(ptr)).first->second;
}

const std::optional<std::vector<Elem>>& Doctrine::pi(const ArrId& f) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->pi.find(f);
    if (it != cache_->pi.end()) return *it->second;
  }
  std::optional<std::vector<Elem>> t;
  if (auto r = right_adjoint(reindex_map(f))) t = std::move(r->table);
  auto ptr = std::make_unique<const std::optional<std::vector<Elem>>>(std::move(t));
  std::lock_guard lock(cache_->mutex);
  return *cache_->pi.emplace(f, std::move(ptr)).first->second;
}

Doctrine Doctrine::dualized() const { return Doctrine(base_, model_, name_, !dual_, declared_); }

Doctrine Doctrine::with_reindex_override(const ArrId& f, std::vector<Elem> table) const {
  std::map<ArrId, std::vector<Elem>> tables;
  std::shared_ptr<const FiberModel> inner = model_;
  if (auto* o = dynamic_cast<const OverrideModel*>(model_.get())) {
    tables = o->tables();
    inner = o->inner_ptr();
  }
  tables[f] = std::move(table);
  return Doctrine(base_, std::make_shared<OverrideModel>(inner, std::move(tables)), name_, dual_,
                  declared_);
}

Doctrine Doctrine::with_name(std::string name) const {
  return Doctrine(base_, model_, std::move(name), dual_, declared_);
}

Doctrine Doctrine::with_declared(json declared) const {
  return Doctrine(base_, model_, name_, dual_, std::move(declared));
}

json elem_json(const Doctrine& d, ObjId a, Elem x) {
  return d.object_name(a) + ":" + d.label(a, x);
}

// ---------------------------------------------------------------- checks

namespace {

template <class F>
void for_window_arrows(const Base& c, F&& f) {
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& g : c.hom(a, b)) f(g);
}

}  // namespace

Verdict validate_doctrine(const Doctrine& d) {
  const Base& c = d.base();
  for (ObjId a : c.objects()) {
    Verdict v = d.fiber(a).validate();
    if (!v.ok()) {
      v.payload["object"] = d.object_name(a);
      return v.within("fiber of " + d.object_name(a));
    }
  }
  std::optional<Verdict> bad;
  for_window_arrows(c, [&](const ArrId& f) {
    if (bad) return;
    const MonotoneMap m = d.reindex_map(f);
    if (auto v = m.monotonicity_violation()) {
      bad = Verdict::refuted("reindexing is not monotone",
                             {{"law", "monotone"},
                              {"f", d.arrow_name(f)},
                              {"x", elem_json(d, f.cod, v->first)},
                              {"y", elem_json(d, f.cod, v->second)}});
      return;
    }
    if (f == c.identity(f.dom))
      for (Elem x = 0; x < m.table.size(); ++x)
        if (m.table[x] != x) {
          bad = Verdict::refuted("reindexing along an identity is not the identity",
                                 {{"law", "functor_identity"},
                                  {"f", d.arrow_name(f)},
                                  {"x", elem_json(d, f.cod, x)}});
          return;
        }
  });
  if (bad) return *bad;
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& f : c.hom(a, b))
        for (ObjId e : c.objects())
          for (const ArrId& g : c.hom(b, e)) {
            const ArrId gf = c.compose(g, f);
            const auto& tgf = d.reindex_table(gf);
            const auto& tf = d.reindex_table(f);
            const auto& tg = d.reindex_table(g);
            for (Elem x = 0; x < tgf.size(); ++x)
              if (tgf[x] != tf[tg[x]])
                return Verdict::refuted("reindexing is not functorial",
                                        {{"law", "functor_composition"},
                                         {"g", d.arrow_name(g)},
                                         {"f", d.arrow_name(f)},
                                         {"gf", d.arrow_name(gf)},
                                         {"x", elem_json(d, e, x)},
                                         {"left", elem_json(d, a, tgf[x])},
                                         {"right", elem_json(d, a, tf[tg[x]])}});
          }
  return Verdict::holds(c.window());
}

namespace {

Verdict extremes(const Doctrine& d, bool top) {
  const Base& c = d.base();
  const char* what = top ? "top" : "bottom";
  for (ObjId a : c.objects()) {
    const auto& ops = d.ops(a);
    if (!(top ? ops.top : ops.bottom))
      return Verdict::refuted(std::string("fiber has no ") + what,
                              {{"law", what}, {"object", d.object_name(a)}});
  }
  std::optional<Verdict> bad;
  for_window_arrows(c, [&](const ArrId& f) {
    if (bad) return;
    const Elem x = top ? *d.ops(f.cod).top : *d.ops(f.cod).bottom;
    const Elem y = top ? *d.ops(f.dom).top : *d.ops(f.dom).bottom;
    if (d.reindex(f, x) != y)
      bad = Verdict::refuted(std::string("reindexing does not preserve the ") + what,
                             {{"law", std::string("preserve_") + what}, {"f", d.arrow_name(f)}});
  });
  if (bad) return *bad;
  return Verdict::holds(c.window());
}

}  // namespace

Verdict has_tops(const Doctrine& d) { return extremes(d, true); }
Verdict has_bottoms(const Doctrine& d) { return extremes(d, false); }

Verdict is_primary(const Doctrine& d) {
  const Base& c = d.base();
  for (ObjId a : c.objects())
    if (!d.ops(a).meet) return Verdict::not_applicable("no meets in the fiber of " + d.object_name(a));
  std::optional<Verdict> bad;
  for_window_arrows(c, [&](const ArrId& f) {
    if (bad) return;
    const auto& s = d.ops(f.cod);
    const auto& t = d.ops(f.dom);
    const auto& tab = d.reindex_table(f);
    const Elem n = static_cast<Elem>(tab.size());
    for (Elem x = 0; x < n && !bad; ++x)
      for (Elem y = 0; y < n; ++y)
        if (tab[s.meet_of(x, y)] != t.meet_of(tab[x], tab[y])) {
          bad = Verdict::refuted("reindexing does not preserve binary meets",
                                 {{"law", "preserve_meet"},
                                  {"f", d.arrow_name(f)},
                                  {"a", elem_json(d, f.cod, x)},
                                  {"b", elem_json(d, f.cod, y)}});
          break;
        }
  });
  if (bad) return *bad;
  return Verdict::holds(c.window());
}

Verdict is_propositional(const Doctrine& d) {
  const Base& c = d.base();
  for (ObjId a : c.objects())
    if (!d.ops(a).is_heyting())
      return Verdict::refuted("fiber is not a Heyting algebra",
                              {{"law", "heyting_fiber"}, {"object", d.object_name(a)}});
  std::optional<Verdict> bad;
  for_window_arrows(c, [&](const ArrId& f) {
    if (bad) return;
    Verdict v = is_heyting_hom(d.reindex_map(f));
    if (!v.ok()) {
      v.payload["f"] = d.arrow_name(f);
      if (v.payload.contains("a")) v.payload["a"] = d.object_name(f.cod) + ":" + v.payload["a"].get<std::string>();
      if (v.payload.contains("b")) v.payload["b"] = d.object_name(f.cod) + ":" + v.payload["b"].get<std::string>();
      bad = v.within("reindexing along " + d.arrow_name(f));
    }
  });
  if (bad) return *bad;
  return Verdict::holds(c.window());
}

Verdict beck_chevalley(const Doctrine& d, const ArrowClass& cls, Side side, bool restricted) {
  const Base& c = d.base();
  const bool left = side == Side::left;
  const char* adj = left ? "left" : "right";
  auto adjoint = [&](const ArrId& f) -> const std::optional<std::vector<Elem>>& {
    return left ? d.sigma(f) : d.pi(f);
  };
  for (const ArrId& f : cls.members)
    if (!adjoint(f))
      return Verdict::not_applicable(std::string(adj) + " adjoint missing at " + d.arrow_name(f));
  for (const ArrId& f : cls.members) {
    const auto& adj_f = *adjoint(f);
    const auto& f_star = d.reindex_table(f);
    std::vector<Elem> gammas;
    if (restricted) {
      for (Elem xi = 0; xi < d.fiber(f.cod).size(); ++xi) gammas.push_back(f_star[xi]);
      std::sort(gammas.begin(), gammas.end());
      gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
    } else {
      for (Elem g = 0; g < d.fiber(f.dom).size(); ++g) gammas.push_back(g);
    }
    for (ObjId x : c.objects())
      for (const ArrId& h : c.hom(x, f.cod)) {
        const auto sq = c.pullback(f, h);
        if (!sq) continue;
        const auto& adj_g = adjoint(sq->pulled);
        if (!adj_g)
          return Verdict::not_applicable(std::string(adj) + " adjoint missing at pulled arrow " +
                                         d.arrow_name(sq->pulled));
        const auto& h_star = d.reindex_table(h);
        const auto& k_star = d.reindex_table(sq->lifted);
        for (Elem gamma : gammas) {
          const Elem lhs = h_star[adj_f[gamma]];
          const Elem rhs = (*adj_g)[k_star[gamma]];
          if (lhs != rhs)
            return Verdict::refuted(
                std::string(restricted ? "restricted " : "") + "Beck-Chevalley fails for " +
                    (left ? "Sigma" : "Pi"),
                {{"law", "beck_chevalley"},
                 {"side", left ? "sigma" : "pi"},
                 {"restricted", restricted},
                 {"class", cls.name},
                 {"f", d.arrow_name(f)},
                 {"h", d.arrow_name(h)},
                 {"g", d.arrow_name(sq->pulled)},
                 {"k", d.arrow_name(sq->lifted)},
                 {"gamma", elem_json(d, f.dom, gamma)},
                 {"lhs", elem_json(d, x, lhs)},
                 {"rhs", elem_json(d, x, rhs)}});
        }
      }
  }
  return Verdict::holds(c.window());
}

Verdict is_sigma_doctrine(const Doctrine& d, const ArrowClass& cls, bool restricted) {
  return beck_chevalley(d, cls, Side::left, restricted);
}

Verdict is_pi_doctrine(const Doctrine& d, const ArrowClass& cls, bool restricted) {
  return beck_chevalley(d, cls, Side::right, restricted);
}

Verdict frobenius(const Doctrine& d, const ArrowClass& cls, const SigmaProvider& supplied) {
  for (const ArrId& f : cls.members) {
    const auto& computed = d.sigma(f);
    std::optional<std::vector<Elem>> sigma = computed;
    if (supplied) {
      sigma = supplied(f);
      if (sigma && (!computed || *sigma != *computed)) {
        // Locate an element where the supplied table breaks the adjunction.
        const auto& fs = d.reindex_table(f);
        const FinPoset& dom = d.fiber(f.dom);
        const FinPoset& cod = d.fiber(f.cod);
        for (Elem a = 0; a < dom.size(); ++a)
          for (Elem b = 0; b < cod.size(); ++b)
            if (cod.leq((*sigma)[a], b) != dom.leq(a, fs[b]))
              return Verdict::refuted("supplied Sigma is not left adjoint to reindexing",
                                      {{"law", "adjunction"},
                                       {"f", d.arrow_name(f)},
                                       {"alpha", elem_json(d, f.dom, a)},
                                       {"beta", elem_json(d, f.cod, b)},
                                       {"sigma", elem_json(d, f.cod, (*sigma)[a])}});
      }
    }
    if (!sigma) return Verdict::not_applicable("left adjoint missing at " + d.arrow_name(f));
    const auto& sd = d.ops(f.dom);
    const auto& sc = d.ops(f.cod);
    if (!sd.meet || !sc.meet) return Verdict::not_applicable("no meets along " + d.arrow_name(f));
    const auto& fs = d.reindex_table(f);
    for (Elem a = 0; a < d.fiber(f.dom).size(); ++a)
      for (Elem b = 0; b < d.fiber(f.cod).size(); ++b) {
        const Elem lhs = (*sigma)[sd.meet_of(a, fs[b])];
        const Elem rhs = sc.meet_of(b, (*sigma)[a]);
        if (lhs != rhs)
          return Verdict::refuted("Frobenius reciprocity fails",
                                  {{"law", "frobenius"},
                                   {"class", cls.name},
                                   {"f", d.arrow_name(f)},
                                   {"alpha", elem_json(d, f.dom, a)},
                                   {"beta", elem_json(d, f.cod, b)},
                                   {"lhs", elem_json(d, f.cod, lhs)},
                                   {"rhs", elem_json(d, f.cod, rhs)}});
      }
  }
  return Verdict::holds(d.base().window());
}

Verdict is_existential(const Doctrine& d) {
  const ArrowClass prj = projection_class(d.base());
  Verdict s = is_sigma_doctrine(d, prj);
  if (!s.ok()) return s.within("Sigma-doctrine");
  Verdict f = frobenius(d, prj);
  if (!f.ok()) return f.within("Frobenius");
  return f;
}

}  // namespace tripos
