#include "tripos/logic.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace tripos {

namespace {

json obj_json(const Doctrine& d, ObjId a) { return d.object_name(a); }

// Shared by the existence searches: on a complete base the candidate set is
// everything there is, otherwise failure only says the window was too small.
Verdict missing(const Base& c, std::string what, json payload) {
  if (c.complete()) return Verdict::refuted(std::move(what), std::move(payload));
  return Verdict::not_applicable(what + " within the window", true);
}

Verdict first_of(const std::vector<std::pair<std::string, const Verdict*>>& parts,
                 const std::string& window) {
  for (const auto& [name, v] : parts)
    if (v->is_refuted()) return v->within(name);
  for (const auto& [name, v] : parts)
    if (v->is_not_applicable()) return v->within(name);
  return Verdict::holds(window);
}

}  // namespace

// ---------------------------------------------------------------- Analysis

struct Analysis::Memo {
  std::mutex mutex;
  std::once_flag order_once;
  std::vector<ObjId> order;  // materialized objects by (points, id)
  std::map<std::pair<ObjId, Elem>, std::optional<ArrId>> comp, cocomp;
  std::map<ObjId, Found<Elem>> delta;
  std::map<std::tuple<ObjId, ObjId, Elem>, std::optional<ArrId>> eps;
  std::map<ObjId, std::vector<std::optional<Elem>>> impl;
  std::once_flag neg_once;
  Found<NegationTable> neg;
};

Analysis::Analysis(Doctrine d) : d_(std::move(d)), memo_(std::make_shared<Memo>()) {}

namespace {

std::optional<Elem> extreme(const Doctrine& d, ObjId a, bool co) {
  const auto& ops = d.ops(a);
  return co ? ops.bottom : ops.top;
}

// Does every window f: Z -> cod m with f*α extreme factor uniquely through m?
bool universal(const Doctrine& d, const ArrId& m, Elem alpha, bool co) {
  const Base& c = d.base();
  for (ObjId z : c.objects()) {
    const auto ez = extreme(d, z, co);
    std::map<ArrId, int> hits;
    try {
      for (const ArrId& k : c.hom(z, m.dom)) ++hits[c.compose(m, k)];
      for (const ArrId& f : c.hom(z, m.cod)) {
        if (!ez || d.reindex(f, alpha) != *ez) continue;
        auto it = hits.find(f);
        if (it == hits.end() || it->second != 1) return false;
      }
    } catch (const WindowExceeded&) {
      return false;
    }
  }
  return true;
}

std::optional<ArrId> search(const Doctrine& d, const std::vector<ObjId>& order, ObjId a,
                            Elem alpha, bool co) {
  const Base& c = d.base();
  for (ObjId y : order) {
    const auto ey = extreme(d, y, co);
    if (!ey) continue;
    std::vector<ArrId> cands;
    try {
      cands = c.hom(y, a);
    } catch (const WindowExceeded&) {
      continue;
    }
    if (y == a) {
      const ArrId id = c.identity(a);
      std::stable_partition(cands.begin(), cands.end(), [&](const ArrId& g) { return g == id; });
    }
    for (const ArrId& m : cands)
      if (d.reindex(m, alpha) == *ey && universal(d, m, alpha, co)) return m;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ArrId> Analysis::comprehension(ObjId a, Elem alpha) const {
  std::call_once(memo_->order_once, [this] {
    const Base& c = base();
    std::vector<std::pair<std::size_t, ObjId>> keyed;
    for (ObjId y : c.materialized()) keyed.emplace_back(c.points(y), y);
    std::sort(keyed.begin(), keyed.end());
    for (auto& [p, y] : keyed) memo_->order.push_back(y);
  });
  {
    std::lock_guard lock(memo_->mutex);
    auto it = memo_->comp.find({a, alpha});
    if (it != memo_->comp.end()) return it->second;
  }
  auto r = search(d_, memo_->order, a, alpha, false);
  std::lock_guard lock(memo_->mutex);
  return memo_->comp.emplace(std::pair{a, alpha}, r).first->second;
}

std::optional<ArrId> Analysis::cocomprehension(ObjId a, Elem alpha) const {
  comprehension(a, alpha);  // fixes the candidate order
  {
    std::lock_guard lock(memo_->mutex);
    auto it = memo_->cocomp.find({a, alpha});
    if (it != memo_->cocomp.end()) return it->second;
  }
  auto r = search(d_, memo_->order, a, alpha, true);
  std::lock_guard lock(memo_->mutex);
  return memo_->cocomp.emplace(std::pair{a, alpha}, r).first->second;
}

namespace {

// Data of the elementary adjunction at (X, A).
struct DiagonalSquare {
  ObjId p, q;
  std::optional<std::vector<Elem>> left;  // Σ along id_X × Δ_A
  std::vector<Elem> r12;                  // ⟨π1,π2⟩*: fiber(P) -> fiber(Q)
  std::vector<Elem> r23;                  // ⟨π2,π3⟩*: fiber(A×A) -> fiber(Q)
};

DiagonalSquare diagonal_square(const Doctrine& d, ObjId x, ObjId a) {
  const Base& c = d.base();
  const ProductEntry p = c.product(x, a);
  const ProductEntry q = c.product(p.object, a);
  const ArrId e = c.pair(c.identity(p.object), p.second);
  const ArrId l23 = c.pair(c.compose(p.second, q.first), q.second);
  return DiagonalSquare{p.object, q.object, d.sigma(e), d.reindex_table(q.first),
                        d.reindex_table(l23)};
}

Found<Elem> search_delta(const Doctrine& d, ObjId a) {
  const Base& c = d.base();
  std::vector<std::pair<ObjId, DiagonalSquare>> squares;
  try {
    for (ObjId x : c.objects()) squares.emplace_back(x, diagonal_square(d, x, a));
  } catch (const WindowExceeded& e) {
    return {Verdict::not_applicable(std::string("product outside the window: ") + e.what(), true),
            std::nullopt};
  }
  const ObjId aa = c.product(a, a).object;
  json rejected = json::array();
  for (const auto& [x, sq] : squares) {
    if (!d.ops(sq.q).meet)
      return {Verdict::not_applicable("no meets in the fiber of " + d.object_name(sq.q)),
              std::nullopt};
    if (!sq.left)
      return {Verdict::refuted("reindexing along id x diagonal has no left adjoint",
                               {{"law", "equality"},
                                {"A", obj_json(d, a)},
                                {"X", obj_json(d, x)}}),
              std::nullopt};
  }
  for (Elem delta = 0; delta < d.fiber(aa).size(); ++delta) {
    std::optional<json> why;
    for (const auto& [x, sq] : squares) {
      const auto& ops = d.ops(sq.q);
      for (Elem psi = 0; psi < sq.r12.size() && !why; ++psi) {
        const Elem got = ops.meet_of(sq.r12[psi], sq.r23[delta]);
        if (got != (*sq.left)[psi])
          why = json{{"delta", d.label(aa, delta)},
                     {"X", obj_json(d, x)},
                     {"psi", elem_json(d, sq.p, psi)},
                     {"formula", elem_json(d, sq.q, got)},
                     {"adjoint", elem_json(d, sq.q, (*sq.left)[psi])}};
      }
      if (why) break;
    }
    if (!why) return {Verdict::holds(c.window()), delta};
    rejected.push_back(*why);
  }
  return {Verdict::refuted("no equality predicate over " + d.object_name(a),
                           {{"law", "equality"}, {"A", obj_json(d, a)}, {"rejected", rejected}}),
          std::nullopt};
}

}  // namespace

const Found<Elem>& Analysis::delta(ObjId a) const {
  {
    std::lock_guard lock(memo_->mutex);
    auto it = memo_->delta.find(a);
    if (it != memo_->delta.end()) return it->second;
  }
  Found<Elem> r = search_delta(d_, a);
  std::lock_guard lock(memo_->mutex);
  return memo_->delta.emplace(a, std::move(r)).first->second;
}

std::optional<ArrId> Analysis::epsilon(ObjId gamma, ObjId a, Elem psi) const {
  const auto key = std::tuple{gamma, a, psi};
  {
    std::lock_guard lock(memo_->mutex);
    auto it = memo_->eps.find(key);
    if (it != memo_->eps.end()) return it->second;
  }
  const Base& c = base();
  const ProductEntry p = c.product(gamma, a);
  std::optional<ArrId> r;
  if (const auto& sigma = d_.sigma(p.first)) {
    const Elem target = (*sigma)[psi];
    for (const ArrId& e : c.hom(gamma, a))
      if (d_.reindex(c.pair(c.identity(gamma), e), psi) == target) {
        r = e;
        break;
      }
  }
  std::lock_guard lock(memo_->mutex);
  return memo_->eps.emplace(key, r).first->second;
}

std::optional<Elem> Analysis::derived_implication(ObjId a, Elem phi, Elem psi) const {
  {
    std::lock_guard lock(memo_->mutex);
    auto it = memo_->impl.find(a);
    if (it != memo_->impl.end()) return it->second[phi * d_.fiber(a).size() + psi];
  }
  const std::size_t n = d_.fiber(a).size();
  std::vector<std::optional<Elem>> table(n * n);
  for (Elem f = 0; f < n; ++f) {
    const auto m = comprehension(a, f);
    if (!m) continue;
    const auto& pi = d_.pi(*m);
    if (!pi) continue;
    const auto& ms = d_.reindex_table(*m);
    for (Elem g = 0; g < n; ++g) table[f * n + g] = (*pi)[ms[g]];
  }
  std::lock_guard lock(memo_->mutex);
  return memo_->impl.emplace(a, std::move(table)).first->second[phi * n + psi];
}

const Found<NegationTable>& Analysis::negation() const {
  std::call_once(memo_->neg_once, [this] {
    const Base& c = base();
    NegationTable t;
    for (ObjId a : c.objects()) {
      const FinPoset& p = d_.fiber(a);
      const auto& ops = p.ops();
      if (!ops.meet || !ops.bottom) {
        memo_->neg = {Verdict::not_applicable("no meets or bottom in the fiber of " +
                                              d_.object_name(a)),
                      std::nullopt};
        return;
      }
      std::vector<Elem> neg(p.size());
      for (Elem b = 0; b < p.size(); ++b) {
        auto g = greatest_such_that(p, [&](Elem x) { return ops.meet_of(x, b) == *ops.bottom; });
        if (!g) {
          memo_->neg = {Verdict::not_applicable("no pseudocomplement of " + p.label(b) +
                                                " in the fiber of " + d_.object_name(a)),
                        std::nullopt};
          return;
        }
        neg[b] = *g;
      }
      t.neg[a] = std::move(neg);
    }
    for (ObjId x : c.objects())
      for (ObjId a : c.objects())
        for (const ArrId& f : c.hom(x, a)) {
          const auto& tab = d_.reindex_table(f);
          for (Elem b = 0; b < tab.size(); ++b) {
            const Elem lhs = tab[t.neg[a][b]];
            const Elem rhs = t.neg[x][tab[b]];
            if (lhs != rhs) {
              memo_->neg = {Verdict::refuted("pseudocomplement does not commute with reindexing",
                                             {{"law", "negation_natural"},
                                              {"f", d_.arrow_name(f)},
                                              {"beta", elem_json(d_, a, b)},
                                              {"lhs", elem_json(d_, x, lhs)},
                                              {"rhs", elem_json(d_, x, rhs)}}),
                            std::nullopt};
              return;
            }
          }
        }
    memo_->neg = {Verdict::holds(c.window()), std::move(t)};
  });
  return memo_->neg;
}

// ---------------------------------------------------------------- equality

Found<EqualityWitness> find_equality(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  EqualityWitness w;
  for (ObjId a : an.base().objects()) {
    const auto& f = an.delta(a);
    if (!f.verdict.ok()) return {f.verdict.within("equality over " + d.object_name(a)), std::nullopt};
    w.delta[a] = *f.witness;
  }
  return {Verdict::holds(an.base().window()), std::move(w)};
}

Verdict is_elementary(const Analysis& an) {
  const Verdict p = is_primary(an.doctrine());
  if (!p.ok()) return Verdict::not_applicable("not primary (" + p.detail + ")");
  return find_equality(an).verdict;
}

Verdict check_substitutive(const Analysis& an, const EqualityWitness& w) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  for (const auto& [a, delta] : w.delta) {
    const ProductEntry p = c.product(a, a);
    const auto& ops = d.ops(p.object);
    if (!ops.meet) return Verdict::not_applicable("no meets in the fiber of " + d.object_name(p.object));
    const auto& r1 = d.reindex_table(p.first);
    const auto& r2 = d.reindex_table(p.second);
    for (Elem psi = 0; psi < r1.size(); ++psi) {
      const Elem lhs = ops.meet_of(r1[psi], delta);
      const Elem rhs = ops.meet_of(r2[psi], delta);
      if (lhs != rhs)
        return Verdict::refuted("equality predicate is not substitutive",
                                {{"law", "substitutive"},
                                 {"A", obj_json(d, a)},
                                 {"delta", elem_json(d, p.object, delta)},
                                 {"psi", elem_json(d, a, psi)},
                                 {"lhs", elem_json(d, p.object, lhs)},
                                 {"rhs", elem_json(d, p.object, rhs)}});
    }
  }
  return Verdict::holds(c.window());
}

Found<EqualityWitness> find_tripos_equality(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  EqualityWitness w;
  for (ObjId x : c.objects()) {
    const auto top = d.ops(x).top;
    if (!top) return {Verdict::not_applicable("no top in the fiber of " + d.object_name(x)), std::nullopt};
    ObjId xx;
    try {
      xx = c.product(x, x).object;
    } catch (const WindowExceeded& e) {
      return {Verdict::not_applicable(e.what(), true), std::nullopt};
    }
    const auto& diag = d.reindex_table(c.diagonal(x));
    const FinPoset& p = d.fiber(xx);
    std::optional<Elem> found;
    for (Elem delta = 0; delta < p.size() && !found; ++delta) {
      bool ok = true;
      for (Elem alpha = 0; alpha < p.size() && ok; ++alpha)
        ok = (diag[alpha] == *top) == p.leq(delta, alpha);
      if (ok) found = delta;
    }
    if (!found)
      return {Verdict::refuted("no element classifies the diagonal over " + d.object_name(x),
                               {{"law", "tripos_equality"}, {"X", obj_json(d, x)}}),
              std::nullopt};
    w.delta[x] = *found;
  }
  return {Verdict::holds(c.window()), std::move(w)};
}

// ---------------------------------------------------------------- comprehension

namespace {

Verdict has_comp(const Analysis& an, bool co) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  const char* name = co ? "co-comprehension" : "comprehension";
  for (ObjId a : c.objects())
    if (!extreme(d, a, co))
      return Verdict::not_applicable(std::string("no ") + (co ? "bottom" : "top") +
                                     " in the fiber of " + d.object_name(a));
  for (ObjId a : c.objects())
    for (Elem alpha = 0; alpha < d.fiber(a).size(); ++alpha) {
      const auto m = co ? an.cocomprehension(a, alpha) : an.comprehension(a, alpha);
      if (!m)
        return missing(c, std::string("no ") + name + " arrow for " + d.object_name(a) + ":" +
                              d.label(a, alpha),
                       {{"law", co ? "cocomprehension" : "comprehension"},
                        {"A", obj_json(d, a)},
                        {"alpha", elem_json(d, a, alpha)}});
    }
  return Verdict::holds(c.window());
}

Verdict full_comp(const Analysis& an, bool co) {
  Verdict h = has_comp(an, co);
  if (!h.ok()) return h;
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  for (ObjId a : c.objects()) {
    const FinPoset& p = d.fiber(a);
    for (Elem alpha = 0; alpha < p.size(); ++alpha)
      for (Elem beta = 0; beta < p.size(); ++beta) {
        // comprehension: ⌊α⌋*β = ⊤ forces α <= β; co-comprehension: ⌈β⌉*α = ⊥ forces α <= β.
        const ArrId m = co ? *an.cocomprehension(a, beta) : *an.comprehension(a, alpha);
        const Elem probe = co ? alpha : beta;
        if (d.reindex(m, probe) == *extreme(d, m.dom, co) && !p.leq(alpha, beta))
          return Verdict::refuted(
              std::string(co ? "co-comprehension" : "comprehension") + " is not full",
              {{"law", co ? "full_cocomprehension" : "full_comprehension"},
               {"A", obj_json(d, a)},
               {"alpha", elem_json(d, a, alpha)},
               {"beta", elem_json(d, a, beta)},
               {"m", d.arrow_name(m)}});
      }
  }
  return Verdict::holds(c.window());
}

ArrowClass comp_class(const Analysis& an, bool co) {
  const Doctrine& d = an.doctrine();
  std::set<ArrId> ms;
  for (ObjId a : an.base().objects())
    for (Elem alpha = 0; alpha < d.fiber(a).size(); ++alpha)
      if (auto m = co ? an.cocomprehension(a, alpha) : an.comprehension(a, alpha)) ms.insert(*m);
  ArrowClass cls;
  cls.name = co ? "C_P_co" : "C_P";
  cls.members.assign(ms.begin(), ms.end());
  return cls;
}

}  // namespace

bool is_comprehension_arrow(const Doctrine& d, const ArrId& m, Elem alpha, bool co) {
  const auto e = extreme(d, m.dom, co);
  return e && d.reindex(m, alpha) == *e && universal(d, m, alpha, co);
}

Verdict has_comprehension(const Analysis& an) { return has_comp(an, false); }
Verdict is_full_comprehension(const Analysis& an) { return full_comp(an, false); }
ArrowClass comprehension_class(const Analysis& an) { return comp_class(an, false); }
Verdict has_cocomprehension(const Analysis& an) { return has_comp(an, true); }
Verdict is_full_cocomprehension(const Analysis& an) { return full_comp(an, true); }
ArrowClass cocomprehension_class(const Analysis& an) { return comp_class(an, true); }

// ---------------------------------------------------------------- negation

Verdict has_negation(const Analysis& an) { return an.negation().verdict; }

Verdict is_classical(const Analysis& an) {
  const auto& n = an.negation();
  if (!n.verdict.ok()) return Verdict::not_applicable("no negation (" + n.verdict.detail + ")");
  const Doctrine& d = an.doctrine();
  for (const auto& [a, neg] : n.witness->neg)
    for (Elem x = 0; x < neg.size(); ++x)
      if (neg[neg[x]] != x)
        return Verdict::refuted("double negation is not the identity",
                                {{"law", "classical"},
                                 {"A", obj_json(d, a)},
                                 {"alpha", elem_json(d, a, x)},
                                 {"not_not_alpha", elem_json(d, a, neg[neg[x]])}});
  return Verdict::holds(an.base().window());
}

// ---------------------------------------------------------------- implication

ImplProvider heyting_provider(const Doctrine& d) {
  return [d](ObjId a, Elem x, Elem y) -> std::optional<Elem> {
    const auto& ops = d.ops(a);
    if (!ops.implication) return std::nullopt;
    return ops.implies(x, y);
  };
}

ImplProvider derived_provider(const Analysis& an) {
  return [an](ObjId a, Elem x, Elem y) { return an.derived_implication(a, x, y); };
}

namespace {

using Table = std::vector<Elem>;

std::optional<Table> impl_table(const Doctrine& d, const ImplProvider& impl, ObjId a) {
  const std::size_t n = d.fiber(a).size();
  Table t(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      auto v = impl(a, x, y);
      if (!v) return std::nullopt;
      t[x * n + y] = *v;
    }
  return t;
}

json table_json(const Doctrine& d, ObjId a, const Table& t) {
  const FinPoset& p = d.fiber(a);
  const Elem n = static_cast<Elem>(p.size());
  json out = json::object();
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) out[p.label(x) + " => " + p.label(y)] = p.label(t[x * n + y]);
  return out;
}

}  // namespace

Verdict implication_axioms(const Analysis& an, const ImplProvider& impl) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  if (!impl) return Verdict::not_applicable("no implication operation");
  std::map<ObjId, Table> tables;
  for (ObjId a : c.objects()) {
    auto t = impl_table(d, impl, a);
    if (!t) return Verdict::not_applicable("implication undefined on the fiber of " + d.object_name(a));
    tables[a] = std::move(*t);
  }
  auto fail = [&](const char* item, ObjId a, json extra) {
    extra["law"] = "implication";
    extra["item"] = item;
    extra["A"] = obj_json(d, a);
    extra["table"] = table_json(d, a, tables[a]);
    return Verdict::refuted(std::string("implication law ") + item + " fails", std::move(extra));
  };
  // iv: pointwise laws.
  for (ObjId a : c.objects()) {
    const FinPoset& p = d.fiber(a);
    const Table& t = tables[a];
    const Elem n = static_cast<Elem>(p.size());
    auto I = [&](Elem x, Elem y) { return t[x * n + y]; };
    auto e = [&](Elem x) { return elem_json(d, a, x); };
    for (Elem phi = 0; phi < n; ++phi)
      for (Elem psi = 0; psi < n; ++psi)
        if (!p.leq(phi, I(psi, phi)))
          return fail("iv-a", a, {{"phi", e(phi)}, {"psi", e(psi)}});
    for (Elem g = 0; g < n; ++g)
      for (Elem phi = 0; phi < n; ++phi)
        for (Elem psi = 0; psi < n; ++psi)
          if (!p.leq(I(g, I(phi, psi)), I(I(g, phi), I(g, psi))))
            return fail("iv-b", a, {{"gamma", e(g)}, {"phi", e(phi)}, {"psi", e(psi)}});
    for (Elem g = 0; g < n; ++g)
      for (Elem phi = 0; phi < n; ++phi)
        for (Elem psi = 0; psi < n; ++psi)
          if (p.leq(g, I(phi, psi)) && p.leq(g, phi) && !p.leq(g, psi))
            return fail("iv-c", a, {{"gamma", e(g)}, {"phi", e(phi)}, {"psi", e(psi)}});
    for (Elem g = 0; g < n; ++g)
      for (Elem phi = 0; phi < n; ++phi)
        for (Elem psi = 0; psi < n; ++psi)
          if (p.leq(phi, psi) && !p.leq(g, I(phi, psi)))
            return fail("iv-d", a, {{"gamma", e(g)}, {"phi", e(phi)}, {"psi", e(psi)}});
  }
  // ii: stability under reindexing.
  for (ObjId x : c.objects())
    for (ObjId a : c.objects())
      for (const ArrId& f : c.hom(x, a)) {
        const auto& r = d.reindex_table(f);
        const Elem n = static_cast<Elem>(r.size());
        const Elem m = static_cast<Elem>(d.fiber(x).size());
        for (Elem al = 0; al < n; ++al)
          for (Elem be = 0; be < n; ++be) {
            const Elem lhs = r[tables[a][al * n + be]];
            const Elem rhs = tables[x][r[al] * m + r[be]];
            if (lhs != rhs)
              return fail("ii", a,
                          {{"f", d.arrow_name(f)},
                           {"alpha", elem_json(d, a, al)},
                           {"beta", elem_json(d, a, be)},
                           {"lhs", elem_json(d, x, lhs)},
                           {"rhs", elem_json(d, x, rhs)},
                           {"table_dom", table_json(d, x, tables[x])}});
          }
      }
  // iii: Π-exchange along projections X × A -> A.
  std::optional<Verdict> na;
  for (ObjId x : c.objects())
    for (ObjId a : c.objects()) {
      ProductEntry p;
      try {
        p = c.product(x, a);
      } catch (const WindowExceeded& ex) {
        if (!na) na = Verdict::not_applicable(ex.what(), true);
        continue;
      }
      const auto& pi = d.pi(p.second);
      if (!pi) {
        if (!na) na = Verdict::not_applicable("no right adjoint along " + d.arrow_name(p.second));
        continue;
      }
      auto tp = impl_table(d, impl, p.object);
      if (!tp) {
        if (!na) na = Verdict::not_applicable("implication undefined on the fiber of " +
                                              d.object_name(p.object));
        continue;
      }
      const auto& r = d.reindex_table(p.second);
      const Elem na_ = static_cast<Elem>(d.fiber(a).size());
      const Elem np = static_cast<Elem>(d.fiber(p.object).size());
      for (Elem al = 0; al < na_; ++al)
        for (Elem be = 0; be < np; ++be) {
          const Elem lhs = (*pi)[(*tp)[r[al] * np + be]];
          const Elem rhs = tables[a][al * na_ + (*pi)[be]];
          if (lhs != rhs)
            return fail("iii", a,
                        {{"projection", d.arrow_name(p.second)},
                         {"alpha", elem_json(d, a, al)},
                         {"beta", elem_json(d, p.object, be)},
                         {"lhs", elem_json(d, a, lhs)},
                         {"rhs", elem_json(d, a, rhs)},
                         {"table_product", table_json(d, p.object, *tp)}});
        }
    }
  if (na) return *na;
  return Verdict::holds(c.window());
}

// ---------------------------------------------------------------- power objects

Found<PowerObjectWitness> weak_power_object(const Analysis& an, ObjId a) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  std::vector<std::pair<std::size_t, ObjId>> keyed;
  for (ObjId p : c.objects()) keyed.emplace_back(c.points(p), p);
  std::sort(keyed.begin(), keyed.end());
  for (const auto& [pts, p] : keyed) {
    ObjId ap;
    std::vector<std::pair<ObjId, std::vector<std::pair<ArrId, const std::vector<Elem>*>>>> maps;
    try {
      ap = c.product(a, p).object;
      for (ObjId y : c.objects()) {
        std::vector<std::pair<ArrId, const std::vector<Elem>*>> row;
        for (const ArrId& chi : c.hom(y, p))
          row.emplace_back(chi, &d.reindex_table(c.cross(c.identity(a), chi)));
        maps.emplace_back(y, std::move(row));
      }
    } catch (const WindowExceeded&) {
      continue;
    }
    for (Elem member = 0; member < d.fiber(ap).size(); ++member) {
      PowerObjectWitness w{a, p, member, {}};
      bool ok = true;
      for (const auto& [y, row] : maps) {
        const std::size_t n = d.fiber(c.product(a, y).object).size();
        std::vector<std::optional<ArrId>> cover(n);
        std::size_t covered = 0;
        for (const auto& [chi, tab] : row) {
          const Elem phi = (*tab)[member];
          if (!cover[phi]) {
            cover[phi] = chi;
            ++covered;
          }
        }
        if (covered != n) {
          ok = false;
          break;
        }
        for (Elem phi = 0; phi < n; ++phi) w.chi[{y, phi}] = *cover[phi];
      }
      if (ok) return {Verdict::holds(c.window()), std::move(w)};
    }
  }
  return {missing(c, "no weak power object of " + d.object_name(a),
                  {{"law", "power_object"}, {"A", obj_json(d, a)}}),
          std::nullopt};
}

Verdict is_higher_order(const Analysis& an) {
  for (ObjId a : an.base().power_domain()) {
    auto w = weak_power_object(an, a);
    if (!w.verdict.ok()) return w.verdict;
  }
  return Verdict::holds(an.base().window());
}

// ---------------------------------------------------------------- choice

Found<EpsilonTable> ac_check(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  EpsilonTable t;
  for (ObjId a : c.objects()) {
    if (is_stable_initial(c, a).ok()) continue;
    for (ObjId g : c.objects()) {
      const ProductEntry p = c.product(g, a);
      const auto& sigma = d.sigma(p.first);
      if (!sigma)
        return {Verdict::not_applicable("no left adjoint along " + d.arrow_name(p.first)),
                std::nullopt};
      for (Elem psi = 0; psi < d.fiber(p.object).size(); ++psi) {
        auto e = an.epsilon(g, a, psi);
        if (!e)
          return {Verdict::refuted("no choice arrow realizes the existential",
                                   {{"law", "choice"},
                                    {"Gamma", obj_json(d, g)},
                                    {"A", obj_json(d, a)},
                                    {"psi", elem_json(d, p.object, psi)},
                                    {"sigma", elem_json(d, g, (*sigma)[psi])}}),
                  std::nullopt};
        t.eps[{g, a, psi}] = *e;
      }
    }
  }
  return {Verdict::holds(c.window()), std::move(t)};
}

// ---------------------------------------------------------------- triposes

TriposParts tripos_parts(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  const ArrowClass prj = projection_class(an.base());
  return TriposParts{is_propositional(d), is_sigma_doctrine(d, prj), is_pi_doctrine(d, prj),
                     find_tripos_equality(an).verdict, is_higher_order(an)};
}

Verdict combine(const TriposParts& p) {
  return first_of({{"propositional", &p.propositional},
                   {"Sigma-doctrine", &p.sigma},
                   {"Pi-doctrine", &p.pi},
                   {"equality", &p.equality},
                   {"higher order", &p.higher_order}},
                  p.propositional.ok() ? p.propositional.detail : p.higher_order.detail);
}

Verdict combine(const CharacterizationParts& p) {
  return first_of({{"Pi-doctrine", &p.pi},
                   {"implicational", &p.implicational},
                   {"higher order", &p.higher_order}},
                  p.pi.detail);
}

Verdict is_tripos(const Analysis& an) { return combine(tripos_parts(an)); }

ImplProvider characterization_provider(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  bool heyting = true;
  for (ObjId a : an.base().objects()) heyting = heyting && d.ops(a).implication.has_value();
  if (heyting) return heyting_provider(d);
  if (has_comprehension(an).ok()) return derived_provider(an);
  return {};
}

Verdict is_tripos_via_characterization(const Analysis& an, const ImplProvider& impl) {
  const Doctrine& d = an.doctrine();
  const ImplProvider use = impl ? impl : characterization_provider(an);
  return combine(CharacterizationParts{is_pi_doctrine(d, projection_class(an.base())),
                                       implication_axioms(an, use), is_higher_order(an)});
}

}  // namespace tripos
