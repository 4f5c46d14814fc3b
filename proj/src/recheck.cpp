#include "tripos/recheck.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace tripos {

std::string_view to_string(Recheck::Status s) {
  switch (s) {
    case Recheck::Status::confirmed:
      return "confirmed";
    case Recheck::Status::rejected:
      return "rejected";
    case Recheck::Status::unsupported:
      return "unsupported";
  }
  return "?";
}

namespace {

struct BadPayload : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Table = std::vector<Elem>;

Recheck confirm(bool ok, const std::string& what) {
  return {ok ? Recheck::Status::confirmed : Recheck::Status::rejected,
          ok ? what : "not reproduced: " + what};
}

class Ctx {
 public:
  explicit Ctx(const Doctrine& d) : d(d), c(d.base()) {
    // Products of window objects are created lazily; payloads may name them.
    for (ObjId a : c.objects())
      for (ObjId b : c.objects()) try {
          const ObjId p = c.product(a, b).object;
          for (ObjId e : c.objects()) c.product(p, e);
        } catch (const WindowExceeded&) {
        }
  }

  ObjId obj(const json& j) const {
    if (!j.is_string()) throw BadPayload("expected an object name");
    auto o = c.find_object(j.get<std::string>());
    if (!o) throw BadPayload("unknown object " + j.get<std::string>());
    return *o;
  }

  std::pair<ObjId, Elem> elem(const json& j) const {
    if (!j.is_string()) throw BadPayload("expected an element");
    const std::string s = j.get<std::string>();
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw BadPayload("element without object: " + s);
    const ObjId a = obj(json(s.substr(0, colon)));
    auto x = d.fiber(a).find(s.substr(colon + 1));
    if (!x) throw BadPayload("unknown element " + s);
    return {a, *x};
  }

  Elem elem_in(const json& j, ObjId a) const {
    auto [o, x] = elem(j);
    if (o != a) throw BadPayload("element " + j.get<std::string>() + " is in the wrong fiber");
    return x;
  }

  ArrId arrow(const json& j) const {
    if (!j.is_string()) throw BadPayload("expected an arrow name");
    auto f = c.parse_arrow(j.get<std::string>());
    if (!f) throw BadPayload("unknown arrow " + j.get<std::string>());
    return *f;
  }

  const json& at(const json& p, const char* key) const {
    if (!p.contains(key)) throw BadPayload(std::string("payload lacks ") + key);
    return p[key];
  }

  // Adjoints recomputed from the reindexing map, bypassing the doctrine cache.
  std::optional<Table> left(const ArrId& f) const {
    auto m = left_adjoint(d.reindex_map(f));
    if (!m) return std::nullopt;
    return m->table;
  }
  std::optional<Table> right(const ArrId& f) const {
    auto m = right_adjoint(d.reindex_map(f));
    if (!m) return std::nullopt;
    return m->table;
  }

  std::optional<Elem> pseudocomplement(ObjId a, Elem x) const {
    const FinPoset& p = d.fiber(a);
    const auto& ops = p.ops();
    if (!ops.bottom || !ops.meet) return std::nullopt;
    return greatest_such_that(p, [&](Elem y) { return ops.meet_of(x, y) == *ops.bottom; });
  }

  // m*α is the extreme element and every window arrow with that property
  // factors through m exactly once.
  bool universal(const ArrId& m, Elem alpha, bool co) const {
    const auto& ops_s = d.ops(m.dom);
    const auto ext = co ? ops_s.bottom : ops_s.top;
    if (!ext || d.reindex(m, alpha) != *ext) return false;
    for (ObjId y : c.objects()) {
      const auto& oy = d.ops(y);
      const auto ey = co ? oy.bottom : oy.top;
      for (const ArrId& f : c.hom(y, m.cod)) {
        if (!ey || d.reindex(f, alpha) != *ey) continue;
        int count = 0;
        for (const ArrId& k : c.hom(y, m.dom))
          if (c.compose(m, k) == f) ++count;
        if (count != 1) return false;
      }
    }
    return true;
  }

  // g: P -> X, k: P -> A over h: X -> B and f: A -> B, checked against W.
  bool is_pullback(const ArrId& f, const ArrId& h, const ArrId& g, const ArrId& k) const {
    if (c.compose(h, g) != c.compose(f, k)) return false;
    for (ObjId z : c.objects())
      for (const ArrId& p : c.hom(z, h.dom))
        for (const ArrId& q : c.hom(z, f.dom)) {
          if (c.compose(h, p) != c.compose(f, q)) continue;
          int count = 0;
          for (const ArrId& u : c.hom(z, g.dom))
            if (c.compose(g, u) == p && c.compose(k, u) == q) ++count;
          if (count != 1) return false;
        }
    return true;
  }

  const Doctrine& d;
  const Base& c;
};

using Handler = std::function<Recheck(const Ctx&, const json&)>;

// A payload that states both sides of the failing equation must state them
// as recomputed.
Recheck sides(const Ctx& x, const json& p, ObjId a, Elem lhs, Elem rhs, const std::string& what) {
  for (const auto& [key, v] : {std::pair<const char*, Elem>{"lhs", lhs}, {"rhs", rhs}})
    if (p.contains(key) && x.elem_in(p[key], a) != v) return confirm(false, std::string("stated ") + key);
  return confirm(lhs != rhs, what);
}

Recheck law_monotone(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const Elem a = x.elem_in(x.at(p, "x"), f.cod), b = x.elem_in(x.at(p, "y"), f.cod);
  const FinPoset& dom = x.d.fiber(f.dom);
  return confirm(x.d.fiber(f.cod).leq(a, b) && !dom.leq(x.d.reindex(f, a), x.d.reindex(f, b)),
                 "reindexing reverses a comparable pair");
}

Recheck law_identity(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const Elem a = x.elem_in(x.at(p, "x"), f.cod);
  return confirm(f == x.c.identity(f.dom) && x.d.reindex(f, a) != a, "identity reindexing moves an element");
}

Recheck law_composition(const Ctx& x, const json& p) {
  const ArrId g = x.arrow(x.at(p, "g")), f = x.arrow(x.at(p, "f")), gf = x.arrow(x.at(p, "gf"));
  const Elem a = x.elem_in(x.at(p, "x"), g.cod);
  return confirm(x.c.compose(g, f) == gf && x.d.reindex(gf, a) != x.d.reindex(f, x.d.reindex(g, a)),
                 "(g f)* differs from f* g*");
}

Recheck law_extreme(const Ctx& x, const json& p, bool top) {
  const auto& ops = x.d.ops(x.obj(x.at(p, "object")));
  return confirm(!(top ? ops.top : ops.bottom), top ? "fiber has no top" : "fiber has no bottom");
}

Recheck law_preserve_extreme(const Ctx& x, const json& p, bool top) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const auto& s = x.d.ops(f.cod);
  const auto& t = x.d.ops(f.dom);
  const auto a = top ? s.top : s.bottom;
  const auto b = top ? t.top : t.bottom;
  return confirm(a && b && x.d.reindex(f, *a) != *b, "reindexing moves the extreme element");
}

Recheck law_preserve_meet(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const Elem a = x.elem_in(x.at(p, "a"), f.cod), b = x.elem_in(x.at(p, "b"), f.cod);
  const auto& s = x.d.ops(f.cod);
  const auto& t = x.d.ops(f.dom);
  if (!s.meet || !t.meet) return confirm(false, "meets exist on both sides");
  return confirm(x.d.reindex(f, s.meet_of(a, b)) != t.meet_of(x.d.reindex(f, a), x.d.reindex(f, b)),
                 "reindexing breaks a binary meet");
}

Recheck law_heyting_fiber(const Ctx& x, const json& p) {
  return confirm(!x.d.ops(x.obj(x.at(p, "object"))).is_heyting(), "fiber is not a Heyting algebra");
}

Recheck law_preservation(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const std::string op = x.at(p, "op").get<std::string>();
  const auto& s = x.d.ops(f.cod);
  const auto& t = x.d.ops(f.dom);
  auto r = [&](Elem e) { return x.d.reindex(f, e); };
  if (op == "top") return confirm(s.top && t.top && r(*s.top) != *t.top, "top not preserved");
  if (op == "bottom") return confirm(s.bottom && t.bottom && r(*s.bottom) != *t.bottom, "bottom not preserved");
  const Elem a = x.elem_in(x.at(p, "a"), f.cod), b = x.elem_in(x.at(p, "b"), f.cod);
  if (op == "meet" && s.meet && t.meet)
    return confirm(r(s.meet_of(a, b)) != t.meet_of(r(a), r(b)), "meet not preserved");
  if (op == "join" && s.join && t.join)
    return confirm(r(s.join_of(a, b)) != t.join_of(r(a), r(b)), "join not preserved");
  if (op == "implication" && s.implication && t.implication)
    return confirm(r(s.implies(a, b)) != t.implies(r(a), r(b)), "implication not preserved");
  return confirm(false, "operation " + op + " present on both sides");
}

Recheck law_beck_chevalley(const Ctx& x, const json& p) {
  const bool left = x.at(p, "side") == "sigma";
  const ArrId f = x.arrow(x.at(p, "f")), h = x.arrow(x.at(p, "h"));
  const ArrId g = x.arrow(x.at(p, "g")), k = x.arrow(x.at(p, "k"));
  const Elem gamma = x.elem_in(x.at(p, "gamma"), f.dom);
  if (!x.is_pullback(f, h, g, k)) return confirm(false, "the square is a pullback");
  if (x.at(p, "restricted").get<bool>()) {
    bool image = false;
    for (Elem xi = 0; xi < x.d.fiber(f.cod).size(); ++xi) image = image || x.d.reindex(f, xi) == gamma;
    if (!image) return confirm(false, "gamma is a reindexed element");
  }
  const auto af = left ? x.left(f) : x.right(f);
  const auto ag = left ? x.left(g) : x.right(g);
  if (!af || !ag) return confirm(false, "both adjoints exist");
  const Elem lhs = x.d.reindex(h, (*af)[gamma]);
  const Elem rhs = (*ag)[x.d.reindex(k, gamma)];
  return sides(x, p, h.dom, lhs, rhs, "h* Adj_f gamma differs from Adj_g k* gamma");
}

Recheck law_adjunction(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const Elem a = x.elem_in(x.at(p, "alpha"), f.dom);
  const Elem b = x.elem_in(x.at(p, "beta"), f.cod);
  const Elem s = x.elem_in(x.at(p, "sigma"), f.cod);
  return confirm(x.d.fiber(f.cod).leq(s, b) != x.d.fiber(f.dom).leq(a, x.d.reindex(f, b)),
                 "the supplied value breaks the adjunction");
}

Recheck law_frobenius(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const Elem a = x.elem_in(x.at(p, "alpha"), f.dom);
  const Elem b = x.elem_in(x.at(p, "beta"), f.cod);
  const auto s = x.left(f);
  const auto& sd = x.d.ops(f.dom);
  const auto& sc = x.d.ops(f.cod);
  if (!s || !sd.meet || !sc.meet) return confirm(false, "left adjoint and meets exist");
  return confirm((*s)[sd.meet_of(a, x.d.reindex(f, b))] != sc.meet_of(b, (*s)[a]), "Frobenius fails");
}

Recheck law_derived_sigma(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const Elem a = x.elem_in(x.at(p, "alpha"), f.dom);
  const auto s = x.left(f);
  const json& adj = x.at(p, "adjoint");
  const json& der = x.at(p, "derived");
  if (adj.is_null()) return confirm(!s, "no left adjoint along f");
  if (!s || (*s)[a] != x.elem_in(adj, f.cod)) return confirm(false, "the adjoint value");
  return confirm(der.is_null() || x.elem_in(der, f.cod) != (*s)[a],
                 "derived value (taken from the payload) differs from the adjoint");
}

Recheck law_derived_heyting(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const auto& ops = x.d.ops(a);
  if (!ops.implication) return confirm(false, "the fiber has an implication");
  const Elem phi = x.elem_in(x.at(p, "phi"), a), psi = x.elem_in(x.at(p, "psi"), a);
  return confirm(ops.implies(phi, psi) == x.elem_in(x.at(p, "heyting"), a) &&
                     ops.implies(phi, psi) != x.elem_in(x.at(p, "derived"), a),
                 "derived implication (taken from the payload) differs from the Heyting one");
}

Recheck law_negation_natural(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const Elem b = x.elem_in(x.at(p, "beta"), f.cod);
  const auto nb = x.pseudocomplement(f.cod, b);
  const auto nfb = x.pseudocomplement(f.dom, x.d.reindex(f, b));
  if (!nb || !nfb) return confirm(false, "pseudocomplements exist");
  return sides(x, p, f.dom, x.d.reindex(f, *nb), *nfb, "reindexing does not commute with the pseudocomplement");
}

Recheck law_classical(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const Elem alpha = x.elem_in(x.at(p, "alpha"), a);
  const auto n = x.pseudocomplement(a, alpha);
  const auto nn = n ? x.pseudocomplement(a, *n) : std::nullopt;
  return confirm(nn && *nn != alpha, "double pseudocomplement moves the element");
}

Recheck law_substitutive(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const ProductEntry aa = x.c.product(a, a);
  const Elem delta = x.elem_in(x.at(p, "delta"), aa.object);
  const Elem psi = x.elem_in(x.at(p, "psi"), a);
  const auto& ops = x.d.ops(aa.object);
  if (!ops.meet) return confirm(false, "meets exist");
  return confirm(ops.meet_of(x.d.reindex(aa.first, psi), delta) != ops.meet_of(x.d.reindex(aa.second, psi), delta),
                 "equality predicate is not substitutive");
}

Recheck law_tripos_equality(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "X"));
  const ObjId aa = x.c.product(a, a).object;
  const auto top = x.d.ops(a).top;
  if (!top) return confirm(false, "the fiber has a top");
  const FinPoset& q = x.d.fiber(aa);
  const ArrId diag = x.c.diagonal(a);
  for (Elem delta = 0; delta < q.size(); ++delta) {
    bool ok = true;
    for (Elem alpha = 0; alpha < q.size() && ok; ++alpha)
      ok = (x.d.reindex(diag, alpha) == *top) == q.leq(delta, alpha);
    if (ok) return confirm(false, "no element classifies the diagonal");
  }
  return confirm(true, "no element classifies the diagonal");
}

Recheck law_fullness(const Ctx& x, const json& p, bool co) {
  const ObjId a = x.obj(x.at(p, "A"));
  const Elem alpha = x.elem_in(x.at(p, "alpha"), a), beta = x.elem_in(x.at(p, "beta"), a);
  const ArrId m = x.arrow(x.at(p, "m"));
  if (m.cod != a || !x.universal(m, co ? beta : alpha, co))
    return confirm(false, "m has the universal property");
  const auto& ops = x.d.ops(m.dom);
  const auto ext = co ? ops.bottom : ops.top;
  return confirm(x.d.reindex(m, co ? alpha : beta) == *ext && !x.d.fiber(a).leq(alpha, beta),
                 "the arrow order does not reflect into the fiber order");
}

Recheck law_choice(const Ctx& x, const json& p) {
  const ObjId g = x.obj(x.at(p, "Gamma")), a = x.obj(x.at(p, "A"));
  const ProductEntry ga = x.c.product(g, a);
  const Elem psi = x.elem_in(x.at(p, "psi"), ga.object);
  if (is_stable_initial(x.c, a).ok()) return confirm(false, "A is not stable initial");
  const auto s = x.left(ga.first);
  if (!s || (*s)[psi] != x.elem_in(x.at(p, "sigma"), g)) return confirm(false, "the existential value");
  for (const ArrId& e : x.c.hom(g, a))
    if (x.d.reindex(x.c.pair(x.c.identity(g), e), psi) == (*s)[psi])
      return confirm(false, "no arrow realizes the existential");
  return confirm(true, "no arrow realizes the existential");
}

Recheck law_equality(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const Base& c = x.c;
  struct Square {
    ObjId p, q;
    Table r12, r23;
    std::optional<Table> left;
  };
  auto square = [&](ObjId xo) {
    const ProductEntry pe = c.product(xo, a);
    const ProductEntry qe = c.product(pe.object, a);
    const ArrId e = c.pair(c.identity(pe.object), pe.second);
    Square s{pe.object, qe.object, x.d.reindex_table(qe.first),
             x.d.reindex_table(c.pair(c.compose(pe.second, qe.first), qe.second)), x.left(e)};
    return s;
  };
  if (!p.contains("rejected")) {
    const ObjId xo = x.obj(x.at(p, "X"));
    return confirm(!square(xo).left, "no left adjoint along id x diagonal");
  }
  const ObjId aa = c.product(a, a).object;
  std::map<Elem, const json*> by_delta;
  for (const auto& r : p["rejected"]) {
    auto d = x.d.fiber(aa).find(r.at("delta").get<std::string>());
    if (!d) throw BadPayload("unknown delta");
    by_delta[*d] = &r;
  }
  for (Elem delta = 0; delta < x.d.fiber(aa).size(); ++delta) {
    auto it = by_delta.find(delta);
    if (it == by_delta.end()) return confirm(false, "every candidate is rejected");
    const json& r = *it->second;
    const Square s = square(x.obj(r.at("X")));
    const Elem psi = x.elem_in(r.at("psi"), s.p);
    const auto& ops = x.d.ops(s.q);
    if (!s.left || !ops.meet) return confirm(false, "left adjoint and meets exist");
    if (ops.meet_of(s.r12[psi], s.r23[delta]) == (*s.left)[psi])
      return confirm(false, "candidate " + r.at("delta").get<std::string>() + " is rejected");
  }
  return confirm(true, "every candidate equality predicate fails the adjunction");
}

Recheck law_sigma_top(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const Elem alpha = x.elem_in(x.at(p, "alpha"), a);
  const ArrId m = x.arrow(x.at(p, "m"));
  if (m.cod != a || !x.universal(m, alpha, false)) return confirm(false, "m is a comprehension arrow");
  const auto s = x.left(m);
  const auto top = x.d.ops(m.dom).top;
  return confirm(s && top && (*s)[*top] != alpha, "left adjoint of top differs from the predicate");
}

Recheck law_zero(const Ctx& x, const json& p) {
  const ArrId k = x.arrow(x.at(p, "k"));
  return confirm(is_stable_initial(x.c, k.cod).ok() && !is_iso(x.c, k),
                 "an arrow into the stable initial object is not invertible");
}

Recheck law_bc_lemma(const Ctx& x, const json& p) {
  const ObjId g = x.obj(x.at(p, "Gamma")), a = x.obj(x.at(p, "A"));
  const ProductEntry ga = x.c.product(g, a);
  const Elem psi = x.elem_in(x.at(p, "psi"), ga.object);
  const ArrId h = x.arrow(x.at(p, "h")), e = x.arrow(x.at(p, "eps"));
  const auto s = x.left(ga.first);
  const Elem re = x.d.reindex(x.c.pair(x.c.identity(g), e), psi);
  if (!s || (*s)[psi] != re) return confirm(false, "eps realizes the existential");
  const Elem rh = x.d.reindex(x.c.pair(x.c.identity(g), h), psi);
  return confirm(!x.d.fiber(g).leq(rh, re), "a section exceeds the choice section");
}

Recheck law_singleton(const Ctx& x, const json& p) {
  const ObjId z = x.obj(x.at(p, "object"));
  return confirm(is_stable_initial(x.c, z).ok() && x.d.fiber(z).size() != 1,
                 "the fiber over the stable initial object is not a singleton");
}

Recheck law_finite_joins(const Ctx& x, const json& p) {
  const auto& ops = x.d.ops(x.obj(x.at(p, "A")));
  return confirm(!ops.bottom || !ops.join, "a fiber lacks finite joins");
}

Recheck law_nonempty(const Ctx& x, const json& p) {
  return confirm(x.d.fiber(x.obj(x.at(p, "A"))).size() == 0, "empty fiber");
}

Recheck law_biconditional(const Ctx& x, const json& p) {
  for (const char* side : {"left", "right"}) {
    const Verdict v = verdict_from_json(x.at(x.at(p, side), "verdict"));
    if (v.is_refuted()) {
      Recheck r = recheck_payload(x.d, v.payload);
      r.detail = x.at(p, side).at("check").get<std::string>() + " refuted: " + r.detail +
                 " (the other side holds over the window)";
      return r;
    }
  }
  return confirm(false, "one side refuted");
}

// The operator under test is the table carried in the payload.
class ImplTable {
 public:
  ImplTable(const Ctx& x, ObjId a, const json& t) : p_(x.d.fiber(a)) {
    const Elem n = static_cast<Elem>(p_.size());
    t_.resize(n * n);
    for (Elem u = 0; u < n; ++u)
      for (Elem v = 0; v < n; ++v) {
        const json& cell = t.at(p_.label(u) + " => " + p_.label(v));
        auto e = p_.find(cell.get<std::string>());
        if (!e) throw BadPayload("unknown element in implication table");
        t_[u * n + v] = *e;
      }
  }
  Elem operator()(Elem u, Elem v) const { return t_[u * p_.size() + v]; }

 private:
  const FinPoset& p_;
  std::vector<Elem> t_;
};

Recheck law_implication(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const std::string item = x.at(p, "item").get<std::string>();
  const ImplTable I(x, a, x.at(p, "table"));
  const FinPoset& f = x.d.fiber(a);
  auto e = [&](const char* k) { return x.elem_in(x.at(p, k), a); };
  if (item == "iv-a") return confirm(!f.leq(e("phi"), I(e("psi"), e("phi"))), "phi <= psi => phi fails");
  if (item == "iv-b") {
    const Elem g = e("gamma"), phi = e("phi"), psi = e("psi");
    return confirm(!f.leq(I(g, I(phi, psi)), I(I(g, phi), I(g, psi))), "distribution over implication fails");
  }
  if (item == "iv-c") {
    const Elem g = e("gamma"), phi = e("phi"), psi = e("psi");
    return confirm(f.leq(g, I(phi, psi)) && f.leq(g, phi) && !f.leq(g, psi), "modus ponens fails");
  }
  if (item == "iv-d") {
    const Elem g = e("gamma"), phi = e("phi"), psi = e("psi");
    return confirm(f.leq(phi, psi) && !f.leq(g, I(phi, psi)), "phi <= psi without gamma <= phi => psi");
  }
  if (item == "ii") {
    const ArrId m = x.arrow(x.at(p, "f"));
    if (m.cod != a) return confirm(false, "f lands in A");
    const ImplTable J(x, m.dom, x.at(p, "table_dom"));
    const Elem al = e("alpha"), be = e("beta");
    return sides(x, p, m.dom, x.d.reindex(m, I(al, be)), J(x.d.reindex(m, al), x.d.reindex(m, be)),
                 "reindexing does not preserve the implication");
  }
  if (item == "iii") {
    const ArrId pr = x.arrow(x.at(p, "projection"));
    if (pr.cod != a) return confirm(false, "the projection lands in A");
    const ImplTable J(x, pr.dom, x.at(p, "table_product"));
    const auto pi = x.right(pr);
    if (!pi) return confirm(false, "right adjoint along the projection");
    const Elem al = e("alpha");
    const Elem be = x.elem_in(x.at(p, "beta"), pr.dom);
    return sides(x, p, a, (*pi)[J(x.d.reindex(pr, al), be)], I(al, (*pi)[be]), "Pi exchange law fails");
  }
  return {Recheck::Status::unsupported, "implication item " + item};
}

Recheck law_comprehension_exists(const Ctx& x, const json& p, bool co) {
  const auto [a, alpha] = x.elem(x.at(p, "alpha"));
  for (ObjId y : x.c.materialized())
    for (const ArrId& m : x.c.hom(y, a))
      if (x.universal(m, alpha, co)) return confirm(false, "no arrow is universal");
  return confirm(true, std::string("no ") + (co ? "co-" : "") + "comprehension arrow among materialized objects");
}

Recheck law_power_object(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const Base& c = x.c;
  for (ObjId pw : c.objects()) {
    ObjId ap;
    try {
      ap = c.product(a, pw).object;
      for (ObjId y : c.objects()) c.product(a, y);
    } catch (const WindowExceeded&) {
      continue;
    }
    for (Elem member = 0; member < x.d.fiber(ap).size(); ++member) {
      bool covers_all = true;
      for (ObjId y : c.objects()) {
        std::vector<bool> hit(x.d.fiber(c.product(a, y).object).size(), false);
        for (const ArrId& chi : c.hom(y, pw)) hit[x.d.reindex(c.cross(c.identity(a), chi), member)] = true;
        if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
          covers_all = false;
          break;
        }
      }
      if (covers_all) return confirm(false, "no candidate power object");
    }
  }
  return confirm(true, "no window object carries a weak power object");
}

Recheck law_identity_unit(const Ctx& x, const json& p, bool left) {
  const ArrId f = x.arrow(x.at(p, "f"));
  const auto r = left ? x.c.try_compose(x.c.identity(f.cod), f) : x.c.try_compose(f, x.c.identity(f.dom));
  return confirm(r != f, "identity does not act as a unit");
}

Recheck law_associativity(const Ctx& x, const json& p) {
  const ArrId h = x.arrow(x.at(p, "h")), g = x.arrow(x.at(p, "g")), f = x.arrow(x.at(p, "f"));
  return confirm(x.c.compose(h, x.c.compose(g, f)) != x.c.compose(x.c.compose(h, g), f), "associativity fails");
}

Recheck law_terminal(const Ctx& x, const json& p) {
  return confirm(x.c.hom(x.obj(x.at(p, "object")), x.c.terminal()).size() != 1, "not exactly one arrow to 1");
}

Recheck law_product(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "a")), b = x.obj(x.at(p, "b"));
  const ArrId f = x.arrow(x.at(p, "f")), g = x.arrow(x.at(p, "g"));
  const ProductEntry pe = x.c.product(a, b);
  int count = 0;
  for (const ArrId& h : x.c.hom(f.dom, pe.object))
    count += x.c.compose(pe.first, h) == f && x.c.compose(pe.second, h) == g;
  return confirm(count != 1, "mediating arrow is not unique");
}

Recheck law_monic(const Ctx& x, const json& p) {
  const ArrId f = x.arrow(x.at(p, "f")), g = x.arrow(x.at(p, "g")), h = x.arrow(x.at(p, "h"));
  return confirm(g != h && x.c.compose(f, g) == x.c.compose(f, h), "f g = f h with g != h");
}

Recheck law_initial(const Ctx& x, const json& p) {
  return confirm(x.c.hom(x.obj(x.at(p, "object")), x.obj(x.at(p, "target"))).size() != 1,
                 "not exactly one arrow out");
}

Recheck law_stable_initial(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "object")), f = x.obj(x.at(p, "factor"));
  const ObjId q = x.c.product(f, a).object;
  // explicit mutual-inverse search
  for (const ArrId& u : x.c.hom(q, a))
    for (const ArrId& v : x.c.hom(a, q))
      if (x.c.compose(v, u) == x.c.identity(q) && x.c.compose(u, v) == x.c.identity(a))
        return confirm(false, "no isomorphism");
  return confirm(true, "X x 0 is not isomorphic to 0");
}

Recheck law_cocomp_from_negation(const Ctx& x, const json& p) {
  const ObjId a = x.obj(x.at(p, "A"));
  const Elem alpha = x.elem_in(x.at(p, "alpha"), a);
  const ArrId m = x.arrow(x.at(p, "m"));
  const auto n = x.pseudocomplement(a, alpha);
  if (!n || m.cod != a || !x.universal(m, *n, false)) return confirm(false, "m is the comprehension of the negation");
  return confirm(!x.universal(m, alpha, true), "comprehension of the negation is not a co-comprehension");
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> all = {
      {"monotone", law_monotone},
      {"functor_identity", law_identity},
      {"functor_composition", law_composition},
      {"top", [](const Ctx& x, const json& p) { return law_extreme(x, p, true); }},
      {"bottom", [](const Ctx& x, const json& p) { return law_extreme(x, p, false); }},
      {"preserve_top", [](const Ctx& x, const json& p) { return law_preserve_extreme(x, p, true); }},
      {"preserve_bottom", [](const Ctx& x, const json& p) { return law_preserve_extreme(x, p, false); }},
      {"preserve_meet", law_preserve_meet},
      {"heyting_fiber", law_heyting_fiber},
      {"preservation", law_preservation},
      {"beck_chevalley", law_beck_chevalley},
      {"adjunction", law_adjunction},
      {"frobenius", law_frobenius},
      {"derived_sigma", law_derived_sigma},
      {"derived_heyting", law_derived_heyting},
      {"negation_natural", law_negation_natural},
      {"classical", law_classical},
      {"substitutive", law_substitutive},
      {"tripos_equality", law_tripos_equality},
      {"full_comprehension", [](const Ctx& x, const json& p) { return law_fullness(x, p, false); }},
      {"full_cocomprehension", [](const Ctx& x, const json& p) { return law_fullness(x, p, true); }},
      {"choice", law_choice},
      {"equality", law_equality},
      {"sigma_top", law_sigma_top},
      {"zero", law_zero},
      {"bc_lemma", law_bc_lemma},
      {"singleton", law_singleton},
      {"finite_joins", law_finite_joins},
      {"nonempty", law_nonempty},
      {"biconditional", law_biconditional},
      {"implication", law_implication},
      {"comprehension", [](const Ctx& x, const json& p) { return law_comprehension_exists(x, p, false); }},
      {"cocomprehension", [](const Ctx& x, const json& p) { return law_comprehension_exists(x, p, true); }},
      {"power_object", law_power_object},
      {"left_identity", [](const Ctx& x, const json& p) { return law_identity_unit(x, p, true); }},
      {"right_identity", [](const Ctx& x, const json& p) { return law_identity_unit(x, p, false); }},
      {"associativity", law_associativity},
      {"terminal", law_terminal},
      {"product", law_product},
      {"monic", law_monic},
      {"initial", law_initial},
      {"stable_initial", law_stable_initial},
      {"cocomp_from_negation", law_cocomp_from_negation},
  };
  return all;
}

}  // namespace

Recheck recheck_payload(const Doctrine& d, const json& payload) {
  if (!payload.is_object() || !payload.contains("law") || !payload["law"].is_string())
    return {Recheck::Status::unsupported, "payload names no law"};
  const std::string law = payload["law"].get<std::string>();
  auto it = handlers().find(law);
  if (it == handlers().end()) return {Recheck::Status::unsupported, "no independent check for law " + law};
  try {
    return it->second(Ctx(d), payload);
  } catch (const BadPayload& e) {
    return {Recheck::Status::rejected, std::string("malformed payload: ") + e.what()};
  } catch (const std::exception& e) {
    return {Recheck::Status::rejected, std::string("payload could not be evaluated: ") + e.what()};
  }
}

Recheck recheck_verdict(const Doctrine& d, const Verdict& v) {
  if (!v.is_refuted()) return {Recheck::Status::unsupported, "only refutations carry a payload"};
  return recheck_payload(d, v.payload);
}

// ---------------------------------------------------------------- declared

namespace {

Verdict bad_declared(const std::string& what, json payload) {
  payload["law"] = "declared";
  return Verdict::refuted(what, std::move(payload));
}

Verdict declared_delta(const Ctx& x, const json& block) {
  const Base& c = x.c;
  for (const auto& [name, label] : block.items()) {
    const ObjId a = x.obj(json(name));
    const ObjId aa = c.product(a, a).object;
    const Elem delta = x.elem_in(label.is_string() && label.get<std::string>().find(':') == std::string::npos
                                     ? json(c.object_name(aa) + ":" + label.get<std::string>())
                                     : label,
                                 aa);
    for (ObjId xo : c.objects()) {
      const ProductEntry pe = c.product(xo, a);
      const ProductEntry qe = c.product(pe.object, a);
      const auto left = x.left(c.pair(c.identity(pe.object), pe.second));
      const auto& ops = x.d.ops(qe.object);
      if (!left || !ops.meet) return bad_declared("no left adjoint along id x diagonal", {{"A", name}});
      const auto& r12 = x.d.reindex_table(qe.first);
      const auto& r23 = x.d.reindex_table(c.pair(c.compose(pe.second, qe.first), qe.second));
      for (Elem psi = 0; psi < r12.size(); ++psi)
        if (ops.meet_of(r12[psi], r23[delta]) != (*left)[psi])
          return bad_declared("declared equality predicate fails the adjunction",
                              {{"A", name}, {"X", c.object_name(xo)}, {"psi", elem_json(x.d, pe.object, psi)}});
    }
  }
  return Verdict::holds(c.window());
}

Verdict declared_comp(const Ctx& x, const json& block, bool co) {
  for (const auto& [elem, arrow] : block.items()) {
    const auto [a, alpha] = x.elem(json(elem));
    const ArrId m = x.arrow(arrow);
    if (m.cod != a || !x.universal(m, alpha, co))
      return bad_declared(std::string("declared ") + (co ? "co-" : "") + "comprehension arrow is not universal",
                          {{"alpha", elem}, {"m", arrow}});
  }
  return Verdict::holds(x.c.window());
}

Verdict declared_epsilon(const Ctx& x, const json& block) {
  for (const auto& e : block) {
    const ObjId g = x.obj(e.at("Gamma")), a = x.obj(e.at("A"));
    const ProductEntry ga = x.c.product(g, a);
    const Elem psi = x.elem_in(e.at("psi"), ga.object);
    const ArrId eps = x.arrow(e.at("eps"));
    const auto s = x.left(ga.first);
    if (!s || x.d.reindex(x.c.pair(x.c.identity(g), eps), psi) != (*s)[psi])
      return bad_declared("declared choice arrow does not realize the existential", e);
  }
  return Verdict::holds(x.c.window());
}

Verdict declared_negation(const Ctx& x, const json& block) {
  for (const auto& [name, table] : block.items()) {
    const ObjId a = x.obj(json(name));
    const FinPoset& p = x.d.fiber(a);
    const auto& ops = p.ops();
    if (!ops.meet || !ops.bottom) return bad_declared("fiber lacks meets or a bottom", {{"A", name}});
    for (const auto& [from, to] : table.items()) {
      auto b = p.find(from);
      auto nb = p.find(to.get<std::string>());
      if (!b || !nb) throw BadPayload("unknown element in declared negation of " + name);
      for (Elem y = 0; y < p.size(); ++y)
        if (p.leq(y, *nb) != (ops.meet_of(y, *b) == *ops.bottom))
          return bad_declared("declared negation is not a pseudocomplement",
                              {{"A", name}, {"beta", from}, {"alpha", p.label(y)}});
    }
  }
  return Verdict::holds(x.c.window());
}

Verdict declared_power(const Ctx& x, const json& block) {
  const Base& c = x.c;
  for (const auto& [name, w] : block.items()) {
    const ObjId a = x.obj(json(name));
    const ObjId pa = x.obj(w.at("power"));
    const ObjId ap = c.product(a, pa).object;
    const Elem member = x.elem_in(w.at("member"), ap);
    for (ObjId y : c.objects()) {
      const ObjId ay = c.product(a, y).object;
      std::vector<bool> hit(x.d.fiber(ay).size(), false);
      for (const ArrId& chi : c.hom(y, pa)) hit[x.d.reindex(c.cross(c.identity(a), chi), member)] = true;
      for (Elem phi = 0; phi < hit.size(); ++phi)
        if (!hit[phi])
          return bad_declared("declared power object misses a predicate",
                              {{"A", name}, {"Y", c.object_name(y)}, {"phi", elem_json(x.d, ay, phi)}});
    }
  }
  return Verdict::holds(c.window());
}

}  // namespace

Verdict check_declared(const Doctrine& d) {
  const json& decl = d.declared();
  if (decl.is_null() || decl.empty()) return Verdict::holds(d.base().window());
  try {
    const Ctx x(d);
    std::vector<std::pair<const char*, std::function<Verdict(const json&)>>> parts = {
        {"delta", [&](const json& b) { return declared_delta(x, b); }},
        {"comprehension", [&](const json& b) { return declared_comp(x, b, false); }},
        {"cocomprehension", [&](const json& b) { return declared_comp(x, b, true); }},
        {"epsilon", [&](const json& b) { return declared_epsilon(x, b); }},
        {"negation", [&](const json& b) { return declared_negation(x, b); }},
        {"power_objects", [&](const json& b) { return declared_power(x, b); }},
    };
    for (const auto& [key, run] : parts)
      if (decl.contains(key)) {
        Verdict v = run(decl[key]);
        if (!v.ok()) return v.within(std::string("declared ") + key);
      }
    for (const auto& [key, value] : decl.items()) {
      bool known = false;
      for (const auto& [k, run] : parts) known = known || key == k;
      if (!known) return Verdict::not_applicable("unknown declared block " + key);
    }
  } catch (const BadPayload& e) {
    return Verdict::not_applicable(std::string("declared block does not resolve: ") + e.what());
  } catch (const std::exception& e) {
    return Verdict::not_applicable(std::string("declared block could not be evaluated: ") + e.what());
  }
  return Verdict::holds(d.base().window());
}

}  // namespace tripos
