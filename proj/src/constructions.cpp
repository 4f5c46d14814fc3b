#include "tripos/constructions.hpp"

namespace tripos {

std::optional<Elem> derived_sigma(const Analysis& an, const ArrId& f, Elem alpha) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  const auto& delta = an.delta(f.cod);
  if (!delta.witness) return std::nullopt;
  const ProductEntry p = c.product(f.dom, f.cod);
  const auto& ops = d.ops(p.object);
  const auto& sigma = d.sigma(p.second);
  if (!ops.meet || !sigma) return std::nullopt;
  const Elem g = d.reindex(c.cross(f, c.identity(f.cod)), *delta.witness);
  return (*sigma)[ops.meet_of(g, d.reindex(p.first, alpha))];
}

Verdict check_derived_sigma(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  const Verdict el = is_elementary(an);
  if (!el.ok()) return Verdict::not_applicable("not elementary (" + el.detail + ")", el.window_limited);
  const Verdict ex = is_existential(d);
  if (!ex.ok()) return Verdict::not_applicable("not existential (" + ex.detail + ")", ex.window_limited);
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& f : c.hom(a, b)) {
        const auto& sigma = d.sigma(f);
        for (Elem alpha = 0; alpha < d.fiber(a).size(); ++alpha) {
          const auto v = derived_sigma(an, f, alpha);
          if (!sigma || !v || *v != (*sigma)[alpha])
            return Verdict::refuted(
                "derived Sigma differs from the left adjoint",
                {{"law", "derived_sigma"},
                 {"f", d.arrow_name(f)},
                 {"alpha", elem_json(d, a, alpha)},
                 {"derived", v ? elem_json(d, b, *v) : json(nullptr)},
                 {"adjoint", sigma ? elem_json(d, b, (*sigma)[alpha]) : json(nullptr)}});
        }
      }
  return Verdict::holds(c.window());
}

std::optional<Elem> derived_implication(const Analysis& an, ObjId a, Elem phi, Elem psi) {
  return an.derived_implication(a, phi, psi);
}

Verdict derived_implication_is_heyting(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  for (ObjId a : an.base().objects()) {
    const auto& ops = d.ops(a);
    if (!ops.implication)
      return Verdict::not_applicable("no Heyting implication in the fiber of " + d.object_name(a));
    const Elem n = static_cast<Elem>(ops.n);
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y) {
        const auto v = an.derived_implication(a, x, y);
        if (!v) return Verdict::not_applicable("derived implication undefined on " + d.object_name(a));
        if (*v != ops.implies(x, y))
          return Verdict::refuted("derived implication is not the Heyting implication",
                                  {{"law", "derived_heyting"},
                                   {"A", d.object_name(a)},
                                   {"phi", elem_json(d, a, x)},
                                   {"psi", elem_json(d, a, y)},
                                   {"derived", elem_json(d, a, *v)},
                                   {"heyting", elem_json(d, a, ops.implies(x, y))}});
      }
  }
  return Verdict::holds(an.base().window());
}

std::optional<ArrId> cocomp_from_negation(const Analysis& an, ObjId a, Elem alpha) {
  const auto& neg = an.negation();
  if (!neg.witness) return std::nullopt;
  auto it = neg.witness->neg.find(a);
  if (it == neg.witness->neg.end()) return std::nullopt;
  return an.comprehension(a, it->second[alpha]);
}

Verdict check_cocomp_from_negation(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  const Verdict n = has_negation(an);
  if (!n.ok()) return Verdict::not_applicable("no negation (" + n.detail + ")");
  const Verdict h = has_comprehension(an);
  if (!h.ok()) return Verdict::not_applicable("no comprehension (" + h.detail + ")", h.window_limited);
  for (ObjId a : an.base().objects())
    for (Elem alpha = 0; alpha < d.fiber(a).size(); ++alpha) {
      const ArrId m = *cocomp_from_negation(an, a, alpha);
      if (!is_comprehension_arrow(d, m, alpha, true))
        return Verdict::refuted("comprehension of the negation is not a co-comprehension",
                                {{"law", "cocomp_from_negation"},
                                 {"A", d.object_name(a)},
                                 {"alpha", elem_json(d, a, alpha)},
                                 {"m", d.arrow_name(m)}});
    }
  return Verdict::holds(an.base().window());
}

std::optional<Elem> graph(const Analysis& an, const ArrId& f) {
  const auto& delta = an.delta(f.cod);
  if (!delta.witness) return std::nullopt;
  const Base& c = an.base();
  return an.doctrine().reindex(c.cross(f, c.identity(f.cod)), *delta.witness);
}

Doctrine dualize(const Doctrine& d) { return d.dualized(); }

std::optional<Elem> eaco_side(const Analysis& an, ObjId a, Elem alpha) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  const auto m = an.cocomprehension(a, alpha);
  if (!m) return std::nullopt;
  const auto g = graph(an, *m);
  if (!g) return std::nullopt;
  const ObjId s = m->dom;
  const ProductEntry sa = c.product(s, a);
  if (is_stable_initial(c, s).ok()) {
    const auto& sigma = d.sigma(sa.second);
    if (!sigma) return std::nullopt;
    return (*sigma)[*g];
  }
  // ε is chosen for the relation read from A to {α}°.
  const Elem swapped = d.reindex(c.swap(a, s), *g);
  const auto e = an.epsilon(a, s, swapped);
  if (!e) return std::nullopt;
  return d.reindex(c.pair(*e, c.identity(a)), *g);
}

Verdict eaco_compat(const Analysis& an, const ArrId& f, Elem alpha) {
  const Doctrine& d = an.doctrine();
  const auto top = eaco_side(an, f.cod, alpha);
  const Elem pulled = d.reindex(f, alpha);
  const auto bottom = eaco_side(an, f.dom, pulled);
  if (!top || !bottom)
    return Verdict::not_applicable("co-comprehension, graph or choice arrow missing at " +
                                   d.arrow_name(f));
  const Elem lhs = d.reindex(f, *top);
  if (lhs != *bottom)
    return Verdict::refuted("choice is not compatible with the graph of co-comprehension",
                            {{"law", "eaco"},
                             {"f", d.arrow_name(f)},
                             {"alpha", elem_json(d, f.cod, alpha)},
                             {"lhs", elem_json(d, f.dom, lhs)},
                             {"rhs", elem_json(d, f.dom, *bottom)}});
  return Verdict::holds(an.base().window());
}

Verdict is_eaco_compatible(const Analysis& an) {
  const Doctrine& d = an.doctrine();
  const Base& c = an.base();
  for (ObjId x : c.objects())
    for (ObjId a : c.objects())
      for (const ArrId& f : c.hom(x, a))
        for (Elem alpha = 0; alpha < d.fiber(a).size(); ++alpha) {
          Verdict v = eaco_compat(an, f, alpha);
          if (!v.ok()) return v;
        }
  return Verdict::holds(c.window());
}

HeacoChecklist heaco_checklist(const Analysis& an) {
  HeacoChecklist h;
  h.elementary = is_elementary(an);
  h.full_cocomprehension = is_full_cocomprehension(an);
  h.choice = ac_check(an).verdict;
  if (h.elementary.ok() && h.full_cocomprehension.ok() && h.choice.ok())
    h.compatible = is_eaco_compatible(an);
  else
    h.compatible = Verdict::not_applicable("needs equality, full co-comprehension and choice");
  h.higher_order = is_higher_order(an);
  return h;
}

namespace {

Verdict first_failure(const std::vector<std::pair<const char*, const Verdict*>>& parts,
                      const std::string& window) {
  for (const auto& [name, v] : parts)
    if (!v->ok())
      return Verdict::not_applicable(std::string(name) + " fails (" + v->detail + ")",
                                     v->window_limited);
  return Verdict::holds(window);
}

}  // namespace

Verdict eaco_verdict(const HeacoChecklist& h) {
  return first_failure({{"elementary", &h.elementary},
                        {"full co-comprehension", &h.full_cocomprehension},
                        {"choice", &h.choice},
                        {"compatibility", &h.compatible}},
                       h.elementary.detail);
}

Verdict heaco_verdict(const HeacoChecklist& h) {
  Verdict e = eaco_verdict(h);
  if (!e.ok()) return e;
  return first_failure({{"higher order", &h.higher_order}}, e.detail);
}

HeacoResult heaco_to_tripos(const Analysis& an) {
  const Doctrine dual = dualize(an.doctrine());
  HeacoResult r{dual, heaco_verdict(heaco_checklist(an)), {}, {}, {}, {}};
  if (!r.checklist.ok()) {
    r.restricted_sigma_co = r.tripos = r.characterization = r.full_comprehension =
        Verdict::not_applicable("not a heaco");
    return r;
  }
  r.restricted_sigma_co =
      is_sigma_doctrine(an.doctrine(), cocomprehension_class(an), /*restricted=*/true);
  const Analysis dn(dual);
  r.tripos = is_tripos(dn);
  r.characterization = is_tripos_via_characterization(dn);
  r.full_comprehension = is_full_comprehension(dn);
  return r;
}

}  // namespace tripos
