#include <gtest/gtest.h>

#include "support.hpp"
#include "tripos/catalog.hpp"
#include "tripos/constructions.hpp"
#include "tripos/io.hpp"

using namespace tripos;

namespace {

ObjId obj(const Base& c, const std::string& name) { return *c.find_object(name); }

Elem elem_of(const Doctrine& d, ObjId a, std::uint64_t m) { return *oracle::elem(d, a, m); }

ArrId fn(const Doctrine& d, const std::string& dom, const std::string& cod, std::vector<std::uint32_t> t) {
  const auto& w = oracle::spaces(d);
  return w.arrow_from_table(obj(w, dom), obj(w, cod), t);
}

std::vector<ArrId> window_arrows(const Base& c) {
  std::vector<ArrId> out;
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& f : c.hom(a, b)) out.push_back(f);
  return out;
}

}  // namespace

TEST(Constructions, DerivedSigmaExamples) {
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  const ArrId collapse = fn(d, "2", "1", {0, 0});
  auto v = derived_sigma(an, collapse, elem_of(d, collapse.dom, 0b01));
  ASSERT_TRUE(v);
  EXPECT_EQ(oracle::mask(d, collapse.cod, *v), 0b1u);

  const ArrId inj = fn(d, "1", "2", {1});
  v = derived_sigma(an, inj, elem_of(d, inj.dom, 0b1));
  ASSERT_TRUE(v);
  EXPECT_EQ(oracle::mask(d, inj.cod, *v), 0b10u);

  for (ObjId a : d.base().objects())
    for (Elem x = 0; x < d.fiber(a).size(); ++x) EXPECT_EQ(derived_sigma(an, d.base().identity(a), x), x);
}

TEST(Constructions, DerivedSigmaIsTheImage) {
  // every arrow of PS(2,0), against the set-image oracle
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  for (const ArrId& f : window_arrows(d.base()))
    for (Elem x = 0; x < d.fiber(f.dom).size(); ++x) {
      const auto v = derived_sigma(an, f, x);
      ASSERT_TRUE(v);
      EXPECT_EQ(oracle::mask(d, f.cod, *v), oracle::image(d, f, oracle::mask(d, f.dom, x)));
    }
  EXPECT_TRUE(check_derived_sigma(an).ok());
}

TEST(Constructions, DerivedSigmaOnElementaryExistentialInstances) {
  for (const auto& e : catalog()) {
    const Doctrine d = e.make();
    const Analysis an(d);
    if (!is_elementary(an).ok() || !is_existential(d).ok()) continue;
    for (const ArrId& f : window_arrows(d.base())) {
      const auto left = oracle::brute_left(d.fiber(f.dom), d.fiber(f.cod), d.reindex_table(f));
      ASSERT_TRUE(left) << e.id;
      for (Elem x = 0; x < d.fiber(f.dom).size(); ++x) EXPECT_EQ(derived_sigma(an, f, x), (*left)[x]) << e.id;
    }
  }
}

TEST(Constructions, DerivedImplicationExamples) {
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  const ObjId two = obj(d.base(), "2");
  auto v = an.derived_implication(two, elem_of(d, two, 0b01), elem_of(d, two, 0b10));
  ASSERT_TRUE(v);
  EXPECT_EQ(oracle::mask(d, two, *v), 0b10u);
  const FinPoset& p = d.fiber(two);
  for (Elem x = 0; x < p.size(); ++x) {
    EXPECT_EQ(an.derived_implication(two, *d.ops(two).top, x), x);
    EXPECT_EQ(an.derived_implication(two, x, x), d.ops(two).top);
    for (Elem y = 0; y < p.size(); ++y) EXPECT_EQ(an.derived_implication(two, x, y), oracle::brute_implies(p, x, y));
  }
  EXPECT_TRUE(derived_implication_is_heyting(an).ok());
}

TEST(Constructions, CocomprehensionFromNegation) {
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  const ObjId two = obj(d.base(), "2");
  const auto m = cocomp_from_negation(an, two, elem_of(d, two, 0b01));
  ASSERT_TRUE(m);
  EXPECT_EQ(oracle::fn(d, *m), (std::vector<std::uint32_t>{1}));
  for (ObjId a : d.base().objects()) {
    for (Elem x = 0; x < d.fiber(a).size(); ++x) {
      const auto k = cocomp_from_negation(an, a, x);
      ASSERT_TRUE(k);
      EXPECT_EQ(*k, *an.cocomprehension(a, x));
    }
    EXPECT_TRUE(is_iso(d.base(), *cocomp_from_negation(an, a, *d.ops(a).bottom)));
  }
  EXPECT_TRUE(check_cocomp_from_negation(an).ok());

  const Doctrine t = catalog_instance("triv-chain3");
  const Analysis at(t);
  for (ObjId a : t.base().objects()) EXPECT_EQ(cocomp_from_negation(at, a, 0), t.base().identity(a));
}

TEST(Constructions, GraphIsTheFunctionGraph) {
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  const Base& c = d.base();
  for (const ArrId& f : window_arrows(c)) {
    const auto g = graph(an, f);
    ASSERT_TRUE(g);
    const ProductEntry p = c.product(f.dom, f.cod);
    const auto p1 = oracle::fn(d, p.first), p2 = oracle::fn(d, p.second), t = oracle::fn(d, f);
    std::uint64_t expect = 0;
    for (std::size_t i = 0; i < p1.size(); ++i)
      if (t[p1[i]] == p2[i]) expect |= 1ULL << i;
    EXPECT_EQ(oracle::mask(d, p.object, *g), expect) << c.arrow_name(f);
  }
  const auto eq = find_equality(an);
  for (ObjId a : c.objects()) EXPECT_EQ(graph(an, c.identity(a)), eq.witness->delta.at(a));

  const ArrId k = fn(d, "2", "2", {0, 0});
  const ProductEntry p = c.product(k.dom, k.cod);
  const auto p1 = oracle::fn(d, p.first), p2 = oracle::fn(d, p.second);
  std::uint64_t m = oracle::mask(d, p.object, *graph(an, k));
  EXPECT_EQ(std::popcount(m), 2);
  for (std::size_t i = 0; i < p1.size(); ++i)
    if (m >> i & 1) EXPECT_EQ(p2[i], 0u);
}

TEST(Constructions, DualIsAnInvolution) {
  for (const auto& e : catalog()) {
    const Doctrine d = e.make();
    EXPECT_EQ(dump_instance(dualize(dualize(d))), dump_instance(d)) << e.id;
  }
  const Doctrine t = catalog_instance("triv-point");
  const Doctrine td = dualize(t);
  for (ObjId a : t.base().objects()) EXPECT_TRUE(td.fiber(a).same_order(t.fiber(a)));
}

TEST(Constructions, DualPowersetSigmaIsForall) {
  const Doctrine d = powerset_finset(2, 0);
  const Doctrine e = dualize(d);
  const Base& c = d.base();
  for (ObjId a : c.objects())
    for (ObjId b : c.objects()) {
      const ArrId pr = c.product(a, b).first;
      const auto& s = e.sigma(pr);
      ASSERT_TRUE(s);
      for (Elem x = 0; x < e.fiber(pr.dom).size(); ++x)
        EXPECT_EQ(oracle::mask(d, a, (*s)[x]), oracle::forall_image(d, pr, oracle::mask(d, pr.dom, x)));
    }
}

TEST(Constructions, DualSwapsComprehensionAndCocomprehension) {
  for (const char* id : {"ps-2-0", "sier", "sl-chain3", "sl-diamond", "discrete2"}) {
    const Doctrine d = catalog_instance(id);
    const Analysis an(d), du(dualize(d));
    for (ObjId a : d.base().objects())
      for (Elem x = 0; x < d.fiber(a).size(); ++x) {
        EXPECT_EQ(du.comprehension(a, x), an.cocomprehension(a, x)) << id;
        EXPECT_EQ(du.cocomprehension(a, x), an.comprehension(a, x)) << id;
      }
    EXPECT_EQ(is_full_comprehension(du).outcome, is_full_cocomprehension(an).outcome) << id;
    EXPECT_EQ(is_full_cocomprehension(du).outcome, is_full_comprehension(an).outcome) << id;
  }
}

TEST(Constructions, EacoSideIsTheComplementOnSets) {
  const Doctrine d = powerset_finset(2, 0);
  const Analysis an(d);
  for (ObjId a : d.base().objects())
    for (Elem x = 0; x < d.fiber(a).size(); ++x) {
      const auto s = eaco_side(an, a, x);
      ASSERT_TRUE(s);
      EXPECT_EQ(oracle::mask(d, a, *s), oracle::full(d, a) & ~oracle::mask(d, a, x));
    }
  const ArrId f = fn(d, "1", "2", {1});
  EXPECT_TRUE(eaco_compat(an, f, elem_of(d, f.cod, 0b01)).ok());
  const ObjId two = obj(d.base(), "2");
  EXPECT_TRUE(eaco_compat(an, d.base().identity(two), *d.ops(two).top).ok());
  EXPECT_TRUE(is_eaco_compatible(an).ok());
}

TEST(Constructions, HeacoToTripos) {
  for (const char* id : {"triv-point", "ps-1-1"}) {
    const Analysis an(catalog_instance(id));
    const HeacoResult r = heaco_to_tripos(an);
    EXPECT_TRUE(r.checklist.ok()) << id << " " << r.checklist.detail;
    EXPECT_TRUE(r.restricted_sigma_co.ok()) << id;
    EXPECT_TRUE(r.tripos.ok()) << id << " " << r.tripos.detail;
    EXPECT_TRUE(r.characterization.ok()) << id;
    EXPECT_TRUE(r.full_comprehension.ok()) << id;
  }
  const HeacoResult t = heaco_to_tripos(Analysis(catalog_instance("triv-point")));
  EXPECT_EQ(dump_instance(t.dual.with_name("x")), dump_instance(dualize(catalog_instance("triv-point")).with_name("x")));

  const HeacoResult s = heaco_to_tripos(Analysis(catalog_instance("sier")));
  EXPECT_TRUE(s.checklist.is_not_applicable());
  EXPECT_NE(s.checklist.detail.find("elementary"), std::string::npos) << s.checklist.detail;
}
