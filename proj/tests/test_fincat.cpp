#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "tripos/catalog.hpp"

using namespace tripos;

namespace {

ObjId obj(const Base& c, const std::string& name) {
  auto o = c.find_object(name);
  if (!o) throw std::runtime_error("no object " + name);
  return *o;
}

ArrId fn(const Doctrine& d, const std::string& dom, const std::string& cod, std::vector<std::uint32_t> t) {
  const auto& w = oracle::spaces(d);
  return w.arrow_from_table(obj(w, dom), obj(w, cod), t);
}

ExplicitBaseSpec one_object(std::vector<ExplicitBaseSpec::Arrow> extra, std::vector<std::array<std::string, 3>> comp) {
  ExplicitBaseSpec s;
  s.objects = {"X"};
  s.arrows = {{"id", "X", "X"}};
  for (auto& a : extra) s.arrows.push_back(a);
  s.identity = {{"X", "id"}};
  s.compose = std::move(comp);
  s.products = {{"X", "X", "X", "id", "id"}};
  s.terminal = "X";
  return s;
}

// Pairing is the unique arrow with the given projections.
void expect_products_universal(const Base& c) {
  for (ObjId x : c.objects())
    for (ObjId a : c.objects())
      for (ObjId b : c.objects()) {
        const ProductEntry p = c.product(a, b);
        for (const ArrId& f : c.hom(x, a))
          for (const ArrId& g : c.hom(x, b)) {
            int count = 0;
            for (const ArrId& h : c.hom(x, p.object))
              if (c.compose(p.first, h) == f && c.compose(p.second, h) == g) {
                ++count;
                EXPECT_EQ(h, c.pair(f, g));
              }
            EXPECT_EQ(count, 1);
          }
      }
}

}  // namespace

TEST(Fincat, PointBaseIsACategory) {
  const auto c = point_base();
  EXPECT_TRUE(validate_category(*c).ok());
  EXPECT_TRUE(validate_products(*c).ok());
  EXPECT_EQ(c->objects().size(), 1u);
}

TEST(Fincat, MissingCompositeIsMalformed) {
  ExplicitBaseSpec s;
  s.objects = {"A", "B", "C"};
  s.arrows = {{"1A", "A", "A"}, {"1B", "B", "B"}, {"1C", "C", "C"}, {"f", "A", "B"}, {"g", "B", "C"}, {"h", "A", "C"}};
  s.identity = {{"A", "1A"}, {"B", "1B"}, {"C", "1C"}};
  s.terminal = "C";
  const ExplicitBase c(s);
  try {
    (void)validate_category(c);
    FAIL() << "expected MalformedInstance";
  } catch (const MalformedInstance& e) {
    EXPECT_NE(std::string(e.what()).find("incomplete table"), std::string::npos);
  }
}

TEST(Fincat, AssociativityFailureIsRefuted) {
  // a a = b, a b = a, b a = b, b b = b: (a b) a = b but a (b a) = a
  const ExplicitBase c(one_object({{"a", "X", "X"}, {"b", "X", "X"}},
                                  {{"a", "a", "b"}, {"a", "b", "a"}, {"b", "a", "b"}, {"b", "b", "b"}}));
  const Verdict v = validate_category(c);
  ASSERT_TRUE(v.is_refuted());
  EXPECT_TRUE(v.payload.contains("law"));
}

TEST(Fincat, PowersetWindowLaws) {
  const Doctrine d = powerset_finset(2, 0);
  EXPECT_TRUE(validate_category(d.base()).ok());
  EXPECT_TRUE(validate_products(d.base()).ok());
  expect_products_universal(d.base());
}

TEST(Fincat, ThinBaseProductsAreMeets) {
  const Doctrine d = catalog_instance("sl-diamond");
  const auto& t = dynamic_cast<const ThinBase&>(d.base());
  const auto& o = t.order().ops();
  expect_products_universal(t);
  for (ObjId a : t.objects())
    for (ObjId b : t.objects())
      EXPECT_EQ(t.element_of(t.product(a, b).object), o.meet_of(t.element_of(a), t.element_of(b)));
}

TEST(Fincat, ProductOfSetsIsCartesian) {
  const Doctrine d = powerset_finset(2, 0);
  const Base& c = d.base();
  for (ObjId a : c.objects())
    for (ObjId b : c.objects()) {
      const ProductEntry p = c.product(a, b);
      const auto p1 = oracle::fn(d, p.first), p2 = oracle::fn(d, p.second);
      std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
      for (std::size_t i = 0; i < p1.size(); ++i) pairs.insert({p1[i], p2[i]});
      const std::size_t na = oracle::spaces(d).space(a).size(), nb = oracle::spaces(d).space(b).size();
      EXPECT_EQ(p1.size(), na * nb);
      EXPECT_EQ(pairs.size(), na * nb);
    }
  EXPECT_EQ(oracle::spaces(d).space(c.product(obj(c, "1"), obj(c, "2")).object).size(), 2u);
}

TEST(Fincat, ProjectionAwayFromTerminalIsIso) {
  for (const auto& e : catalog()) {
    const Doctrine d = e.make();
    const Base& c = d.base();
    for (ObjId a : c.objects()) EXPECT_TRUE(is_iso(c, c.product(a, c.terminal()).first)) << e.id;
  }
}

TEST(Fincat, DiagonalSplitsProjections) {
  const Doctrine d = powerset_finset(2, 0);
  const Base& c = d.base();
  for (ObjId a : c.objects()) {
    const ArrId delta = c.diagonal(a);
    EXPECT_EQ(delta, c.pair(c.identity(a), c.identity(a)));
    EXPECT_EQ(c.compose(c.product(a, a).first, delta), c.identity(a));
    EXPECT_EQ(c.compose(c.product(a, a).second, delta), c.identity(a));
  }
}

TEST(Fincat, PullbackOfDisjointPointsIsEmpty) {
  const Doctrine d = powerset_finset(2, 0);
  const ArrId i0 = fn(d, "1", "2", {0}), i1 = fn(d, "1", "2", {1});
  const auto sq = d.base().pullback(i0, i1);
  ASSERT_TRUE(sq);
  EXPECT_EQ(d.base().object_name(sq->apex), "0");
}

TEST(Fincat, PullbackAlongIdentity) {
  const Doctrine d = powerset_finset(2, 0);
  const Base& c = d.base();
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& g : c.hom(a, b)) {
        const auto sq = c.pullback(c.identity(b), g);
        ASSERT_TRUE(sq);
        EXPECT_EQ(c.compose(g, sq->pulled), c.compose(c.identity(b), sq->lifted));
        EXPECT_TRUE(is_iso(c, sq->pulled));
      }
}

TEST(Fincat, ThinPullbackIsMeet) {
  const Doctrine d = catalog_instance("sl-diamond");
  const auto& t = dynamic_cast<const ThinBase&>(d.base());
  const auto& o = t.order().ops();
  for (ObjId u : t.objects())
    for (ObjId v : t.objects())
      for (ObjId w : t.objects()) {
        auto f = t.arrow_between(v, u), h = t.arrow_between(w, u);
        if (!f || !h) continue;
        const auto sq = t.pullback(*f, *h);
        ASSERT_TRUE(sq);
        EXPECT_EQ(t.element_of(sq->apex), o.meet_of(t.element_of(v), t.element_of(w)));
      }
}

TEST(Fincat, Monics) {
  const Doctrine d = powerset_finset(2, 0);
  const Base& c = d.base();
  for (ObjId a : c.objects()) EXPECT_TRUE(is_monic(c, c.identity(a)).ok());
  const Verdict v = is_monic(c, fn(d, "2", "1", {0, 0}));
  ASSERT_TRUE(v.is_refuted());
  // the witnesses are two distinct points of {0,1}
  EXPECT_TRUE(v.payload.dump().find("1->2") != std::string::npos);
  // injectivity oracle on every arrow
  for (ObjId a : c.objects())
    for (ObjId b : c.objects())
      for (const ArrId& f : c.hom(a, b)) {
        const auto t = oracle::fn(d, f);
        const bool injective = std::set<std::uint32_t>(t.begin(), t.end()).size() == t.size();
        EXPECT_EQ(is_monic(c, f).ok(), injective) << c.arrow_name(f);
      }
}

TEST(Fincat, EmptySetIsStableInitial) {
  const Doctrine d = powerset_finset(2, 0);
  const Base& c = d.base();
  EXPECT_TRUE(is_stable_initial(c, obj(c, "0")).ok());
  EXPECT_FALSE(is_stable_initial(c, obj(c, "1")).ok());
  EXPECT_EQ(stable_initial(c), obj(c, "0"));
}

TEST(Fincat, ThinBottomIsStableInitial) {
  // bottom has exactly one arrow to everything, and X ∧ bottom = bottom
  const Doctrine d = catalog_instance("sl-chain3");
  const auto& t = dynamic_cast<const ThinBase&>(d.base());
  for (ObjId a : t.objects()) {
    bool initial = true;
    for (ObjId b : t.objects()) initial = initial && t.hom(a, b).size() == 1;
    EXPECT_EQ(is_stable_initial(t, a).ok(), initial) << t.object_name(a);
  }
}

TEST(Fincat, SubobjectsOfTwoElementSet) {
  const Doctrine d = powerset_finset(2, 0);
  const SubobjectPoset s = subobject_poset(d.base(), obj(d.base(), "2"));
  ASSERT_EQ(s.order.size(), 4u);
  const auto& o = s.order.ops();
  ASSERT_TRUE(o.is_heyting());
  for (Elem x = 0; x < 4; ++x) EXPECT_EQ(o.implies(o.implies(x, *o.bottom), *o.bottom), x);
  for (const ArrId& m : s.representatives) EXPECT_TRUE(is_monic(d.base(), m).ok());
}

TEST(Fincat, ProjectionsArePullbackStable) {
  for (const auto& e : catalog()) {
    const Doctrine d = e.make();
    const ArrowClass prj = projection_class(d.base());
    EXPECT_FALSE(prj.members.empty()) << e.id;
    EXPECT_TRUE(is_pullback_stable(d.base(), prj).ok()) << e.id;
  }
}

TEST(Fincat, ProductBeyondCapExceedsWindow) {
  const Doctrine d = powerset_finset(2, 0);
  const Base& c = d.base();
  const ObjId four = c.product(obj(c, "2"), obj(c, "2")).object;
  EXPECT_THROW((void)c.product(four, four), WindowExceeded);
}

TEST(Fincat, ArrowNamesRoundTrip) {
  for (const char* id : {"ps-2-0", "sier", "sl-diamond"}) {
    const Doctrine d = catalog_instance(id);
    const Base& c = d.base();
    for (ObjId a : c.objects())
      for (ObjId b : c.objects())
        for (const ArrId& f : c.hom(a, b)) EXPECT_EQ(c.parse_arrow(c.arrow_name(f)), f);
  }
}

TEST(Fincat, ContinuousMapsOnly) {
  // maps S -> S: identity, the two constants, and a |-> a, b |-> a... checked by preimage
  const Doctrine d = catalog_instance("sier");
  const auto& w = oracle::spaces(d);
  const ObjId s = obj(w, "S");
  std::size_t continuous = 0;
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y) {
      // preimage of {a} must be open: {}, {a} or {a,b}
      const std::uint64_t pre = (x == 0 ? 1u : 0u) | (y == 0 ? 2u : 0u);
      continuous += pre != 0b10;
    }
  EXPECT_EQ(w.hom(s, s).size(), continuous);
}
