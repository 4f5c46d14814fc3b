#include <gtest/gtest.h>

#include "tripos/catalog.hpp"
#include "tripos/io.hpp"
#include "tripos/recheck.hpp"
#include "tripos/theorems.hpp"

using namespace tripos;

namespace {

json negation_payload() {
  const Classifier c(catalog_instance("sier"));
  return c.check("negation").payload;
}

}  // namespace

TEST(Recheck, CatalogRefutationsAreNeverRejected) {
  std::size_t confirmed = 0, refuted = 0;
  for (const auto& e : catalog()) {
    const Doctrine d = e.make();
    const Classifier c(d);
    for (const auto& name : Classifier::names()) {
      const Verdict& v = c.check(name);
      if (!v.is_refuted()) continue;
      ++refuted;
      const Recheck r = recheck_verdict(d, v);
      EXPECT_NE(r.status, Recheck::Status::rejected) << e.id << " " << name << ": " << r.detail;
      confirmed += r.confirmed();
    }
  }
  EXPECT_GT(refuted, 0u);
  EXPECT_GT(confirmed, 0u);
}

TEST(Recheck, SurvivesJsonRoundTrip) {
  const Doctrine d = catalog_instance("sier");
  const Classifier c(d);
  const Verdict back = verdict_from_json(to_json(c.check("negation")));
  ASSERT_TRUE(back.is_refuted());
  EXPECT_TRUE(recheck_verdict(d, back).confirmed());
  EXPECT_TRUE(recheck_payload(parse_instance(dump_instance(d)), back.payload).confirmed());
}

TEST(Recheck, TamperedArrowIsRejected) {
  // naturality of the pseudocomplement holds along the point onto a
  json p = negation_payload();
  ASSERT_EQ(p.at("f"), "1->S:1");
  p["f"] = "1->S:0";
  EXPECT_EQ(recheck_payload(catalog_instance("sier"), p).status, Recheck::Status::rejected);
}

TEST(Recheck, TamperedElementIsRejected) {
  json p = negation_payload();
  p["beta"] = "S:{a,b}";
  EXPECT_EQ(recheck_payload(catalog_instance("sier"), p).status, Recheck::Status::rejected);
  p["beta"] = "S:{nonsense}";
  EXPECT_EQ(recheck_payload(catalog_instance("sier"), p).status, Recheck::Status::rejected);
}

TEST(Recheck, PayloadAgainstTheWrongInstance) {
  // on PS negation is natural, so the same shape of claim cannot hold up
  const Doctrine ps = catalog_instance("ps-2-0");
  const json p = {{"law", "negation_natural"}, {"f", "1->2:1"}, {"beta", "2:{0}"}};
  EXPECT_EQ(recheck_payload(ps, p).status, Recheck::Status::rejected);
}

TEST(Recheck, UnknownLawIsUnsupported) {
  const Doctrine d = catalog_instance("ps-1-0");
  EXPECT_EQ(recheck_payload(d, json{{"law", "made_up"}}).status, Recheck::Status::unsupported);
  EXPECT_EQ(recheck_payload(d, json::object()).status, Recheck::Status::unsupported);
  EXPECT_EQ(recheck_verdict(d, Verdict::holds("w")).status, Recheck::Status::unsupported);
}

TEST(Recheck, TamperedImplicationTableIsRejected) {
  const Doctrine d = catalog_instance("sier");
  const Classifier c(d);
  json p = c.check("implicational").payload;
  ASSERT_TRUE(recheck_payload(d, p).confirmed());
  // swap the stated sides of the failing inequality
  std::swap(p["lhs"], p["rhs"]);
  EXPECT_EQ(recheck_payload(d, p).status, Recheck::Status::rejected);
}

TEST(Recheck, DeclaredWitnesses) {
  for (const auto& e : catalog()) EXPECT_TRUE(check_declared(e.make()).ok()) << e.id;
}

TEST(Recheck, StatusNames) {
  EXPECT_EQ(to_string(Recheck::Status::confirmed), "confirmed");
  EXPECT_EQ(to_string(Recheck::Status::rejected), "rejected");
  EXPECT_EQ(to_string(Recheck::Status::unsupported), "unsupported");
}
