#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "tripos/catalog.hpp"
#include "tripos/io.hpp"

using namespace tripos;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Two objects A, B with one arrow f: A -> B, B terminal, A x A = A.
const char* kExplicit = R"({
  "format": "tripos-instance",
  "version": 1,
  "meta": {"name": "two-objects"},
  "base": {
    "presentation": "explicit",
    "objects": ["A", "B"],
    "arrows": {
      "1A": {"dom": "A", "cod": "A"},
      "1B": {"dom": "B", "cod": "B"},
      "f": {"dom": "A", "cod": "B"}
    },
    "identity": {"A": "1A", "B": "1B"},
    "compose": [],
    "products": [["A", "A", "A", "1A", "1A"], ["A", "B", "A", "1A", "f"],
                 ["B", "A", "A", "f", "1A"], ["B", "B", "B", "1B", "1B"]],
    "terminal": "B"
  },
  "fibers": {
    "kind": "explicit",
    "per_object": {
      "A": {"elements": ["no", "yes"], "order": [["no", "yes"]]},
      "B": {"elements": ["no", "yes"], "order": [["no", "yes"]]}
    }
  },
  "reindex": {"f": ["no", "yes"]}
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kExplicit;
  const auto at = s.find(from);
  if (at == std::string::npos) throw std::runtime_error("pattern not found: " + from);
  return s.replace(at, from.size(), to);
}

void expect_error(const std::string& text, const std::string& pointer, const std::string& message) {
  try {
    (void)parse_instance(text);
    FAIL() << "expected a parse error at " << pointer;
  } catch (const ParseError& e) {
    EXPECT_NE(e.where.find(pointer), std::string::npos) << e.what();
    EXPECT_NE(e.where.find("line "), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find(message), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Io, CatalogRoundTripsBitExactly) {
  for (const auto& e : catalog()) {
    const Doctrine d = e.make();
    const std::string text = dump_instance(d);
    const Doctrine back = parse_instance(text);
    EXPECT_EQ(dump_instance(back), text) << e.id;
    EXPECT_EQ(instance_hash(back), instance_hash(d)) << e.id;
  }
}

TEST(Io, TrivialOverPointRoundTrips) {
  const Doctrine d = trivial_fiber(point_base(), "t");
  const Doctrine back = parse_instance(dump_instance(d));
  ASSERT_EQ(back.base().objects().size(), 1u);
  EXPECT_EQ(back.fiber(back.base().objects()[0]).size(), 1u);
  EXPECT_EQ(serialize_instance(back), serialize_instance(d));
}

TEST(Io, GoldenPowersetFile) {
  const std::string golden = read_file(std::string(TRIPOS_TEST_DATA) + "/ps-1-0.json");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(dump_instance(catalog_instance("ps-1-0")), golden);
  EXPECT_EQ(dump_instance(parse_instance(golden)), golden);
}

TEST(Io, ExplicitInstanceParses) {
  const Doctrine d = parse_instance(std::string(kExplicit));
  EXPECT_EQ(d.name(), "two-objects");
  EXPECT_TRUE(validate_doctrine(d).ok());
  EXPECT_TRUE(validate_category(d.base()).ok());
  EXPECT_TRUE(validate_products(d.base()).ok());
  const std::string text = dump_instance(d);
  EXPECT_EQ(dump_instance(parse_instance(text)), text);
  // canonical form: keys sorted, so "base" precedes "fibers"
  EXPECT_LT(text.find("\"base\""), text.find("\"fibers\""));
}

TEST(Io, SerializationIgnoresInputOrder) {
  std::string shuffled = with(R"("objects": ["A", "B"])", R"("objects": ["B", "A"])");
  EXPECT_EQ(dump_instance(parse_instance(shuffled)), dump_instance(parse_instance(std::string(kExplicit))));
}

TEST(Io, SyntaxErrorHasLineAndColumn) {
  try {
    (void)parse_instance(std::string("{\n  \"base\": [1, 2,,]\n}"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where, "line 2, column 17");
  }
}

TEST(Io, DanglingComposite) {
  expect_error(with(R"("compose": [])", R"("compose": [["1B", "f", "g"]])"), "/base/compose/0/2", "undeclared arrow g");
}

TEST(Io, DanglingObject) {
  expect_error(with(R"("f": {"dom": "A", "cod": "B"})", R"("f": {"dom": "A", "cod": "C"})"), "/base/arrows/f/cod",
               "undeclared object C");
}

TEST(Io, NonFunctionalTable) {
  expect_error(with(R"("reindex": {"f": ["no", "yes"]})", R"("reindex": {"f": ["no"]})"), "/reindex/f", "");
  expect_error(with(R"("reindex": {"f": ["no", "yes"]})", R"("reindex": {"f": ["no", "maybe"]})"), "/reindex/f/1",
               "unknown element maybe");
}

TEST(Io, MissingTable) {
  expect_error(with(R"("reindex": {"f": ["no", "yes"]})", R"("reindex": {})"), "/reindex/f", "missing reindexing table");
}

TEST(Io, NonPosetOrder) {
  expect_error(with(R"("A": {"elements": ["no", "yes"], "order": [["no", "yes"]]})",
                    R"("A": {"elements": ["no", "yes"], "order": [["no", "yes"], ["yes", "no"]]})"),
               "/fibers/per_object/A", "antisymmetric");
}

TEST(Io, LawViolationIsNotAParseError) {
  // a non-monotone table parses and is refuted by validation
  const Doctrine d = parse_instance(with(R"("reindex": {"f": ["no", "yes"]})", R"("reindex": {"f": ["yes", "no"]})"));
  EXPECT_TRUE(validate_doctrine(d).is_refuted());
}

TEST(Io, LoadInstance) {
  EXPECT_EQ(instance_hash(load_instance("catalog:sier")), instance_hash(catalog_instance("sier")));
  EXPECT_THROW((void)load_instance("catalog:nope"), std::invalid_argument);
  EXPECT_THROW((void)load_instance("/nonexistent/instance.json"), std::invalid_argument);
}

TEST(Io, HashIsFnv1a) {
  // reference values of 64-bit FNV-1a
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Io, DualFlagRoundTrips) {
  const Doctrine d = catalog_instance("sier").dualized();
  const Doctrine back = parse_instance(dump_instance(d));
  EXPECT_TRUE(back.dual());
  EXPECT_EQ(dump_instance(back), dump_instance(d));
}

TEST(Io, OverrideTablesRoundTrip) {
  const Doctrine d = catalog_instance("ps-1-0");
  const ArrId id1 = d.base().identity(*d.base().find_object("1"));
  const Doctrine bad = d.with_reindex_override(id1, {1, 0});
  const Doctrine back = parse_instance(dump_instance(bad));
  EXPECT_EQ(back.reindex_table(id1), (std::vector<Elem>{1, 0}));
  EXPECT_EQ(dump_instance(back), dump_instance(bad));
}
