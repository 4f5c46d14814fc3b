#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using std::string;

namespace {

struct CliRun {
  int rc = -1;
  string out;
};

// Runs the CLI with stderr folded into stdout.
CliRun cli(const string& args) {
  const string cmd = string("'") + TRIPOS_CLI + "' " + args + " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

string read_file(const string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// First string value of "key" in JSON-lines output.
string field(const string& out, const string& key) {
  const string tag = "\"" + key + "\":\"";
  const auto at = out.find(tag);
  if (at == string::npos) return "";
  const auto start = at + tag.size();
  return out.substr(start, out.find('"', start) - start);
}

bool contains(const string& s, const string& part) { return s.find(part) != string::npos; }

}  // namespace

TEST(Cli, ValidateCatalog) {
  const CliRun r = cli("validate catalog:ps-1-0");
  EXPECT_EQ(r.rc, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "functor laws")) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("").rc, 2);
  EXPECT_EQ(cli("bogus").rc, 2);
  EXPECT_EQ(cli("classify catalog:nope").rc, 2);
  EXPECT_EQ(cli("theorem --id nope catalog:ps-1-0").rc, 2);
  EXPECT_EQ(cli("search --filter nosuch").rc, 2);
}

TEST(Cli, ParseErrorReportsPosition) {
  const string path = testing::TempDir() + "/broken.json";
  std::ofstream(path) << "{\n  \"base\": {\n    \"presentation\": 7\n  }\n}\n";
  const CliRun r = cli("validate '" + path + "'");
  EXPECT_EQ(r.rc, 2);
  EXPECT_TRUE(contains(r.out, "line 3")) << r.out;
  EXPECT_TRUE(contains(r.out, "/base/presentation")) << r.out;
}

TEST(Cli, ClassifyIsDeterministic) {
  const CliRun a = cli("classify catalog:sier --json -"), b = cli("classify catalog:sier --json -");
  EXPECT_EQ(a.rc, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(contains(a.out, "\"schema\":\"tripos-report\"")) << a.out.substr(0, 200);
  EXPECT_FALSE(contains(a.out, "seconds"));
}

TEST(Cli, ClassifyHumanOutput) {
  const CliRun r = cli("classify catalog:sier");
  EXPECT_EQ(r.rc, 0);
  EXPECT_TRUE(contains(r.out, "negation")) << r.out;
  EXPECT_TRUE(contains(r.out, "REFUTED")) << r.out;
  EXPECT_TRUE(contains(r.out, "counterexample confirmed")) << r.out;
}

TEST(Cli, TheoremsOnCatalog) {
  const CliRun r = cli("theorem --all catalog:ps-1-1");
  EXPECT_EQ(r.rc, 0) << r.out;
  EXPECT_FALSE(contains(r.out, "VIOLATED")) << r.out;
  EXPECT_EQ(cli("theorem --id bingo catalog:sier").rc, 0);
}

TEST(Cli, DeriveExitCodes) {
  EXPECT_EQ(cli("derive --what sigma catalog:ps-1-0").rc, 0);
  const CliRun r = cli("derive --what implication catalog:sier");
  EXPECT_EQ(r.rc, 1);
  EXPECT_EQ(cli("derive --what dual catalog:ps-1-0").rc, 0);
}

TEST(Cli, CatalogEmitMatchesGolden) {
  const CliRun r = cli("catalog --emit ps-1-0");
  EXPECT_EQ(r.rc, 0);
  EXPECT_EQ(r.out, read_file(string(TRIPOS_TEST_DATA) + "/ps-1-0.json"));
  const CliRun list = cli("catalog --list");
  for (const char* id : {"ps-2-0", "sier", "triv-ps", "sl-diamond"}) EXPECT_TRUE(contains(list.out, id)) << id;
}

TEST(Cli, EmitThenValidateRoundTrip) {
  const string path = testing::TempDir() + "/sier.json";
  std::ofstream(path) << cli("catalog --emit sier").out;
  const CliRun a = cli("classify '" + path + "' --json -");
  const CliRun b = cli("classify catalog:sier --json -");
  EXPECT_EQ(a.rc, 0);
  // same instance hash, whichever way it was loaded
  EXPECT_EQ(field(a.out, "hash"), field(b.out, "hash"));
  EXPECT_FALSE(field(a.out, "hash").empty());
  const string emitted = read_file(path);
  std::ofstream(path + ".2") << cli("catalog --emit sier").out;
  EXPECT_EQ(read_file(path + ".2"), emitted);
}

TEST(Cli, SearchFindsWitness) {
  const CliRun r = cli("search --filter 'full_comp&!classical' --limit 1");
  EXPECT_EQ(r.rc, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "match ")) << r.out;
  EXPECT_EQ(r.out, cli("search --filter 'full_comp&!classical' --limit 1").out);
}
