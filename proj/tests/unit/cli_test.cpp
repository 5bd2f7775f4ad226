#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "much/cli.hpp"
#include "much/jsonl.hpp"
#include "much/persist.hpp"
#include "support/fixture.hpp"

namespace much::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Shell {
  int status = 0;
  std::string out;
};

Shell shell(const std::string& cmd) {
  Shell r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::array<char, 4096> buf;
  while (auto n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int st = ::pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

RunConfig parse(const std::string& args) {
  RunConfig c;
  auto app = build_app(c);
  app->parse(args, false);
  return c;
}

fs::path write_dataset(const TempDir& dir, std::size_t n, std::uint64_t seed) {
  const auto p = dir / "data.jsonl";
  std::ofstream out(p, std::ios::binary);
  for (const auto& r : testing::random_dataset(n, seed, 0.9)) out << io::serialize(r) << "\n";
  return p;
}

TEST(FlagTable, CoversEveryConfigFieldOnce) {
  std::multiset<std::string> from_flags;
  for (const auto& f : run_config_flags()) from_flags.insert(f.field);
  const auto& fields = run_config_fields();
  EXPECT_EQ(from_flags, std::multiset<std::string>(fields.begin(), fields.end()));
}

TEST(FlagTable, ParserRegistersExactlyTheTable) {
  RunConfig c;
  auto app = build_app(c);
  for (const char* cmd : kCommands) {
    const CLI::App* sub = app->get_subcommand(cmd);
    for (const auto& f : run_config_flags()) {
      const bool listed = std::find(f.commands.begin(), f.commands.end(), cmd) != f.commands.end();
      EXPECT_EQ(sub->get_option_no_throw(f.flag) != nullptr, listed) << cmd << " " << f.flag;
    }
  }
}

TEST(FlagTable, HelpAllListsEveryFlag) {
  const auto r = shell(std::string(MUCH_BINARY) + " --help-all");
  EXPECT_EQ(r.status, 0);
  for (const auto& f : run_config_flags()) EXPECT_NE(r.out.find(f.flag), std::string::npos) << f.flag;
  for (const char* cmd : kCommands) EXPECT_NE(r.out.find(cmd), std::string::npos);
}

TEST(Parse, FillsRunConfig) {
  const auto c = parse(
      "evaluate --input in.jsonl --output out --agg mean,product --group-by language,model "
      "--fpr-cap 0.2 --prec-floor 0.9 --scorer token_entropy --delta 8 --resegment --threads 3");
  EXPECT_EQ(c.command, "evaluate");
  EXPECT_EQ(c.input, "in.jsonl");
  EXPECT_EQ(c.aggregators, (std::vector<std::string>{"mean", "product"}));
  EXPECT_EQ(c.group_by, (std::vector<std::string>{"language", "model"}));
  EXPECT_DOUBLE_EQ(c.fpr_cap, 0.2);
  EXPECT_DOUBLE_EQ(c.prec_floor, 0.9);
  EXPECT_EQ(c.delta, 8);
  EXPECT_TRUE(c.resegment);
  EXPECT_EQ(c.threads, 3u);
  EXPECT_EQ(c.curve_aggregator, "product");
}

TEST(Parse, RejectsFlagsOfOtherCommands) {
  EXPECT_THROW(parse("segment --input x --fpr-cap 0.2"), CLI::ParseError);
  EXPECT_THROW(parse("--input x"), CLI::ParseError);
}

TEST(Run, UsageErrorsExitTwoWithJson) {
  RunConfig c;
  c.command = "evaluate";
  c.input = "/nonexistent/x.jsonl";
  c.output = "/tmp/unused";
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 2);
  const auto j = json::parse(err.str());
  EXPECT_EQ(j["error"]["type"], "usage");

  TempDir dir("usage");
  c.input = write_dataset(dir, 3, 70);
  c.fpr_cap = 1.5;
  err.str("");
  EXPECT_EQ(run(c, out, err), 2);
  c.fpr_cap = 0.1;
  c.scorers = {"perplexity"};
  EXPECT_EQ(run(c, out, err), 2);
}

TEST(Run, MalformedRowsExitOneUnlessSkipped) {
  TempDir dir("malformed");
  const auto input = write_dataset(dir, 20, 71);
  std::ofstream(input, std::ios::app) << "{broken\n";
  RunConfig c;
  c.command = "segment";
  c.input = input;
  c.output = dir / "out";
  c.log_level = "off";
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), 1);
  const auto j = json::parse(err.str());
  EXPECT_EQ(j["error"]["type"], "data");
  EXPECT_EQ(j["error"]["rows"][0]["row"], 21);
  EXPECT_FALSE(fs::exists(dir / "out/manifest.json"));

  c.skip_invalid = true;
  EXPECT_EQ(run(c, out, err), 0);
  EXPECT_NE(out.str().find("samples=20"), std::string::npos);
}

TEST(Run, CommandsAreIdempotent) {
  TempDir dir("idem");
  const auto input = write_dataset(dir, 60, 72);
  for (const char* cmd : {"segment", "score", "aggregate", "evaluate", "filter", "audit-tokenizer"}) {
    RunConfig c;
    c.command = cmd;
    c.input = input;
    c.log_level = "off";
    std::ostringstream out, err;
    c.output = dir / (std::string(cmd) + "-1");
    ASSERT_EQ(run(c, out, err), 0) << cmd << ": " << err.str();
    c.output = dir / (std::string(cmd) + "-2");
    ASSERT_EQ(run(c, out, err), 0) << cmd << ": " << err.str();
    const auto m1 = read_manifest(dir / (std::string(cmd) + "-1"));
    ASSERT_TRUE(m1) << cmd;
    EXPECT_EQ(m1, read_manifest(dir / (std::string(cmd) + "-2"))) << cmd;
  }
}

TEST(Run, ScoreThenEvaluateExternalFile) {
  TempDir dir("chain");
  const auto input = write_dataset(dir, 40, 73);
  RunConfig score;
  score.command = "score";
  score.input = input;
  score.output = dir / "scores";
  score.scorers = {"token_entropy"};
  score.log_level = "off";
  std::ostringstream out, err;
  ASSERT_EQ(run(score, out, err), 0) << err.str();
  const auto file = dir / "scores/scores/token_entropy_24.jsonl";
  ASSERT_TRUE(fs::exists(file));

  RunConfig native = score;
  native.command = "evaluate";
  native.output = dir / "native";
  native.aggregators = {"product"};
  ASSERT_EQ(run(native, out, err), 0) << err.str();

  RunConfig ext = native;
  ext.scorers.clear();
  ext.score_files = {file};
  ext.output = dir / "external";
  ASSERT_EQ(run(ext, out, err), 0) << err.str();
  const auto a = json::parse(slurp(dir / "native/reports/token_entropy_24_product.json"));
  const auto b = json::parse(slurp(dir / "external/reports/token_entropy_24_product.json"));
  EXPECT_EQ(a["overall"], b["overall"]);
}

TEST(Run, StatsPrintsTables) {
  TempDir dir("stats");
  RunConfig c;
  c.command = "stats";
  c.input = write_dataset(dir, 50, 74);
  c.log_level = "off";
  std::ostringstream out, err;
  ASSERT_EQ(run(c, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("kappa="), std::string::npos);
  EXPECT_NE(out.str().find("Share of samples"), std::string::npos);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(shell(std::string(MUCH_BINARY) + " --help").status, 0);
  const auto bad = shell(std::string(MUCH_BINARY) + " evaluate --no-such-flag 2>&1");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.out.find("\"usage\""), std::string::npos);
  const auto missing = shell(std::string(MUCH_BINARY) + " segment --input /nonexistent 2>&1");
  EXPECT_EQ(missing.status, 2);
}

}  // namespace
}  // namespace much::cli
