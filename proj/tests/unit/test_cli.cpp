#include <gtest/gtest.h>

#include <cstdlib>

#include "helpers.hpp"
#include "quanttm/cli.hpp"
#include "quanttm/json_codec.hpp"

using namespace quanttm;
using quanttm::testing::TempDir;
using nlohmann::json;

TEST(CliInit, CreatesValidProject) {
  TempDir dir;
  std::string path = dir.file("p.json");
  auto r = cli::cmd_init(path, "USD", "demo", false);
  EXPECT_EQ(r.exit_code, 0) << r.err;
  auto v = cli::cmd_validate(path, true);
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_TRUE(json::parse(v.out)["violations"].empty());
  EXPECT_EQ(load_project(read_file(path)).metadata.currency, "USD");
}

TEST(CliInit, RefusesToOverwrite) {
  TempDir dir;
  std::string path = dir.file("p.json");
  ASSERT_EQ(cli::cmd_init(path, "USD", "", false).exit_code, 0);
  EXPECT_EQ(cli::cmd_init(path, "CHF", "", false).exit_code, 1);
  EXPECT_EQ(load_project(read_file(path)).metadata.currency, "USD");
  EXPECT_EQ(cli::cmd_init(path, "CHF", "", true).exit_code, 0);
  EXPECT_EQ(load_project(read_file(path)).metadata.currency, "CHF");
}

TEST(CliInit, RejectsUnknownCurrency) {
  TempDir dir;
  EXPECT_EQ(cli::cmd_init(dir.file("p.json"), "XYZ", "", false).exit_code, 1);
}

TEST(CliValidate, ReportsViolationsWithPaths) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  json j = json::parse(read_file(path));
  j["links"][0]["p_initiation"] = 2;
  write_file_atomic(path, j.dump());
  auto r = cli::cmd_validate(path, true);
  EXPECT_EQ(r.exit_code, 1);
  auto violations = json::parse(r.out)["violations"];
  ASSERT_FALSE(violations.empty());
  EXPECT_EQ(violations[0]["path"], "links[0].p_initiation");
  EXPECT_EQ(violations[0]["code"], "ProbabilityOutOfRange");
}

TEST(CliClassify, HeuristicAndOverride) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  auto r = cli::cmd_classify(path, "DDoS", std::nullopt, false);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("Availability"), std::string::npos);

  auto ransom = cli::cmd_classify(path, "Ransomware", std::nullopt, true);
  EXPECT_EQ(json::parse(ransom.out)["principles"], json({"Confidentiality", "Availability"}));

  auto unknown = cli::cmd_classify(path, "unknown", std::nullopt, false);
  EXPECT_EQ(unknown.exit_code, 0);
  EXPECT_NE(unknown.err.find("--principles"), std::string::npos);

  auto manual = cli::cmd_classify(path, "unknown", std::string("C,I"), false);
  EXPECT_EQ(manual.exit_code, 0);
  ProjectFile p = load_project(read_file(path));
  auto it = std::find_if(p.classifications.begin(), p.classifications.end(),
                         [](const Classification& c) { return c.threat_name == "unknown"; });
  ASSERT_NE(it, p.classifications.end());
  EXPECT_TRUE(it->manual);
  EXPECT_EQ(it->principles, (PrincipleSet{SecurityPrinciple::Confidentiality, SecurityPrinciple::Integrity}));

  EXPECT_EQ(cli::cmd_classify(path, "x", std::string("Q"), false).exit_code, 1);
}

TEST(CliQuantify, TableAndJson) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  auto table = cli::cmd_quantify(path, false, false);
  EXPECT_EQ(table.exit_code, 0);
  EXPECT_NE(table.out.find("324.00 USD"), std::string::npos);
  EXPECT_NE(table.out.find("194.40 USD"), std::string::npos);
  EXPECT_NE(table.err.find("Ransomware"), std::string::npos);

  auto js = cli::cmd_quantify(path, false, true);
  json arr = json::parse(js.out);
  ASSERT_EQ(arr.size(), 6u);
  EXPECT_EQ(arr[0]["threat"], "DDoS");
  EXPECT_EQ(arr[0]["q"], json({{"amount_minor", 32400}, {"currency", "USD"}}));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    QuantifiedThreat q = codec::decode_quantified(arr[i], "[" + std::to_string(i) + "]");
    EXPECT_EQ(codec::encode(q), arr[i]);
  }
}

TEST(CliQuantify, RankFlagOrdersByImpact) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  json arr = json::parse(cli::cmd_quantify(path, true, true).out);
  std::vector<std::string> names;
  for (const auto& q : arr) names.push_back(q["threat"]);
  EXPECT_EQ(names, (std::vector<std::string>{"Ransomware", "DDoS", "Deserialization", "CSRF", "XSS", "XXE"}));
  EXPECT_EQ(json::parse(cli::cmd_rank(path, "impact", true).out), arr);
}

TEST(CliQuantify, MissingEstimateExitsOne) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  ProjectFile p = load_project(read_file(path));
  std::erase_if(p.bia_records, [](const BiaRecord& r) { return r.effect_id == "ransom-orders-leaked"; });
  write_file_atomic(path, save_project(p));
  auto r = cli::cmd_quantify(path, false, false);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("ransom-orders-leaked"), std::string::npos);
  EXPECT_NE(r.err.find("MissingEstimate"), std::string::npos);
}

TEST(CliRosi, WhatIfControl) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  auto r = cli::cmd_rosi(path, {"540", "1.0", {"DDoS"}, std::nullopt}, false);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("-216.00 USD"), std::string::npos);
  EXPECT_NE(r.out.find("not cost-effective"), std::string::npos);

  json j = json::parse(cli::cmd_rosi(path, {"540", "0", {"ddos"}, std::nullopt}, true).out);
  EXPECT_EQ(j["absolute_return"]["amount_minor"], -54000);

  auto stored = cli::cmd_rosi(path, {"", "", {}, std::string("ddos-protection")}, true);
  EXPECT_EQ(json::parse(stored.out)["absolute_return"]["amount_minor"], -21600);

  EXPECT_EQ(cli::cmd_rosi(path, {"540", "1", {"nope"}, std::nullopt}, false).exit_code, 1);
  EXPECT_EQ(cli::cmd_rosi(path, {"540", "1.5", {"ddos"}, std::nullopt}, false).exit_code, 1);
}

TEST(CliCompare, DreadAndMatrix) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  auto dread = cli::cmd_compare(path, "dread", std::nullopt, true);
  EXPECT_EQ(dread.exit_code, 0) << dread.err;
  json rows = json::parse(dread.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0]["grade"], "C");

  std::string scores = dir.file("scores.json");
  write_file_atomic(scores, R"([{"threat_id":"ddos","damage":0,"reproducibility":0,"exploitability":0,
                                "affected_users":0,"discoverability":0}])");
  json zero = json::parse(cli::cmd_compare(path, "dread", scores, true).out);
  EXPECT_EQ(zero[0]["grade"], "L");

  write_file_atomic(scores, R"([{"threat_id":"ddos","damage":11,"reproducibility":0,"exploitability":0,
                                "affected_users":0,"discoverability":0}])");
  EXPECT_EQ(cli::cmd_compare(path, "dread", scores, false).exit_code, 1);

  write_file_atomic(scores, R"([{"threat_id":"ddos","likelihood":"High","severity":"Medium"}])");
  json m = json::parse(cli::cmd_compare(path, "matrix", scores, true).out);
  EXPECT_EQ(m[0]["priority"], "High");
  EXPECT_EQ(cli::cmd_compare(path, "other", std::nullopt, false).exit_code, 1);
}

TEST(CliReportAndPlots, ProduceParseableOutput) {
  TempDir dir;
  std::string path = dir.copy_fixture();
  auto report = cli::cmd_report(path, std::nullopt);
  EXPECT_EQ(report.out.rfind("rank,threat_id", 0), 0u);
  std::string out = dir.file("r.csv");
  EXPECT_EQ(cli::cmd_report(path, out).exit_code, 0);
  EXPECT_EQ(read_file(out), report.out);
  EXPECT_TRUE(json::parse(cli::cmd_plots(path).out).is_array());
  EXPECT_EQ(json::parse(cli::cmd_catalog(std::nullopt).out)["factors"].size(), 16u);
  EXPECT_EQ(json::parse(cli::cmd_catalog(path).out)["factors"].size(), 17u);
}

TEST(CliFactors, Suggestions) {
  json arr = json::parse(cli::cmd_factors("", "A", true).out);
  EXPECT_EQ(arr.size(), 9u);
}

TEST(CliPaths, EnvironmentFallback) {
  EXPECT_EQ(cli::resolve_project_path("x.json"), "x.json");
  ::setenv("QUANTTM_PROJECT", "/tmp/from-env.json", 1);
  EXPECT_EQ(cli::resolve_project_path(""), "/tmp/from-env.json");
  ::unsetenv("QUANTTM_PROJECT");
  EXPECT_THROW(cli::resolve_project_path(""), Error);
}

TEST(CliErrors, MissingFile) {
  auto r = cli::cmd_quantify("/nonexistent/p.json", false, false);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.err.rfind("error: IoFailure", 0), 0u);
}
