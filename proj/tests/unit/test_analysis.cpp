#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "quanttm/analysis.hpp"

using namespace quanttm;
using quanttm::testing::load_fixture;

namespace {

// Minimal RFC-4180 reader: quoted fields, doubled quotes, CRLF records.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
      ++i;
    } else {
      field += c;
    }
  }
  return rows;
}

}  // namespace

TEST(Report, ParsesBackToTheRun) {
  ProjectFile p = load_fixture();
  QuantificationRun run = run_quantification(p);
  std::string csv = export_report(p, run);
  ASSERT_GE(csv.size(), 2u);
  EXPECT_EQ(csv.substr(csv.size() - 2), "\r\n");
  auto rows = parse_csv(csv);
  ASSERT_EQ(rows.size(), run.results.size() + 1);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"rank", "threat_id", "threat", "asset_id", "duration_hours", "q",
                                               "currency", "contributions"}));
  auto ranked = rank_by_impact(run.results);
  for (std::size_t i = 0; i < run.results.size(); ++i) {
    const auto& q = run.results[i];
    const auto& r = rows[i + 1];
    ASSERT_EQ(r.size(), 8u);
    EXPECT_EQ(r[1], q.threat_id);
    EXPECT_EQ(r[2], q.threat_name);
    EXPECT_EQ(r[4], q.duration.str());
    EXPECT_EQ(r[5], q.q_value.major_str());
    EXPECT_EQ(r[6], q.q_value.currency());
    std::size_t rank = std::stoul(r[0]);
    EXPECT_EQ(ranked[rank - 1].threat_id, q.threat_id);
  }
  EXPECT_EQ(rows[1][7], "ddos-shop-down=324.00");
}

TEST(Report, QuotesFieldsThatNeedIt) {
  ProjectFile p = load_fixture();
  p.model.threats[0].name = "DDoS, \"volumetric\"";
  QuantificationRun run = run_quantification(p);
  auto rows = parse_csv(export_report(p, run));
  EXPECT_EQ(rows[1][2], "DDoS, \"volumetric\"");
}

TEST(Plots, SeriesKindsAndTotals) {
  ProjectFile p = load_fixture();
  QuantificationRun run = run_quantification(p);
  auto series = emit_plot_series(p, run);
  ASSERT_FALSE(series.empty());
  EXPECT_EQ(series[0].kind, PlotKind::ImpactBar);
  ASSERT_EQ(series[0].values.size(), run.results.size());
  for (std::size_t i = 0; i < run.results.size(); ++i) {
    EXPECT_EQ(series[0].values[i], run.results[i].q_value.amount_minor());
  }
  auto pies = std::count_if(series.begin(), series.end(),
                            [](const PlotSeries& s) { return s.kind == PlotKind::TangibleIntangiblePie; });
  EXPECT_EQ(pies, static_cast<long>(p.scenarios.size()));

  auto json = encode_plots(series);
  ASSERT_TRUE(json.is_array());
  EXPECT_EQ(json[0]["kind"], "impact_bar");
}

TEST(Plots, RecoveryTimelineSteps) {
  ProjectFile p = load_fixture();
  BiaRecord& r = p.bia_records[0];
  r.persistent.push_back({"product_revenue_loss", Money(10000, "USD"),
                          {{Decimal(0), Decimal(2)}, {Decimal::parse("0.5"), Decimal(3)}}});
  QuantificationRun run = run_quantification(p);
  auto series = emit_plot_series(p, run);
  auto it = std::find_if(series.begin(), series.end(),
                         [](const PlotSeries& s) { return s.kind == PlotKind::RecoveryTimeline; });
  ASSERT_NE(it, series.end());
  EXPECT_EQ(it->subject, "ddos/ddos-shop-down/product_revenue_loss");
  ASSERT_EQ(it->steps.size(), 2u);
  EXPECT_EQ(it->steps[1].day_start, Decimal(2));
  EXPECT_EQ(it->steps[1].day_end, Decimal(5));
  EXPECT_EQ(it->steps[0].residual_minor, 10000);
  EXPECT_EQ(it->steps[1].residual_minor, 5000);
}

TEST(Breakdown, ScenarioTotals) {
  ProjectFile p = load_fixture();
  LossBreakdown b = scenario_breakdown(p, *p.find_scenario("ransomware"), p.catalog());
  EXPECT_EQ(b.total, b.tangible_total + b.intangible_total);
  EXPECT_EQ(b.intangible_total, Money(108000000, "USD"));
}

TEST(Catalog, EncodesVersions) {
  auto j = encode_catalog(FactorCatalog::builtin());
  EXPECT_EQ(j["factors_version"], "factors/1");
  EXPECT_EQ(j["ciaa_version"], "ciaa/1");
  EXPECT_EQ(j["factors"].size(), 16u);
  EXPECT_EQ(j["ciaa_keywords"].size(), 20u);
}
