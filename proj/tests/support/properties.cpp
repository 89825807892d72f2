#include "properties.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <sstream>
#include <thread>

#include "generators.hpp"
#include "quanttm/analysis.hpp"
#include "quanttm/cli.hpp"
#include "quanttm/json_codec.hpp"
#include "quanttm/service.hpp"

namespace quanttm::testing {

namespace {

using nlohmann::json;

CheckResult fail(std::string detail) { return {false, std::move(detail)}; }

// One link, one scenario, its records, all kept in integer form as well.
struct Instance {
  std::int64_t pi_milli = 0;
  std::int64_t ps_milli = 0;
  std::int64_t cap_days = -1;
  std::vector<std::int64_t> degrees_milli;
  std::vector<IntRecord> records;
};

Instance random_instance(Rng& rng) {
  Instance in;
  in.pi_milli = uniform(rng, 0, 1000);
  in.ps_milli = uniform(rng, 0, 1000);
  in.cap_days = uniform(rng, 0, 3) == 0 ? -1 : uniform(rng, 0, 90);
  for (int e = 0, n = static_cast<int>(uniform(rng, 1, 4)); e < n; ++e) {
    in.degrees_milli.push_back(uniform(rng, 1, 1000));
    in.records.push_back(random_int_record(rng));
  }
  return in;
}

Money quantify_instance(const Instance& in, const FactorCatalog& catalog) {
  ThreatAssetLink link{"t", "a", thousandths(in.pi_milli), thousandths(in.ps_milli),
                       in.cap_days < 0 ? Duration::infinite() : Duration::hours(Decimal(in.cap_days * 24))};
  ThreatScenario scenario{"t", {}};
  std::vector<BiaRecord> records;
  for (std::size_t e = 0; e < in.records.size(); ++e) {
    std::string id = "e" + std::to_string(e);
    scenario.effects.push_back(make_effect(id, "effect", thousandths(in.degrees_milli[e])));
    records.push_back(to_record(in.records[e], "t", id));
  }
  return quantify_threat(link, "T", scenario, records, catalog).q_value;
}

std::int64_t oracle_q(const Instance& in) {
  std::int64_t q = 0;
  for (std::size_t e = 0; e < in.records.size(); ++e) {
    q += oracle_contribution(in.pi_milli, in.ps_milli, in.degrees_milli[e], in.records[e], in.cap_days);
  }
  return q;
}

std::string random_case(Rng& rng, const std::string& s) {
  std::string out = s;
  for (auto& c : out) {
    c = static_cast<char>(uniform(rng, 0, 1) ? std::toupper(static_cast<unsigned char>(c))
                                              : std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

CheckResult check_stage_expansion_oracle(int records, std::uint64_t seed) {
  Rng rng(seed);
  FactorCatalog catalog = FactorCatalog::builtin();
  for (int i = 0; i < records; ++i) {
    IntRecord r = random_int_record(rng, 6, 5);
    std::int64_t got = compute_scenario_loss(to_record(r, "s", "e"), catalog).total.amount_minor();
    std::int64_t want = oracle_scenario_loss(r);
    if (got != want) {
      return fail("record " + std::to_string(i) + ": engine " + std::to_string(got) + " != oracle " +
                  std::to_string(want));
    }
  }
  return {true, std::to_string(records) + " records equal"};
}

CheckResult check_recovery_tuple(int samples, std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    std::int64_t x = uniform(rng, 0, 1'000'000'000'000);
    PersistentImpact p{"product_revenue_loss", Money(x, "USD"), {{Decimal(0), Decimal(4)}}};
    Money got = compute_persistent_loss(p);
    if (got.amount_minor() != 4 * x) {
      return fail("X=" + std::to_string(x) + " gave " + std::to_string(got.amount_minor()));
    }
  }
  return {true, std::to_string(samples) + " values of X"};
}

CheckResult check_q_linearity(int instances, std::uint64_t seed) {
  Rng rng(seed);
  FactorCatalog catalog = FactorCatalog::builtin();
  for (int i = 0; i < instances; ++i) {
    Instance in = random_instance(rng);
    std::int64_t q = quantify_instance(in, catalog).amount_minor();
    if (q != oracle_q(in)) {
      return fail("instance " + std::to_string(i) + ": Q " + std::to_string(q) + " != enumeration " +
                  std::to_string(oracle_q(in)));
    }
    // Each contribution is rounded once, so k*Q(x) and Q(k*x) differ by at
    // most (k + 1)/2 minor units per effect.
    std::int64_t effects = static_cast<std::int64_t>(in.records.size());
    auto within = [&](std::int64_t scaled, std::int64_t base, std::int64_t k) {
      __int128 diff = static_cast<__int128>(scaled) - static_cast<__int128>(base) * k;
      if (diff < 0) diff = -diff;
      return 2 * diff <= static_cast<__int128>(effects) * (k + 1);
    };
    std::int64_t k = uniform(rng, 2, 5);
    Instance a = in;
    a.pi_milli = in.pi_milli / k;
    Instance ak = a;
    ak.pi_milli = a.pi_milli * k;
    if (!within(quantify_instance(ak, catalog).amount_minor(), quantify_instance(a, catalog).amount_minor(), k)) {
      return fail("instance " + std::to_string(i) + ": not linear in P_i");
    }
    Instance b = in;
    b.ps_milli = in.ps_milli / k;
    Instance bk = b;
    bk.ps_milli = b.ps_milli * k;
    if (!within(quantify_instance(bk, catalog).amount_minor(), quantify_instance(b, catalog).amount_minor(), k)) {
      return fail("instance " + std::to_string(i) + ": not linear in P_s");
    }
    Instance c = in;
    for (auto& r : c.records) {
      for (auto& o : r.one_time) o.second *= k;
      for (auto& p : r.persistent) p.daily_minor *= k;
    }
    if (!within(quantify_instance(c, catalog).amount_minor(), q, k)) {
      return fail("instance " + std::to_string(i) + ": not linear in the loss");
    }
  }
  return {true, std::to_string(instances) + " instances"};
}

CheckResult check_monotonicity(int instances, std::uint64_t seed) {
  Rng rng(seed);
  FactorCatalog catalog = FactorCatalog::builtin();
  for (int i = 0; i < instances; ++i) {
    BiaRecord r = to_record(random_int_record(rng), "s", "e");
    std::int64_t h1 = uniform(rng, 0, 200'000), h2 = uniform(rng, 0, 200'000);
    if (h1 > h2) std::swap(h1, h2);
    std::int64_t d1 = uniform(rng, 1, 1000), d2 = uniform(rng, 1, 1000);
    if (d1 > d2) std::swap(d1, d2);
    ThreatEffect lo = make_effect("e", "effect", thousandths(d1));
    ThreatEffect hi = make_effect("e", "effect", thousandths(d2));
    Duration short_d = Duration::hours(hundredths(h1));
    Duration long_d = uniform(rng, 0, 5) == 0 ? Duration::infinite() : Duration::hours(hundredths(h2));
    Rational a = loss_expectancy_exact(lo, short_d, r, catalog);
    Rational b = loss_expectancy_exact(lo, long_d, r, catalog);
    Rational c = loss_expectancy_exact(hi, long_d, r, catalog);
    if (a > b) return fail("instance " + std::to_string(i) + ": longer duration lowered the loss");
    if (b > c) return fail("instance " + std::to_string(i) + ": larger degree lowered the loss");
  }
  return {true, std::to_string(instances) + " instances"};
}

CheckResult check_scaling_argmax(int instances, std::uint64_t seed) {
  Rng rng(seed);
  static const std::vector<std::string> targets{"EUR", "JPY", "BHD", "CHF", "USD"};
  for (int i = 0; i < instances; ++i) {
    std::vector<QuantifiedThreat> qs;
    for (int t = 0, n = static_cast<int>(uniform(rng, 1, 12)); t < n; ++t) {
      QuantifiedThreat q;
      q.threat_id = "t" + std::to_string(t);
      q.threat_name = "Threat " + std::to_string(t);
      q.asset_id = "a";
      q.q_value = Money(uniform(rng, 0, 100'000'000), "USD");
      qs.push_back(q);
    }
    Decimal rate = thousandths(uniform(rng, 1, 200'000));
    std::string target = targets[uniform(rng, 0, targets.size() - 1)];
    std::vector<QuantifiedThreat> scaled = qs;
    for (auto& q : scaled) q.q_value = convert_currency(q.q_value, rate, target);
    std::string top = rank_by_impact(qs).front().threat_id;
    auto ranked = rank_by_impact(scaled);
    auto it = std::find_if(scaled.begin(), scaled.end(), [&](const auto& q) { return q.threat_id == top; });
    if (it->q_value != ranked.front().q_value) {
      return fail("instance " + std::to_string(i) + ": top threat " + top + " lost the maximum after conversion");
    }
  }
  return {true, std::to_string(instances) + " instances"};
}

CheckResult check_roundtrip(int projects, std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < projects; ++i) {
    ProjectFile p = random_project(rng);
    auto violations = validate_project(p);
    if (!violations.empty()) {
      return fail("generator produced an invalid project " + std::to_string(i) + ": " + violations.front().path + " " +
                  violations.front().message);
    }
    std::string bytes = save_project(p);
    ProjectFile back = load_project(bytes);
    if (!(back == p)) return fail("project " + std::to_string(i) + " changed on load");
    if (save_project(back) != bytes) return fail("project " + std::to_string(i) + " re-saved differently");
  }
  return {true, std::to_string(projects) + " projects"};
}

CheckResult check_ciaa_case_insensitivity(std::uint64_t seed) {
  Rng rng(seed);
  std::size_t checked = 0;
  for (const auto& entry : ciaa_keyword_table()) {
    for (const auto& kw : entry.keywords) {
      PrincipleSet base = classify_ciaa(kw);
      if (!std::includes(base.begin(), base.end(), entry.principles.begin(), entry.principles.end())) {
        return fail("keyword '" + kw + "' does not yield the principles of " + entry.threat);
      }
      for (int v = 0; v < 8; ++v) {
        std::string name = random_case(rng, kw);
        if (v % 2) name = "Targeted " + name + " campaign";
        if (classify_ciaa(name) != base) return fail("'" + name + "' classified differently from '" + kw + "'");
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " variants"};
}

CheckResult check_cli_api_differential(const std::string& project_path) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("quanttm-diff-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  fs::path copy = dir / "project.json";
  fs::copy_file(project_path, copy, fs::copy_options::overwrite_existing);
  std::string path = copy.string();

  httplib::Server server;
  ProjectService service(ServiceConfig{path, ""});
  service.install(server);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  CheckResult result{true, ""};
  std::vector<std::string> compared;
  httplib::Client client("127.0.0.1", port);
  auto api = [&](const httplib::Result& r) -> std::string {
    if (!r || r->status != 200) return "<http failure>";
    return r->body;
  };
  auto same_json = [&](const std::string& what, const cli::CommandResult& c, const std::string& body) {
    if (!result.ok) return;
    try {
      if (c.exit_code != 0 || json::parse(c.out) != json::parse(body)) {
        result = fail(what + ": CLI and API differ");
      } else {
        compared.push_back(what);
      }
    } catch (const std::exception& e) {
      result = fail(what + ": " + e.what());
    }
  };

  same_json("quantify", cli::cmd_quantify(path, false, true), api(client.Get("/quantify")));
  same_json("rank impact", cli::cmd_rank(path, "impact", true), api(client.Get("/rank?by=impact")));
  same_json("rank emergency", cli::cmd_rank(path, "emergency", true), api(client.Get("/rank?by=emergency")));
  same_json("plots", cli::cmd_plots(path), api(client.Get("/plots")));
  same_json("catalog", cli::cmd_catalog(path), api(client.Get("/catalog")));
  same_json("factors", cli::cmd_factors(path, "A,C", true), api(client.Get("/factors?principles=A,C")));

  ProjectFile p = load_project(read_file(path));
  QuantificationRun run = run_quantification(p);
  for (const auto& q : run.results) {
    cli::RosiOptions options{"540", "0.5", {q.threat_id}, std::nullopt};
    json body{{"annual_cost", codec::encode(Money::from_major(540, q.q_value.currency()))},
              {"mitigation_rate", 0.5},
              {"threats", {q.threat_id}}};
    same_json("rosi " + q.threat_id, cli::cmd_rosi(path, options, true),
              api(client.Post("/rosi", body.dump(), "application/json")));
  }
  if (result.ok) {
    cli::CommandResult csv = cli::cmd_report(path, std::nullopt);
    if (csv.out != api(client.Get("/report.csv"))) {
      result = fail("report.csv: CLI and API differ");
    } else {
      compared.push_back("report.csv");
    }
  }

  server.stop();
  worker.join();
  fs::remove_all(dir);
  if (result.ok) {
    std::ostringstream s;
    s << compared.size() << " outputs identical";
    result.detail = s.str();
  }
  return result;
}

}  // namespace quanttm::testing
