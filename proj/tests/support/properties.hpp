#pragma once

#include <cstdint>
#include <string>

namespace quanttm::testing {

struct CheckResult {
  bool ok = true;
  std::string detail;
};

// compute_scenario_loss against day-by-day expansion.
CheckResult check_stage_expansion_oracle(int records, std::uint64_t seed);
// Daily loss X with a single (0, 4) stage costs exactly 4X.
CheckResult check_recovery_tuple(int samples, std::uint64_t seed);
// Q against direct enumeration, plus scaling of P_i, P_s and the loss.
CheckResult check_q_linearity(int instances, std::uint64_t seed);
// Loss expectancy never decreases with a longer duration or a larger degree.
CheckResult check_monotonicity(int instances, std::uint64_t seed);
// The top-ranked threat stays on top after converting every Q by one rate.
CheckResult check_scaling_argmax(int instances, std::uint64_t seed);
// save -> load is the identity and save is a fixed point.
CheckResult check_roundtrip(int projects, std::uint64_t seed);
// Every keyword classifies the same under any letter case.
CheckResult check_ciaa_case_insensitivity(std::uint64_t seed);
// CLI --json output and the HTTP API agree on the given project.
CheckResult check_cli_api_differential(const std::string& project_path);

}  // namespace quanttm::testing
