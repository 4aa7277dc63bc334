#pragma once

#include <ostream>

#include "vocheck/report_io.hpp"

namespace vocheck {

// POSIX-style exit codes used by the batch runner.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 2;           // some non-marginal verdict failed
inline constexpr int kExitPrecision = 3;      // precision or hypothesis error
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

/// Builds the configured scenario from the registry, runs the hypothesis
/// battery and the checks, and writes the requested report files.
int run(const RunConfig& config, std::ostream& log);

/// Registered scenario builders with their parameter schemas.
std::string list_scenarios(bool as_json);

/// Builds a scenario from the registry by name (throws UsageError when the
/// name is unknown). Exposed for tests.
Scenario build_scenario(const std::string& name, const nlohmann::json& params,
                        std::uint64_t seed);

}  // namespace vocheck
