#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vocheck/verifier.hpp"

namespace vocheck {

inline constexpr const char* kToolName = "vocheck";
inline constexpr const char* kToolVersion = "0.1.0";

struct CorollaryConstants {
  double m = 1.0;
  double omega = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

struct RunConfig {
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();
  std::vector<double> t_grid;       // empty: runner default
  std::vector<double> lambda_grid;  // empty: omega + {1, 2, 5, 10}
  double tol = -1.0;                // <= 0: scenario default
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::vector<std::string> formats{"json"};
  std::optional<CorollaryConstants> corollary;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const nlohmann::json& doc);

/// Everything a run produced; serialized to the JSON/CSV report formats.
struct RunOutcome {
  std::string scenario_label;
  int dimension = 0;
  double tol = 0.0;
  std::vector<double> t_grid, lambda_grid;
  HypothesisReport hypothesis;
  std::vector<StatementReport> statements;
  bool has_equivalence = false;
  bool agreement = false;
  std::vector<std::string> notes;
  std::optional<ConeInvarianceReport> invariance_k, invariance_l;
  std::optional<VocIdentityReport> voc_identity;
  std::optional<StrongInequalityReport> strong_inequality;
  std::optional<ExtraAssumptionReport> extra_assumption;
  std::vector<std::string> errors;
  int exit_code = 0;
};

/// Round-trip decimal formatting (17 significant digits) used in every report.
std::string format_double(double value);

std::string render_report_json(const RunConfig& config, const RunOutcome& outcome,
                               const std::string& timestamp);
std::string render_report_csv(const RunOutcome& outcome);

/// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace vocheck
