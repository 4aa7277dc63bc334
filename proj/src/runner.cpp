#include "vocheck/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "vocheck/rng.hpp"

namespace vocheck {

namespace {

Vector json_to_vector(const nlohmann::json& j) {
  if (!j.is_array()) throw UsageError("expected a JSON array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Matrix json_to_matrix(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw UsageError("expected a JSON array of arrays");
  Matrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw UsageError("ragged matrix in config");
    for (std::size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

// Random Metzler matrix with row sums <= -(gap + headroom).
Matrix random_metzler(int n, Rng& rng, double gap, double headroom) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) a(i, j) = rng.uniform01();
  for (int i = 0; i < n; ++i) a(i, i) = -a.row(i).sum() - gap - headroom;
  return a;
}

Vector random_positive(int n, Rng& rng, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

struct BuilderEntry {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::string>> schema;  // param -> type/default
  Scenario (*build)(const nlohmann::json&, std::uint64_t);
};

Scenario build_metzler(const nlohmann::json& p, std::uint64_t seed) {
  return scenario_metzler_random(p.value("n", 4), p.value("seed", seed), p.value("gap", 0.5));
}

Scenario build_heat(const nlohmann::json& p, std::uint64_t) {
  const int d = p.value("d", 1);
  const double extent = p.value("extent", 8.0);
  const int nodes = p.value("nodes", 81);
  const double t_ref = p.value("t_ref", 0.1);
  if (p.contains("b"))
    return scenario_heat_drift(d, extent, nodes, json_to_vector(p["b"]), t_ref);
  return scenario_heat_drift(d, extent, nodes, p.value("b_const", 0.5), t_ref);
}

Scenario build_rank_one_linfty(const nlohmann::json& p, std::uint64_t seed) {
  const int n = p.value("n", 6);
  const double gap = p.value("gap", 0.5);
  const double c = p.value("c", 0.5);
  Rng rng(p.value("seed", seed));
  const Vector weights =
      p.contains("weights") ? json_to_vector(p["weights"]) : random_positive(n, rng, 0.5, 1.0);
  const Matrix b = Vector::Ones(n) * weights.transpose();
  const Matrix a_s = p.contains("A_S")
                         ? json_to_matrix(p["A_S"])
                         : random_metzler(n, rng, gap, c * b.rowwise().sum().maxCoeff() + 0.1);
  const Matrix a_t = p.contains("A_T") ? json_to_matrix(p["A_T"]) : Matrix(a_s + c * b);
  return scenario_rank_one_linfty(weights, a_s, a_t);
}

Scenario build_rank_one_lp(const nlohmann::json& p, std::uint64_t seed) {
  const int n = p.value("n", 6);
  const double gap = p.value("gap", 0.5);
  const double c = p.value("c", 0.5);
  const double p_exp = p.value("p", 3.0);
  const double q_exp = p.value("q", 1.5);
  Rng rng(p.value("seed", seed));
  const Vector weights =
      p.contains("weights") ? json_to_vector(p["weights"]) : random_positive(n, rng, 0.5, 1.0);
  const Vector f = p.contains("f") ? json_to_vector(p["f"]) : random_positive(n, rng, 0.2, 1.0);
  const Vector gp =
      p.contains("gprime") ? json_to_vector(p["gprime"]) : random_positive(n, rng, 0.2, 1.0);
  const Matrix b = f * weights.cwiseProduct(gp).transpose();
  const Matrix a_s = p.contains("A_S")
                         ? json_to_matrix(p["A_S"])
                         : random_metzler(n, rng, gap, c * b.rowwise().sum().maxCoeff() + 0.1);
  const Matrix a_t = p.contains("A_T") ? json_to_matrix(p["A_T"]) : Matrix(a_s + c * b);
  return scenario_rank_one_lp(p_exp, q_exp, f, gp, a_s, a_t, weights);
}

Scenario build_delay(const nlohmann::json& p, std::uint64_t seed) {
  const int n = p.value("n", 1);
  const int m = p.value("m", 20);
  const double p_exp = p.value("p", 2.0);
  const double q_exp = p.value("q", 2.0);
  Matrix a0;
  if (p.contains("A0")) {
    a0 = json_to_matrix(p["A0"]);
  } else if (n == 1) {
    a0 = Matrix::Constant(1, 1, -1.0);
  } else {
    Rng rng(p.value("seed", seed));
    a0 = random_metzler(n, rng, 0.5, 0.0);
  }
  const double eta_const = p.value("eta_const", 1.0);
  const Vector eta =
      p.contains("eta") ? json_to_vector(p["eta"]) : Vector::Constant(m, eta_const);
  const Vector rho = p.contains("rho") ? json_to_vector(p["rho"])
                                       : Vector(eta * p.value("rho_scale", 1.0));
  return scenario_delay(a0, eta, rho, p_exp, q_exp, m);
}

const std::vector<BuilderEntry>& registry() {
  static const std::vector<BuilderEntry> entries{
      {"metzler-random",
       "randomized Metzler pair, constructed to satisfy or violate the generator inequality",
       {{"n", "int [2,8] = 4"}, {"seed", "int = run seed"}, {"gap", "number = 0.5"}},
       &build_metzler},
      {"heat-drift",
       "Gaussian-kernel heat flow vs drift-perturbed heat flow on a uniform lattice",
       {{"d", "1|2 = 1"},
        {"extent", "number = 8.0"},
        {"nodes", "int per axis = 81"},
        {"b_const", "number >= 0 = 0.5"},
        {"b", "array per node (optional)"},
        {"t_ref", "number = 0.1"}},
       &build_heat},
      {"rank-one-linfty",
       "rank-one coupling Bu = (integral of u) * ones on the L2/Linf/L1 scale",
       {{"n", "int = 6"},
        {"seed", "int = run seed"},
        {"gap", "number = 0.5"},
        {"c", "number = 0.5 (A_T = A_S + c B; c <= 1 satisfies the inequality)"},
        {"weights", "array (optional)"},
        {"A_S", "matrix (optional)"},
        {"A_T", "matrix (optional)"}},
       &build_rank_one_linfty},
      {"rank-one-lp",
       "rank-one coupling Bu = <u, g'> f on the L2/Lp/Lq scale",
       {{"n", "int = 6"},
        {"seed", "int = run seed"},
        {"gap", "number = 0.5"},
        {"c", "number = 0.5"},
        {"p", "number in [1,inf) = 3.0"},
        {"q", "number in [1,inf) = 1.5"},
        {"f", "array >= 0 (optional)"},
        {"gprime", "array >= 0 (optional)"},
        {"weights", "array (optional)"},
        {"A_S", "matrix (optional)"},
        {"A_T", "matrix (optional)"}},
       &build_rank_one_lp},
      {"delay",
       "delay system on head x history cells; T couples the history, S does not",
       {{"n", "int = 1"},
        {"m", "history cells >= 4 = 20"},
        {"p", "number in [1,inf) = 2"},
        {"q", "number in [1,inf) = 2"},
        {"A0", "matrix (optional, default -1 / random Metzler)"},
        {"eta_const", "number = 1.0"},
        {"eta", "array per cell (optional)"},
        {"rho", "array per cell (optional, default eta * rho_scale)"},
        {"rho_scale", "number >= 1 = 1.0"}},
       &build_delay},
  };
  return entries;
}

const BuilderEntry* find_builder(const std::string& name) {
  for (const BuilderEntry& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

Scenario build_scenario(const std::string& name, const nlohmann::json& params,
                        std::uint64_t seed) {
  const BuilderEntry* entry = find_builder(name);
  if (!entry) throw UsageError("unknown scenario '" + name + "'; see --list");
  return entry->build(params, seed);
}

std::string list_scenarios(bool as_json) {
  if (as_json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const BuilderEntry& e : registry()) {
      nlohmann::ordered_json item;
      item["name"] = e.name;
      item["description"] = e.description;
      nlohmann::ordered_json params = nlohmann::ordered_json::object();
      for (const auto& [k, v] : e.schema) params[k] = v;
      item["params"] = params;
      doc.push_back(item);
    }
    return doc.dump(2) + "\n";
  }
  std::string out;
  for (const BuilderEntry& e : registry()) {
    out += e.name + "\n    " + e.description + "\n";
    for (const auto& [k, v] : e.schema) out += "    " + k + ": " + v + "\n";
  }
  return out;
}

int run(const RunConfig& config, std::ostream& log) {
  RunOutcome outcome;
  Scenario scn;
  try {
    scn = build_scenario(config.scenario, config.params, config.seed);
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("scenario construction failed: ") + e.what());
  }

  outcome.scenario_label = scn.label;
  outcome.dimension = scn.X->dim;
  outcome.tol = config.tol > 0.0 ? config.tol : scn.default_tol;

  outcome.t_grid = config.t_grid;
  if (outcome.t_grid.empty()) {
    if (scn.t_ref)
      outcome.t_grid = {0.25 * *scn.t_ref, 0.5 * *scn.t_ref, *scn.t_ref};
    else
      outcome.t_grid = {0.1, 0.5, 1.0, 2.0};
  }
  outcome.lambda_grid = config.lambda_grid;
  if (outcome.lambda_grid.empty())
    outcome.lambda_grid = {scn.bound_omega + 1.0, scn.bound_omega + 2.0,
                           scn.bound_omega + 5.0, scn.bound_omega + 10.0};

  const double tol = outcome.tol;
  bool any_fail = false;
  bool precision_or_hypothesis = false;

  outcome.hypothesis = hypothesis_report(scn);
  if (!outcome.hypothesis.pass) {
    outcome.errors.push_back("hypothesis battery failed");
    precision_or_hypothesis = true;
  } else {
    try {
      StatementReport a = check_statement_a(scn, outcome.t_grid, tol);
      StatementReport b = check_statement_b(scn, outcome.lambda_grid, tol);
      StatementReport c = check_statement_c(scn, tol);
      bool any_pass_v = false, any_fail_v = false;
      for (const StatementReport* r : {&a, &b, &c}) {
        if (r->verdict == Verdict::Pass) any_pass_v = true;
        if (r->verdict == Verdict::Fail) any_fail_v = true;
        outcome.notes.push_back("statement " + to_string(r->statement) + ": " +
                                to_string(r->verdict) + ", min slack " +
                                format_double(r->min_slack));
      }
      outcome.has_equivalence = true;
      outcome.agreement = !(any_pass_v && any_fail_v);
      any_fail = any_fail_v;
      outcome.statements.push_back(std::move(a));
      outcome.statements.push_back(std::move(b));
      outcome.statements.push_back(std::move(c));

      outcome.invariance_k =
          check_cone_invariance(scn, 'K', outcome.t_grid, outcome.lambda_grid, scn.K.tol);
      outcome.invariance_l =
          check_cone_invariance(scn, 'L', outcome.t_grid, outcome.lambda_grid, scn.L.tol);
      any_fail = any_fail || !outcome.invariance_k->pass || !outcome.invariance_l->pass;

      if (scn.B_tilde) {
        outcome.voc_identity = check_voc_identity(scn, outcome.t_grid, 1e-9);
        outcome.strong_inequality = check_strong_inequality(scn, outcome.t_grid, tol);
        any_fail = any_fail || !outcome.voc_identity->pass || !outcome.strong_inequality->pass;
      }

      if (config.corollary) {
        const CorollaryConstants& k = *config.corollary;
        outcome.extra_assumption = check_extra_assumption(
            scn, k.m, k.omega,
            {{0.0, 0.0},
             {0.0, outcome.t_grid.back()},
             {0.5 * outcome.t_grid.back(), outcome.t_grid.back()},
             {outcome.t_grid.back(), outcome.t_grid.back()}},
            tol);
        std::vector<double> cor_lambda = outcome.lambda_grid;
        for (double& l : cor_lambda) l = std::max(l, k.omega + 1.0);
        CorollaryReports cor =
            check_corollary(scn, k.m, k.omega, k.c1, k.c2, k.c3, outcome.t_grid, cor_lambda, tol);
        for (StatementReport* r : {&cor.a, &cor.b, &cor.c}) {
          if (r->verdict == Verdict::Fail) any_fail = true;
          outcome.statements.push_back(std::move(*r));
        }
      }
    } catch (const PrecisionError& e) {
      outcome.errors.push_back(std::string("precision: ") + e.what());
      precision_or_hypothesis = true;
    } catch (const HypothesisError& e) {
      outcome.errors.push_back(std::string("hypothesis: ") + e.what());
      precision_or_hypothesis = true;
    }
  }

  outcome.exit_code = precision_or_hypothesis ? kExitPrecision : (any_fail ? kExitFail : kExitPass);

  const std::string timestamp = iso_timestamp();
  for (const std::string& format : config.formats) {
    const std::string path = config.out_dir + "/report." + format;
    const std::string content = format == "json" ? render_report_json(config, outcome, timestamp)
                                                 : render_report_csv(outcome);
    write_file_atomic(path, content);
    log << "wrote " << path << "\n";
  }

  log << scn.label << ": ";
  if (precision_or_hypothesis)
    log << "error (exit 3)\n";
  else
    log << (any_fail ? "FAIL" : "PASS") << " (exit " << outcome.exit_code << ")\n";
  for (const std::string& n : outcome.notes) log << "  " << n << "\n";
  for (const std::string& e : outcome.errors) log << "  error: " << e << "\n";
  return outcome.exit_code;
}

}  // namespace vocheck
