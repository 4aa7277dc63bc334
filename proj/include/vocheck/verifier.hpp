#pragma once

#include <string>
#include <vector>

#include "vocheck/scenarios.hpp"

namespace vocheck {

enum class Statement { A, B, C, CorollaryA, CorollaryB, CorollaryC };
enum class Verdict { Pass, Fail, Marginal };

std::string to_string(Statement s);
std::string to_string(Verdict v);

/// One slack evaluation. grid_index is -1 for the generator statement (no grid).
struct SlackRow {
  int grid_index = -1;
  double grid_value = 0.0;  // t or lambda; ignored when grid_index < 0
  int x_index = 0;
  int v_index = 0;
  double slack = 0.0;
};

struct ArgMin {
  int x_index = -1;
  int v_index = -1;
  int grid_index = -1;
  double grid_value = 0.0;
};

/// Per-statement slack statistics. verdict is Marginal when |min_slack| sits
/// inside the 10*tol band, otherwise Pass/Fail by sign; holds() reports the
/// raw inequality min_slack >= -tol independently of the marginal band.
struct StatementReport {
  Statement statement = Statement::A;
  double min_slack = 0.0;
  ArgMin argmin;
  std::size_t samples_evaluated = 0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Marginal;
  std::vector<SlackRow> rows;

  bool holds() const { return min_slack >= -tolerance; }
};

Verdict verdict_for(double min_slack, double tol);

struct EquivalenceVerdict {
  StatementReport a, b, c;
  bool agreement = false;  // all non-marginal verdicts coincide
  std::vector<std::string> notes;
};

/// Duhamel-form inequality <T(t)x, v'> <= <S(t)x, v'> + int <S_Y(t-s)B T_Z(s)x, v'>.
/// The integral uses the block exponential when both factors are matrix-backed,
/// otherwise composite quadrature in s; a quadrature error estimate above
/// tol/10 raises PrecisionError instead of reporting a verdict.
StatementReport check_statement_a(const Scenario& scn, const std::vector<double>& t_grid,
                                  double tol);

/// Resolvent-form inequality at each lambda in the grid; every lambda must
/// exceed max(omega_S, omega_T) + 0.5.
StatementReport check_statement_b(const Scenario& scn,
                                  const std::vector<double>& lambda_grid, double tol);

/// Generator-form inequality <A_T u, v'> <= <u, A_S' v'> + <Bu, v'> over cone
/// sample pairs; the adjoint acts through the weighted pairing. For full
/// orthants the samples contain all generator pairs, so the check is the
/// entrywise weighted matrix inequality A_T <= A_S + B.
StatementReport check_statement_c(const Scenario& scn, double tol);

/// Runs (a), (b), (c) after the scenario hypothesis battery; throws
/// HypothesisError if the battery fails.
EquivalenceVerdict check_equivalence(const Scenario& scn, const std::vector<double>& t_grid,
                                     const std::vector<double>& lambda_grid, double tol);

struct ExtraAssumptionReport {
  double min_slack = 0.0;
  double worst_s = 0.0;
  double worst_t = 0.0;
  int x_index = -1;
  int v_index = -1;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Marginal;

  bool holds() const { return min_slack >= -tolerance; }
};

/// Integrand domination  <S_Y(t-s)B T_Z(s)x, v'> <= M e^{omega t} <Bx, v'>
/// over (s, t) pairs with 0 <= s <= t.
ExtraAssumptionReport check_extra_assumption(const Scenario& scn, double bound_m,
                                             double bound_omega,
                                             const std::vector<std::pair<double, double>>& st_grid,
                                             double tol);

struct CorollaryReports {
  StatementReport a, b, c;
};

/// Constant-tracking variants: (a) with C1 t e^{omega t} <Bx,v'>, (b) with
/// C2/(lambda-omega)^2 <Bx,v'>, (c) with C3 <Bu,v'>. Verifies the integrand
/// domination for (M, omega) first and throws HypothesisError if it fails.
CorollaryReports check_corollary(const Scenario& scn, double bound_m, double bound_omega,
                                 double c1, double c2, double c3,
                                 const std::vector<double>& t_grid,
                                 const std::vector<double>& lambda_grid, double tol);

struct ConeInvarianceReport {
  char which = 'K';
  bool semigroup_family_pass = false;
  double semigroup_worst_distance = 0.0;
  bool resolvent_family_pass = false;
  double resolvent_worst_distance = 0.0;
  bool pass = false;
};

/// K: images of cone samples under T(t) and lambda*(lambda - A_T)^{-1} stay in
/// K. L: the same under the weighted-adjoint maps of S and lambda * R_S(lambda)'.
/// Both families are reported so their equivalence is observable.
ConeInvarianceReport check_cone_invariance(const Scenario& scn, char which,
                                           const std::vector<double>& t_grid,
                                           const std::vector<double>& lambda_grid,
                                           double tol);

struct StrongInequalityReport {
  double min_slack = 0.0;
  double worst_t = 0.0;
  int x_index = -1;
  int coordinate = -1;
  double tolerance = 0.0;
  bool pass = false;
};

/// Entrywise vector inequality T(t)u <= S(t)u + int S_Y(t-s)B T_Z(s)u ds for
/// cone samples u. Requires L to be the full orthant (it must detect
/// positivity coordinatewise), else InapplicabilityError.
StrongInequalityReport check_strong_inequality(const Scenario& scn,
                                               const std::vector<double>& t_grid, double tol);

struct VocIdentityReport {
  double max_residual = 0.0;
  double worst_t = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Exact variation-of-constants identity of the delay system:
/// |T(t) - S(t) - int_0^t S(t-s) B_tilde T(s) ds| <= tol for all grid t.
VocIdentityReport check_voc_identity(const Scenario& scn, const std::vector<double>& t_grid,
                                     double tol);

}  // namespace vocheck
