#include "vocheck/verifier.hpp"

#include <cmath>
#include <limits>
#include <tuple>

namespace vocheck {

std::string to_string(Statement s) {
  switch (s) {
    case Statement::A: return "a";
    case Statement::B: return "b";
    case Statement::C: return "c";
    case Statement::CorollaryA: return "corollary-a";
    case Statement::CorollaryB: return "corollary-b";
    case Statement::CorollaryC: return "corollary-c";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Marginal: return "marginal";
  }
  return "?";
}

Verdict verdict_for(double min_slack, double tol) {
  if (std::abs(min_slack) < 10.0 * tol) return Verdict::Marginal;
  return min_slack > 0.0 ? Verdict::Pass : Verdict::Fail;
}

namespace {

Matrix sample_matrix(const std::vector<Element>& samples) {
  const Eigen::Index n = samples.front().values.size();
  Matrix m(n, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) m.col(j) = samples[j].values;
  return m;
}

// Accumulates slack evaluations for one bilinear kernel per grid point and
// keeps the lexicographic argmin (slack, x index, v index, grid index), so the
// reduction is deterministic however the grid is traversed.
class SlackScan {
 public:
  SlackScan(const Scenario& scn, Statement statement, double tol) : tol_(tol) {
    report_.statement = statement;
    report_.tolerance = tol;
    u_ = sample_matrix(scn.k_samples);
    v_ = sample_matrix(scn.l_samples);
    weighted_v_ = scn.X->weights.asDiagonal() * v_;
  }

  void add_grid_point(int grid_index, double grid_value, const Matrix& kernel) {
    const Matrix slack = weighted_v_.transpose() * (kernel * u_);  // (v, x)
    for (Eigen::Index x = 0; x < u_.cols(); ++x)
      for (Eigen::Index v = 0; v < v_.cols(); ++v) {
        const double value = slack(v, x);
        report_.rows.push_back(
            {grid_index, grid_value, static_cast<int>(x), static_cast<int>(v), value});
        consider(value, static_cast<int>(x), static_cast<int>(v), grid_index, grid_value);
      }
  }

  StatementReport finish() {
    report_.samples_evaluated = report_.rows.size();
    report_.min_slack = best_;
    report_.verdict = verdict_for(best_, tol_);
    return std::move(report_);
  }

 private:
  void consider(double value, int x, int v, int grid_index, double grid_value) {
    const bool better =
        value < best_ ||
        (value == best_ && std::tuple(x, v, grid_index) <
                               std::tuple(report_.argmin.x_index, report_.argmin.v_index,
                                          report_.argmin.grid_index));
    if (!better) return;
    best_ = value;
    report_.argmin = {x, v, grid_index, grid_value};
  }

  double tol_;
  double best_ = std::numeric_limits<double>::infinity();
  Matrix u_, v_, weighted_v_;
  StatementReport report_;
};

bool matrix_backed(const SemigroupHandle& h) {
  return h.backend != Backend::GaussKernel && h.generator.has_value();
}

// Duhamel term of statement (a): exact block exponential when both factors
// are matrix-backed, composite quadrature in s otherwise. The quadrature path
// refuses to report when its own error estimate exceeds tol/10.
Matrix duhamel_term(const Scenario& scn, double t, double tol) {
  const Eigen::Index n = scn.B.rows();
  if (t == 0.0) return Matrix::Zero(n, n);
  if (matrix_backed(scn.S_Y) && matrix_backed(scn.T_Z))
    return duhamel_block(*scn.S_Y.generator, scn.B, *scn.T_Z.generator, t);

  // Substituted form int_0^sqrt(t) 2u S_Y(u^2) B T_Z(t - u^2) du: the Jacobian
  // cancels the (t-s)^{-1/2} growth of the discretized kernel near s = t.
  const auto quadrature = [&](int panels) {
    const int points = 4;
    const GaussLegendre rule = gauss_legendre(points);
    const double h = std::sqrt(t) / panels;
    Matrix acc = Matrix::Zero(n, n);
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h;
      for (int k = 0; k < points; ++k) {
        const double u = mid + 0.5 * h * rule.nodes[k];
        acc += (0.5 * h * rule.weights[k] * 2.0 * u) *
               (scn.S_Y.evaluate(u * u) * (scn.B * scn.T_Z.evaluate(t - u * u)));
      }
    }
    return acc;
  };
  const Matrix coarse = quadrature(64);
  const Matrix fine = quadrature(128);
  const double estimate = max_abs(fine - coarse) + 1e-14 * (1.0 + max_abs(fine));
  if (estimate > tol / 10.0)
    throw PrecisionError("duhamel quadrature estimate " + std::to_string(estimate) +
                         " exceeds tol/10 at t = " + std::to_string(t));
  return fine;
}

Matrix resolvent_of(const SemigroupHandle& h, double lambda) {
  if (matrix_backed(h)) return solve_resolvent(*h.generator, lambda);
  return weak_resolvent(h, lambda).op;
}

void require_generator(const SemigroupHandle& h, const std::string& name) {
  if (!h.generator)
    throw InapplicabilityError("verifier: " + name + " has no generator matrix");
}

}  // namespace

StatementReport check_statement_a(const Scenario& scn, const std::vector<double>& t_grid,
                                  double tol) {
  if (t_grid.empty()) throw DomainError("check_statement_a: empty grid");
  SlackScan scan(scn, Statement::A, tol);
  for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
    const double t = t_grid[gi];
    if (t < 0.0) throw DomainError("check_statement_a: t must be >= 0");
    const Matrix kernel = scn.S.evaluate(t) + duhamel_term(scn, t, tol) - scn.T.evaluate(t);
    scan.add_grid_point(static_cast<int>(gi), t, kernel);
  }
  return scan.finish();
}

StatementReport check_statement_b(const Scenario& scn, const std::vector<double>& lambda_grid,
                                  double tol) {
  if (lambda_grid.empty()) throw DomainError("check_statement_b: empty grid");
  const double omega = std::max(scn.S.bound_omega, scn.T.bound_omega);
  SlackScan scan(scn, Statement::B, tol);
  for (std::size_t gi = 0; gi < lambda_grid.size(); ++gi) {
    const double lambda = lambda_grid[gi];
    if (!(lambda > omega + 0.5 - 1e-12))
      throw DivergenceError("check_statement_b: lambda = " + std::to_string(lambda) +
                            " too close to the growth bound " + std::to_string(omega));
    const Matrix r_t = resolvent_of(scn.T, lambda);
    const Matrix r_s = resolvent_of(scn.S, lambda);
    const Matrix r_sy = resolvent_of(scn.S_Y, lambda);
    const Matrix r_tz = resolvent_of(scn.T_Z, lambda);
    const Matrix kernel = r_s + r_sy * (scn.B * r_tz) - r_t;
    scan.add_grid_point(static_cast<int>(gi), lambda, kernel);
  }
  return scan.finish();
}

StatementReport check_statement_c(const Scenario& scn, double tol) {
  require_generator(scn.S, "S");
  require_generator(scn.T, "T");
  SlackScan scan(scn, Statement::C, tol);
  // <u, A_S' v'> is evaluated through the pairing as <A_S u, v'>.
  scan.add_grid_point(-1, 0.0, *scn.S.generator + scn.B - *scn.T.generator);
  return scan.finish();
}

EquivalenceVerdict check_equivalence(const Scenario& scn, const std::vector<double>& t_grid,
                                     const std::vector<double>& lambda_grid, double tol) {
  const HypothesisReport battery = hypothesis_report(scn);
  if (!battery.pass) {
    std::string failing;
    for (const auto& item : battery.items)
      if (!item.pass) failing += (failing.empty() ? "" : ", ") + item.name;
    throw HypothesisError("check_equivalence: hypothesis battery failed: " + failing);
  }

  EquivalenceVerdict verdict;
  verdict.a = check_statement_a(scn, t_grid, tol);
  verdict.b = check_statement_b(scn, lambda_grid, tol);
  verdict.c = check_statement_c(scn, tol);

  std::vector<const StatementReport*> reports{&verdict.a, &verdict.b, &verdict.c};
  bool any_pass = false, any_fail = false;
  for (const StatementReport* r : reports) {
    if (r->verdict == Verdict::Pass) any_pass = true;
    if (r->verdict == Verdict::Fail) any_fail = true;
    verdict.notes.push_back("statement " + to_string(r->statement) + ": " +
                            to_string(r->verdict) + ", min slack " +
                            std::to_string(r->min_slack));
  }
  verdict.agreement = !(any_pass && any_fail);
  if (!verdict.agreement) {
    std::string note = "disagreement between non-marginal verdicts:";
    for (const StatementReport* r : reports)
      if (r->verdict != Verdict::Marginal)
        note += " (" + to_string(r->statement) + "=" + to_string(r->verdict) + " at x=" +
                std::to_string(r->argmin.x_index) + ", v'=" +
                std::to_string(r->argmin.v_index) + ")";
    verdict.notes.push_back(note);
  }
  return verdict;
}

ExtraAssumptionReport check_extra_assumption(const Scenario& scn, double bound_m,
                                             double bound_omega,
                                             const std::vector<std::pair<double, double>>& st_grid,
                                             double tol) {
  if (st_grid.empty()) throw DomainError("check_extra_assumption: empty grid");
  const Matrix u = sample_matrix(scn.k_samples);
  const Matrix wv = scn.X->weights.asDiagonal() * sample_matrix(scn.l_samples);

  ExtraAssumptionReport report;
  report.tolerance = tol;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& [s, t] : st_grid) {
    if (!(0.0 <= s && s <= t))
      throw DomainError("check_extra_assumption: pairs must satisfy 0 <= s <= t");
    const Matrix kernel = bound_m * std::exp(bound_omega * t) * scn.B -
                          scn.S_Y.evaluate(t - s) * (scn.B * scn.T_Z.evaluate(s));
    const Matrix slack = wv.transpose() * (kernel * u);
    for (Eigen::Index x = 0; x < u.cols(); ++x)
      for (Eigen::Index v = 0; v < wv.cols(); ++v)
        if (slack(v, x) < report.min_slack) {
          report.min_slack = slack(v, x);
          report.worst_s = s;
          report.worst_t = t;
          report.x_index = static_cast<int>(x);
          report.v_index = static_cast<int>(v);
        }
  }
  report.verdict = verdict_for(report.min_slack, tol);
  return report;
}

CorollaryReports check_corollary(const Scenario& scn, double bound_m, double bound_omega,
                                 double c1, double c2, double c3,
                                 const std::vector<double>& t_grid,
                                 const std::vector<double>& lambda_grid, double tol) {
  std::vector<std::pair<double, double>> st_grid{{0.0, 0.0}};
  for (double t : t_grid)
    if (t > 0.0) {
      st_grid.emplace_back(0.0, t);
      st_grid.emplace_back(0.5 * t, t);
      st_grid.emplace_back(t, t);
    }
  const ExtraAssumptionReport extra = check_extra_assumption(scn, bound_m, bound_omega,
                                                             st_grid, tol);
  if (!extra.holds())
    throw HypothesisError("check_corollary: integrand domination fails, min slack " +
                          std::to_string(extra.min_slack));

  CorollaryReports out;
  {
    SlackScan scan(scn, Statement::CorollaryA, tol);
    for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
      const double t = t_grid[gi];
      const Matrix kernel = scn.S.evaluate(t) +
                            (c1 * t * std::exp(bound_omega * t)) * scn.B - scn.T.evaluate(t);
      scan.add_grid_point(static_cast<int>(gi), t, kernel);
    }
    out.a = scan.finish();
  }
  {
    SlackScan scan(scn, Statement::CorollaryB, tol);
    for (std::size_t gi = 0; gi < lambda_grid.size(); ++gi) {
      const double lambda = lambda_grid[gi];
      if (!(lambda > bound_omega))
        throw DivergenceError("check_corollary: lambda must exceed omega");
      const Matrix kernel = resolvent_of(scn.S, lambda) +
                            (c2 / ((lambda - bound_omega) * (lambda - bound_omega))) * scn.B -
                            resolvent_of(scn.T, lambda);
      scan.add_grid_point(static_cast<int>(gi), lambda, kernel);
    }
    out.b = scan.finish();
  }
  {
    require_generator(scn.S, "S");
    require_generator(scn.T, "T");
    SlackScan scan(scn, Statement::CorollaryC, tol);
    scan.add_grid_point(-1, 0.0, *scn.S.generator + c3 * scn.B - *scn.T.generator);
    out.c = scan.finish();
  }
  return out;
}

ConeInvarianceReport check_cone_invariance(const Scenario& scn, char which,
                                           const std::vector<double>& t_grid,
                                           const std::vector<double>& lambda_grid, double tol) {
  if (which != 'K' && which != 'L')
    throw DomainError("check_cone_invariance: which must be 'K' or 'L'");
  const bool for_k = which == 'K';
  const Cone& cone = for_k ? scn.K : scn.L;
  const std::vector<Element>& samples = for_k ? scn.k_samples : scn.l_samples;

  ConeInvarianceReport report;
  report.which = which;
  const auto run_family = [&](const std::vector<Matrix>& maps, double* worst) {
    bool ok = true;
    for (const Matrix& map : maps)
      for (const Element& s : samples) {
        const Vector image = map * s.values;
        const double rel = cone_distance(cone, image) / (1.0 + image.norm());
        *worst = std::max(*worst, rel);
        ok = ok && rel <= tol;
      }
    return ok;
  };

  std::vector<Matrix> semigroup_maps, resolvent_maps;
  for (double t : t_grid) {
    const Matrix m = for_k ? scn.T.evaluate(t) : scn.S.evaluate(t);
    semigroup_maps.push_back(for_k ? m : dual_map(m, *scn.E));
  }
  for (double lambda : lambda_grid) {
    if (for_k) {
      require_generator(scn.T, "T");
      resolvent_maps.push_back(lambda * solve_resolvent(*scn.T.generator, lambda));
    } else {
      resolvent_maps.push_back(lambda * dual_map(resolvent_of(scn.S, lambda), *scn.E));
    }
  }
  report.semigroup_family_pass = run_family(semigroup_maps, &report.semigroup_worst_distance);
  report.resolvent_family_pass = run_family(resolvent_maps, &report.resolvent_worst_distance);
  report.pass = report.semigroup_family_pass && report.resolvent_family_pass;
  return report;
}

StrongInequalityReport check_strong_inequality(const Scenario& scn,
                                               const std::vector<double>& t_grid, double tol) {
  if (!scn.L.is_full_orthant())
    throw InapplicabilityError(
        "check_strong_inequality: L must be the full orthant to detect positivity");
  StrongInequalityReport report;
  report.tolerance = tol;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    const Matrix kernel = scn.S.evaluate(t) + duhamel_term(scn, t, tol) - scn.T.evaluate(t);
    for (std::size_t xi = 0; xi < scn.k_samples.size(); ++xi) {
      const Vector r = kernel * scn.k_samples[xi].values;
      for (Eigen::Index i = 0; i < r.size(); ++i)
        if (r(i) < report.min_slack) {
          report.min_slack = r(i);
          report.worst_t = t;
          report.x_index = static_cast<int>(xi);
          report.coordinate = static_cast<int>(i);
        }
    }
  }
  report.pass = report.min_slack >= -tol;
  return report;
}

VocIdentityReport check_voc_identity(const Scenario& scn, const std::vector<double>& t_grid,
                                     double tol) {
  if (!scn.B_tilde)
    throw InapplicabilityError("check_voc_identity: scenario carries no history block");
  require_generator(scn.S, "S");
  require_generator(scn.T, "T");
  VocIdentityReport report;
  report.tol = tol;
  for (double t : t_grid) {
    const Matrix residual = scn.T.evaluate(t) - scn.S.evaluate(t) -
                            duhamel_block(*scn.S.generator, *scn.B_tilde, *scn.T.generator, t);
    const double r = max_abs(residual);
    if (r > report.max_residual) {
      report.max_residual = r;
      report.worst_t = t;
    }
  }
  report.pass = report.max_residual <= tol;
  return report;
}

}  // namespace vocheck
