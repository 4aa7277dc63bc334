#include "vocheck/scenarios.hpp"

#include <cmath>

#include "vocheck/rng.hpp"

namespace vocheck {

namespace {

std::vector<double> default_fit_grid() { return {0.0, 0.25, 0.5, 1.0, 2.0}; }

/// Refit the grid maximum with a pinned slope; keeps lambda grids and
/// truncation points uniform across randomized seeds.
void pin_bounds(SemigroupHandle& h, const std::vector<double>& grid, double omega) {
  double ln_m = 0.0;
  for (double t : grid) {
    const double norm = operator_norm(h.evaluate(t), *h.space);
    ln_m = std::max(ln_m, std::log(std::max(norm, 1e-300)) - omega * t);
  }
  h.bound_omega = omega;
  h.bound_m = std::max(1.0, 1.05 * std::exp(ln_m));
}

Scenario assemble_matrix_scenario(const std::string& label, const Matrix& a_s,
                                  const Matrix& a_t, const Matrix& b, const Vector& weights,
                                  double p_x, double p_y, double p_z, double p_e,
                                  std::uint64_t sample_seed, Backend backend,
                                  const std::vector<double>& fit_grid) {
  require_square(a_s, "scenario: A_S");
  require_square(a_t, "scenario: A_T");
  require_finite(a_s, "scenario: A_S");
  require_finite(a_t, "scenario: A_T");
  require_finite(b, "scenario: B");
  const Eigen::Index n = a_s.rows();
  if (a_t.rows() != n || b.rows() != n || b.cols() != n || weights.size() != n)
    throw DimensionError("scenario: A_S, A_T, B and weights must share one dimension");

  Scenario scn;
  scn.label = label;
  scn.X = make_grid_space(weights, p_x, "X");
  scn.Y = make_grid_space(weights, p_y, "Y");
  scn.Z = make_grid_space(weights, p_z, "Z");
  scn.E = make_grid_space(weights, p_e, "E");

  const auto make = backend == Backend::DelayBlock ? make_delay_semigroup : make_matrix_semigroup;
  scn.S = make(a_s, scn.X, true);
  scn.S_Y = make(a_s, scn.Y, true);
  scn.T = make(a_t, scn.X, true);
  scn.T_Z = make(a_t, scn.Z, true);
  scn.B = b;

  for (SemigroupHandle* h : {&scn.S, &scn.S_Y, &scn.T, &scn.T_Z}) fit_bounds(*h, fit_grid);
  scn.bound_m = std::max({scn.S.bound_m, scn.S_Y.bound_m, scn.T.bound_m, scn.T_Z.bound_m});
  scn.bound_omega = std::max({scn.S.bound_omega, scn.S_Y.bound_omega, scn.T.bound_omega,
                              scn.T_Z.bound_omega});

  scn.K = make_orthant(scn.X);
  scn.L = make_orthant(scn.E);
  const int n_samples = static_cast<int>(n) + 4;
  scn.k_samples = cone_samples(scn.K, n_samples, 2 * sample_seed + 1);
  scn.l_samples = cone_samples(scn.L, n_samples, 2 * sample_seed + 2);
  return scn;
}

}  // namespace

Scenario scenario_from_matrices(const std::string& label, const Matrix& a_s, const Matrix& a_t,
                                const Matrix& b, const Vector& weights, double p_x, double p_y,
                                double p_z, double p_e, std::uint64_t sample_seed) {
  return assemble_matrix_scenario(label, a_s, a_t, b, weights, p_x, p_y, p_z, p_e, sample_seed,
                                  Backend::MatrixExp, default_fit_grid());
}

Scenario scenario_metzler_random(int n, std::uint64_t seed, double gap) {
  if (n < 2 || n > 8) throw DomainError("scenario_metzler_random: n must be in [2, 8]");
  if (gap < 0.0) throw DomainError("scenario_metzler_random: gap must be >= 0");
  Rng rng(seed);

  Vector weights(n);
  for (int i = 0; i < n; ++i) weights(i) = rng.uniform(0.5, 1.0);

  Matrix a_s = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) a_s(i, j) = rng.uniform01();

  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = rng.uniform(0.0, 0.5);

  // Diagonal shift with headroom for the perturbed row sums, so the growth
  // bound of A_T stays <= -gap in both branches without touching its diagonal.
  const double headroom = b.rowwise().sum().maxCoeff() + 0.55;
  for (int i = 0; i < n; ++i) a_s(i, i) = -a_s.row(i).sum() - gap - headroom;

  const bool satisfy_c = rng.coin();
  Matrix a_t;
  if (satisfy_c) {
    Matrix fraction(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) fraction(i, j) = rng.uniform01();
    a_t = a_s + fraction.cwiseProduct(b);
  } else {
    // A_T = A_S + B plus a single off-diagonal violation of margin >= 0.1;
    // then the slack kernel S + Duhamel - T is entrywise <= 0 for every t.
    const int row = rng.uniform_int(0, n - 1);
    int col = rng.uniform_int(0, n - 2);
    if (col >= row) ++col;
    const double margin = 0.1 + 0.4 * rng.uniform01();
    a_t = a_s + b;
    a_t(row, col) += margin;
  }

  const std::string label = "metzler-random[n=" + std::to_string(n) +
                            ",seed=" + std::to_string(seed) + ",gap=" + std::to_string(gap) +
                            (satisfy_c ? ",c=true]" : ",c=false]");
  Scenario scn = assemble_matrix_scenario(label, a_s, a_t, b, weights, 2.0, 2.0, 2.0, 2.0, seed,
                                          Backend::MatrixExp, default_fit_grid());
  for (SemigroupHandle* h : {&scn.S, &scn.S_Y, &scn.T, &scn.T_Z})
    pin_bounds(*h, default_fit_grid(), -gap);
  scn.bound_m = std::max({scn.S.bound_m, scn.S_Y.bound_m, scn.T.bound_m, scn.T_Z.bound_m});
  scn.bound_omega = -gap;
  scn.constructed_true = satisfy_c;
  return scn;
}

Scenario scenario_heat_drift(int d, double extent, int nodes_per_axis, const Vector& b,
                             double t_ref) {
  Lattice lat = make_lattice(d, extent, nodes_per_axis);
  if (lat.size() < 16) throw DomainError("scenario_heat_drift: need at least 16 nodes");
  if (!(t_ref > 0.0)) throw DomainError("scenario_heat_drift: t_ref must be > 0");
  if (b.size() != lat.size()) throw DimensionError("scenario_heat_drift: b size mismatch");
  if (!b.allFinite() || (b.array() < 0.0).any())
    throw DomainError("scenario_heat_drift: drift coefficients must be >= 0");

  const Vector weights = Vector::Constant(lat.size(), std::pow(lat.spacing, lat.dim));

  Scenario scn;
  scn.label = "heat-drift[d=" + std::to_string(d) + ",nodes=" + std::to_string(lat.size()) + "]";
  scn.X = make_grid_space(weights, 2.0, "X");
  scn.Y = make_grid_space(weights, p_infinity, "Y");
  scn.Z = make_grid_space(weights, p_infinity, "Z");
  scn.E = make_grid_space(weights, 1.0, "E");

  scn.S = make_gauss_semigroup(lat, scn.X);
  scn.S_Y = make_gauss_semigroup(lat, scn.Y);

  Matrix a_t = discrete_laplacian(lat);
  for (int axis = 0; axis < d; ++axis) a_t += upwind_advection(lat, axis, b);
  scn.T = make_matrix_semigroup(a_t, scn.X);
  scn.T_Z = make_matrix_semigroup(a_t, scn.Z);

  const double b_max = b.maxCoeff();
  Matrix fwd = Matrix::Zero(lat.size(), lat.size());
  for (int axis = 0; axis < d; ++axis) fwd += forward_difference(lat, axis);
  scn.B = b_max * fwd;

  const std::vector<double> fit_grid{0.0, 0.25 * t_ref, 0.5 * t_ref, t_ref};
  for (SemigroupHandle* h : {&scn.S, &scn.S_Y, &scn.T, &scn.T_Z}) fit_bounds(*h, fit_grid);
  scn.bound_m = std::max({scn.S.bound_m, scn.S_Y.bound_m, scn.T.bound_m, scn.T_Z.bound_m});
  scn.bound_omega = std::max({scn.S.bound_omega, scn.S_Y.bound_omega, scn.T.bound_omega,
                              scn.T_Z.bound_omega});

  scn.K = make_orthant(scn.X);
  scn.L = make_orthant(scn.E);
  scn.k_samples = cone_samples(scn.K, lat.size() + 4, 1);
  scn.l_samples = cone_samples(scn.L, lat.size() + 4, 2);

  scn.default_tol = 1e-4;  // truncation-limited
  scn.lattice = lat;
  scn.interior = interior_mask(lat, 4.0 * std::sqrt(t_ref));
  scn.t_ref = t_ref;
  return scn;
}

Scenario scenario_heat_drift(int d, double extent, int nodes_per_axis, double b_const,
                             double t_ref) {
  const int n = d == 1 ? nodes_per_axis : nodes_per_axis * nodes_per_axis;
  return scenario_heat_drift(d, extent, nodes_per_axis, Vector::Constant(n, b_const), t_ref);
}

Scenario scenario_rank_one_linfty(const Vector& weights, const Matrix& a_s, const Matrix& a_t) {
  if (!is_metzler(a_s) || !is_metzler(a_t))
    throw PositivityError("scenario_rank_one_linfty: generators must be Metzler");
  const Eigen::Index n = a_s.rows();
  // B u = (integral of u) * 1: rank-one outer product of ones with the weights.
  const Matrix b = Vector::Ones(n) * weights.transpose();
  return assemble_matrix_scenario("rank-one-linfty[n=" + std::to_string(n) + "]", a_s, a_t, b,
                                  weights, 2.0, p_infinity, 1.0, 1.0, 0, Backend::MatrixExp,
                                  default_fit_grid());
}

Scenario scenario_rank_one_lp(double p, double q, const Vector& f, const Vector& gprime,
                              const Matrix& a_s, const Matrix& a_t, const Vector& weights) {
  if (!(p >= 1.0) || p == p_infinity || !(q >= 1.0) || q == p_infinity)
    throw DomainError("scenario_rank_one_lp: requires 1 <= p, q < infinity");
  if ((f.array() < 0.0).any() || (gprime.array() < 0.0).any())
    throw DomainError("scenario_rank_one_lp: f and g' must be >= 0");
  if (!is_metzler(a_s) || !is_metzler(a_t))
    throw PositivityError("scenario_rank_one_lp: generators must be Metzler");
  const Eigen::Index n = a_s.rows();
  if (f.size() != n || gprime.size() != n)
    throw DimensionError("scenario_rank_one_lp: f/g' dimension mismatch");
  // B u = <u, g'>_w * f.
  const Matrix b = f * (weights.cwiseProduct(gprime)).transpose();
  return assemble_matrix_scenario(
      "rank-one-lp[n=" + std::to_string(n) + ",p=" + std::to_string(p) +
          ",q=" + std::to_string(q) + "]",
      a_s, a_t, b, weights, 2.0, p, q, conjugate_exponent(p), 0, Backend::MatrixExp,
      default_fit_grid());
}

Scenario scenario_delay(const Matrix& a0, const Vector& eta_density, const Vector& rho,
                        double p, double q, int m) {
  require_square(a0, "scenario_delay: A0");
  if (m < 4) throw DomainError("scenario_delay: m must be >= 4");
  if (!(p >= 1.0) || p == p_infinity || !(q >= 1.0) || q == p_infinity)
    throw DomainError("scenario_delay: requires 1 <= p, q < infinity");
  if (eta_density.size() != m || rho.size() != m)
    throw DimensionError("scenario_delay: densities must have one value per history cell");
  if ((eta_density.array() < 0.0).any())
    throw DomainError("scenario_delay: eta density must be >= 0");
  for (int k = 0; k < m; ++k)
    if (eta_density(k) > rho(k))
      throw DominationError("scenario_delay: eta exceeds rho at history cell " +
                            std::to_string(k));

  const Eigen::Index n = a0.rows();
  const double cell = 1.0 / m;

  // Scalar-diagonal history functionals: cell quadrature weight times the
  // density value, acting as a multiple of the identity on the state block.
  const auto history_weights = [&](const Vector& density) {
    Matrix phi = Matrix::Zero(n, n * m);
    for (int k = 0; k < m; ++k)
      phi.block(0, k * n, n, n) = cell * density(k) * Matrix::Identity(n, n);
    return phi;
  };

  const Matrix a_t = build_delay_generator(a0, history_weights(eta_density), m);
  const Matrix a_s = build_delay_generator(a0, Matrix::Zero(n, n * m), m);

  const Eigen::Index total = n + n * m;
  Matrix b = Matrix::Zero(total, total);
  b.topRightCorner(n, n * m) = history_weights(rho);
  Matrix b_tilde = Matrix::Zero(total, total);
  b_tilde.topRightCorner(n, n * m) = history_weights(eta_density);

  Vector weights(total);
  weights.head(n).setOnes();
  weights.tail(n * m).setConstant(cell);

  Scenario scn = assemble_matrix_scenario(
      "delay[n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",p=" + std::to_string(p) +
          ",q=" + std::to_string(q) + "]",
      a_s, a_t, b, weights, p, p, q, conjugate_exponent(p), 0, Backend::DelayBlock,
      {0.0, 0.25, 0.5, 1.0});
  scn.B_tilde = b_tilde;
  return scn;
}

namespace {

bool images_in_cone(const Cone& cone, const Matrix& map, const std::vector<Element>& samples,
                    double* worst) {
  bool ok = true;
  for (const Element& s : samples) {
    const Vector image = map * s.values;
    const double dist = cone_distance(cone, image);
    const double rel = dist / (1.0 + image.norm());
    *worst = std::max(*worst, rel);
    ok = ok && rel <= cone.tol;
  }
  return ok;
}

}  // namespace

HypothesisReport hypothesis_report(const Scenario& scn) {
  HypothesisReport report;
  const auto add = [&](const std::string& name, bool pass, double value) {
    report.items.push_back({name, pass, value});
  };
  const std::vector<bool>* interior = scn.interior ? &*scn.interior : nullptr;
  const bool kernel_limited = scn.S.backend == Backend::GaussKernel;

  // Battery grid; kernel scenarios keep t + s <= t_ref so the
  // interior-restricted checks stay in their documented regime.
  std::vector<double> t_grid{0.25, 0.5, 1.0};
  if (kernel_limited && scn.t_ref) t_grid = {0.25 * *scn.t_ref, 0.5 * *scn.t_ref};

  const std::vector<std::pair<std::string, const SemigroupHandle*>> handles{
      {"S", &scn.S}, {"T", &scn.T}};
  for (const auto& [name, handle] : handles) {
    const Matrix at0 = handle->evaluate(0.0);
    const double res0 = max_abs(at0 - Matrix::Identity(at0.rows(), at0.cols()));
    add("evaluate0-identity-" + name, res0 <= 1e-12, res0);
  }

  const double law_tol_s = scn.S.backend == Backend::GaussKernel ? 1e-4
                           : scn.S.backend == Backend::DelayBlock ? 1e-8
                                                                  : 1e-10;
  const double law_tol_t = scn.T.backend == Backend::DelayBlock ? 1e-8 : 1e-10;
  const LawReport law_s = check_semigroup_law(scn.S, t_grid, law_tol_s,
                                              kernel_limited ? interior : nullptr);
  add("semigroup-law-S", law_s.pass, law_s.max_residual);
  const LawReport law_t = check_semigroup_law(scn.T, t_grid, law_tol_t, nullptr);
  add("semigroup-law-T", law_t.pass, law_t.max_residual);

  const ConsistencyReport cons_s =
      check_consistency(scn.S, scn.S_Y, scn.k_samples, t_grid, scn.default_tol);
  add("consistency-S-SY", cons_s.pass, cons_s.max_residual);
  const ConsistencyReport cons_t =
      check_consistency(scn.T, scn.T_Z, scn.k_samples, t_grid, scn.default_tol);
  add("consistency-T-TZ", cons_t.pass, cons_t.max_residual);

  bool samples_ok = true;
  for (const Element& s : scn.k_samples) samples_ok = samples_ok && cone_contains(scn.K, s);
  for (const Element& s : scn.l_samples) samples_ok = samples_ok && cone_contains(scn.L, s);
  add("cone-samples-members", samples_ok, 0.0);

  const double lambda_lo = scn.bound_omega + 1.0;
  const double lambda_hi = scn.bound_omega + 5.0;

  double worst = 0.0;
  bool ok = true;
  for (double t : t_grid) ok = images_in_cone(scn.K, scn.T.evaluate(t), scn.k_samples, &worst) && ok;
  add("K-invariant-under-T", ok, worst);

  worst = 0.0;
  ok = true;
  for (double lambda : {lambda_lo, lambda_hi})
    ok = images_in_cone(scn.K, lambda * solve_resolvent(*scn.T.generator, lambda),
                        scn.k_samples, &worst) && ok;
  add("K-invariant-under-resolvent", ok, worst);

  worst = 0.0;
  ok = true;
  for (double t : t_grid)
    ok = images_in_cone(scn.L, dual_map(scn.S.evaluate(t), *scn.E), scn.l_samples, &worst) && ok;
  add("L-invariant-under-S-dual", ok, worst);

  worst = 0.0;
  ok = true;
  for (double lambda : {lambda_lo, lambda_hi}) {
    const Matrix r = scn.S.backend == Backend::GaussKernel
                         ? weak_resolvent(scn.S, lambda).op
                         : solve_resolvent(*scn.S.generator, lambda);
    ok = images_in_cone(scn.L, lambda * dual_map(r, *scn.E), scn.l_samples, &worst) && ok;
  }
  add("L-invariant-under-resolvent-dual", ok, worst);

  const std::vector<std::pair<std::string, const SemigroupHandle*>> bounded_handles{
      {"S", &scn.S}, {"T", &scn.T}, {"TZ", &scn.T_Z}};
  for (const auto& [name, handle] : bounded_handles) {
    const SemigroupHandle& h = *handle;
    double worst_excess = 0.0;
    bool bounded = true;
    for (double t : t_grid) {
      const double norm = operator_norm(h.evaluate(t), *h.space);
      const double bound = h.bound_m * std::exp(h.bound_omega * t) * (1.0 + 1e-6);
      worst_excess = std::max(worst_excess, norm - bound);
      bounded = bounded && norm <= bound;
    }
    add("exponential-bound-" + name, bounded, worst_excess);
  }

  if (scn.B_tilde) {
    const double excess = (*scn.B_tilde - scn.B).maxCoeff();
    add("domination-Btilde-le-B", excess <= 1e-15, excess);
  }

  report.pass = true;
  for (const auto& item : report.items) report.pass = report.pass && item.pass;
  return report;
}

}  // namespace vocheck
