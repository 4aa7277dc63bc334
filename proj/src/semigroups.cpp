#include "vocheck/semigroups.hpp"

#include <cmath>

namespace vocheck {

Lattice make_lattice(int dim, double extent, int per_axis) {
  if (dim != 1 && dim != 2) throw DomainError("lattice: dim must be 1 or 2");
  if (per_axis < 2) throw DomainError("lattice: need at least 2 nodes per axis");
  if (!(extent > 0.0)) throw DomainError("lattice: extent must be > 0");
  Lattice lat;
  lat.dim = dim;
  lat.extent = extent;
  lat.per_axis = per_axis;
  lat.spacing = 2.0 * extent / (per_axis - 1);
  const int n = dim == 1 ? per_axis : per_axis * per_axis;
  lat.coords.resize(n, dim);
  if (dim == 1) {
    for (int i = 0; i < per_axis; ++i) lat.coords(i, 0) = -extent + i * lat.spacing;
  } else {
    int r = 0;
    for (int i = 0; i < per_axis; ++i)
      for (int j = 0; j < per_axis; ++j, ++r) {
        lat.coords(r, 0) = -extent + i * lat.spacing;
        lat.coords(r, 1) = -extent + j * lat.spacing;
      }
  }
  return lat;
}

std::vector<bool> interior_mask(const Lattice& lat, double margin) {
  std::vector<bool> mask(lat.size());
  for (int i = 0; i < lat.size(); ++i) {
    bool inside = true;
    for (int d = 0; d < lat.dim; ++d)
      inside = inside && (lat.extent - std::abs(lat.coords(i, d)) >= margin);
    mask[i] = inside;
  }
  return mask;
}

Matrix gauss_weierstrass_matrix(double t, const Lattice& lat) {
  if (t < 0.0) throw DomainError("gauss_weierstrass_matrix: t must be >= 0");
  const int n = lat.size();
  if (t == 0.0) return Matrix::Identity(n, n);
  const double weight = std::pow(lat.spacing, lat.dim);
  const double amp = std::pow(4.0 * M_PI * t, -0.5 * lat.dim);
  Matrix k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r2 = (lat.coords.row(i) - lat.coords.row(j)).squaredNorm();
      k(i, j) = weight * amp * std::exp(-r2 / (4.0 * t));
    }
  return k;
}

namespace {

// Index helpers for the 2-d row-major lattice layout.
inline int flat(const Lattice& lat, int i, int j) { return i * lat.per_axis + j; }

}  // namespace

Matrix discrete_laplacian(const Lattice& lat) {
  const int n = lat.size();
  const double h2 = lat.spacing * lat.spacing;
  Matrix a = Matrix::Zero(n, n);
  if (lat.dim == 1) {
    for (int i = 0; i < n; ++i) {
      a(i, i) = -2.0 / h2;
      if (i > 0) a(i, i - 1) = 1.0 / h2;
      if (i + 1 < n) a(i, i + 1) = 1.0 / h2;
    }
    return a;
  }
  const int m = lat.per_axis;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int r = flat(lat, i, j);
      a(r, r) = -4.0 / h2;
      if (i > 0) a(r, flat(lat, i - 1, j)) = 1.0 / h2;
      if (i + 1 < m) a(r, flat(lat, i + 1, j)) = 1.0 / h2;
      if (j > 0) a(r, flat(lat, i, j - 1)) = 1.0 / h2;
      if (j + 1 < m) a(r, flat(lat, i, j + 1)) = 1.0 / h2;
    }
  return a;
}

Matrix forward_difference(const Lattice& lat, int axis) {
  if (axis < 0 || axis >= lat.dim) throw DomainError("forward_difference: bad axis");
  const int n = lat.size();
  const double h = lat.spacing;
  Matrix d = Matrix::Zero(n, n);
  if (lat.dim == 1) {
    for (int i = 0; i < n; ++i) {
      d(i, i) = -1.0 / h;
      if (i + 1 < n) d(i, i + 1) = 1.0 / h;
    }
    return d;
  }
  const int m = lat.per_axis;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int r = flat(lat, i, j);
      d(r, r) = -1.0 / h;
      if (axis == 0 && i + 1 < m) d(r, flat(lat, i + 1, j)) = 1.0 / h;
      if (axis == 1 && j + 1 < m) d(r, flat(lat, i, j + 1)) = 1.0 / h;
    }
  return d;
}

Matrix upwind_advection(const Lattice& lat, int axis, const Vector& b) {
  if (axis < 0 || axis >= lat.dim) throw DomainError("upwind_advection: bad axis");
  if (b.size() != lat.size()) throw DimensionError("upwind_advection: b size mismatch");
  if ((b.array() < 0.0).any()) throw DomainError("upwind_advection: b must be >= 0");
  const int n = lat.size();
  const double h = lat.spacing;
  // -b d/dx with backward differences: off-diagonal entries stay nonnegative.
  Matrix a = Matrix::Zero(n, n);
  if (lat.dim == 1) {
    for (int i = 0; i < n; ++i) {
      a(i, i) = -b(i) / h;
      if (i > 0) a(i, i - 1) = b(i) / h;
    }
    return a;
  }
  const int m = lat.per_axis;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int r = flat(lat, i, j);
      a(r, r) = -b(r) / h;
      if (axis == 0 && i > 0) a(r, flat(lat, i - 1, j)) = b(r) / h;
      if (axis == 1 && j > 0) a(r, flat(lat, i, j - 1)) = b(r) / h;
    }
  return a;
}

Matrix build_delay_generator(const Matrix& a0, const Matrix& phi_weights, int m) {
  require_square(a0, "build_delay_generator: A0");
  const Eigen::Index n = a0.rows();
  if (m < 2) throw DomainError("build_delay_generator: m must be >= 2");
  if (phi_weights.rows() != n || phi_weights.cols() != n * m)
    throw DimensionError("build_delay_generator: history weights must be " +
                         std::to_string(n) + "x" + std::to_string(n * m));
  const Eigen::Index total = n + n * m;
  const double rate = static_cast<double>(m);  // 1 / cell width
  Matrix g = Matrix::Zero(total, total);
  g.topLeftCorner(n, n) = a0;
  g.topRightCorner(n, n * m) = phi_weights;
  // History transports toward -1; cell 1 (nearest 0) is fed by the head,
  // which is the discrete form of the boundary condition f(0) = x.
  for (int k = 0; k < m; ++k) {
    const Eigen::Index row = n + k * n;
    g.block(row, row, n, n) = -rate * Matrix::Identity(n, n);
    const Eigen::Index upstream = k == 0 ? 0 : row - n;
    g.block(row, upstream, n, n) += rate * Matrix::Identity(n, n);
  }
  return g;
}

int SemigroupHandle::dim() const { return space ? space->dim : 0; }

Matrix SemigroupHandle::evaluate(double t) const {
  if (t < 0.0) throw DomainError("semigroup evaluate: t must be >= 0");
  if (cache) {
    std::lock_guard<std::mutex> lock(cache->mutex);
    auto it = cache->values.find(t);
    if (it != cache->values.end()) return it->second;
  }
  Matrix value;
  switch (backend) {
    case Backend::MatrixExp:
    case Backend::DelayBlock:
      value = mat_exp(*generator, t);
      break;
    case Backend::GaussKernel:
      value = gauss_weierstrass_matrix(t, *lattice);
      break;
  }
  if (cache) {
    std::lock_guard<std::mutex> lock(cache->mutex);
    cache->values.emplace(t, value);
  }
  return value;
}

namespace {

SemigroupHandle make_handle(Backend backend, std::optional<Matrix> generator, SpacePtr space,
                            std::optional<Lattice> lattice, bool memo) {
  SemigroupHandle h;
  h.backend = backend;
  h.generator = std::move(generator);
  h.space = std::move(space);
  h.lattice = std::move(lattice);
  if (memo) h.cache = std::make_shared<EvalCache>();
  if (h.generator) {
    require_square(*h.generator, "semigroup generator");
    require_finite(*h.generator, "semigroup generator");
    if (h.generator->rows() != h.space->dim)
      throw DimensionError("semigroup: generator/space dimension mismatch");
  }
  return h;
}

}  // namespace

SemigroupHandle make_matrix_semigroup(const Matrix& a, SpacePtr space, bool memo) {
  return make_handle(Backend::MatrixExp, a, std::move(space), std::nullopt, memo);
}

SemigroupHandle make_gauss_semigroup(const Lattice& lat, SpacePtr space, bool memo) {
  if (lat.size() != space->dim)
    throw DimensionError("gauss semigroup: lattice/space dimension mismatch");
  return make_handle(Backend::GaussKernel, discrete_laplacian(lat), std::move(space), lat, memo);
}

SemigroupHandle make_delay_semigroup(const Matrix& a, SpacePtr space, bool memo) {
  return make_handle(Backend::DelayBlock, a, std::move(space), std::nullopt, memo);
}

BoundEstimate estimate_bound(const SemigroupHandle& s, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw DomainError("estimate_bound: empty grid");
  std::vector<double> ts, lns;
  for (double t : t_grid) {
    if (t < 0.0) throw DomainError("estimate_bound: negative t");
    const double norm = operator_norm(s.evaluate(t), *s.space);
    ts.push_back(t);
    lns.push_back(std::log(std::max(norm, 1e-300)));
  }
  // Least-squares slope, intercept lifted so the bound holds at every point.
  const std::size_t n = ts.size();
  double mean_t = 0.0, mean_l = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_t += ts[i];
    mean_l += lns[i];
  }
  mean_t /= n;
  mean_l /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ts[i] - mean_t) * (lns[i] - mean_l);
    den += (ts[i] - mean_t) * (ts[i] - mean_t);
  }
  const double omega = den > 0.0 ? num / den : 0.0;
  double ln_m = -1e300;
  for (std::size_t i = 0; i < n; ++i) ln_m = std::max(ln_m, lns[i] - omega * ts[i]);
  return BoundEstimate{std::max(1.0, 1.05 * std::exp(ln_m)), omega};
}

void fit_bounds(SemigroupHandle& s, const std::vector<double>& t_grid) {
  const BoundEstimate est = estimate_bound(s, t_grid);
  s.bound_m = est.m;
  s.bound_omega = est.omega;
}

namespace {

double masked_max_abs(const Matrix& m, const std::vector<bool>* interior) {
  if (!interior) return max_abs(m);
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(*interior)[i]) continue;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!(*interior)[j]) continue;
      best = std::max(best, std::abs(m(i, j)));
    }
  }
  return best;
}

}  // namespace

LawReport check_semigroup_law(const SemigroupHandle& s, const std::vector<double>& times,
                              double tol, const std::vector<bool>* interior) {
  LawReport report;
  report.tol = tol;
  for (double t : times)
    for (double u : times) {
      const Matrix lhs = s.evaluate(t) * s.evaluate(u);
      const Matrix rhs = s.evaluate(t + u);
      const double residual = masked_max_abs(lhs - rhs, interior);
      if (residual > report.max_residual) {
        report.max_residual = residual;
        report.worst_t = t;
        report.worst_s = u;
      }
    }
  report.pass = report.max_residual <= tol;
  return report;
}

WeakResolvent weak_resolvent(const SemigroupHandle& s, double lambda,
                             const QuadratureSpec& spec) {
  if (!(lambda > s.bound_omega))
    throw DivergenceError("weak_resolvent: lambda = " + std::to_string(lambda) +
                          " must exceed the growth bound " + std::to_string(s.bound_omega));
  const double t_max = laplace_truncation_time(lambda, s.bound_m, s.bound_omega, spec);
  const double tail =
      s.bound_m * std::exp(-(lambda - s.bound_omega) * t_max) / (lambda - s.bound_omega);

  const auto accumulate = [&](int panels) {
    const GaussLegendre rule = gauss_legendre(spec.points);
    const double h = t_max / panels;
    Matrix acc = Matrix::Zero(s.dim(), s.dim());
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h;
      for (int k = 0; k < spec.points; ++k) {
        const double t = mid + 0.5 * h * rule.nodes[k];
        acc += (0.5 * h * rule.weights[k] * std::exp(-lambda * t)) * s.evaluate(t);
      }
    }
    return acc;
  };

  const Matrix coarse = accumulate(spec.panels);
  const Matrix fine = accumulate(2 * spec.panels);
  const double roundoff = 2e-14 * (1.0 + max_abs(fine));
  return WeakResolvent{lambda, fine, max_abs(fine - coarse) + tail + roundoff};
}

ResolventConvergenceReport check_resolvent_convergence(const SemigroupHandle& s,
                                                       const Element& y, const Element& e,
                                                       const std::vector<double>& lambdas,
                                                       double tol, const QuadratureSpec& spec) {
  if (lambdas.empty()) throw DomainError("check_resolvent_convergence: empty lambda grid");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i + 1]))
      throw DomainError("check_resolvent_convergence: lambdas must be strictly increasing");

  ResolventConvergenceReport report;
  report.lambdas = lambdas;
  const double target = dual_pair(y, e);
  for (double lambda : lambdas) {
    const WeakResolvent r = weak_resolvent(s, lambda, spec);
    const Element image{y.space, (lambda * (r.op * y.values)).eval()};
    report.errors.push_back(std::abs(dual_pair(image, e) - target));
  }
  report.non_increasing = true;
  for (std::size_t i = 0; i + 1 < report.errors.size(); ++i)
    if (report.errors[i + 1] > 1.1 * report.errors[i]) report.non_increasing = false;
  report.pass = report.non_increasing && report.errors.back() <= tol;
  return report;
}

ConsistencyReport check_consistency(const SemigroupHandle& s_a, const SemigroupHandle& s_b,
                                    const std::vector<Element>& samples,
                                    const std::vector<double>& times, double tol) {
  if (s_a.dim() != s_b.dim()) throw DimensionError("check_consistency: dimension mismatch");
  ConsistencyReport report;
  report.tol = tol;
  for (double t : times) {
    const Matrix diff = s_a.evaluate(t) - s_b.evaluate(t);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double residual = max_abs(diff * samples[i].values);
      if (residual > report.max_residual) {
        report.max_residual = residual;
        report.worst_sample = static_cast<int>(i);
        report.worst_t = t;
      }
    }
  }
  report.pass = report.max_residual <= tol;
  return report;
}

}  // namespace vocheck
