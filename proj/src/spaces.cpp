#include "vocheck/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "vocheck/rng.hpp"

namespace vocheck {

SpacePtr make_grid_space(const Vector& weights, double p, const std::string& label) {
  if (weights.size() == 0) throw DomainError("grid space: empty weight vector");
  if (!weights.allFinite() || (weights.array() <= 0.0).any())
    throw DomainError("grid space: weights must be finite and > 0");
  if (!(p >= 1.0)) throw DomainError("grid space: exponent must be >= 1");
  auto sp = std::make_shared<GridSpace>();
  sp->dim = static_cast<int>(weights.size());
  sp->weights = weights;
  sp->p = p;
  sp->label = label;
  return sp;
}

double conjugate_exponent(double p) {
  if (p == 1.0) return p_infinity;
  if (p == p_infinity) return 1.0;
  return p / (p - 1.0);
}

double p_norm(const GridSpace& sp, const Vector& u) {
  if (u.size() != sp.dim) throw DimensionError("p_norm: element/space dimension mismatch");
  if (u.size() == 0) return 0.0;
  if (sp.p == p_infinity) return u.cwiseAbs().maxCoeff();
  if (sp.p == 1.0) return (sp.weights.array() * u.array().abs()).sum();
  if (sp.p == 2.0) return std::sqrt((sp.weights.array() * u.array().square()).sum());
  return std::pow((sp.weights.array() * u.array().abs().pow(sp.p)).sum(), 1.0 / sp.p);
}

double p_norm(const Element& u) { return p_norm(*u.space, u.values); }

double dual_pair(const Element& u, const Element& v) {
  if (u.values.size() != v.values.size())
    throw PairingError("dual_pair: dimension mismatch");
  const Vector& wu = u.space->weights;
  const Vector& wv = v.space->weights;
  if (wu.size() != wv.size() || (wu - wv).cwiseAbs().maxCoeff() != 0.0)
    throw PairingError("dual_pair: spaces do not share weights; pairings would disagree");
  return (wu.array() * u.values.array() * v.values.array()).sum();
}

double intersection_norm(const Element& u, const GridSpace& sp_x, const GridSpace& sp_y) {
  if (sp_x.dim != sp_y.dim) throw DimensionError("intersection_norm: dimension mismatch");
  return std::max(p_norm(sp_x, u.values), p_norm(sp_y, u.values));
}

Matrix Cone::generator_matrix() const {
  const int n = ambient->dim;
  Matrix g(n, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) g.col(j) = generators[j].values;
  return g;
}

bool Cone::is_full_orthant() const {
  const int n = ambient->dim;
  if (static_cast<int>(generators.size()) != n) return false;
  std::vector<bool> covered(n, false);
  for (const Element& g : generators) {
    int nz = -1;
    for (int i = 0; i < n; ++i) {
      if (g.values(i) != 0.0) {
        if (nz >= 0) return false;
        nz = i;
      }
    }
    if (nz < 0 || g.values(nz) <= 0.0 || covered[nz]) return false;
    covered[nz] = true;
  }
  return true;
}

Cone make_cone(SpacePtr ambient, std::vector<Element> generators, double tol) {
  if (generators.empty()) throw DomainError("cone: needs at least one generator");
  for (const Element& g : generators) {
    if (g.values.size() != ambient->dim) throw DimensionError("cone: generator dimension mismatch");
    if (g.values.isZero(0.0)) throw DomainError("cone: zero generator");
  }
  Cone c;
  c.ambient = std::move(ambient);
  c.generators = std::move(generators);
  c.tol = tol;
  return c;
}

Cone make_orthant(SpacePtr ambient, double tol) {
  const int n = ambient->dim;
  std::vector<Element> gens;
  gens.reserve(n);
  for (int i = 0; i < n; ++i) gens.push_back(Element{ambient, Vector::Unit(n, i)});
  return make_cone(std::move(ambient), std::move(gens), tol);
}

Vector nnls(const Matrix& g, const Vector& y) {
  const Eigen::Index n = g.rows();
  const Eigen::Index k = g.cols();
  if (y.size() != n) throw DimensionError("nnls: rhs dimension mismatch");

  Vector alpha = Vector::Zero(k);
  std::vector<bool> passive(k, false);
  Vector residual = y;
  const double tol = 1e-12 * (1.0 + y.cwiseAbs().maxCoeff()) * (1.0 + g.cwiseAbs().maxCoeff());
  const int max_outer = 3 * static_cast<int>(k) + 10;

  for (int outer = 0; outer < max_outer; ++outer) {
    const Vector w = g.transpose() * residual;
    int best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < k; ++j)
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = static_cast<int>(j);
      }
    if (best < 0) break;  // KKT satisfied
    passive[best] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<int> idx;
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j]) idx.push_back(static_cast<int>(j));
      Matrix gp(n, idx.size());
      for (std::size_t c = 0; c < idx.size(); ++c) gp.col(c) = g.col(idx[c]);
      const Vector z = gp.colPivHouseholderQr().solve(y);

      bool feasible = true;
      for (std::size_t c = 0; c < idx.size(); ++c)
        if (z(c) <= 0.0) feasible = false;
      if (feasible) {
        alpha.setZero();
        for (std::size_t c = 0; c < idx.size(); ++c) alpha(idx[c]) = z(c);
        break;
      }
      // Step back to the feasibility boundary and drop the blocking index.
      double step = 1.0;
      for (std::size_t c = 0; c < idx.size(); ++c)
        if (z(c) <= 0.0) step = std::min(step, alpha(idx[c]) / (alpha(idx[c]) - z(c)));
      for (std::size_t c = 0; c < idx.size(); ++c) {
        alpha(idx[c]) += step * (z(c) - alpha(idx[c]));
        if (alpha(idx[c]) <= tol) {
          alpha(idx[c]) = 0.0;
          passive[idx[c]] = false;
        }
      }
    }
    residual = y - g * alpha;
  }
  return alpha;
}

double cone_distance(const Cone& c, const Vector& u) {
  if (u.size() != c.ambient->dim) throw DimensionError("cone_distance: dimension mismatch");
  if (c.is_full_orthant()) {
    // Projection is coordinatewise clipping; avoids the active-set solve.
    double sq = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (u(i) < 0.0) sq += u(i) * u(i);
    return std::sqrt(sq);
  }
  const Matrix g = c.generator_matrix();
  const Vector alpha = nnls(g, u);
  return (g * alpha - u).norm();
}

bool cone_contains(const Cone& c, const Vector& u, double tol_override) {
  const double tol = tol_override >= 0.0 ? tol_override : c.tol;
  return cone_distance(c, u) <= tol * (1.0 + u.norm());
}

bool cone_contains(const Cone& c, const Element& u) { return cone_contains(c, u.values); }

std::vector<Element> cone_samples(const Cone& c, int count, std::uint64_t seed) {
  const int n_gen = static_cast<int>(c.generators.size());
  if (count < n_gen)
    throw DomainError("cone_samples: count must be >= number of generators");
  std::vector<Element> out = c.generators;
  out.reserve(count);
  Rng rng(seed);
  const Matrix g = c.generator_matrix();
  for (int s = n_gen; s < count; ++s) {
    Vector alpha(n_gen);
    for (int j = 0; j < n_gen; ++j) alpha(j) = rng.uniform01();
    out.push_back(Element{c.ambient, g * alpha});
  }
  return out;
}

namespace {

// Dual scaling vector for the p-norm: |x|^{p-1} sign(x) / |x|_p^{p-1}, so that
// <dual(x), x> = |x|_p and |dual(x)|_{p'} = 1.
Vector p_dual_vector(const Vector& x, double p) {
  const Eigen::Index n = x.size();
  Vector d = Vector::Zero(n);
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < n; ++i) d(i) = x(i) > 0 ? 1.0 : (x(i) < 0 ? -1.0 : 0.0);
    return d;
  }
  if (p == p_infinity) {
    Eigen::Index arg = 0;
    x.cwiseAbs().maxCoeff(&arg);
    d(arg) = x(arg) >= 0 ? 1.0 : -1.0;
    return d;
  }
  const double norm = std::pow(x.array().abs().pow(p).sum(), 1.0 / p);
  if (norm == 0.0) return d;
  for (Eigen::Index i = 0; i < n; ++i)
    d(i) = std::copysign(std::pow(std::abs(x(i)) / norm, p - 1.0), x(i));
  return d;
}

double plain_p_norm(const Vector& x, double p) {
  if (x.size() == 0) return 0.0;
  if (p == p_infinity) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  return std::pow(x.array().abs().pow(p).sum(), 1.0 / p);
}

// Boyd's mixed power method for the induced plain p-norm.
double boyd_p_norm(const Matrix& a, double p) {
  const double q = conjugate_exponent(p);
  const Eigen::Index n = a.cols();
  Vector x = Vector::Ones(n);
  x /= plain_p_norm(x, p);
  double est = 0.0;
  for (int it = 0; it < 200; ++it) {
    const Vector y = a * x;
    const double ny = plain_p_norm(y, p);
    if (ny == 0.0) return 0.0;
    const Vector z = a.transpose() * p_dual_vector(y, p);
    est = ny;
    if (plain_p_norm(z, q) <= z.dot(x) * (1.0 + 1e-10)) break;
    x = p_dual_vector(z, q);
    x /= plain_p_norm(x, p);
  }
  return est;
}

}  // namespace

double operator_norm(const Matrix& a, const GridSpace& sp) {
  require_square(a, "operator_norm: matrix");
  if (a.rows() != sp.dim) throw DimensionError("operator_norm: matrix/space mismatch");
  const Vector& w = sp.weights;
  const Eigen::Index n = a.rows();

  if (sp.p == 1.0) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      best = std::max(best, (w.array() * a.col(j).array().abs()).sum() / w(j));
    return best;
  }
  if (sp.p == p_infinity) return a.cwiseAbs().rowwise().sum().maxCoeff();

  // Fold the weights into a similarity transform: |u|_{w,p} = |W^{1/p} u|_p.
  const Vector scale = w.array().pow(1.0 / sp.p);
  const Matrix b = scale.asDiagonal() * a * scale.cwiseInverse().asDiagonal();
  if (sp.p == 2.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i);
    v.normalize();
    double sigma2 = 0.0;
    for (int it = 0; it < 200; ++it) {
      Vector next = b.transpose() * (b * v);
      const double norm = next.norm();
      if (norm == 0.0) return 0.0;
      next /= norm;
      if (std::abs(norm - sigma2) <= 1e-8 * norm) {
        sigma2 = norm;
        break;
      }
      sigma2 = norm;
      v = next;
    }
    return std::sqrt(sigma2);
  }
  return boyd_p_norm(b, sp.p);
}

Matrix dual_map(const Matrix& a, const GridSpace& sp) {
  if (a.rows() != sp.dim || a.cols() != sp.dim)
    throw DimensionError("dual_map: matrix/space mismatch");
  const Vector& w = sp.weights;
  return w.cwiseInverse().asDiagonal() * a.transpose() * w.asDiagonal();
}

}  // namespace vocheck
