#include "vocheck/numerics.hpp"

#include <cmath>
#include <limits>

namespace vocheck {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Initial root guess, then Newton on the Legendre recurrence.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) < std::numeric_limits<double>::epsilon()) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

double composite_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                int panels, int points) {
  if (panels < 1 || points < 1) throw DomainError("composite_gauss_legendre: bad rule");
  const GaussLegendre rule = gauss_legendre(points);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double acc = 0.0;
    for (int k = 0; k < points; ++k) acc += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    total += 0.5 * h * acc;
  }
  return total;
}

namespace {

// Degree-13 Pade coefficients.
constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

Matrix pade13_exp(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  const Matrix u = a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
                        kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 + kPade13[1] * id);
  const Matrix v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
                   kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Matrix mat_exp(const Matrix& a, double t) {
  require_square(a, "mat_exp: generator");
  require_finite(a, "mat_exp: generator");
  if (t < 0.0) throw DomainError("mat_exp: t must be >= 0, got " + std::to_string(t));
  const Eigen::Index n = a.rows();
  if (t == 0.0) return Matrix::Identity(n, n);

  Matrix m = t * a;
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Matrix::Identity(n, n);
  int squarings = 0;
  if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  m /= std::ldexp(1.0, squarings);
  Matrix e = pade13_exp(m);
  for (int i = 0; i < squarings; ++i) e = e * e;
  return e;
}

Matrix solve_resolvent(const Matrix& a, double lambda) {
  require_square(a, "solve_resolvent: generator");
  const Eigen::Index n = a.rows();
  Matrix shifted = -a;
  shifted.diagonal().array() += lambda;
  Eigen::PartialPivLU<Matrix> lu(shifted);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12))
    throw SingularityError("solve_resolvent: lambda = " + std::to_string(lambda) +
                           " is (numerically) in the spectrum, rcond = " +
                           std::to_string(rcond));
  return lu.solve(Matrix::Identity(n, n));
}

Matrix duhamel_block(const Matrix& a_s, const Matrix& b, const Matrix& a_t, double t) {
  require_square(a_s, "duhamel_block: A_S");
  require_square(a_t, "duhamel_block: A_T");
  const Eigen::Index n = a_s.rows();
  const Eigen::Index m = a_t.rows();
  if (b.rows() != n || b.cols() != m)
    throw DimensionError("duhamel_block: B must be " + std::to_string(n) + "x" +
                         std::to_string(m));
  Matrix block = Matrix::Zero(n + m, n + m);
  block.topLeftCorner(n, n) = a_s;
  block.topRightCorner(n, m) = b;
  block.bottomRightCorner(m, m) = a_t;
  return mat_exp(block, t).topRightCorner(n, m);
}

double laplace_truncation_time(double lambda, double bound_m, double bound_omega,
                               const QuadratureSpec& spec) {
  const double decay = lambda - bound_omega;
  const double log_m = std::log(std::max(bound_m, std::numeric_limits<double>::min()));
  const double t = std::max(1.0, (log_m + 36.8) / decay);
  return std::min(t, spec.t_max);
}

LaplaceResult laplace_quadrature(const std::function<double(double)>& f, double lambda,
                                 double bound_m, double bound_omega,
                                 const QuadratureSpec& spec) {
  if (spec.panels < 1 || spec.points < 1 || !(spec.rel_tol > 0.0) || !(spec.t_max > 0.0))
    throw DomainError("laplace_quadrature: invalid quadrature spec");
  if (!(lambda > bound_omega))
    throw DivergenceError("laplace_quadrature: lambda = " + std::to_string(lambda) +
                          " must exceed omega = " + std::to_string(bound_omega));

  const double t_max = laplace_truncation_time(lambda, bound_m, bound_omega, spec);
  const double tail = bound_m * std::exp(-(lambda - bound_omega) * t_max) / (lambda - bound_omega);
  const auto integrand = [&](double t) { return std::exp(-lambda * t) * f(t); };
  const double coarse = composite_gauss_legendre(integrand, 0.0, t_max, spec.panels, spec.points);
  const double fine = composite_gauss_legendre(integrand, 0.0, t_max, 2 * spec.panels, spec.points);
  // Richardson difference plus tail bound, floored at summation roundoff.
  const double roundoff = 2e-14 * (1.0 + std::abs(fine));
  return LaplaceResult{fine, std::abs(fine - coarse) + tail + roundoff, t_max};
}

}  // namespace vocheck
