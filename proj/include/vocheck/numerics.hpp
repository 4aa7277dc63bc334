#pragma once

#include <functional>
#include <vector>

#include "vocheck/matrix.hpp"

namespace vocheck {

/// Nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule of order n, computed by Newton iteration on the
/// Legendre recurrence.
GaussLegendre gauss_legendre(int n);

/// Composite Gauss-Legendre integral of f over [a, b].
double composite_gauss_legendre(const std::function<double(double)>& f, double a,
                                double b, int panels, int points);

/// e^{tA} by scaling-and-squaring with the degree-13 Pade approximant.
/// Exact identity for t = 0.
Matrix mat_exp(const Matrix& a, double t);

/// (lambda*I - A)^{-1} by direct LU solve. Throws SingularityError when the
/// estimated condition number exceeds 1e12.
Matrix solve_resolvent(const Matrix& a, double lambda);

/// The operator integral int_0^t e^{(t-s)A_S} B e^{s A_T} ds, evaluated as the
/// upper-right block of exp(t * [[A_S, B], [0, A_T]]).
Matrix duhamel_block(const Matrix& a_s, const Matrix& b, const Matrix& a_t, double t);

struct QuadratureSpec {
  int panels = 32;          // composite Gauss-Legendre panels
  int points = 8;           // points per panel
  double t_max = 1e4;       // hard cap on the truncation time
  double rel_tol = 1e-10;   // target relative tolerance
};

struct LaplaceResult {
  double value = 0.0;
  double error_estimate = 0.0;  // Richardson halving + truncated-tail bound
  double t_max = 0.0;           // truncation point actually used
};

/// Truncation point for int_0^inf e^{-lambda t} f(t) dt given |f| <= M e^{omega t}:
/// max(1, (ln M + 36.8)/(lambda-omega)), so the tail is ~1e-16 relative,
/// capped at spec.t_max.
double laplace_truncation_time(double lambda, double bound_m, double bound_omega,
                               const QuadratureSpec& spec);

/// int_0^inf e^{-lambda t} f(t) dt, truncated and evaluated by composite
/// Gauss-Legendre with one Richardson halving step for the error estimate.
/// Requires lambda > bound_omega (else DivergenceError).
LaplaceResult laplace_quadrature(const std::function<double(double)>& f, double lambda,
                                 double bound_m, double bound_omega,
                                 const QuadratureSpec& spec = {});

}  // namespace vocheck
