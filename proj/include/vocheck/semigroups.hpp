#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "vocheck/numerics.hpp"
#include "vocheck/spaces.hpp"

namespace vocheck {

/// Uniform 1-d or 2-d lattice on [-extent, extent]^dim with closed endpoints.
struct Lattice {
  int dim = 1;
  double extent = 1.0;
  int per_axis = 2;
  double spacing = 1.0;
  Matrix coords;  // size() x dim node coordinates

  int size() const { return static_cast<int>(coords.rows()); }
};

Lattice make_lattice(int dim, double extent, int per_axis);

/// Nodes at distance >= margin from the boundary along every axis.
std::vector<bool> interior_mask(const Lattice& lat, double margin);

/// Heat kernel matrix: entries w_j * (4 pi t)^{-d/2} exp(-|x_i - x_j|^2 / (4t)),
/// zero extension outside the window. t = 0 returns the identity.
Matrix gauss_weierstrass_matrix(double t, const Lattice& lat);

/// Centered second-difference Laplacian with zero (Dirichlet) extension.
Matrix discrete_laplacian(const Lattice& lat);

/// Forward first difference along one axis, zero extension.
Matrix forward_difference(const Lattice& lat, int axis);

/// Upwind discretization of -b(x) d/dx_axis (b >= 0): backward differences,
/// keeps the generator Metzler.
Matrix upwind_advection(const Lattice& lat, int axis, const Vector& b);

/// Block generator for a delay system on head x history coordinates:
/// top-left A0, top-right the given history functional weights, bottom the
/// first-order upwind transport on m cells of (-1,0) with the cell nearest 0
/// fed by the head (the discrete form of the boundary condition f(0) = x).
Matrix build_delay_generator(const Matrix& a0, const Matrix& phi_weights, int m);

enum class Backend { MatrixExp, GaussKernel, DelayBlock };

struct EvalCache {
  std::mutex mutex;
  std::map<double, Matrix> values;
};

/// Evaluatable family t -> S(t) with a matrix-exponential, Gaussian-kernel or
/// delay-block backend. Immutable after construction; evaluate is pure and an
/// optional memo behaves as a pure cache.
struct SemigroupHandle {
  Backend backend = Backend::MatrixExp;
  std::optional<Matrix> generator;  // always present for shipped backends
  SpacePtr space;
  double bound_m = 1.0;      // |S(t)| <= bound_m * e^{bound_omega * t}
  double bound_omega = 0.0;
  std::optional<Lattice> lattice;  // gauss-kernel backend only
  std::shared_ptr<EvalCache> cache;

  int dim() const;
  Matrix evaluate(double t) const;
};

SemigroupHandle make_matrix_semigroup(const Matrix& a, SpacePtr space, bool memo = true);
SemigroupHandle make_gauss_semigroup(const Lattice& lat, SpacePtr space, bool memo = true);
SemigroupHandle make_delay_semigroup(const Matrix& a, SpacePtr space, bool memo = true);

struct BoundEstimate {
  double m = 1.0;
  double omega = 0.0;
};

/// Least-squares fit of ln|S(t)| <= ln M + omega t on the grid, with the
/// intercept lifted so the bound holds at every grid point, M inflated by 5%
/// and clamped to M >= 1.
BoundEstimate estimate_bound(const SemigroupHandle& s, const std::vector<double>& t_grid);

/// Fits and stores the (M, omega) bound on the handle.
void fit_bounds(SemigroupHandle& s, const std::vector<double>& t_grid);

struct LawReport {
  double max_residual = 0.0;
  double worst_t = 0.0;
  double worst_s = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// max over pairs of |S(t)S(s) - S(t+s)| (max-abs entries); an interior mask
/// restricts rows and columns for truncation-limited kernels.
LawReport check_semigroup_law(const SemigroupHandle& s, const std::vector<double>& times,
                              double tol, const std::vector<bool>* interior = nullptr);

struct WeakResolvent {
  double lambda = 0.0;
  Matrix op;
  double error_estimate = 0.0;
};

/// Entrywise truncated Laplace transform of t -> S(t); for matrix backends this
/// agrees with solve_resolvent within the reported estimate.
WeakResolvent weak_resolvent(const SemigroupHandle& s, double lambda,
                             const QuadratureSpec& spec = {});

struct ResolventConvergenceReport {
  std::vector<double> lambdas;
  std::vector<double> errors;  // |<lambda R(lambda) y, e> - <y, e>|
  bool non_increasing = false; // up to 10% slack
  bool pass = false;           // non_increasing and last error <= tol
};

ResolventConvergenceReport check_resolvent_convergence(const SemigroupHandle& s,
                                                       const Element& y, const Element& e,
                                                       const std::vector<double>& lambdas,
                                                       double tol,
                                                       const QuadratureSpec& spec = {});

struct ConsistencyReport {
  double max_residual = 0.0;
  int worst_sample = -1;
  double worst_t = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// max over samples and times of |S_A(t)u - S_B(t)u| (max-abs coordinates).
ConsistencyReport check_consistency(const SemigroupHandle& s_a, const SemigroupHandle& s_b,
                                    const std::vector<Element>& samples,
                                    const std::vector<double>& times, double tol);

}  // namespace vocheck
