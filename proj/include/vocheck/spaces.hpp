#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "vocheck/matrix.hpp"

namespace vocheck {

inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

/// Finite weighted discrete measure space with exponent p. Models L_p(mu) on a
/// fixed node set, or R^n with a norm. p = infinity uses the plain max norm
/// (weights ignored), matching the essential supremum for strictly positive
/// weights.
struct GridSpace {
  int dim = 0;
  Vector weights;     // strictly positive quadrature/measure weights
  double p = 2.0;     // exponent in [1, inf]
  std::string label;  // "X", "Y", "Z", "E", ...
};

using SpacePtr = std::shared_ptr<const GridSpace>;

SpacePtr make_grid_space(const Vector& weights, double p, const std::string& label);

struct Element {
  SpacePtr space;
  Vector values;
};

inline Element make_element(SpacePtr sp, const Vector& v) { return Element{std::move(sp), v}; }

double conjugate_exponent(double p);

double p_norm(const GridSpace& sp, const Vector& u);
double p_norm(const Element& u);

/// Weighted bilinear pairing sum w_i u_i v_i. The same form realizes every
/// pairing on the scale, so pairings on intersections agree by construction.
/// Throws PairingError when the two spaces do not share weights.
double dual_pair(const Element& u, const Element& v);

/// max(|u|_X, |u|_Y).
double intersection_norm(const Element& u, const GridSpace& sp_x, const GridSpace& sp_y);

/// Approximate infimum over decompositions v = x + y of |x|_X + |y|_Y.
/// Splitting iteration with a duality-gap certificate; throws ConvergenceError
/// (carrying the best value) when the gap is still above tol at the cap.
double sum_norm(const Vector& v, const GridSpace& sp_x, const GridSpace& sp_y, double tol);

/// Finitely generated convex cone in a GridSpace.
struct Cone {
  SpacePtr ambient;
  std::vector<Element> generators;
  double tol = 1e-9;  // relative membership tolerance

  Matrix generator_matrix() const;
  /// True when the generators are positive multiples of distinct standard basis
  /// vectors covering every coordinate.
  bool is_full_orthant() const;
};

/// The full nonnegative orthant (generators = standard basis vectors).
Cone make_orthant(SpacePtr ambient, double tol = 1e-9);
Cone make_cone(SpacePtr ambient, std::vector<Element> generators, double tol = 1e-9);

/// Nonnegative least squares min_{alpha >= 0} |G alpha - y|_2, Lawson-Hanson
/// active set.
Vector nnls(const Matrix& g, const Vector& y);

/// Euclidean distance from u to the cone.
double cone_distance(const Cone& c, const Vector& u);

bool cone_contains(const Cone& c, const Vector& u, double tol_override = -1.0);
bool cone_contains(const Cone& c, const Element& u);

/// Deterministic sample set: every generator, then (count - #generators) random
/// nonnegative combinations with coefficients uniform on [0, 1).
std::vector<Element> cone_samples(const Cone& c, int count, std::uint64_t seed);

/// Induced operator norm on a GridSpace: exact for p in {1, inf}, power
/// iteration for p = 2, Boyd's mixed power method otherwise.
double operator_norm(const Matrix& a, const GridSpace& sp);

/// Adjoint of a matrix with respect to the weighted pairing: W^{-1} A^T W.
Matrix dual_map(const Matrix& a, const GridSpace& sp);

}  // namespace vocheck
