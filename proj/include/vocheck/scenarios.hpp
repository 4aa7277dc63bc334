#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vocheck/semigroups.hpp"

namespace vocheck {

/// The full verification bundle for one run: consistent semigroup pairs
/// (S, S_Y) and (T, T_Z) on a shared coordinate space, the perturbation B,
/// the cones K and L with precomputed sample sets, and exponential bounds.
struct Scenario {
  std::string label;

  SpacePtr X, Y, Z, E;  // same nodes and weights, different exponents
  SemigroupHandle S, S_Y, T, T_Z;
  Matrix B;  // maps Z coordinates to Y coordinates

  Cone K;  // in X (intersection with Z is literal on shared coordinates)
  Cone L;  // in the dual coordinates E

  double bound_m = 1.0;
  double bound_omega = 0.0;

  std::vector<Element> k_samples;
  std::vector<Element> l_samples;

  double default_tol = 1e-8;  // 1e-4 for truncation-limited kernel backends

  std::optional<Matrix> B_tilde;           // delay scenarios: eta-assembled block
  std::optional<bool> constructed_true;    // randomized instances: the (c) flag
  std::optional<Lattice> lattice;          // kernel scenarios
  std::optional<std::vector<bool>> interior;  // mask for truncation-limited checks
  std::optional<double> t_ref;             // kernel scenarios: reference horizon
};

/// Randomized Metzler instance. With (seeded) probability 1/2 the pair is
/// constructed to satisfy the generator inequality A_T <= A_S + B entrywise,
/// otherwise to violate it by a margin >= 0.1 in one off-diagonal entry.
/// Diagonals are shifted so both growth bounds stay <= -gap.
Scenario scenario_metzler_random(int n, std::uint64_t seed, double gap);

/// Heat semigroup (Gaussian kernel) vs drift-perturbed heat flow on a uniform
/// lattice; B = b_max * sum of forward differences.
Scenario scenario_heat_drift(int d, double extent, int nodes_per_axis, const Vector& b,
                             double t_ref);
Scenario scenario_heat_drift(int d, double extent, int nodes_per_axis, double b_const,
                             double t_ref);

/// Rank-one perturbation B u = (sum_j w_j u_j) * ones on the L2/Linf/L1 scale.
Scenario scenario_rank_one_linfty(const Vector& weights, const Matrix& a_s,
                                  const Matrix& a_t);

/// Rank-one perturbation B u = <u, g'>_w * f on the L2/Lp/Lq scale with dual
/// exponent p' for E. Requires 1 <= p, q < infinity and f, g' >= 0.
Scenario scenario_rank_one_lp(double p, double q, const Vector& f, const Vector& gprime,
                              const Matrix& a_s, const Matrix& a_t, const Vector& weights);

/// Delay system on head x history coordinates: T generated by the delay block
/// with history functional from eta_density, S the same block with zero
/// functional, B assembled from the dominating density rho. Requires
/// eta_density <= rho pointwise and m >= 4.
Scenario scenario_delay(const Matrix& a0, const Vector& eta_density, const Vector& rho,
                        double p, double q, int m);

/// Low-level builder used by tests and the CLI: matrix semigroups S = e^{tA_S}
/// and T = e^{tA_T} on shared weighted coordinates with orthant cones.
Scenario scenario_from_matrices(const std::string& label, const Matrix& a_s,
                                const Matrix& a_t, const Matrix& b, const Vector& weights,
                                double p_x, double p_y, double p_z, double p_e,
                                std::uint64_t sample_seed);

struct HypothesisReport {
  struct Item {
    std::string name;
    bool pass = false;
    double value = 0.0;  // residual or worst slack, check-dependent
  };
  std::vector<Item> items;
  bool pass = false;
};

/// The scenario invariant battery: evaluate(0) = identity, semigroup laws,
/// consistency of the pairs on cone samples, cone invariances, exponential
/// bounds, and the delay domination B_tilde <= B.
HypothesisReport hypothesis_report(const Scenario& scn);

}  // namespace vocheck
