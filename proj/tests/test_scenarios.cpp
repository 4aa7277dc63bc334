#include <doctest.h>

#include "oracles.hpp"
#include "vocheck/scenarios.hpp"

using namespace vocheck;

TEST_CASE("scenario_metzler_random: deterministic under a fixed seed") {
  const Scenario a = scenario_metzler_random(5, 42, 0.5);
  const Scenario b = scenario_metzler_random(5, 42, 0.5);
  CHECK(max_abs(*a.S.generator - *b.S.generator) == 0.0);
  CHECK(max_abs(*a.T.generator - *b.T.generator) == 0.0);
  CHECK(max_abs(a.B - b.B) == 0.0);
  CHECK((a.X->weights - b.X->weights).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.k_samples.size() == b.k_samples.size());
  for (std::size_t i = 0; i < a.k_samples.size(); ++i)
    CHECK(max_abs(a.k_samples[i].values - b.k_samples[i].values) == 0.0);
  CHECK(a.constructed_true == b.constructed_true);
}

TEST_CASE("scenario_metzler_random: structural guarantees") {
  int trues = 0, falses = 0;
  for (std::uint64_t seed = 1; seed <= 24; ++seed) {
    const Scenario scn = scenario_metzler_random(2 + seed % 5, seed, 0.5);
    REQUIRE(scn.constructed_true.has_value());
    (*scn.constructed_true ? trues : falses)++;
    CHECK(is_metzler(*scn.S.generator));
    CHECK(is_metzler(*scn.T.generator));
    CHECK(scn.B.minCoeff() >= 0.0);
    // diagonal shifts keep both growth bounds below -gap
    CHECK(scn.S.generator->rowwise().sum().maxCoeff() <= -0.5 + 1e-12);
    CHECK(scn.T.generator->rowwise().sum().maxCoeff() <= -0.5 + 1e-12);
    const Matrix margin = *scn.S.generator + scn.B - *scn.T.generator;
    if (*scn.constructed_true) {
      CHECK(margin.minCoeff() >= -1e-15);
    } else {
      CHECK(margin.minCoeff() <= -0.1 + 1e-12);
    }
  }
  CHECK(trues > 4);  // the coin is seeded but must visit both branches
  CHECK(falses > 4);
}

TEST_CASE("scenario_metzler_random: argument validation") {
  CHECK_THROWS_AS(scenario_metzler_random(1, 1, 0.5), DomainError);
  CHECK_THROWS_AS(scenario_metzler_random(9, 1, 0.5), DomainError);
  CHECK_THROWS_AS(scenario_metzler_random(4, 1, -0.1), DomainError);
}

TEST_CASE("hypothesis battery passes on every shipped builder") {
  CHECK(hypothesis_report(scenario_metzler_random(4, 3, 0.5)).pass);  // satisfied branch
  CHECK(hypothesis_report(scenario_metzler_random(4, 1, 0.5)).pass);  // violated branch

  Rng rng(19);
  const Matrix a_s = oracle::random_metzler(rng, 4, 0.5);
  const Vector w = oracle::random_vector(rng, 4, 0.5, 1.0);
  {
    const Matrix b = Vector::Ones(4) * w.transpose();
    const Scenario scn = scenario_rank_one_linfty(w, a_s, Matrix(a_s + 0.1 * b));
    CHECK(hypothesis_report(scn).pass);
  }
  {
    const Vector f = oracle::random_vector(rng, 4, 0.2, 1.0);
    const Vector gp = oracle::random_vector(rng, 4, 0.2, 1.0);
    const Matrix b = f * w.cwiseProduct(gp).transpose();
    const Scenario scn = scenario_rank_one_lp(3.0, 1.5, f, gp, a_s, Matrix(a_s + 0.2 * b), w);
    CHECK(hypothesis_report(scn).pass);
  }
  CHECK(hypothesis_report(scenario_delay(Matrix::Constant(1, 1, -1.0), Vector::Ones(8),
                                         Vector::Ones(8), 2.0, 2.0, 8))
            .pass);
  // spacing fine enough to resolve the battery's shortest composition time
  CHECK(hypothesis_report(scenario_heat_drift(1, 6.0, 121, 0.4, 0.1)).pass);
}

TEST_CASE("scenario_rank_one_linfty: the coupling integrates and broadcasts") {
  Rng rng(23);
  const int n = 5;
  const Vector w = oracle::random_vector(rng, n, 0.5, 1.0);
  const Matrix a = oracle::random_metzler(rng, n, 0.5);
  const Scenario scn = scenario_rank_one_linfty(w, a, a);

  const Vector unit_mass = Vector::Unit(n, 2) / w(2);
  CHECK(max_abs(scn.B * unit_mass - Vector::Ones(n)) < 1e-14);
  CHECK(max_abs(scn.B * Vector::Zero(n)) == 0.0);
  for (int j = 0; j < n; ++j) CHECK((scn.B * Vector::Unit(n, j)).minCoeff() >= 0.0);

  Matrix bad = a;
  bad(0, 1) = -0.2;
  CHECK_THROWS_AS(scenario_rank_one_linfty(w, bad, a), PositivityError);
}

TEST_CASE("scenario_rank_one_lp: rank-one structure and validation") {
  Rng rng(29);
  const int n = 4;
  const Vector w = Vector::Ones(n);
  const Matrix a = oracle::random_metzler(rng, n, 0.5);

  const Scenario zero_g =
      scenario_rank_one_lp(2.0, 2.0, Vector::Ones(n), Vector::Zero(n), a, a, w);
  CHECK(max_abs(zero_g.B) == 0.0);

  const Scenario unit =
      scenario_rank_one_lp(2.0, 2.0, Vector::Ones(n), Vector::Ones(n), a, a, w);
  CHECK(max_abs(unit.B * Vector::Ones(n) - double(n) * Vector::Ones(n)) < 1e-14);
  const Eigen::JacobiSVD<Matrix> svd(unit.B);
  CHECK(svd.singularValues()(1) < 1e-12);  // rank one

  CHECK(unit.E->p == doctest::Approx(2.0));  // conjugate exponent of p = 2
  const Scenario pq =
      scenario_rank_one_lp(3.0, 1.5, Vector::Ones(n), Vector::Ones(n), a, a, w);
  CHECK(pq.Y->p == doctest::Approx(3.0));
  CHECK(pq.Z->p == doctest::Approx(1.5));
  CHECK(pq.E->p == doctest::Approx(1.5));  // p' = 3/2

  CHECK_THROWS_AS(
      scenario_rank_one_lp(2.0, 2.0, Vector::Constant(n, -1.0), Vector::Ones(n), a, a, w),
      DomainError);
  CHECK_THROWS_AS(
      scenario_rank_one_lp(p_infinity, 2.0, Vector::Ones(n), Vector::Ones(n), a, a, w),
      DomainError);
}

TEST_CASE("scenario_delay: domination and block assembly") {
  const int m = 8;
  const Matrix a0 = Matrix::Constant(1, 1, -1.0);

  const Scenario plain = scenario_delay(a0, Vector::Zero(m), Vector::Zero(m), 2.0, 2.0, m);
  CHECK(max_abs(*plain.T.generator - *plain.S.generator) == 0.0);  // eta = 0: T = S
  CHECK(max_abs(*plain.B_tilde) == 0.0);

  const Scenario tight = scenario_delay(a0, Vector::Ones(m), Vector::Ones(m), 2.0, 2.0, m);
  CHECK(max_abs(*tight.B_tilde - tight.B) == 0.0);  // eta = rho: blocks coincide

  const Scenario slack =
      scenario_delay(a0, Vector::Constant(m, 0.5), Vector::Ones(m), 2.0, 2.0, m);
  CHECK(((slack.B - *slack.B_tilde).minCoeff()) >= 0.0);

  Vector eta = Vector::Ones(m);
  eta(3) = 1.5;
  CHECK_THROWS_AS(scenario_delay(a0, eta, Vector::Ones(m), 2.0, 2.0, m), DominationError);
  CHECK_THROWS_AS(scenario_delay(a0, Vector::Ones(3), Vector::Ones(3), 2.0, 2.0, 3),
                  DomainError);
  CHECK_THROWS_AS(
      scenario_delay(a0, Vector::Constant(m, -0.1), Vector::Ones(m), 2.0, 2.0, m), DomainError);

  // weights: head cell 1, history cells 1/m, shared across the scale
  CHECK(tight.X->weights(0) == 1.0);
  CHECK(tight.X->weights(1) == doctest::Approx(1.0 / m));
  CHECK(is_metzler(*tight.T.generator));
}

TEST_CASE("scenario_heat_drift: discretization structure") {
  const Scenario scn = scenario_heat_drift(1, 6.0, 41, 0.0, 0.1);
  // b = 0: the perturbed generator is the plain lattice Laplacian and B = 0
  CHECK(max_abs(*scn.T.generator - discrete_laplacian(*scn.lattice)) == 0.0);
  CHECK(max_abs(scn.B) == 0.0);

  const Scenario drift = scenario_heat_drift(1, 6.0, 41, 0.4, 0.1);
  CHECK(is_metzler(*drift.T.generator));
  for (double t : {0.01, 0.1}) {
    const Matrix flow = drift.T.evaluate(t);
    for (const Element& x : drift.k_samples) CHECK((flow * x.values).minCoeff() >= -1e-12);
  }

  // kernel matrix entries match the closed form on a sample pair
  const Lattice& lat = *drift.lattice;
  const Matrix k = drift.S.evaluate(0.05);
  const double r2 = std::pow(lat.coords(5, 0) - lat.coords(9, 0), 2);
  const double expected =
      lat.spacing * std::pow(4.0 * M_PI * 0.05, -0.5) * std::exp(-r2 / (4.0 * 0.05));
  CHECK(k(5, 9) == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(scenario_heat_drift(1, 6.0, 41, -0.1, 0.1), DomainError);
  CHECK_THROWS_AS(scenario_heat_drift(1, 6.0, 8, 0.1, 0.1), DomainError);
}

TEST_CASE("scenario_heat_drift: two-dimensional lattice wiring") {
  const Scenario scn = scenario_heat_drift(2, 3.0, 9, 0.3, 0.1);
  const Lattice& lat = *scn.lattice;
  REQUIRE(lat.size() == 81);
  CHECK(is_metzler(*scn.T.generator));

  // interior Laplacian rows sum to zero; drift rows sum to -b/h at the
  // upwind boundary only
  const Matrix lap = discrete_laplacian(lat);
  const int center = 4 * lat.per_axis + 4;
  CHECK(lap.row(center).sum() == doctest::Approx(0.0).epsilon(1e-12));

  // B couples both axes: B = b_max (D_0 + D_1)
  const Matrix expected_b =
      0.3 * (forward_difference(lat, 0) + forward_difference(lat, 1));
  CHECK(max_abs(scn.B - expected_b) == 0.0);

  // kernel entry at a diagonal neighbour matches the 2-d closed form
  const Matrix k = scn.S.evaluate(0.05);
  const int neighbour = center + lat.per_axis + 1;
  const double r2 = (lat.coords.row(center) - lat.coords.row(neighbour)).squaredNorm();
  const double expected = lat.spacing * lat.spacing / (4.0 * M_PI * 0.05) *
                          std::exp(-r2 / (4.0 * 0.05));
  CHECK(k(center, neighbour) == doctest::Approx(expected).epsilon(1e-12));

  // positivity of the flow on the 2-d lattice
  CHECK(scn.T.evaluate(0.02).minCoeff() >= -1e-12);
}

TEST_CASE("resolvent convergence is monotone on the shipped scenario families") {
  std::vector<Scenario> shipped;
  shipped.push_back(scenario_metzler_random(4, 3, 0.5));
  {
    Rng rng(47);
    const Matrix a = oracle::random_metzler(rng, 4, 0.5);
    const Vector w = Vector::Ones(4);
    shipped.push_back(
        scenario_rank_one_lp(2.0, 2.0, Vector::Ones(4), Vector::Ones(4), a,
                             Matrix(a + 0.25 * Matrix::Ones(4, 4)), w));
  }
  shipped.push_back(scenario_delay(Matrix::Constant(1, 1, -1.0), Vector::Ones(6),
                                   Vector::Ones(6), 2.0, 2.0, 6));
  for (const Scenario& scn : shipped) {
    const Element& y = scn.k_samples.front();
    const Element e{scn.E, scn.l_samples.front().values};
    std::vector<double> lambdas;
    for (double shift : {4.0, 8.0, 16.0, 32.0})
      lambdas.push_back(scn.bound_omega + shift);
    const auto rep = check_resolvent_convergence(scn.S, y, e, lambdas, 1.0);
    CHECK(rep.non_increasing);
  }
}

TEST_CASE("scenario bundles share one weight vector across the scale") {
  const Scenario scn = scenario_metzler_random(4, 9, 0.5);
  for (const SpacePtr& sp : {scn.Y, scn.Z, scn.E})
    CHECK((scn.X->weights - sp->weights).cwiseAbs().maxCoeff() == 0.0);
  // pairings of K samples against L samples are therefore well defined
  CHECK_NOTHROW(dual_pair(scn.k_samples[0], scn.l_samples[0]));
}
