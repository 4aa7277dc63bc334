#include <doctest.h>

#include "oracles.hpp"
#include "vocheck/spaces.hpp"

using namespace vocheck;

namespace {

SpacePtr space2(double w0, double w1, double p) {
  Vector w(2);
  w << w0, w1;
  return make_grid_space(w, p, "T");
}

}  // namespace

TEST_CASE("p_norm: zero element, Euclidean pair, weighted l1") {
  CHECK(p_norm(Element{space2(1, 1, 2.0), Vector::Zero(2)}) == 0.0);

  Vector u(2);
  u << 3, 4;
  CHECK(p_norm(Element{space2(1, 1, 2.0), u}) == doctest::Approx(5.0).epsilon(1e-15));

  Vector v(2);
  v << 2, 2;
  CHECK(p_norm(Element{space2(0.5, 0.5, 1.0), v}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("p_norm: homogeneity and triangle inequality across exponents") {
  Rng rng(21);
  for (double p : {1.0, 2.0, 3.0, p_infinity}) {
    Vector w = oracle::random_vector(rng, 6, 0.2, 2.0);
    const SpacePtr sp = make_grid_space(w, p, "T");
    for (int trial = 0; trial < 1000; ++trial) {
      const Vector u = oracle::random_vector(rng, 6, -1.0, 1.0);
      const Vector v = oracle::random_vector(rng, 6, -1.0, 1.0);
      CHECK(p_norm(*sp, (u + v).eval()) <= p_norm(*sp, u) + p_norm(*sp, v) + 1e-12);
      const double c = rng.uniform(0.0, 3.0);
      CHECK(p_norm(*sp, (c * u).eval()) ==
            doctest::Approx(c * p_norm(*sp, u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dual_pair: examples and weight mismatch") {
  const SpacePtr sp = space2(1, 2, 2.0);
  Vector ones(2);
  ones << 1, 1;
  CHECK(dual_pair(Element{sp, ones}, Element{sp, Vector::Zero(2)}) == 0.0);
  CHECK(dual_pair(Element{sp, ones}, Element{sp, ones}) == doctest::Approx(3.0));
  CHECK(dual_pair(Element{sp, Vector::Unit(2, 0)}, Element{sp, Vector::Unit(2, 1)}) == 0.0);

  const SpacePtr other = space2(1, 3, 2.0);
  CHECK_THROWS_AS(dual_pair(Element{sp, ones}, Element{other, ones}), PairingError);
}

TEST_CASE("dual_pair: Hoelder bound against the conjugate norm") {
  Rng rng(33);
  for (double p : {1.0, 2.0, 3.0, p_infinity}) {
    Vector w = oracle::random_vector(rng, 5, 0.3, 1.5);
    const SpacePtr sp = make_grid_space(w, p, "Y");
    const SpacePtr dual = make_grid_space(w, conjugate_exponent(p), "E");
    for (int trial = 0; trial < 200; ++trial) {
      const Element u{sp, oracle::random_vector(rng, 5, -1.0, 1.0)};
      const Element v{dual, oracle::random_vector(rng, 5, -1.0, 1.0)};
      CHECK(dual_pair(u, v) <= p_norm(u) * p_norm(v) + 1e-10);
    }
  }
}

TEST_CASE("intersection_norm: max of the two norms") {
  const SpacePtr x = space2(1, 1, 1.0);
  const SpacePtr y = space2(1, 1, p_infinity);
  Vector ones(2);
  ones << 1, 1;
  CHECK(intersection_norm(Element{x, Vector::Zero(2)}, *x, *y) == 0.0);
  CHECK(intersection_norm(Element{x, ones}, *x, *y) == doctest::Approx(2.0));
  CHECK(intersection_norm(Element{x, ones}, *x, *x) == doctest::Approx(p_norm(*x, ones)));
}

TEST_CASE("sum_norm: trivial decompositions") {
  const SpacePtr x = space2(1, 1, 2.0);
  CHECK(sum_norm(Vector::Zero(2), *x, *x, 1e-8) == 0.0);

  Rng rng(5);
  for (double p : {1.0, 2.0, p_infinity}) {
    const SpacePtr sp = space2(0.7, 1.3, p);
    const Vector v = oracle::random_vector(rng, 2, -1.0, 1.0);
    // identical spaces: the infimum is the plain norm
    CHECK(sum_norm(v, *sp, *sp, 1e-8) == doctest::Approx(p_norm(*sp, v)).epsilon(1e-7));
  }
}

TEST_CASE("sum_norm: n = 2 battery against the exhaustive grid-search oracle") {
  struct Case {
    double px, py;
    double w0, w1;
    double v0, v1;
  };
  const std::vector<Case> battery{
      {1.0, p_infinity, 1.0, 1.0, 1.0, 0.0},
      {1.0, p_infinity, 1.0, 1.0, 0.8, -0.6},
      {2.0, 1.0, 0.5, 2.0, 1.0, 0.5},
      {2.0, p_infinity, 1.0, 1.0, -0.3, 0.9},
      {1.0, 2.0, 1.5, 0.5, 0.4, 1.1},
  };
  for (const Case& c : battery) {
    const SpacePtr x = space2(c.w0, c.w1, c.px);
    const SpacePtr y = space2(c.w0, c.w1, c.py);
    Vector v(2);
    v << c.v0, c.v1;
    const double reference = oracle::grid_search_sum_norm(v, *x, *y);
    const double value = sum_norm(v, *x, *y, 1e-6);
    CHECK(value == doctest::Approx(reference).epsilon(1e-3));
    CHECK(value <= std::min(p_norm(*x, v), p_norm(*y, v)) + 1e-6);
  }
}

TEST_CASE("sum_norm: general exponents take the certified fallback route") {
  const SpacePtr x = space2(1.0, 1.0, 3.0);
  const SpacePtr y = space2(1.0, 1.0, 1.5);
  Vector v(2);
  v << 1.0, 0.4;
  const double reference = oracle::grid_search_sum_norm(v, *x, *y);
  CHECK(sum_norm(v, *x, *y, 1e-3) == doctest::Approx(reference).epsilon(1e-3));
}

TEST_CASE("sum_norm is dominated by the intersection norm") {
  Rng rng(64);
  for (double px : {1.0, 2.0, p_infinity})
    for (double py : {1.0, 2.0, p_infinity}) {
      Vector w = oracle::random_vector(rng, 4, 0.4, 1.4);
      const SpacePtr x = make_grid_space(w, px, "X");
      const SpacePtr y = make_grid_space(w, py, "Y");
      for (int trial = 0; trial < 20; ++trial) {
        const Vector v = oracle::random_vector(rng, 4, -1.0, 1.0);
        const Element e{x, v};
        CHECK(sum_norm(v, *x, *y, 1e-6) <= intersection_norm(e, *x, *y) + 1e-8);
      }
    }
}

TEST_CASE("cone_contains: orthant membership") {
  const SpacePtr sp = space2(1, 1, 2.0);
  const Cone orthant = make_orthant(sp);
  CHECK(orthant.is_full_orthant());

  Vector u(2);
  u << 0, 0;
  CHECK(cone_contains(orthant, u));  // apex
  u << 1, 2;
  CHECK(cone_contains(orthant, u));
  u << 1, -1;
  CHECK_FALSE(cone_contains(orthant, u));
}

TEST_CASE("cone_contains: general generators via nonnegative least squares") {
  const SpacePtr sp = space2(1, 1, 2.0);
  Vector g1(2), g2(2);
  g1 << 1, 1;
  g2 << 1, 0;
  const Cone cone = make_cone(sp, {Element{sp, g1}, Element{sp, g2}});
  CHECK_FALSE(cone.is_full_orthant());

  Vector u(2);
  u << 2, 1;  // = g1 + g2
  CHECK(cone_contains(cone, u));
  u << 0, 1;  // would need a negative coefficient on g2
  CHECK_FALSE(cone_contains(cone, u));
  CHECK(cone_distance(cone, u) > 0.1);
}

TEST_CASE("nnls: random nonnegative combinations are reproduced") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 5, k = 3;
    Matrix g(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
    Vector alpha(k);
    for (int j = 0; j < k; ++j) alpha(j) = rng.uniform(0.0, 2.0);
    const Vector y = g * alpha;
    const Vector solved = nnls(g, y);
    CHECK((g * solved - y).norm() <= 1e-9 * (1.0 + y.norm()));
    CHECK(solved.minCoeff() >= 0.0);
  }
}

TEST_CASE("cone_samples: generators first, deterministic tail, all members") {
  const SpacePtr sp = space2(1, 1, 2.0);
  const Cone orthant = make_orthant(sp);

  const auto exact = cone_samples(orthant, 2, 7);
  REQUIRE(exact.size() == 2);
  CHECK(max_abs(exact[0].values - Vector::Unit(2, 0)) == 0.0);
  CHECK(max_abs(exact[1].values - Vector::Unit(2, 1)) == 0.0);

  const auto a = cone_samples(orthant, 4, 7);
  const auto b = cone_samples(orthant, 4, 7);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(max_abs(a[i].values - b[i].values) == 0.0);
    CHECK(cone_contains(orthant, a[i]));
  }
  const auto c = cone_samples(orthant, 4, 8);
  CHECK(max_abs(a[2].values - c[2].values) > 0.0);  // seed matters

  CHECK_THROWS_AS(cone_samples(orthant, 1, 7), DomainError);
}

TEST_CASE("operator_norm: exact formulas and power iteration") {
  Rng rng(99);
  Vector w = oracle::random_vector(rng, 5, 0.3, 1.7);
  const Matrix a = oracle::random_matrix(rng, 5, 1.0);

  for (double p : {1.0, 2.0, 3.0, p_infinity}) {
    const SpacePtr sp = make_grid_space(w, p, "T");
    const double norm = operator_norm(a, *sp);
    // lower bound by sampling, upper bound must hold for every sample
    double sampled = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const Vector u = oracle::random_vector(rng, 5, -1.0, 1.0);
      const double nu = p_norm(*sp, u);
      if (nu == 0.0) continue;
      sampled = std::max(sampled, p_norm(*sp, (a * u).eval()) / nu);
    }
    CHECK(sampled <= norm * (1.0 + 1e-8));
    CHECK(sampled >= 0.5 * norm);  // sampling cannot be far below the true norm
  }

  // p = 2 against the singular value of the similarity-transformed matrix
  const SpacePtr sp2 = make_grid_space(w, 2.0, "T");
  const Vector scale = w.array().sqrt();
  const Matrix b = scale.asDiagonal() * a * scale.cwiseInverse().asDiagonal();
  const double svd = Eigen::JacobiSVD<Matrix>(b).singularValues()(0);
  CHECK(operator_norm(a, *sp2) == doctest::Approx(svd).epsilon(1e-6));
}

TEST_CASE("dual_map realizes the adjoint of the weighted pairing") {
  Rng rng(41);
  Vector w = oracle::random_vector(rng, 4, 0.3, 2.0);
  const SpacePtr sp = make_grid_space(w, 2.0, "X");
  const Matrix a = oracle::random_matrix(rng, 4, 1.0);
  const Matrix adj = dual_map(a, *sp);
  for (int trial = 0; trial < 50; ++trial) {
    const Element u{sp, oracle::random_vector(rng, 4, -1.0, 1.0)};
    const Element v{sp, oracle::random_vector(rng, 4, -1.0, 1.0)};
    const Element au{sp, (a * u.values).eval()};
    const Element adjv{sp, (adj * v.values).eval()};
    CHECK(dual_pair(au, v) == doctest::Approx(dual_pair(u, adjv)).epsilon(1e-12));
  }
}

TEST_CASE("grid space construction validates its invariants") {
  Vector bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(make_grid_space(bad, 2.0, "X"), DomainError);
  Vector ok(2);
  ok << 1.0, 1.0;
  CHECK_THROWS_AS(make_grid_space(ok, 0.5, "X"), DomainError);
}
