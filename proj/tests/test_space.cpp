#include <cmath>

#include "doctest.h"
#include "mms/harness.hpp"
#include "mms/space.hpp"

using namespace mms;

namespace {

FiniteMmSpace three_chain() {
  // collinear-like triple: d(0,1)=1, d(1,2)=1, d(0,2)=2
  return FiniteMmSpace::create({"a", "b", "c"},
                               {0, 1, 2, 1, 0, 1, 2, 1, 0},
                               {0.5, 0.3, 0.2});
}

}  // namespace

TEST_CASE("space validation rejects bad data") {
  CHECK_THROWS_AS(FiniteMmSpace::create({"a", "b"}, {0, 1, 1, 0}, {0.5, 0.6}),
                  std::invalid_argument);  // mass != 1
  CHECK_THROWS_AS(FiniteMmSpace::create({"a", "b"}, {0, 1, 2, 0}, {0.5, 0.5}),
                  std::invalid_argument);  // asymmetric
  CHECK_THROWS_AS(FiniteMmSpace::create({"a", "b", "c"},
                                        {0, 1, 5, 1, 0, 1, 5, 1, 0}, {0.4, 0.3, 0.3}),
                  std::invalid_argument);  // triangle violated
  CHECK_THROWS_AS(FiniteMmSpace::create({}, {}, {}), std::invalid_argument);
  // zero-weight points are pruned on load
  FiniteMmSpace pruned = FiniteMmSpace::create_pruned(
      {"a", "b", "c"}, {0, 1, 2, 1, 0, 1, 2, 1, 0}, {0.5, 0.0, 0.5});
  CHECK(pruned.size() == 2);
  CHECK(pruned.dist(0, 1) == 2.0);
}

TEST_CASE("weight vectors") {
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}, WeightVector::Mode::A1), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector({0.2, 0.5}, WeightVector::Mode::A), std::invalid_argument);
  WeightVector empty({}, WeightVector::Mode::A);
  CHECK(empty.norm1() == 0.0);
  CHECK(weight_distance_l1(WeightVector({1.0}, WeightVector::Mode::A),
                           WeightVector({0.5, 0.5}, WeightVector::Mode::A)) ==
        doctest::Approx(1.0));
}

TEST_CASE("scale") {
  FiniteMmSpace x = three_chain();
  FiniteMmSpace same = scale(x, 1.0);
  CHECK(same.dist_matrix() == x.dist_matrix());
  FiniteMmSpace doubled = scale(two_point_space(3.0, 0.5), 2.0);
  CHECK(doubled.dist(0, 1) == 6.0);
  CHECK(doubled.weight(0) == 0.5);
  // bitwise inverse for power-of-two factors
  FiniteMmSpace inv = scale(scale(x, 2.0), 0.5);
  CHECK(inv.dist_matrix() == x.dist_matrix());
  CHECK_THROWS_AS(scale(x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale(x, -2.0), std::invalid_argument);
}

TEST_CASE("restrict_normalize") {
  FiniteMmSpace x = three_chain();
  FiniteMmSpace all = restrict_normalize(x, {0, 1, 2});
  CHECK(all.dist_matrix() == x.dist_matrix());
  CHECK(all.weights() == x.weights());
  FiniteMmSpace ab = restrict_normalize(x, {0, 1});
  CHECK(ab.weight(0) == doctest::Approx(0.625));
  CHECK(ab.weight(1) == doctest::Approx(0.375));
  FiniteMmSpace pt = restrict_normalize(x, {2});
  CHECK(pt.size() == 1);
  CHECK(pt.weight(0) == 1.0);
  CHECK_THROWS_AS(restrict_normalize(x, {}), std::invalid_argument);
}

TEST_CASE("lp products") {
  FiniteMmSpace t1 = two_point_space(1.0, 0.5);
  FiniteMmSpace pt = one_point_space();
  FiniteMmSpace same = lp_product(t1, pt, 2.0);
  CHECK(same.size() == 2);
  CHECK(same.dist(0, 1) == doctest::Approx(1.0));
  CHECK(same.weight(0) == doctest::Approx(0.5));

  FiniteMmSpace sq = lp_product(t1, t1, 2.0);
  // cross-diagonal pairs differ in both coordinates
  CHECK(sq.dist(0, 3) == doctest::Approx(std::sqrt(2.0)));
  FiniteMmSpace mx = lp_product(t1, two_point_space(2.0, 0.5), kInf);
  CHECK(mx.dist(0, 3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(lp_product(t1, t1, 0.5), std::invalid_argument);

  FiniteMmSpace cube = lp_power(t1, 2.0, 3);
  CHECK(cube.size() == 8);
  CHECK(lp_power(t1, 2.0, 1).size() == 2);
  // product measure
  double w = cube.weight(0);
  CHECK(w == doctest::Approx(0.125));
  CHECK_THROWS_AS(lp_power(t1, 2.0, 3, 4), resource_limit_error);
}

TEST_CASE("lp product commutative up to isomorphism") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    FiniteMmSpace a = random_space(rng, 2, 3);
    FiniteMmSpace b = random_space(rng, 2, 3);
    for (double p : {1.0, 2.0, kInf}) {
      CHECK(mm_isomorphic(lp_product(a, b, p), lp_product(b, a, p)).has_value());
    }
  }
}

TEST_CASE("direct sum") {
  FiniteMmSpace t1 = two_point_space(1.0, 0.5);
  ExtendedMmSpace single = direct_sum({t1}, WeightVector({1.0}, WeightVector::Mode::A1));
  CHECK(single.all_finite());
  ExtendedMmSpace two = direct_sum({one_point_space(), one_point_space()},
                                   WeightVector({0.5, 0.5}, WeightVector::Mode::A1));
  CHECK(std::isinf(two.dist(0, 1)));
  CHECK(two.weight(0) == 0.5);
  ExtendedMmSpace mix = direct_sum({t1, one_point_space()},
                                   WeightVector({0.7, 0.3}, WeightVector::Mode::A1));
  double part0 = mix.weight(0) + mix.weight(1);
  CHECK(part0 == doctest::Approx(0.7));
  CHECK(mix.finite_components().size() == 2);
  CHECK_THROWS_AS(direct_sum({t1}, WeightVector({0.5, 0.5}, WeightVector::Mode::A1)),
                  std::invalid_argument);
}

TEST_CASE("gapped sum") {
  WeightVector half({0.5, 0.5}, WeightVector::Mode::A1);
  FiniteMmSpace two = gapped_sum({{one_point_space(), 0}, {one_point_space(), 0}}, half, 5.0);
  CHECK(two.size() == 2);
  CHECK(two.dist(0, 1) == 5.0);

  FiniteMmSpace t1 = two_point_space(1.0, 0.5);
  FiniteMmSpace z = gapped_sum({{t1, 0}, {t1, 0}}, half, 10.0);
  // second points of each part route through both bases
  CHECK(z.dist(1, 3) == doctest::Approx(12.0));
  CHECK(z.dist(0, 2) == doctest::Approx(10.0));
  // inter-part set distance is exactly the gap
  double min_cross = kInf;
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < 4; ++j) min_cross = std::min(min_cross, z.dist(i, j));
  CHECK(min_cross == 10.0);
  CHECK_THROWS_AS(gapped_sum({{t1, 0}}, WeightVector({1.0}, WeightVector::Mode::A1), 0.0),
                  std::invalid_argument);
}

TEST_CASE("wedge sum") {
  FiniteMmSpace pt = wedge_sum({one_point_space(), 0}, {one_point_space(), 0}, 0.5);
  CHECK(pt.size() == 1);
  CHECK(pt.weight(0) == 1.0);

  FiniteMmSpace t1 = two_point_space(1.0, 0.5);
  FiniteMmSpace w = wedge_sum({t1, 0}, {t1, 0}, 0.5);
  CHECK(w.size() == 3);
  // far pair glues through the merged base points
  double far = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) far = std::max(far, w.dist(i, j));
  CHECK(far == doctest::Approx(2.0));
  double mass = 0.0;
  for (int i = 0; i < 3; ++i) mass += w.weight(i);
  CHECK(mass == doctest::Approx(1.0));
  CHECK_THROWS_AS(wedge_sum({t1, 0}, {t1, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("dissipation space") {
  CHECK(dissipation_space(1).size() == 1);
  FiniteMmSpace d4 = dissipation_space(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(d4.dist(i, j) == (i == j ? 0.0 : 4.0));
  CHECK(d4.weight(2) == 0.25);
  CHECK(d4.diameter() == 4.0);
}

TEST_CASE("atoms generator") {
  WeightVector one({1.0}, WeightVector::Mode::A);
  CHECK(atoms_generator(one, 7).size() == 1);
  FiniteMmSpace half = atoms_generator(WeightVector({0.5, 0.5}, WeightVector::Mode::A), 3);
  CHECK(half.size() == 2);
  CHECK(half.dist(0, 1) == 3.0);
  CHECK(half.weight(0) == 0.5);
  FiniteMmSpace bare = atoms_generator(WeightVector({}, WeightVector::Mode::A), 5);
  CHECK(mm_isomorphic(bare, dissipation_space(5)).has_value());
  // partial mass attaches a dissipation block
  FiniteMmSpace mixed = atoms_generator(WeightVector({0.5}, WeightVector::Mode::A), 4);
  CHECK(mixed.size() == 5);
}

TEST_CASE("lipschitz domination") {
  FiniteMmSpace x = three_chain();
  auto self = lipschitz_dominates(x, x);
  REQUIRE(self.has_value());
  for (int i = 0; i < 3; ++i) CHECK((*self)[static_cast<std::size_t>(i)] == i);
  CHECK(lipschitz_dominates(x, one_point_space()).has_value());

  // expansion is impossible: check against the all-maps oracle
  FiniteMmSpace small = two_point_space(1.0, 0.5);
  FiniteMmSpace big = two_point_space(2.0, 0.5);
  bool oracle = false;
  for (int m = 0; m < 4; ++m) {
    int f0 = m & 1, f1 = (m >> 1) & 1;
    bool lip = big.dist(f0, f1) <= small.dist(0, 1) + 1e-12;
    double mass0 = (f0 == 0 ? 0.5 : 0.0) + (f1 == 0 ? 0.5 : 0.0);
    if (lip && mass0 == 0.5) oracle = true;
  }
  CHECK_FALSE(oracle);
  CHECK_FALSE(lipschitz_dominates(small, big).has_value());
  CHECK(lipschitz_dominates(big, small).has_value());
  CHECK_THROWS_AS(lipschitz_dominates(dissipation_space(12), x), resource_limit_error);
}

TEST_CASE("lipschitz order behaves as a partial order on witnessed pairs") {
  Rng rng(11);
  for (int i = 0; i < 15; ++i) {
    auto [x, y] = random_dominated_pair(rng, 6);
    REQUIRE(lipschitz_dominates(y, x).has_value());
    CHECK(lipschitz_dominates(x, x).has_value());
    CHECK(lipschitz_dominates(x, one_point_space()).has_value());
    // transitivity: one-point < x < y, all witnessed
    CHECK(lipschitz_dominates(y, one_point_space()).has_value());
  }
}

TEST_CASE("eps-relaxed domination") {
  FiniteMmSpace a = two_point_space(1.1, 0.5);
  FiniteMmSpace b = two_point_space(1.0, 0.5);
  // identity pairing stretches by 0.1
  CHECK(lipschitz_dominates_eps(b, a, 0.1).has_value());
  CHECK_FALSE(lipschitz_dominates_eps(b, a, 0.01).has_value());
  // eps = 0 reduces to the exact test
  FiniteMmSpace x = three_chain();
  auto w0 = lipschitz_dominates_eps(x, x, 0.0);
  REQUIRE(w0.has_value());
  CHECK(w0->domain.size() == 3);
  // Y < X implies Y <_eps X
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    auto [q, y] = random_dominated_pair(rng, 5);
    CHECK(lipschitz_dominates_eps(y, q, 0.3).has_value());
  }
}

TEST_CASE("mm isomorphism") {
  FiniteMmSpace x = three_chain();
  CHECK(mm_isomorphic(x, x).has_value());
  // relabeled copy
  FiniteMmSpace y = FiniteMmSpace::create({"u", "v", "w"},
                                          {0, 1, 1, 1, 0, 2, 1, 2, 0},
                                          {0.3, 0.5, 0.2});
  auto perm = mm_isomorphic(x, y);
  REQUIRE(perm.has_value());
  CHECK(y.weight((*perm)[0]) == doctest::Approx(0.5));
  CHECK_FALSE(mm_isomorphic(two_point_space(1.0, 0.5), two_point_space(1.0, 0.75)).has_value());
  CHECK_FALSE(mm_isomorphic(x, two_point_space(1.0, 0.5)).has_value());
}

namespace {

// Metric quotient of x onto m classes; 1-Lipschitz pushforward by design.
FiniteMmSpace quotient_of(Rng& rng, const FiniteMmSpace& x, int m) {
  const int n = x.size();
  std::vector<int> g(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = i;
  for (int i = m; i < n; ++i) g[static_cast<std::size_t>(i)] = rng.range(0, m - 1);
  rng.shuffle(g);
  std::vector<double> d(static_cast<std::size_t>(m) * m, kInf);
  for (int a = 0; a < m; ++a) d[static_cast<std::size_t>(a) * m + a] = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int a = g[static_cast<std::size_t>(i)], b = g[static_cast<std::size_t>(j)];
      if (a != b)
        d[static_cast<std::size_t>(a) * m + b] =
            std::min(d[static_cast<std::size_t>(a) * m + b], x.dist(i, j));
    }
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        d[static_cast<std::size_t>(a) * m + b] = std::min(
            d[static_cast<std::size_t>(a) * m + b],
            d[static_cast<std::size_t>(a) * m + k] + d[static_cast<std::size_t>(k) * m + b]);
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < n; ++i)
    w[static_cast<std::size_t>(g[static_cast<std::size_t>(i)])] += x.weight(i);
  std::vector<std::string> labels;
  for (int a = 0; a < m; ++a) labels.push_back("t" + std::to_string(a));
  return FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
}

}  // namespace

TEST_CASE("lipschitz order is transitive and antisymmetric on witnessed chains") {
  Rng rng(137);
  for (int i = 0; i < 15; ++i) {
    FiniteMmSpace z = random_space(rng, 4, 7);
    FiniteMmSpace y = quotient_of(rng, z, rng.range(3, z.size() - 1));
    FiniteMmSpace x = quotient_of(rng, y, rng.range(2, y.size() - 1));
    REQUIRE(lipschitz_dominates(z, y).has_value());
    REQUIRE(lipschitz_dominates(y, x).has_value());
    CHECK(lipschitz_dominates(z, x).has_value());  // transitivity
  }
  // antisymmetry: mutual domination between a space and a relabeled copy
  FiniteMmSpace a = FiniteMmSpace::create({"a", "b", "c"},
                                          {0, 1, 2, 1, 0, 1, 2, 1, 0}, {0.5, 0.3, 0.2});
  FiniteMmSpace b = FiniteMmSpace::create({"u", "v", "w"},
                                          {0, 1, 1, 1, 0, 2, 1, 2, 0}, {0.3, 0.5, 0.2});
  CHECK(lipschitz_dominates(a, b).has_value());
  CHECK(lipschitz_dominates(b, a).has_value());
  CHECK(mm_isomorphic(a, b).has_value());
}

TEST_CASE("lp product is associative up to isomorphism") {
  Rng rng(139);
  for (int i = 0; i < 10; ++i) {
    FiniteMmSpace a = random_space(rng, 2, 2);
    FiniteMmSpace b = random_space(rng, 2, 2);
    FiniteMmSpace c = random_space(rng, 2, 2);
    for (double p : {1.0, 2.0, kInf}) {
      FiniteMmSpace lhs = lp_product(lp_product(a, b, p), c, p);
      FiniteMmSpace rhs = lp_product(a, lp_product(b, c, p), p);
      CHECK(mm_isomorphic(lhs, rhs).has_value());
    }
  }
}
