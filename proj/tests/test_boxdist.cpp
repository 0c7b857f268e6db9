#include <cmath>

#include "doctest.h"
#include "mms/boxdist.hpp"
#include "mms/harness.hpp"

using namespace mms;

namespace {

// Brute-force box distance: scan every subset of X x Y pairs.
double box_brute_force(const FiniteMmSpace& x, const FiniteMmSpace& y) {
  const int np = x.size() * y.size();
  REQUIRE(np <= 12);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j) pairs.emplace_back(i, j);
  double best = 1.0;  // S = empty: max(0, 1 - 0) = 1
  for (std::uint32_t mask = 1; mask < (1u << np); ++mask) {
    CorrespondenceSubset s;
    for (int p = 0; p < np; ++p)
      if (mask & (1u << p)) s.pairs.push_back(pairs[static_cast<std::size_t>(p)]);
    double val = std::max(distortion(s, x, y),
                          1.0 - max_coupling_mass(s, x.weights(), y.weights()));
    best = std::min(best, val);
  }
  return best;
}

}  // namespace

TEST_CASE("distortion") {
  FiniteMmSpace x = two_point_space(1.0, 0.5);
  FiniteMmSpace y = two_point_space(3.0, 0.5);
  CHECK(distortion(CorrespondenceSubset{}, x, y) == 0.0);
  CHECK(distortion(CorrespondenceSubset{{{0, 1}}}, x, y) == 0.0);
  CHECK(distortion(CorrespondenceSubset{{{0, 0}, {1, 1}}}, x, x) == 0.0);
  CHECK(distortion(CorrespondenceSubset{{{0, 0}, {1, 1}}}, x, y) == doctest::Approx(2.0));
}

TEST_CASE("max coupling mass") {
  FiniteMmSpace x = two_point_space(1.0, 0.5);
  CorrespondenceSubset all{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  CHECK(max_coupling_mass(all, x.weights(), x.weights()) == doctest::Approx(1.0));
  CHECK(max_coupling_mass(CorrespondenceSubset{}, x.weights(), x.weights()) == 0.0);
  CHECK(max_coupling_mass(CorrespondenceSubset{{{0, 0}, {1, 1}}}, x.weights(), x.weights()) ==
        doctest::Approx(1.0));
  CHECK(max_coupling_mass(CorrespondenceSubset{{{0, 1}}}, x.weights(), x.weights()) ==
        doctest::Approx(0.5));
}

TEST_CASE("box distance closed forms") {
  for (double l : {0.1, 0.5, 0.9, 2.0}) {
    double b = box_distance_exact(one_point_space(), two_point_space(l, 0.5));
    CHECK(b == std::min(l, 0.5));
  }
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    FiniteMmSpace x = random_space(rng, 2, 4);
    CHECK(box_distance_exact(x, x) == 0.0);
  }
}

TEST_CASE("box distance matches the subset-scan oracle") {
  Rng rng(43);
  for (int t = 0; t < 25; ++t) {
    FiniteMmSpace x = random_space(rng, 2, 3);
    FiniteMmSpace y = random_space(rng, 2, 3);
    if (x.size() * y.size() > 9) continue;
    double fast = box_distance_exact(x, y);
    double brute = box_brute_force(x, y);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("box distance pseudo-metric properties") {
  Rng rng(47);
  for (int t = 0; t < 15; ++t) {
    FiniteMmSpace a = random_space(rng, 2, 3);
    FiniteMmSpace b = random_space(rng, 2, 3);
    FiniteMmSpace c = random_space(rng, 2, 3);
    double ab = box_distance_exact(a, b);
    double ba = box_distance_exact(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(box_distance_exact(a, c) <= ab + box_distance_exact(b, c) + 1e-9);
    // zero iff isomorphic on this family
    bool iso = mm_isomorphic(a, b).has_value();
    if (iso) CHECK(ab <= 1e-9);
    if (ab <= 1e-12) CHECK(iso);
  }
  // relabeled copies sit at distance zero
  FiniteMmSpace x = FiniteMmSpace::create({"a", "b", "c"},
                                          {0, 1, 2, 1, 0, 1, 2, 1, 0}, {0.5, 0.3, 0.2});
  FiniteMmSpace y = FiniteMmSpace::create({"u", "v", "w"},
                                          {0, 1, 1, 1, 0, 2, 1, 2, 0}, {0.3, 0.5, 0.2});
  CHECK(box_distance_exact(x, y) == 0.0);
}

TEST_CASE("box upper bounds") {
  Rng rng(53);
  for (int t = 0; t < 60; ++t) {
    FiniteMmSpace s = random_space(rng, 2, 4);
    std::vector<double> mu = random_measure(rng, s.size());
    std::vector<double> nu = random_measure(rng, s.size());
    std::vector<std::string> l1, l2;
    for (int k = 0; k < s.size(); ++k) l1.push_back(s.label(k));
    l2 = l1;
    FiniteMmSpace a = FiniteMmSpace::create_pruned(std::move(l1), s.dist_matrix(), mu);
    FiniteMmSpace b = FiniteMmSpace::create_pruned(std::move(l2), s.dist_matrix(), nu);
    CHECK(box_distance_exact(a, b) <= box_upper_from_prokhorov(s, mu, nu) + 1e-9);
  }
  // restriction bound
  for (int t = 0; t < 60; ++t) {
    FiniteMmSpace x = random_space(rng, 3, 4);
    std::vector<int> subset;
    for (int k = 0; k < x.size(); ++k)
      if (rng.unit() < 0.6) subset.push_back(k);
    if (subset.empty()) subset.push_back(0);
    double mass = 0.0;
    for (int k : subset) mass += x.weight(k);
    CHECK(box_distance_exact(restrict_normalize(x, subset), x) <=
          4.0 * (1.0 - mass) + 1e-9);
  }
}

TEST_CASE("certificates") {
  FiniteMmSpace x = FiniteMmSpace::create({"a", "b", "c"},
                                          {0, 1, 2, 1, 0, 1, 2, 1, 0}, {0.5, 0.3, 0.2});
  auto ident = certify_mm_iso({0, 1, 2}, x, x, 0.0);
  REQUIRE(ident.has_value());
  CHECK(ident->domain.size() == 3);

  // collapsing a short two-point space certifies at its length
  double len = 0.3;
  FiniteMmSpace tiny = two_point_space(len, 0.5);
  auto collapse = certify_mm_iso({0, 0}, tiny, one_point_space(), len);
  CHECK(collapse.has_value());
  CHECK_FALSE(certify_mm_iso({0, 0}, tiny, one_point_space(), len / 2).has_value());
  CHECK(certificate_eps_full_domain({0, 0}, tiny, one_point_space()) == doctest::Approx(len));

  // box <= 3 eps whenever a certificate exists; box < eps gives a 3 eps map
  Rng rng(59);
  for (int t = 0; t < 25; ++t) {
    FiniteMmSpace a = random_space(rng, 2, 3);
    FiniteMmSpace b = random_space(rng, 2, 3);
    std::vector<int> f(static_cast<std::size_t>(a.size()));
    for (int k = 0; k < a.size(); ++k)
      f[static_cast<std::size_t>(k)] = static_cast<int>(rng.index(static_cast<std::size_t>(b.size())));
    double eps = certificate_eps_full_domain(f, a, b);
    REQUIRE(certify_mm_iso(f, a, b, eps + 1e-12).has_value());
    double box = box_distance_exact(a, b);
    CHECK(box <= 3.0 * eps + 1e-9);
    auto found = find_mm_iso(a, b, 3.0 * (box + 1e-9));
    CHECK(found.has_value());
  }
}

TEST_CASE("box distance stress against the oracle") {
  Rng rng(131);
  int tested = 0;
  for (int t = 0; t < 200 && tested < 60; ++t) {
    FiniteMmSpace x = random_space(rng, 2, 4);
    FiniteMmSpace y = random_space(rng, 2, 4);
    if (x.size() * y.size() > 12) continue;
    ++tested;
    CHECK(box_distance_exact(x, y) == doctest::Approx(box_brute_force(x, y)).epsilon(1e-9));
  }
  CHECK(tested >= 40);
}
