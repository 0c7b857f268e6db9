#include <cmath>

#include "doctest.h"
#include "mms/harness.hpp"
#include "mms/invariants.hpp"

using namespace mms;

namespace {

FiniteMmSpace three_chain() {
  return FiniteMmSpace::create({"a", "b", "c"},
                               {0, 1, 2, 1, 0, 1, 2, 1, 0},
                               {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

// Subset-scan partial diameter.
double partial_diameter_brute(const FiniteMmSpace& x, double floor) {
  if (floor <= 1e-12) return 0.0;
  double best = kInf;
  for (std::uint32_t mask = 1; mask < (1u << x.size()); ++mask) {
    double mass = 0.0, diam = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      if (!(mask & (1u << i))) continue;
      mass += x.weight(i);
      for (int j = i + 1; j < x.size(); ++j)
        if (mask & (1u << j)) diam = std::max(diam, x.dist(i, j));
    }
    if (mass >= floor - 1e-12) best = std::min(best, diam);
  }
  return best;
}

// All-labelings separation oracle for two mass floors.
double sep_brute(const FiniteMmSpace& x, double k0, double k1) {
  const int n = x.size();
  double best = 0.0;
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  // labels: 0, 1, discard (2)
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    int c = code;
    double m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < n; ++i) {
      label[static_cast<std::size_t>(i)] = c % 3;
      c /= 3;
      if (label[static_cast<std::size_t>(i)] == 0) m0 += x.weight(i);
      if (label[static_cast<std::size_t>(i)] == 1) m1 += x.weight(i);
    }
    if (m0 < k0 - 1e-12 || m1 < k1 - 1e-12) continue;
    double mind = kInf;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (label[static_cast<std::size_t>(i)] == 0 && label[static_cast<std::size_t>(j)] == 1)
          mind = std::min(mind, x.dist(i, j));
    best = std::max(best, mind);
  }
  return best;
}

// Smallest center count covering the mass target, by subset scan.
int cover_brute(const FiniteMmSpace& x, double r, double kappa) {
  const int n = x.size();
  for (int size = 1; size <= n; ++size) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != size) continue;
      double covered = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < n; ++c)
          if ((mask & (1u << c)) && x.dist(c, i) <= r) {
            covered += x.weight(i);
            break;
          }
      }
      if (covered >= 1.0 - kappa - 1e-12) return size;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("partial diameter") {
  FiniteMmSpace x = three_chain();
  // frozen from the 8-subset enumeration: two adjacent points carry mass 2/3,
  // so the floor 0.65 admits them while 0.7 forces all three
  CHECK(partial_diameter_brute(x, 0.65) == 1.0);
  CHECK(partial_diameter(x, 0.65) == 1.0);
  CHECK(partial_diameter_brute(x, 0.7) == 2.0);
  CHECK(partial_diameter(x, 0.7) == 2.0);
  CHECK(partial_diameter(x, 1.0) == 2.0);  // kappa -> 0 gives the full diameter
  FiniteMmSpace t = two_point_space(0.8, 0.5);
  CHECK(partial_diameter(t, 0.4) == 0.0);  // one atom suffices
  Rng rng(61);
  for (int i = 0; i < 40; ++i) {
    FiniteMmSpace y = random_space(rng, 2, 7);
    double floor = rng.uniform(0.05, 1.0);
    CHECK(partial_diameter(y, floor) == doctest::Approx(partial_diameter_brute(y, floor)));
    // monotone: a lower floor never needs a larger diameter
    CHECK(partial_diameter(y, floor * 0.5) <= partial_diameter(y, floor) + 1e-12);
  }
}

TEST_CASE("lipschitz function validation") {
  FiniteMmSpace x = three_chain();
  CHECK_NOTHROW(LipschitzFunction(x, {0.0, 1.0, 2.0}));
  CHECK_THROWS_AS(LipschitzFunction(x, {0.0, 2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("separation distance") {
  FiniteMmSpace d8 = dissipation_space(8);
  CHECK(separation_distance(d8, {0.25, 0.25}) == 8.0);
  CHECK(separation_distance(dissipation_space(4), {0.25, 0.25}) == 4.0);
  FiniteMmSpace t = two_point_space(0.7, 0.5);
  CHECK(separation_distance(t, {0.5, 0.5}) == 0.7);
  CHECK(separation_distance(t, {0.6, 0.6}) == 0.0);  // floors cannot both be met
  // discarding a cut point matters: three collinear points
  FiniteMmSpace chain = three_chain();
  CHECK(separation_distance(chain, {0.3, 0.3}) == 2.0);
  Rng rng(67);
  for (int i = 0; i < 30; ++i) {
    FiniteMmSpace y = random_space(rng, 2, 6);
    double k0 = rng.uniform(0.05, 0.5);
    double k1 = rng.uniform(0.05, 0.5);
    CHECK(separation_distance(y, {k0, k1}) == doctest::Approx(sep_brute(y, k0, k1)));
    // monotone in each floor
    CHECK(separation_distance(y, {k0, k1}) >= separation_distance(y, {k0 + 0.1, k1}) - 1e-12);
  }
}

TEST_CASE("observable diameter closed forms") {
  CertifiedInterval pt = obs_diameter(one_point_space(), 0.4);
  CHECK(pt.lower == 0.0);
  CHECK(pt.upper == 0.0);
  for (double l : {0.5, 1.0, 2.7}) {
    FiniteMmSpace t = two_point_space(l, 0.5);
    CertifiedInterval lo = obs_diameter(t, 0.3);
    CHECK(lo.lower == l);
    CHECK(lo.upper == l);
    CertifiedInterval hi = obs_diameter(t, 0.6);
    CHECK(hi.lower == 0.0);
    CHECK(hi.upper == 0.0);
  }
  Rng rng(71);
  for (int i = 0; i < 25; ++i) {
    FiniteMmSpace y = random_space(rng, 2, 7);
    double kappa = rng.uniform(0.1, 0.8);
    CertifiedInterval iv = obs_diameter(y, kappa);
    CHECK(iv.lower <= iv.upper + 1e-9);
    // the sandwich lower bound stays below the upper endpoint
    double kp = kappa * 0.6;
    CHECK(separation_distance(y, {kappa, kappa}) <= obs_diameter(y, kp).upper + 1e-9);
  }
}

TEST_CASE("observable diameter scales bitwise") {
  Rng rng(73);
  for (int i = 0; i < 30; ++i) {
    FiniteMmSpace y = random_space(rng, 2, 7);
    double kappa = rng.uniform(0.1, 0.7);
    CertifiedInterval base = obs_diameter(y, kappa, 99);
    double sep = separation_distance(y, {kappa, kappa});
    double pd = partial_diameter(y, 1.0 - kappa);
    for (double t : {0.5, 2.0, 10.0}) {
      FiniteMmSpace ty = scale(y, t);
      CertifiedInterval scaled = obs_diameter(ty, kappa, 99);
      CHECK(scaled.lower == t * base.lower);
      CHECK(scaled.upper == t * base.upper);
      CHECK(separation_distance(ty, {kappa, kappa}) == t * sep);
      CHECK(partial_diameter(ty, 1.0 - kappa) == t * pd);
    }
  }
}

TEST_CASE("covering number") {
  FiniteMmSpace d8 = dissipation_space(8);
  CHECK(covering_number(d8, 8.0, 0.25).count == 1);  // r >= diam
  CoverResult c = covering_number(d8, 0.5, 0.25);
  CHECK(c.exact);
  CHECK(c.count == 6);  // ceil(3n/4)
  CHECK(covering_number(dissipation_space(16), 0.5, 0.25).count == 12);
  Rng rng(79);
  for (int i = 0; i < 30; ++i) {
    FiniteMmSpace y = random_space(rng, 2, 7);
    double r = rng.uniform(0.05, y.diameter() * 1.1);
    double kappa = rng.uniform(0.05, 0.8);
    CoverResult got = covering_number(y, r, kappa);
    CHECK(got.exact);
    CHECK(got.count == cover_brute(y, r, kappa));
    // monotone in both parameters
    CHECK(covering_number(y, r * 1.5, kappa).count <= got.count);
    CHECK(covering_number(y, r, std::min(0.95, kappa + 0.1)).count <= got.count);
    // the reported centers attain the target
    double covered = 0.0;
    for (int p = 0; p < y.size(); ++p)
      for (int ctr : got.centers)
        if (y.dist(ctr, p) <= r) {
          covered += y.weight(p);
          break;
        }
    CHECK(covered >= 1.0 - kappa - 1e-9);
  }
}

TEST_CASE("supporting nets") {
  FiniteMmSpace t = two_point_space(0.2, 0.5);
  CHECK(eps_supporting_net(t, 0.5).size() == 1);  // eps >= diam
  CHECK(eps_supporting_net(dissipation_space(8), 0.25).size() == 6);  // ceil(3n/4)
  Rng rng(83);
  for (int i = 0; i < 20; ++i) {
    FiniteMmSpace y = random_space(rng, 2, 7);
    double eps = rng.uniform(0.1, 0.9);
    std::vector<int> net = eps_supporting_net(y, eps);
    double mass = 0.0;
    for (int p = 0; p < y.size(); ++p)
      for (int c : net)
        if (y.dist(p, c) <= eps) {
          mass += y.weight(p);
          break;
        }
    CHECK(mass >= 1.0 - eps - 1e-9);
  }
}

TEST_CASE("covering number is monotone along the lipschitz order") {
  Rng rng(89);
  for (int i = 0; i < 25; ++i) {
    auto [x, y] = random_dominated_pair(rng, 7);
    REQUIRE(lipschitz_dominates(y, x).has_value());
    for (int t = 0; t < 5; ++t) {
      double r = rng.uniform(0.05, std::max(0.1, y.diameter()));
      double kappa = rng.uniform(0.05, 0.8);
      CHECK(covering_number(x, r, kappa).count <= covering_number(y, r, kappa).count);
    }
  }
}

namespace {

// Three-group labeling oracle.
double sep_brute3(const FiniteMmSpace& x, double k0, double k1, double k2) {
  const int n = x.size();
  double best = 0.0;
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 4;
  for (int code = 0; code < total; ++code) {
    int c = code;
    double m[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      label[static_cast<std::size_t>(i)] = c % 4;
      c /= 4;
      if (label[static_cast<std::size_t>(i)] < 3)
        m[label[static_cast<std::size_t>(i)]] += x.weight(i);
    }
    if (m[0] < k0 - 1e-12 || m[1] < k1 - 1e-12 || m[2] < k2 - 1e-12) continue;
    double mind = kInf;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int a = label[static_cast<std::size_t>(i)], b = label[static_cast<std::size_t>(j)];
        if (a < 3 && b < 3 && a != b) mind = std::min(mind, x.dist(i, j));
      }
    best = std::max(best, mind);
  }
  return best;
}

}  // namespace

TEST_CASE("separation distance with three floors matches the labeling oracle") {
  Rng rng(127);
  for (int i = 0; i < 20; ++i) {
    FiniteMmSpace y = random_space(rng, 3, 6);
    double k0 = rng.uniform(0.05, 0.3);
    double k1 = rng.uniform(0.05, 0.3);
    double k2 = rng.uniform(0.05, 0.3);
    CHECK(separation_distance(y, {k0, k1, k2}) ==
          doctest::Approx(sep_brute3(y, k0, k1, k2)));
  }
  // infeasible triples collapse to zero
  CHECK(separation_distance(dissipation_space(4), {0.5, 0.4, 0.2}) == 0.0);
}
