#include "mms/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mms/detail/combsearch.hpp"

namespace mms {

LipschitzFunction::LipschitzFunction(const FiniteMmSpace& x, std::vector<double> v)
    : values(std::move(v)) {
  if (static_cast<int>(values.size()) != x.size())
    throw std::invalid_argument("LipschitzFunction: size mismatch");
  for (int i = 0; i < x.size(); ++i)
    for (int j = i + 1; j < x.size(); ++j)
      if (std::abs(values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)]) >
          x.dist(i, j) + kTolConstruct)
        throw std::invalid_argument("LipschitzFunction: values are not 1-Lipschitz");
}

// --- partial diameter --------------------------------------------------------

namespace {

// Max mass of a subset with diameter <= cap (a clique of the d <= cap graph).
double best_clique_mass(const FiniteMmSpace& x, const std::vector<double>& mass,
                        double cap) {
  const int n = x.size();
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (mass[static_cast<std::size_t>(i)] > 0.0) keep.push_back(i);
  if (keep.empty()) return 0.0;
  if (keep.size() > 64)
    throw resource_limit_error("partial_diameter: support exceeds 64 points");
  // heaviest first helps the branch-and-bound
  std::sort(keep.begin(), keep.end(), [&](int a, int b) {
    return mass[static_cast<std::size_t>(a)] > mass[static_cast<std::size_t>(b)];
  });
  const int k = static_cast<int>(keep.size());
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(k), 0);
  std::vector<double> w(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    w[static_cast<std::size_t>(a)] = mass[static_cast<std::size_t>(keep[static_cast<std::size_t>(a)])];
    for (int b = 0; b < k; ++b)
      if (a != b && x.dist(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]) <= cap)
        adj[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
  }
  return detail::max_weight_clique(adj, w);
}

}  // namespace

double partial_diameter(const FiniteMmSpace& x, const std::vector<double>& mass,
                        double mass_floor, int budget) {
  if (static_cast<int>(mass.size()) != x.size())
    throw std::invalid_argument("partial_diameter: mass vector size mismatch");
  if (mass_floor <= kTolConstruct) return 0.0;
  int support = 0;
  for (double v : mass)
    if (v > 0.0) ++support;
  if (support > budget)
    throw resource_limit_error("partial_diameter: support exceeds the exact budget (" +
                               std::to_string(budget) + ")");
  std::vector<double> cand = x.distance_values();
  const double floor_eff = mass_floor - kTolConstruct;
  // feasibility is monotone in the diameter cap
  std::size_t lo = 0, hi = cand.size() - 1;
  if (best_clique_mass(x, mass, cand[lo]) >= floor_eff) return cand[lo];
  if (best_clique_mass(x, mass, cand[hi]) < floor_eff)
    throw std::invalid_argument("partial_diameter: mass floor exceeds total mass");
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (best_clique_mass(x, mass, cand[mid]) >= floor_eff)
      hi = mid;
    else
      lo = mid;
  }
  return cand[hi];
}

double partial_diameter(const FiniteMmSpace& x, double one_minus_kappa, int budget) {
  return partial_diameter(x, x.weights(), one_minus_kappa, budget);
}

// --- separation distance -----------------------------------------------------

namespace {

struct SepSearch {
  const FiniteMmSpace& x;
  const std::vector<double>& kappas;  // group mass floors
  bool strict;
  double tau;
  std::vector<int> order;   // points, heaviest first
  std::vector<int> label;   // point -> group or -1 (discard)
  std::vector<double> mass; // per group

  bool met(std::size_t g) const {
    return strict ? mass[g] > kappas[g]
                  : mass[g] >= kappas[g] - kTolConstruct;
  }

  bool run(std::size_t pos, double remaining) {
    double deficit = 0.0;
    for (std::size_t g = 0; g < kappas.size(); ++g)
      if (!met(g)) deficit += kappas[g] - mass[g];
    if (deficit > remaining + kTolConstruct) return false;
    if (pos == order.size()) {
      for (std::size_t g = 0; g < kappas.size(); ++g)
        if (!met(g)) return false;
      return true;
    }
    int p = order[pos];
    double w = x.weight(p);
    for (std::size_t g = 0; g < kappas.size(); ++g) {
      // untouched groups with equal floors are interchangeable
      if (mass[g] == 0.0) {
        bool symmetric_twin = false;
        for (std::size_t g2 = 0; g2 < g && !symmetric_twin; ++g2)
          if (mass[g2] == 0.0 && kappas[g2] == kappas[g]) symmetric_twin = true;
        if (symmetric_twin) continue;
      }
      bool ok = true;
      for (std::size_t q = 0; q < pos && ok; ++q) {
        int other = order[q];
        int lab = label[static_cast<std::size_t>(other)];
        if (lab < 0 || static_cast<std::size_t>(lab) == g) continue;
        if (x.dist(p, other) < tau) ok = false;
      }
      if (!ok) continue;
      label[static_cast<std::size_t>(p)] = static_cast<int>(g);
      mass[g] += w;
      if (run(pos + 1, remaining - w)) return true;
      mass[g] -= w;
      label[static_cast<std::size_t>(p)] = -1;
    }
    label[static_cast<std::size_t>(p)] = -1;
    return run(pos + 1, remaining - w);
  }
};

bool sep_feasible(const FiniteMmSpace& x, const std::vector<double>& kappas,
                  bool strict, double tau) {
  SepSearch s{x, kappas, strict, tau, {}, {}, {}};
  s.order.resize(static_cast<std::size_t>(x.size()));
  std::iota(s.order.begin(), s.order.end(), 0);
  std::sort(s.order.begin(), s.order.end(),
            [&](int a, int b) { return x.weight(a) > x.weight(b); });
  s.label.assign(static_cast<std::size_t>(x.size()), -1);
  s.mass.assign(kappas.size(), 0.0);
  return s.run(0, 1.0);
}

}  // namespace

double separation_distance(const FiniteMmSpace& x,
                           const std::vector<double>& kappas, bool strict) {
  if (kappas.size() < 2)
    throw std::invalid_argument("separation_distance: need at least two mass floors");
  for (double k : kappas)
    if (!(k > 0.0 && k < 1.0))
      throw std::invalid_argument("separation_distance: floors must lie in (0,1)");
  double total = std::accumulate(kappas.begin(), kappas.end(), 0.0);
  if (total > 1.0 + kTolConstruct) return 0.0;  // sup over the empty family

  std::vector<double> cand = x.distance_values();  // ascending, cand[0] == 0
  // feasibility is monotone: a larger threshold only adds constraints
  std::size_t lo = 0, hi = cand.size() - 1;
  if (!sep_feasible(x, kappas, strict, cand[lo])) return 0.0;
  if (sep_feasible(x, kappas, strict, cand[hi])) return cand[hi];
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (sep_feasible(x, kappas, strict, cand[mid]))
      lo = mid;
    else
      hi = mid;
  }
  return cand[lo];
}

// --- observable diameter -----------------------------------------------------

namespace {

// min window length covering mass >= floor among the sorted values; +inf if
// the floor is unreachable.
double min_mass_window(std::vector<std::pair<double, double>> atoms, double floor_eff) {
  std::sort(atoms.begin(), atoms.end());
  double best = kInf;
  std::size_t lo = 0;
  double mass = 0.0;
  for (std::size_t hi = 0; hi < atoms.size(); ++hi) {
    mass += atoms[hi].second;
    while (lo < hi && mass - atoms[lo].second >= floor_eff) {
      mass -= atoms[lo].second;
      ++lo;
    }
    if (mass >= floor_eff) best = std::min(best, atoms[hi].first - atoms[lo].first);
  }
  return best;
}

double window_bound(const FiniteMmSpace& x, const std::vector<double>& values,
                    double kappa) {
  std::vector<std::pair<double, double>> atoms;
  for (int i = 0; i < x.size(); ++i)
    atoms.emplace_back(values[static_cast<std::size_t>(i)], x.weight(i));
  double w = min_mass_window(std::move(atoms), 1.0 - kappa - kTolConstruct);
  return std::isfinite(w) ? w : 0.0;
}

// Largest distance value <= v (+ mixed tolerance); keeps reported endpoints
// on the scale-covariant grid {0} union {distance entries}.
double snap_down(const std::vector<double>& grid, double v) {
  double best = 0.0;
  for (double g : grid)
    if (g <= v + std::max(kTolConstruct, 1e-12 * std::abs(g))) best = std::max(best, g);
  return best;
}

std::vector<double> distance_to_set(const FiniteMmSpace& x, const std::vector<int>& set) {
  std::vector<double> f(static_cast<std::size_t>(x.size()), kInf);
  for (int i = 0; i < x.size(); ++i)
    for (int a : set) f[static_cast<std::size_t>(i)] = std::min(f[static_cast<std::size_t>(i)], x.dist(i, a));
  return f;
}

// Local ascent over the Lipschitz polytope: push one coordinate at a time to
// a boundary of its feasible interval if that grows the window objective.
double ascent_bound(const FiniteMmSpace& x, double kappa, Rng rng) {
  const int n = x.size();
  std::vector<double> f(static_cast<std::size_t>(n));
  // McShane extension of random anchor values is always 1-Lipschitz
  int anchors = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(std::max(1, n / 2))));
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  rng.shuffle(pool);
  double d = x.diameter();
  std::vector<std::pair<int, double>> seed;
  for (int a = 0; a < anchors; ++a)
    seed.emplace_back(pool[static_cast<std::size_t>(a)], rng.uniform(0.0, d));
  for (int i = 0; i < n; ++i) {
    double v = kInf;
    for (auto [a, va] : seed) v = std::min(v, va + x.dist(i, a));
    f[static_cast<std::size_t>(i)] = v;
  }
  double best = window_bound(x, f, kappa);
  for (int iter = 0; iter < 60; ++iter) {
    int i = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    double lo = -kInf, hi = kInf;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      lo = std::max(lo, f[static_cast<std::size_t>(j)] - x.dist(i, j));
      hi = std::min(hi, f[static_cast<std::size_t>(j)] + x.dist(i, j));
    }
    double keep = f[static_cast<std::size_t>(i)];
    double cand_best = best;
    double cand_val = keep;
    for (double v : {lo, hi}) {
      f[static_cast<std::size_t>(i)] = v;
      double b = window_bound(x, f, kappa);
      if (b > cand_best) {
        cand_best = b;
        cand_val = v;
      }
    }
    f[static_cast<std::size_t>(i)] = cand_val;
    best = cand_best;
  }
  return best;
}

}  // namespace

CertifiedInterval obs_diameter(const FiniteMmSpace& x, double kappa,
                               std::uint64_t seed) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("obs_diameter: kappa must lie in (0,1)");
  const int n = x.size();
  CertifiedInterval out;
  if (n == 1) {
    out.lower_witness = "one-point";
    out.upper_witness = "one-point";
    return out;
  }
  std::vector<double> grid = x.distance_values();

  // Lower bound: separation with strict floors kappa (valid since
  // Sep(X; k'', k'') <= ObsDiam(X; -kappa) for every k'' > kappa), plus
  // window bounds of candidate observables snapped down to the grid.
  double lower = separation_distance(x, {kappa, kappa}, /*strict=*/true);
  std::string lw = "sep-strict";
  auto consider = [&](const std::vector<double>& values, const char* tag) {
    double b = snap_down(grid, window_bound(x, values, kappa));
    if (b > lower) {
      lower = b;
      lw = tag;
    }
  };
  for (int i = 0; i < n; ++i) consider(distance_to_set(x, {i}), "anchor-point");
  if (n <= 16) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) consider(distance_to_set(x, {i, j}), "anchor-pair");
  }
  Rng rng(seed);
  for (int s = 0; s < 4; ++s) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(s));
    // random anchor subsets
    std::vector<int> set;
    for (int i = 0; i < n; ++i)
      if (sub.unit() < 0.4) set.push_back(i);
    if (!set.empty()) consider(distance_to_set(x, set), "anchor-subset");
    double a = ascent_bound(x, kappa, sub.fork(99));
    double snapped = snap_down(grid, a);
    if (snapped > lower) {
      lower = snapped;
      lw = "ascent";
    }
  }

  // Upper bound caps, each a distance value: the full diameter, the partial
  // diameter of X itself, and the separation sandwich at kappa/2.
  double diam = x.diameter();
  double pd = n <= 64 ? partial_diameter(x, x.weights(), 1.0 - kappa, 64) : diam;
  double sep_cap = separation_distance(x, {kappa / 2.0, kappa / 2.0});
  double upper = diam;
  std::string uw = "diameter";
  if (pd < upper) {
    upper = pd;
    uw = "partial-diameter";
  }
  if (sep_cap < upper) {
    upper = sep_cap;
    uw = "sep-sandwich";
  }
  if (lower > upper) lower = upper;  // snapping keeps this a no-op in practice
  out.lower = lower;
  out.upper = upper;
  out.lower_witness = lw;
  out.upper_witness = uw;
  return out;
}

// --- covering number ---------------------------------------------------------

namespace {

struct CoverInstance {
  std::vector<std::uint64_t> balls;  // point set of each candidate ball
  std::vector<double> weight;       // point masses
  double target = 0.0;
  int n = 0;

  double mass_of(std::uint64_t set) const {
    double m = 0.0;
    while (set) {
      int v = __builtin_ctzll(set);
      set &= set - 1;
      m += weight[static_cast<std::size_t>(v)];
    }
    return m;
  }
};

int greedy_cover(const CoverInstance& inst, std::vector<int>* picks) {
  std::uint64_t covered = 0;
  double mass = 0.0;
  int count = 0;
  while (mass < inst.target) {
    int best = -1;
    double gain = 0.0;
    for (std::size_t b = 0; b < inst.balls.size(); ++b) {
      double g = inst.mass_of(inst.balls[b] & ~covered);
      if (g > gain) {
        gain = g;
        best = static_cast<int>(b);
      }
    }
    if (best < 0) return -1;  // cannot reach the target
    covered |= inst.balls[static_cast<std::size_t>(best)];
    mass += gain;
    ++count;
    if (picks) picks->push_back(best);
  }
  return count;
}

struct CoverSearch {
  const CoverInstance& inst;
  int best;
  std::vector<std::uint64_t> best_picks;  // chosen ball point-sets
  std::vector<std::uint64_t> picks;

  void run(std::uint64_t covered, double mass, int used, std::uint64_t avail) {
    if (mass >= inst.target) {
      if (used < best) {
        best = used;
        best_picks = picks;
      }
      return;
    }
    // LP-free lower bound: residual mass over the best single-ball gain
    std::size_t pick = 0;
    double gain = 0.0;
    for (std::uint64_t m = avail; m;) {
      std::size_t b = static_cast<std::size_t>(__builtin_ctzll(m));
      m &= m - 1;
      double g = inst.mass_of(inst.balls[b] & ~covered);
      if (g > gain) {
        gain = g;
        pick = b;
      }
    }
    if (gain <= 0.0) return;
    double need = inst.target - mass;
    int lb = static_cast<int>(std::ceil(need / gain - kTolConstruct));
    if (used + lb >= best) return;
    std::uint64_t bit = std::uint64_t{1} << pick;
    // include the ball with the largest residual gain, then exclude it
    picks.push_back(inst.balls[pick]);
    run(covered | inst.balls[pick], mass + gain, used + 1, avail & ~bit);
    picks.pop_back();
    run(covered, mass, used, avail & ~bit);
  }
};

}  // namespace

CoverResult covering_number(const FiniteMmSpace& x, double r, double kappa,
                            int budget) {
  if (!(r > 0.0)) throw std::invalid_argument("covering_number: radius must be positive");
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("covering_number: kappa must lie in (0,1)");
  const int n = x.size();
  if (n > 64)
    throw resource_limit_error("covering_number: more than 64 points");
  CoverInstance inst;
  inst.n = n;
  inst.weight = x.weights();
  inst.target = 1.0 - kappa - kTolConstruct;
  for (int c = 0; c < n; ++c) {
    std::uint64_t ball = 0;
    for (int i = 0; i < n; ++i)
      if (x.dist(c, i) <= r) ball |= std::uint64_t{1} << i;
    inst.balls.push_back(ball);
  }
  // dedupe identical balls and drop dominated ones
  std::sort(inst.balls.begin(), inst.balls.end());
  inst.balls.erase(std::unique(inst.balls.begin(), inst.balls.end()), inst.balls.end());
  std::vector<std::uint64_t> kept;
  for (std::uint64_t b : inst.balls) {
    bool dominated = false;
    for (std::uint64_t o : inst.balls)
      if (o != b && (b & o) == b) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(b);
  }
  inst.balls = std::move(kept);

  std::vector<int> greedy_idx;
  int greedy = greedy_cover(inst, &greedy_idx);
  if (greedy < 0)
    throw std::invalid_argument("covering_number: target mass is unreachable");
  std::vector<std::uint64_t> chosen;
  for (int b : greedy_idx) chosen.push_back(inst.balls[static_cast<std::size_t>(b)]);

  CoverResult out;
  if (n > budget || inst.balls.size() > 64) {
    out.count = greedy;
    out.exact = false;
  } else {
    std::uint64_t avail = inst.balls.size() == 64
                              ? ~std::uint64_t{0}
                              : ((std::uint64_t{1} << inst.balls.size()) - 1);
    CoverSearch search{inst, greedy, chosen, {}};
    search.run(0, 0.0, 0, avail);
    out.count = search.best;
    chosen = search.best_picks;
  }
  // report one center per chosen ball
  for (std::uint64_t set : chosen) {
    for (int c = 0; c < n; ++c) {
      std::uint64_t ball = 0;
      for (int i = 0; i < n; ++i)
        if (x.dist(c, i) <= r) ball |= std::uint64_t{1} << i;
      if (ball == set) {
        out.centers.push_back(c);
        break;
      }
    }
  }
  return out;
}

std::vector<int> eps_supporting_net(const FiniteMmSpace& x, double eps, int budget) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps_supporting_net: eps must lie in (0,1)");
  CoverResult cover = covering_number(x, eps, eps, budget);
  // postcondition: the net supports mass 1 - eps within closed eps-balls
  double mass = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    for (int c : cover.centers)
      if (x.dist(i, c) <= eps) {
        mass += x.weight(i);
        break;
      }
  }
  if (mass < 1.0 - eps - kTolSearch)
    throw std::logic_error("eps_supporting_net: postcondition failed");
  return cover.centers;
}

}  // namespace mms
