#include "mms/boxdist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mms/detail/combsearch.hpp"
#include "mms/detail/flow.hpp"

namespace mms {

namespace {

double dist_gap(double a, double b) {
  bool ia = std::isinf(a), ib = std::isinf(b);
  if (ia && ib) return 0.0;
  if (ia || ib) return kInf;
  return std::abs(a - b);
}

constexpr double kMassScale = 1e12;

struct ScaledMarginals {
  std::vector<std::int64_t> mu, nu;
  std::int64_t total = 0;
};

ScaledMarginals scale_marginals(const std::vector<double>& mu,
                                const std::vector<double>& nu) {
  ScaledMarginals out;
  std::int64_t tm = 0, tn = 0;
  for (double v : mu) {
    out.mu.push_back(std::llround(v * kMassScale));
    tm += out.mu.back();
  }
  for (double v : nu) {
    out.nu.push_back(std::llround(v * kMassScale));
    tn += out.nu.back();
  }
  std::int64_t t = std::max(tm, tn);
  if (tm != t) *std::max_element(out.mu.begin(), out.mu.end()) += t - tm;
  if (tn != t) *std::max_element(out.nu.begin(), out.nu.end()) += t - tn;
  out.total = t;
  return out;
}

// Max coupling mass placed on the given pair set, in integer units.
std::int64_t pair_flow(const std::vector<std::pair<int, int>>& pairs,
                       const ScaledMarginals& m, detail::Dinic* out_graph = nullptr) {
  int nx = static_cast<int>(m.mu.size());
  int ny = static_cast<int>(m.nu.size());
  detail::Dinic dinic(nx + ny + 2);
  int source = nx + ny, sink = nx + ny + 1;
  for (int i = 0; i < nx; ++i)
    if (m.mu[static_cast<std::size_t>(i)] > 0) dinic.add_edge(source, i, m.mu[static_cast<std::size_t>(i)]);
  for (int j = 0; j < ny; ++j)
    if (m.nu[static_cast<std::size_t>(j)] > 0) dinic.add_edge(nx + j, sink, m.nu[static_cast<std::size_t>(j)]);
  for (auto [i, j] : pairs) dinic.add_edge(i, nx + j, std::int64_t{1} << 61);
  std::int64_t f = dinic.max_flow(source, sink);
  if (out_graph) *out_graph = std::move(dinic);
  return f;
}

}  // namespace

double distortion(const CorrespondenceSubset& s, const FiniteMmSpace& x,
                  const FiniteMmSpace& y) {
  for (auto [i, j] : s.pairs)
    if (i < 0 || i >= x.size() || j < 0 || j >= y.size())
      throw std::invalid_argument("distortion: pair index out of bounds");
  double sup = 0.0;
  for (std::size_t p = 0; p < s.pairs.size(); ++p)
    for (std::size_t q = p; q < s.pairs.size(); ++q) {
      auto [i, j] = s.pairs[p];
      auto [i2, j2] = s.pairs[q];
      sup = std::max(sup, dist_gap(x.dist(i, i2), y.dist(j, j2)));
    }
  return sup;
}

double max_coupling_mass(const CorrespondenceSubset& s,
                         const std::vector<double>& mu,
                         const std::vector<double>& nu) {
  if (s.pairs.empty()) return 0.0;
  for (auto [i, j] : s.pairs)
    if (i < 0 || i >= static_cast<int>(mu.size()) || j < 0 ||
        j >= static_cast<int>(nu.size()))
      throw std::invalid_argument("max_coupling_mass: pair index out of bounds");
  ScaledMarginals m = scale_marginals(mu, nu);
  return static_cast<double>(pair_flow(s.pairs, m)) / static_cast<double>(m.total);
}

std::pair<double, Coupling> max_coupling_with_plan(const CorrespondenceSubset& s,
                                                   const std::vector<double>& mu,
                                                   const std::vector<double>& nu) {
  ScaledMarginals m = scale_marginals(mu, nu);
  int nx = static_cast<int>(mu.size());
  int ny = static_cast<int>(nu.size());
  std::vector<std::int64_t> joint(static_cast<std::size_t>(nx) * ny, 0);
  std::int64_t flow = 0;
  if (!s.pairs.empty()) {
    detail::Dinic dinic(0);
    flow = pair_flow(s.pairs, m, &dinic);
    // edge pairs were added after the nx+ny marginal edges
    int base = 0;
    for (int i = 0; i < nx; ++i)
      if (m.mu[static_cast<std::size_t>(i)] > 0) ++base;
    for (int j = 0; j < ny; ++j)
      if (m.nu[static_cast<std::size_t>(j)] > 0) ++base;
    for (std::size_t k = 0; k < s.pairs.size(); ++k) {
      auto [i, j] = s.pairs[k];
      joint[static_cast<std::size_t>(i) * ny + j] +=
          dinic.edge_flow(base + static_cast<int>(k));
    }
  }
  // complete the partial transport to a full coupling: route the leftover
  // supplies to the leftover demands in index order
  std::vector<std::int64_t> row(static_cast<std::size_t>(nx), 0), col(static_cast<std::size_t>(ny), 0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      row[static_cast<std::size_t>(i)] += joint[static_cast<std::size_t>(i) * ny + j];
      col[static_cast<std::size_t>(j)] += joint[static_cast<std::size_t>(i) * ny + j];
    }
  int j = 0;
  for (int i = 0; i < nx; ++i) {
    std::int64_t need = m.mu[static_cast<std::size_t>(i)] - row[static_cast<std::size_t>(i)];
    while (need > 0 && j < ny) {
      std::int64_t cap = m.nu[static_cast<std::size_t>(j)] - col[static_cast<std::size_t>(j)];
      if (cap <= 0) {
        ++j;
        continue;
      }
      std::int64_t take = std::min(need, cap);
      joint[static_cast<std::size_t>(i) * ny + j] += take;
      col[static_cast<std::size_t>(j)] += take;
      need -= take;
    }
  }
  Coupling c;
  c.nx = nx;
  c.ny = ny;
  c.joint.resize(joint.size());
  for (std::size_t k = 0; k < joint.size(); ++k)
    c.joint[k] = static_cast<double>(joint[k]) / static_cast<double>(m.total);
  return {static_cast<double>(flow) / static_cast<double>(m.total), std::move(c)};
}

namespace {

// Best coupling mass over cliques of the pair-compatibility graph at a fixed
// distortion threshold. Branch and bound; the flow over chosen+available
// pairs bounds every extension.
struct CliqueMassSearch {
  const std::vector<std::pair<int, int>>& pairs;
  const std::vector<std::uint64_t>& adj;
  const ScaledMarginals& m;
  std::int64_t best = 0;

  std::int64_t flow_of(std::uint64_t mask) {
    std::vector<std::pair<int, int>> sel;
    std::uint64_t b = mask;
    while (b) {
      int v = __builtin_ctzll(b);
      b &= b - 1;
      sel.push_back(pairs[static_cast<std::size_t>(v)]);
    }
    if (sel.empty()) return 0;
    return pair_flow(sel, m);
  }

  void run(std::uint64_t chosen, std::uint64_t avail) {
    std::int64_t ub = flow_of(chosen | avail);
    if (ub <= best) return;
    if (!avail) {
      best = ub;
      return;
    }
    int v = __builtin_ctzll(avail);
    std::uint64_t bit = std::uint64_t{1} << v;
    run(chosen | bit, avail & adj[static_cast<std::size_t>(v)] & ~bit);
    run(chosen, avail & ~bit);
  }
};

}  // namespace

double box_distance_exact(const FiniteMmSpace& x, const FiniteMmSpace& y,
                          int pair_budget) {
  const int nx = x.size(), ny = y.size();
  const int np = nx * ny;
  if (np > pair_budget)
    throw resource_limit_error("box_distance_exact: |X|*|Y| exceeds the subset budget (" +
                               std::to_string(pair_budget) + ")");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(np));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) pairs.emplace_back(i, j);
  ScaledMarginals m = scale_marginals(x.weights(), y.weights());

  // order pairs by available mass so the clique search finds heavy sets early
  std::sort(pairs.begin(), pairs.end(), [&](auto a, auto b) {
    return std::min(x.weight(a.first), y.weight(a.second)) >
           std::min(x.weight(b.first), y.weight(b.second));
  });

  std::vector<double> gaps(static_cast<std::size_t>(np) * np, 0.0);
  std::vector<double> cand{0.0};
  for (int p = 0; p < np; ++p)
    for (int q = 0; q < np; ++q) {
      double g = dist_gap(x.dist(pairs[static_cast<std::size_t>(p)].first,
                                 pairs[static_cast<std::size_t>(q)].first),
                          y.dist(pairs[static_cast<std::size_t>(p)].second,
                                 pairs[static_cast<std::size_t>(q)].second));
      gaps[static_cast<std::size_t>(p) * np + q] = g;
      if (p < q && std::isfinite(g)) cand.push_back(g);
    }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  auto mass_defect = [&](double delta) {
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(np), 0);
    for (int p = 0; p < np; ++p)
      for (int q = 0; q < np; ++q)
        if (p != q && gaps[static_cast<std::size_t>(p) * np + q] <= delta)
          adj[static_cast<std::size_t>(p)] |= std::uint64_t{1} << q;
    CliqueMassSearch search{pairs, adj, m, 0};
    std::uint64_t full = (np == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << np) - 1);
    search.run(0, full);
    return static_cast<double>(m.total - search.best) / static_cast<double>(m.total);
  };

  // min over thresholds of max(delta, defect); defect is nonincreasing
  std::size_t lo = 0, hi = cand.size() - 1;
  if (mass_defect(cand[lo]) <= cand[lo]) return cand[lo];
  if (hi == lo) return std::min(1.0, std::max(cand[lo], mass_defect(cand[lo])));
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (mass_defect(cand[mid]) <= cand[mid])
      hi = mid;
    else
      lo = mid;
  }
  double at_hi = std::max(cand[hi], mass_defect(cand[hi]));
  return std::min({mass_defect(cand[lo]), at_hi, 1.0});
}

double box_upper_from_prokhorov(const FiniteMmSpace& space,
                                const std::vector<double>& mu,
                                const std::vector<double>& nu) {
  return 2.0 * prokhorov_flow(space, mu, nu);
}

std::optional<MmIsoCertificate> certify_mm_iso(const std::vector<int>& f,
                                               const FiniteMmSpace& x,
                                               const FiniteMmSpace& y, double eps,
                                               int domain_budget) {
  if (eps < 0.0) throw std::invalid_argument("certify_mm_iso: eps must be >= 0");
  if (static_cast<int>(f.size()) != x.size())
    throw std::invalid_argument("certify_mm_iso: map must be total on X");
  for (int v : f)
    if (v < 0 || v >= y.size())
      throw std::invalid_argument("certify_mm_iso: image index out of range");

  const int n = x.size();
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double gap = dist_gap(x.dist(i, j),
                            y.dist(f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(j)]));
      if (gap > eps + kTolConstruct) {
        adj[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
        adj[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
      }
    }

  MmIsoCertificate cert;
  cert.map = f;
  cert.eps = eps;
  double mass = 0.0;
  std::uint64_t dom = 0;
  if (n <= domain_budget) {
    mass = detail::max_weight_independent_set(adj, x.weights(), &dom);
  } else {
    // greedy domain growth, heaviest point first (flagged heuristic)
    cert.domain_exact = false;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return x.weight(a) > x.weight(b); });
    for (int i : order) {
      bool ok = true;
      std::uint64_t bit = std::uint64_t{1} << i;
      if (adj[static_cast<std::size_t>(i)] & dom) ok = false;
      if (ok) {
        dom |= bit;
        mass += x.weight(i);
      }
    }
  }
  if (mass < 1.0 - eps - kTolConstruct) return std::nullopt;
  for (int i = 0; i < n; ++i)
    if (dom & (std::uint64_t{1} << i)) cert.domain.push_back(i);

  std::vector<double> pushed(static_cast<std::size_t>(y.size()), 0.0);
  for (int i = 0; i < n; ++i)
    pushed[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])] += x.weight(i);
  if (prokhorov_flow(y, y.weights(), pushed) > eps + kTolSearch) return std::nullopt;
  return cert;
}

double certificate_eps_full_domain(const std::vector<int>& f,
                                   const FiniteMmSpace& x,
                                   const FiniteMmSpace& y) {
  double eps = 0.0;
  for (int i = 0; i < x.size(); ++i)
    for (int j = i + 1; j < x.size(); ++j)
      eps = std::max(eps, dist_gap(x.dist(i, j),
                                   y.dist(f[static_cast<std::size_t>(i)],
                                          f[static_cast<std::size_t>(j)])));
  std::vector<double> pushed(static_cast<std::size_t>(y.size()), 0.0);
  for (int i = 0; i < x.size(); ++i)
    pushed[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])] += x.weight(i);
  return std::max(eps, prokhorov_flow(y, y.weights(), pushed));
}

namespace {

bool next_map(std::vector<int>& f, int ny) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (++f[i] < ny) return true;
    f[i] = 0;
  }
  return false;
}

}  // namespace

std::optional<MmIsoCertificate> find_mm_iso(const FiniteMmSpace& x,
                                            const FiniteMmSpace& y, double eps) {
  double maps = std::pow(static_cast<double>(y.size()), x.size());
  if (maps > 2e6)
    throw resource_limit_error("find_mm_iso: |Y|^|X| map space too large");
  std::vector<int> f(static_cast<std::size_t>(x.size()), 0);
  do {
    auto cert = certify_mm_iso(f, x, y, eps);
    if (cert) return cert;
  } while (next_map(f, y.size()));
  return std::nullopt;
}

}  // namespace mms
