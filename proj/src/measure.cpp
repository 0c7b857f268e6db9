#include "mms/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mms/detail/flow.hpp"

namespace mms {

namespace {

void check_probability(const std::vector<double>& m) {
  double sum = 0.0;
  for (double v : m) {
    if (std::isnan(v) || v < 0.0)
      throw std::invalid_argument("measure entries must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kTolConstruct)
    throw std::invalid_argument("measure must have total mass one");
}

bool same_space(const MeasureOnSpace& a, const MeasureOnSpace& b) {
  if (a.space == b.space) return true;
  if (!a.space || !b.space) return false;
  return a.space->size() == b.space->size() &&
         a.space->dist_matrix() == b.space->dist_matrix();
}

}  // namespace

MeasureOnSpace::MeasureOnSpace(std::shared_ptr<const FiniteMmSpace> s,
                               std::vector<double> m)
    : space(std::move(s)), mass(std::move(m)) {
  if (!space) throw std::invalid_argument("measure needs a carrier space");
  if (static_cast<int>(mass.size()) != space->size())
    throw std::invalid_argument("measure size does not match the carrier");
  check_probability(mass);
}

bool Coupling::has_marginals(const std::vector<double>& mu,
                             const std::vector<double>& nu, double tol) const {
  for (int i = 0; i < nx; ++i) {
    double row = 0.0;
    for (int j = 0; j < ny; ++j) row += at(i, j);
    if (std::abs(row - mu[static_cast<std::size_t>(i)]) > tol) return false;
  }
  for (int j = 0; j < ny; ++j) {
    double col = 0.0;
    for (int i = 0; i < nx; ++i) col += at(i, j);
    if (std::abs(col - nu[static_cast<std::size_t>(j)]) > tol) return false;
  }
  return true;
}

MeasureOnSpace convex_combination(const WeightVector& a,
                                  const std::vector<MeasureOnSpace>& measures) {
  if (a.mode != WeightVector::Mode::A1)
    throw std::invalid_argument("convex_combination: weights must be a mode-A1 vector");
  if (a.size() != measures.size())
    throw std::invalid_argument("convex_combination: weights/measures length mismatch");
  for (std::size_t i = 1; i < measures.size(); ++i)
    if (!same_space(measures[0], measures[i]))
      throw std::invalid_argument("convex_combination: measures live on different spaces");
  std::vector<double> out(measures[0].mass.size(), 0.0);
  for (std::size_t k = 0; k < measures.size(); ++k)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += a.entries[k] * measures[k].mass[i];
  // renormalize rounding drift below the construction tolerance
  double sum = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= sum;
  return MeasureOnSpace(measures[0].space, std::move(out));
}

MeasureOnSpace pushforward(const MeasureOnSpace& mu, const std::vector<int>& f,
                           std::shared_ptr<const FiniteMmSpace> target) {
  if (!target) throw std::invalid_argument("pushforward: missing target space");
  if (static_cast<int>(f.size()) != mu.space->size())
    throw std::invalid_argument("pushforward: map must be total on the source");
  std::vector<double> out(static_cast<std::size_t>(target->size()), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    int j = f[i];
    if (j < 0 || j >= target->size())
      throw std::invalid_argument("pushforward: image index out of range");
    out[static_cast<std::size_t>(j)] += mu.mass[i];
  }
  return MeasureOnSpace(std::move(target), std::move(out));
}

double total_variation(const std::vector<double>& mu,
                       const std::vector<double>& nu) {
  if (mu.size() != nu.size())
    throw std::invalid_argument("total_variation: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) sum += std::abs(mu[i] - nu[i]);
  return 0.5 * sum;
}

double total_variation(const MeasureOnSpace& mu, const MeasureOnSpace& nu) {
  if (!same_space(mu, nu))
    throw std::invalid_argument("total_variation: measures live on different spaces");
  return total_variation(mu.mass, nu.mass);
}

double prokhorov_subset_oracle(const FiniteMmSpace& space,
                               const std::vector<double>& mu,
                               const std::vector<double>& nu, int budget) {
  const int n = space.size();
  if (n > budget)
    throw resource_limit_error(
        "prokhorov_subset_oracle: point count exceeds the subset-scan budget (" +
        std::to_string(budget) + ")");
  if (static_cast<int>(mu.size()) != n || static_cast<int>(nu.size()) != n)
    throw std::invalid_argument("prokhorov_subset_oracle: size mismatch");

  double best = 0.0;  // d_P = max over subsets A of the per-subset threshold
  std::vector<double> da(static_cast<std::size_t>(n));
  std::vector<std::pair<double, double>> steps;  // (threshold, mass at <= threshold)
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double nu_a = 0.0;
    for (int i = 0; i < n; ++i) {
      double m = kInf;
      if (mask & (1u << i)) nu_a += nu[static_cast<std::size_t>(i)];
      for (int a = 0; a < n; ++a)
        if (mask & (1u << a)) m = std::min(m, space.dist(i, a));
      da[static_cast<std::size_t>(i)] = m;
    }
    // break points of mu(U_eps(A)): cumulative mass at each distinct d(x, A)
    steps.clear();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int p, int q) {
      return da[static_cast<std::size_t>(p)] < da[static_cast<std::size_t>(q)];
    });
    double acc = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      acc += mu[static_cast<std::size_t>(order[k])];
      if (k + 1 < order.size() &&
          da[static_cast<std::size_t>(order[k + 1])] ==
              da[static_cast<std::size_t>(order[k])])
        continue;
      steps.emplace_back(da[static_cast<std::size_t>(order[k])], acc);
    }
    double eps_a = kInf;
    for (auto [t, m] : steps) {
      double need = nu_a - m;
      eps_a = std::min(eps_a, need > t ? need : t);
    }
    best = std::max(best, eps_a);
  }
  return best;
}

namespace {

constexpr double kMassScale = 1e12;

struct IntMasses {
  std::vector<std::int64_t> mu, nu;
  std::int64_t total = 0;
};

IntMasses quantize(const std::vector<double>& mu, const std::vector<double>& nu) {
  IntMasses out;
  out.mu.reserve(mu.size());
  out.nu.reserve(nu.size());
  std::int64_t tm = 0, tn = 0;
  for (double v : mu) {
    out.mu.push_back(std::llround(v * kMassScale));
    tm += out.mu.back();
  }
  for (double v : nu) {
    out.nu.push_back(std::llround(v * kMassScale));
    tn += out.nu.back();
  }
  // absorb rounding drift into the heaviest atom so the totals agree
  std::int64_t t = std::max(tm, tn);
  auto fix = [&](std::vector<std::int64_t>& m, std::int64_t have) {
    if (have == t) return;
    auto it = std::max_element(m.begin(), m.end());
    *it += t - have;
  };
  fix(out.mu, tm);
  fix(out.nu, tn);
  out.total = t;
  return out;
}

// Max transportable mass along pairs with dist <= t.
std::int64_t transport_flow(int n, const std::vector<double>& dist,
                            const IntMasses& m, double t) {
  detail::Dinic dinic(2 * n + 2);
  int source = 2 * n, sink = 2 * n + 1;
  for (int i = 0; i < n; ++i) {
    if (m.mu[static_cast<std::size_t>(i)] > 0)
      dinic.add_edge(source, i, m.mu[static_cast<std::size_t>(i)]);
    if (m.nu[static_cast<std::size_t>(i)] > 0)
      dinic.add_edge(n + i, sink, m.nu[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < n; ++i) {
    if (m.mu[static_cast<std::size_t>(i)] <= 0) continue;
    for (int j = 0; j < n; ++j) {
      if (m.nu[static_cast<std::size_t>(j)] <= 0) continue;
      if (dist[static_cast<std::size_t>(i) * n + j] <= t)
        dinic.add_edge(i, n + j, std::int64_t{1} << 61);
    }
  }
  return dinic.max_flow(source, sink);
}

}  // namespace

double prokhorov_flow_matrix(int n, const std::vector<double>& dist,
                             const std::vector<double>& mu,
                             const std::vector<double>& nu) {
  if (static_cast<int>(mu.size()) != n || static_cast<int>(nu.size()) != n)
    throw std::invalid_argument("prokhorov_flow: size mismatch");
  IntMasses m = quantize(mu, nu);
  std::vector<double> cand = dist;
  cand.push_back(0.0);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  auto gap = [&](std::size_t k) {
    std::int64_t f = transport_flow(n, dist, m, cand[k]);
    return static_cast<double>(m.total - f) / static_cast<double>(m.total);
  };

  // d_P = min_k max(t_k, gap_k); gap is nonincreasing, t increasing, so the
  // minimum sits at the first k with gap_k <= t_k.
  std::size_t lo = 0, hi = cand.size() - 1;
  if (gap(lo) <= cand[lo]) return cand[lo];
  if (hi == lo) return gap(lo);
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (gap(mid) <= cand[mid])
      hi = mid;
    else
      lo = mid;
  }
  return std::min(gap(lo), cand[hi]);
}

double prokhorov_flow(const FiniteMmSpace& space, const std::vector<double>& mu,
                      const std::vector<double>& nu) {
  return prokhorov_flow_matrix(space.size(), space.dist_matrix(), mu, nu);
}

double prokhorov(const MeasureOnSpace& mu, const MeasureOnSpace& nu) {
  if (!same_space(mu, nu))
    throw std::invalid_argument("prokhorov: measures live on different spaces");
  return prokhorov_flow(*mu.space, mu.mass, nu.mass);
}

}  // namespace mms
