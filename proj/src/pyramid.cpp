#include "mms/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mms {

// --- PyramidApprox -----------------------------------------------------------

PyramidApprox PyramidApprox::from_space(FiniteMmSpace x) {
  PyramidApprox p;
  p.kind = Kind::Generators;
  p.generators.push_back(std::move(x));
  p.directed_checked = true;
  return p;
}

PyramidApprox PyramidApprox::from_generators(std::vector<FiniteMmSpace> gens,
                                             bool verify_directed) {
  if (gens.empty())
    throw std::invalid_argument("PyramidApprox: generator list must be nonempty");
  PyramidApprox p;
  p.kind = Kind::Generators;
  p.generators = std::move(gens);
  if (verify_directed) {
    for (std::size_t k = 0; k + 1 < p.generators.size(); ++k) {
      if (p.generators[k].size() > kDefaultDominationBudget ||
          p.generators[k + 1].size() > kDefaultDominationBudget)
        throw resource_limit_error(
            "PyramidApprox: generators too large for the directedness check");
      if (!lipschitz_dominates(p.generators[k + 1], p.generators[k]))
        throw std::invalid_argument(
            "PyramidApprox: generator list is not a domination chain");
    }
    p.directed_checked = true;
  }
  return p;
}

PyramidApprox PyramidApprox::from_atoms(WeightVector a) {
  if (a.mode != WeightVector::Mode::A)
    throw std::invalid_argument("PyramidApprox: atoms must be a mode-A vector");
  PyramidApprox p;
  p.kind = Kind::Atoms;
  p.atoms = std::move(a);
  return p;
}

const FiniteMmSpace& PyramidApprox::top() const {
  if (kind != Kind::Generators || generators.empty())
    throw std::invalid_argument("PyramidApprox: no generators");
  return generators.back();
}

// --- decomposition -----------------------------------------------------------

namespace {

// Canonical relabeling key: per position, the point weight followed by its
// distances to the already-placed points. Minimizing it lexicographically
// gives a relabeling-invariant representative.
struct CanonicalSearch {
  const FiniteMmSpace& x;
  std::vector<int> best;
  std::vector<double> best_key;
  std::vector<int> cur;
  std::vector<bool> used;
  std::vector<double> key;

  // tight: the key built so far equals the incumbent's prefix, so the
  // incumbent still prunes this branch.
  void run(std::size_t pos, bool tight) {
    const int n = x.size();
    if (pos == static_cast<std::size_t>(n)) {
      if (best.empty() || key < best_key) {
        best = cur;
        best_key = key;
      }
      return;
    }
    // candidates minimizing the next key block; only minimal blocks can lead
    // to the lexicographic minimum
    std::vector<double> best_block;
    std::vector<int> cands;
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      std::vector<double> block{x.weight(c)};
      for (std::size_t q = 0; q < pos; ++q) block.push_back(x.dist(c, cur[q]));
      if (cands.empty() || block < best_block) {
        best_block = block;
        cands = {c};
      } else if (block == best_block) {
        cands.push_back(c);
      }
    }
    std::size_t at = key.size();
    if (tight && !best.empty()) {
      for (std::size_t i = 0; i < best_block.size(); ++i) {
        double inc = best_key[at + i];
        if (best_block[i] > inc) return;  // worse than the incumbent
        if (best_block[i] < inc) {
          tight = false;
          break;
        }
      }
    }
    for (int c : cands) {
      used[static_cast<std::size_t>(c)] = true;
      cur.push_back(c);
      key.insert(key.end(), best_block.begin(), best_block.end());
      run(pos + 1, tight);
      key.resize(at);
      cur.pop_back();
      used[static_cast<std::size_t>(c)] = false;
    }
  }
};

std::pair<std::vector<int>, std::vector<double>> canonical_order(const FiniteMmSpace& x) {
  CanonicalSearch s{x, {}, {}, {}, std::vector<bool>(static_cast<std::size_t>(x.size()), false), {}};
  s.run(0, true);
  return {s.best, s.best_key};
}

FiniteMmSpace relabel(const FiniteMmSpace& x, const std::vector<int>& order) {
  std::vector<std::string> labels;
  std::vector<double> w, d;
  for (int i : order) {
    labels.push_back(x.label(i));
    w.push_back(x.weight(i));
  }
  for (int i : order)
    for (int j : order) d.push_back(x.dist(i, j));
  return FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
}

}  // namespace

DecompositionResult decompose_extended(const ExtendedMmSpace& z) {
  auto comps = z.finite_components();
  struct Item {
    double mass;
    FiniteMmSpace part;
    std::vector<double> key;
  };
  std::vector<Item> items;
  for (const auto& comp : comps) {
    // permutation-stable mass: sum the sorted member weights
    std::vector<double> ws;
    for (int i : comp) ws.push_back(z.weight(i));
    std::sort(ws.begin(), ws.end());
    double mass = std::accumulate(ws.begin(), ws.end(), 0.0);
    std::vector<std::string> labels;
    std::vector<double> w, d;
    for (int i : comp) {
      labels.push_back(z.label(i));
      w.push_back(z.weight(i) / mass);
    }
    for (int i : comp)
      for (int j : comp) d.push_back(z.dist(i, j));
    FiniteMmSpace part = FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
    auto [order, key] = canonical_order(part);
    items.push_back({mass, relabel(part, order), std::move(key)});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.key < b.key;
  });
  DecompositionResult out;
  std::vector<double> weights;
  for (auto& it : items) {
    weights.push_back(it.mass);
    out.parts.push_back(std::move(it.part));
  }
  out.weights = WeightVector(std::move(weights), WeightVector::Mode::A1);
  return out;
}

bool ext_mm_isomorphic(const ExtendedMmSpace& a, const ExtendedMmSpace& b) {
  DecompositionResult da = decompose_extended(a);
  DecompositionResult db = decompose_extended(b);
  if (da.parts.size() != db.parts.size()) return false;
  const std::size_t n = da.parts.size();
  // backtracking matching over weight-compatible, isomorphic part pairs
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> match = [&](std::size_t i) {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (std::abs(da.weights.entries[i] - db.weights.entries[j]) > kTolSearch) continue;
      if (da.parts[i].size() != db.parts[j].size()) continue;
      if (!mm_isomorphic(da.parts[i], db.parts[j], 12)) continue;
      used[j] = true;
      if (match(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return match(0);
}

// --- direct sums of pyramids -------------------------------------------------

PyramidApprox direct_sum_pyramids(const std::vector<PyramidApprox>& parts,
                                  const WeightVector& a, std::size_t depth) {
  if (a.mode != WeightVector::Mode::A1)
    throw std::invalid_argument("direct_sum_pyramids: weights must be a mode-A1 vector");
  if (parts.size() != a.size())
    throw std::invalid_argument("direct_sum_pyramids: parts/weights length mismatch");
  if (depth == 0) {
    depth = 2;
    for (const auto& p : parts)
      if (p.kind == PyramidApprox::Kind::Generators)
        depth = std::max(depth, p.generators.size());
  }

  auto part_generator = [&](const PyramidApprox& p, std::size_t k) {
    if (p.kind == PyramidApprox::Kind::Atoms)
      return atoms_generator(p.atoms, static_cast<int>(k + 1));
    std::size_t idx = std::min(k, p.generators.size() - 1);
    return p.generators[idx];
  };

  std::vector<FiniteMmSpace> gens;
  std::vector<FiniteMmSpace> top_parts;
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<PointedSpace> pointed;
    for (const auto& p : parts) pointed.emplace_back(part_generator(p, k), 0);
    double gap = static_cast<double>(k + 1);
    gens.push_back(gapped_sum(pointed, a, gap));
    if (k + 1 == depth)
      for (auto& ps : pointed) top_parts.push_back(std::move(ps.space));
  }
  PyramidApprox out = PyramidApprox::from_generators(std::move(gens));
  out.directed_checked =
      std::all_of(parts.begin(), parts.end(),
                  [](const PyramidApprox& p) {
                    return p.kind == PyramidApprox::Kind::Atoms || p.directed_checked;
                  });
  auto sum = std::make_shared<PyramidApprox::SumInfo>();
  sum->parts = parts;
  sum->weights = a;
  out.sum = std::move(sum);
  auto gap = std::make_shared<PyramidApprox::GapInfo>();
  gap->parts = std::move(top_parts);
  gap->weights = a;
  gap->gap = static_cast<double>(depth);
  out.gapped = std::move(gap);
  return out;
}

// --- measurements ------------------------------------------------------------

namespace {

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Collapse duplicate image points.
SampledMeasure compress(SampledMeasure m) {
  SampledMeasure out;
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < out.points.size() && !found; ++j)
      if (out.points[j] == m.points[i]) {
        out.mass[j] += m.mass[i];
        found = true;
      }
    if (!found) {
      out.points.push_back(std::move(m.points[i]));
      out.mass.push_back(m.mass[i]);
    }
  }
  return out;
}

void verify_map(const FiniteMmSpace& x, const std::vector<std::vector<double>>& img,
                double radius) {
  for (int i = 0; i < x.size(); ++i)
    for (double c : img[static_cast<std::size_t>(i)])
      if (std::abs(c) > radius + kTolConstruct)
        throw std::logic_error("measurement map leaves the l-inf ball");
  for (int i = 0; i < x.size(); ++i)
    for (int j = i + 1; j < x.size(); ++j)
      if (linf(img[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(j)]) >
          x.dist(i, j) + kTolConstruct)
        throw std::logic_error("measurement map is not 1-Lipschitz");
}

double clip(double v, double r) { return std::min(r, std::max(-r, v)); }

}  // namespace

SampledMeasure make_sampled(const std::vector<std::vector<double>>& image,
                            const std::vector<double>& mass) {
  SampledMeasure m;
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    m.points.push_back(image[i]);
    m.mass.push_back(mass[i]);
  }
  return compress(std::move(m));
}

double sampled_prokhorov(const SampledMeasure& a, const SampledMeasure& b) {
  // union carrier with the l-inf metric
  std::vector<std::vector<double>> pts = a.points;
  pts.insert(pts.end(), b.points.begin(), b.points.end());
  int n = static_cast<int>(pts.size());
  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dist[static_cast<std::size_t>(i) * n + j] =
          linf(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
  std::vector<double> mu(static_cast<std::size_t>(n), 0.0), nu(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < a.points.size(); ++i) mu[i] = a.mass[i];
  for (std::size_t j = 0; j < b.points.size(); ++j) nu[a.points.size() + j] = b.mass[j];
  return prokhorov_flow_matrix(n, dist, mu, nu);
}

std::vector<std::vector<std::vector<double>>> measurement_maps(
    const FiniteMmSpace& x, int n_dim, double radius, int budget, std::uint64_t seed) {
  if (n_dim < 1) throw std::invalid_argument("measurement_maps: dimension must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("measurement_maps: radius must be positive");
  if (budget < 3)
    throw std::invalid_argument("measurement_maps: budget below the canonical map count");
  const int n = x.size();
  std::vector<std::vector<std::vector<double>>> maps;
  auto emit = [&](std::vector<std::vector<double>> img) {
    verify_map(x, img, radius);
    maps.push_back(std::move(img));
  };
  // constant map: the Dirac measure at the origin
  emit(std::vector<std::vector<double>>(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n_dim), 0.0)));
  // canonical anchor coordinates, shifts 0 and R
  for (int a = 0; a < n && static_cast<int>(maps.size()) + 2 <= budget; ++a) {
    for (double shift : {0.0, radius}) {
      std::vector<std::vector<double>> img(
          static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n_dim)));
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < n_dim; ++c)
          img[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
              clip(x.dist(i, a) - shift, radius);
      emit(std::move(img));
    }
  }
  // seeded random McShane maps, coordinatewise
  Rng rng = Rng(seed).fork(0x3a9);
  while (static_cast<int>(maps.size()) < budget) {
    std::vector<std::vector<double>> img(
        static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n_dim)));
    for (int c = 0; c < n_dim; ++c) {
      int anchors = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(std::min(n, 4))));
      std::vector<std::pair<int, double>> seed_vals;
      for (int a = 0; a < anchors; ++a)
        seed_vals.emplace_back(static_cast<int>(rng.index(static_cast<std::size_t>(n))),
                               rng.uniform(-radius, radius));
      for (int i = 0; i < n; ++i) {
        double v = kInf;
        for (auto [pt, val] : seed_vals) v = std::min(v, val + x.dist(i, pt));
        img[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = clip(v, radius);
      }
    }
    emit(std::move(img));
  }
  return maps;
}

MeasurementSample measurement_sample(const PyramidApprox& p, int n_dim, double radius,
                                     int budget, std::uint64_t seed) {
  std::vector<FiniteMmSpace> gens;
  if (p.kind == PyramidApprox::Kind::Atoms) {
    // expand so that distinct atoms land 2R apart in the cube
    int level = std::max(1, static_cast<int>(std::ceil(2.0 * radius)) + 1);
    gens.push_back(atoms_generator(p.atoms, level));
  } else {
    gens = p.generators;
  }
  MeasurementSample sample;
  sample.dim = n_dim;
  sample.radius = radius;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const FiniteMmSpace& x = gens[g];
    for (const auto& img : measurement_maps(x, n_dim, radius, budget, seed + g))
      sample.measures.push_back(make_sampled(img, x.weights()));
  }
  return sample;
}

// --- rho ----------------------------------------------------------------------

namespace {

double tail_sum(const WeightVector& w, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < w.size(); ++i) s += w.entries[i];
  return s;
}

}  // namespace

std::optional<double> rho_upper(const PyramidApprox& p, const PyramidApprox& q,
                                int pair_budget) {
  double best = kInf;
  // atoms vs atoms
  if (p.kind == PyramidApprox::Kind::Atoms && q.kind == PyramidApprox::Kind::Atoms)
    best = std::min(best, weight_distance_l1(p.atoms, q.atoms));
  // box between top generators
  if (p.kind == PyramidApprox::Kind::Generators &&
      q.kind == PyramidApprox::Kind::Generators) {
    if (p.top().size() * q.top().size() <= pair_budget)
      best = std::min(best, box_distance_exact(p.top(), q.top(), pair_budget));
  }
  // sum vs sum
  if (p.sum && q.sum) {
    const auto& ps = *p.sum;
    const auto& qs = *q.sum;
    std::size_t m_max = std::min(ps.parts.size(), qs.parts.size());
    for (std::size_t m = 1; m <= m_max; ++m) {
      double acc = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        auto r = rho_upper(ps.parts[i], qs.parts[i], pair_budget);
        if (!r)
          ok = false;
        else
          acc += *r;
      }
      if (!ok) continue;
      double bound = acc + 0.5 * weight_distance_l1(ps.weights, qs.weights) +
                     0.5 * tail_sum(ps.weights, m) + 0.5 * tail_sum(qs.weights, m);
      best = std::min(best, bound);
    }
  }
  // gapped generator vs sum (and symmetrically)
  auto gapped_rule = [&](const PyramidApprox& gen, const PyramidApprox& sum_side) {
    if (!gen.gapped || !sum_side.sum) return;
    const auto& gi = *gen.gapped;
    const auto& qs = *sum_side.sum;
    std::size_t m_max = std::min(gi.parts.size(), qs.parts.size());
    for (std::size_t m = 1; m <= m_max; ++m) {
      double acc = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        auto r = rho_upper(PyramidApprox::from_space(gi.parts[i]), qs.parts[i], pair_budget);
        if (!r)
          ok = false;
        else
          acc += *r;
      }
      if (!ok) continue;
      double bound = acc + 0.5 * weight_distance_l1(gi.weights, qs.weights) +
                     0.5 * tail_sum(gi.weights, m) + 0.5 * tail_sum(qs.weights, m) +
                     std::exp2(-gi.gap / 2.0);
      best = std::min(best, bound);
    }
  };
  gapped_rule(p, q);
  gapped_rule(q, p);

  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

double rho_empirical(const PyramidApprox& p, const PyramidApprox& q, int n_max,
                     int budget, std::uint64_t seed) {
  if (n_max < 1) throw std::invalid_argument("rho_empirical: need at least one level");
  double acc = 0.0;
  for (int level = 1; level <= n_max; ++level) {
    std::uint64_t level_seed = seed * 1000003ULL + static_cast<std::uint64_t>(level);
    MeasurementSample sp =
        measurement_sample(p, level, static_cast<double>(level), budget, level_seed);
    MeasurementSample sq =
        measurement_sample(q, level, static_cast<double>(level), budget, level_seed);
    auto directed = [](const MeasurementSample& a, const MeasurementSample& b) {
      double h = 0.0;
      for (const auto& ma : a.measures) {
        double nearest = kInf;
        for (const auto& mb : b.measures)
          nearest = std::min(nearest, sampled_prokhorov(ma, mb));
        h = std::max(h, nearest);
      }
      return h;
    };
    double hausdorff = std::max(directed(sp, sq), directed(sq, sp));
    acc += std::exp2(-level) / (2.0 * level) * hausdorff;
  }
  return acc;
}

// --- atoms limit ---------------------------------------------------------------

namespace {

// Single-linkage cluster masses of the scaled generator at radius sqrt(t),
// sorted nonincreasing.
std::vector<double> cluster_masses(const FiniteMmSpace& x, double t) {
  const int n = x.size();
  double radius = std::sqrt(t);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (t * x.dist(i, j) <= radius) parent[static_cast<std::size_t>(find(i))] = find(j);
  std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) mass[static_cast<std::size_t>(find(i))] += x.weight(i);
  std::vector<double> out;
  for (double m : mass)
    if (m > 0.0) out.push_back(m);
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double l1_between(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    s += std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0));
  return s;
}

}  // namespace

WeightVector atoms_limit_of_scaling(const PyramidApprox& p,
                                    const std::vector<double>& t_grid,
                                    double tol) {
  if (p.kind != PyramidApprox::Kind::Generators)
    throw std::invalid_argument("atoms_limit_of_scaling: needs a generator list");
  if (t_grid.size() < 2)
    throw std::invalid_argument("atoms_limit_of_scaling: grid needs at least two scales");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i + 1] && t_grid[i + 1] > 0.0))
      throw std::invalid_argument("atoms_limit_of_scaling: grid must be positive descending");

  // Only the largest two generators inform the limit; smaller ones may sit
  // in a partially merged clustering window.
  std::vector<FiniteMmSpace> examined;
  if (p.generators.size() >= 2) examined.push_back(p.generators[p.generators.size() - 2]);
  examined.push_back(p.generators.back());

  // per-generator vector at the smallest scale, with grid stabilization
  std::vector<std::vector<double>> per_gen;
  for (const auto& g : examined) {
    std::vector<double> prev = cluster_masses(g, t_grid[t_grid.size() - 2]);
    std::vector<double> last = cluster_masses(g, t_grid.back());
    double drift = l1_between(prev, last);
    if (drift > tol) {
      std::ostringstream msg;
      msg << "atoms_limit_of_scaling: grid did not stabilize (l1 drift " << drift
          << " between t=" << t_grid[t_grid.size() - 2] << " and t=" << t_grid.back()
          << "); refine the grid";
      throw std::runtime_error(msg.str());
    }
    per_gen.push_back(std::move(last));
  }

  std::vector<double> result;
  if (per_gen.size() == 1) {
    result = per_gen[0];
  } else {
    // entries decaying across the generator sequence belong to the
    // dissipating part and are dropped; surviving entries are the atoms
    const std::vector<double>& prev = per_gen[per_gen.size() - 2];
    const std::vector<double>& last = per_gen.back();
    for (std::size_t i = 0; i < last.size(); ++i) {
      if (i >= prev.size()) break;
      if (last[i] < 0.75 * prev[i]) break;
      result.push_back(last[i]);
    }
    // surviving prefix must agree across the two largest generators
    double drift = 0.0;
    for (std::size_t i = 0; i < result.size(); ++i) drift += std::abs(result[i] - prev[i]);
    if (drift > tol) {
      std::ostringstream msg;
      msg << "atoms_limit_of_scaling: surviving atoms drift " << drift
          << " across generators; sequence not yet converged";
      throw std::runtime_error(msg.str());
    }
  }
  return WeightVector(std::move(result), WeightVector::Mode::A);
}

// --- pyramid invariants ---------------------------------------------------------

double sep_of_pyramid(const PyramidApprox& p, const std::vector<double>& kappas) {
  if (p.kind != PyramidApprox::Kind::Generators)
    throw std::invalid_argument("sep_of_pyramid: needs a generator list");
  double best = 0.0;
  for (const auto& g : p.generators)
    best = std::max(best, separation_distance(g, kappas));
  return best;
}

CertifiedInterval obsdiam_of_pyramid(const PyramidApprox& p, double kappa,
                                     std::uint64_t seed) {
  if (p.kind != PyramidApprox::Kind::Generators)
    throw std::invalid_argument("obsdiam_of_pyramid: needs a generator list");
  CertifiedInterval out;
  bool first = true;
  for (const auto& g : p.generators) {
    CertifiedInterval c = obs_diameter(g, kappa, seed);
    if (first || c.lower > out.lower) {
      out.lower = c.lower;
      out.lower_witness = c.lower_witness;
    }
    if (first || c.upper > out.upper) {
      out.upper = c.upper;
      out.upper_witness = c.upper_witness;
    }
    first = false;
  }
  return out;
}

PyramidCover cov_of_pyramid(const PyramidApprox& p, double r, double kappa) {
  if (p.kind != PyramidApprox::Kind::Generators)
    throw std::invalid_argument("cov_of_pyramid: needs a generator list");
  PyramidCover out;
  int first_value = -1;
  for (const auto& g : p.generators) {
    int v = covering_number(g, r, kappa).count;
    if (first_value < 0) first_value = v;
    out.value = std::max(out.value, v);
  }
  out.diverging = p.generators.size() >= 2 &&
                  covering_number(p.generators.back(), r, kappa).count > first_value;
  return out;
}

}  // namespace mms
