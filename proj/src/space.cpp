#include "mms/space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <tuple>

#include "mms/detail/combsearch.hpp"
#include "mms/measure.hpp"

namespace mms {

namespace {

std::vector<std::string> default_labels(int n, const char* prefix) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void validate_metric(const std::vector<double>& d, int n, bool allow_inf) {
  if (static_cast<int>(d.size()) != n * n)
    throw std::invalid_argument("distance matrix size does not match point count");
  auto at = [&](int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) throw std::invalid_argument("nonzero diagonal in distance matrix");
    for (int j = 0; j < n; ++j) {
      double v = at(i, j);
      if (std::isnan(v) || v < 0.0)
        throw std::invalid_argument("distances must be nonnegative");
      if (!allow_inf && std::isinf(v))
        throw std::invalid_argument("infinite distance in a finite mm-space");
      if (std::abs(at(i, j) - at(j, i)) > kTolConstruct &&
          !(std::isinf(at(i, j)) && std::isinf(at(j, i))))
        throw std::invalid_argument("distance matrix is not symmetric");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        // a + inf = inf, so the check saturates correctly on extended spaces.
        if (at(i, k) > at(i, j) + at(j, k) + kTolConstruct)
          throw std::invalid_argument("triangle inequality violated");
      }
}

void validate_weights(const std::vector<double>& w, int n) {
  if (static_cast<int>(w.size()) != n)
    throw std::invalid_argument("weight vector size does not match point count");
  double sum = 0.0;
  for (double v : w) {
    if (!(v > 0.0)) throw std::invalid_argument("weights must be strictly positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kTolConstruct)
    throw std::invalid_argument("weights must sum to one");
}

}  // namespace

// --- WeightVector -----------------------------------------------------------

WeightVector::WeightVector(std::vector<double> e, Mode m)
    : entries(std::move(e)), mode(m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    double v = entries[i];
    if (!(v > 0.0) || v > 1.0 + kTolConstruct)
      throw std::invalid_argument("weight entries must lie in (0, 1]");
    if (mode == Mode::A && i + 1 < entries.size() && entries[i + 1] > v + kTolConstruct)
      throw std::invalid_argument("mode-A weight vector must be nonincreasing");
    sum += v;
  }
  if (mode == Mode::A1) {
    if (entries.empty() || std::abs(sum - 1.0) > kTolConstruct)
      throw std::invalid_argument("mode-A1 weight vector must sum to one");
  } else {
    if (sum > 1.0 + kTolConstruct)
      throw std::invalid_argument("mode-A weight vector must sum to at most one");
  }
}

double WeightVector::norm1() const {
  return std::accumulate(entries.begin(), entries.end(), 0.0);
}

WeightVector WeightVector::sorted_desc() const {
  std::vector<double> e = entries;
  std::sort(e.begin(), e.end(), std::greater<double>());
  WeightVector out;
  out.entries = std::move(e);
  out.mode = Mode::A;
  return out;
}

double weight_distance_l1(const WeightVector& a, const WeightVector& b) {
  std::size_t n = std::max(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double av = i < a.size() ? a.entries[i] : 0.0;
    double bv = i < b.size() ? b.entries[i] : 0.0;
    sum += std::abs(av - bv);
  }
  return sum;
}

WeightVector merge_weighted(const WeightVector& a,
                            const std::vector<WeightVector>& bs) {
  if (a.size() != bs.size())
    throw std::invalid_argument("merge_weighted: length mismatch");
  std::vector<double> products;
  for (std::size_t n = 0; n < a.size(); ++n)
    for (double b : bs[n].entries) products.push_back(a.entries[n] * b);
  std::sort(products.begin(), products.end(), std::greater<double>());
  WeightVector out;
  out.entries = std::move(products);
  out.mode = WeightVector::Mode::A;
  return out;
}

// --- FiniteMmSpace / ExtendedMmSpace ---------------------------------------

FiniteMmSpace FiniteMmSpace::create(std::vector<std::string> labels,
                                    std::vector<double> dist,
                                    std::vector<double> weight) {
  int n = static_cast<int>(labels.size());
  if (n == 0) throw std::invalid_argument("mm-space needs at least one point");
  validate_metric(dist, n, /*allow_inf=*/false);
  validate_weights(weight, n);
  FiniteMmSpace x;
  x.n_ = n;
  x.labels_ = std::move(labels);
  x.dist_ = std::move(dist);
  x.weight_ = std::move(weight);
  return x;
}

FiniteMmSpace FiniteMmSpace::create_pruned(std::vector<std::string> labels,
                                           std::vector<double> dist,
                                           std::vector<double> weight) {
  int n = static_cast<int>(labels.size());
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (i < static_cast<int>(weight.size()) && weight[static_cast<std::size_t>(i)] > 0.0)
      keep.push_back(i);
  if (static_cast<int>(keep.size()) == n)
    return create(std::move(labels), std::move(dist), std::move(weight));
  std::vector<std::string> l2;
  std::vector<double> w2, d2;
  for (int i : keep) {
    l2.push_back(labels[static_cast<std::size_t>(i)]);
    w2.push_back(weight[static_cast<std::size_t>(i)]);
  }
  for (int i : keep)
    for (int j : keep) d2.push_back(dist[static_cast<std::size_t>(i) * n + j]);
  return create(std::move(l2), std::move(d2), std::move(w2));
}

double FiniteMmSpace::diameter() const {
  double m = 0.0;
  for (double v : dist_) m = std::max(m, v);
  return m;
}

std::vector<double> FiniteMmSpace::distance_values() const {
  std::vector<double> v = dist_;
  v.push_back(0.0);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

ExtendedMmSpace ExtendedMmSpace::create(std::vector<std::string> labels,
                                        std::vector<double> dist,
                                        std::vector<double> weight) {
  int n = static_cast<int>(labels.size());
  if (n == 0) throw std::invalid_argument("mm-space needs at least one point");
  validate_metric(dist, n, /*allow_inf=*/true);
  validate_weights(weight, n);
  ExtendedMmSpace x;
  x.n_ = n;
  x.labels_ = std::move(labels);
  x.dist_ = std::move(dist);
  x.weight_ = std::move(weight);
  return x;
}

ExtendedMmSpace ExtendedMmSpace::from_finite(const FiniteMmSpace& f) {
  ExtendedMmSpace x;
  x.n_ = f.n_;
  x.labels_ = f.labels_;
  x.dist_ = f.dist_;
  x.weight_ = f.weight_;
  return x;
}

bool ExtendedMmSpace::all_finite() const {
  for (double v : dist_)
    if (std::isinf(v)) return false;
  return true;
}

FiniteMmSpace ExtendedMmSpace::as_finite() const {
  if (!all_finite())
    throw std::invalid_argument("extended mm-space has infinite distances");
  return FiniteMmSpace::create(labels_, dist_, weight_);
}

std::vector<std::vector<int>> ExtendedMmSpace::finite_components() const {
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> rank(static_cast<std::size_t>(n_), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!std::isinf(dist(i, j))) {
        int a = find(i), b = find(j);
        if (a != b) {
          if (rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]) std::swap(a, b);
          parent[static_cast<std::size_t>(b)] = a;
          if (rank[static_cast<std::size_t>(a)] == rank[static_cast<std::size_t>(b)]) rank[static_cast<std::size_t>(a)]++;
        }
      }
  std::vector<std::vector<int>> comps;
  std::vector<int> where(static_cast<std::size_t>(n_), -1);
  for (int i = 0; i < n_; ++i) {
    int r = find(i);
    if (where[static_cast<std::size_t>(r)] < 0) {
      where[static_cast<std::size_t>(r)] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(where[static_cast<std::size_t>(r)])].push_back(i);
  }
  return comps;
}

PointedSpace::PointedSpace(FiniteMmSpace s, int b) : space(std::move(s)), base(b) {
  if (base < 0 || base >= space.size())
    throw std::invalid_argument("base point index out of range");
}

// --- constructions ----------------------------------------------------------

FiniteMmSpace one_point_space() {
  return FiniteMmSpace::create({"pt"}, {0.0}, {1.0});
}

FiniteMmSpace two_point_space(double length, double p) {
  if (!(length > 0.0)) throw std::invalid_argument("two_point_space: length must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two_point_space: p must lie in (0,1)");
  return FiniteMmSpace::create({"a", "b"}, {0.0, length, length, 0.0}, {p, 1.0 - p});
}

FiniteMmSpace cycle_space(int m, double circumference) {
  if (m < 1) throw std::invalid_argument("cycle_space: m must be positive");
  if (!(circumference > 0.0))
    throw std::invalid_argument("cycle_space: circumference must be positive");
  if (m == 1) return one_point_space();
  double step = circumference / m;
  std::vector<double> d(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      int k = std::abs(i - j);
      k = std::min(k, m - k);
      d[static_cast<std::size_t>(i) * m + j] = step * k;
    }
  std::vector<double> w(static_cast<std::size_t>(m), 1.0 / m);
  return FiniteMmSpace::create(default_labels(m, "c"), std::move(d), std::move(w));
}

FiniteMmSpace dissipation_space(int n) {
  if (n < 1) throw std::invalid_argument("dissipation_space: n must be positive");
  std::vector<double> d(static_cast<std::size_t>(n) * n, static_cast<double>(n));
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i) * n + i] = 0.0;
  std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
  return FiniteMmSpace::create(default_labels(n, "s"), std::move(d), std::move(w));
}

namespace {
template <class Space>
std::vector<double> scaled_matrix(const Space& x, double t) {
  std::vector<double> d = x.dist_matrix();
  for (double& v : d) v = t * v;
  return d;
}
}  // namespace

FiniteMmSpace scale(const FiniteMmSpace& x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("scale: factor must be positive");
  std::vector<std::string> labels;
  for (int i = 0; i < x.size(); ++i) labels.push_back(x.label(i));
  return FiniteMmSpace::create(std::move(labels), scaled_matrix(x, t), x.weights());
}

ExtendedMmSpace scale(const ExtendedMmSpace& x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("scale: factor must be positive");
  std::vector<std::string> labels;
  for (int i = 0; i < x.size(); ++i) labels.push_back(x.label(i));
  return ExtendedMmSpace::create(std::move(labels), scaled_matrix(x, t), x.weights());
}

FiniteMmSpace restrict_normalize(const FiniteMmSpace& x,
                                 const std::vector<int>& subset) {
  if (subset.empty())
    throw std::invalid_argument("restrict_normalize: subset must be nonempty");
  for (int i : subset)
    if (i < 0 || i >= x.size())
      throw std::invalid_argument("restrict_normalize: index out of range");
  double mass = 0.0;
  for (int i : subset) mass += x.weight(i);
  std::vector<std::string> labels;
  std::vector<double> d, w;
  for (int i : subset) {
    labels.push_back(x.label(i));
    w.push_back(x.weight(i) / mass);
  }
  for (int i : subset)
    for (int j : subset) d.push_back(x.dist(i, j));
  return FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
}

namespace {

double lp_combine(double a, double b, double p) {
  if (std::isinf(a) || std::isinf(b)) return kInf;
  if (std::isinf(p)) return std::max(a, b);
  if (p == 1.0) return a + b;
  if (p == 2.0) return std::hypot(a, b);
  return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

template <class Space>
std::tuple<std::vector<std::string>, std::vector<double>, std::vector<double>>
product_data(const Space& x, const Space& y, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_product: p must be >= 1 or infinity");
  int nx = x.size(), ny = y.size();
  int n = nx * ny;
  std::vector<std::string> labels;
  std::vector<double> w;
  labels.reserve(static_cast<std::size_t>(n));
  w.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      labels.push_back("(" + x.label(i) + "," + y.label(j) + ")");
      w.push_back(x.weight(i) * y.weight(j));
    }
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int i2 = 0; i2 < nx; ++i2)
        for (int j2 = 0; j2 < ny; ++j2) {
          int a = i * ny + j, b = i2 * ny + j2;
          d[static_cast<std::size_t>(a) * n + b] =
              lp_combine(x.dist(i, i2), y.dist(j, j2), p);
        }
  // Product weights can drift below the construction tolerance; renormalize.
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return {std::move(labels), std::move(d), std::move(w)};
}

}  // namespace

FiniteMmSpace lp_product(const FiniteMmSpace& x, const FiniteMmSpace& y, double p) {
  auto [labels, d, w] = product_data(x, y, p);
  return FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
}

ExtendedMmSpace lp_product(const ExtendedMmSpace& x, const ExtendedMmSpace& y, double p) {
  auto [labels, d, w] = product_data(x, y, p);
  return ExtendedMmSpace::create(std::move(labels), std::move(d), std::move(w));
}

FiniteMmSpace lp_power(const FiniteMmSpace& x, double p, int n, int budget) {
  if (n < 1) throw std::invalid_argument("lp_power: exponent must be >= 1");
  double points = 1.0;
  for (int k = 0; k < n; ++k) {
    points *= x.size();
    if (points > budget)
      throw resource_limit_error("lp_power: |X|^n exceeds the point budget (" +
                                 std::to_string(budget) + ")");
  }
  FiniteMmSpace acc = x;
  for (int k = 2; k <= n; ++k) acc = lp_product(acc, x, p);
  return acc;
}

ExtendedMmSpace direct_sum(const std::vector<FiniteMmSpace>& parts,
                           const WeightVector& a) {
  std::vector<ExtendedMmSpace> ext;
  ext.reserve(parts.size());
  for (const auto& p : parts) ext.push_back(ExtendedMmSpace::from_finite(p));
  return direct_sum_extended(ext, a);
}

ExtendedMmSpace direct_sum_extended(const std::vector<ExtendedMmSpace>& parts,
                                    const WeightVector& a) {
  if (a.mode != WeightVector::Mode::A1)
    throw std::invalid_argument("direct_sum: weights must be a mode-A1 vector");
  if (parts.size() != a.size())
    throw std::invalid_argument("direct_sum: parts/weights length mismatch");
  int n = 0;
  for (const auto& p : parts) n += p.size();
  std::vector<std::string> labels;
  std::vector<double> w;
  std::vector<double> d(static_cast<std::size_t>(n) * n, kInf);
  int off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& part = parts[k];
    for (int i = 0; i < part.size(); ++i) {
      labels.push_back("p" + std::to_string(k) + "." + part.label(i));
      w.push_back(a.entries[k] * part.weight(i));
      for (int j = 0; j < part.size(); ++j)
        d[static_cast<std::size_t>(off + i) * n + (off + j)] = part.dist(i, j);
    }
    off += part.size();
  }
  return ExtendedMmSpace::create(std::move(labels), std::move(d), std::move(w));
}

FiniteMmSpace gapped_sum(const std::vector<PointedSpace>& parts,
                         const WeightVector& a, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("gapped_sum: gap must be positive");
  if (a.mode != WeightVector::Mode::A1)
    throw std::invalid_argument("gapped_sum: weights must be a mode-A1 vector");
  if (parts.size() != a.size())
    throw std::invalid_argument("gapped_sum: parts/weights length mismatch");
  int n = 0;
  for (const auto& p : parts) n += p.space.size();
  std::vector<std::string> labels;
  std::vector<double> w;
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<int> offsets;
  int off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    offsets.push_back(off);
    const auto& part = parts[k].space;
    for (int i = 0; i < part.size(); ++i) {
      labels.push_back("p" + std::to_string(k) + "." + part.label(i));
      w.push_back(a.entries[k] * part.weight(i));
    }
    off += part.size();
  }
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& pk = parts[k].space;
    for (int i = 0; i < pk.size(); ++i)
      for (int j = 0; j < pk.size(); ++j)
        d[static_cast<std::size_t>(offsets[k] + i) * n + (offsets[k] + j)] = pk.dist(i, j);
    for (std::size_t m = k + 1; m < parts.size(); ++m) {
      const auto& pm = parts[m].space;
      for (int i = 0; i < pk.size(); ++i)
        for (int j = 0; j < pm.size(); ++j) {
          double v = pk.dist(i, parts[k].base) + pm.dist(j, parts[m].base) + r;
          d[static_cast<std::size_t>(offsets[k] + i) * n + (offsets[m] + j)] = v;
          d[static_cast<std::size_t>(offsets[m] + j) * n + (offsets[k] + i)] = v;
        }
    }
  }
  FiniteMmSpace out = FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
  // Postcondition: inter-part set distance >= r.
  for (std::size_t k = 0; k + 1 < parts.size(); ++k)
    for (std::size_t m = k + 1; m < parts.size(); ++m) {
      double mind = kInf;
      for (int i = 0; i < parts[k].space.size(); ++i)
        for (int j = 0; j < parts[m].space.size(); ++j)
          mind = std::min(mind, out.dist(offsets[k] + i, offsets[m] + j));
      if (!(mind >= r))
        throw std::logic_error("gapped_sum: inter-part distance fell below the gap");
    }
  return out;
}

FiniteMmSpace wedge_sum(const PointedSpace& xp, const PointedSpace& yp,
                        double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("wedge_sum: alpha must lie in (0,1)");
  const FiniteMmSpace& x = xp.space;
  const FiniteMmSpace& y = yp.space;
  // points: X with its base as the merged point, then Y minus its base
  int nx = x.size(), ny = y.size();
  int n = nx + ny - 1;
  std::vector<int> ymap(static_cast<std::size_t>(ny), -1);
  std::vector<std::string> labels;
  std::vector<double> w;
  for (int i = 0; i < nx; ++i) {
    labels.push_back(i == xp.base ? "wedge" : "x." + x.label(i));
    double wi = alpha * x.weight(i);
    if (i == xp.base) wi += (1.0 - alpha) * y.weight(yp.base);
    w.push_back(wi);
  }
  int off = nx;
  for (int j = 0; j < ny; ++j) {
    if (j == yp.base) {
      ymap[static_cast<std::size_t>(j)] = xp.base;
      continue;
    }
    ymap[static_cast<std::size_t>(j)] = off;
    labels.push_back("y." + y.label(j));
    w.push_back((1.0 - alpha) * y.weight(j));
    ++off;
  }
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  auto set = [&](int i, int j, double v) {
    d[static_cast<std::size_t>(i) * n + j] = v;
    d[static_cast<std::size_t>(j) * n + i] = v;
  };
  for (int i = 0; i < nx; ++i)
    for (int j = i + 1; j < nx; ++j) set(i, j, x.dist(i, j));
  for (int i = 0; i < ny; ++i)
    for (int j = i + 1; j < ny; ++j) {
      int a = ymap[static_cast<std::size_t>(i)], b = ymap[static_cast<std::size_t>(j)];
      if (a != b) set(a, b, y.dist(i, j));
    }
  for (int i = 0; i < nx; ++i) {
    if (i == xp.base) continue;
    for (int j = 0; j < ny; ++j) {
      if (j == yp.base) continue;
      set(i, ymap[static_cast<std::size_t>(j)],
          x.dist(i, xp.base) + y.dist(j, yp.base));
    }
  }
  return FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
}

FiniteMmSpace atoms_generator(const WeightVector& a, int n) {
  if (n < 1) throw std::invalid_argument("atoms_generator: n must be positive");
  if (a.mode != WeightVector::Mode::A)
    throw std::invalid_argument("atoms_generator: weights must be a mode-A vector");
  double norm = a.norm1();
  if (a.entries.empty()) return dissipation_space(n);
  std::vector<PointedSpace> parts;
  std::vector<double> weights;
  for (std::size_t k = 0; k < a.size(); ++k) {
    parts.emplace_back(one_point_space(), 0);
    weights.push_back(a.entries[k]);
  }
  if (norm < 1.0 - kTolConstruct) {
    parts.emplace_back(dissipation_space(n), 0);
    weights.push_back(1.0 - norm);
  }
  if (parts.size() == 1) return parts[0].space;
  return gapped_sum(parts, WeightVector(std::move(weights), WeightVector::Mode::A1),
                    static_cast<double>(n));
}

// --- Lipschitz order --------------------------------------------------------

namespace {

struct DominationSearch {
  const FiniteMmSpace& x;
  const FiniteMmSpace& y;
  std::vector<int> order;        // X indices, heaviest first
  std::vector<int> assign;       // order position -> Y index
  std::vector<double> pushed;    // accumulated image mass per Y point
  long long nodes = 0;
  long long node_cap;

  // Admissibility of target yi for the point at position pos, given the
  // first `depth` positions are assigned.
  bool feasible_target(int depth, int pos, int yi) const {
    int xi = order[static_cast<std::size_t>(pos)];
    if (pushed[static_cast<std::size_t>(yi)] + x.weight(xi) >
        y.weight(yi) + kTolConstruct)
      return false;
    for (int q = 0; q < depth; ++q) {
      int xj = order[static_cast<std::size_t>(q)];
      if (y.dist(yi, assign[static_cast<std::size_t>(q)]) >
          x.dist(xi, xj) + kTolConstruct)
        return false;
    }
    return true;
  }

  // Every unassigned point must still have at least one admissible target.
  bool arcs_ok(int depth) const {
    for (int p = depth; p < static_cast<int>(order.size()); ++p) {
      bool any = false;
      for (int yi = 0; yi < y.size() && !any; ++yi) any = feasible_target(depth, p, yi);
      if (!any) return false;
    }
    return true;
  }

  bool run(int pos) {
    if (++nodes > node_cap)
      throw resource_limit_error("lipschitz_dominates: search node budget exceeded");
    if (pos == static_cast<int>(order.size())) {
      for (int yi = 0; yi < y.size(); ++yi)
        if (std::abs(pushed[static_cast<std::size_t>(yi)] - y.weight(yi)) > kTolConstruct)
          return false;
      return true;
    }
    int xi = order[static_cast<std::size_t>(pos)];
    for (int yi = 0; yi < y.size(); ++yi) {
      if (!feasible_target(pos, pos, yi)) continue;
      assign[static_cast<std::size_t>(pos)] = yi;
      pushed[static_cast<std::size_t>(yi)] += x.weight(xi);
      if (arcs_ok(pos + 1) && run(pos + 1)) return true;
      pushed[static_cast<std::size_t>(yi)] -= x.weight(xi);
      assign[static_cast<std::size_t>(pos)] = -1;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<int>> lipschitz_dominates(const FiniteMmSpace& x,
                                                    const FiniteMmSpace& y,
                                                    int budget) {
  if (x.size() > budget || y.size() > budget)
    throw resource_limit_error(
        "lipschitz_dominates: point count exceeds the exact-search budget (" +
        std::to_string(budget) + ")");
  DominationSearch s{x, y, {}, {}, {}, 0, 40000000};
  s.order.resize(static_cast<std::size_t>(x.size()));
  std::iota(s.order.begin(), s.order.end(), 0);
  std::sort(s.order.begin(), s.order.end(),
            [&](int a, int b) { return x.weight(a) > x.weight(b); });
  s.assign.assign(static_cast<std::size_t>(x.size()), -1);
  s.pushed.assign(static_cast<std::size_t>(y.size()), 0.0);
  if (!s.run(0)) return std::nullopt;
  std::vector<int> map(static_cast<std::size_t>(x.size()), -1);
  for (std::size_t p = 0; p < s.order.size(); ++p)
    map[static_cast<std::size_t>(s.order[p])] = s.assign[p];
  return map;
}

namespace {

// Lower bound on the mass that must be excluded from a non-exceptional
// domain: greedy matching over violated pairs, each pair forcing out its
// lighter endpoint.
double exclusion_lower_bound(const FiniteMmSpace& x,
                             const std::vector<std::pair<int, int>>& violations) {
  std::vector<bool> used(static_cast<std::size_t>(x.size()), false);
  double bound = 0.0;
  for (auto [i, j] : violations) {
    if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
    bound += std::min(x.weight(i), x.weight(j));
  }
  return bound;
}

struct EpsSearch {
  const FiniteMmSpace& x;
  const FiniteMmSpace& y;
  double eps;
  std::vector<int> map;
  long long nodes = 0;
  long long node_cap = 20000000;
  std::optional<EpsDominationWitness> result;

  bool complete_check() {
    // conflict graph over X of pairs violating the additive-error constraint
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(x.size()), 0);
    for (int i = 0; i < x.size(); ++i)
      for (int j = i + 1; j < x.size(); ++j) {
        double dy = y.dist(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
        if (dy > x.dist(i, j) + eps + kTolConstruct) {
          adj[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
          adj[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
        }
      }
    std::uint64_t best_set = 0;
    double mass = detail::max_weight_independent_set(adj, x.weights(), &best_set);
    if (mass < 1.0 - eps - kTolConstruct) return false;
    std::vector<double> pushed(static_cast<std::size_t>(y.size()), 0.0);
    for (int i = 0; i < x.size(); ++i)
      pushed[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] += x.weight(i);
    if (prokhorov_flow(y, pushed, y.weights()) > eps + kTolSearch) return false;
    EpsDominationWitness w;
    w.map = map;
    for (int i = 0; i < x.size(); ++i)
      if (best_set & (std::uint64_t{1} << i)) w.domain.push_back(i);
    result = w;
    return true;
  }

  bool run(int pos) {
    if (++nodes > node_cap)
      throw resource_limit_error("lipschitz_dominates_eps: search node budget exceeded");
    if (pos == x.size()) return complete_check();
    for (int yi = 0; yi < y.size(); ++yi) {
      map[static_cast<std::size_t>(pos)] = yi;
      std::vector<std::pair<int, int>> violations;
      for (int i = 0; i < pos; ++i)
        for (int j = i + 1; j <= pos; ++j) {
          double dy = y.dist(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
          if (dy > x.dist(i, j) + eps + kTolConstruct) violations.emplace_back(i, j);
        }
      if (exclusion_lower_bound(x, violations) > eps + kTolConstruct) continue;
      if (run(pos + 1)) return true;
    }
    map[static_cast<std::size_t>(pos)] = -1;
    return false;
  }
};

}  // namespace

std::optional<EpsDominationWitness> lipschitz_dominates_eps(const FiniteMmSpace& x,
                                                            const FiniteMmSpace& y,
                                                            double eps,
                                                            int budget) {
  if (eps < 0.0) throw std::invalid_argument("lipschitz_dominates_eps: eps must be >= 0");
  if (x.size() > budget || y.size() > budget)
    throw resource_limit_error(
        "lipschitz_dominates_eps: point count exceeds the exact-search budget (" +
        std::to_string(budget) + ")");
  if (eps == 0.0) {
    auto exact = lipschitz_dominates(x, y, budget);
    if (!exact) return std::nullopt;
    EpsDominationWitness w;
    w.map = *exact;
    w.domain.resize(static_cast<std::size_t>(x.size()));
    std::iota(w.domain.begin(), w.domain.end(), 0);
    return w;
  }
  EpsSearch s{x, y, eps, std::vector<int>(static_cast<std::size_t>(x.size()), -1),
              0, 20000000, std::nullopt};
  s.run(0);
  return s.result;
}

namespace {

struct IsoSearch {
  const FiniteMmSpace& x;
  const FiniteMmSpace& y;
  std::vector<int> map;
  std::vector<bool> used;
  long long nodes = 0;

  bool run(int pos) {
    if (++nodes > 50000000)
      throw resource_limit_error("mm_isomorphic: search node budget exceeded");
    if (pos == x.size()) return true;
    for (int yi = 0; yi < y.size(); ++yi) {
      if (used[static_cast<std::size_t>(yi)]) continue;
      if (std::abs(x.weight(pos) - y.weight(yi)) > kTolSearch) continue;
      bool ok = true;
      for (int j = 0; j < pos && ok; ++j)
        if (std::abs(x.dist(pos, j) - y.dist(yi, map[static_cast<std::size_t>(j)])) > kTolSearch)
          ok = false;
      if (!ok) continue;
      map[static_cast<std::size_t>(pos)] = yi;
      used[static_cast<std::size_t>(yi)] = true;
      if (run(pos + 1)) return true;
      used[static_cast<std::size_t>(yi)] = false;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<int>> mm_isomorphic(const FiniteMmSpace& x,
                                              const FiniteMmSpace& y,
                                              int budget) {
  if (x.size() != y.size()) return std::nullopt;
  if (x.size() > budget)
    throw resource_limit_error(
        "mm_isomorphic: point count exceeds the permutation budget (" +
        std::to_string(budget) + ")");
  // quick reject on sorted weight/distance multisets
  std::vector<double> wx = x.weights(), wy = y.weights();
  std::sort(wx.begin(), wx.end());
  std::sort(wy.begin(), wy.end());
  for (std::size_t i = 0; i < wx.size(); ++i)
    if (std::abs(wx[i] - wy[i]) > kTolSearch) return std::nullopt;
  std::vector<double> dx = x.dist_matrix(), dy = y.dist_matrix();
  std::sort(dx.begin(), dx.end());
  std::sort(dy.begin(), dy.end());
  for (std::size_t i = 0; i < dx.size(); ++i)
    if (std::abs(dx[i] - dy[i]) > kTolSearch) return std::nullopt;

  IsoSearch s{x, y, std::vector<int>(static_cast<std::size_t>(x.size()), -1),
              std::vector<bool>(static_cast<std::size_t>(y.size()), false), 0};
  if (!s.run(0)) return std::nullopt;
  return s.map;
}

}  // namespace mms
