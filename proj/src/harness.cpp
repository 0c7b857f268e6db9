#include "mms/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "mms/boxdist.hpp"
#include "mms/invariants.hpp"
#include "mms/measure.hpp"
#include "mms/pyramid.hpp"
#include "mms/spacefile.hpp"

namespace mms {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace

void CheckReport::add_row(CheckRow row) {
  row.slack = row.rhs - row.lhs;
  if (row.asserted) {
    min_slack = std::min(min_slack, row.slack);
    max_slack = std::max(max_slack, row.slack);
    if (row.slack < -kTolSearch)
      fail(row.check, row.instance,
           "inequality violated: lhs=" + fmt(row.lhs) + " rhs=" + fmt(row.rhs), context);
  }
  rows.push_back(std::move(row));
}

void CheckReport::fail(const std::string& check, int instance,
                       const std::string& what, const std::string& replay) {
  failures.push_back({check, instance, what, replay});
}

std::string report_csv(const CheckReport& report) {
  std::ostringstream out;
  out << "check,seed,instance,lhs,rhs,slack,runtime_ms\n";
  for (const auto& r : report.rows)
    out << r.check << "," << r.seed << "," << r.instance << "," << fmt(r.lhs) << ","
        << fmt(r.rhs) << "," << fmt(r.slack) << ",0\n";
  return out.str();
}

std::string report_summary(const CheckReport& report) {
  std::ostringstream out;
  out << (report.pass() ? "PASS" : "FAIL") << " " << report.name << ": "
      << report.instances << " instances, " << report.rows.size() << " rows";
  if (std::isfinite(report.min_slack))
    out << ", slack [" << fmt(report.min_slack) << ", " << fmt(report.max_slack) << "]";
  out << ", " << fmt(report.runtime_seconds) << " s";
  // min slack per asserted check, in first-seen order
  std::vector<std::pair<std::string, double>> per_check;
  for (const auto& r : report.rows) {
    if (!r.asserted) continue;
    auto it = std::find_if(per_check.begin(), per_check.end(),
                           [&](const auto& p) { return p.first == r.check; });
    if (it == per_check.end())
      per_check.emplace_back(r.check, r.slack);
    else
      it->second = std::min(it->second, r.slack);
  }
  for (const auto& [check, slack] : per_check)
    out << "\n  " << check << ": min slack " << fmt(slack);
  for (const auto& f : report.failures)
    out << "\n  failure [" << f.check << " #" << f.instance << "] " << f.what;
  return out.str();
}

// --- random instances ----------------------------------------------------------

FiniteMmSpace random_space(Rng& rng, int n_min, int n_max, double diam_cap) {
  const int n = rng.range(n_min, n_max);
  const int dim = rng.range(1, 3);
  const double side = rng.uniform(0.5, 2.5);
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(dim)));
  for (auto& p : pts)
    for (double& c : p) c = rng.uniform(0.0, side);
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.0;
      for (int c = 0; c < dim; ++c)
        v = std::max(v, std::abs(pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] -
                                 pts[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]));
      if (v <= 0.0) v = 1e-6;  // coincident draws
      d[static_cast<std::size_t>(i) * n + j] = v;
      d[static_cast<std::size_t>(j) * n + i] = v;
    }
  if (rng.unit() < 0.5) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double f = 1.0 + rng.uniform(-0.15, 0.25);
        d[static_cast<std::size_t>(i) * n + j] *= f;
        d[static_cast<std::size_t>(j) * n + i] = d[static_cast<std::size_t>(i) * n + j];
      }
    // metric repair by min-plus closure
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d[static_cast<std::size_t>(i) * n + j] =
              std::min(d[static_cast<std::size_t>(i) * n + j],
                       d[static_cast<std::size_t>(i) * n + k] +
                           d[static_cast<std::size_t>(k) * n + j]);
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& v : w) v = rng.exponential();
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  // prune near-zero weights, keeping at least two points
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (w[static_cast<std::size_t>(i)] >= 0.02) keep.push_back(i);
  if (static_cast<int>(keep.size()) < std::min(2, n)) {
    keep.clear();
    for (int i = 0; i < n; ++i) keep.push_back(i);
  }
  std::vector<std::string> labels;
  std::vector<double> d2, w2;
  double kept = 0.0;
  for (int i : keep) kept += w[static_cast<std::size_t>(i)];
  for (int i : keep) {
    labels.push_back("q" + std::to_string(i));
    w2.push_back(w[static_cast<std::size_t>(i)] / kept);
  }
  for (int i : keep)
    for (int j : keep) d2.push_back(d[static_cast<std::size_t>(i) * n + j]);
  FiniteMmSpace x = FiniteMmSpace::create(std::move(labels), std::move(d2), std::move(w2));
  if (diam_cap > 0.0 && x.diameter() > diam_cap)
    x = scale(x, diam_cap / x.diameter());
  return x;
}

std::vector<double> random_measure(Rng& rng, int n) {
  std::vector<double> m(static_cast<std::size_t>(n), 0.0);
  bool any = false;
  for (double& v : m)
    if (rng.unit() >= 0.2) {
      v = rng.exponential();
      any = true;
    }
  if (!any) m[rng.index(static_cast<std::size_t>(n))] = 1.0;
  double sum = std::accumulate(m.begin(), m.end(), 0.0);
  for (double& v : m) v /= sum;
  return m;
}

WeightVector random_weights_a1(Rng& rng, int max_len) {
  int len = rng.range(1, max_len);
  std::vector<double> w(static_cast<std::size_t>(len));
  for (double& v : w) v = 0.1 + rng.exponential();
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return WeightVector(std::move(w), WeightVector::Mode::A1);
}

std::pair<FiniteMmSpace, FiniteMmSpace> random_dominated_pair(Rng& rng, int y_max) {
  FiniteMmSpace y = random_space(rng, 3, y_max);
  const int n = y.size();
  const int m = rng.range(2, std::max(2, n - 1));
  // random surjection onto [m]
  std::vector<int> g(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = i;
  for (int i = m; i < n; ++i) g[static_cast<std::size_t>(i)] = rng.range(0, m - 1);
  rng.shuffle(g);
  // quotient metric: min cross-preimage distance, repaired by closure
  std::vector<double> d(static_cast<std::size_t>(m) * m, kInf);
  for (int a = 0; a < m; ++a) d[static_cast<std::size_t>(a) * m + a] = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int a = g[static_cast<std::size_t>(i)], b = g[static_cast<std::size_t>(j)];
      if (a != b)
        d[static_cast<std::size_t>(a) * m + b] =
            std::min(d[static_cast<std::size_t>(a) * m + b], y.dist(i, j));
    }
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        d[static_cast<std::size_t>(a) * m + b] =
            std::min(d[static_cast<std::size_t>(a) * m + b],
                     d[static_cast<std::size_t>(a) * m + k] + d[static_cast<std::size_t>(k) * m + b]);
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(g[static_cast<std::size_t>(i)])] += y.weight(i);
  std::vector<std::string> labels;
  for (int a = 0; a < m; ++a) labels.push_back("r" + std::to_string(a));
  FiniteMmSpace x = FiniteMmSpace::create(std::move(labels), std::move(d), std::move(w));
  return {std::move(x), std::move(y)};
}

// --- metric lemmas ---------------------------------------------------------------

CheckReport check_metric_lemmas(std::uint64_t seed, int count) {
  Timer timer;
  CheckReport report;
  report.name = "metric-lemmas";
  report.seed = seed;
  Rng rng(seed);

  // fixed adversarial corpus: point masses at distance l
  for (double l : {0.4, 1.0, 2.5}) {
    FiniteMmSpace x = two_point_space(l, 0.5);
    std::vector<double> mu{1.0, 0.0}, nu{0.0, 1.0};
    report.add_row({"dP-le-dTV", seed, report.instances, prokhorov_flow(x, mu, nu),
                    total_variation(mu, nu), 0.0, true});
    ++report.instances;
  }

  for (int i = 0; i < count; ++i) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(i));
    // d_P <= d_TV on a random space with two random measures
    FiniteMmSpace x = random_space(sub, 2, 10);
    report.context = serialize_space(x);
    std::vector<double> mu = random_measure(sub, x.size());
    std::vector<double> nu = random_measure(sub, x.size());
    double dp = prokhorov_flow(x, mu, nu);
    report.add_row({"dP-le-dTV", seed, report.instances, dp, total_variation(mu, nu), 0.0, true});

    // box <= 2 d_P on a shared small space
    FiniteMmSpace s = random_space(sub, 2, 4);
    std::vector<double> m1 = random_measure(sub, s.size());
    std::vector<double> m2 = random_measure(sub, s.size());
    std::vector<std::string> l1, l2;
    for (int k = 0; k < s.size(); ++k) l1.push_back(s.label(k));
    l2 = l1;
    FiniteMmSpace s1 = FiniteMmSpace::create_pruned(std::move(l1), s.dist_matrix(), m1);
    FiniteMmSpace s2 = FiniteMmSpace::create_pruned(std::move(l2), s.dist_matrix(), m2);
    double box = box_distance_exact(s1, s2);
    report.add_row({"box-le-2dP", seed, report.instances, box,
                    box_upper_from_prokhorov(s, m1, m2), 0.0, true});

    // box <= 3 eps under a full-domain certificate of a random map
    FiniteMmSpace cx = random_space(sub, 2, 4);
    FiniteMmSpace cy = random_space(sub, 2, 4);
    std::vector<int> f(static_cast<std::size_t>(cx.size()));
    for (int k = 0; k < cx.size(); ++k)
      f[static_cast<std::size_t>(k)] = static_cast<int>(sub.index(static_cast<std::size_t>(cy.size())));
    double eps = certificate_eps_full_domain(f, cx, cy);
    auto cert = certify_mm_iso(f, cx, cy, eps + kTolConstruct);
    if (!cert)
      report.fail("certificate", report.instances, "full-domain certificate rejected",
                  serialize_space(cx) + "---\n" + serialize_space(cy));
    report.add_row({"box-le-3eps", seed, report.instances, box_distance_exact(cx, cy),
                    3.0 * eps, 0.0, true});

    // rho <= box, estimator side reported only
    if (i < 8) {
      double b = box_distance_exact(cx, cy);
      double rho = rho_empirical(PyramidApprox::from_space(cx),
                                 PyramidApprox::from_space(cy), 2, 6,
                                 seed + static_cast<std::uint64_t>(i));
      report.add_row({"rho-le-box-estimate", seed, report.instances, rho, b, 0.0, false});
    }
    ++report.instances;
  }
  report.runtime_seconds = timer.seconds();
  return report;
}

// --- sum bounds ------------------------------------------------------------------

namespace {

// Witnessed sampled distance at measurement level (k,k): push two measures
// on one carrier through the same 1-Lipschitz maps. Each image pair consists
// of a member of either full measurement set, so the max over pairs soundly
// upper-bounds the sampled directed Hausdorff distances.
double paired_level_distance(const FiniteMmSpace& carrier, const std::vector<double>& wa,
                             const std::vector<double>& wb, int level,
                             std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& img :
       measurement_maps(carrier, level, static_cast<double>(level), 6, seed))
    worst = std::max(worst, sampled_prokhorov(make_sampled(img, wa), make_sampled(img, wb)));
  return worst;
}

}  // namespace

CheckReport check_sum_bounds(std::uint64_t seed, int count) {
  Timer timer;
  CheckReport report;
  report.name = "sum-bounds";
  report.seed = seed;
  Rng rng(seed);

  for (int i = 0; i < count; ++i) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(i));
    FiniteMmSpace x = random_space(sub, 2, 8);
    report.context = serialize_space(x);
    auto sp = std::make_shared<const FiniteMmSpace>(x);

    // convex-combination distance bounds
    int m = sub.range(2, 3);
    std::vector<double> wa(static_cast<std::size_t>(m));
    for (double& v : wa) v = 0.1 + sub.exponential();
    double sum = std::accumulate(wa.begin(), wa.end(), 0.0);
    for (double& v : wa) v /= sum;
    std::vector<MeasureOnSpace> mus, nus;
    double max_dp = 0.0;
    for (int k = 0; k < m; ++k) {
      mus.emplace_back(sp, random_measure(sub, x.size()));
      nus.emplace_back(sp, random_measure(sub, x.size()));
      max_dp = std::max(max_dp, prokhorov(mus.back(), nus.back()));
    }
    WeightVector wv(wa, WeightVector::Mode::A1);
    double lhs = prokhorov(convex_combination(wv, mus), convex_combination(wv, nus));
    report.add_row({"combine-max-bound", seed, report.instances, lhs, max_dp, 0.0, true});

    // two-term bound d_P(a mu1 + (1-a) mu2, a nu1 + (1-a) nu2) <= d_P(mu1, nu1) + 1 - a
    double a = sub.uniform(0.1, 0.95);
    WeightVector two({a, 1.0 - a}, WeightVector::Mode::A1);
    double lhs2 = prokhorov(convex_combination(two, {mus[0], mus[1]}),
                            convex_combination(two, {nus[0], nus[1]}));
    report.add_row({"combine-tail-bound", seed, report.instances, lhs2,
                    prokhorov(mus[0], nus[0]) + 1.0 - a, 0.0, true});

    // truncated bound with padded weight distance and tails
    WeightVector awv = random_weights_a1(sub, 3);
    WeightVector bwv = random_weights_a1(sub, 3);
    std::size_t trunc = 1 + sub.index(std::min(awv.size(), bwv.size()));
    std::vector<MeasureOnSpace> am, bm;
    for (std::size_t k = 0; k < awv.size(); ++k) am.emplace_back(sp, random_measure(sub, x.size()));
    for (std::size_t k = 0; k < bwv.size(); ++k) bm.emplace_back(sp, random_measure(sub, x.size()));
    double rhs3 = weight_distance_l1(awv, bwv);
    double maxterm = 0.0;
    for (std::size_t k = 0; k < trunc; ++k)
      maxterm = std::max(maxterm, prokhorov(am[k], bm[k]));
    rhs3 += maxterm;
    for (std::size_t k = trunc; k < awv.size(); ++k) rhs3 += awv.entries[k];
    for (std::size_t k = trunc; k < bwv.size(); ++k) rhs3 += bwv.entries[k];
    double lhs3 = prokhorov(convex_combination(awv, am), convex_combination(bwv, bm));
    report.add_row({"combine-truncated-bound", seed, report.instances, lhs3, rhs3, 0.0, true});
    ++report.instances;
  }

  // atoms vs atoms: witnessed sampled distance against the padded l1 bound
  for (int i = 0; i < std::max(4, count / 8); ++i) {
    Rng sub = rng.fork(0xa70a5 + static_cast<std::uint64_t>(i));
    WeightVector a = random_weights_a1(sub, 4).sorted_desc();
    WeightVector b = random_weights_a1(sub, 4).sorted_desc();
    double l1 = weight_distance_l1(a, b);
    if (l1 <= 0.0) continue;
    double tails = 0.0;
    std::size_t m = std::min(a.size(), b.size());
    for (std::size_t k = m; k < a.size(); ++k) tails += a.entries[k];
    for (std::size_t k = m; k < b.size(); ++k) tails += b.entries[k];
    // Shared carrier of max(N, M) atoms at mutual distance gap; either atom
    // space embeds isometrically, so maps on the carrier restrict to both.
    int gap = 8;
    std::size_t big = std::max(a.size(), b.size());
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < big; ++k) labels.push_back("a" + std::to_string(k));
    std::vector<double> dist(big * big, static_cast<double>(gap));
    for (std::size_t k = 0; k < big; ++k) dist[k * big + k] = 0.0;
    std::vector<double> wav(big, 0.0), wbv(big, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) wav[k] = a.entries[k];
    for (std::size_t k = 0; k < b.size(); ++k) wbv[k] = b.entries[k];
    FiniteMmSpace carrier = FiniteMmSpace::create(
        labels, dist, std::vector<double>(big, 1.0 / static_cast<double>(big)));
    double rho_weighted = 0.0;
    double worst_level = 0.0;
    for (int level = 1; level <= 2; ++level) {
      double h = paired_level_distance(carrier, wav, wbv, level,
                                       seed + static_cast<std::uint64_t>(level));
      worst_level = std::max(worst_level, h);
      rho_weighted += std::exp2(-level) / (2.0 * level) * h;
    }
    report.add_row({"atoms-level-bound", seed, report.instances, worst_level, l1 + tails, 0.0, true});
    report.add_row({"atoms-rho-bound", seed, report.instances, rho_weighted, l1, 0.0, true});
    ++report.instances;
  }

  // gapped carrier vs reweighting: same parts, different weights
  for (int i = 0; i < std::max(4, count / 8); ++i) {
    Rng sub = rng.fork(0x9a99ed + static_cast<std::uint64_t>(i));
    FiniteMmSpace p1 = random_space(sub, 2, 3, 1.5);
    FiniteMmSpace p2 = random_space(sub, 2, 3, 1.5);
    double a = sub.uniform(0.2, 0.8);
    double b = sub.uniform(0.2, 0.8);
    double r = 6.0;
    WeightVector awv({a, 1.0 - a}, WeightVector::Mode::A1);
    WeightVector bwv({b, 1.0 - b}, WeightVector::Mode::A1);
    FiniteMmSpace za = gapped_sum({{p1, 0}, {p2, 0}}, awv, r);
    std::vector<double> wav = za.weights();
    FiniteMmSpace zb = gapped_sum({{p1, 0}, {p2, 0}}, bwv, r);
    std::vector<double> wbv = zb.weights();
    double l1 = weight_distance_l1(awv, bwv);
    double rho_weighted = 0.0;
    double worst_level = 0.0;
    for (int level = 1; level <= 2; ++level) {  // level <= r/2 keeps the pasting valid
      double h = paired_level_distance(za, wav, wbv, level,
                                       seed + 31 * static_cast<std::uint64_t>(level));
      worst_level = std::max(worst_level, h);
      rho_weighted += std::exp2(-level) / (2.0 * level) * h;
    }
    report.add_row({"gapped-level-bound", seed, report.instances, worst_level, l1, 0.0, true});
    report.add_row({"gapped-rho-bound", seed, report.instances, rho_weighted,
                    0.5 * l1 + std::exp2(-r / 2.0), 0.0, true});
    ++report.instances;
  }

  // the 2^(-r/2) tail dominates the bound as the gap shrinks
  {
    double prev = -kInf;
    for (double r : {4.0, 1.0, 0.25}) {
      double bound = std::exp2(-r / 2.0);
      report.add_row({"gap-term-growth", seed, report.instances, prev, bound, 0.0, true});
      prev = bound;
    }
    ++report.instances;
  }

  report.runtime_seconds = timer.seconds();
  return report;
}

// --- invariant lemmas ---------------------------------------------------------

namespace {

bool bit_equal(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

CheckReport check_invariant_lemmas(std::uint64_t seed, int count) {
  Timer timer;
  CheckReport report;
  report.name = "invariant-lemmas";
  report.seed = seed;
  Rng rng(seed);

  for (int i = 0; i < count; ++i) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(i));
    FiniteMmSpace x = random_space(sub, 2, 8);
    report.context = serialize_space(x);
    double kappa = sub.uniform(0.1, 0.6);

    // endpoint-exact scaling of ObsDiam, Sep and the partial diameter
    for (double t : {0.5, 2.0, 10.0}) {
      FiniteMmSpace tx = scale(x, t);
      CertifiedInterval o = obs_diameter(x, kappa, seed);
      CertifiedInterval ot = obs_diameter(tx, kappa, seed);
      bool ok = bit_equal(ot.lower, t * o.lower) && bit_equal(ot.upper, t * o.upper);
      double sep = separation_distance(x, {kappa, kappa});
      ok = ok && bit_equal(separation_distance(tx, {kappa, kappa}), t * sep);
      double pd = partial_diameter(x, 1.0 - kappa);
      ok = ok && bit_equal(partial_diameter(tx, 1.0 - kappa), t * pd);
      report.add_row({"scaling-exact", seed, report.instances, ok ? 0.0 : 1.0, 0.0, 0.0, true});
      if (!ok)
        report.fail("scaling-exact", report.instances,
                    "scaled invariants differ bitwise at t=" + fmt(t), serialize_space(x));
    }

    // restriction bound: box(A, X) <= 4 (1 - mu(A))
    FiniteMmSpace bx = random_space(sub, 3, 4);
    std::vector<int> subset;
    for (int k = 0; k < bx.size(); ++k)
      if (sub.unit() < 0.6) subset.push_back(k);
    if (subset.empty()) subset.push_back(0);
    double mass = 0.0;
    for (int k : subset) mass += bx.weight(k);
    FiniteMmSpace restricted = restrict_normalize(bx, subset);
    report.add_row({"restriction-bound", seed, report.instances,
                    box_distance_exact(restricted, bx), 4.0 * (1.0 - mass), 0.0, true});

    // sandwich: Sep(X; k, k) <= upper ObsDiam endpoint at any smaller kappa
    double kp = kappa * sub.uniform(0.3, 0.9);
    report.add_row({"sep-sandwich", seed, report.instances,
                    separation_distance(x, {kappa, kappa}),
                    obs_diameter(x, kp, seed).upper, 0.0, true});

    // ObsDiam characterizes the one-point space
    double tiny = 0.5 * *std::min_element(x.weights().begin(), x.weights().end());
    CertifiedInterval small = obs_diameter(x, tiny, seed);
    report.add_row({"obsdiam-nontrivial", seed, report.instances,
                    x.size() > 1 ? 1e-15 : 0.0, small.lower, 0.0, x.size() > 1});
    ++report.instances;
  }

  CertifiedInterval pt = obs_diameter(one_point_space(), 0.3, seed);
  report.add_row({"obsdiam-point", seed, report.instances, pt.upper, 0.0, 0.0, true});
  ++report.instances;

  // covering monotonicity along verified domination pairs
  for (int i = 0; i < count; ++i) {
    Rng sub = rng.fork(0xc0 + static_cast<std::uint64_t>(i));
    auto [x, y] = random_dominated_pair(sub, 7);
    if (!lipschitz_dominates(y, x)) {
      report.fail("cov-monotone", report.instances,
                  "constructed quotient pair failed the domination search",
                  serialize_space(x) + "---\n" + serialize_space(y));
      ++report.instances;
      continue;
    }
    for (int t = 0; t < 5; ++t) {
      double r = sub.uniform(0.05, std::max(0.1, y.diameter()));
      double kappa = sub.uniform(0.05, 0.8);
      report.add_row({"cov-monotone", seed, report.instances,
                      static_cast<double>(covering_number(x, r, kappa).count),
                      static_cast<double>(covering_number(y, r, kappa).count), 0.0, true});
    }
    ++report.instances;
  }

  report.runtime_seconds = timer.seconds();
  return report;
}

// --- experiments -----------------------------------------------------------------

CheckReport experiment_dissipation(const std::vector<int>& n_list) {
  Timer timer;
  CheckReport report;
  report.name = "dissipation";
  double prev_sep = 0.0;
  double prev_maxmass = kInf;
  for (int n : n_list) {
    if (n < 4) throw std::invalid_argument("experiment_dissipation: needs n >= 4");
    FiniteMmSpace d = dissipation_space(n);
    double sep = separation_distance(d, {0.25, 0.25});
    report.add_row({"sep-exact", 0, report.instances, static_cast<double>(n), sep, 0.0, true});
    report.add_row({"sep-exact-rev", 0, report.instances, sep, static_cast<double>(n), 0.0, true});
    int cov = covering_number(d, 0.5, 0.25).count;
    int expected = (3 * n + 3) / 4;
    report.add_row({"cov-exact", 0, report.instances, static_cast<double>(cov),
                    static_cast<double>(expected), 0.0, true});
    report.add_row({"cov-exact-rev", 0, report.instances, static_cast<double>(expected),
                    static_cast<double>(cov), 0.0, true});
    // dissipation criterion on the singleton partition: total mass one,
    // min inter-set distance n (growing), max mass 1/n (shrinking)
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += d.weight(i);
    report.add_row({"criterion-mass", 0, report.instances, 1.0, total, 0.0, true});
    double min_dist = kInf;
    double max_mass = 0.0;
    for (int i = 0; i < n; ++i) {
      max_mass = std::max(max_mass, d.weight(i));
      for (int j = i + 1; j < n; ++j) min_dist = std::min(min_dist, d.dist(i, j));
    }
    report.add_row({"criterion-separation-grows", 0, report.instances, prev_sep, min_dist, 0.0, true});
    report.add_row({"criterion-mass-shrinks", 0, report.instances, max_mass, prev_maxmass, 0.0, true});
    prev_sep = min_dist;
    prev_maxmass = max_mass;
    ++report.instances;
  }
  report.runtime_seconds = timer.seconds();
  return report;
}

CheckReport experiment_product_ball_decay(const FiniteMmSpace& base, double p,
                                          double r, const std::vector<int>& n_list) {
  Timer timer;
  CheckReport report;
  report.name = "ball-decay";
  if (!(r < base.diameter() / 2.0))
    throw std::invalid_argument("experiment_product_ball_decay: needs r < diam/2");
  // n0: smallest power whose diameter exceeds 2r (the geometric bound block)
  int n0 = 1;
  while (lp_power(base, p, n0).diameter() <= 2.0 * r) ++n0;

  auto sup_ball = [&](int n) {
    FiniteMmSpace x = lp_power(base, p, n);
    double best = 0.0;
    for (int c = 0; c < x.size(); ++c) {
      double m = 0.0;
      for (int i = 0; i < x.size(); ++i)
        if (x.dist(c, i) < r) m += x.weight(i);
      best = std::max(best, m);
    }
    return best;
  };

  double base_mass = sup_ball(n0);
  double prev = kInf;
  for (int n : n_list) {
    double m = sup_ball(n);
    report.add_row({"ball-mass-nonincreasing", 0, report.instances, m, prev, 0.0, true});
    int k = n / n0;
    if (k >= 1)
      report.add_row({"ball-mass-geometric-bound", 0, report.instances, m,
                      std::pow(base_mass, k), 0.0, true});
    report.add_row({"ball-mass-value", 0, report.instances, m, m, 0.0, false});
    prev = m;
    ++report.instances;
  }
  report.runtime_seconds = timer.seconds();
  return report;
}

CheckReport experiment_wedge_convergence(int m, const std::vector<int>& n_list,
                                         double alpha, std::uint64_t seed) {
  Timer timer;
  CheckReport report;
  report.name = "wedge";
  report.seed = seed;
  const double circumference = 2.0 * std::acos(-1.0);
  FiniteMmSpace circle = cycle_space(m, circumference);

  double prev_err = kInf;
  double prev_sep = 0.0;
  std::vector<FiniteMmSpace> powers;
  for (int n : n_list) {
    FiniteMmSpace x = lp_power(circle, 2.0, n);
    powers.push_back(x);
    // complement of the ball around the base point, radius snapped to an
    // achieved distance near diam * 0.45
    std::vector<double> from_base;
    for (int i = 0; i < x.size(); ++i) from_base.push_back(x.dist(0, i));
    double target = 0.45 * x.diameter();
    double radius = 0.0;
    for (double v : from_base)
      if (v <= target) radius = std::max(radius, v);
    double ball_mass = 0.0;
    for (int i = 0; i < x.size(); ++i)
      if (x.dist(0, i) < radius) ball_mass += x.weight(i);

    FiniteMmSpace w = wedge_sum({x, 0}, {x, 0}, alpha);
    // region A sits in the first copy, B in the second; masses and the
    // separation are computed exactly on the wedge
    double mass_a = alpha * (1.0 - ball_mass);
    double err = std::abs(mass_a - alpha);
    report.add_row({"wedge-mass-error-bound", seed, report.instances, err,
                    alpha * ball_mass + kTolConstruct, 0.0, true});
    report.add_row({"wedge-mass-error-shrinks", seed, report.instances, err, prev_err, 0.0, true});
    double sep = 2.0 * radius;
    report.add_row({"wedge-separation-grows", seed, report.instances, prev_sep, sep, 0.0, true});
    // exact gluing distance between the two far regions
    double min_cross = kInf;
    for (int i = 0; i < x.size(); ++i) {
      if (x.dist(0, i) < radius) continue;
      for (int j = 0; j < x.size(); ++j) {
        if (x.dist(0, j) < radius) continue;
        min_cross = std::min(min_cross, x.dist(0, i) + x.dist(0, j));
      }
    }
    report.add_row({"wedge-separation-exact", seed, report.instances,
                    std::abs(min_cross - sep), kTolConstruct, 0.0, true});

    // alpha = 1/2 swap symmetry, checked bitwise on the wedge data
    if (alpha == 0.5) {
      FiniteMmSpace w2 = wedge_sum({x, 0}, {x, 0}, 1.0 - alpha);
      bool same = w.dist_matrix() == w2.dist_matrix() && w.weights() == w2.weights();
      report.add_row({"wedge-swap-symmetry", seed, report.instances, same ? 0.0 : 1.0,
                      0.0, 0.0, true});
    }
    prev_err = err;
    prev_sep = sep;
    ++report.instances;
  }

  // reported trend: empirical rho between the wedge pyramid and the gapped
  // direct-sum pyramid of the two factor pyramids
  PyramidApprox factor = PyramidApprox::from_generators(powers);
  PyramidApprox sum = direct_sum_pyramids(
      {factor, factor}, WeightVector({alpha, 1.0 - alpha}, WeightVector::Mode::A1));
  std::vector<FiniteMmSpace> wedges;
  for (const auto& x : powers) wedges.push_back(wedge_sum({x, 0}, {x, 0}, alpha));
  PyramidApprox wp = PyramidApprox::from_generators(wedges);
  double rho = rho_empirical(wp, sum, 2, 5, seed);
  report.add_row({"wedge-rho-trend", seed, report.instances, rho, rho, 0.0, false});
  ++report.instances;

  report.runtime_seconds = timer.seconds();
  return report;
}

CheckReport experiment_decomposition(std::uint64_t seed, int count) {
  Timer timer;
  CheckReport report;
  report.name = "decomposition";
  report.seed = seed;
  Rng rng(seed);

  // (a) atoms-limit recovery from gapped generator families
  for (int i = 0; i < count; ++i) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(i));
    WeightVector a = random_weights_a1(sub, 4);
    std::vector<PointedSpace> parts8, parts16;
    for (std::size_t k = 0; k < a.size(); ++k) {
      FiniteMmSpace part = random_space(sub, 1, 4, 1.5);
      parts8.emplace_back(part, 0);
      parts16.emplace_back(std::move(part), 0);
    }
    PyramidApprox p = PyramidApprox::from_generators(
        {gapped_sum(parts8, a, 8.0), gapped_sum(parts16, a, 16.0)});
    WeightVector rec = atoms_limit_of_scaling(p, {0.1, 0.05, 0.02});
    report.add_row({"atoms-limit-recovery", seed, report.instances,
                    weight_distance_l1(rec, a.sorted_desc()), 1e-6, 0.0, true});
    ++report.instances;
  }

  // (b) decomposition round-trip and uniqueness under relabeling
  for (int i = 0; i < count; ++i) {
    Rng sub = rng.fork(0xdec + static_cast<std::uint64_t>(i));
    WeightVector a = random_weights_a1(sub, 5);
    std::vector<FiniteMmSpace> parts;
    for (std::size_t k = 0; k < a.size(); ++k) parts.push_back(random_space(sub, 1, 6));
    ExtendedMmSpace z = direct_sum(parts, a);
    report.context = serialize_space(z);
    DecompositionResult dec = decompose_extended(z);
    if (dec.parts.size() != parts.size()) {
      report.fail("decompose-roundtrip", report.instances, "part count changed",
                  serialize_space(z));
      ++report.instances;
      continue;
    }
    // weight multiset equality
    std::vector<double> got = dec.weights.entries;
    std::vector<double> want = a.entries;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    double werr = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) werr = std::max(werr, std::abs(got[k] - want[k]));
    report.add_row({"decompose-weights", seed, report.instances, werr, kTolSearch, 0.0, true});
    // each recovered part is isomorphic to a generating part of equal weight
    std::vector<bool> used(parts.size(), false);
    bool matched = true;
    for (std::size_t k = 0; k < dec.parts.size() && matched; ++k) {
      bool found = false;
      for (std::size_t j = 0; j < parts.size() && !found; ++j) {
        if (used[j]) continue;
        if (std::abs(a.entries[j] - dec.weights.entries[k]) > kTolSearch) continue;
        if (parts[j].size() != dec.parts[k].size()) continue;
        if (mm_isomorphic(parts[j], dec.parts[k], 12)) {
          used[j] = true;
          found = true;
        }
      }
      matched = found;
    }
    if (!matched)
      report.fail("decompose-roundtrip", report.instances,
                  "recovered parts do not match the generators", serialize_space(z));
    // permuted relabeled rebuild decomposes identically
    std::vector<int> perm(static_cast<std::size_t>(z.size()));
    std::iota(perm.begin(), perm.end(), 0);
    sub.shuffle(perm);
    std::vector<std::string> labels;
    std::vector<double> d(static_cast<std::size_t>(z.size()) * z.size());
    std::vector<double> w(static_cast<std::size_t>(z.size()));
    for (int r = 0; r < z.size(); ++r) {
      labels.push_back("z" + std::to_string(r));
      w[static_cast<std::size_t>(r)] = z.weight(perm[static_cast<std::size_t>(r)]);
      for (int c = 0; c < z.size(); ++c)
        d[static_cast<std::size_t>(r) * z.size() + c] =
            z.dist(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]);
    }
    ExtendedMmSpace zp = ExtendedMmSpace::create(std::move(labels), std::move(d), std::move(w));
    DecompositionResult dec2 = decompose_extended(zp);
    bool identical = dec2.weights.entries == dec.weights.entries &&
                     dec2.parts.size() == dec.parts.size();
    for (std::size_t k = 0; identical && k < dec.parts.size(); ++k)
      identical = dec.parts[k].dist_matrix() == dec2.parts[k].dist_matrix() &&
                  dec.parts[k].weights() == dec2.parts[k].weights();
    if (!identical)
      report.fail("decompose-canonical", report.instances,
                  "permuted rebuild decomposed differently", serialize_space(z));
    report.add_row({"decompose-canonical", seed, report.instances, identical ? 0.0 : 1.0,
                    0.0, 0.0, true});
    // reassembly is isomorphic to the input
    ExtendedMmSpace rebuilt = direct_sum(dec.parts, dec.weights);
    report.add_row({"decompose-reassemble", seed, report.instances,
                    ext_mm_isomorphic(rebuilt, z) ? 0.0 : 1.0, 0.0, 0.0, true});
    ++report.instances;
  }

  // (c) atomic merge identity and its negative case
  {
    WeightVector a({0.5, 0.5}, WeightVector::Mode::A);
    WeightVector b1({0.5, 0.5}, WeightVector::Mode::A);
    WeightVector b2({1.0}, WeightVector::Mode::A);
    WeightVector merged = merge_weighted(a, {b1, b2});
    report.add_row({"merge-negative-detector", seed, report.instances, 1e-12,
                    weight_distance_l1(merged, a), 0.0, true});
    ++report.instances;
  }
  for (int i = 0; i < std::max(4, count / 8); ++i) {
    Rng sub = rng.fork(0x157 + static_cast<std::uint64_t>(i));
    WeightVector a = random_weights_a1(sub, 3).sorted_desc();
    WeightVector a1(a.entries, WeightVector::Mode::A1);
    std::vector<WeightVector> bs;
    std::vector<PyramidApprox> parts;
    for (std::size_t k = 0; k < a.size(); ++k) {
      WeightVector b = random_weights_a1(sub, 2).sorted_desc();
      bs.push_back(b);
      parts.push_back(PyramidApprox::from_atoms(b));
    }
    WeightVector merged = merge_weighted(a1, bs);
    PyramidApprox sum = direct_sum_pyramids(parts, a1, 16);
    WeightVector rec = atoms_limit_of_scaling(sum, {0.05, 0.02, 0.01});
    report.add_row({"merge-identity", seed, report.instances,
                    weight_distance_l1(rec, merged), 1e-6, 0.0, true});
    // canonical small representatives agree as mm-spaces
    FiniteMmSpace ra = atoms_generator(rec, 8);
    FiniteMmSpace rb = atoms_generator(merged, 8);
    report.add_row({"merge-representatives", seed, report.instances,
                    mm_isomorphic(ra, rb, 10) ? 0.0 : 1.0, 0.0, 0.0, true});
    ++report.instances;
  }

  report.runtime_seconds = timer.seconds();
  return report;
}

}  // namespace mms
