#pragma once

#include <string>
#include <vector>

#include "mms/common.hpp"
#include "mms/space.hpp"

namespace mms {

// One asserted (or reported) inequality instance. lhs <= rhs is the claim;
// slack = rhs - lhs. Estimate rows are recorded but never fail a check.
struct CheckRow {
  std::string check;
  std::uint64_t seed = 0;
  int instance = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool asserted = true;
};

struct CheckFailure {
  std::string check;
  int instance = 0;
  std::string what;
  std::string replay;  // serialized instance data, replayable via the parser
};

struct CheckReport {
  std::string name;
  std::uint64_t seed = 0;
  int instances = 0;
  std::vector<CheckRow> rows;
  std::vector<CheckFailure> failures;
  double min_slack = kInf;  // over asserted rows
  double max_slack = -kInf;
  double runtime_seconds = 0.0;
  // serialized data of the instance under test; attached to failures so they
  // replay through the file parser
  std::string context;

  bool pass() const { return failures.empty(); }
  void add_row(CheckRow row);
  void fail(const std::string& check, int instance, const std::string& what,
            const std::string& replay);
};

// CSV trace: check,seed,instance,lhs,rhs,slack,runtime_ms. The runtime
// column is fixed to zero so reruns are byte-identical; wall-clock time is
// reported in the summary only.
std::string report_csv(const CheckReport& report);
std::string report_summary(const CheckReport& report);

// --- random instances --------------------------------------------------------

// Random mm-space: points embedded in a random l-inf cube (triangle
// inequality by construction), optionally perturbed and repaired by
// shortest-path closure; Dirichlet weights pruned of near-zeros.
FiniteMmSpace random_space(Rng& rng, int n_min, int n_max, double diam_cap = 0.0);
std::vector<double> random_measure(Rng& rng, int n);
WeightVector random_weights_a1(Rng& rng, int max_len);

// Random dominated pair: X is a metric quotient of Y, so X < Y with a
// constructive witness.
std::pair<FiniteMmSpace, FiniteMmSpace> random_dominated_pair(Rng& rng, int y_max);

// --- check suites -------------------------------------------------------------

CheckReport check_metric_lemmas(std::uint64_t seed, int count);
CheckReport check_sum_bounds(std::uint64_t seed, int count);
CheckReport check_invariant_lemmas(std::uint64_t seed, int count);

// --- experiments --------------------------------------------------------------

CheckReport experiment_dissipation(const std::vector<int>& n_list);
CheckReport experiment_product_ball_decay(const FiniteMmSpace& base, double p,
                                          double r, const std::vector<int>& n_list);
CheckReport experiment_wedge_convergence(int m, const std::vector<int>& n_list,
                                         double alpha, std::uint64_t seed);
CheckReport experiment_decomposition(std::uint64_t seed, int count);

}  // namespace mms
