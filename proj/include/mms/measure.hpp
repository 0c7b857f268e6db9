#pragma once

#include <memory>
#include <vector>

#include "mms/common.hpp"
#include "mms/space.hpp"

namespace mms {

// Probability measure on a fixed finite metric space. Unlike mm-space
// weights, entries may be zero (pushforwards create them).
struct MeasureOnSpace {
  std::shared_ptr<const FiniteMmSpace> space;
  std::vector<double> mass;

  MeasureOnSpace() = default;
  MeasureOnSpace(std::shared_ptr<const FiniteMmSpace> s, std::vector<double> m);
};

// Joint probability matrix over X x Y with prescribed marginals.
struct Coupling {
  int nx = 0;
  int ny = 0;
  std::vector<double> joint;  // nx*ny row-major

  double at(int i, int j) const { return joint[static_cast<std::size_t>(i) * ny + j]; }
  bool has_marginals(const std::vector<double>& mu,
                     const std::vector<double>& nu,
                     double tol = kTolCoupling) const;
};

MeasureOnSpace convex_combination(const WeightVector& a,
                                  const std::vector<MeasureOnSpace>& measures);

MeasureOnSpace pushforward(const MeasureOnSpace& mu, const std::vector<int>& f,
                           std::shared_ptr<const FiniteMmSpace> target);

double total_variation(const MeasureOnSpace& mu, const MeasureOnSpace& nu);
double total_variation(const std::vector<double>& mu, const std::vector<double>& nu);

inline constexpr int kProkhorovOracleBudget = 14;

// Exact Prokhorov distance by scanning all subsets A and the finite break
// points of mu(U_eps(A)) + eps. Reference oracle, n <= 14.
double prokhorov_subset_oracle(const FiniteMmSpace& space,
                               const std::vector<double>& mu,
                               const std::vector<double>& nu,
                               int budget = kProkhorovOracleBudget);

// Same value via monotone feasibility over candidate thresholds, each
// decided by an integer max-flow (mass moved farther than eps bounded by
// eps). Polynomial; agrees with the oracle within 1e-9.
double prokhorov_flow(const FiniteMmSpace& space, const std::vector<double>& mu,
                      const std::vector<double>& nu);

// Metric-only variant for measures on an ad-hoc carrier (dist is an n x n
// row-major matrix).
double prokhorov_flow_matrix(int n, const std::vector<double>& dist,
                             const std::vector<double>& mu,
                             const std::vector<double>& nu);

double prokhorov(const MeasureOnSpace& mu, const MeasureOnSpace& nu);

}  // namespace mms
