#pragma once

#include <string>
#include <vector>

#include "mms/common.hpp"
#include "mms/space.hpp"

namespace mms {

// Two-sided bracket for a quantity whose exact value has no known algorithm.
// lower <= true value <= upper; when the endpoints agree the value is exact.
struct CertifiedInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_witness;
  std::string upper_witness;

  bool exact(double tol = kTolSearch) const { return upper - lower <= tol; }
};

// Real vector on a space with |v_i - v_j| <= d(i, j); validated on build.
struct LipschitzFunction {
  std::vector<double> values;

  LipschitzFunction(const FiniteMmSpace& x, std::vector<double> v);
};

inline constexpr int kPartialDiamBudget = 22;
inline constexpr int kCoverExactBudget = 40;

// Partial diameter: min diam(A) over subsets with mass(A) >= mass_floor.
// Exact: binary search over candidate diameters with a max-weight-clique
// feasibility check. diam(empty) = 0.
double partial_diameter(const FiniteMmSpace& x, const std::vector<double>& mass,
                        double mass_floor, int budget = kPartialDiamBudget);
double partial_diameter(const FiniteMmSpace& x, double one_minus_kappa,
                        int budget = kPartialDiamBudget);

// kappa-observable diameter as a certified interval. The lower endpoint
// comes from a candidate family of 1-Lipschitz observables and a separation
// bound; the upper from the partial diameter and separation caps. Both
// endpoints are selections from {0} union {distance entries}, so they scale
// exactly with the metric.
CertifiedInterval obs_diameter(const FiniteMmSpace& x, double kappa,
                               std::uint64_t seed = 17);

// Largest t such that disjoint subsets of the prescribed masses are pairwise
// t-separated. Exact threshold sweep with a point-labeling feasibility
// search. strict=true requires mass(A_i) > kappa_i instead of >=.
double separation_distance(const FiniteMmSpace& x,
                           const std::vector<double>& kappas,
                           bool strict = false);

struct CoverResult {
  int count = 0;
  bool exact = true;  // false when the search budget forced the greedy bound
  std::vector<int> centers;
};

// Minimum number of closed r-balls centered at points of X covering mass
// >= 1-kappa. Exact branch-and-bound with a greedy upper bound and a
// residual-mass lower bound; greedy-only above the budget.
CoverResult covering_number(const FiniteMmSpace& x, double r, double kappa,
                            int budget = kCoverExactBudget);

// Minimum-cardinality eps-supporting net: mu(B_eps(N)) >= 1 - eps.
std::vector<int> eps_supporting_net(const FiniteMmSpace& x, double eps,
                                    int budget = kCoverExactBudget);

}  // namespace mms
