#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mms/common.hpp"
#include "mms/measure.hpp"
#include "mms/space.hpp"

namespace mms {

// Subset of X x Y index pairs. May be empty (dis(empty) = 0).
struct CorrespondenceSubset {
  std::vector<std::pair<int, int>> pairs;
};

// sup over pairs of pairs of |d_X - d_Y|. Pairs with an infinite distance on
// exactly one side contribute infinity; both infinite contribute zero.
double distortion(const CorrespondenceSubset& s, const FiniteMmSpace& x,
                  const FiniteMmSpace& y);

// max_pi pi(S) over couplings of (mu, nu), as a transportation maximization
// on integer-scaled masses.
double max_coupling_mass(const CorrespondenceSubset& s,
                         const std::vector<double>& mu,
                         const std::vector<double>& nu);

// Same maximization, returning a full coupling attaining it.
std::pair<double, Coupling> max_coupling_with_plan(const CorrespondenceSubset& s,
                                                   const std::vector<double>& mu,
                                                   const std::vector<double>& nu);

inline constexpr int kBoxPairBudget = 20;

// Box distance: min over subsets S of max(dis(S), 1 - max pi(S)).
// Exact; the subset scan is a distortion-threshold binary search with a
// branch-and-bound clique/coupling maximization at each threshold.
double box_distance_exact(const FiniteMmSpace& x, const FiniteMmSpace& y,
                          int pair_budget = kBoxPairBudget);

// 2 d_P(mu, nu) on a shared underlying metric; upper bound for the box
// distance between (X, mu) and (X, nu).
double box_upper_from_prokhorov(const FiniteMmSpace& space,
                                const std::vector<double>& mu,
                                const std::vector<double>& nu);

struct MmIsoCertificate {
  std::vector<int> map;     // X -> Y
  std::vector<int> domain;  // non-exceptional subset of X
  double eps = 0.0;
  bool domain_exact = true;  // false when the domain search fell back to greedy
};

inline constexpr int kCertifyDomainBudget = 12;

// Checks whether f is an eps-mm-isomorphism: finds a maximal-mass domain
// meeting the distortion constraint (max-weight independent set of the
// conflict graph), then checks the measure conditions.
std::optional<MmIsoCertificate> certify_mm_iso(const std::vector<int>& f,
                                               const FiniteMmSpace& x,
                                               const FiniteMmSpace& y, double eps,
                                               int domain_budget = kCertifyDomainBudget);

// Smallest eps at which f certifies with the full domain: the max of the
// two-sided distortion over all pairs and the Prokhorov defect.
double certificate_eps_full_domain(const std::vector<int>& f,
                                   const FiniteMmSpace& x,
                                   const FiniteMmSpace& y);

// Searches all maps X -> Y for an eps-mm-isomorphism. Exponential; intended
// for small instances when cross-checking the box/certificate relation.
std::optional<MmIsoCertificate> find_mm_iso(const FiniteMmSpace& x,
                                            const FiniteMmSpace& y, double eps);

}  // namespace mms
