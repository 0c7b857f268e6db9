#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mms/common.hpp"

namespace mms {

// Finite nonincreasing weight sequence. Mode A1: entries in (0,1] summing to
// one, order free. Mode A: nonincreasing, sum at most one; the empty vector
// stands for (0).
struct WeightVector {
  enum class Mode { A1, A };

  std::vector<double> entries;
  Mode mode = Mode::A1;

  WeightVector() = default;
  WeightVector(std::vector<double> e, Mode m);

  double norm1() const;
  std::size_t size() const { return entries.size(); }
  WeightVector sorted_desc() const;
};

// ||A - B||_1 with the shorter vector padded by zeros.
double weight_distance_l1(const WeightVector& a, const WeightVector& b);

// Nonincreasing rearrangement of the products a_n * b_{n,k} (mode A).
WeightVector merge_weighted(const WeightVector& a,
                            const std::vector<WeightVector>& bs);

// Finite metric measure space: point labels, symmetric distance matrix with
// zero diagonal satisfying the triangle inequality, strictly positive
// weights summing to one. Immutable after construction.
class FiniteMmSpace {
 public:
  static FiniteMmSpace create(std::vector<std::string> labels,
                              std::vector<double> dist,
                              std::vector<double> weight);
  // Drops zero-weight points before validating (support convention).
  static FiniteMmSpace create_pruned(std::vector<std::string> labels,
                                     std::vector<double> dist,
                                     std::vector<double> weight);

  int size() const { return n_; }
  double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
  double weight(int i) const { return weight_[static_cast<std::size_t>(i)]; }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& dist_matrix() const { return dist_; }
  const std::vector<double>& weights() const { return weight_; }

  double diameter() const;
  // Sorted distinct distance values, including 0.
  std::vector<double> distance_values() const;

 private:
  FiniteMmSpace() = default;
  int n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::vector<double> weight_;

  friend class ExtendedMmSpace;
};

// Same data with distances in [0, +inf]; +inf uses the IEEE infinity, which
// saturates under addition. Carrier of direct sums.
class ExtendedMmSpace {
 public:
  static ExtendedMmSpace create(std::vector<std::string> labels,
                                std::vector<double> dist,
                                std::vector<double> weight);
  static ExtendedMmSpace from_finite(const FiniteMmSpace& x);

  int size() const { return n_; }
  double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
  double weight(int i) const { return weight_[static_cast<std::size_t>(i)]; }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& dist_matrix() const { return dist_; }
  const std::vector<double>& weights() const { return weight_; }

  bool all_finite() const;
  // Throws if any distance is infinite.
  FiniteMmSpace as_finite() const;
  // Classes of the finite-distance equivalence relation, each sorted.
  std::vector<std::vector<int>> finite_components() const;

 private:
  ExtendedMmSpace() = default;
  int n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::vector<double> weight_;
};

struct PointedSpace {
  FiniteMmSpace space;
  int base = 0;

  PointedSpace(FiniteMmSpace s, int b);
};

// --- constructions ---------------------------------------------------------

FiniteMmSpace one_point_space();
FiniteMmSpace two_point_space(double length, double p);
// m-cycle with the geodesic metric scaled to the given circumference,
// uniform weights.
FiniteMmSpace cycle_space(int m, double circumference);
// n uniform points at mutual distance n.
FiniteMmSpace dissipation_space(int n);

FiniteMmSpace scale(const FiniteMmSpace& x, double t);
ExtendedMmSpace scale(const ExtendedMmSpace& x, double t);

FiniteMmSpace restrict_normalize(const FiniteMmSpace& x,
                                 const std::vector<int>& subset);

inline constexpr int kDefaultPowerBudget = 20000;

FiniteMmSpace lp_product(const FiniteMmSpace& x, const FiniteMmSpace& y, double p);
ExtendedMmSpace lp_product(const ExtendedMmSpace& x, const ExtendedMmSpace& y, double p);
FiniteMmSpace lp_power(const FiniteMmSpace& x, double p, int n,
                       int budget = kDefaultPowerBudget);

ExtendedMmSpace direct_sum(const std::vector<FiniteMmSpace>& parts,
                           const WeightVector& a);
ExtendedMmSpace direct_sum_extended(const std::vector<ExtendedMmSpace>& parts,
                                    const WeightVector& a);

// Member of X({X_n}; A; r): inter-part distances are routed through the base
// points plus r. Asserts inter-part set distance >= r.
FiniteMmSpace gapped_sum(const std::vector<PointedSpace>& parts,
                         const WeightVector& a, double r);

FiniteMmSpace wedge_sum(const PointedSpace& xp, const PointedSpace& yp,
                        double alpha);

// Gapped sum with gap n of one-point atoms weighted by A, plus a dissipation
// block carrying the missing mass when ||A||_1 < 1. The empty vector gives
// the bare dissipation space.
FiniteMmSpace atoms_generator(const WeightVector& a, int n);

// --- order and isomorphism decisions ---------------------------------------

inline constexpr int kDefaultDominationBudget = 9;
inline constexpr int kDefaultIsoBudget = 10;

// Tests Y < X in the Lipschitz order: a 1-Lipschitz map pushing mu_X onto
// mu_Y exactly. Returns the witness map (indices into Y) or nullopt.
std::optional<std::vector<int>> lipschitz_dominates(
    const FiniteMmSpace& x, const FiniteMmSpace& y,
    int budget = kDefaultDominationBudget);

struct EpsDominationWitness {
  std::vector<int> map;
  std::vector<int> domain;
};

// Tests Y <_eps X: f 1-Lipschitz up to eps on a domain of mass >= 1-eps with
// d_P(f_* mu_X, mu_Y) <= eps.
std::optional<EpsDominationWitness> lipschitz_dominates_eps(
    const FiniteMmSpace& x, const FiniteMmSpace& y, double eps,
    int budget = kDefaultDominationBudget);

// Bijection matching distances and weights within 1e-9.
std::optional<std::vector<int>> mm_isomorphic(const FiniteMmSpace& x,
                                              const FiniteMmSpace& y,
                                              int budget = kDefaultIsoBudget);

}  // namespace mms
