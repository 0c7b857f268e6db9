#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mms/boxdist.hpp"
#include "mms/common.hpp"
#include "mms/invariants.hpp"
#include "mms/measure.hpp"
#include "mms/space.hpp"

namespace mms {

// Finite stand-in for a pyramid: either a directed list of generator
// mm-spaces (an approximation chain; the top generator carries the current
// approximation) or an atom weight vector for the scale-invariant pyramid it
// generates. Quantities computed from it are flagged LOWER/UPPER/ESTIMATE,
// never silently exact.
struct PyramidApprox {
  enum class Kind { Generators, Atoms };

  Kind kind = Kind::Generators;
  std::vector<FiniteMmSpace> generators;
  bool directed_checked = false;
  WeightVector atoms;

  // Direct-sum structure, when this pyramid was built as a sum; enables the
  // sum-vs-sum distance rule.
  struct SumInfo {
    std::vector<PyramidApprox> parts;
    WeightVector weights;
  };
  std::shared_ptr<const SumInfo> sum;

  // Set when the top generator is a gapped sum of concrete mm-spaces;
  // enables the generator-vs-sum rule with its 2^(-r/2) tail.
  struct GapInfo {
    std::vector<FiniteMmSpace> parts;
    WeightVector weights;
    double gap = 0.0;
  };
  std::shared_ptr<const GapInfo> gapped;

  static PyramidApprox from_space(FiniteMmSpace x);
  // verify_directed runs the pairwise domination check when every generator
  // fits the exact-search budget.
  static PyramidApprox from_generators(std::vector<FiniteMmSpace> gens,
                                       bool verify_directed = false);
  static PyramidApprox from_atoms(WeightVector a);

  const FiniteMmSpace& top() const;
};

struct DecompositionResult {
  WeightVector weights;              // nonincreasing, sums to one
  std::vector<FiniteMmSpace> parts;  // canonical order: mass desc, then form
};

// Splits an extended space into its finite-distance components with
// renormalized measures, in a canonical order (descending mass, ties by the
// minimal lexicographic relabeling of the part).
DecompositionResult decompose_extended(const ExtendedMmSpace& z);

// Isomorphism of extended spaces via decomposition and component matching.
bool ext_mm_isomorphic(const ExtendedMmSpace& a, const ExtendedMmSpace& b);

// Direct sum of pyramid approximations: the k-th generator is the gapped sum
// of the parts' k-th generators at gap k. Atoms parts are expanded through
// atoms_generator at the same gap schedule. depth = 0 derives the generator
// count from the parts.
PyramidApprox direct_sum_pyramids(const std::vector<PyramidApprox>& parts,
                                  const WeightVector& a, std::size_t depth = 0);

// A sampled measure on (R^N, l-inf): support points and masses.
struct SampledMeasure {
  std::vector<std::vector<double>> points;
  std::vector<double> mass;
};

struct MeasurementSample {
  int dim = 0;
  double radius = 0.0;
  std::vector<SampledMeasure> measures;
};

double sampled_prokhorov(const SampledMeasure& a, const SampledMeasure& b);

// Pushforwards of the generators' measures under canonical anchor-distance
// coordinates and seeded random 1-Lipschitz maps (McShane extensions),
// every map re-verified 1-Lipschitz into the l-inf ball of radius R.
MeasurementSample measurement_sample(const PyramidApprox& p, int n_dim, double radius,
                                     int budget, std::uint64_t seed);

// The raw map images behind measurement_sample for a single space: one entry
// per map, each an |X|-vector of cube points. Verified 1-Lipschitz into the
// ball. Used when a caller needs paired pushforwards of several measures
// through the same maps.
std::vector<std::vector<std::vector<double>>> measurement_maps(
    const FiniteMmSpace& x, int n_dim, double radius, int budget, std::uint64_t seed);

// Sampled measure from map images and per-point masses (zeros dropped,
// duplicate image points merged).
SampledMeasure make_sampled(const std::vector<std::vector<double>>& image,
                            const std::vector<double>& mass);

// Upper bound on rho via the applicable bound rules (box between top
// generators; the sum-vs-sum rule; atom-vector distance; the gapped-sum
// rule). nullopt when no rule applies.
std::optional<double> rho_upper(const PyramidApprox& p, const PyramidApprox& q,
                                int pair_budget = kBoxPairBudget);

// Truncated measurement-sample estimate of rho. Uncertified: the samples
// are subsets of the true measurement sets, so this neither bounds nor is
// bounded by rho. Trend reporting only.
double rho_empirical(const PyramidApprox& p, const PyramidApprox& q, int n_max,
                     int budget, std::uint64_t seed);

// Scale the generators toward zero along the grid, cluster at radius
// sqrt(t), and read off the stabilized cluster-mass vector: the finite
// shadow of the scale-invariant limit. Heuristic; throws on non-stabilizing
// grids, with diagnostics.
WeightVector atoms_limit_of_scaling(const PyramidApprox& p,
                                    const std::vector<double>& t_grid,
                                    double tol = 1e-9);

// Generator maxima; LOWER bounds for the pyramid-level suprema.
double sep_of_pyramid(const PyramidApprox& p, const std::vector<double>& kappas);
CertifiedInterval obsdiam_of_pyramid(const PyramidApprox& p, double kappa,
                                     std::uint64_t seed = 17);

struct PyramidCover {
  int value = 0;           // LOWER bound for the pyramid covering number
  bool diverging = false;  // fired when the value grows along the generators
};
PyramidCover cov_of_pyramid(const PyramidApprox& p, double r, double kappa);

}  // namespace mms
