#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mms {

// Two tolerance tiers: construction-level checks (metric axioms, measure
// normalization, pushforward equality) and search-level comparisons
// (isometry matching, accumulated float error in products).
inline constexpr double kTolConstruct = 1e-12;
inline constexpr double kTolSearch = 1e-9;
inline constexpr double kTolCoupling = 1e-10;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Certification flag attached to every number that crosses a module or CLI
// boundary. EXACT means the value is the defined quantity up to float
// rounding; LOWER/UPPER are one-sided bounds; ESTIMATE carries no guarantee.
enum class Cert { Exact, Lower, Upper, Estimate };

inline const char* cert_name(Cert c) {
  switch (c) {
    case Cert::Exact: return "EXACT";
    case Cert::Lower: return "LOWER";
    case Cert::Upper: return "UPPER";
    case Cert::Estimate: return "ESTIMATE";
  }
  return "?";
}

// Thrown when an exact search would exceed its configured budget. The
// message names the budget knob so callers can raise it deliberately.
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Deterministic 64-bit generator (splitmix64). Distributions are hand-rolled
// so that streams are reproducible independent of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in {0, 1, ..., n-1}.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Uniform integer in [lo, hi] inclusive.
  int range(int lo, int hi) {
    return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1)));
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Standard exponential. Used for Dirichlet-uniform weights.
  double exponential() {
    double u = unit();
    if (u >= 1.0) u = 0.5;
    return -std::log1p(-u);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent substream; keeps per-start/per-level sampling reproducible
  // regardless of evaluation order.
  Rng fork(std::uint64_t salt) const {
    return Rng(state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 0x51ed2701)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace mms
