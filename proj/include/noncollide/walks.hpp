#pragma once

// Vicious walkers on the integer lattice: determinantal counts, brute-force
// oracles, exact samplers for the nonintersecting conditioned law, and the
// finite-L comparison against the diffusion scaling limit.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "noncollide/combinat.hpp"
#include "noncollide/exact.hpp"
#include "noncollide/random.hpp"

namespace noncollide {

/// Strictly increasing starting positions, all even.
class LatticeConfig {
 public:
  explicit LatticeConfig(std::vector<long> positions);
  const std::vector<long>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }

 private:
  std::vector<long> positions_;
};

/// det[C(T, (T + x_i - y_j) / 2)], entries zero when the argument is odd or
/// out of range; zero when x or y is not strictly increasing.
BigInt count_vicious(std::span<const long> start, std::span<const long> end, int horizon);

/// Count from (0, 2, ..., 2(N-1)) via the dual Jacobi-Trudi determinant in
/// binomials. Throws ErrorKind::Parity on a parity mismatch.
BigInt count_canonical(std::span<const long> end, std::size_t walkers, int horizon);

/// Every endpoint y with a nonzero count, as a sorted map.
struct CountTable {
  int horizon = 0;
  std::size_t walkers = 0;
  std::map<std::vector<long>, BigInt> counts;

  /// V_N(T, y | x) = 2^{-NT} M_N(T, y | x).
  Rational probability(const std::vector<long>& end) const;
  /// Sum of counts: number of walks that survive to T.
  BigInt surviving() const;
  /// Probability that no two walkers meet up to T.
  Rational survival_probability() const;
};

CountTable build_count_table(std::span<const long> start, int horizon);

/// Strictly increasing y with |y_i - x_i| <= T and y_i = x_i + T (mod 2), in lexicographic order.
std::vector<std::vector<long>> reachable_endpoints(std::span<const long> start, int horizon);

/// Number of nonintersecting walks of `steps` steps started at `state`
/// (arbitrary parity allowed; the state need only be strictly increasing).
BigInt survival_count(std::span<const long> state, int steps);

/// All step matrices whose walk stays ordered and ends at `end`. Requires
/// 2^{NT} <= cap.
std::vector<WalkRecord> enumerate_vicious(const LatticeConfig& start, std::span<const long> end, int horizon,
                                          std::size_t cap = 10'000'000);

/// Exact sampler for walks conditioned to stay ordered up to the horizon.
/// One-step transition weights are ratios of memoized survival counts; the
/// memo is guarded so a single sampler can serve concurrent callers.
class ConditionedWalkSampler {
 public:
  ConditionedWalkSampler(LatticeConfig start, int horizon);

  WalkRecord sample(Engine& rng) const;

  /// Feasible one-step moves from `state` with `remaining` steps left, paired
  /// with their exact conditional probabilities.
  std::vector<std::pair<std::vector<long>, Rational>> transition_weights(const std::vector<long>& state, int remaining) const;

  const LatticeConfig& start() const noexcept { return start_; }
  int horizon() const noexcept { return horizon_; }

 private:
  BigInt survival(const std::vector<long>& state, int steps) const;

  LatticeConfig start_;
  int horizon_;
  mutable std::mutex mutex_;
  // Keyed by (gaps between neighbours, steps); counts are translation invariant.
  mutable std::map<std::pair<std::vector<long>, int>, BigInt> memo_;
};

WalkRecord sample_conditioned(const LatticeConfig& start, int horizon, Engine& rng);

/// Samples unconditioned walks until one stays ordered. Throws
/// ErrorKind::CapExceeded after `max_tries` rejections.
WalkRecord rejection_sample(const LatticeConfig& start, int horizon, Engine& rng, std::size_t max_tries = 1'000'000);

struct ScalingComparison {
  double lhs = 0.0;  ///< (L/2)^N V_N(phi_{L^2}(t), phi_L(y) | x)
  double rhs = 0.0;  ///< c'_N t^{-N^2/2} h_N(x/L) exp(-|y|^2/2t) h_N(y)
  long steps = 0;    ///< phi_{L^2}(t)
  std::vector<long> rounded_end;
  double relative_error() const { return lhs / rhs - 1.0; }
};

/// phi_L(v) = 2 floor(L v / 2).
long lattice_round(double scale, double v);

ScalingComparison scaling_check(const LatticeConfig& start, double t, std::span<const double> end, double scale);

}  // namespace noncollide
