#include "noncollide/walks.hpp"

#include <cmath>
#include <functional>

#include "noncollide/diffusion.hpp"
#include "noncollide/error.hpp"

namespace noncollide {

namespace {

constexpr const char* kModule = "walks";

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, kModule, what); }

bool strictly_increasing(std::span<const long> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] >= v[i]) return false;
  return true;
}

// C(T, (T + x - y) / 2), zero for odd or out-of-range arguments.
BigInt lattice_binomial(int horizon, long x, long y) {
  const long twice = horizon + x - y;
  if (twice % 2 != 0) return BigInt(0);
  return binomial(horizon, twice / 2);
}

// Calls visit(y) for each strictly increasing y with |y_i - x_i| <= T and
// y_i = x_i + T (mod 2).
template <typename Visit>
void for_each_endpoint(std::span<const long> start, int steps, Visit&& visit) {
  std::vector<long> y(start.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == start.size()) {
      visit(y);
      return;
    }
    long lo = start[i] - steps;
    if (i > 0 && lo <= y[i - 1]) {
      lo = y[i - 1] + 1;
      if (((lo - start[i] - steps) % 2 + 2) % 2 != 0) ++lo;
    }
    for (long v = lo; v <= start[i] + steps; v += 2) {
      y[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

std::vector<long> gaps_of(const std::vector<long>& state) {
  std::vector<long> g;
  for (std::size_t i = 1; i < state.size(); ++i) g.push_back(state[i] - state[i - 1]);
  return g;
}

}  // namespace

LatticeConfig::LatticeConfig(std::vector<long> positions) : positions_(std::move(positions)) {
  if (positions_.empty()) fail(ErrorKind::InvalidArgument, "at least one walker required");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (positions_[i] % 2 != 0) fail(ErrorKind::Parity, "starting positions must be even");
    if (i > 0 && positions_[i - 1] >= positions_[i]) fail(ErrorKind::InvalidArgument, "starting positions must be strictly increasing");
  }
}

BigInt count_vicious(std::span<const long> start, std::span<const long> end, int horizon) {
  if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  if (start.size() != end.size()) fail(ErrorKind::InvalidArgument, "start and end differ in walker count");
  if (!strictly_increasing(start) || !strictly_increasing(end)) return BigInt(0);
  const std::size_t n = start.size();
  SquareMatrix<BigInt> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = lattice_binomial(horizon, start[i], end[j]);
  return bareiss_determinant(std::move(m));
}

BigInt count_canonical(std::span<const long> end, std::size_t walkers, int horizon) {
  if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  if (end.size() != walkers) fail(ErrorKind::InvalidArgument, "endpoint must have one entry per walker");
  for (std::size_t j = 0; j < walkers; ++j)
    if ((horizon - end[j]) % 2 != 0) fail(ErrorKind::Parity, "endpoint " + std::to_string(end[j]) + " has the wrong parity for T = " + std::to_string(horizon));
  if (!strictly_increasing(end)) return BigInt(0);
  // det[C(T, L_j + i - j)] with L_j = (T + 2(j-1) - y_j) / 2.
  SquareMatrix<BigInt> m(walkers);
  for (std::size_t i = 0; i < walkers; ++i) {
    for (std::size_t j = 0; j < walkers; ++j) {
      const long l = (horizon + 2 * static_cast<long>(j) - end[j]) / 2;
      m(i, j) = binomial(horizon, l + static_cast<long>(i) - static_cast<long>(j));
    }
  }
  return bareiss_determinant(std::move(m));
}

Rational CountTable::probability(const std::vector<long>& end) const {
  auto it = counts.find(end);
  if (it == counts.end()) return Rational(0);
  Rational r(it->second);
  mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(walkers * static_cast<std::size_t>(horizon)));
  r.canonicalize();
  return r;
}

BigInt CountTable::surviving() const {
  BigInt total(0);
  for (const auto& [y, c] : counts) total += c;
  return total;
}

Rational CountTable::survival_probability() const {
  Rational r(surviving());
  mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(walkers * static_cast<std::size_t>(horizon)));
  r.canonicalize();
  return r;
}

CountTable build_count_table(std::span<const long> start, int horizon) {
  if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  CountTable table;
  table.horizon = horizon;
  table.walkers = start.size();
  if (!strictly_increasing(start)) return table;
  for_each_endpoint(start, horizon, [&](const std::vector<long>& y) {
    BigInt c = count_vicious(start, y, horizon);
    if (c != 0) table.counts.emplace(y, std::move(c));
  });
  return table;
}

std::vector<std::vector<long>> reachable_endpoints(std::span<const long> start, int horizon) {
  if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  std::vector<std::vector<long>> out;
  for_each_endpoint(start, horizon, [&](const std::vector<long>& y) { out.push_back(y); });
  return out;
}

BigInt survival_count(std::span<const long> state, int steps) {
  if (steps < 0) fail(ErrorKind::InvalidArgument, "steps must be nonnegative");
  if (!strictly_increasing(state)) return BigInt(0);
  BigInt total(0);
  for_each_endpoint(state, steps, [&](const std::vector<long>& y) { total += count_vicious(state, y, steps); });
  return total;
}

std::vector<WalkRecord> enumerate_vicious(const LatticeConfig& start, std::span<const long> end, int horizon, std::size_t cap) {
  if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  const std::size_t n = start.size();
  if (end.size() != n) fail(ErrorKind::InvalidArgument, "start and end differ in walker count");
  const std::size_t bits = n * static_cast<std::size_t>(horizon);
  if (bits >= 63 || (std::size_t{1} << bits) > cap)
    fail(ErrorKind::CapExceeded, "2^(N T) step matrices exceed the enumeration cap of " + std::to_string(cap));

  std::vector<WalkRecord> out;
  std::vector<std::vector<int>> steps(n, std::vector<int>(static_cast<std::size_t>(horizon)));
  std::vector<long> pos = start.positions();
  // Depth-first over (time, walker); ordering is checked once a time slice is complete.
  std::function<void(int, std::size_t)> rec = [&](int t, std::size_t i) {
    if (t == horizon) {
      for (std::size_t k = 0; k < n; ++k)
        if (pos[k] != end[k]) return;
      out.emplace_back(start.positions(), steps, horizon);
      return;
    }
    if (i == n) {
      for (std::size_t k = 1; k < n; ++k)
        if (pos[k - 1] >= pos[k]) return;
      rec(t + 1, 0);
      return;
    }
    for (int s : {-1, 1}) {
      // Prune walkers that can no longer reach their endpoint.
      const long remaining = horizon - t - 1;
      if (std::labs(pos[i] + s - end[i]) > remaining) continue;
      steps[i][static_cast<std::size_t>(t)] = s;
      pos[i] += s;
      rec(t, i + 1);
      pos[i] -= s;
    }
  };
  rec(0, 0);
  return out;
}

ConditionedWalkSampler::ConditionedWalkSampler(LatticeConfig start, int horizon) : start_(std::move(start)), horizon_(horizon) {
  if (horizon_ < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  if (survival(start_.positions(), horizon_) == 0) fail(ErrorKind::ZeroSurvival, "no nonintersecting walk exists; cannot condition");
}

BigInt ConditionedWalkSampler::survival(const std::vector<long>& state, int steps) const {
  auto key = std::make_pair(gaps_of(state), steps);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  BigInt value = survival_count(state, steps);
  std::lock_guard<std::mutex> lock(mutex_);
  return memo_.emplace(std::move(key), std::move(value)).first->second;
}

std::vector<std::pair<std::vector<long>, Rational>> ConditionedWalkSampler::transition_weights(const std::vector<long>& state,
                                                                                                int remaining) const {
  if (remaining < 1) fail(ErrorKind::InvalidArgument, "no steps remaining");
  const BigInt total = survival(state, remaining);
  if (total == 0) fail(ErrorKind::ZeroSurvival, "state cannot survive the remaining steps");
  const std::size_t n = state.size();
  std::vector<std::pair<std::vector<long>, Rational>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<long> next(state);
    for (std::size_t i = 0; i < n; ++i) next[i] += (mask >> i & 1) ? 1 : -1;
    if (!strictly_increasing(next)) continue;
    BigInt c = survival(next, remaining - 1);
    if (c == 0) continue;
    Rational w(c, total);
    w.canonicalize();
    out.emplace_back(std::move(next), std::move(w));
  }
  return out;
}

WalkRecord ConditionedWalkSampler::sample(Engine& rng) const {
  const std::size_t n = start_.size();
  std::vector<std::vector<int>> steps(n, std::vector<int>(static_cast<std::size_t>(horizon_)));
  std::vector<long> state = start_.positions();
  for (int t = 0; t < horizon_; ++t) {
    const int remaining = horizon_ - t;
    // Exact draw: the successor counts partition survival(state, remaining).
    BigInt u = uniform_below(survival(state, remaining), rng);
    std::vector<long> chosen;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n) && chosen.empty(); ++mask) {
      std::vector<long> next(state);
      for (std::size_t i = 0; i < n; ++i) next[i] += (mask >> i & 1) ? 1 : -1;
      if (!strictly_increasing(next)) continue;
      const BigInt c = survival(next, remaining - 1);
      if (u < c) chosen = std::move(next);
      else u -= c;
    }
    if (chosen.empty()) fail(ErrorKind::NumericalBreakdown, "successor counts do not sum to the survival count");
    for (std::size_t i = 0; i < n; ++i) steps[i][static_cast<std::size_t>(t)] = static_cast<int>(chosen[i] - state[i]);
    state = std::move(chosen);
  }
  return WalkRecord(start_.positions(), std::move(steps), horizon_);
}

WalkRecord sample_conditioned(const LatticeConfig& start, int horizon, Engine& rng) {
  return ConditionedWalkSampler(start, horizon).sample(rng);
}

WalkRecord rejection_sample(const LatticeConfig& start, int horizon, Engine& rng, std::size_t max_tries) {
  if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  const std::size_t n = start.size();
  std::vector<std::vector<int>> steps(n, std::vector<int>(static_cast<std::size_t>(horizon)));
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<long> pos = start.positions();
    bool alive = true;
    for (int t = 0; t < horizon && alive; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        const int s = (rng() >> 63) ? 1 : -1;
        steps[i][static_cast<std::size_t>(t)] = s;
        pos[i] += s;
      }
      for (std::size_t i = 1; i < n; ++i)
        if (pos[i - 1] >= pos[i]) alive = false;
    }
    if (alive) return WalkRecord(start.positions(), steps, horizon);
  }
  fail(ErrorKind::CapExceeded, "rejection sampler exceeded " + std::to_string(max_tries) + " attempts");
}

long lattice_round(double scale, double v) { return 2 * static_cast<long>(std::floor(scale * v / 2.0)); }

ScalingComparison scaling_check(const LatticeConfig& start, double t, std::span<const double> end, double scale) {
  if (!(t > 0.0) || !(scale > 0.0)) fail(ErrorKind::InvalidArgument, "t and L must be positive");
  const std::size_t n = start.size();
  if (end.size() != n) fail(ErrorKind::InvalidArgument, "endpoint must have one entry per walker");

  ScalingComparison out;
  out.steps = lattice_round(scale * scale, t);
  for (double v : end) out.rounded_end.push_back(lattice_round(scale, v));
  if (!strictly_increasing(out.rounded_end)) fail(ErrorKind::InvalidArgument, "rounded endpoint is degenerate; increase L");
  if (out.steps <= 0) fail(ErrorKind::InvalidArgument, "rounded time is zero; increase L");

  const BigInt m = count_vicious(start.positions(), out.rounded_end, static_cast<int>(out.steps));
  // V_N = 2^{-NT} M_N, assembled from mantissa and exponent to avoid overflow.
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, m.get_mpz_t());
  const double log_lhs = std::log(std::fabs(mant)) + (static_cast<double>(exp2) - static_cast<double>(n) * static_cast<double>(out.steps)) * std::log(2.0) +
                         static_cast<double>(n) * std::log(scale / 2.0);
  out.lhs = (m == 0) ? 0.0 : std::copysign(std::exp(log_lhs), mant);

  std::vector<double> x_scaled;
  double norm2 = 0.0;
  for (long x : start.positions()) x_scaled.push_back(static_cast<double>(x) / scale);
  for (double v : end) norm2 += v * v;
  const double nn = static_cast<double>(n);
  out.rhs = constants(n).c_prime * std::pow(t, -nn * nn / 2.0) * vandermonde_h(x_scaled) * std::exp(-norm2 / (2.0 * t)) *
            vandermonde_h(end);
  return out;
}

}  // namespace noncollide
