#include <doctest.h>

#include <cmath>
#include <map>

#include "noncollide/parallel.hpp"
#include "noncollide/schur.hpp"
#include "noncollide/verify.hpp"
#include "noncollide/walks.hpp"
#include "support.hpp"

using namespace noncollide;
using noncollide::testing::thrown_kind;

namespace {

constexpr std::size_t kSamples = 10'000;

// Endpoint histogram over the keys of a count table.
template <typename Draw>
std::vector<std::size_t> endpoint_histogram(const CountTable& table, std::size_t samples, Draw&& draw) {
  std::map<std::vector<long>, std::size_t> slot;
  for (const auto& [y, c] : table.counts) slot.emplace(y, slot.size());
  std::vector<std::size_t> hist(slot.size(), 0);
  for (std::size_t i = 0; i < samples; ++i) ++hist.at(slot.at(draw().endpoint()));
  return hist;
}

std::vector<double> table_probabilities(const CountTable& table) {
  std::vector<double> p;
  const BigInt total = table.surviving();
  for (const auto& [y, c] : table.counts) p.push_back(ratio_to_double(c, total));
  return p;
}

}  // namespace

TEST_CASE("count_vicious examples") {
  const std::vector<long> x{0, 2}, y{0, 2}, odd{1, 3};
  CHECK(count_vicious(x, y, 2) == 3);
  CHECK(count_vicious(x, odd, 2) == 0);
  const std::vector<long> x1{0}, y1{0};
  CHECK(count_vicious(x1, y1, 4) == 6);
  const std::vector<long> descending{2, 0};
  CHECK(count_vicious(x, descending, 2) == 0);
}

TEST_CASE("frozen counts from general starts") {
  // Frozen after enumerate_vicious and the walk-graph LGV determinant agreed.
  const std::vector<long> x3{0, 2, 4}, y3{1, 3, 5};
  CHECK(count_vicious(x3, y3, 3) == 10);
  CHECK(enumerate_vicious(LatticeConfig(x3), y3, 3).size() == 10);
  const std::vector<long> xw{0, 4, 6}, yw{0, 2, 6};
  CHECK(count_vicious(xw, yw, 4) == 96);
  CHECK(enumerate_vicious(LatticeConfig(xw), yw, 4).size() == 96);
}

TEST_CASE("count_canonical examples") {
  const std::vector<long> y2{0, 2};
  CHECK(count_canonical(y2, 2, 2) == 3);
  CHECK(principal_specialization(endpoints_to_partition(y2, 2), 2) == 3);
  const std::vector<long> y4{0, 2, 6, 10};
  CHECK(count_canonical(y4, 4, 6) == 5880);
  CHECK(count_vicious(canonical_start(4), y4, 6) == 5880);
  for (std::size_t n = 1; n <= 5; ++n) CHECK(count_canonical(canonical_start(n), n, 0) == 1);
  const std::vector<long> bad{1, 3};
  CHECK(thrown_kind([&] { count_canonical(bad, 2, 2); }) == ErrorKind::Parity);
}

TEST_CASE("canonical routes agree for N<=3, T<=6") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int t = 0; t <= 6; ++t) {
      for (const auto& y : reachable_endpoints(canonical_start(n), t)) {
        const BigInt c = count_canonical(y, n, t);
        if (c == 0) continue;
        const Partition shape = endpoints_to_partition(y, t);
        CHECK(c == principal_specialization(shape, t));
        CHECK(c == BigInt(static_cast<unsigned long>(count_ssyt(shape, t))));
        CHECK(c == count_vicious(canonical_start(n), y, t));
      }
    }
  }
}

TEST_CASE("enumerate_vicious examples") {
  const LatticeConfig x({0, 2});
  const std::vector<long> y{0, 2}, far{-10, 10};
  const auto walks = enumerate_vicious(x, y, 2);
  CHECK(walks.size() == 3);
  for (const auto& w : walks) {
    CHECK(w.nonintersecting());
    CHECK(w.endpoint() == y);
  }
  CHECK(enumerate_vicious(x, far, 2).empty());
  const std::vector<long> one{1};
  CHECK(enumerate_vicious(LatticeConfig({0}), one, 1).size() == 1);
  CHECK(thrown_kind([&] { enumerate_vicious(x, y, 2, 8); }) == ErrorKind::CapExceeded);
}

TEST_CASE("lattice configuration validation") {
  CHECK(thrown_kind([] { LatticeConfig({0, 1}); }) == ErrorKind::Parity);
  CHECK(thrown_kind([] { LatticeConfig({2, 0}); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { LatticeConfig(std::vector<long>{}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("survival probability is weakly decreasing in T") {
  for (const std::vector<long>& x : {std::vector<long>{0, 2}, std::vector<long>{0, 2, 4}, std::vector<long>{0, 4, 6}}) {
    Rational prev = 1;
    for (int t = 0; t <= 8; ++t) {
      const CountTable table = build_count_table(x, t);
      const Rational s = table.survival_probability();
      CHECK(s <= prev);
      CHECK(s > 0);
      Rational sum = 0;
      for (const auto& [y, c] : table.counts) sum += table.probability(y);
      CHECK(sum == s);
      CHECK(table.surviving() == survival_count(x, t));
      prev = s;
    }
  }
}

TEST_CASE("transition weights sum to exactly one along sampled paths") {
  const ConditionedWalkSampler sampler(LatticeConfig({0, 2, 4}), 12);
  Engine rng = stream_engine(11, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const WalkRecord w = sampler.sample(rng);
    CHECK(w.nonintersecting());
    for (int t = 0; t < w.horizon(); ++t) {
      Rational total = 0;
      const auto moves = sampler.transition_weights(w.positions(t), w.horizon() - t);
      bool taken = false;
      for (const auto& [next, p] : moves) {
        total += p;
        if (next == w.positions(t + 1)) taken = true;
      }
      CHECK(total == 1);
      CHECK(taken);
    }
  }
}

TEST_CASE("one conditioned walker is a simple random walk") {
  Engine rng = stream_engine(12, 0);
  double sum = 0.0;
  const LatticeConfig x({0});
  for (std::size_t i = 0; i < kSamples; ++i) sum += sample_conditioned(x, 1, rng).steps()[0][0];
  CHECK(std::fabs(sum / kSamples) < 3.0 / std::sqrt(static_cast<double>(kSamples)));
}

TEST_CASE("conditioned endpoint law matches the count table") {
  const LatticeConfig x({0, 2});
  const CountTable table = build_count_table(x.positions(), 2);
  const ConditionedWalkSampler sampler(x, 2);
  Engine rng = stream_engine(13, 0);
  const auto hist = endpoint_histogram(table, kSamples, [&] { return sampler.sample(rng); });
  const auto probs = table_probabilities(table);
  CHECK(chi_square_gof(hist, probs).pass);
}

TEST_CASE("Doob sampler agrees with rejection at N=2, T=4") {
  const LatticeConfig x({0, 2});
  const CountTable table = build_count_table(x.positions(), 4);
  const ConditionedWalkSampler sampler(x, 4);
  Engine a = stream_engine(14, 0), b = stream_engine(14, 1);
  const auto doob = endpoint_histogram(table, kSamples, [&] { return sampler.sample(a); });
  const auto rej = endpoint_histogram(table, kSamples, [&] { return rejection_sample(x, 4, b); });
  CHECK(chi_square_two_sample(doob, rej).pass);
}

TEST_CASE("rejection sampling") {
  Engine rng = stream_engine(15, 0);
  for (int i = 0; i < 1000; ++i) CHECK_NOTHROW(rejection_sample(LatticeConfig({0}), 5, rng, 1));

  const LatticeConfig x({0, 2});
  const double exact = ratio_to_double(build_count_table(x.positions(), 2).surviving(), BigInt(16));
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < kSamples; ++i) {
    try {
      rejection_sample(x, 2, rng, 1);
      ++accepted;
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::CapExceeded);
    }
  }
  const double rate = static_cast<double>(accepted) / kSamples;
  CHECK(std::fabs(rate - exact) < 3.0 * std::sqrt(exact * (1.0 - exact) / kSamples));

  const LatticeConfig x3({0, 2, 4});
  const CountTable table = build_count_table(x3.positions(), 4);
  const auto hist = endpoint_histogram(table, kSamples, [&] { return rejection_sample(x3, 4, rng); });
  CHECK(chi_square_gof(hist, table_probabilities(table)).pass);
}

TEST_CASE("conditioning on an impossible event is rejected") {
  CHECK(thrown_kind([] { ConditionedWalkSampler(LatticeConfig({0, 2}), -1); }) == ErrorKind::InvalidArgument);
  const ConditionedWalkSampler sampler(LatticeConfig({0, 2}), 3);
  const std::vector<long> stuck{0, 0};
  CHECK(thrown_kind([&] { sampler.transition_weights(stuck, 2); }) == ErrorKind::ZeroSurvival);
}

TEST_CASE("a shared sampler gives the same draws on any number of threads") {
  const ConditionedWalkSampler sampler(LatticeConfig({0, 2, 4, 6}), 20);
  auto run = [&](std::size_t threads) {
    std::vector<std::vector<long>> ends(64);
    parallel_for(ends.size(), threads, [&](std::size_t i) {
      Engine rng = stream_engine(16, i);
      ends[i] = sampler.sample(rng).endpoint();
    });
    return ends;
  };
  CHECK(run(1) == run(4));
}

TEST_CASE("lattice rounding") {
  CHECK(lattice_round(100, -1.0) == -100);
  CHECK(lattice_round(100, 0.3) == 30);
  CHECK(lattice_round(100, 0.35) == 34);
  CHECK(lattice_round(10000, 1.0) == 10000);
}

TEST_CASE("scaling comparison") {
  const LatticeConfig one({0});
  const std::vector<double> y1{0.5};
  const auto c1 = scaling_check(one, 1.0, y1, 400);
  CHECK(c1.rhs == doctest::Approx(std::exp(-0.125) / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(std::fabs(c1.relative_error()) < 1e-3);

  const LatticeConfig two({0, 2});
  const std::vector<double> y{-1.0, 1.0};
  const auto coarse = scaling_check(two, 1.0, y, 100);
  const auto fine = scaling_check(two, 1.0, y, 400);
  CHECK(std::fabs(fine.relative_error()) < std::fabs(coarse.relative_error()));
  CHECK(std::fabs(fine.relative_error()) < 0.2);
  CHECK(fine.rhs / coarse.rhs == doctest::Approx(0.25).epsilon(1e-12));
  // Frozen after comparing the exact lattice count with the Gaussian limit.
  CHECK(coarse.relative_error() == doctest::Approx(-1.6666e-4).epsilon(1e-3));
  CHECK(fine.relative_error() == doctest::Approx(-1.0417e-5).epsilon(1e-3));

  const std::vector<double> close{0.0, 0.001};
  CHECK(thrown_kind([&] { scaling_check(two, 1.0, close, 100); }) == ErrorKind::InvalidArgument);
}
