#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "noncollide/diffusion.hpp"
#include "noncollide/verify.hpp"
#include "support.hpp"

using namespace noncollide;
using noncollide::testing::thrown_kind;

namespace {

constexpr std::size_t kPaths = 10'000;

WeylPoint random_chamber_point(std::size_t n, Engine& rng, double spread = 2.0) {
  std::normal_distribution<double> g(0.0, spread);
  std::vector<double> v(n);
  do {
    for (double& c : v) c = g(rng);
    std::sort(v.begin(), v.end());
  } while (std::adjacent_find(v.begin(), v.end()) != v.end());
  return WeylPoint(v);
}

double gaussian(double t, double d) { return std::exp(-d * d / (2.0 * t)) / std::sqrt(2.0 * M_PI * t); }

double chamber_mass(const std::function<double(const WeylPoint&)>& density, double lo, double hi) {
  const auto f = [&](std::span<const double> y) { return y[0] < y[1] ? density(WeylPoint({y[0], y[1]})) : 0.0; };
  return chamber_integrate(f, 2, lo, hi, hi - lo).value;
}

double variance(const std::vector<double>& v) {
  double m = 0.0, s = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("Vandermonde product") {
  const std::vector<double> one{3.0}, two{0.0, 2.0}, three{0.0, 1.0, 3.0}, swapped{1.0, 0.0, 3.0};
  CHECK(vandermonde_h(one) == 1.0);
  CHECK(vandermonde_h(two) == 2.0);
  CHECK(vandermonde_h(three) == 6.0);
  CHECK(vandermonde_h(swapped) == -6.0);
}

TEST_CASE("normalizing constants") {
  CHECK(constants(1).c == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
  CHECK(constants(1).c_prime == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
  CHECK(constants(2).c == doctest::Approx(0.5 / std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(constants(2).c_prime == doctest::Approx(0.5 / M_PI).epsilon(1e-14));
  CHECK(constants(2).c_bar == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("h is harmonic") {
  Engine rng = stream_engine(31, 0);
  const double step = 1e-3;
  for (std::size_t n = 2; n <= 5; ++n) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> x = random_chamber_point(n, rng).coords();
      const double h0 = vandermonde_h(x);
      CHECK(h0 > 0.0);
      double lap = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> up(x), down(x);
        up[i] += step;
        down[i] -= step;
        const double hu = vandermonde_h(up), hd = vandermonde_h(down);
        lap += (hu - 2.0 * h0 + hd) / (step * step);
        scale += std::fabs(hu) + std::fabs(hd);
      }
      CHECK(std::fabs(lap) <= 1e-8 * scale / (step * step));
    }
  }
}

TEST_CASE("Karlin-McGregor density") {
  CHECK(km_density(1.0, WeylPoint({0.0}), WeylPoint({0.0})) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
  const WeylPoint x({0.0, 2.0});
  CHECK(km_density(1.0, x, x) == doctest::Approx((1.0 - std::exp(-4.0)) / (2.0 * M_PI)).epsilon(1e-14));
  CHECK(km_density(1.0, x, x) == doctest::Approx(0.15623991862686715).epsilon(1e-14));
  const WeylPoint a({-0.3, 0.4, 1.7}), b({-1.0, 0.2, 0.9});
  CHECK(km_density(0.7, a, b) == doctest::Approx(km_density(0.7, b, a)).epsilon(1e-12));
  CHECK(km_density(2.0, WeylPoint({0.5}), WeylPoint({-1.0})) == doctest::Approx(gaussian(2.0, 1.5)).epsilon(1e-14));
  CHECK(thrown_kind([&] { km_density(0.0, x, x); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("Karlin-McGregor density is nonnegative on the chamber") {
  Engine rng = stream_engine(32, 0);
  std::uniform_real_distribution<double> time(0.01, 5.0);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  std::size_t negative = 0;
  for (int rep = 0; rep < 100'000; ++rep) {
    const std::size_t n = dim(rng);
    const double t = time(rng);
    if (km_density(t, random_chamber_point(n, rng), random_chamber_point(n, rng)) < 0.0) ++negative;
  }
  CHECK(negative == 0);
}

TEST_CASE("weyl points are validated") {
  CHECK(thrown_kind([] { WeylPoint({1.0, 1.0}); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { WeylPoint({2.0, 1.0}); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { WeylPoint(std::vector<double>{}); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { WeylPoint({0.0, NAN}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("survival examples") {
  const WeylPoint x({0.0, 2.0});
  CHECK(survival(1.0, x) == doctest::Approx(std::erf(1.0)).epsilon(1e-14));
  CHECK(std::fabs(survival(1.0, x, SurvivalMethod::quadrature) - std::erf(1.0)) < 1e-6);
  const WeylPoint close({0.0, 0.1});
  const double asym = survival(1.0, close, SurvivalMethod::asymptotic);
  CHECK(asym == doctest::Approx(0.1 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(std::fabs(asym / std::erf(0.05) - 1.0) < 1e-3);
  for (SurvivalMethod m : {SurvivalMethod::closed_form, SurvivalMethod::quadrature, SurvivalMethod::montecarlo})
    CHECK(survival(3.0, WeylPoint({1.5}), m) == 1.0);
}

TEST_CASE("survival methods agree") {
  Engine rng = stream_engine(33, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const WeylPoint x = random_chamber_point(3, rng, 1.0);
    const double exact = survival(1.0, x);
    CHECK(std::fabs(survival(1.0, x, SurvivalMethod::quadrature) - exact) < 1e-6);
  }
  for (std::size_t n = 2; n <= 5; ++n) {
    const WeylPoint x = random_chamber_point(n, rng, 1.5);
    SurvivalOptions opts;
    opts.method = SurvivalMethod::montecarlo;
    opts.mc_samples = 200'000;
    opts.seed = 40 + n;
    const SurvivalEstimate mc = survival_estimate(1.0, x, opts);
    CHECK(mc.std_error > 0.0);
    CHECK(std::fabs(mc.value - survival(1.0, x)) < 4.0 * mc.std_error);
  }
  CHECK(thrown_kind([] { survival(1.0, WeylPoint({0.0, 1.0, 2.0, 3.0}), SurvivalMethod::quadrature); }) ==
        ErrorKind::Unsupported);
}

TEST_CASE("survival decreases in time and increases under dilation") {
  Engine rng = stream_engine(34, 0);
  for (std::size_t n = 2; n <= 3; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const WeylPoint x = random_chamber_point(n, rng, 1.0);
      double prev = 1.0;
      for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double s = survival(t, x);
        CHECK(s <= prev + 1e-15);
        CHECK(s > 0.0);
        prev = s;
      }
      prev = 0.0;
      for (double c : {1.0, 1.5, 2.0, 4.0}) {
        std::vector<double> scaled = x.coords();
        for (double& v : scaled) v *= c;
        const double s = survival(1.0, WeylPoint(scaled));
        CHECK(s >= prev - 1e-15);
        prev = s;
      }
    }
  }
}

TEST_CASE("one-particle transitions are Gaussian") {
  const WeylPoint x({0.3}), y({-0.4});
  CHECK(transition_homogeneous(0.5, x, 2.0, y) == doctest::Approx(gaussian(1.5, 0.7)).epsilon(1e-12));
  CHECK(transition_inhomogeneous(0.5, x, 2.0, y, 3.0) == doctest::Approx(gaussian(1.5, 0.7)).epsilon(1e-12));
  CHECK(transition_homogeneous(0.0, Origin{}, 2.0, y) == doctest::Approx(gaussian(2.0, 0.4)).epsilon(1e-12));
  CHECK(transition_inhomogeneous(0.0, Origin{}, 2.0, y, 3.0) == doctest::Approx(gaussian(2.0, 0.4)).epsilon(1e-12));
}

TEST_CASE("transition densities integrate to one") {
  const auto g_end = [](const WeylPoint& y) { return transition_inhomogeneous(0.0, Origin{}, 1.0, y, 1.0); };
  CHECK(std::fabs(chamber_mass(g_end, -10.0, 10.0) - 1.0) < 1e-6);
  const auto g_mid = [](const WeylPoint& y) { return transition_inhomogeneous(0.0, Origin{}, 0.5, y, 1.0); };
  CHECK(std::fabs(chamber_mass(g_mid, -10.0, 10.0) - 1.0) < 1e-3);
  const WeylPoint x({-0.2, 0.5});
  const auto g_from = [&](const WeylPoint& y) { return transition_inhomogeneous(0.3, x, 0.8, y, 1.0); };
  CHECK(std::fabs(chamber_mass(g_from, -10.0, 10.0) - 1.0) < 1e-3);
  const auto p_origin = [](const WeylPoint& y) { return transition_homogeneous(0.0, Origin{}, 1.0, y); };
  CHECK(std::fabs(chamber_mass(p_origin, -10.0, 10.0) - 1.0) < 1e-3);
  const auto p_from = [&](const WeylPoint& y) { return transition_homogeneous(0.3, x, 1.0, y); };
  CHECK(std::fabs(chamber_mass(p_from, -10.0, 10.0) - 1.0) < 1e-3);
}

TEST_CASE("Chapman-Kolmogorov for the Dyson density") {
  for (const WeylPoint& y : {WeylPoint({-0.5, 0.8}), WeylPoint({0.1, 1.9})}) {
    const auto through = [&](const WeylPoint& z) {
      return transition_homogeneous(0.0, Origin{}, 0.5, z) * transition_homogeneous(0.5, z, 1.0, y);
    };
    const double direct = transition_homogeneous(0.0, Origin{}, 1.0, y);
    CHECK(std::fabs(chamber_mass(through, -8.0, 8.0) - direct) < 1e-3);
  }
}

TEST_CASE("origin density code paths agree") {
  Engine rng = stream_engine(35, 0);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int rep = 0; rep < 50; ++rep) {
      const WeylPoint y = random_chamber_point(n, rng, 1.0);
      const double t = 0.5 + rep * 0.05;
      const double closed = homogeneous_from_origin_closed_form(t, y);
      CHECK(transition_homogeneous(0.0, Origin{}, t, y) == doctest::Approx(closed).epsilon(1e-12));
    }
  }
}

TEST_CASE("long horizon limit of the finite-horizon density") {
  const WeylPoint x({-0.3, 0.6});
  for (const WeylPoint& y : {WeylPoint({-1.0, 0.5}), WeylPoint({0.0, 2.0}), WeylPoint({-0.2, 0.1})}) {
    const double from_origin = transition_inhomogeneous(0.0, Origin{}, 1.0, y, 1e4);
    CHECK(std::fabs(from_origin / transition_homogeneous(0.0, Origin{}, 1.0, y) - 1.0) < 0.01);
    const double from_x = transition_inhomogeneous(0.5, x, 1.0, y, 1e4);
    CHECK(std::fabs(from_x / transition_homogeneous(0.5, x, 1.0, y) - 1.0) < 0.01);
  }
}

TEST_CASE("time ordering is enforced") {
  const WeylPoint x({0.0, 1.0}), y({0.5, 1.5});
  CHECK(thrown_kind([&] { transition_homogeneous(1.0, x, 0.5, y); }) == ErrorKind::TimeOrder);
  CHECK(thrown_kind([&] { transition_homogeneous(0.2, Origin{}, 0.5, y); }) == ErrorKind::TimeOrder);
  CHECK(thrown_kind([&] { transition_inhomogeneous(0.0, x, 2.0, y, 1.0); }) == ErrorKind::TimeOrder);
  CHECK(thrown_kind([&] { drift_inhomogeneous(1.0, x, 1.0); }) == ErrorKind::TimeOrder);
}

TEST_CASE("finite-horizon drift") {
  CHECK(drift_inhomogeneous(0.0, WeylPoint({0.4}), 1.0) == std::vector<double>{0.0});
  const WeylPoint x({0.0, 2.0});
  const auto far = drift_inhomogeneous(0.0, x, 1e4);
  CHECK(std::fabs(far[0] / -0.5 - 1.0) < 0.01);
  CHECK(std::fabs(far[1] / 0.5 - 1.0) < 0.01);
  const auto near = drift_inhomogeneous(1.0 - 1e-4, x, 1.0);
  CHECK(std::fabs(near[0]) < 0.01);
  CHECK(std::fabs(near[1]) < 0.01);
  const auto mid = drift_inhomogeneous(0.0, x, 1.0);
  const double expected = 2.0 * std::exp(-1.0) / (std::sqrt(M_PI) * 2.0 * std::erf(1.0));
  CHECK(mid[0] == doctest::Approx(-expected).epsilon(1e-6));
  CHECK(mid[1] == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("Dyson drift") {
  const std::vector<double> x{0.0, 1.0, 3.0};
  const auto b = dyson_drift(x);
  CHECK(b[0] == doctest::Approx(-1.0 - 1.0 / 3.0));
  CHECK(b[1] == doctest::Approx(1.0 - 0.5));
  CHECK(b[2] == doctest::Approx(1.0 / 3.0 + 0.5));
  CHECK(b[0] + b[1] + b[2] == doctest::Approx(0.0));
}

TEST_CASE("exact origin draws match the origin densities") {
  Engine rng = stream_engine(36, 0);
  std::vector<double> p_low(kPaths), p_high(kPaths), g_low(kPaths), g_high(kPaths);
  for (std::size_t i = 0; i < kPaths; ++i) {
    const auto p = sample_homogeneous_from_origin(2, 1.0, rng);
    const auto g = sample_inhomogeneous_from_origin(2, 0.5, 1.0, rng);
    CHECK(p[0] < p[1]);
    p_low[i] = p[0], p_high[i] = p[1], g_low[i] = g[0], g_high[i] = g[1];
  }
  const auto p_density = [](const WeylPoint& y) { return transition_homogeneous(0.0, Origin{}, 1.0, y); };
  const auto g_density = [](const WeylPoint& y) { return transition_inhomogeneous(0.0, Origin{}, 0.5, y, 1.0); };
  CHECK(ks_one_sample(p_low, marginal_cdf(p_density, 2, 0, -8.0, 8.0)).pass);
  CHECK(ks_one_sample(p_high, marginal_cdf(p_density, 2, 1, -8.0, 8.0)).pass);
  CHECK(ks_one_sample(g_low, marginal_cdf(g_density, 2, 0, -8.0, 8.0)).pass);
  CHECK(ks_one_sample(g_high, marginal_cdf(g_density, 2, 1, -8.0, 8.0)).pass);
}

TEST_CASE("marginal CDF of a Gaussian") {
  const auto density = [](const WeylPoint& y) { return gaussian(1.0, y[0]); };
  const auto cdf = marginal_cdf(density, 1, 0, -8.0, 8.0);
  for (double v : {-2.0, -0.5, 0.0, 1.3})
    CHECK(std::fabs(cdf(v) - 0.5 * std::erfc(-v / std::sqrt(2.0))) < 1e-5);
  CHECK(cdf(-9.0) == 0.0);
  CHECK(cdf(9.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(thrown_kind([&] { marginal_cdf(density, 4, 0, -8.0, 8.0); }) == ErrorKind::Unsupported);
}

TEST_CASE("one-particle simulators are Brownian motion") {
  std::vector<double> inhom(kPaths), dyson(kPaths);
  for (std::size_t i = 0; i < kPaths; ++i) {
    Engine rng = stream_engine(37, i);
    inhom[i] = simulate_inhomogeneous(1, 2.0, 8, rng).states.back()[0];
    dyson[i] = simulate_dyson(WeylPoint({0.5}), 1, 1.0, 8, rng).states.back()[0] - 0.5;
  }
  const double se = std::sqrt(2.0 / kPaths);
  CHECK(std::fabs(variance(inhom) / 2.0 - 1.0) < 3.0 * se);
  CHECK(std::fabs(variance(dyson) - 1.0) < 3.0 * se);
}

TEST_CASE("Dyson paths stay ordered and their sum is driftless") {
  std::vector<double> sums(kPaths);
  std::size_t coincidences = 0;
  for (std::size_t i = 0; i < kPaths; ++i) {
    Engine rng = stream_engine(38, i);
    const SamplePath path = simulate_dyson(Origin{}, 2, 1.0, 256, rng);
    CHECK(path.times.size() == 256);
    CHECK(path.times.front() == doctest::Approx(1.0 / 256));
    CHECK(path.times.back() == doctest::Approx(1.0));
    for (const auto& s : path.states) REQUIRE(s[0] < s[1]);
    coincidences += path.near_coincidences;
    sums[i] = path.states.back()[0] + path.states.back()[1];
  }
  CHECK(coincidences == 0);
  CHECK(std::fabs(variance(sums) / 2.0 - 1.0) < 3.0 * std::sqrt(2.0 / kPaths));
}

TEST_CASE("simulations are reproducible and thin their records") {
  Engine a = stream_engine(39, 5), b = stream_engine(39, 5);
  SimulationOptions opts;
  opts.record_every = 10;
  const SamplePath p = simulate_dyson(WeylPoint({-1.0, 0.0, 1.0}), 3, 1.0, 95, a, opts);
  const SamplePath q = simulate_dyson(WeylPoint({-1.0, 0.0, 1.0}), 3, 1.0, 95, b, opts);
  CHECK(p.states == q.states);
  CHECK(p.times == q.times);
  CHECK(p.times.front() == 0.0);
  CHECK(p.times.back() == doctest::Approx(1.0));
  CHECK(p.times.size() == 11);
}

TEST_CASE("noncolliding bridge-to-horizon process") {
  constexpr std::size_t steps = 1000;
  std::vector<double> low(kPaths), high(kPaths);
  double late_sq = 0.0;
  std::size_t late_n = 0;
  double dt = 0.0;
  for (std::size_t i = 0; i < kPaths; ++i) {
    Engine rng = stream_engine(40, i);
    const SamplePath path = simulate_inhomogeneous(2, 1.0, steps, rng);
    dt = path.step;
    for (std::size_t k = 1; k < path.times.size(); ++k) {
      REQUIRE(path.states[k][0] < path.states[k][1]);
      if (path.times[k - 1] < 0.99 - 1e-12) continue;
      for (std::size_t c = 0; c < 2; ++c) {
        const double d = path.states[k][c] - path.states[k - 1][c];
        late_sq += d * d;
        ++late_n;
      }
    }
    low[i] = path.states.back()[0];
    high[i] = path.states.back()[1];
  }
  CHECK(late_n == kPaths * 2 * 10);
  CHECK(std::fabs(late_sq / static_cast<double>(late_n) / dt - 1.0) < 0.05);
  const auto density = [](const WeylPoint& y) { return transition_inhomogeneous(0.0, Origin{}, 1.0, y, 1.0); };
  CHECK(ks_one_sample(low, marginal_cdf(density, 2, 0, -8.0, 8.0)).statistic < 0.02);
  CHECK(ks_one_sample(high, marginal_cdf(density, 2, 1, -8.0, 8.0)).statistic < 0.02);
}
