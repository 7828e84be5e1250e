#include <doctest.h>

#include <cmath>
#include <complex>

#include "noncollide/rmt.hpp"
#include "noncollide/verify.hpp"
#include "support.hpp"

using namespace noncollide;
using noncollide::testing::thrown_kind;

namespace {

constexpr std::size_t kSamples = 10'000;

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double std_error(const std::vector<double>& v) { return std::sqrt(variance(v) / static_cast<double>(v.size())); }

}  // namespace

TEST_CASE("Hermitian Brownian motion entries") {
  Engine rng = stream_engine(51, 0);
  std::vector<double> scalar(kSamples), trace(kSamples);
  std::vector<std::vector<double>> mod2(9, std::vector<double>(kSamples));
  for (std::size_t s = 0; s < kSamples; ++s) {
    scalar[s] = sample_hermitian_bm(1, 2.0, rng).matrix(0, 0).real();
    const HermitianState h = sample_hermitian_bm(3, 1.0, rng);
    REQUIRE(is_hermitian(h.matrix));
    trace[s] = h.matrix.trace().real();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mod2[3 * i + j][s] = std::norm(h.matrix(i, j));
  }
  CHECK(std::fabs(variance(scalar) / 2.0 - 1.0) < 3.0 * std::sqrt(2.0 / kSamples));
  for (const auto& m : mod2) CHECK(std::fabs(mean(m) - 1.0) < 3.0 * std_error(m));
  const auto normal3 = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(6.0)); };
  CHECK(*ks_one_sample(trace, normal3).p_value > 0.01);
}

TEST_CASE("diagonalization") {
  Engine rng = stream_engine(52, 0);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::MatrixXcd m = sample_hermitian_bm(n, 1.0, rng).matrix;
      const EigenFrame f = diagonalize(m);
      const Eigen::MatrixXcd& u = f.vectors;
      CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
      Eigen::MatrixXcd d = u.adjoint() * m * u;
      for (std::size_t k = 0; k < n; ++k) d(k, k) -= f.values[k];
      CHECK(d.cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()));
      const auto closed = eigenvalues(m);
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) CHECK(f.values[k - 1] < f.values[k]);
        CHECK(closed[k] == doctest::Approx(f.values[k]).epsilon(1e-10));
        Eigen::Index big = 0;
        u.col(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff(&big);
        const std::complex<double> lead = u(big, static_cast<Eigen::Index>(k));
        CHECK(lead.real() > 0.0);
        CHECK(lead.imag() == 0.0);
      }
    }
  }
  CHECK(thrown_kind([] { diagonalize(Eigen::MatrixXcd(2, 3)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("Haar unitary") {
  Engine rng = stream_engine(53, 0);
  const Eigen::MatrixXcd u = random_unitary(4, rng);
  CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, std::complex<double>(0.0, 1.0), std::complex<double>(0.0, 1.0), 2.0;
  CHECK_FALSE(is_hermitian(m));
}

TEST_CASE("eigenvalue paths") {
  std::vector<double> one(kSamples), sums(kSamples);
  std::size_t coincidences = 0;
  for (std::size_t s = 0; s < kSamples; ++s) {
    Engine rng = stream_engine(54, s);
    one[s] = eigen_path(1, 1.5, 4, rng).states.back()[0];
    const SamplePath p = eigen_path(2, 1.0, 16, rng);
    REQUIRE(p.times.size() == 16);
    CHECK(p.times.front() == doctest::Approx(1.0 / 16));
    for (const auto& st : p.states) REQUIRE(st[0] < st[1]);
    coincidences += p.near_coincidences;
    sums[s] = p.states.back()[0] + p.states.back()[1];
  }
  CHECK(coincidences == 0);
  const double se = std::sqrt(2.0 / kSamples);
  CHECK(std::fabs(variance(one) / 1.5 - 1.0) < 3.0 * se);
  CHECK(std::fabs(variance(sums) / 2.0 - 1.0) < 3.0 * se);
}

TEST_CASE("drift and quadratic variation of the eigenvalues") {
  std::vector<SamplePath> paths;
  DriftQvAccumulator left, right;
  for (std::size_t s = 0; s < 400; ++s) {
    Engine rng = stream_engine(55, s);
    paths.push_back(eigen_path(2, 1.0, 1000, rng));
    (s < 200 ? left : right).add(paths.back());
  }
  const DriftQvReport r = estimate_drift_qv(paths);
  REQUIRE(r.slope.has_value());
  CHECK(r.paths == 400);
  CHECK(r.observations + 2 * r.steps_excluded == 400 * 999 * 2);
  const double slope_se = (r.slope_ci->hi - r.slope_ci->lo) / (2.0 * 1.96);
  CHECK(std::fabs(*r.slope - 1.0) < 4.0 * slope_se);
  const double int_se = (r.intercept_ci.hi - r.intercept_ci.lo) / (2.0 * 1.96);
  CHECK(std::fabs(r.intercept) < 4.0 * int_se);
  CHECK(std::fabs(r.qv - 1.0) < 0.02);

  left.merge(right);
  const DriftQvReport merged = left.report();
  CHECK(*merged.slope == doctest::Approx(*r.slope).epsilon(1e-9));
  CHECK(merged.qv == doctest::Approx(r.qv).epsilon(1e-12));
  CHECK(merged.observations == r.observations);
}

TEST_CASE("scalar Brownian motion has no drift and unit quadratic variation") {
  std::vector<SamplePath> paths;
  for (std::size_t s = 0; s < 200; ++s) {
    Engine rng = stream_engine(56, s);
    paths.push_back(eigen_path(1, 1.0, 500, rng));
  }
  const DriftQvReport r = estimate_drift_qv(paths);
  CHECK_FALSE(r.slope.has_value());
  CHECK(r.steps_excluded == 0);
  const double int_se = (r.intercept_ci.hi - r.intercept_ci.lo) / (2.0 * 1.96);
  CHECK(std::fabs(r.intercept) < 4.0 * int_se);
  CHECK(std::fabs(r.qv - 1.0) < 0.03);
  CHECK(thrown_kind([] { DriftQvAccumulator().report(); }) == ErrorKind::InsufficientSamples);
}

TEST_CASE("covariation matrix") {
  Engine rng = stream_engine(57, 0);
  const Eigen::MatrixXd g1 = estimate_gamma(1, 100'000, rng);
  CHECK(std::fabs(g1(0, 0) - 1.0) < 0.03);
  const Eigen::MatrixXd g2 = estimate_gamma(2, 100'000, rng);
  CHECK((g2.array() - 1.0).abs().maxCoeff() < 0.03);
  const Eigen::MatrixXcd v = random_unitary(2, rng);
  const Eigen::MatrixXd g2c = estimate_gamma(2, 100'000, rng, v);
  CHECK((g2c.array() - 1.0).abs().maxCoeff() < 0.03);
  CHECK(thrown_kind([&] { estimate_gamma(2, 999, rng); }) == ErrorKind::InvalidArgument);
  const Eigen::MatrixXcd wrong = random_unitary(3, rng);
  CHECK(thrown_kind([&] { estimate_gamma(2, 1000, rng, wrong); }) == ErrorKind::InvalidArgument);
}
