#include "noncollide/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "noncollide/error.hpp"

namespace noncollide {

namespace {

constexpr const char* kModule = "rmt";
constexpr double kCoincidenceGap = 1e-12;

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, kModule, what); }

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double min_gap(std::span<const double> x) {
  double g = INFINITY;
  for (std::size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
  return g;
}

}  // namespace

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

EigenFrame diagonalize(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::InvalidArgument, "diagonalize needs a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NumericalBreakdown, "Hermitian eigensolver failed");
  EigenFrame frame;
  const auto& vals = solver.eigenvalues();
  frame.values.assign(vals.data(), vals.data() + vals.size());
  frame.vectors = solver.eigenvectors();
  for (Eigen::Index c = 0; c < frame.vectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    frame.vectors.col(c).cwiseAbs().maxCoeff(&pivot);
    const std::complex<double> z = frame.vectors(pivot, c);
    frame.vectors.col(c) *= std::conj(z) / std::abs(z);
    frame.vectors(pivot, c) = std::abs(z);
  }
  Eigen::MatrixXcd residual = frame.vectors.adjoint() * m * frame.vectors;
  residual.diagonal() -= vals.cast<std::complex<double>>();
  if (max_abs(residual) > 1e-10 * std::max(1.0, max_abs(m)))
    fail(ErrorKind::NumericalBreakdown, "diagonalization residual above 1e-10");
  return frame;
}

std::vector<double> eigenvalues(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return {m(0, 0).real()};
  if (n == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const double mean = (a + d) / 2.0;
    const double r = std::hypot((a - d) / 2.0, std::abs(m(0, 1)));
    return {mean - r, mean + r};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NumericalBreakdown, "Hermitian eigensolver failed");
  const auto& vals = solver.eigenvalues();
  return {vals.data(), vals.data() + vals.size()};
}

Eigen::MatrixXcd hermitian_increment(std::size_t n, double dt, Engine& rng) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "dimension must be at least 1");
  if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "time step must be positive");
  std::normal_distribution<double> diag(0.0, std::sqrt(dt));
  std::normal_distribution<double> off(0.0, std::sqrt(dt / 2.0));
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd m(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    m(i, i) = diag(rng);
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double s = off(rng);
      const double a = off(rng);
      m(i, j) = {s, a};
      m(j, i) = {s, -a};
    }
  }
  return m;
}

HermitianState sample_hermitian_bm(std::size_t n, double t, Engine& rng) {
  if (!(t > 0.0)) fail(ErrorKind::InvalidArgument, "time must be positive");
  return {hermitian_increment(n, t, rng), t};
}

Eigen::MatrixXcd random_unitary(std::size_t n, Engine& rng) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "dimension must be at least 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = {re, im};
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < N; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

SamplePath eigen_path(std::size_t n, double t_end, std::size_t n_steps, Engine& rng, const SimulationOptions& options) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "dimension must be at least 1");
  if (!(t_end > 0.0)) fail(ErrorKind::InvalidArgument, "t_end must be positive");
  if (n_steps == 0) fail(ErrorKind::InvalidArgument, "n_steps must be at least 1");
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  SamplePath path;
  path.scheme = "exact-matrix";
  path.step = t_end / static_cast<double>(n_steps);
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    xi += hermitian_increment(n, path.step, rng);
    if (k % every != 0 && k != n_steps) continue;
    std::vector<double> values = eigenvalues(xi);
    if (min_gap(values) < kCoincidenceGap) ++path.near_coincidences;
    path.times.push_back(path.step * static_cast<double>(k));
    path.states.push_back(std::move(values));
  }
  return path;
}

void DriftQvAccumulator::add(const SamplePath& path) {
  if (path.states.empty()) return;
  const std::size_t n = path.states.front().size();
  if (dimension_ == 0) dimension_ = n;
  if (n != dimension_) fail(ErrorKind::InvalidArgument, "paths differ in dimension");
  ++paths_;
  std::vector<double> drift(n);
  for (std::size_t k = 0; k + 1 < path.states.size(); ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    const auto& a = path.states[k];
    const auto& b = path.states[k + 1];
    for (std::size_t i = 0; i < n; ++i) {
      const double q = (b[i] - a[i]) * (b[i] - a[i]) / dt;
      qv_n_ += 1.0;
      qv_sum_ += q;
      qv_sq_ += q * q;
    }
    if (n > 1 && !(min_gap(a) > 10.0 * std::sqrt(dt))) {
      ++excluded_;
      continue;
    }
    drift = dyson_drift(a);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = drift[i];
      const double y = (b[i] - a[i]) / dt;
      n_ += 1.0;
      sx_ += x;
      sy_ += y;
      sxx_ += x * x;
      sxy_ += x * y;
      syy_ += y * y;
    }
  }
}

void DriftQvAccumulator::merge(const DriftQvAccumulator& o) {
  if (dimension_ == 0) dimension_ = o.dimension_;
  if (o.dimension_ != 0 && o.dimension_ != dimension_) fail(ErrorKind::InvalidArgument, "paths differ in dimension");
  paths_ += o.paths_;
  excluded_ += o.excluded_;
  n_ += o.n_;
  sx_ += o.sx_;
  sy_ += o.sy_;
  sxx_ += o.sxx_;
  sxy_ += o.sxy_;
  syy_ += o.syy_;
  qv_n_ += o.qv_n_;
  qv_sum_ += o.qv_sum_;
  qv_sq_ += o.qv_sq_;
}

DriftQvReport DriftQvAccumulator::report(double z) const {
  if (n_ < 3.0 || qv_n_ < 2.0) fail(ErrorKind::InsufficientSamples, "too few usable increments for the drift regression");
  DriftQvReport r;
  r.dimension = dimension_;
  r.paths = paths_;
  r.observations = static_cast<std::size_t>(n_);
  r.steps_excluded = excluded_;
  const double mean_x = sx_ / n_, mean_y = sy_ / n_;
  const double syy = syy_ - sy_ * mean_y;
  if (dimension_ == 1) {
    r.intercept = mean_y;
    const double se = std::sqrt(std::max(0.0, syy / (n_ - 1.0)) / n_);
    r.intercept_ci = {r.intercept - z * se, r.intercept + z * se};
  } else {
    const double sxx = sxx_ - sx_ * mean_x;
    const double sxy = sxy_ - sx_ * mean_y;
    if (!(sxx > 0.0)) fail(ErrorKind::InsufficientSamples, "no spread in the drift regressor");
    const double slope = sxy / sxx;
    r.slope = slope;
    r.intercept = mean_y - slope * mean_x;
    const double s2 = std::max(0.0, syy - slope * sxy) / (n_ - 2.0);
    const double se_slope = std::sqrt(s2 / sxx);
    const double se_int = std::sqrt(s2 * (1.0 / n_ + mean_x * mean_x / sxx));
    r.slope_ci = Interval{slope - z * se_slope, slope + z * se_slope};
    r.intercept_ci = {r.intercept - z * se_int, r.intercept + z * se_int};
  }
  r.qv = qv_sum_ / qv_n_;
  const double qv_se = std::sqrt(std::max(0.0, qv_sq_ / qv_n_ - r.qv * r.qv) / qv_n_);
  r.qv_ci = {r.qv - z * qv_se, r.qv + z * qv_se};
  return r;
}

DriftQvReport estimate_drift_qv(std::span<const SamplePath> paths, double z) {
  DriftQvAccumulator acc;
  for (const auto& p : paths) acc.add(p);
  return acc.report(z);
}

Eigen::MatrixXd estimate_gamma(std::size_t n, std::size_t n_steps, Engine& rng, const std::optional<Eigen::MatrixXcd>& conjugation) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "dimension must be at least 1");
  if (n_steps < 1000) fail(ErrorKind::InvalidArgument, "estimate_gamma needs at least 1000 steps");
  const auto N = static_cast<Eigen::Index>(n);
  if (conjugation && (conjugation->rows() != N || conjugation->cols() != N))
    fail(ErrorKind::InvalidArgument, "conjugation matrix has the wrong dimension");
  const double dt = 1.0 / static_cast<double>(n_steps);
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(N, N);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const Eigen::MatrixXcd u = diagonalize(xi).vectors;
    Eigen::MatrixXcd d = hermitian_increment(n, dt, rng);
    if (conjugation) d = (*conjugation) * d * conjugation->adjoint();
    const Eigen::MatrixXcd rotated = u.adjoint() * d * u;
    sum += rotated.cwiseAbs2() / dt;
    xi += d;
  }
  return sum / static_cast<double>(n_steps);
}

}  // namespace noncollide
