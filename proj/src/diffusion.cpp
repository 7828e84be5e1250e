#include "noncollide/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "noncollide/error.hpp"
#include "noncollide/verify.hpp"

namespace noncollide {

namespace {

constexpr const char* kModule = "diffusion";
constexpr int kMaxHalvings = 40;
constexpr double kTailWidth = 10.0;  // in units of sqrt(t)

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, kModule, what); }

bool ordered(std::span<const double> x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i - 1] < x[i])) return false;
  return true;
}

double log_vandermonde(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) s += std::log(x[j] - x[i]);
  return s;
}

double norm2(std::span<const double> y) { return std::inner_product(y.begin(), y.end(), y.begin(), 0.0); }

// log |det| of exp(-(x_j - y_i)^2 / 2t), with each row rescaled by its largest entry.
// Returns the signed determinant as (sign, log magnitude).
std::pair<double, double> log_gaussian_det(double t, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n == 2) {
    // Closed form keeps full relative precision when the configuration is nearly degenerate.
    const double a = -((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1])) / (2.0 * t);
    const double v = -std::expm1(-(x[1] - x[0]) * (y[1] - y[0]) / t);
    if (v == 0.0) return {0.0, -INFINITY};
    return {v > 0 ? 1.0 : -1.0, a + std::log(std::fabs(v))};
  }
  Eigen::MatrixXd m(n, n);
  double log_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = INFINITY;
    for (std::size_t j = 0; j < n; ++j) lo = std::min(lo, (x[j] - y[i]) * (x[j] - y[i]));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = std::exp(-((x[j] - y[i]) * (x[j] - y[i]) - lo) / (2.0 * t));
    log_scale -= lo / (2.0 * t);
  }
  const double det = m.partialPivLu().determinant();
  if (det == 0.0) return {0.0, -INFINITY};
  return {det > 0 ? 1.0 : -1.0, log_scale + std::log(std::fabs(det))};
}

// Pfaffian of a skew-symmetric matrix by expansion along the first row.
double pfaffian(const std::vector<std::vector<double>>& a, std::vector<std::size_t>& idx) {
  if (idx.empty()) return 1.0;
  const std::size_t first = idx.front();
  double total = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const std::size_t partner = idx[k];
    std::vector<std::size_t> rest;
    for (std::size_t m = 1; m < idx.size(); ++m)
      if (m != k) rest.push_back(idx[m]);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    total += sign * a[first][partner] * pfaffian(a, rest);
  }
  return total;
}

double survival_closed_form(double t, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n <= 1) return 1.0;
  // Integrating det[phi_j(y_i)] over the chamber gives Pf[erf((x_k - x_j) / 2 sqrt t)],
  // bordered by a row of ones when N is odd.
  const std::size_t m = n + (n % 2);
  std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
  const double scale = 2.0 * std::sqrt(t);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      a[j][k] = std::erf((x[k] - x[j]) / scale);
      a[k][j] = -a[j][k];
    }
  }
  if (m != n) {
    for (std::size_t j = 0; j < n; ++j) {
      a[j][n] = 1.0;
      a[n][j] = -1.0;
    }
  }
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return pfaffian(a, idx);
}

double survival_quadrature(double t, const WeylPoint& x, double tol) {
  const std::size_t n = x.size();
  if (n == 1) return 1.0;
  if (n > 3) fail(ErrorKind::Unsupported, "quadrature survival supports N <= 3");
  const double w = kTailWidth * std::sqrt(t);
  const double lo = x[0] - w, hi = x[n - 1] + w;
  const double gap = (x[n - 1] - x[0]) + 2.0 * w;
  auto f = [&](std::span<const double> y) { return km_density(t, x, WeylPoint(std::vector<double>(y.begin(), y.end()))); };
  auto integrand = [&](std::span<const double> y) {
    for (std::size_t i = 1; i < y.size(); ++i)
      if (!(y[i - 1] < y[i])) return 0.0;
    return f(y);
  };
  return chamber_integrate(integrand, n, lo, hi, gap, tol).value;
}

SurvivalEstimate survival_montecarlo(double t, const WeylPoint& x, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = x.size();
  if (n == 1) return {1.0, 0.0};
  if (samples < 2) fail(ErrorKind::InsufficientSamples, "Monte Carlo survival needs at least two samples");
  Engine rng = stream_engine(seed, 0);
  std::normal_distribution<double> normal(0.0, std::sqrt(t));
  std::vector<double> y(n);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + normal(rng);
    double w = 0.0;
    if (ordered(y)) {
      // f(y) / prod phi(y_i - x_i): divide row i by its diagonal Gaussian.
      Eigen::MatrixXd m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m(i, j) = std::exp(((x[i] - y[i]) * (x[i] - y[i]) - (x[j] - y[i]) * (x[j] - y[i])) / (2.0 * t));
      w = m.partialPivLu().determinant();
    }
    sum += w;
    sum2 += w * w;
  }
  const double ns = static_cast<double>(samples);
  const double mean = sum / ns;
  const double var = std::max(0.0, (sum2 / ns - mean * mean) * ns / (ns - 1.0));
  return {mean, std::sqrt(var / ns)};
}

void require_positive_time(double t) {
  if (!(t > 0.0)) fail(ErrorKind::InvalidArgument, "time must be positive");
}

// Draws from the density proportional to exp(-|y|^2 / 2t) h(y)^power * extra(y)
// on the chamber, where 0 <= extra <= 1, using a N(0, 2t) product envelope.
template <typename Extra>
std::vector<double> rejection_from_origin(std::size_t n, double t, int power, Extra&& extra, Engine& rng) {
  constexpr double a = 0.5;  // 1 - 1 / sigma^2 for an envelope of variance 2t
  const double pairs = static_cast<double>(n * (n - 1) / 2);
  const double k = static_cast<double>(power);
  // sup_z h(z)^k exp(-a |z|^2 / 2), using h(w)^2 <= (N / M)^M on the unit sphere.
  const double log_bound = pairs > 0 ? (k * pairs / 2.0) * std::log(k * static_cast<double>(n) / (a * std::numbers::e)) : 0.0;
  std::normal_distribution<double> envelope(0.0, std::sqrt(2.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> z(n), y(n);
  for (std::size_t attempt = 0; attempt < 100'000'000; ++attempt) {
    for (double& v : z) v = envelope(rng);
    std::sort(z.begin(), z.end());
    if (n > 1 && !ordered(z)) continue;
    const double log_ratio = k * (n > 1 ? log_vandermonde(z) : 0.0) - a * norm2(z) / 2.0;
    const double u = unit(rng);
    if (std::log(u) + log_bound > log_ratio) continue;
    for (std::size_t i = 0; i < n; ++i) y[i] = std::sqrt(t) * z[i];
    if (unit(rng) > extra(y)) continue;
    return y;
  }
  fail(ErrorKind::NonConvergence, "rejection sampler from the origin did not accept");
}

using DriftFn = std::function<void(double, std::span<const double>, std::vector<double>&)>;

// One Euler-Maruyama step of length h driven by increment dw. An ordering
// violation refines the step by Brownian-bridge bisection of dw.
void euler_step(double t, std::vector<double>& x, double h, const std::vector<double>& dw, const DriftFn& drift, Engine& rng,
                int depth, std::size_t& halvings, std::vector<double>& scratch) {
  drift(t, x, scratch);
  std::vector<double> next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] + scratch[i] * h + dw[i];
  if (ordered(next) && std::all_of(next.begin(), next.end(), [](double v) { return std::isfinite(v); })) {
    x = std::move(next);
    return;
  }
  if (depth >= kMaxHalvings) fail(ErrorKind::StepUnderflow, "collision not resolvable after step halving");
  ++halvings;
  std::normal_distribution<double> normal(0.0, std::sqrt(h / 4.0));
  std::vector<double> first(x.size()), second(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    first[i] = dw[i] / 2.0 + normal(rng);
    second[i] = dw[i] - first[i];
  }
  euler_step(t, x, h / 2.0, first, drift, rng, depth + 1, halvings, scratch);
  euler_step(t + h / 2.0, x, h / 2.0, second, drift, rng, depth + 1, halvings, scratch);
}

SamplePath integrate(double t0, std::vector<double> x, double t_end, std::size_t steps, const DriftFn& drift, Engine& rng,
                     const SimulationOptions& options, std::string scheme) {
  if (steps == 0) fail(ErrorKind::InvalidArgument, "n_steps must be at least 1");
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  SamplePath path;
  path.scheme = std::move(scheme);
  path.step = (t_end - t0) / static_cast<double>(steps);
  path.times.push_back(t0);
  path.states.push_back(x);
  std::normal_distribution<double> normal(0.0, std::sqrt(path.step));
  std::vector<double> dw(x.size()), scratch(x.size());
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * path.step;
    for (double& v : dw) v = normal(rng);
    euler_step(t, x, path.step, dw, drift, rng, 0, path.halvings, scratch);
    if ((k + 1) % every == 0 || k + 1 == steps) {
      for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] - x[i - 1] < 1e-12) {
          ++path.near_coincidences;
          break;
        }
      path.times.push_back(t0 + static_cast<double>(k + 1) * path.step);
      path.states.push_back(x);
    }
  }
  return path;
}

}  // namespace

WeylPoint::WeylPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) fail(ErrorKind::InvalidArgument, "a Weyl chamber point needs at least one coordinate");
  for (double v : coords_)
    if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "coordinates must be finite");
  if (!ordered(coords_)) fail(ErrorKind::InvalidArgument, "coordinates must be strictly increasing");
}

Constants constants(std::size_t n) {
  double log_gamma_i = 0.0, log_gamma_half = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    log_gamma_i += std::lgamma(static_cast<double>(i));
    log_gamma_half += std::lgamma(static_cast<double>(i) / 2.0);
  }
  const double nn = static_cast<double>(n);
  Constants c{};
  c.c = std::exp(-nn / 2.0 * std::log(2.0) - log_gamma_half);
  c.c_prime = std::exp(-nn / 2.0 * std::log(2.0 * std::numbers::pi) - log_gamma_i);
  c.c_bar = std::exp(nn / 2.0 * std::log(std::numbers::pi) + log_gamma_i - log_gamma_half);
  return c;
}

double vandermonde_h(std::span<const double> x) {
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) p *= x[j] - x[i];
  return p;
}

double km_density(double t, const WeylPoint& x, const WeylPoint& y) {
  require_positive_time(t);
  if (x.size() != y.size()) fail(ErrorKind::InvalidArgument, "x and y differ in dimension");
  const auto [sign, log_det] = log_gaussian_det(t, x.coords(), y.coords());
  if (sign <= 0.0) return 0.0;  // only rounding can make the chamber determinant negative
  const double n = static_cast<double>(x.size());
  return std::exp(log_det - n / 2.0 * std::log(2.0 * std::numbers::pi * t));
}

SurvivalEstimate survival_estimate(double t, const WeylPoint& x, const SurvivalOptions& options) {
  require_positive_time(t);
  switch (options.method) {
    case SurvivalMethod::closed_form:
      return {std::clamp(survival_closed_form(t, x.coords()), 0.0, 1.0), 0.0};
    case SurvivalMethod::quadrature:
      return {survival_quadrature(t, x, options.tol), 0.0};
    case SurvivalMethod::montecarlo:
      return survival_montecarlo(t, x, options.mc_samples, options.seed);
    case SurvivalMethod::asymptotic: {
      std::vector<double> scaled(x.coords());
      for (double& v : scaled) v /= std::sqrt(t);
      return {vandermonde_h(scaled) / constants(x.size()).c_bar, 0.0};
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown survival method");
}

double survival(double t, const WeylPoint& x, SurvivalMethod method) {
  SurvivalOptions options;
  options.method = method;
  return survival_estimate(t, x, options).value;
}

namespace {

void check_times(double s, const StartState& x, double t, const WeylPoint& y) {
  if (!(s >= 0.0) || !(t > s)) fail(ErrorKind::TimeOrder, "need 0 <= s < t");
  if (std::holds_alternative<Origin>(x)) {
    if (s != 0.0) fail(ErrorKind::TimeOrder, "the origin is only a valid state at s = 0");
  } else if (std::get<WeylPoint>(x).size() != y.size()) {
    fail(ErrorKind::InvalidArgument, "x and y differ in dimension");
  }
}

}  // namespace

double transition_inhomogeneous(double s, const StartState& x, double t, const WeylPoint& y, double horizon) {
  check_times(s, x, t, y);
  if (!(t <= horizon)) fail(ErrorKind::TimeOrder, "need t <= T");
  const std::size_t n = y.size();
  const double nn = static_cast<double>(n);
  const double remaining = horizon - t;
  const double log_surv_y = remaining > 0.0 ? std::log(survival(remaining, y)) : 0.0;
  if (std::holds_alternative<Origin>(x)) {
    const double log_density = std::log(constants(n).c) + nn * (nn - 1.0) / 4.0 * std::log(horizon) - nn * nn / 2.0 * std::log(t) -
                               norm2(y.coords()) / (2.0 * t) + log_vandermonde(y.coords()) + log_surv_y;
    return std::exp(log_density);
  }
  const WeylPoint& from = std::get<WeylPoint>(x);
  const double f = km_density(t - s, from, y);
  if (f == 0.0) return 0.0;
  return std::exp(std::log(f) + log_surv_y - std::log(survival(horizon - s, from)));
}

double transition_homogeneous(double s, const StartState& x, double t, const WeylPoint& y) {
  check_times(s, x, t, y);
  const std::size_t n = y.size();
  const double nn = static_cast<double>(n);
  if (std::holds_alternative<Origin>(x)) {
    const double log_density = std::log(constants(n).c_prime) - nn * nn / 2.0 * std::log(t) - norm2(y.coords()) / (2.0 * t) +
                               2.0 * log_vandermonde(y.coords());
    return std::exp(log_density);
  }
  const WeylPoint& from = std::get<WeylPoint>(x);
  const double f = km_density(t - s, from, y);
  if (f == 0.0) return 0.0;
  return std::exp(std::log(f) + log_vandermonde(y.coords()) - log_vandermonde(from.coords()));
}

double homogeneous_from_origin_closed_form(double t, const WeylPoint& y) {
  require_positive_time(t);
  const double nn = static_cast<double>(y.size());
  const double h = vandermonde_h(y.coords());
  return constants(y.size()).c_prime * std::pow(t, -nn * nn / 2.0) * std::exp(-norm2(y.coords()) / (2.0 * t)) * h * h;
}

std::vector<double> drift_inhomogeneous(double t, const WeylPoint& x, double horizon, SurvivalMethod method) {
  if (!(t < horizon)) fail(ErrorKind::TimeOrder, "drift needs t < T");
  const std::size_t n = x.size();
  const double remaining = horizon - t;
  const double base = 1e-5 * std::max(1.0, std::sqrt(norm2(x.coords())));
  std::vector<double> grad(n, 0.0);
  if (n == 1) return grad;
  for (std::size_t i = 0; i < n; ++i) {
    double h = base;
    if (i > 0) h = std::min(h, 0.25 * (x[i] - x[i - 1]));
    if (i + 1 < n) h = std::min(h, 0.25 * (x[i + 1] - x[i]));
    std::vector<double> up(x.coords()), down(x.coords());
    up[i] += h;
    down[i] -= h;
    const double s_up = survival(remaining, WeylPoint(std::move(up)), method);
    const double s_down = survival(remaining, WeylPoint(std::move(down)), method);
    grad[i] = (std::log(s_up) - std::log(s_down)) / (2.0 * h);
  }
  return grad;
}

std::vector<double> dyson_drift(std::span<const double> x) {
  std::vector<double> b(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) b[i] += 1.0 / (x[i] - x[j]);
  return b;
}

std::vector<double> sample_homogeneous_from_origin(std::size_t n, double t, Engine& rng) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "at least one particle required");
  require_positive_time(t);
  return rejection_from_origin(n, t, 2, [](std::span<const double>) { return 1.0; }, rng);
}

std::vector<double> sample_inhomogeneous_from_origin(std::size_t n, double t, double horizon, Engine& rng) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "at least one particle required");
  require_positive_time(t);
  if (!(t <= horizon)) fail(ErrorKind::TimeOrder, "need t <= T");
  const double remaining = horizon - t;
  auto surv = [&](std::span<const double> y) {
    if (remaining <= 0.0 || n == 1) return 1.0;
    return survival(remaining, WeylPoint(std::vector<double>(y.begin(), y.end())));
  };
  return rejection_from_origin(n, t, 1, surv, rng);
}

SamplePath simulate_inhomogeneous(std::size_t n, double horizon, std::size_t n_steps, Engine& rng, const SimulationOptions& options) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "at least one particle required");
  if (!(horizon > 0.0)) fail(ErrorKind::InvalidArgument, "horizon must be positive");
  if (n_steps == 0) fail(ErrorKind::InvalidArgument, "n_steps must be at least 1");
  const double t0 = horizon / static_cast<double>(n_steps);
  std::vector<double> x = sample_inhomogeneous_from_origin(n, t0, horizon, rng);
  DriftFn drift = [&](double t, std::span<const double> state, std::vector<double>& out) {
    out = drift_inhomogeneous(t, WeylPoint(std::vector<double>(state.begin(), state.end())), horizon);
  };
  if (n_steps == 1) {
    SamplePath path;
    path.scheme = "euler-maruyama/inhomogeneous";
    path.step = t0;
    path.times = {t0};
    path.states = {x};
    return path;
  }
  return integrate(t0, std::move(x), horizon, n_steps - 1, drift, rng, options, "euler-maruyama/inhomogeneous");
}

SamplePath simulate_dyson(const StartState& start, std::size_t n, double t_end, std::size_t n_steps, Engine& rng,
                          const SimulationOptions& options) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "at least one particle required");
  if (!(t_end > 0.0)) fail(ErrorKind::InvalidArgument, "t_end must be positive");
  if (n_steps == 0) fail(ErrorKind::InvalidArgument, "n_steps must be at least 1");
  DriftFn drift = [](double, std::span<const double> state, std::vector<double>& out) { out = dyson_drift(state); };
  if (std::holds_alternative<WeylPoint>(start)) {
    const WeylPoint& x0 = std::get<WeylPoint>(start);
    if (x0.size() != n) fail(ErrorKind::InvalidArgument, "start point dimension differs from particle count");
    return integrate(0.0, x0.coords(), t_end, n_steps, drift, rng, options, "euler-maruyama/dyson");
  }
  const double t0 = t_end / static_cast<double>(n_steps);
  std::vector<double> x = sample_homogeneous_from_origin(n, t0, rng);
  if (n_steps == 1) {
    SamplePath path;
    path.scheme = "euler-maruyama/dyson";
    path.step = t0;
    path.times = {t0};
    path.states = {x};
    return path;
  }
  return integrate(t0, std::move(x), t_end, n_steps - 1, drift, rng, options, "euler-maruyama/dyson");
}

std::function<double(double)> marginal_cdf(const std::function<double(const WeylPoint&)>& density, std::size_t n, std::size_t coord,
                                           double lo, double hi, std::size_t grid) {
  if (coord >= n || n == 0 || n > 3) fail(ErrorKind::Unsupported, "marginal CDF supports N <= 3");
  if (!(hi > lo) || grid < 2) fail(ErrorKind::InvalidArgument, "empty marginal grid");
  const double gap_max = hi - lo;
  const std::size_t others = n - 1;

  // Density of y_coord at a: integrate the remaining coordinates through the gaps
  // to their neighbours, which keeps every integration point inside the chamber.
  auto marginal = [&](double a) -> double {
    if (others == 0) return density(WeylPoint({a}));
    std::vector<double> lower(others, 0.0), upper(others, gap_max);
    auto f = [&](std::span<const double> g) {
      std::vector<double> y(n);
      y[coord] = a;
      std::size_t k = 0;
      for (std::size_t i = coord; i-- > 0;) y[i] = y[i + 1] - g[k++];
      for (std::size_t i = coord + 1; i < n; ++i) y[i] = y[i - 1] + g[k++];
      if (!ordered(y)) return 0.0;
      return density(WeylPoint(std::move(y)));
    };
    return quadrature_integrate(f, lower, upper, 1e-9).value;
  };

  std::vector<double> xs(grid), fs(grid, 0.0);
  const double h = (hi - lo) / static_cast<double>(grid - 1);
  for (std::size_t k = 0; k < grid; ++k) xs[k] = lo + h * static_cast<double>(k);
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  for (std::size_t k = 1; k < grid; ++k) fs[k] = fs[k - 1] + GK::integrate(marginal, xs[k - 1], xs[k], 0, 1e-10);

  return [xs = std::move(xs), fs = std::move(fs)](double v) {
    if (v <= xs.front()) return 0.0;
    if (v >= xs.back()) return fs.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), v);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());
    const double w = (v - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return fs[k - 1] + w * (fs[k] - fs[k - 1]);
  };
}

}  // namespace noncollide
