#include "noncollide/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "noncollide/error.hpp"

namespace noncollide {

namespace {

constexpr const char* kModule = "verify";

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, kModule, what); }

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr unsigned kMaxDepth = 18;

}  // namespace

nlohmann::ordered_json to_json(const TestReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["statistic"] = r.statistic;
  j["threshold"] = r.threshold;
  j["p_value"] = r.p_value ? nlohmann::ordered_json(*r.p_value) : nlohmann::ordered_json(nullptr);
  j["pass"] = r.pass;
  j["sample_sizes"] = r.sample_sizes;
  j["seeds"] = r.seeds;
  j["detail"] = r.detail;
  return j;
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  // Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double p_floor) {
  if (a.empty() || b.empty()) fail(ErrorKind::InvalidArgument, "KS test needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  TestReport r;
  r.name = "ks_two_sample";
  r.statistic = d;
  r.threshold = p_floor;
  r.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
  r.pass = *r.p_value > p_floor;
  r.sample_sizes = {x.size(), y.size()};
  return r;
}

double ks_distance(std::span<const double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) fail(ErrorKind::InvalidArgument, "KS test needs a nonempty sample");
  std::vector<double> x(a.begin(), a.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0, prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    if (f < prev - 1e-12) fail(ErrorKind::InvalidArgument, "CDF is not monotone on the sample range");
    prev = f;
    d = std::max({d, std::fabs(static_cast<double>(i + 1) / n - f), std::fabs(f - static_cast<double>(i) / n)});
  }
  return d;
}

TestReport ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf, double max_distance) {
  TestReport r;
  r.name = "ks_one_sample";
  r.statistic = ks_distance(a, cdf);
  r.threshold = max_distance;
  const double sn = std::sqrt(static_cast<double>(a.size()));
  r.p_value = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * r.statistic);
  r.pass = r.statistic < max_distance;
  r.sample_sizes = {a.size()};
  return r;
}

TestReport chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probabilities, double p_floor) {
  if (observed.size() != probabilities.size() || observed.empty()) fail(ErrorKind::InvalidArgument, "bin counts and probabilities differ");
  double n = 0.0;
  for (std::size_t c : observed) n += static_cast<double>(c);
  if (n == 0.0) fail(ErrorKind::InsufficientSamples, "no observations");
  double stat = 0.0;
  std::size_t bins = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double expected = n * probabilities[k];
    if (expected <= 0.0) {
      if (observed[k] != 0) stat = std::numeric_limits<double>::infinity();
      continue;
    }
    ++bins;
    const double diff = static_cast<double>(observed[k]) - expected;
    stat += diff * diff / expected;
  }
  TestReport r;
  r.name = "chi_square_gof";
  r.statistic = stat;
  r.threshold = p_floor;
  const double dof = static_cast<double>(bins > 1 ? bins - 1 : 1);
  r.p_value = std::isinf(stat) ? 0.0 : boost::math::gamma_q(dof / 2.0, stat / 2.0);
  r.pass = *r.p_value > p_floor;
  r.sample_sizes = {static_cast<std::size_t>(n)};
  return r;
}

TestReport chi_square_two_sample(std::span<const std::size_t> a, std::span<const std::size_t> b, double p_floor) {
  if (a.size() != b.size() || a.empty()) fail(ErrorKind::InvalidArgument, "count vectors differ in length");
  double na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    na += static_cast<double>(a[k]);
    nb += static_cast<double>(b[k]);
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorKind::InsufficientSamples, "no observations");
  double stat = 0.0;
  std::size_t bins = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double total = static_cast<double>(a[k] + b[k]);
    if (total == 0.0) continue;
    ++bins;
    const double ea = total * na / (na + nb), eb = total * nb / (na + nb);
    stat += (a[k] - ea) * (a[k] - ea) / ea + (b[k] - eb) * (b[k] - eb) / eb;
  }
  TestReport r;
  r.name = "chi_square_two_sample";
  r.statistic = stat;
  r.threshold = p_floor;
  const double dof = static_cast<double>(bins > 1 ? bins - 1 : 1);
  r.p_value = boost::math::gamma_q(dof / 2.0, stat / 2.0);
  r.pass = *r.p_value > p_floor;
  r.sample_sizes = {static_cast<std::size_t>(na), static_cast<std::size_t>(nb)};
  return r;
}

QuadratureResult quadrature_integrate(const Integrand& f, std::span<const double> lower, std::span<const double> upper, double tol) {
  const std::size_t dim = lower.size();
  if (dim == 0 || dim > 3 || upper.size() != dim) fail(ErrorKind::Unsupported, "quadrature supports boxes of dimension 1 to 3");

  std::vector<double> point(dim);
  std::function<double(std::size_t, double*)> level = [&](std::size_t k, double* err) -> double {
    auto inner = [&](double v) {
      point[k] = v;
      if (k + 1 == dim) return f(point);
      return level(k + 1, nullptr);
    };
    double error = 0.0, l1 = 0.0;
    const double value = GK::integrate(inner, lower[k], upper[k], kMaxDepth, tol, &error, &l1);
    if (err != nullptr) *err = error;
    const bool converged = error <= 100.0 * tol * std::max(l1, 1e-300) || error <= 1e-14;
    if (!std::isfinite(value) || !converged)
      fail(ErrorKind::NonConvergence, "adaptive quadrature did not reach tolerance");
    return value;
  };
  QuadratureResult out;
  out.value = level(0, &out.error);
  return out;
}

QuadratureResult chamber_integrate(const Integrand& f, std::size_t dim, double y1_lo, double y1_hi, double gap_max, double tol) {
  std::vector<double> lower(dim, 0.0), upper(dim, gap_max);
  lower[0] = y1_lo;
  upper[0] = y1_hi;
  std::vector<double> y(dim);
  auto mapped = [&](std::span<const double> u) {
    y[0] = u[0];
    for (std::size_t i = 1; i < dim; ++i) y[i] = y[i - 1] + u[i];
    return f(y);
  };
  return quadrature_integrate(mapped, lower, upper, tol);
}

}  // namespace noncollide
