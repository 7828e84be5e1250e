#pragma once

// Statistical and numerical verification helpers: KS and chi-square tests,
// nested adaptive quadrature on boxes and on the Weyl chamber, and the
// TestReport record shared by the acceptance suite and the CLI.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace noncollide {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::optional<double> p_value;
  bool pass = false;
  std::vector<std::size_t> sample_sizes;
  std::vector<std::uint64_t> seeds;
  std::string detail;
};

nlohmann::ordered_json to_json(const TestReport& r);

/// Asymptotic Kolmogorov distribution tail P(sqrt(n) D > lambda).
double kolmogorov_tail(double lambda);

/// Two-sample KS. `threshold` is the p-value floor used for `pass`.
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double p_floor = 0.01);

/// One-sample KS against a CDF; `pass` compares the distance with `max_distance`.
/// Throws when the CDF decreases along the sorted sample.
TestReport ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf, double max_distance = 0.02);

/// Pearson chi-square goodness of fit of counts against probabilities; bins
/// with zero expected mass must be empty.
TestReport chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probabilities, double p_floor = 0.01);

/// Chi-square homogeneity test of two count vectors over the same bins.
TestReport chi_square_two_sample(std::span<const std::size_t> a, std::span<const std::size_t> b, double p_floor = 0.01);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

using Integrand = std::function<double(std::span<const double>)>;

/// Iterated adaptive Gauss-Kronrod over a box of dimension 1..3. `tol` is the
/// relative tolerance of each nested 1-d rule. Throws ErrorKind::NonConvergence
/// when the outer error estimate misses the tolerance.
QuadratureResult quadrature_integrate(const Integrand& f, std::span<const double> lower, std::span<const double> upper,
                                      double tol = 1e-8);

/// Integral over the truncated chamber {y_1 < ... < y_N} using coordinates
/// (y_1, y_2 - y_1, ..., y_N - y_{N-1}): y_1 in [y1_lo, y1_hi], gaps in [0, gap_max].
QuadratureResult chamber_integrate(const Integrand& f, std::size_t dim, double y1_lo, double y1_hi, double gap_max,
                                   double tol = 1e-8);

/// Kolmogorov-Smirnov distance (no test) between a sample and a CDF.
double ks_distance(std::span<const double> a, const std::function<double(double)>& cdf);

}  // namespace noncollide
