#pragma once

// Brownian motion in the Weyl chamber: Karlin-McGregor densities, survival
// probabilities, the transition densities of the noncolliding processes
// (finite horizon T and T -> infinity), and Euler-Maruyama integrators.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "noncollide/random.hpp"

namespace noncollide {

/// Strictly increasing point of R^N.
class WeylPoint {
 public:
  explicit WeylPoint(std::vector<double> coords);
  const std::vector<double>& coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
};

/// All particles at 0.
struct Origin {};

using StartState = std::variant<Origin, WeylPoint>;

struct Constants {
  double c;        ///< 2^{-N/2} / prod Gamma(i/2)
  double c_prime;  ///< (2 pi)^{-N/2} / prod Gamma(i)
  double c_bar;    ///< pi^{N/2} prod Gamma(i) / Gamma(i/2)
};

Constants constants(std::size_t n);

/// prod_{i<j} (x_j - x_i) on a raw vector (no ordering required).
double vandermonde_h(std::span<const double> x);

/// det[(2 pi t)^{-1/2} exp(-(x_j - y_i)^2 / 2t)].
double km_density(double t, const WeylPoint& x, const WeylPoint& y);

enum class SurvivalMethod {
  closed_form,  ///< Pfaffian of pairwise erf terms; any N
  quadrature,   ///< chamber quadrature of km_density; N <= 3
  montecarlo,   ///< importance sampling of independent Gaussian endpoints
  asymptotic,   ///< h_N(x / sqrt t) / c_bar_N, valid as |x| / sqrt t -> 0
};

struct SurvivalOptions {
  SurvivalMethod method = SurvivalMethod::closed_form;
  double tol = 1e-9;
  std::size_t mc_samples = 100'000;
  std::uint64_t seed = 1;
};

struct SurvivalEstimate {
  double value = 0.0;
  double std_error = 0.0;  ///< zero for deterministic methods
};

SurvivalEstimate survival_estimate(double t, const WeylPoint& x, const SurvivalOptions& options);
double survival(double t, const WeylPoint& x, SurvivalMethod method = SurvivalMethod::closed_form);

/// Density of X(t) given X(s) = x for the process conditioned to survive up to T.
double transition_inhomogeneous(double s, const StartState& x, double t, const WeylPoint& y, double horizon);

/// Density of Y(t) given Y(s) = x for the h-transformed (Dyson, beta = 2) process.
double transition_homogeneous(double s, const StartState& x, double t, const WeylPoint& y);

/// c'_N t^{-N^2/2} exp(-|y|^2/2t) h_N(y)^2, evaluated directly rather than in log space.
double homogeneous_from_origin_closed_form(double t, const WeylPoint& y);

/// Gradient of ln N_N(T - t, x) by central differences with step 1e-5 max(1, |x|).
std::vector<double> drift_inhomogeneous(double t, const WeylPoint& x, double horizon,
                                        SurvivalMethod method = SurvivalMethod::closed_form);

/// sum_{j != i} 1 / (x_i - x_j).
std::vector<double> dyson_drift(std::span<const double> x);

struct SamplePath {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double step = 0.0;
  std::string scheme;
  std::size_t halvings = 0;          ///< step halvings triggered by ordering violations
  std::size_t near_coincidences = 0;  ///< recorded states with a gap below 1e-12
};

struct SimulationOptions {
  /// Record every k-th grid point; the final state is always recorded.
  std::size_t record_every = 1;
};

/// Exact draw from p_N(0, 0; t, .) by rejection under a Gaussian envelope.
std::vector<double> sample_homogeneous_from_origin(std::size_t n, double t, Engine& rng);

/// Exact draw from g_{N,T}(0, 0; t, .) by rejection under a Gaussian envelope.
std::vector<double> sample_inhomogeneous_from_origin(std::size_t n, double t, double horizon, Engine& rng);

/// Noncolliding process on [0, T] started at the origin. The first recorded
/// state is an exact draw at t_0 = T / n_steps.
SamplePath simulate_inhomogeneous(std::size_t n, double horizon, std::size_t n_steps, Engine& rng,
                                  const SimulationOptions& options = {});

/// Dyson Brownian motion (beta = 2). From the origin the first recorded state
/// is an exact draw at t_0 = t_end / n_steps; otherwise times[0] = 0.
SamplePath simulate_dyson(const StartState& start, std::size_t n, double t_end, std::size_t n_steps, Engine& rng,
                          const SimulationOptions& options = {});

/// CDF of coordinate `coord` of a density on the chamber, tabulated on a grid
/// over [lo, hi] by quadrature and linearly interpolated.
std::function<double(double)> marginal_cdf(const std::function<double(const WeylPoint&)>& density, std::size_t n,
                                           std::size_t coord, double lo, double hi, std::size_t grid = 1201);

}  // namespace noncollide
