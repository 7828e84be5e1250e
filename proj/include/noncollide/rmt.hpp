#pragma once

// Hermitian matrix-valued Brownian motion, its ordered eigenvalue process, and
// statistical estimators for the drift, quadratic variation, and the
// covariation matrix Gamma of the eigenvalue SDE.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "noncollide/diffusion.hpp"
#include "noncollide/random.hpp"

namespace noncollide {

struct HermitianState {
  Eigen::MatrixXcd matrix;  ///< diagonal B_ii(t); off-diagonal (B_ij + i B~_ij) / sqrt 2
  double time = 0.0;
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 0.0);

struct EigenFrame {
  std::vector<double> values;  ///< increasing
  Eigen::MatrixXcd vectors;    ///< column k belongs to values[k]; largest-modulus entry real positive
};

/// Throws NumericalBreakdown when the solver fails or the residual
/// max |U^dagger M U - diag(values)| exceeds 1e-10 max(1, |M|_max).
EigenFrame diagonalize(const Eigen::MatrixXcd& m);

/// Eigenvalues only, increasing. Closed form for N <= 2.
std::vector<double> eigenvalues(const Eigen::MatrixXcd& m);

/// Increment of the Hermitian Brownian motion over a time step dt.
Eigen::MatrixXcd hermitian_increment(std::size_t n, double dt, Engine& rng);

HermitianState sample_hermitian_bm(std::size_t n, double t, Engine& rng);

/// Haar-distributed unitary matrix.
Eigen::MatrixXcd random_unitary(std::size_t n, Engine& rng);

/// Sorted eigenvalues of the matrix process on the grid k t_end / n_steps,
/// k = 1..n_steps (at t = 0 all eigenvalues coincide and are not recorded).
SamplePath eigen_path(std::size_t n, double t_end, std::size_t n_steps, Engine& rng, const SimulationOptions& options = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DriftQvReport {
  std::size_t dimension = 0;
  std::size_t paths = 0;
  std::size_t observations = 0;     ///< (step, coordinate) pairs used by the regression
  std::size_t steps_excluded = 0;   ///< steps dropped by the minimal-gap filter
  std::optional<double> slope;      ///< absent for N = 1
  std::optional<Interval> slope_ci;
  double intercept = 0.0;
  Interval intercept_ci;
  double qv = 0.0;  ///< realized quadratic variation per coordinate per unit time
  Interval qv_ci;
};

/// Streaming form of estimate_drift_qv. Paths must be recorded at every grid
/// point. Accumulators for disjoint path sets merge exactly in any fixed order.
class DriftQvAccumulator {
 public:
  void add(const SamplePath& path);
  void merge(const DriftQvAccumulator& other);
  /// Throws InsufficientSamples when the regression is underdetermined.
  DriftQvReport report(double z = 1.96) const;

 private:
  std::size_t dimension_ = 0;
  std::size_t paths_ = 0;
  std::size_t excluded_ = 0;
  double n_ = 0, sx_ = 0, sy_ = 0, sxx_ = 0, sxy_ = 0, syy_ = 0;
  double qv_n_ = 0, qv_sum_ = 0, qv_sq_ = 0;
};

/// Regression of dlambda_i / dt on sum_{j != i} 1 / (lambda_i - lambda_j),
/// pooled over coordinates and restricted to steps whose minimal gap exceeds
/// 10 sqrt(dt), plus the realized quadratic variation per unit time.
DriftQvReport estimate_drift_qv(std::span<const SamplePath> paths, double z = 1.96);

/// Mean over steps of |(U^dagger dXi U)_ij|^2 / dt on [0, 1] with dt = 1 / n_steps
/// (n_steps >= 1000),
/// U diagonalizing Xi at the start of each step. With `conjugation` V each
/// increment is replaced by V dXi V^dagger.
Eigen::MatrixXd estimate_gamma(std::size_t n, std::size_t n_steps, Engine& rng,
                               const std::optional<Eigen::MatrixXcd>& conjugation = std::nullopt);

}  // namespace noncollide
