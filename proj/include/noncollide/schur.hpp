#pragma once

// Exact Schur function evaluation by three independent routes: the SSYT
// generating sum, the bialternant (ratio of alternants), and the dual
// Jacobi-Trudi determinant in elementary symmetric polynomials.

#include <vector>

#include "noncollide/combinat.hpp"
#include "noncollide/exact.hpp"

namespace noncollide {

/// Values of the variables z_1..z_T.
struct EvalPoint {
  std::vector<Rational> values;

  std::size_t size() const noexcept { return values.size(); }
  static EvalPoint ones(std::size_t n);
  /// (1, q, q^2, ..., q^{n-1}).
  static EvalPoint geometric(const Rational& q, std::size_t n);
};

Rational elementary_symmetric(int j, const EvalPoint& z);

Rational schur_ssyt_sum(const Partition& shape, const EvalPoint& z);

/// Throws ErrorKind::RepeatedPoint when two variables coincide.
Rational schur_bialternant(const Partition& shape, const EvalPoint& z);

Rational schur_dual_jt(const Partition& shape, const EvalPoint& z);

/// s_lambda(1, ..., 1) with T ones, from the q -> 1 limit of the product formula.
BigInt principal_specialization(const Partition& shape, int horizon);

/// q^{sum (k-1) lambda_k} prod_{i<j} (q^{lambda_i - lambda_j + j - i} - 1) / (q^{j-i} - 1),
/// i.e. s_lambda(1, q, ..., q^{T-1}) before taking q -> 1. Requires q != 0 and
/// q not a root of unity (over the rationals: q != 1, q != -1).
Rational principal_specialization_q(const Partition& shape, int horizon, const Rational& q);

}  // namespace noncollide
