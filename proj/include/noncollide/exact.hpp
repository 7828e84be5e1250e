#pragma once

// Exact arithmetic helpers shared by the combinatorial modules.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace noncollide {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Dense row-major square matrix used for exact determinants.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

namespace detail {
inline void exact_divide(BigInt& a, const BigInt& b) { mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t()); }
inline void exact_divide(Rational& a, const Rational& b) { a /= b; }
}  // namespace detail

/*
 * Bareiss fraction-free elimination.
 *
 * Every intermediate pivot divides the next 2x2 minor exactly, so over the
 * integers no fractions ever appear and entries stay bounded by Hadamard's
 * bound. Over the rationals the same recurrence is used with ordinary
 * division. Zero pivots are handled by row exchange (sign flip).
 */
template <typename T>
T bareiss_determinant(SquareMatrix<T> m) {
  const std::size_t n = m.size();
  if (n == 0) return T(1);
  T prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return T(0);
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(r, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        T v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        detail::exact_divide(v, prev);
        m(i, j) = std::move(v);
      }
    }
    prev = m(k, k);
  }
  T det = m(n - 1, n - 1);
  if (sign < 0) det = -det;
  return det;
}

/// C(n, k) with the combinatorial convention C(n, k) = 0 outside 0 <= k <= n.
inline BigInt binomial(long n, long k) {
  BigInt r;
  if (n < 0 || k < 0 || k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline std::string to_string(const BigInt& v) { return v.get_str(); }

/// Prints integers without a denominator, everything else as "p/q".
inline std::string to_string(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

/// Parses "p", "p/q", or a finite decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

/// Nearest double to an arbitrarily large integer ratio, without overflow.
double ratio_to_double(const BigInt& num, const BigInt& den);

}  // namespace noncollide
