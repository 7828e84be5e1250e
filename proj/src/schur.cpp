#include "noncollide/schur.hpp"

#include "noncollide/error.hpp"

namespace noncollide {

namespace {

constexpr const char* kModule = "schur";

Rational power(const Rational& base, int exp) {
  Rational r(1);
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exp));
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exp));
  r.canonicalize();
  return r;
}

}  // namespace

EvalPoint EvalPoint::ones(std::size_t n) { return EvalPoint{std::vector<Rational>(n, Rational(1))}; }

EvalPoint EvalPoint::geometric(const Rational& q, std::size_t n) {
  EvalPoint z;
  Rational v(1);
  for (std::size_t i = 0; i < n; ++i) {
    z.values.push_back(v);
    v *= q;
  }
  return z;
}

Rational elementary_symmetric(int j, const EvalPoint& z) {
  if (j < 0) return Rational(0);
  // Coefficients of prod_i (1 + z_i xi), built one factor at a time.
  std::vector<Rational> coeffs{Rational(1)};
  for (const Rational& zi : z.values) {
    coeffs.emplace_back(0);
    for (std::size_t k = coeffs.size() - 1; k > 0; --k) coeffs[k] += zi * coeffs[k - 1];
  }
  return static_cast<std::size_t>(j) < coeffs.size() ? coeffs[static_cast<std::size_t>(j)] : Rational(0);
}

Rational schur_ssyt_sum(const Partition& shape, const EvalPoint& z) {
  const int letters = static_cast<int>(z.size());
  Rational sum(0);
  for (const SSYT& t : enumerate_ssyt(shape, letters)) {
    Rational term(1);
    const auto exps = monomial_exponents(t, letters);
    for (std::size_t k = 0; k < exps.size(); ++k)
      if (exps[k] > 0) term *= power(z.values[k], exps[k]);
    sum += term;
  }
  return sum;
}

Rational schur_bialternant(const Partition& shape, const EvalPoint& z) {
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (z.values[i] == z.values[j]) throw Error(ErrorKind::RepeatedPoint, kModule, "bialternant needs pairwise distinct evaluation points");
  if (shape.length() > n) return Rational(0);

  const auto lambda = shape.padded(n);
  SquareMatrix<Rational> alt(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      alt(i, j) = power(z.values[i], lambda[j] + static_cast<int>(n - 1 - j));

  Rational vandermonde(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) vandermonde *= z.values[i] - z.values[j];
  return bareiss_determinant(std::move(alt)) / vandermonde;
}

Rational schur_dual_jt(const Partition& shape, const EvalPoint& z) {
  const Partition conj = conjugate(shape);
  const std::size_t n = conj.length();
  if (n == 0) return Rational(1);

  // e_k for every index the matrix can touch: 0 <= k <= conj[0] + n - 1.
  std::vector<Rational> e;
  const int top = conj[0] + static_cast<int>(n);
  for (int k = 0; k <= top; ++k) e.push_back(elementary_symmetric(k, z));
  auto e_at = [&](int k) { return (k < 0 || k > top) ? Rational(0) : e[static_cast<std::size_t>(k)]; };

  SquareMatrix<Rational> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = e_at(conj[j] + static_cast<int>(i) - static_cast<int>(j));
  return bareiss_determinant(std::move(m));
}

BigInt principal_specialization(const Partition& shape, int horizon) {
  if (horizon < 0) throw Error(ErrorKind::InvalidArgument, kModule, "number of variables must be nonnegative");
  if (static_cast<int>(shape.length()) > horizon) return BigInt(0);
  const auto lambda = shape.padded(static_cast<std::size_t>(horizon));
  BigInt num(1), den(1);
  for (int i = 0; i < horizon; ++i) {
    for (int j = i + 1; j < horizon; ++j) {
      num *= lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(j)] + j - i;
      den *= j - i;
    }
  }
  BigInt q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (r != 0) throw Error(ErrorKind::NumericalBreakdown, kModule, "principal specialization product is not an integer");
  return q;
}

Rational principal_specialization_q(const Partition& shape, int horizon, const Rational& q) {
  if (q == 0 || q == 1 || q == -1) throw Error(ErrorKind::InvalidArgument, kModule, "q must avoid 0 and +-1");
  if (horizon < 0) throw Error(ErrorKind::InvalidArgument, kModule, "number of variables must be nonnegative");
  if (static_cast<int>(shape.length()) > horizon) return Rational(0);
  const auto lambda = shape.padded(static_cast<std::size_t>(horizon));
  int weight = 0;
  for (int k = 0; k < horizon; ++k) weight += k * lambda[static_cast<std::size_t>(k)];
  Rational r = power(q, weight);
  for (int i = 0; i < horizon; ++i)
    for (int j = i + 1; j < horizon; ++j)
      r *= (power(q, lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(j)] + j - i) - 1) / (power(q, j - i) - 1);
  return r;
}

}  // namespace noncollide
