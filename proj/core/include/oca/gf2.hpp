#pragma once

// Polynomial and matrix arithmetic over GF(2).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oca {

using BigUint = boost::multiprecision::cpp_int;

/// Polynomial over GF(2) packed into a 64-bit mask; bit i is the coefficient
/// of X^i.
class BinPoly {
 public:
  constexpr BinPoly() = default;
  constexpr explicit BinPoly(uint64_t coeffs) : coeffs_(coeffs) {}

  /// Builds a rule polynomial: monic of degree n with nonzero constant term.
  /// Throws DomainError otherwise.
  static BinPoly rule_polynomial(uint64_t coeffs, int n);

  constexpr uint64_t coeffs() const { return coeffs_; }
  constexpr bool is_zero() const { return coeffs_ == 0; }
  constexpr bool coeff(int i) const { return (coeffs_ >> i) & 1u; }

  /// Index of the highest set bit; empty for the zero polynomial.
  std::optional<int> degree() const;

  /// True for polynomials of degree n with bit 0 set.
  bool is_rule_polynomial(int n) const;

  friend constexpr bool operator==(BinPoly, BinPoly) = default;
  friend constexpr auto operator<=>(BinPoly a, BinPoly b) { return a.coeffs_ <=> b.coeffs_; }
  friend constexpr BinPoly operator+(BinPoly a, BinPoly b) { return BinPoly(a.coeffs_ ^ b.coeffs_); }

 private:
  uint64_t coeffs_ = 0;
};

/// Remainder of a divided by b. Throws DomainError when b is zero.
BinPoly poly_mod(BinPoly a, BinPoly b);

/// Greatest common divisor; throws DomainError("gcd undefined") when both
/// inputs are zero.
BinPoly poly_gcd(BinPoly p, BinPoly q);

/// Canonical mask form, e.g. "0x5".
std::string to_hex(BinPoly p);
/// Human readable sum, e.g. "X^2+1"; "0" for the zero polynomial.
std::string to_string(BinPoly p);
/// Accepts either "0x5" or a sum of monomials such as "X^2+X+1".
/// Throws std::invalid_argument on malformed text.
BinPoly parse_poly(std::string_view text);

/// Square bit matrix over GF(2), at most 128x128. Row i is stored as packed
/// 64-bit words with bit j of the row holding entry (i, j).
class GF2Matrix {
 public:
  static constexpr int kMaxSize = 128;

  explicit GF2Matrix(int size);
  static GF2Matrix identity(int size);
  /// Rows given left-to-right as '0'/'1' strings (column 0 first).
  static GF2Matrix from_strings(std::span<const std::string_view> rows);

  int size() const { return size_; }
  int words_per_row() const { return words_; }

  bool get(int i, int j) const { return (row(i)[j / 64] >> (j % 64)) & 1u; }
  void set(int i, int j, bool value);

  std::span<const uint64_t> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * words_, static_cast<std::size_t>(words_)};
  }
  std::span<uint64_t> row(int i) {
    return {data_.data() + static_cast<std::size_t>(i) * words_, static_cast<std::size_t>(words_)};
  }

  bool is_identity() const;
  /// Row i rendered as a '0'/'1' string, column 0 first.
  std::string row_string(int i) const;

  friend bool operator==(const GF2Matrix&, const GF2Matrix&) = default;

 private:
  int size_;
  int words_;
  std::vector<uint64_t> data_;
};

/// The 2n x 2n Sylvester matrix of two rule polynomials of degree n. Row i
/// (i < n) holds the coefficients of p starting at column i, constant term
/// leftmost; row n+i does the same for q.
GF2Matrix sylvester_matrix(BinPoly p, BinPoly q, int n);

GF2Matrix mat_mul(const GF2Matrix& a, const GF2Matrix& b);

/// Square-and-multiply; m^0 is the identity.
GF2Matrix mat_pow(const GF2Matrix& m, uint64_t e);
GF2Matrix mat_pow(const GF2Matrix& m, const BigUint& e);

/// Matrix-vector product for sizes up to 64; bit j of v is component j.
uint64_t mat_vec(const GF2Matrix& m, uint64_t v);

int rank(const GF2Matrix& m);
bool is_invertible(const GF2Matrix& m);

/// |GL(k, F_2)| = prod_{i<k} (2^k - 2^i).
BigUint gl_order(int k);

/// Prime factors with multiplicity, ascending; empty for t = 1.
std::vector<uint64_t> factorize(uint64_t t);

/// Least t >= 1 with m^t = I. Throws DomainError("matrix not in GL") for
/// singular input. Supported for sizes up to 64.
BigUint matrix_order(const GF2Matrix& m);

/// Decides whether matrices of a fixed size have order exactly 2^size - 1,
/// with the prime factors of the exponent computed once.
class MaximalOrderTest {
 public:
  explicit MaximalOrderTest(int size);

  int size() const { return size_; }
  uint64_t exponent() const { return exponent_; }
  std::span<const uint64_t> primes() const { return primes_; }

  /// m^t = I and m^(t/p) != I for every prime p dividing t = 2^size - 1.
  bool operator()(const GF2Matrix& m) const;

 private:
  int size_;
  uint64_t exponent_;
  std::vector<uint64_t> primes_;
};

}  // namespace oca
