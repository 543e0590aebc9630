#include "oca/gf2.hpp"

#include "oca/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace oca {

std::optional<int> BinPoly::degree() const {
  if (coeffs_ == 0) return std::nullopt;
  return std::bit_width(coeffs_) - 1;
}

bool BinPoly::is_rule_polynomial(int n) const {
  return n >= 1 && n <= 63 && coeff(0) && degree() == n;
}

BinPoly BinPoly::rule_polynomial(uint64_t coeffs, int n) {
  BinPoly p(coeffs);
  if (!p.is_rule_polynomial(n)) {
    throw DomainError("not a bipermutive rule polynomial: " + to_hex(p) + " for degree " +
                      std::to_string(n));
  }
  return p;
}

BinPoly poly_mod(BinPoly a, BinPoly b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  uint64_t r = a.coeffs();
  const uint64_t d = b.coeffs();
  const int db = std::bit_width(d);
  for (int dr = std::bit_width(r); dr >= db; dr = std::bit_width(r)) {
    r ^= d << (dr - db);
  }
  return BinPoly(r);
}

BinPoly poly_gcd(BinPoly p, BinPoly q) {
  if (p.is_zero() && q.is_zero()) throw DomainError("gcd undefined");
  while (!q.is_zero()) {
    BinPoly r = poly_mod(p, q);
    p = q;
    q = r;
  }
  return p;
}

std::string to_hex(BinPoly p) {
  char buf[24] = {'0', 'x'};
  auto [end, ec] = std::to_chars(buf + 2, buf + sizeof(buf), p.coeffs(), 16);
  return std::string(buf, end);
}

std::string to_string(BinPoly p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = *p.degree(); i >= 0; --i) {
    if (!p.coeff(i)) continue;
    if (!out.empty()) out += '+';
    if (i == 0) {
      out += '1';
    } else if (i == 1) {
      out += 'X';
    } else {
      out += "X^" + std::to_string(i);
    }
  }
  return out;
}

namespace {

[[noreturn]] void bad_poly(std::string_view text) {
  throw std::invalid_argument("malformed polynomial: '" + std::string(text) + "'");
}

uint64_t parse_uint(std::string_view s, int base, std::string_view whole) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) bad_poly(whole);
  return v;
}

}  // namespace

BinPoly parse_poly(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  std::string_view s = compact;
  if (s.empty()) bad_poly(text);
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    return BinPoly(parse_uint(s.substr(2), 16, text));
  }
  uint64_t mask = 0;
  while (!s.empty()) {
    const std::size_t plus = s.find('+');
    std::string_view term = s.substr(0, plus);
    s = plus == std::string_view::npos ? std::string_view{} : s.substr(plus + 1);
    if (plus != std::string_view::npos && s.empty()) bad_poly(text);
    int exponent = 0;
    if (term == "0") {
      continue;
    } else if (term == "1") {
      exponent = 0;
    } else if (term == "X" || term == "x") {
      exponent = 1;
    } else if (term.size() > 2 && (term[0] == 'X' || term[0] == 'x') && term[1] == '^') {
      const uint64_t e = parse_uint(term.substr(2), 10, text);
      if (e > 63) bad_poly(text);
      exponent = static_cast<int>(e);
    } else {
      bad_poly(text);
    }
    mask ^= uint64_t{1} << exponent;
  }
  return BinPoly(mask);
}

GF2Matrix::GF2Matrix(int size) : size_(size), words_((size + 63) / 64) {
  if (size < 1 || size > kMaxSize) {
    throw std::invalid_argument("matrix size must be in [1, 128], got " + std::to_string(size));
  }
  data_.assign(static_cast<std::size_t>(size_) * words_, 0);
}

GF2Matrix GF2Matrix::identity(int size) {
  GF2Matrix m(size);
  for (int i = 0; i < size; ++i) m.set(i, i, true);
  return m;
}

GF2Matrix GF2Matrix::from_strings(std::span<const std::string_view> rows) {
  GF2Matrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != m.size()) {
      throw std::invalid_argument("matrix rows must be square");
    }
    for (int j = 0; j < m.size(); ++j) {
      const char c = rows[i][j];
      if (c != '0' && c != '1') throw std::invalid_argument("matrix entries must be 0 or 1");
      m.set(i, j, c == '1');
    }
  }
  return m;
}

void GF2Matrix::set(int i, int j, bool value) {
  uint64_t& word = row(i)[j / 64];
  const uint64_t bit = uint64_t{1} << (j % 64);
  word = value ? (word | bit) : (word & ~bit);
}

bool GF2Matrix::is_identity() const {
  for (int i = 0; i < size_; ++i) {
    auto r = row(i);
    for (int w = 0; w < words_; ++w) {
      const uint64_t expect = (i / 64 == w) ? uint64_t{1} << (i % 64) : 0;
      if (r[w] != expect) return false;
    }
  }
  return true;
}

std::string GF2Matrix::row_string(int i) const {
  std::string s(size_, '0');
  for (int j = 0; j < size_; ++j) {
    if (get(i, j)) s[j] = '1';
  }
  return s;
}

GF2Matrix sylvester_matrix(BinPoly p, BinPoly q, int n) {
  if (n < 1 || 2 * n > GF2Matrix::kMaxSize || !p.is_rule_polynomial(n) ||
      !q.is_rule_polynomial(n)) {
    throw DomainError("not a bipermutive rule polynomial");
  }
  GF2Matrix m(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c <= n; ++c) {
      m.set(i, i + c, p.coeff(c));
      m.set(n + i, i + c, q.coeff(c));
    }
  }
  return m;
}

GF2Matrix mat_mul(const GF2Matrix& a, const GF2Matrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("matrix size mismatch");
  GF2Matrix out(a.size());
  const int words = a.words_per_row();
  if (words == 1) {
    for (int i = 0; i < a.size(); ++i) {
      uint64_t acc = 0;
      for (uint64_t bits = a.row(i)[0]; bits != 0; bits &= bits - 1) {
        acc ^= b.row(std::countr_zero(bits))[0];
      }
      out.row(i)[0] = acc;
    }
    return out;
  }
  for (int i = 0; i < a.size(); ++i) {
    auto dst = out.row(i);
    auto src = a.row(i);
    for (int w = 0; w < words; ++w) {
      for (uint64_t bits = src[w]; bits != 0; bits &= bits - 1) {
        auto brow = b.row(w * 64 + std::countr_zero(bits));
        for (int k = 0; k < words; ++k) dst[k] ^= brow[k];
      }
    }
  }
  return out;
}

GF2Matrix mat_pow(const GF2Matrix& m, uint64_t e) {
  GF2Matrix result = GF2Matrix::identity(m.size());
  if (e == 0) return result;
  GF2Matrix base = m;
  for (;;) {
    if (e & 1u) result = mat_mul(result, base);
    e >>= 1;
    if (e == 0) break;
    base = mat_mul(base, base);
  }
  return result;
}

GF2Matrix mat_pow(const GF2Matrix& m, const BigUint& e) {
  if (e < 0) throw std::invalid_argument("negative exponent");
  GF2Matrix result = GF2Matrix::identity(m.size());
  if (e == 0) return result;
  const auto top = static_cast<std::size_t>(boost::multiprecision::msb(e));
  for (std::size_t i = top + 1; i-- > 0;) {
    result = mat_mul(result, result);
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) result = mat_mul(result, m);
  }
  return result;
}

uint64_t mat_vec(const GF2Matrix& m, uint64_t v) {
  if (m.size() > 64) throw std::invalid_argument("mat_vec supports sizes up to 64");
  uint64_t out = 0;
  for (int i = 0; i < m.size(); ++i) {
    out |= static_cast<uint64_t>(std::popcount(m.row(i)[0] & v) & 1) << i;
  }
  return out;
}

int rank(const GF2Matrix& m) {
  GF2Matrix work = m;
  const int size = m.size();
  int r = 0;
  for (int col = 0; col < size && r < size; ++col) {
    const int w = col / 64;
    const uint64_t bit = uint64_t{1} << (col % 64);
    int pivot = -1;
    for (int i = r; i < size; ++i) {
      if (work.row(i)[w] & bit) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r) {
      auto a = work.row(pivot);
      auto b = work.row(r);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto prow = work.row(r);
    for (int i = 0; i < size; ++i) {
      if (i != r && (work.row(i)[w] & bit)) {
        auto dst = work.row(i);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= prow[k];
      }
    }
    ++r;
  }
  return r;
}

bool is_invertible(const GF2Matrix& m) { return rank(m) == m.size(); }

BigUint gl_order(int k) {
  if (k < 1) throw std::invalid_argument("gl_order needs k >= 1");
  const BigUint q = BigUint(1) << k;
  BigUint order = 1;
  for (int i = 0; i < k; ++i) order *= q - (BigUint(1) << i);
  return order;
}

std::vector<uint64_t> factorize(uint64_t t) {
  if (t == 0) throw std::invalid_argument("factorize needs t >= 1");
  std::vector<uint64_t> primes;
  for (uint64_t p : {2u, 3u}) {
    while (t % p == 0) {
      primes.push_back(p);
      t /= p;
    }
  }
  // 6k +- 1 wheel
  for (uint64_t p = 5; p <= t / p; p += 6) {
    for (uint64_t c : {p, p + 2}) {
      while (t % c == 0) {
        primes.push_back(c);
        t /= c;
      }
    }
  }
  if (t > 1) primes.push_back(t);
  return primes;
}

namespace {

uint64_t mersenne(int k) { return k >= 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1; }

// Removes every prime factor that the exponent does not need. For each
// prime p with p^e exactly dividing the exponent, A = m^(exponent / p^e) is
// raised to the p-th power until it hits I; the number of steps is the
// power of p the order keeps.
BigUint strip_to_order(const GF2Matrix& m, BigUint exponent, std::vector<uint64_t> factors) {
  std::sort(factors.begin(), factors.end());
  factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
  for (const uint64_t p : factors) {
    BigUint rest = exponent;
    while (rest % p == 0) rest /= p;
    GF2Matrix a = mat_pow(m, rest);
    while (!a.is_identity()) {
      a = mat_pow(a, p);
      rest *= p;
    }
    exponent = rest;
  }
  return exponent;
}

}  // namespace

BigUint matrix_order(const GF2Matrix& m) {
  const int k = m.size();
  if (k > 64) throw std::invalid_argument("matrix_order supports sizes up to 64");
  if (!is_invertible(m)) throw DomainError("matrix not in GL");

  if (k <= 63) {
    const uint64_t t = mersenne(k);
    if (mat_pow(m, t).is_identity()) return strip_to_order(m, BigUint(t), factorize(t));
  }

  // |GL(k)| = 2^(k(k-1)/2) * prod_{i=1..k} (2^i - 1)
  std::vector<uint64_t> factors(static_cast<std::size_t>(k) * (k - 1) / 2, 2);
  for (int i = 2; i <= k; ++i) {
    auto f = factorize(mersenne(i));
    factors.insert(factors.end(), f.begin(), f.end());
  }
  return strip_to_order(m, gl_order(k), std::move(factors));
}

MaximalOrderTest::MaximalOrderTest(int size) : size_(size) {
  if (size < 1 || size > 63) throw std::invalid_argument("maximal order test needs size in [1, 63]");
  exponent_ = mersenne(size);
  primes_ = factorize(exponent_);
  primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
}

bool MaximalOrderTest::operator()(const GF2Matrix& m) const {
  if (m.size() != size_) throw std::invalid_argument("matrix size mismatch");
  if (!mat_pow(m, exponent_).is_identity()) return false;
  for (uint64_t p : primes_) {
    if (mat_pow(m, exponent_ / p).is_identity()) return false;
  }
  return true;
}

}  // namespace oca
