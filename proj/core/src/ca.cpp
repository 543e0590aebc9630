#include "oca/ca.hpp"

#include "oca/error.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace oca {

namespace {

std::size_t words_for(int diameter) {
  return diameter <= 6 ? 1 : (std::size_t{1} << diameter) / 64;
}

uint64_t low_mask(int diameter) {
  return diameter >= 6 ? ~uint64_t{0} : (uint64_t{1} << (1u << diameter)) - 1;
}

uint32_t reverse_bits(uint32_t v, int width) {
  uint32_t out = 0;
  for (int i = 0; i < width; ++i) out |= ((v >> i) & 1u) << (width - 1 - i);
  return out;
}

// Table of the XOR of the inputs selected by index_mask.
std::vector<uint64_t> parity_table(int diameter, uint32_t index_mask) {
  std::vector<uint64_t> words(words_for(diameter), 0);
  const uint32_t entries = uint32_t{1} << diameter;
  for (uint32_t x = 0; x < entries; ++x) {
    if (std::popcount(x & index_mask) & 1) words[x >> 6] |= uint64_t{1} << (x & 63);
  }
  return words;
}

}  // namespace

void LocalRule::check_diameter() const {
  if (diameter_ < kMinDiameter || diameter_ > kMaxDiameter) {
    throw std::invalid_argument("diameter must be in [2, 16], got " + std::to_string(diameter_));
  }
}

LocalRule::LocalRule(int diameter, uint64_t wolfram_code) : diameter_(diameter) {
  check_diameter();
  if (diameter > 6) throw std::invalid_argument("use from_code for diameters above 6");
  if ((wolfram_code & ~low_mask(diameter)) != 0) {
    throw std::invalid_argument("Wolfram code " + std::to_string(wolfram_code) +
                                " exceeds 2^(2^d) for d=" + std::to_string(diameter));
  }
  table_.assign(1, wolfram_code);
}

LocalRule LocalRule::from_code(int diameter, const BigUint& wolfram_code) {
  LocalRule r;
  r.diameter_ = diameter;
  r.check_diameter();
  if (wolfram_code < 0 || (wolfram_code >> (1u << diameter)) != 0) {
    throw std::invalid_argument("Wolfram code out of range for d=" + std::to_string(diameter));
  }
  r.table_.assign(words_for(diameter), 0);
  BigUint rest = wolfram_code;
  for (auto& w : r.table_) {
    w = static_cast<uint64_t>(rest & BigUint(~uint64_t{0}));
    rest >>= 64;
  }
  return r;
}

LocalRule LocalRule::from_code_string(int diameter, std::string_view decimal) {
  if (decimal.empty() || !std::all_of(decimal.begin(), decimal.end(),
                                      [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("Wolfram code must be a decimal integer: '" + std::string(decimal) + "'");
  }
  return from_code(diameter, BigUint(std::string(decimal)));
}

LocalRule LocalRule::from_table(int diameter, std::vector<uint64_t> words) {
  LocalRule r;
  r.diameter_ = diameter;
  r.check_diameter();
  if (words.size() != words_for(diameter)) throw std::invalid_argument("truth table size mismatch");
  if ((words[0] & ~low_mask(diameter)) != 0) throw std::invalid_argument("truth table has stray bits");
  r.table_ = std::move(words);
  return r;
}

BigUint LocalRule::code() const {
  BigUint v = 0;
  for (std::size_t i = table_.size(); i-- > 0;) {
    v <<= 64;
    v |= table_[i];
  }
  return v;
}

uint64_t LocalRule::code_u64() const {
  if (diameter_ > 6) throw std::invalid_argument("Wolfram code does not fit 64 bits");
  return table_[0];
}

std::string LocalRule::code_string() const {
  return diameter_ <= 6 ? std::to_string(table_[0]) : code().str();
}

Configuration::Configuration(int length, uint64_t cells) : length_(length), cells_(cells) {
  if (length < 1 || length > kMaxLength) {
    throw std::invalid_argument("configuration length must be in [1, 64]");
  }
  if (length < 64 && (cells >> length) != 0) {
    throw std::invalid_argument("configuration has bits beyond its length");
  }
}

Configuration Configuration::from_string(std::string_view bits) {
  if (bits.empty() || bits.size() > kMaxLength) throw std::invalid_argument("bad configuration length");
  uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("configuration cells must be 0 or 1");
    v = (v << 1) | static_cast<uint64_t>(c == '1');
  }
  return Configuration(static_cast<int>(bits.size()), v);
}

std::string Configuration::to_string() const {
  std::string s(length_, '0');
  for (int i = 0; i < length_; ++i) {
    if (cell(i)) s[i] = '1';
  }
  return s;
}

std::string to_string(Linearity l) {
  switch (l) {
    case Linearity::linear:
      return "linear";
    case Linearity::affine:
      return "affine";
    case Linearity::nonlinear:
      return "nonlinear";
  }
  return "unknown";
}

bool eval_rule(const LocalRule& rule, const Configuration& neighborhood) {
  if (neighborhood.length() != rule.diameter()) {
    throw std::invalid_argument("neighborhood length " + std::to_string(neighborhood.length()) +
                                " does not match diameter " + std::to_string(rule.diameter()));
  }
  return rule(static_cast<uint32_t>(neighborhood.bits()));
}

Configuration nbca_apply(const LocalRule& rule, const Configuration& input) {
  if (input.length() < rule.diameter()) throw DomainError("configuration shorter than diameter");
  const int out_len = input.length() - rule.diameter() + 1;
  return Configuration(out_len, nbca_apply_bits(rule, input.bits(), input.length()));
}

bool is_bipermutive(const LocalRule& rule) {
  const uint32_t entries = rule.entry_count();
  const uint32_t left = entries >> 1;
  for (uint32_t x = 0; x < entries; ++x) {
    if (!(x & left) && rule(x) == rule(x | left)) return false;
    if (!(x & 1u) && rule(x) == rule(x | 1u)) return false;
  }
  return true;
}

namespace {

// Index-bit mask of the coefficients a_i = f(e_i) ^ f(0).
uint32_t unit_response(const LocalRule& rule) {
  const bool f0 = rule(0);
  uint32_t mask = 0;
  for (int b = 0; b < rule.diameter(); ++b) {
    if (rule(uint32_t{1} << b) != f0) mask |= uint32_t{1} << b;
  }
  return mask;
}

}  // namespace

Linearity classify_linearity(const LocalRule& rule) {
  auto expected = parity_table(rule.diameter(), unit_response(rule));
  if (!rule(0)) return expected == rule.table() ? Linearity::linear : Linearity::nonlinear;
  const uint64_t top = low_mask(rule.diameter());
  expected[0] ^= top;
  for (std::size_t i = 1; i < expected.size(); ++i) expected[i] = ~expected[i];
  return expected == rule.table() ? Linearity::affine : Linearity::nonlinear;
}

BinPoly rule_to_poly(const LocalRule& rule) {
  if (classify_linearity(rule) != Linearity::linear || !is_bipermutive(rule)) {
    throw DomainError("rule " + rule.code_string() + " is not linear bipermutive");
  }
  return BinPoly(reverse_bits(unit_response(rule), rule.diameter()));
}

LocalRule poly_to_rule(BinPoly p, int diameter) {
  if (diameter < LocalRule::kMinDiameter || diameter > LocalRule::kMaxDiameter ||
      !p.is_rule_polynomial(diameter - 1)) {
    throw DomainError("polynomial " + to_hex(p) + " is not a rule polynomial of degree " +
                      std::to_string(diameter - 1));
  }
  const auto index_mask = reverse_bits(static_cast<uint32_t>(p.coeffs()), diameter);
  return LocalRule::from_table(diameter, parity_table(diameter, index_mask));
}

std::vector<LocalRule> bipermutive_rules(int diameter) {
  if (diameter < 2 || diameter > 6) {
    throw std::invalid_argument("bipermutive rule enumeration supports d in [2, 6]");
  }
  // f = x_1 ^ x_d ^ h(x_2..x_{d-1}) for an arbitrary h of d-2 variables.
  const uint32_t entries = uint32_t{1} << diameter;
  const uint32_t inner_mask = (uint32_t{1} << (diameter - 2)) - 1;
  const uint64_t h_count = uint64_t{1} << (uint32_t{1} << (diameter - 2));
  std::vector<uint64_t> codes;
  codes.reserve(h_count);
  for (uint64_t h = 0; h < h_count; ++h) {
    uint64_t table = 0;
    for (uint32_t x = 0; x < entries; ++x) {
      const uint32_t ends = (x >> (diameter - 1)) ^ (x & 1u);
      const uint32_t inner = (x >> 1) & inner_mask;
      if ((ends ^ static_cast<uint32_t>((h >> inner) & 1u)) != 0) table |= uint64_t{1} << x;
    }
    codes.push_back(table);
  }
  std::sort(codes.begin(), codes.end());
  std::vector<LocalRule> rules;
  rules.reserve(codes.size());
  for (uint64_t c : codes) rules.emplace_back(diameter, c);
  return rules;
}

}  // namespace oca
