#pragma once

// Local rules, the no-boundary global map and the rule <-> polynomial
// correspondence for binary cellular automata.

#include "oca/gf2.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oca {

/// Binary local rule of diameter d stored as its 2^d-entry truth table. The
/// neighbourhood (x_1, ..., x_d) indexes the table as x_1 * 2^(d-1) + ... + x_d,
/// so the table read as an integer is the Wolfram code.
class LocalRule {
 public:
  static constexpr int kMinDiameter = 2;
  static constexpr int kMaxDiameter = 16;

  /// For d <= 6, where the whole table fits one word.
  LocalRule(int diameter, uint64_t wolfram_code);
  static LocalRule from_code(int diameter, const BigUint& wolfram_code);
  /// Parses a decimal Wolfram code.
  static LocalRule from_code_string(int diameter, std::string_view decimal);
  static LocalRule from_table(int diameter, std::vector<uint64_t> words);

  int diameter() const { return diameter_; }
  uint32_t entry_count() const { return uint32_t{1} << diameter_; }

  bool operator()(uint32_t index) const { return (table_[index >> 6] >> (index & 63)) & 1u; }

  BigUint code() const;
  /// Only valid for diameters up to 6.
  uint64_t code_u64() const;
  std::string code_string() const;

  const std::vector<uint64_t>& table() const { return table_; }

  friend bool operator==(const LocalRule&, const LocalRule&) = default;

 private:
  LocalRule() = default;
  void check_diameter() const;

  int diameter_ = 0;
  std::vector<uint64_t> table_;
};

/// A row of cells, cell 1 leftmost and stored in the most significant
/// meaningful bit. Length is limited to 64 cells.
class Configuration {
 public:
  static constexpr int kMaxLength = 64;

  Configuration(int length, uint64_t cells);
  /// From a '0'/'1' string, leftmost character is cell 1.
  static Configuration from_string(std::string_view bits);

  int length() const { return length_; }
  uint64_t bits() const { return cells_; }
  /// Zero-based from the left.
  bool cell(int i) const { return (cells_ >> (length_ - 1 - i)) & 1u; }
  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  int length_;
  uint64_t cells_;
};

enum class Linearity { linear, affine, nonlinear };

std::string to_string(Linearity l);

bool eval_rule(const LocalRule& rule, const Configuration& neighborhood);

/// No-boundary global map: output cell i reads input cells i..i+d-1.
Configuration nbca_apply(const LocalRule& rule, const Configuration& input);

/// Same map on raw bits, used by the hot loops. Requires d <= length <= 64.
inline uint64_t nbca_apply_bits(const LocalRule& rule, uint64_t cells, int length) {
  const int d = rule.diameter();
  const uint64_t window = (uint64_t{1} << d) - 1;
  uint64_t out = 0;
  for (int shift = length - d; shift >= 0; --shift) {
    out = (out << 1) | static_cast<uint64_t>(rule(static_cast<uint32_t>((cells >> shift) & window)));
  }
  return out;
}

bool is_bipermutive(const LocalRule& rule);
Linearity classify_linearity(const LocalRule& rule);

/// Coefficient of X^(i-1) is a_i; the rule must be linear and bipermutive.
BinPoly rule_to_poly(const LocalRule& rule);
/// Inverse of rule_to_poly for a polynomial of degree d-1 with nonzero
/// constant term.
LocalRule poly_to_rule(BinPoly p, int diameter);

/// All bipermutive rules of diameter 2 <= d <= 6, ascending by Wolfram code.
std::vector<LocalRule> bipermutive_rules(int diameter);

}  // namespace oca
