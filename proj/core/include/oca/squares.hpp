#pragma once

#include "oca/ca.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oca {

/// N x N array of symbols in [0, N). Only a container: the Latin property is
/// checked by is_latin, not enforced.
class LatinSquare {
 public:
  static constexpr uint32_t kMaxOrder = 1u << 10;

  LatinSquare(uint32_t order, std::vector<uint32_t> entries);

  uint32_t order() const { return order_; }
  uint32_t at(uint32_t row, uint32_t col) const { return entries_[std::size_t{row} * order_ + col]; }
  const std::vector<uint32_t>& entries() const { return entries_; }

  friend bool operator==(const LatinSquare&, const LatinSquare&) = default;

 private:
  uint32_t order_;
  std::vector<uint32_t> entries_;
};

/// Rows are indexed by the left half of the 2n-cell input, columns by the
/// right half, entries by the n-cell output (big-endian, cell 1 most
/// significant). Needs a bipermutive rule with d <= 11.
LatinSquare square_from_rule(const LocalRule& rule);

bool is_latin(const LatinSquare& sq);

/// True iff superposing the squares yields every ordered pair exactly once.
bool are_orthogonal(const LatinSquare& a, const LatinSquare& b);

/// (2,2)-multipermutation test for the pair map (x, y) -> (F(x,y), G(x,y)):
/// no two distinct input/output 4-tuples may agree on two n-bit blocks.
bool is_multipermutation(const LocalRule& f, const LocalRule& g);

/// N lines of N comma-separated integers.
std::string to_csv(const LatinSquare& sq);

}  // namespace oca
