#include "oca/squares.hpp"

#include "oca/error.hpp"

#include <array>
#include <stdexcept>

namespace oca {

LatinSquare::LatinSquare(uint32_t order, std::vector<uint32_t> entries)
    : order_(order), entries_(std::move(entries)) {
  if (order == 0 || order > kMaxOrder) throw std::invalid_argument("square order must be in [1, 1024]");
  if (entries_.size() != std::size_t{order} * order) throw std::invalid_argument("square must have N*N entries");
  for (uint32_t v : entries_) {
    if (v >= order) throw std::invalid_argument("square symbol out of range");
  }
}

LatinSquare square_from_rule(const LocalRule& rule) {
  if (rule.diameter() > 11) throw std::invalid_argument("squares are materialized only for d <= 11");
  if (!is_bipermutive(rule)) throw DomainError("rule " + rule.code_string() + " is not bipermutive");
  const int n = rule.diameter() - 1;
  const uint32_t order = uint32_t{1} << n;
  std::vector<uint32_t> entries(std::size_t{order} * order);
  for (uint32_t i = 0; i < order; ++i) {
    for (uint32_t j = 0; j < order; ++j) {
      const uint64_t input = (uint64_t{i} << n) | j;
      entries[std::size_t{i} * order + j] = static_cast<uint32_t>(nbca_apply_bits(rule, input, 2 * n));
    }
  }
  return LatinSquare(order, std::move(entries));
}

bool is_latin(const LatinSquare& sq) {
  const uint32_t order = sq.order();
  std::vector<uint32_t> row_seen(order, ~0u), col_seen(order, ~0u);
  for (uint32_t i = 0; i < order; ++i) {
    for (uint32_t j = 0; j < order; ++j) {
      uint32_t& r = row_seen[sq.at(i, j)];
      uint32_t& c = col_seen[sq.at(j, i)];
      if (r == i || c == i) return false;
      r = i;
      c = i;
    }
  }
  return true;
}

bool are_orthogonal(const LatinSquare& a, const LatinSquare& b) {
  if (a.order() != b.order()) throw std::invalid_argument("square order mismatch");
  const std::size_t order = a.order();
  std::vector<bool> seen(order * order, false);
  for (std::size_t k = 0; k < order * order; ++k) {
    const std::size_t pair = std::size_t{a.entries()[k]} * order + b.entries()[k];
    if (seen[pair]) return false;
    seen[pair] = true;
  }
  return true;
}

bool is_multipermutation(const LocalRule& f, const LocalRule& g) {
  if (f.diameter() != g.diameter()) throw std::invalid_argument("rule diameters differ");
  const int n = f.diameter() - 1;
  if (2 * n > 30) throw std::invalid_argument("multipermutation check supports d <= 16");
  const uint64_t states = uint64_t{1} << (2 * n);
  const uint64_t block = (uint64_t{1} << n) - 1;

  // 2^{2n} distinct inputs agree on no two blocks iff every projection onto a
  // pair of blocks is injective. The (x, y) projection is the identity.
  constexpr int kProjections = 5;
  std::array<std::vector<bool>, kProjections> seen;
  for (auto& s : seen) s.assign(states, false);
  for (uint64_t s = 0; s < states; ++s) {
    const uint64_t x = s >> n;
    const uint64_t y = s & block;
    const uint64_t fx = nbca_apply_bits(f, s, 2 * n);
    const uint64_t gx = nbca_apply_bits(g, s, 2 * n);
    const std::array<uint64_t, kProjections> keys = {
        (x << n) | fx, (x << n) | gx, (y << n) | fx, (y << n) | gx, (fx << n) | gx,
    };
    for (int p = 0; p < kProjections; ++p) {
      if (seen[p][keys[p]]) return false;
      seen[p][keys[p]] = true;
    }
  }
  return true;
}

std::string to_csv(const LatinSquare& sq) {
  std::string out;
  for (uint32_t i = 0; i < sq.order(); ++i) {
    for (uint32_t j = 0; j < sq.order(); ++j) {
      if (j) out += ',';
      out += std::to_string(sq.at(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace oca
