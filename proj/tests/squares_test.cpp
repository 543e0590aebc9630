#include "oca/squares.hpp"

#include "oca/dynsys.hpp"
#include "oca/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

namespace oca {
namespace {

TEST(SquareFromRule, Rule90IsXorTable) {
  const LatinSquare sq = square_from_rule(LocalRule(3, 90));
  ASSERT_EQ(sq.order(), 4u);
  // F(x1..x4) = (x1^x3, x2^x4), i.e. row XOR column.
  for (uint32_t i = 0; i < 4; ++i) {
    for (uint32_t j = 0; j < 4; ++j) EXPECT_EQ(sq.at(i, j), i ^ j);
  }
  EXPECT_TRUE(is_latin(sq));
  EXPECT_THROW(square_from_rule(LocalRule(3, 30)), DomainError);
}

TEST(SquareFromRule, MatchesGlobalMap) {
  for (int d = 2; d <= 5; ++d) {
    const int n = d - 1;
    for (const auto& rule : bipermutive_rules(d)) {
      if (rule.code_u64() % 7 != 0 && d == 5) continue;  // sample at d = 5
      const LatinSquare sq = square_from_rule(rule);
      ASSERT_TRUE(is_latin(sq));
      for (uint32_t i = 0; i < sq.order(); ++i) {
        for (uint32_t j = 0; j < sq.order(); ++j) {
          const uint64_t cells = (uint64_t{i} << n) | j;
          ASSERT_EQ(sq.at(i, j), nbca_apply(rule, Configuration(2 * n, cells)).bits());
        }
      }
    }
  }
}

TEST(IsLatin, Cases) {
  EXPECT_TRUE(is_latin(LatinSquare(1, {0})));
  EXPECT_TRUE(is_latin(LatinSquare(2, {0, 1, 1, 0})));
  EXPECT_FALSE(is_latin(LatinSquare(2, {0, 1, 0, 1})));  // column repeats
  EXPECT_FALSE(is_latin(LatinSquare(2, {0, 0, 1, 1})));  // row repeats
  EXPECT_TRUE(is_latin(LatinSquare(3, {0, 1, 2, 1, 2, 0, 2, 0, 1})));
  EXPECT_THROW(LatinSquare(2, {0, 1, 2, 0}), std::invalid_argument);
  EXPECT_THROW(LatinSquare(2, {0, 1, 1}), std::invalid_argument);
}

// Superposition by collecting every (a, b) pair in a set.
bool orthogonal_oracle(const LatinSquare& a, const LatinSquare& b) {
  std::set<std::pair<uint32_t, uint32_t>> seen;
  for (uint32_t i = 0; i < a.order(); ++i) {
    for (uint32_t j = 0; j < a.order(); ++j) seen.emplace(a.at(i, j), b.at(i, j));
  }
  return seen.size() == std::size_t{a.order()} * a.order();
}

TEST(Orthogonal, Examples) {
  const auto s90 = square_from_rule(LocalRule(3, 90));
  const auto s150 = square_from_rule(LocalRule(3, 150));
  EXPECT_TRUE(are_orthogonal(s90, s150));
  EXPECT_FALSE(are_orthogonal(s90, s90));
  const LatinSquare a(2, {0, 1, 1, 0}), b(2, {1, 0, 0, 1});
  EXPECT_FALSE(are_orthogonal(a, b));
  EXPECT_THROW(are_orthogonal(a, s90), std::invalid_argument);
}

TEST(Orthogonal, AgreesWithSetOracleAndBijectivity) {
  for (int d = 2; d <= 4; ++d) {
    const auto rules = bipermutive_rules(d);
    for (const auto& f : rules) {
      for (const auto& g : rules) {
        const auto sf = square_from_rule(f), sg = square_from_rule(g);
        const bool orth = are_orthogonal(sf, sg);
        ASSERT_EQ(orth, orthogonal_oracle(sf, sg));
        ASSERT_EQ(orth, PairMap(f, g).is_bijective());
      }
    }
  }
}

TEST(Orthogonal, LinearPairsAgreeWithGcd) {
  for (int d = 3; d <= 6; ++d) {
    const int n = d - 1;
    for (uint64_t a = 0; a < (1ull << (n - 1)); ++a) {
      for (uint64_t b = 0; b < (1ull << (n - 1)); ++b) {
        const BinPoly pf((1ull << n) | (a << 1) | 1u), pg((1ull << n) | (b << 1) | 1u);
        const bool orth = are_orthogonal(square_from_rule(poly_to_rule(pf, d)),
                                         square_from_rule(poly_to_rule(pg, d)));
        ASSERT_EQ(orth, oracle::brute_force_gcd(pf.coeffs(), pg.coeffs()) == 1)
            << to_hex(pf) << " " << to_hex(pg);
      }
    }
  }
}

// Pairwise scan: any two distinct inputs whose 4-tuples (x, y, F, G) share
// two blocks violate the property.
bool multipermutation_oracle(const LocalRule& f, const LocalRule& g) {
  const int n = f.diameter() - 1;
  const uint64_t mask = (uint64_t{1} << n) - 1;
  const uint64_t states = uint64_t{1} << (2 * n);
  std::vector<std::array<uint64_t, 4>> rows;
  for (uint64_t s = 0; s < states; ++s) {
    rows.push_back({s >> n, s & mask, nbca_apply_bits(f, s, 2 * n), nbca_apply_bits(g, s, 2 * n)});
  }
  for (uint64_t u = 0; u < states; ++u) {
    for (uint64_t v = u + 1; v < states; ++v) {
      int agree = 0;
      for (int k = 0; k < 4; ++k) agree += rows[u][k] == rows[v][k];
      if (agree >= 2) return false;
    }
  }
  return true;
}

TEST(Multipermutation, Examples) {
  EXPECT_TRUE(is_multipermutation(LocalRule(3, 90), LocalRule(3, 150)));
  EXPECT_FALSE(is_multipermutation(LocalRule(3, 90), LocalRule(3, 90)));
  EXPECT_THROW(is_multipermutation(LocalRule(3, 90), LocalRule(4, 0x5A5A)), std::invalid_argument);
}

TEST(Multipermutation, AgreesWithPairwiseOracle) {
  for (int d = 2; d <= 4; ++d) {
    const auto rules = bipermutive_rules(d);
    for (const auto& f : rules) {
      for (const auto& g : rules) {
        const bool mp = is_multipermutation(f, g);
        ASSERT_EQ(mp, multipermutation_oracle(f, g)) << f.code_u64() << " " << g.code_u64();
        // For bipermutive rules the property reduces to orthogonality.
        ASSERT_EQ(mp, are_orthogonal(square_from_rule(f), square_from_rule(g)));
      }
    }
  }
}

TEST(Multipermutation, NonBipermutiveRulesCanFail) {
  // Rule 204 copies the middle cell, so F ignores x, which already breaks
  // the (x, F) projection.
  EXPECT_FALSE(is_multipermutation(LocalRule(3, 204), LocalRule(3, 150)));
  EXPECT_EQ(is_multipermutation(LocalRule(3, 204), LocalRule(3, 150)),
            multipermutation_oracle(LocalRule(3, 204), LocalRule(3, 150)));
}

TEST(ToCsv, Format) {
  EXPECT_EQ(to_csv(LatinSquare(2, {0, 1, 1, 0})), "0,1\n1,0\n");
}

}  // namespace
}  // namespace oca
