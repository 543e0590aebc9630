#include "oca/ca.hpp"

#include "oca/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace oca {
namespace {

const uint64_t kRule90 = oracle::table_of(3, [](const auto& x) { return x[0] ^ x[2]; });
const uint64_t kRule150 = oracle::table_of(3, [](const auto& x) { return x[0] ^ x[1] ^ x[2]; });
const uint64_t kRule30 = oracle::table_of(3, [](const auto& x) { return x[0] ^ (x[1] | x[2]); });

TEST(LocalRule, WolframCodesMatchFormulas) {
  // Index convention: x_1 is the most significant bit.
  EXPECT_EQ(kRule90, 90u);
  EXPECT_EQ(kRule150, 150u);
  EXPECT_EQ(kRule30, 30u);
  EXPECT_EQ(LocalRule(3, 90).code(), 90);
  EXPECT_EQ(LocalRule(3, 90).code_string(), "90");
  EXPECT_THROW(LocalRule(3, 256), std::invalid_argument);
  EXPECT_THROW(LocalRule(1, 1), std::invalid_argument);
  EXPECT_THROW(LocalRule(17, 1), std::invalid_argument);
}

TEST(LocalRule, LargeDiameterCodesRoundTrip) {
  const LocalRule r = poly_to_rule(BinPoly(0x401), 11);
  EXPECT_EQ(LocalRule::from_code_string(11, r.code_string()), r);
  EXPECT_EQ(LocalRule::from_code(11, r.code()), r);
  EXPECT_THROW(LocalRule::from_code_string(3, "12a"), std::invalid_argument);
  EXPECT_THROW(LocalRule::from_code_string(3, "-1"), std::invalid_argument);
  EXPECT_THROW(LocalRule::from_code(3, BigUint(256)), std::invalid_argument);
}

TEST(EvalRule, Examples) {
  const LocalRule r90(3, 90), r150(3, 150);
  EXPECT_FALSE(eval_rule(r90, Configuration::from_string("101")));
  EXPECT_FALSE(eval_rule(r90, Configuration::from_string("000")));
  EXPECT_TRUE(eval_rule(r150, Configuration::from_string("111")));
  EXPECT_THROW(eval_rule(r90, Configuration::from_string("10")), std::invalid_argument);
}

TEST(NbcaApply, Examples) {
  const LocalRule r90(3, 90), r150(3, 150);
  EXPECT_EQ(nbca_apply(r90, Configuration::from_string("1011")), Configuration::from_string("01"));
  EXPECT_EQ(nbca_apply(r90, Configuration::from_string("0000")), Configuration::from_string("00"));
  EXPECT_EQ(nbca_apply(r150, Configuration::from_string("1001")), Configuration::from_string("11"));
  EXPECT_EQ(nbca_apply(r90, Configuration::from_string("101")).length(), 1);
  EXPECT_THROW(nbca_apply(r90, Configuration::from_string("10")), DomainError);
}

TEST(NbcaApply, MatchesNeighbourhoodOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 5;
    const LocalRule rule(d, rng() & ((d == 6) ? ~0ull : ((1ull << (1u << d)) - 1)));
    const int len = d + static_cast<int>(rng() % 20);
    const Configuration c(len, rng() & ((1ull << len) - 1));
    const Configuration out = nbca_apply(rule, c);
    ASSERT_EQ(out.length(), len - d + 1);
    for (int i = 0; i < out.length(); ++i) {
      uint64_t nb = 0;
      for (int k = 0; k < d; ++k) nb = (nb << 1) | c.cell(i + k);
      ASSERT_EQ(out.cell(i), eval_rule(rule, Configuration(d, nb)));
    }
  }
}

TEST(NbcaApply, LinearRulesAreAdditive) {
  std::mt19937_64 rng(2);
  for (uint64_t p = 1; p < 64; p += 2) {
    const BinPoly poly(p | 64);  // degree 6
    const LocalRule rule = poly_to_rule(poly, 7);
    for (int trial = 0; trial < 20; ++trial) {
      const uint64_t x = rng() & ((1ull << 30) - 1), y = rng() & ((1ull << 30) - 1);
      ASSERT_EQ(nbca_apply_bits(rule, x ^ y, 30), nbca_apply_bits(rule, x, 30) ^ nbca_apply_bits(rule, y, 30));
    }
  }
}

TEST(Bipermutive, Examples) {
  EXPECT_TRUE(is_bipermutive(LocalRule(3, 90)));
  EXPECT_FALSE(is_bipermutive(LocalRule(3, 30)));
  EXPECT_FALSE(is_bipermutive(LocalRule(3, 0)));
  EXPECT_TRUE(is_bipermutive(LocalRule(3, 105)));
}

// Direct flip test written against the mathematical definition.
bool flip_oracle(int d, uint64_t code) {
  for (uint32_t x = 0; x < (1u << d); ++x) {
    const bool v = (code >> x) & 1u;
    if (((code >> (x ^ (1u << (d - 1)))) & 1u) == v) return false;
    if (((code >> (x ^ 1u)) & 1u) == v) return false;
  }
  return true;
}

TEST(Bipermutive, CountsPerDiameter) {
  // 2^(2^(d-2)) bipermutive rules: 2, 4, 16 for d = 2, 3, 4.
  const std::array<uint64_t, 3> expected{2, 4, 16};
  for (int d = 2; d <= 4; ++d) {
    uint64_t hits = 0;
    const uint64_t total = uint64_t{1} << (1u << d);
    for (uint64_t code = 0; code < total; ++code) {
      const bool bip = is_bipermutive(LocalRule(d, code));
      ASSERT_EQ(bip, flip_oracle(d, code));
      hits += bip;
    }
    EXPECT_EQ(hits, expected[d - 2]) << "d=" << d;
    const auto rules = bipermutive_rules(d);
    ASSERT_EQ(rules.size(), hits);
    EXPECT_TRUE(std::is_sorted(rules.begin(), rules.end(),
                               [](const auto& a, const auto& b) { return a.code_u64() < b.code_u64(); }));
    for (const auto& r : rules) EXPECT_TRUE(is_bipermutive(r));
  }
  EXPECT_EQ(bipermutive_rules(5).size(), 256u);
  EXPECT_EQ(bipermutive_rules(6).size(), 65536u);
  EXPECT_THROW(bipermutive_rules(7), std::invalid_argument);
}

TEST(Linearity, Examples) {
  EXPECT_EQ(classify_linearity(LocalRule(3, 90)), Linearity::linear);
  EXPECT_EQ(classify_linearity(LocalRule(3, 105)), Linearity::affine);
  EXPECT_EQ(classify_linearity(LocalRule(3, 30)), Linearity::nonlinear);
  EXPECT_EQ(classify_linearity(LocalRule(3, 0)), Linearity::linear);
  EXPECT_EQ(classify_linearity(LocalRule(3, 255)), Linearity::affine);
}

TEST(Linearity, AgreesWithXorSubsetEnumeration) {
  for (int d = 2; d <= 4; ++d) {
    std::vector<uint64_t> linear;
    for (uint32_t subset = 0; subset < (1u << d); ++subset) {
      linear.push_back(oracle::table_of(d, [&](const auto& x) {
        int acc = 0;
        for (int i = 0; i < d; ++i) acc ^= ((subset >> i) & 1u) ? x[i] : 0;
        return acc != 0;
      }));
    }
    const uint64_t all = (d == 6) ? ~0ull : ((1ull << (1u << d)) - 1);
    for (uint64_t code = 0; code <= all; ++code) {
      Linearity expect = Linearity::nonlinear;
      if (std::find(linear.begin(), linear.end(), code) != linear.end()) {
        expect = Linearity::linear;
      } else if (std::find(linear.begin(), linear.end(), code ^ all) != linear.end()) {
        expect = Linearity::affine;
      }
      ASSERT_EQ(classify_linearity(LocalRule(d, code)), expect) << d << " " << code;
    }
  }
}

TEST(RulePoly, Examples) {
  EXPECT_EQ(rule_to_poly(LocalRule(3, 90)), BinPoly(0x5));
  EXPECT_EQ(rule_to_poly(LocalRule(3, 150)), BinPoly(0x7));
  EXPECT_THROW(rule_to_poly(LocalRule(3, 105)), DomainError);
  EXPECT_THROW(rule_to_poly(LocalRule(3, 30)), DomainError);
  EXPECT_THROW(rule_to_poly(LocalRule(3, 0)), DomainError);  // linear but not bipermutive

  EXPECT_EQ(poly_to_rule(BinPoly(0x5), 3), LocalRule(3, 90));
  EXPECT_EQ(poly_to_rule(BinPoly(0x7), 3), LocalRule(3, 150));
  EXPECT_THROW(poly_to_rule(BinPoly(0x5), 4), DomainError);
  EXPECT_THROW(poly_to_rule(BinPoly(0x6), 3), DomainError);
}

TEST(RulePoly, AsymmetricCoefficientsKeepOrientation) {
  // f = x_1 + x_2 + x_4 has a = (1,1,0,1): P_f = 1 + X + X^3.
  const uint64_t code = oracle::table_of(4, [](const auto& x) { return x[0] ^ x[1] ^ x[3]; });
  EXPECT_EQ(rule_to_poly(LocalRule(4, code)), BinPoly(0xB));
}

TEST(RulePoly, RoundTripsAndCounts) {
  for (int d = 3; d <= 12; ++d) {
    const int n = d - 1;
    int linear_bipermutive = 0;
    for (uint64_t mid = 0; mid < (1ull << (n - 1)); ++mid) {
      const BinPoly p((1ull << n) | (mid << 1) | 1u);
      const LocalRule r = poly_to_rule(p, d);
      ASSERT_EQ(rule_to_poly(r), p);
      ASSERT_TRUE(is_bipermutive(r));
      ASSERT_EQ(classify_linearity(r), Linearity::linear);
      ++linear_bipermutive;
    }
    EXPECT_EQ(linear_bipermutive, 1 << (d - 2));
  }
  // Exactly 2^(d-2) linear bipermutive rules among all rules for small d.
  for (int d = 2; d <= 4; ++d) {
    int count = 0;
    for (uint64_t code = 0; code < (1ull << (1u << d)); ++code) {
      const LocalRule r(d, code);
      if (is_bipermutive(r) && classify_linearity(r) == Linearity::linear) {
        ++count;
        if (d >= 3) ASSERT_EQ(poly_to_rule(rule_to_poly(r), d), r);
      }
    }
    EXPECT_EQ(count, 1 << (d - 2));
  }
}

TEST(Configuration, Validation) {
  EXPECT_THROW(Configuration(0, 0), std::invalid_argument);
  EXPECT_THROW(Configuration(3, 8), std::invalid_argument);
  EXPECT_THROW(Configuration::from_string("10a"), std::invalid_argument);
  EXPECT_EQ(Configuration::from_string("0110").to_string(), "0110");
  EXPECT_TRUE(Configuration::from_string("100").cell(0));
}

}  // namespace
}  // namespace oca
