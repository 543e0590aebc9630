#pragma once

// Exhaustive searches over rule pairs: all bipermutive pairs of a diameter
// (with cycle analysis) and the linear pairs whose Sylvester matrix has
// maximal order 2^{2n} - 1.

#include "oca/ca.hpp"
#include "oca/gf2.hpp"

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oca {

struct IndexRange {
  uint64_t begin = 0;
  uint64_t end = 0;

  uint64_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Contiguous, disjoint ranges covering [0, space_size); the first
/// space_size % shards ranges are one longer.
std::vector<IndexRange> partition_work(uint64_t space_size, uint64_t shards);

/// Work splitting for the enumerations. Results never depend on these
/// settings.
struct ShardOptions {
  unsigned shards = 1;
  unsigned threads = 1;
  /// When set, each shard keeps a JSON checkpoint here and resumes from it.
  std::optional<std::filesystem::path> checkpoint_dir;
};

struct MaximalRulePair {
  uint64_t rule_f = 0;
  uint64_t rule_g = 0;
  Linearity class_f = Linearity::nonlinear;
  Linearity class_g = Linearity::nonlinear;

  friend bool operator==(const MaximalRulePair&, const MaximalRulePair&) = default;
};

struct SearchReport {
  int diameter = 0;
  uint64_t total_pairs = 0;
  uint64_t oca_pairs = 0;
  /// Maximum cycle length -> number of OCA pairs.
  std::map<uint64_t, uint64_t> max_cycle_histogram;
  /// Pairs whose longest cycle is 2^{2n} - 1, ordered by (rule_f, rule_g).
  std::vector<MaximalRulePair> maximal_pairs;

  void merge(const SearchReport& other);
  friend bool operator==(const SearchReport&, const SearchReport&) = default;
};

struct SearchOptions : ShardOptions {
  /// Required for d = 6 (about 4.3e9 pairs).
  bool allow_long = false;
};

/// Tests every ordered pair of bipermutive rules of diameter d for
/// bijectivity of H and records the longest cycle of each OCA pair.
SearchReport search_bipermutive(int diameter, const SearchOptions& options = {});

struct PolyPair {
  BinPoly f;
  BinPoly g;

  friend bool operator==(const PolyPair&, const PolyPair&) = default;
  friend auto operator<=>(const PolyPair&, const PolyPair&) = default;
};

/// Ordered pairs of degree-n polynomials with nonzero constant term, in
/// ascending (f, g) mask order. Index k maps to (f_{k / m}, g_{k % m}) with
/// m = 2^{n-1}.
class LinearPairSpace {
 public:
  explicit LinearPairSpace(int diameter);

  int degree() const { return n_; }
  uint64_t polynomial_count() const { return uint64_t{1} << (n_ - 1); }
  uint64_t size() const { return polynomial_count() * polynomial_count(); }
  BinPoly polynomial(uint64_t i) const {
    return BinPoly((uint64_t{1} << n_) | (i << 1) | 1u);
  }
  PolyPair operator[](uint64_t index) const {
    return {polynomial(index / polynomial_count()), polynomial(index % polynomial_count())};
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = PolyPair;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const LinearPairSpace* space, uint64_t index) : space_(space), index_(index) {}
    PolyPair operator*() const { return (*space_)[index_]; }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++index_;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    const LinearPairSpace* space_ = nullptr;
    uint64_t index_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  int n_;
};

LinearPairSpace enumerate_linear_pairs(int diameter);

struct LinearEnumReport {
  int diameter = 0;
  /// Coprime ordered pairs.
  uint64_t loca_ordered = 0;
  /// Coprime pairs with mask(f) < mask(g).
  uint64_t loca_unordered = 0;
  /// Ordered pairs with order 2^{2n} - 1.
  uint64_t mloca_ordered = 0;
  /// Maximal pairs with mask(f) < mask(g). Maximality is not preserved by
  /// swapping f and g, so this is not mloca_ordered / 2 in general.
  uint64_t mloca_unordered = 0;
  /// Every ordered maximal pair, ascending.
  std::vector<PolyPair> mloca_pairs;
  std::chrono::duration<double> elapsed{0};

  void merge(const LinearEnumReport& other);
  /// Compares counts and pairs; elapsed time is ignored.
  friend bool operator==(const LinearEnumReport& a, const LinearEnumReport& b) {
    return a.diameter == b.diameter && a.loca_ordered == b.loca_ordered &&
           a.loca_unordered == b.loca_unordered && a.mloca_ordered == b.mloca_ordered &&
           a.mloca_unordered == b.mloca_unordered && a.mloca_pairs == b.mloca_pairs;
  }
};

/// Keeps coprime pairs whose Sylvester matrix M satisfies M^t = I and
/// M^(t/p) != I for each prime p | t = 2^{2n} - 1. Needs 3 <= d <= 16.
LinearEnumReport enumerate_maximal_linear(int diameter, const ShardOptions& options = {});

std::string to_json(const SearchReport& r);
/// diameter,rule_f,rule_g,class_f,class_g,max_cycle per maximal pair.
std::string to_csv(const SearchReport& r);
/// Counts and pairs; never includes elapsed time.
std::string to_json(const LinearEnumReport& r);
/// diameter,poly_f,poly_g,rule_f,rule_g,order per maximal pair.
std::string to_csv(const LinearEnumReport& r);

}  // namespace oca
