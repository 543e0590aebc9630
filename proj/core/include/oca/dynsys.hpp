#pragma once

// The dynamical system s(t+1) = (F(s(t)), G(s(t))) driven by a pair of
// bipermutive rules on 2n = 2(d-1) cells.

#include "oca/ca.hpp"
#include "oca/gf2.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oca {

/// 2n-bit state; the left half x sits in the high n bits, cell 1 is the most
/// significant bit.
class SystemState {
 public:
  SystemState(int n, uint64_t bits);
  static SystemState from_halves(int n, uint64_t left, uint64_t right);

  int n() const { return n_; }
  uint64_t bits() const { return bits_; }
  uint64_t left() const { return bits_ >> n_; }
  uint64_t right() const { return bits_ & ((uint64_t{1} << n_) - 1); }

  friend bool operator==(const SystemState&, const SystemState&) = default;

 private:
  int n_;
  uint64_t bits_;
};

/// The update map H for a fixed rule pair. Small systems (2n <= 20) are
/// tabulated on construction.
class PairMap {
 public:
  PairMap(const LocalRule& f, const LocalRule& g);

  int n() const { return n_; }
  int width() const { return 2 * n_; }
  uint64_t state_count() const { return uint64_t{1} << (2 * n_); }
  const LocalRule& f() const { return f_; }
  const LocalRule& g() const { return g_; }

  uint64_t operator()(uint64_t bits) const {
    if (!table_.empty()) return table_[bits];
    return compute(bits);
  }
  SystemState step(const SystemState& s) const;

  /// Exhaustive image check over all 2^{2n} states.
  bool is_bijective() const;

 private:
  uint64_t compute(uint64_t bits) const {
    return (nbca_apply_bits(f_, bits, 2 * n_) << n_) | nbca_apply_bits(g_, bits, 2 * n_);
  }

  LocalRule f_;
  LocalRule g_;
  int n_;
  std::vector<uint32_t> table_;
};

struct CycleDecomposition {
  /// (length, count), ascending by length.
  std::vector<std::pair<uint64_t, uint64_t>> cycles;
  uint64_t total_states = 0;

  uint64_t max_cycle_length() const { return cycles.empty() ? 0 : cycles.back().first; }
  friend bool operator==(const CycleDecomposition&, const CycleDecomposition&) = default;
};

SystemState h_step(const LocalRule& f, const LocalRule& g, const SystemState& s);

/// Full phase-space sweep with a visited bitmap; 2n <= 32. Throws
/// DomainError("not an OCA pair") when H is not a bijection.
CycleDecomposition cycle_decomposition(const PairMap& h);
CycleDecomposition cycle_decomposition(const LocalRule& f, const LocalRule& g);
/// Same sweep over an explicit successor table (successor[s] = H(s)).
CycleDecomposition cycle_decomposition(std::span<const uint32_t> successor);

uint64_t period_of_state(const PairMap& h, const SystemState& s);
uint64_t period_of_state(const LocalRule& f, const LocalRule& g, const SystemState& s);

enum class KeystreamMode { full_state, left_half };

/// States s(1) .. s(len), each written most significant cell first.
std::vector<bool> keystream(const LocalRule& f, const LocalRule& g, const SystemState& seed,
                            uint64_t len, KeystreamMode mode = KeystreamMode::full_state);

/// '0'/'1' characters.
std::string bits_to_string(const std::vector<bool>& bits);
/// Packed MSB-first; a trailing partial byte is zero padded.
std::vector<uint8_t> pack_bits(const std::vector<bool>& bits);

/// Sylvester matrix of a linear pair, i.e. the matrix of H.
GF2Matrix transition_matrix(const LocalRule& f, const LocalRule& g);

/// M * s with component j of the vector being cell j+1 of the state.
SystemState apply_matrix(const GF2Matrix& m, const SystemState& s);

/// {"pairs": [[length, count], ...]}
std::string to_json(const CycleDecomposition& d);

}  // namespace oca
