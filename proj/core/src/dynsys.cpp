#include "oca/dynsys.hpp"

#include "oca/error.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <stdexcept>

namespace oca {

namespace {

constexpr int kTabulateWidth = 20;
constexpr int kMaxSweepWidth = 32;

uint64_t reverse_bits(uint64_t v, int width) {
  uint64_t out = 0;
  for (int i = 0; i < width; ++i) out |= ((v >> i) & 1u) << (width - 1 - i);
  return out;
}

}  // namespace

SystemState::SystemState(int n, uint64_t bits) : n_(n), bits_(bits) {
  if (n < 1 || n > 31) throw std::invalid_argument("state half-width must be in [1, 31]");
  if ((bits >> (2 * n)) != 0) throw std::invalid_argument("state has bits beyond 2n cells");
}

SystemState SystemState::from_halves(int n, uint64_t left, uint64_t right) {
  if (n < 1 || n > 31 || (left >> n) != 0 || (right >> n) != 0) {
    throw std::invalid_argument("state half exceeds n cells");
  }
  return SystemState(n, (left << n) | right);
}

PairMap::PairMap(const LocalRule& f, const LocalRule& g) : f_(f), g_(g), n_(f.diameter() - 1) {
  if (f.diameter() != g.diameter()) throw std::invalid_argument("rule diameters differ");
  if (!is_bipermutive(f) || !is_bipermutive(g)) throw DomainError("rules must be bipermutive");
  if (width() <= kTabulateWidth) {
    table_.resize(state_count());
    for (uint64_t s = 0; s < state_count(); ++s) table_[s] = static_cast<uint32_t>(compute(s));
  }
}

SystemState PairMap::step(const SystemState& s) const {
  if (s.n() != n_) throw std::invalid_argument("state size does not match rule diameter");
  return SystemState(n_, (*this)(s.bits()));
}

bool PairMap::is_bijective() const {
  if (width() > kMaxSweepWidth) throw std::invalid_argument("bijectivity sweep limited to 2n <= 32");
  std::vector<bool> hit(state_count(), false);
  for (uint64_t s = 0; s < state_count(); ++s) {
    const uint64_t img = (*this)(s);
    if (hit[img]) return false;
    hit[img] = true;
  }
  return true;
}

SystemState h_step(const LocalRule& f, const LocalRule& g, const SystemState& s) {
  if (f.diameter() != g.diameter()) throw std::invalid_argument("rule diameters differ");
  if (s.n() != f.diameter() - 1) throw std::invalid_argument("state size does not match rule diameter");
  if (!is_bipermutive(f) || !is_bipermutive(g)) throw DomainError("rules must be bipermutive");
  const Configuration c(2 * s.n(), s.bits());
  return SystemState::from_halves(s.n(), nbca_apply(f, c).bits(), nbca_apply(g, c).bits());
}

namespace {

template <class Step>
CycleDecomposition sweep(uint64_t states, Step&& next) {
  std::vector<uint64_t> visited((states + 63) / 64, 0);
  auto seen = [&](uint64_t s) { return (visited[s >> 6] >> (s & 63)) & 1u; };
  auto mark = [&](uint64_t s) { visited[s >> 6] |= uint64_t{1} << (s & 63); };

  std::map<uint64_t, uint64_t> lengths;
  for (uint64_t start = 0; start < states; ++start) {
    if (seen(start)) continue;
    uint64_t len = 0;
    uint64_t s = start;
    do {
      mark(s);
      ++len;
      s = next(s);
    } while (!seen(s));
    // A bijection can only re-enter its own cycle at the start state.
    if (s != start) throw DomainError("not an OCA pair");
    ++lengths[len];
  }
  CycleDecomposition d;
  d.total_states = states;
  d.cycles.assign(lengths.begin(), lengths.end());
  return d;
}

}  // namespace

CycleDecomposition cycle_decomposition(const PairMap& h) {
  if (h.width() > kMaxSweepWidth) throw std::invalid_argument("cycle decomposition limited to 2n <= 32");
  return sweep(h.state_count(), [&h](uint64_t s) { return h(s); });
}

CycleDecomposition cycle_decomposition(std::span<const uint32_t> successor) {
  for (uint32_t s : successor) {
    if (s >= successor.size()) throw std::invalid_argument("successor out of range");
  }
  return sweep(successor.size(), [successor](uint64_t s) { return uint64_t{successor[s]}; });
}

CycleDecomposition cycle_decomposition(const LocalRule& f, const LocalRule& g) {
  return cycle_decomposition(PairMap(f, g));
}

uint64_t period_of_state(const PairMap& h, const SystemState& s) {
  if (s.n() != h.n()) throw std::invalid_argument("state size does not match rule diameter");
  const uint64_t cap = h.state_count();
  uint64_t x = h(s.bits());
  for (uint64_t p = 1; p <= cap; ++p) {
    if (x == s.bits()) return p;
    x = h(x);
  }
  throw DomainError("not an OCA pair");
}

uint64_t period_of_state(const LocalRule& f, const LocalRule& g, const SystemState& s) {
  return period_of_state(PairMap(f, g), s);
}

namespace {

// Exhaustive for small systems, the gcd criterion for linear pairs. Larger
// nonlinear pairs are accepted unchecked since a full sweep would dominate.
bool known_non_oca(const PairMap& h) {
  if (h.width() <= 24) return !h.is_bijective();
  if (classify_linearity(h.f()) == Linearity::linear && classify_linearity(h.g()) == Linearity::linear) {
    return poly_gcd(rule_to_poly(h.f()), rule_to_poly(h.g())) != BinPoly(1);
  }
  return false;
}

}  // namespace

std::vector<bool> keystream(const LocalRule& f, const LocalRule& g, const SystemState& seed,
                            uint64_t len, KeystreamMode mode) {
  const PairMap h(f, g);
  if (known_non_oca(h)) throw DomainError("not an OCA pair");
  if (seed.n() != h.n()) throw std::invalid_argument("seed size does not match rule diameter");
  const int width = mode == KeystreamMode::full_state ? h.width() : h.n();
  const int drop = h.width() - width;
  std::vector<bool> out;
  out.reserve(len * width);
  uint64_t s = seed.bits();
  for (uint64_t t = 0; t < len; ++t) {
    s = h(s);
    const uint64_t emitted = s >> drop;
    for (int b = width - 1; b >= 0; --b) out.push_back((emitted >> b) & 1u);
  }
  return out;
}

std::string bits_to_string(const std::vector<bool>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

std::vector<uint8_t> pack_bits(const std::vector<bool>& bits) {
  std::vector<uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

GF2Matrix transition_matrix(const LocalRule& f, const LocalRule& g) {
  if (f.diameter() != g.diameter()) throw std::invalid_argument("rule diameters differ");
  const int n = f.diameter() - 1;
  return sylvester_matrix(rule_to_poly(f), rule_to_poly(g), n);
}

SystemState apply_matrix(const GF2Matrix& m, const SystemState& s) {
  const int width = 2 * s.n();
  if (m.size() != width) throw std::invalid_argument("matrix size does not match state");
  return SystemState(s.n(), reverse_bits(mat_vec(m, reverse_bits(s.bits(), width)), width));
}

std::string to_json(const CycleDecomposition& d) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [len, count] : d.cycles) pairs.push_back({len, count});
  return nlohmann::json{{"pairs", pairs}}.dump();
}

}  // namespace oca
