#include "oca/enumeration.hpp"

#include "oca/dynsys.hpp"
#include "oca/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace oca {

using json = nlohmann::json;

std::vector<IndexRange> partition_work(uint64_t space_size, uint64_t shards) {
  if (shards == 0) throw std::invalid_argument("shard count must be at least 1");
  std::vector<IndexRange> ranges;
  ranges.reserve(shards);
  const uint64_t base = space_size / shards;
  const uint64_t extra = space_size % shards;
  uint64_t begin = 0;
  for (uint64_t s = 0; s < shards; ++s) {
    const uint64_t len = base + (s < extra ? 1 : 0);
    ranges.push_back({begin, begin + len});
    begin += len;
  }
  return ranges;
}

void SearchReport::merge(const SearchReport& other) {
  if (diameter != other.diameter) throw std::invalid_argument("cannot merge reports of different diameters");
  total_pairs += other.total_pairs;
  oca_pairs += other.oca_pairs;
  for (const auto& [len, count] : other.max_cycle_histogram) max_cycle_histogram[len] += count;
  maximal_pairs.insert(maximal_pairs.end(), other.maximal_pairs.begin(), other.maximal_pairs.end());
  std::sort(maximal_pairs.begin(), maximal_pairs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.rule_f, a.rule_g) < std::tie(b.rule_f, b.rule_g);
  });
}

void LinearEnumReport::merge(const LinearEnumReport& other) {
  if (diameter != other.diameter) throw std::invalid_argument("cannot merge reports of different diameters");
  loca_ordered += other.loca_ordered;
  loca_unordered += other.loca_unordered;
  mloca_ordered += other.mloca_ordered;
  mloca_unordered += other.mloca_unordered;
  mloca_pairs.insert(mloca_pairs.end(), other.mloca_pairs.begin(), other.mloca_pairs.end());
  std::sort(mloca_pairs.begin(), mloca_pairs.end());
}

namespace {

Linearity linearity_from_string(const std::string& s) {
  if (s == "linear") return Linearity::linear;
  if (s == "affine") return Linearity::affine;
  if (s == "nonlinear") return Linearity::nonlinear;
  throw std::invalid_argument("unknown linearity class '" + s + "'");
}

json to_value(const SearchReport& r) {
  json hist = json::array();
  for (const auto& [len, count] : r.max_cycle_histogram) hist.push_back({len, count});
  json pairs = json::array();
  for (const auto& p : r.maximal_pairs) {
    pairs.push_back({{"rule_f", p.rule_f},
                     {"rule_g", p.rule_g},
                     {"class_f", to_string(p.class_f)},
                     {"class_g", to_string(p.class_g)}});
  }
  return {{"diameter", r.diameter},
          {"total_pairs", r.total_pairs},
          {"oca_pairs", r.oca_pairs},
          {"max_cycle_histogram", hist},
          {"maximal_pairs", pairs}};
}

SearchReport search_from_value(const json& v) {
  SearchReport r;
  r.diameter = v.at("diameter").get<int>();
  r.total_pairs = v.at("total_pairs").get<uint64_t>();
  r.oca_pairs = v.at("oca_pairs").get<uint64_t>();
  for (const auto& e : v.at("max_cycle_histogram")) {
    r.max_cycle_histogram[e.at(0).get<uint64_t>()] = e.at(1).get<uint64_t>();
  }
  for (const auto& p : v.at("maximal_pairs")) {
    r.maximal_pairs.push_back({p.at("rule_f").get<uint64_t>(), p.at("rule_g").get<uint64_t>(),
                               linearity_from_string(p.at("class_f").get<std::string>()),
                               linearity_from_string(p.at("class_g").get<std::string>())});
  }
  return r;
}

json to_value(const LinearEnumReport& r) {
  json pairs = json::array();
  for (const auto& p : r.mloca_pairs) pairs.push_back({to_hex(p.f), to_hex(p.g)});
  const int n = r.diameter - 1;
  return {{"diameter", r.diameter},
          {"period", (uint64_t{1} << (2 * n)) - 1},
          {"loca_ordered", r.loca_ordered},
          {"loca_unordered", r.loca_unordered},
          {"mloca_ordered", r.mloca_ordered},
          {"mloca_unordered", r.mloca_unordered},
          {"mloca_pairs", pairs}};
}

LinearEnumReport linear_from_value(const json& v) {
  LinearEnumReport r;
  r.diameter = v.at("diameter").get<int>();
  r.loca_ordered = v.at("loca_ordered").get<uint64_t>();
  r.loca_unordered = v.at("loca_unordered").get<uint64_t>();
  r.mloca_ordered = v.at("mloca_ordered").get<uint64_t>();
  r.mloca_unordered = v.at("mloca_unordered").get<uint64_t>();
  for (const auto& p : v.at("mloca_pairs")) {
    r.mloca_pairs.push_back({parse_poly(p.at(0).get<std::string>()), parse_poly(p.at(1).get<std::string>())});
  }
  return r;
}

// Checkpoint file per shard: {"tag", "shard", "shards", "begin", "end",
// "next", "partial"}; "next" is the first index not yet folded into
// "partial".
struct Checkpoint {
  std::filesystem::path file;
  std::string tag;
  std::size_t shard;
  std::size_t shards;
  IndexRange range;
};

template <class Report, class FromValue>
uint64_t load_checkpoint(const Checkpoint& cp, Report& partial, FromValue&& from_value) {
  std::ifstream in(cp.file);
  if (!in) return cp.range.begin;
  json v;
  try {
    v = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("corrupt checkpoint " + cp.file.string() + ": " + e.what());
  }
  if (v.at("tag") != cp.tag || v.at("shard") != cp.shard || v.at("shards") != cp.shards ||
      v.at("begin") != cp.range.begin || v.at("end") != cp.range.end) {
    throw std::runtime_error("checkpoint " + cp.file.string() + " belongs to a different run");
  }
  const uint64_t next = v.at("next").get<uint64_t>();
  if (next < cp.range.begin || next > cp.range.end) {
    throw std::runtime_error("checkpoint " + cp.file.string() + " has an out-of-range index");
  }
  partial = from_value(v.at("partial"));
  return next;
}

template <class Report>
void save_checkpoint(const Checkpoint& cp, uint64_t next, const Report& partial) {
  const json v = {{"tag", cp.tag},   {"shard", cp.shard}, {"shards", cp.shards},
                  {"begin", cp.range.begin}, {"end", cp.range.end}, {"next", next},
                  {"partial", to_value(partial)}};
  auto tmp = cp.file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << v.dump() << '\n';
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, cp.file);
}

// Runs `work(range, report)` over every shard of [0, space) and merges the
// shard reports in shard order.
template <class Report, class Work, class FromValue>
Report run_sharded(const std::string& tag, uint64_t space, const ShardOptions& options,
                   const Report& empty, uint64_t chunk, Work&& work, FromValue&& from_value) {
  if (options.threads == 0) throw std::invalid_argument("thread count must be at least 1");
  const auto ranges = partition_work(space, options.shards);
  std::vector<Report> results(ranges.size(), empty);

  if (options.checkpoint_dir) std::filesystem::create_directories(*options.checkpoint_dir);

  auto run_shard = [&](std::size_t s) {
    Report& out = results[s];
    uint64_t pos = ranges[s].begin;
    if (!options.checkpoint_dir) {
      work(ranges[s], out);
      return;
    }
    const Checkpoint cp{*options.checkpoint_dir / (tag + "-shard" + std::to_string(s) + "-of-" +
                                                   std::to_string(ranges.size()) + ".json"),
                        tag, s, ranges.size(), ranges[s]};
    pos = load_checkpoint(cp, out, from_value);
    while (pos < ranges[s].end) {
      const uint64_t stop = std::min(ranges[s].end, pos + chunk);
      work(IndexRange{pos, stop}, out);
      pos = stop;
      save_checkpoint(cp, pos, out);
    }
    if (ranges[s].size() == 0) save_checkpoint(cp, pos, out);
  };

  const unsigned workers = std::min<std::size_t>(options.threads, ranges.size());
  if (workers <= 1) {
    for (std::size_t s = 0; s < ranges.size(); ++s) run_shard(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t s; (s = next.fetch_add(1)) < ranges.size();) run_shard(s);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Report total = empty;
  for (const auto& r : results) total.merge(r);
  return total;
}

constexpr uint64_t kSearchChunk = uint64_t{1} << 20;
constexpr uint64_t kLinearChunk = uint64_t{1} << 14;

}  // namespace

SearchReport search_bipermutive(int diameter, const SearchOptions& options) {
  if (diameter < 2 || diameter > 6) throw DomainError("search diameter must be in [2, 5] (6 with allow_long)");
  if (diameter == 6 && !options.allow_long) {
    throw DomainError("d = 6 enumerates about 4.3e9 pairs; pass allow_long to run it");
  }
  const auto rules = bipermutive_rules(diameter);
  const int n = diameter - 1;
  const uint64_t states = uint64_t{1} << (2 * n);
  const uint64_t count = rules.size();

  // Global map of every rule on every 2n-cell input; n <= 5 fits a byte.
  std::vector<uint8_t> global(count * states);
  std::vector<Linearity> classes(count);
  for (uint64_t r = 0; r < count; ++r) {
    classes[r] = classify_linearity(rules[r]);
    for (uint64_t s = 0; s < states; ++s) {
      global[r * states + s] = static_cast<uint8_t>(nbca_apply_bits(rules[r], s, 2 * n));
    }
  }

  auto work = [&](IndexRange range, SearchReport& out) {
    std::vector<uint32_t> successor(states);
    std::vector<uint64_t> hit((states + 63) / 64);
    for (uint64_t idx = range.begin; idx < range.end; ++idx) {
      const uint64_t i = idx / count;
      const uint64_t j = idx % count;
      const uint8_t* fi = &global[i * states];
      const uint8_t* gj = &global[j * states];
      std::fill(hit.begin(), hit.end(), 0);
      bool bijective = true;
      for (uint64_t s = 0; s < states; ++s) {
        const uint32_t image = (uint32_t{fi[s]} << n) | gj[s];
        const uint64_t bit = uint64_t{1} << (image & 63);
        if (hit[image >> 6] & bit) {
          bijective = false;
          break;
        }
        hit[image >> 6] |= bit;
        successor[s] = image;
      }
      ++out.total_pairs;
      if (!bijective) continue;
      ++out.oca_pairs;
      const uint64_t longest = cycle_decomposition(successor).max_cycle_length();
      ++out.max_cycle_histogram[longest];
      if (longest == states - 1) {
        out.maximal_pairs.push_back({rules[i].code_u64(), rules[j].code_u64(), classes[i], classes[j]});
      }
    }
  };

  SearchReport empty;
  empty.diameter = diameter;
  return run_sharded("search-d" + std::to_string(diameter), count * count, options, empty, kSearchChunk,
                     work, search_from_value);
}

LinearPairSpace::LinearPairSpace(int diameter) : n_(diameter - 1) {
  if (diameter < 3 || diameter > LocalRule::kMaxDiameter) {
    throw DomainError("linear pair enumeration needs 3 <= d <= 16");
  }
}

LinearPairSpace enumerate_linear_pairs(int diameter) { return LinearPairSpace(diameter); }

LinearEnumReport enumerate_maximal_linear(int diameter, const ShardOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const LinearPairSpace space(diameter);
  const int n = space.degree();
  const MaximalOrderTest maximal(2 * n);

  auto work = [&](IndexRange range, LinearEnumReport& out) {
    for (uint64_t idx = range.begin; idx < range.end; ++idx) {
      const PolyPair pair = space[idx];
      if (poly_gcd(pair.f, pair.g) != BinPoly(1)) continue;
      const bool ascending = pair.f < pair.g;
      ++out.loca_ordered;
      out.loca_unordered += ascending;
      if (!maximal(sylvester_matrix(pair.f, pair.g, n))) continue;
      ++out.mloca_ordered;
      out.mloca_unordered += ascending;
      out.mloca_pairs.push_back(pair);
    }
  };

  LinearEnumReport empty;
  empty.diameter = diameter;
  auto report = run_sharded("linear-d" + std::to_string(diameter), space.size(), options, empty,
                            kLinearChunk, work, linear_from_value);
  report.elapsed = std::chrono::steady_clock::now() - started;
  return report;
}

std::string to_json(const SearchReport& r) { return to_value(r).dump(); }

std::string to_csv(const SearchReport& r) {
  std::ostringstream out;
  out << "diameter,rule_f,rule_g,class_f,class_g,max_cycle\n";
  const uint64_t longest = (uint64_t{1} << (2 * (r.diameter - 1))) - 1;
  for (const auto& p : r.maximal_pairs) {
    out << r.diameter << ',' << p.rule_f << ',' << p.rule_g << ',' << to_string(p.class_f) << ','
        << to_string(p.class_g) << ',' << longest << '\n';
  }
  return out.str();
}

std::string to_json(const LinearEnumReport& r) { return to_value(r).dump(); }

std::string to_csv(const LinearEnumReport& r) {
  std::ostringstream out;
  out << "diameter,poly_f,poly_g,rule_f,rule_g,order\n";
  const uint64_t order = (uint64_t{1} << (2 * (r.diameter - 1))) - 1;
  for (const auto& p : r.mloca_pairs) {
    out << r.diameter << ',' << to_hex(p.f) << ',' << to_hex(p.g) << ','
        << poly_to_rule(p.f, r.diameter).code_string() << ',' << poly_to_rule(p.g, r.diameter).code_string()
        << ',' << order << '\n';
  }
  return out.str();
}

}  // namespace oca
