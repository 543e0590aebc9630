#include "cli.hpp"

#include "oca/ca.hpp"
#include "oca/dynsys.hpp"
#include "oca/enumeration.hpp"
#include "oca/error.hpp"
#include "oca/gf2.hpp"
#include "oca/squares.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <optional>
#include <random>
#include <stdexcept>

namespace oca::cli {

namespace {

using json = nlohmann::json;

// Bad flag values or combinations; reported with exit status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  int diameter = 0;
  std::string rule_f;
  std::string rule_g;
  std::string poly_f;
  std::string poly_g;
  std::string format;
  unsigned threads = 1;
  unsigned shards = 0;
  bool allow_long = false;
  std::string checkpoint_dir;
  std::string seed;
  std::optional<uint64_t> rng_seed;
  uint64_t length = 0;
  bool left_half = false;
};

// Resolves one rule from --rule-X (Wolfram code) or --poly-X (linear path).
LocalRule resolve_rule(const std::string& code, const std::string& poly, int& diameter, const char* which) {
  if (!code.empty() && !poly.empty()) {
    throw UsageError(std::string("give either --rule-") + which + " or --poly-" + which + ", not both");
  }
  if (code.empty() && poly.empty()) {
    throw UsageError(std::string("missing --rule-") + which + " or --poly-" + which);
  }
  if (!poly.empty()) {
    BinPoly p;
    try {
      p = parse_poly(poly);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (p.is_zero()) throw UsageError("polynomial must be nonzero");
    const int d = *p.degree() + 1;
    if (diameter == 0) diameter = d;
    return poly_to_rule(p, diameter);
  }
  if (diameter == 0) throw UsageError("--diameter is required with Wolfram codes");
  try {
    return LocalRule::from_code_string(diameter, code);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::pair<LocalRule, LocalRule> resolve_pair(Flags& flags) {
  LocalRule f = resolve_rule(flags.rule_f, flags.poly_f, flags.diameter, "f");
  LocalRule g = resolve_rule(flags.rule_g, flags.poly_g, flags.diameter, "g");
  if (f.diameter() != g.diameter()) throw UsageError("rules must share one diameter");
  return {std::move(f), std::move(g)};
}

uint64_t parse_hex_seed(const std::string& text) {
  std::string_view s = text;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("seed must be a hexadecimal value or 'random': '" + text + "'");
  }
  return v;
}

ShardOptions shard_options(const Flags& flags) {
  if (flags.threads == 0) throw UsageError("--threads must be at least 1");
  ShardOptions o;
  o.threads = flags.threads;
  o.shards = flags.shards == 0 ? flags.threads : flags.shards;
  if (!flags.checkpoint_dir.empty()) o.checkpoint_dir = flags.checkpoint_dir;
  return o;
}

void cmd_rule_info(Flags& flags, std::ostream& out) {
  const LocalRule rule = resolve_rule(flags.rule_f, flags.poly_f, flags.diameter, "f");
  const bool bip = is_bipermutive(rule);
  const Linearity lin = classify_linearity(rule);
  json j = {{"diameter", rule.diameter()},
            {"wolfram_code", rule.code_string()},
            {"bipermutive", bip},
            {"linearity", to_string(lin)},
            {"polynomial", nullptr}};
  if (bip && lin == Linearity::linear) {
    const BinPoly p = rule_to_poly(rule);
    j["polynomial"] = to_hex(p);
    j["polynomial_text"] = to_string(p);
  }
  out << j.dump() << '\n';
}

void cmd_square(Flags& flags, std::ostream& out) {
  const LocalRule rule = resolve_rule(flags.rule_f, flags.poly_f, flags.diameter, "f");
  const LatinSquare sq = square_from_rule(rule);
  if (flags.format == "csv") {
    out << to_csv(sq);
    return;
  }
  json rows = json::array();
  for (uint32_t i = 0; i < sq.order(); ++i) {
    json row = json::array();
    for (uint32_t c = 0; c < sq.order(); ++c) row.push_back(sq.at(i, c));
    rows.push_back(std::move(row));
  }
  out << json{{"order", sq.order()}, {"rows", rows}}.dump() << '\n';
}

void cmd_orthogonal(Flags& flags, std::ostream& out) {
  const auto [f, g] = resolve_pair(flags);
  bool orthogonal = false;
  if (!is_bipermutive(f) || !is_bipermutive(g)) {
    throw DomainError("orthogonality is defined for bipermutive rules only");
  }
  if (f.diameter() <= 11) {
    orthogonal = are_orthogonal(square_from_rule(f), square_from_rule(g));
  } else if (classify_linearity(f) == Linearity::linear && classify_linearity(g) == Linearity::linear) {
    orthogonal = poly_gcd(rule_to_poly(f), rule_to_poly(g)) == BinPoly(1);
  } else {
    orthogonal = PairMap(f, g).is_bijective();
  }
  out << json{{"orthogonal", orthogonal}}.dump() << '\n';
}

void cmd_cycles(Flags& flags, std::ostream& out) {
  const auto [f, g] = resolve_pair(flags);
  out << to_json(cycle_decomposition(f, g)) << '\n';
}

void cmd_keystream(Flags& flags, std::ostream& out) {
  const auto [f, g] = resolve_pair(flags);
  const int n = f.diameter() - 1;
  if (2 * n > 62) throw UsageError("keystream supports diameters up to 16");
  const uint64_t space = uint64_t{1} << (2 * n);
  uint64_t seed = 0;
  if (flags.seed == "random") {
    if (!flags.rng_seed) throw UsageError("--seed random needs --rng-seed");
    std::mt19937_64 rng(*flags.rng_seed);
    seed = std::uniform_int_distribution<uint64_t>(0, space - 1)(rng);
  } else {
    seed = parse_hex_seed(flags.seed);
    if (seed >= space) throw UsageError("seed exceeds 2n = " + std::to_string(2 * n) + " bits");
  }
  const auto mode = flags.left_half ? KeystreamMode::left_half : KeystreamMode::full_state;
  const auto bits = keystream(f, g, SystemState(n, seed), flags.length, mode);
  if (flags.format == "bytes") {
    const auto bytes = pack_bits(bits);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  } else {
    out << bits_to_string(bits) << '\n';
  }
}

void cmd_search(Flags& flags, std::ostream& out, std::ostream& err) {
  SearchOptions options;
  static_cast<ShardOptions&>(options) = shard_options(flags);
  options.allow_long = flags.allow_long;
  const auto started = std::chrono::steady_clock::now();
  const SearchReport report = search_bipermutive(flags.diameter, options);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  out << (flags.format == "csv" ? to_csv(report) : to_json(report) + "\n");
  err << "search d=" << report.diameter << ": " << report.total_pairs << " pairs, " << report.oca_pairs
      << " OCA, " << report.maximal_pairs.size() << " maximal, elapsed " << elapsed.count() << "s\n";
}

void cmd_enumerate_linear(Flags& flags, std::ostream& out, std::ostream& err) {
  const LinearEnumReport report = enumerate_maximal_linear(flags.diameter, shard_options(flags));
  out << (flags.format == "csv" ? to_csv(report) : to_json(report) + "\n");
  err << "enumerate-linear d=" << report.diameter << ": LOCA " << report.loca_unordered << " ("
      << report.loca_ordered << " ordered), mLOCA " << report.mloca_unordered << " (" << report.mloca_ordered
      << " ordered), elapsed " << report.elapsed.count() << "s\n";
}

void add_rule_flags(CLI::App* cmd, Flags& flags, bool pair) {
  cmd->add_option("--diameter,-d", flags.diameter, "Rule diameter d (2..16)")->check(CLI::Range(2, 16));
  cmd->add_option("--rule-f", flags.rule_f, "Wolfram code of the first rule (decimal)");
  cmd->add_option("--poly-f", flags.poly_f, "Polynomial of the first linear rule (0x mask or X^2+1)");
  if (pair) {
    cmd->add_option("--rule-g", flags.rule_g, "Wolfram code of the second rule (decimal)");
    cmd->add_option("--poly-g", flags.poly_g, "Polynomial of the second linear rule");
  }
}

void add_shard_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--diameter,-d", flags.diameter, "Rule diameter d")->required();
  cmd->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--shards", flags.shards, "Static work shards (default: --threads)")->check(CLI::PositiveNumber);
  cmd->add_option("--checkpoint-dir", flags.checkpoint_dir, "Directory for per-shard checkpoint files");
  cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal cellular automata: sequences, cycles and maximal-period enumeration", "oca"};
  app.require_subcommand(1);
  Flags flags;

  auto* rule_info = app.add_subcommand("rule-info", "Classify a local rule");
  add_rule_flags(rule_info, flags, false);

  auto* square = app.add_subcommand("square", "Dump the Latin square of a bipermutive rule");
  add_rule_flags(square, flags, false);
  square->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* orthogonal = app.add_subcommand("orthogonal", "Test whether two rules form an OCA pair");
  add_rule_flags(orthogonal, flags, true);

  auto* cycles = app.add_subcommand("cycles", "Cycle decomposition of the pair system");
  add_rule_flags(cycles, flags, true);

  auto* stream = app.add_subcommand("keystream", "Emit the orbit of a seed as bits");
  add_rule_flags(stream, flags, true);
  stream->add_option("--seed", flags.seed, "Seed state as hex, or 'random'")->required();
  stream->add_option("--rng-seed", flags.rng_seed, "Generator seed used with --seed random");
  stream->add_option("--length", flags.length, "Number of iterations")->required();
  stream->add_option("--format", flags.format, "bits ('0'/'1') or bytes (packed, MSB first)")
      ->check(CLI::IsMember({"bits", "bytes"}));
  stream->add_flag("--left-half", flags.left_half, "Emit only the left half of each state");

  auto* search = app.add_subcommand("search", "Exhaustive search over bipermutive rule pairs");
  add_shard_flags(search, flags);
  search->add_flag("--allow-long", flags.allow_long, "Permit the multi-hour d = 6 search");

  auto* linear = app.add_subcommand("enumerate-linear", "Enumerate linear OCA pairs of maximal period");
  add_shard_flags(linear, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rule_info->parsed()) {
      cmd_rule_info(flags, out);
    } else if (square->parsed()) {
      cmd_square(flags, out);
    } else if (orthogonal->parsed()) {
      cmd_orthogonal(flags, out);
    } else if (cycles->parsed()) {
      cmd_cycles(flags, out);
    } else if (stream->parsed()) {
      cmd_keystream(flags, out);
    } else if (search->parsed()) {
      cmd_search(flags, out, err);
    } else if (linear->parsed()) {
      cmd_enumerate_linear(flags, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace oca::cli
