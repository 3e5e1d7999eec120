#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "subtag/network.hpp"
#include "subtag/params_io.hpp"

namespace subtag::cli {

using Json = nlohmann::ordered_json;

struct SetupOptions {
  std::uint64_t q = 0;
  unsigned l = 0;
  std::size_t n = 0;
  std::optional<std::size_t> M;
  /// "rs", "ec" or "parity".
  std::string code;
  std::size_t V = 0;
  std::size_t k = 0;
  /// EC only: curve coefficients as field encodings, and 1-based indices
  /// into the affine point list (default: the first V points).
  std::string curve_a;
  std::string curve_b;
  std::optional<std::vector<std::size_t>> points;
  std::string params_out;
};

struct SimulateOptions {
  std::string params;
  /// "butterfly", "random:<nodes>" or a topology file.
  std::string topology = "butterfly";
  std::uint64_t seed = 0;
  std::optional<std::string> inject;
};

struct AttackOptions {
  std::string params;
  std::optional<std::string> topology;
  std::uint64_t seed = 0;
  /// 1-based verifier indices.
  std::vector<std::size_t> coalition;
  std::size_t target = 0;
  std::string mode = "deterministic";
  std::uint64_t trials = 10000;
  unsigned threads = 0;
};

struct AnalyzeOptions {
  std::string params;
  /// 1-based coordinate.
  std::size_t target = 1;
};

struct EcCodeOptions {
  std::uint64_t q = 0;
  std::string a;
  std::string b;
  unsigned degree = 0;
  std::optional<std::vector<std::size_t>> points;
};

Json cmd_setup(const SetupOptions& opt);
Json cmd_simulate(const SimulateOptions& opt);
Json cmd_attack(const AttackOptions& opt);
Json cmd_analyze(const AnalyzeOptions& opt);
Json cmd_ec_code(const EcCodeOptions& opt);

/// "1,2,3" -> {1, 2, 3}. Raises ParseError.
std::vector<std::size_t> parse_index_list(std::string_view text);

/// Splits q into (p, m) with q = p^m; raises InvalidField otherwise.
std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q);

Topology resolve_topology(const std::string& spec, std::size_t n, std::size_t V, std::uint64_t seed);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace subtag::cli
