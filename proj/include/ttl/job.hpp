#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ttl/json_io.hpp"
#include "ttl/lfactor.hpp"
#include "ttl/quadspace.hpp"
#include "ttl/schwartz.hpp"
#include "ttl/weil.hpp"

namespace ttl {

struct RandomPhiSpec {
  long p = 3;
  int n = 4;
  int level_min = 0, level_max = 1;
  int support_radius = 1;  // cells inside p^{-radius} L
  int max_cells = 3;
  std::vector<Rational> rational_pool{1, -1, 2, Rational(1, 3), Rational(-1, 2), 3};
  std::vector<std::uint64_t> root_orders{1, 3, 4};
  // When set, about half the cells are centered on points of X_1 = {q = 1}.
  std::optional<QuadSpace> anchor;
};

SchwartzFn generate_random_phi(std::uint64_t seed, const RandomPhiSpec& spec);

// Largest (s + r) met while acting by g on a function supported in p^{-s}L and invariant under p^r L.
int sl2_window_cost(const SL2Elt& g, long p, int s, int r, int* s_out = nullptr, int* r_out = nullptr);
// Random word in n(b), t(a), w; pairs are redrawn until both sides of the group law stay within max_cost.
std::pair<SL2Elt, SL2Elt> random_sl2_pair(std::mt19937_64& rng, long p, int s0, int r0, int max_cost);

// Valuations -2..2 times the units {1, u, -1}; u the least non-residue.
std::vector<Rational> default_a_grid(long p);

enum class Command { VerifyTransfer, VerifyFl, VerifyWeil, Density, LFactor, HeckeCheck };
Command parse_command(const std::string& s);
std::string command_name(Command c);

struct JobConfig {
  Command command = Command::VerifyTransfer;
  QuadSpace space;
  std::string phi_kind = "basic";  // basic | explicit | random
  std::optional<SchwartzFn> phi;
  RandomPhiSpec random;
  int random_count = 1;
  std::vector<Rational> a_grid;
  std::vector<Rational> xi_grid;
  std::vector<SatakeData> alpha_grid;
  int m_max = 12, n_max = 12;
  std::uint64_t seed = 1;
  int threads = 1;
  int pairs = 20;
  bool transform = false;  // verify-transfer also runs the xi-fibered route
  MetaplecticConvention convention = MetaplecticConvention::Shimura;
  std::string output;
};

// Throws Error(ConfigError) on any invalid field.
JobConfig parse_job_config(const Json& j);
// JSON, or TOML when the path ends in .toml
JobConfig load_job_config(const std::string& path);

enum ExitCode { kPass = 0, kMismatch = 1, kNonStabilized = 2, kConfigError = 3 };

struct Report {
  Json json;
  int exit_code = kPass;
};

Report run_job(const JobConfig& cfg);

}  // namespace ttl
