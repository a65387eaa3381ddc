#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wafm/lattice.hpp"
#include "wafm/model.hpp"

namespace wafm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Check groups understood by the runner, in execution order.
const std::vector<std::string>& check_groups();

struct Tolerances {
  double scale = 1.0;      // multiplies every entry below
  double identity = 1e-11;  // matrix identities of the transform suite
  double local = 1e-12;     // two-site double commutator, Neel values
  double thermal = 1e-10;   // domination slack, infrared, sum rule, traces
  double dls = 1e-9;
  double chain = 1e-9;
  double quadrature = 1e-9;
};

struct RunConfig {
  // [lattice]
  int d = 1;
  std::vector<int> half_sides = {2};
  // [model]
  ModelParams model{0.5, 1.0, 0.0, 2.0};
  // [thermal]
  std::vector<double> betas = {0.5, 2.0};
  std::vector<double> fields_B = {0.0, 0.3};
  std::vector<double> chain_betas = {0.5, 1.0, 2.0, 5.0};
  int draws = 200;
  double field_range = 2.0;
  std::uint64_t seed = 1;
  // [transforms]
  double transform_t = 0.7;
  double transform_J = 1.3;
  double transform_B = 0.3;
  double field_amplitude = 1.0;
  // [small] whole-space oracles on the two-site chain (8 modes)
  int peierls_families = 50;
  int quadrature_pairs = 3;
  // [integrals]
  std::vector<int> grid_sides = {64, 128, 256};
  double requested_error = 2e-4;
  // [region]
  double region_t_max = 0.2;
  int region_t_points = 21;
  double region_beta_min = 1.0;
  double region_beta_max = 100.0;
  int region_beta_points = 25;
  // [certificate] overrides; unset entries are computed
  std::optional<double> C1, C2, I, J, K;
  // [run]
  std::vector<std::string> checks = check_groups();
  Tolerances tol;

  LatticeSpec lattice() const { return LatticeSpec(d, half_sides); }
  LatticeSpec small_lattice() const { return LatticeSpec(1, {1}); }
  double tolerance(double base) const { return base * tol.scale; }
};

// Throws ConfigError on parse errors, unknown sections or keys, and values
// that fail validation.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);
void validate(const RunConfig& c);

// The same settings written back in the file format.
std::string to_ini(const RunConfig& c);

}  // namespace wafm
