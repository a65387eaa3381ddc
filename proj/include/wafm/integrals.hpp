#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wafm/lattice.hpp"
#include "wafm/report.hpp"

namespace wafm {

// Brillouin-zone averages (2 pi)^-d int dp of
//   I: 1 / E_p
//   J: 1 / sqrt(E_p)
//   K: sqrt(E_p / E_{p+Q}) (-sum_mu cos p_mu)_+ / d
enum class IntegralKind { I, J, K };

const char* integral_name(IntegralKind kind);

struct GridLevels {
  // Points per axis on the full zone, each level twice the previous one.
  // Empty selects the default for the dimension.
  std::vector<int> sides;
  double requested_error = std::numeric_limits<double>::infinity();
};

struct IntegralResult {
  IntegralKind kind = IntegralKind::K;
  int d = 3;
  double value = std::numeric_limits<double>::quiet_NaN();
  double error = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> sides;
  std::vector<double> level_values;
  int order = 0;  // assumed leading power of the grid spacing in the error
  double observed_order = std::numeric_limits<double>::quiet_NaN();
  bool divergent = false;
  bool resolved = false;  // error <= requested_error
  // Largest |E_{p+Q} - (2d - E_p)| met on the grids.
  double dual_mismatch = 0.0;
  std::string method;
  double seconds = 0.0;
};

std::vector<int> default_grid(int d);

// Midpoint tensor grids offset by half a cell, so neither p = 0 nor p = Q is
// ever sampled, followed by one Richardson step on the two finest levels.
// The error estimate is the change of that extrapolation when the window
// moves down one level. I below d = 3 and J, K below d = 2 are divergent.
IntegralResult lattice_integral(IntegralKind kind, int d, const GridLevels& grid = {});
IntegralResult integral_I(int d, const GridLevels& grid = {});
IntegralResult integral_J(int d, const GridLevels& grid = {});
IntegralResult integral_K(int d, const GridLevels& grid = {});

// Over spin momenta p != Q:
//   I = |Lambda|^-1 sum 1 / E_{p+Q},  J = |Lambda|^-1 sum E_{p+Q}^-1/2,
//   K = |Lambda|^-1 sum sqrt(E_p / E_{p+Q}) (-sum_mu cos p_mu)_+ / d.
struct FiniteSums {
  double I = 0.0;
  double J = 0.0;
  double K = 0.0;
  int terms = 0;
};
FiniteSums finite_sums(const LatticeSpec& spec);

// (2 pi)^-d int dk 4 sqrt(sum_mu sin^2 k_mu), the large-volume value of
// ||H_K|| / (|t| |Lambda|), on a midpoint grid with `side` points per axis.
double kinetic_norm_limit(int d, int side = 256);

// integral-K on d = 3 and integral-gap.
std::vector<CheckReport> integral_checks(const GridLevels& grid = {});

// Rows of (constant, d, side, value, extrapolated, error) for each result.
CsvTable integral_table(const std::vector<IntegralResult>& results);

}  // namespace wafm
