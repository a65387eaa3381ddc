#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wafm/fock.hpp"
#include "wafm/integrals.hpp"
#include "wafm/lattice.hpp"
#include "wafm/model.hpp"
#include "wafm/report.hpp"

namespace wafm {

// Odd sites carry both orbitals with spin up, even sites both with spin
// down; creators are applied in ascending mode order to the vacuum.
Eigen::VectorXcd neel_state(const LatticeSpec& spec);

// Bond values of <S^i(x) S^i(x + e_mu)> for i = 1, 2, 3, the particle
// number and <H_K>, all against their exact values.
std::vector<CheckReport> neel_checks(const LatticeSpec& spec, double t = 1.0, double tol = 1e-12);

// ln sum_i exp(-<phi_i, A phi_i>) and ln Tr exp(-A) for a hermitian A and
// orthonormal columns phi_i. The first never exceeds the second.
struct PeierlsSums {
  double log_family = 0.0;
  double log_trace = 0.0;
};
PeierlsSums peierls_sums(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& family);

// Orthonormal families drawn from QR of Gaussian matrices, tested against
// beta H on the whole Fock space. Needs at most 8 modes.
CheckReport peierls_family_check(const LatticeSpec& spec, const ModelParams& params, int families,
                                 std::uint64_t seed, double tol = 1e-10);

// Many-body norm of the one-body double commutator [S_p, [H_K, S_-p]]
// divided by |t|, maximized over p. Exact for any lattice that fits in a
// dense one-body matrix.
double constant_C1(const LatticeSpec& spec, double t);
// ||H_K|| / (|t| |Lambda|) from the one-body spectrum.
double constant_C2(const LatticeSpec& spec, double t);
// The same number from the antiperiodic momentum sum 4 mean_k sqrt(sum sin^2 k).
double kinetic_norm_density(const LatticeSpec& spec);

struct ChainOptions {
  std::vector<double> betas = {0.5, 1.0, 2.0, 5.0};
  double tol = 1e-9;
};

// The Peierls / entropy / energy chain down to the lower bound on the
// nearest-neighbour correlator, with constants written for general d:
//   ln Z >= 4 d beta J |L|,  ln Z = -beta <H> + S,  S <= 4 |L| ln 2,
//   <-H> <= C2 |t| |L| - 3 d J sum_x <S3 S3(x, x+e1)>,
//   -|L|^-1 sum_x <S1 S1(x, x+e1)> >= 4/3 - C2 |t| / (3 d J) - 4 ln 2 / (3 d beta J).
// Needs B = 0. One row per beta goes to `table` if given.
std::vector<CheckReport> thermodynamic_chain(const LatticeSpec& spec, const ModelParams& params,
                                             const ChainOptions& opt = {}, CsvTable* table = nullptr);

struct CertificateConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  double I = 0.0;
  double J = 0.0;
  double K = 0.0;
  std::string source;
};

// C1 = 4 C2 with C2 the large-volume kinetic norm, and I, J, K the zone
// integrals on d = 3.
CertificateConstants thermodynamic_constants(const GridLevels& grid = {});
// C1, C2 and the finite sums of one d = 3 lattice, for the ground state.
CertificateConstants lattice_constants(const LatticeSpec& spec);

enum class Verdict { Positive, NotPositive, Inconclusive };
const char* verdict_name(Verdict v);

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

struct Certificate {
  double t = 0.0;
  double J = 1.0;
  double beta = kInfiniteBeta;
  CertificateConstants constants;
  double e0_lower = 0.0;      // bounded: 4/3 - C2 |t| / (9 J) - (4 / beta J) ln 2
  double f_e0 = 0.0;          // E - sqrt(2 E) K at E = e0_lower
  double thermal_term = 0.0;  // I / (2 beta J)
  double quantum_term = 0.0;  // sqrt(C1 |t| / (2 J)) J
  double m2_lower = -std::numeric_limits<double>::infinity();
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
};

// f(E) = E - sqrt(2 E) K, increasing for E > K^2 / 2.
double certificate_f(double e, double k);

// Lower bound on the squared order parameter for the three-dimensional
// model. Pass kInfiniteBeta for the ground state.
Certificate lro_certificate(double t, double J, double beta, const CertificateConstants& c);

json to_json(const Certificate& c);

struct RegionOptions {
  double t_max = 0.2;  // |t| / J
  int t_points = 21;
  double beta_min = 1.0;  // beta J, log spaced
  double beta_max = 100.0;
  int beta_points = 25;
};

// Certificate over the (|t|/J, beta J) grid at J = 1. The report asserts
// that m2_lower never increases with |t|/J and never decreases with beta J,
// treating inconclusive points as -infinity.
CheckReport region_scan(const CertificateConstants& c, const RegionOptions& opt, CsvTable* table = nullptr);

// t = 0, beta = infinity against 4/3 - sqrt(8/3) K and the 0.75 floor.
std::vector<CheckReport> certificate_checks(const CertificateConstants& c, double tol = 1e-12);

}  // namespace wafm
