#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wafm/lattice.hpp"
#include "wafm/model.hpp"
#include "wafm/report.hpp"
#include "wafm/thermal.hpp"

namespace wafm {

// Draws with every component uniform in [-range, range].
std::vector<FieldConfig> random_fields(const LatticeSpec& spec, int count, double range, std::uint64_t seed);

struct DominationOptions {
  std::vector<double> fields_B = {0.0, 0.3};
  std::vector<double> betas = {0.5, 2.0};
  int draws = 200;
  double range = 2.0;
  std::uint64_t seed = 1;
  double slack = 1e-10;  // relative to Z(0)
};

// Z(B, h) <= Z(B, 0) for every draw; one report per (B, beta) carrying the
// worst ratio. Per-draw values of ln Z(h) - ln Z(0) go to `table` if given.
std::vector<CheckReport> gaussian_domination(const ThermalContext& ctx, const ModelParams& params,
                                             const DominationOptions& opt, CsvTable* table = nullptr);

// d^2/de^2 ln Z(e h) at e = 0 written as beta^2 [(A,A) - <A>^2] - beta J sum h^2,
// where A is the part of H(B, h) linear in h. Must be <= 0.
CheckReport gaussian_domination_curvature(const ThermalContext& ctx, const ModelParams& params,
                                          const FieldConfig& h, double tol = 1e-10);

// Same partition functions computed after conjugating H(B, h) by U_odd,
// diagonalized without any symmetry reduction. Needs at most 8 modes.
CheckReport gaussian_domination_odd_frame(const LatticeSpec& spec, const ModelParams& params,
                                          const std::vector<FieldConfig>& fields, double slack = 1e-10);

// Eigenbasis images of S^(1)(x) and every Fourier mode for one H(B, 0).
class SpinObservables {
 public:
  SpinObservables(const ThermalContext& ctx, const ModelParams& params);

  const ThermalContext& context() const { return *ctx_; }
  const ModelParams& params() const { return params_; }
  const RealSpectrum& spectrum() const { return sd_; }
  const std::vector<Momentum>& momenta() const { return momenta_; }
  int index_of(const Momentum& p) const;

  const EigenOperator& fourier(int k) const { return fourier_[k]; }
  const EigenOperator& spin(int x) const { return spin_[x]; }

  // (S_p, S_-p) Duhamel function at the stored beta.
  double duhamel_fourier(int k) const;
  // <S_p S_-p>
  double fourier_product(int k) const;
  // <S^(1)(x) S^(1)(y)>
  double spin_product(int x, int y) const;

  struct DoubleCommutator {
    double kinetic = 0.0;
    double interaction = 0.0;
    double total() const { return kinetic + interaction; }
    // Operator residual of the bond-sum form of [S_p, [H_int, S_-p]].
    double operator_residual = 0.0;
    // The whole double commutator from the eigenvalue expansion.
    double spectral = 0.0;
  };
  // <[S_p, [H(0), S_-p]]> split into the two parts of H; needs B = 0.
  // Computed on first use and cached, so not safe to call concurrently.
  const DoubleCommutator& double_commutator(int k) const;

 private:
  const ThermalContext* ctx_;
  ModelParams params_;
  RealSpectrum sd_;
  std::vector<Momentum> momenta_;
  std::vector<EigenOperator> fourier_;
  std::vector<EigenOperator> spin_;
  mutable std::vector<std::optional<DoubleCommutator>> dc_;
  // H_int and per-direction sums of S2 S2 + S3 S3 over bonds.
  mutable std::vector<FockOperator> parts_;
};

struct InfraredRow {
  Momentum p;
  double lhs = 0.0;
  double rhs = 0.0;
};

// (S_p, S_-p) <= 1 / (2 beta J E_{p+Q}) for every p != Q.
std::vector<InfraredRow> infrared_rows(const SpinObservables& obs);
CheckReport infrared_check(const SpinObservables& obs, double tol = 1e-10, CsvTable* table = nullptr);

// Per momentum: C_p >= 0 and the interaction part equal to
// -16 J E_p |L|^-1 sum_x <S^(1)(x) S^(1)(x + e_1)>.
std::vector<CheckReport> double_commutator_checks(const SpinObservables& obs, double tol = 1e-10);

// Sum_i [S^i(x) S^i(y), S^(1)(x)] and the two follow-up commutators on two sites.
CheckReport local_double_commutator_check(double tol = 1e-12);

// <S_p S_-p + S_-p S_p> against the coth form and its weaker relaxation.
std::vector<CheckReport> dls_checks(const SpinObservables& obs, double tol = 1e-9, CsvTable* table = nullptr);

// sum_p <S_p S_-p> cos p_mu = sum_x <S^(1)(x) S^(1)(x + e_mu)> for each mu;
// on d >= 2 also the equality of the right side across directions.
std::vector<CheckReport> sum_rule_checks(const SpinObservables& obs, double tol = 1e-10);

struct LroValues {
  double from_order_parameter = 0.0;  // <(O^(1))^2> / |L|^2
  double from_pairs = 0.0;            // staggered double sum of <S S>
  double from_fourier = 0.0;          // <S_Q S_Q> / |L|
};
LroValues m_lro_squared(const SpinObservables& obs);
CheckReport lro_two_forms_check(const SpinObservables& obs, double tol = 1e-10);

// ln Z and <A> from the reduced solver against a dense diagonalization of
// the whole Fock space. Needs at most 8 modes.
CheckReport sector_trace_check(const LatticeSpec& spec, const ModelParams& params,
                               const std::vector<double>& betas, double tol = 1e-10);

// Eigenbasis Duhamel formula against Gauss-Legendre quadrature in s, on
// random hermitian pairs with no symmetry assumed. Needs at most 8 modes.
CheckReport duhamel_quadrature_check(const LatticeSpec& spec, const ModelParams& params, int pairs,
                                     std::uint64_t seed, double tol = 1e-9);

}  // namespace wafm
