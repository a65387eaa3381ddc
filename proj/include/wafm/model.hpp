#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wafm/fock.hpp"
#include "wafm/lattice.hpp"

namespace wafm {

struct ModelParams {
  double t = 0.0;
  double J = 1.0;
  double B = 0.0;
  double beta = 1.0;
};

void validate(const ModelParams& p);

namespace pauli {
// alpha(1..3) act on the orbital index, tau(1..3) on spin; same matrices.
const Eigen::Matrix2cd& alpha(int i);
const Eigen::Matrix2cd& tau(int j);
}  // namespace pauli

// Real field on directed bonds (x, x + e_mu).
class FieldConfig {
 public:
  explicit FieldConfig(const LatticeSpec& spec);

  double& operator()(int site, int mu) { return h_[site * 3 + mu - 1]; }
  double operator()(int site, int mu) const { return h_[site * 3 + mu - 1]; }
  int num_sites() const { return static_cast<int>(h_.size() / 3); }
  int dim() const { return d_; }
  double sum_of_squares() const;
  bool is_zero() const;

  static FieldConfig uniform(const LatticeSpec& spec, double value);
  static FieldConfig random(const LatticeSpec& spec, std::mt19937_64& rng, double amplitude);

 private:
  int d_;
  std::vector<double> h_;
};

// A frame is a one-body unitary W; operators built in a frame are the
// physical ones rewritten in terms of c_frame = W^dag c_phys. Spectra and
// traces do not depend on the frame.
struct Frame {
  Eigen::MatrixXcd w;  // empty means the occupation basis itself

  bool is_identity() const { return w.size() == 0; }
  Eigen::MatrixXcd one_body(const Eigen::MatrixXcd& a) const;
};

// Frame in which H(B,h) is real and the spin component along spin_axis
// (1 or 3) is diagonal.
Frame symmetry_frame(const LatticeSpec& spec, int spin_axis);
// Conserved charges in symmetry_frame: the particle number of each
// chirality class (orbital + sublattice parity, d <= 2 only; the whole
// lattice for d = 3) and the spin-up count along the frame axis.
SectorLayout symmetry_layout(const LatticeSpec& spec);
// Pair creators eta_g = sum_{x,i in g} (-1)^{x2} c^dag_{x,i,up} c^dag_{x,i,down},
// one per chirality class, written in `frame`. Each commutes with H(B,h),
// so together with their adjoints they generate an SU(2) per class.
std::vector<FockOperator> pair_generators(const LatticeSpec& spec, const Frame& frame = {});

// One-body matrices in the physical mode basis.
Eigen::MatrixXcd kinetic_matrix(const LatticeSpec& spec, double t);
Eigen::MatrixXcd kinetic_direction_matrix(const LatticeSpec& spec, double t, int mu);
Eigen::MatrixXcd spin_matrix(const LatticeSpec& spec, int site, int j);
Eigen::MatrixXcd fourier_spin_matrix(const LatticeSpec& spec, const Momentum& p);

FockOperator build_kinetic(const LatticeSpec& spec, double t, const Frame& frame = {});
FockOperator spin_operator(const LatticeSpec& spec, int site, int j, const Frame& frame = {});
FockOperator total_spin(const LatticeSpec& spec, int j, const Frame& frame = {});
FockOperator build_interaction(const LatticeSpec& spec, double J, const Frame& frame = {});
FockOperator build_interaction_h(const LatticeSpec& spec, double J, const FieldConfig& h,
                                 const Frame& frame = {});
FockOperator order_parameter(const LatticeSpec& spec, const Frame& frame = {});
FockOperator build_sbf(const LatticeSpec& spec, double B, const Frame& frame = {});
FockOperator build_full(const LatticeSpec& spec, const ModelParams& params,
                        const FieldConfig* h = nullptr, const Frame& frame = {});
FockOperator fourier_spin(const LatticeSpec& spec, const Momentum& p, const Frame& frame = {});

// Coefficients c_x with H(B,h) = H(0,0) + sum_x c_x S^(1)(x) + J/2 sum h^2.
std::vector<double> field_coefficients(const LatticeSpec& spec, const ModelParams& params,
                                       const FieldConfig& h);

}  // namespace wafm
