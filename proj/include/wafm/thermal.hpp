#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "wafm/fock.hpp"
#include "wafm/linalg.hpp"
#include "wafm/model.hpp"

namespace wafm {

// Orthonormal basis for the part of each symmetry sector that has to be
// diagonalized. Without pair generators every sector is kept whole. With
// them only lowest-weight states survive (those killed by every eta_g^dag),
// and each carries the dimension of its multiplet as a trace weight.
template <class Scalar>
struct ReducedBasis {
  std::shared_ptr<const SectorMap> sectors;
  std::vector<int> sector;                          // symmetry sector of each block
  std::vector<double> multiplicity;                 // trace weight of each block
  std::vector<linalg::Matrix<Scalar>> basis;        // sector coords x block coords; empty = identity
  std::vector<FockOperator> generators;             // operators every traced observable must commute with

  int num_blocks() const { return static_cast<int>(sector.size()); }
  Eigen::Index block_size(int b) const;
  // Block of `a` in the reduced coordinates.
  linalg::Matrix<Scalar> project(const Eigen::SparseMatrix<Scalar>& sector_block, int b) const;
};

template <class Scalar>
ReducedBasis<Scalar> full_basis(std::shared_ptr<const SectorMap> sectors);

// Lowest-weight reduction for pair generators that commute with everything
// that will be traced. Throws if the generators do not respect the sectors
// or the multiplet count does not add up to the full Fock dimension.
template <class Scalar>
ReducedBasis<Scalar> lowest_weight_basis(std::shared_ptr<const SectorMap> sectors,
                                         std::vector<FockOperator> generators);

template <class Scalar>
struct SpectralBlock {
  Eigen::VectorXd energies;
  linalg::Matrix<Scalar> vectors;  // reduced coords x eigen index; empty when only values were asked for
};

template <class Scalar>
class SpectralData {
 public:
  SpectralData() = default;
  SpectralData(std::shared_ptr<const ReducedBasis<Scalar>> basis, std::vector<SpectralBlock<Scalar>> blocks);

  const ReducedBasis<Scalar>& basis() const { return *basis_; }
  const std::vector<SpectralBlock<Scalar>>& blocks() const { return blocks_; }
  bool has_vectors() const { return has_vectors_; }
  double min_energy() const { return e_min_; }

  // Boltzmann weights exp(-beta (E - E_min)) per block, without multiplicity.
  std::vector<Eigen::VectorXd> weights(double beta) const;
  // Z exp(beta E_min), i.e. the shifted partition function.
  double shifted_partition(double beta) const;
  double log_partition(double beta) const;
  double energy(double beta) const;
  // Gibbs entropy -Tr rho ln rho.
  double entropy(double beta) const;
  // Ground-state degeneracy within tol, multiplets counted in full.
  double ground_degeneracy(double tol = 1e-9) const;

 private:
  std::shared_ptr<const ReducedBasis<Scalar>> basis_;
  std::vector<SpectralBlock<Scalar>> blocks_;
  bool has_vectors_ = false;
  double e_min_ = 0.0;
};

template <class Scalar>
SpectralData<Scalar> spectral(const FockOperator& h, std::shared_ptr<const ReducedBasis<Scalar>> basis,
                              bool vectors = true);

// Operator written in the eigenbasis of each block. Entries follow the
// physical operator exactly, so complex observables work with real bases.
struct EigenOperator {
  std::vector<Eigen::MatrixXcd> blocks;
};

template <class Scalar>
EigenOperator to_eigenbasis(const SpectralData<Scalar>& sd, const FockOperator& a, double tol = 1e-10);

template <class Scalar>
cplx thermal_expectation(const SpectralData<Scalar>& sd, const EigenOperator& a, double beta);
// <A B> at inverse temperature beta.
template <class Scalar>
cplx thermal_product(const SpectralData<Scalar>& sd, const EigenOperator& a, const EigenOperator& b,
                     double beta);
template <class Scalar>
cplx ground_expectation(const SpectralData<Scalar>& sd, const EigenOperator& a, double tol = 1e-9);
template <class Scalar>
cplx ground_product(const SpectralData<Scalar>& sd, const EigenOperator& a, const EigenOperator& b,
                    double tol = 1e-9);

// int_0^1 exp(-s beta e_m) exp(-(1-s) beta e_n) ds for energies already
// shifted so that both exponents are <= 0.
double duhamel_kernel(double e_m, double e_n, double beta);

template <class Scalar>
cplx duhamel(const SpectralData<Scalar>& sd, const EigenOperator& a, const EigenOperator& b, double beta);

// Physical-basis Hamiltonians are complex; symmetry frames make them real.
using RealSpectrum = SpectralData<double>;
using ComplexSpectrum = SpectralData<cplx>;

// Everything needed for thermal work on one lattice in the spin-axis-1
// frame: sectors, the lowest-weight reduction and S^(1)(x) blocks for the
// affine h-field family.
class ThermalContext {
 public:
  ThermalContext(const LatticeSpec& spec, int spin_axis = 1);

  const LatticeSpec& spec() const { return spec_; }
  const Frame& frame() const { return frame_; }
  int spin_axis() const { return axis_; }
  std::shared_ptr<const ReducedBasis<double>> basis() const { return basis_; }

  RealSpectrum solve(const FockOperator& h, bool vectors = true) const;
  // H(B, h) built from scratch in the frame.
  RealSpectrum solve(const ModelParams& params, const FieldConfig* h = nullptr, bool vectors = true) const;

  // ln Z(B, h) for each field and beta, from H(0,0) blocks plus the
  // diagonal S^(1) shift. Requires spin_axis 1. Result is [field][beta].
  std::vector<std::vector<double>> log_partition_batch(const ModelParams& params,
                                                       const std::vector<FieldConfig>& fields,
                                                       const std::vector<double>& betas) const;

 private:
  LatticeSpec spec_;
  int axis_;
  Frame frame_;
  std::shared_ptr<const ReducedBasis<double>> basis_;
  mutable std::vector<linalg::Matrix<double>> base_;             // H(0,0) with t, J of the last batch
  mutable std::vector<std::vector<linalg::Matrix<double>>> s1_;  // [block][site]
  mutable double base_t_ = 0.0, base_j_ = 0.0;
  mutable bool base_ready_ = false;
};

}  // namespace wafm
