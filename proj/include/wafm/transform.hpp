#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wafm/fock.hpp"
#include "wafm/lattice.hpp"
#include "wafm/model.hpp"
#include "wafm/report.hpp"

namespace wafm {

// A Fock-space unitary together with a label saying what it realizes.
// Lifts of one-body unitaries follow Gamma^dag c_j Gamma = sum_k W(j,k) c_k.
class FockUnitary {
 public:
  FockUnitary() = default;
  FockUnitary(FockOperator u, std::string label);

  const FockOperator& op() const { return u_; }
  const std::string& label() const { return label_; }
  int modes() const { return u_.modes(); }

  // U^dag a U
  FockOperator conjugate(const FockOperator& a) const;
  // Largest entry of U^dag U - 1.
  double unitarity_defect() const;

  friend FockUnitary operator*(const FockUnitary& a, const FockUnitary& b);

 private:
  FockOperator u_;
  FockOperator u_dag_;
  std::string label_;
};

// Exact lift of a one-body unitary. W is factored into nearest-neighbour
// Givens rotations and a diagonal phase; each factor lifts to a two-mode
// block, so eigenvalue -1 needs no special treatment.
FockUnitary fock_lift(const Eigen::MatrixXcd& w, std::string label);

// Orbital matrix `a` applied at the given sites (both spins).
Eigen::MatrixXcd orbital_one_body(const LatticeSpec& spec, const Eigen::Matrix2cd& a,
                                  const std::vector<int>& sites);

FockUnitary build_u2(const LatticeSpec& spec);
FockUnitary build_u_alpha1(const LatticeSpec& spec, int plane_axis = 1);
// (-1)^(N - n_m) (c_m^dag + c_m): exchanges c_m and c_m^dag, fixes every other mode.
FockUnitary particle_hole_factor(int modes, int mode);
FockUnitary build_u_odd(const LatticeSpec& spec);

struct OrbitalRotation {
  Eigen::Matrix2cd matrix;  // exp(i theta alpha_3 / 2)
  FockUnitary lift;
};
Eigen::Matrix2cd orbital_rotation(double theta);
OrbitalRotation build_u3(const LatticeSpec& spec, double theta);

// theta(A) = P_r conj(A) P_r^dag with P_r the fermionic relabeling
// c_m -> c_{r(m)}. Antilinear and multiplicative.
class AntilinearReflection {
 public:
  AntilinearReflection(const LatticeSpec& spec, int axis = 1);

  const PlaneSplit& split() const { return split_; }
  int reflect_mode(int mode) const;
  const FockOperator& permutation() const { return p_; }
  FockOperator apply(const FockOperator& a) const;

 private:
  PlaneSplit split_;
  std::vector<int> mode_map_;
  FockOperator p_;
  FockOperator p_dag_;
};

// Field carried along by the reflection: bond (x, x+e_mu) goes to the image
// bond, with the sign flip produced by the staggered factor.
FieldConfig reflect_field(const LatticeSpec& spec, const PlaneSplit& split, const FieldConfig& h);

struct TransformCheckOptions {
  double t = 0.7;
  double J = 1.3;
  double B = 0.3;
  double field_amplitude = 1.0;
  std::uint64_t seed = 1;
  double tolerance = 1e-11;
};

// Every transformed-Hamiltonian identity for the plane x^(1) = 1/2, each
// compared as a matrix equality between the conjugated left side and a
// direct construction of the right side. Failures are reports, not throws.
std::vector<CheckReport> verify_reflection_identities(const LatticeSpec& spec,
                                                      const TransformCheckOptions& opt = {});

// The alpha_3 rotation: 2x2 relations for sampled angles and the Fock-level
// statement that U_3(-pi/2) only swaps the hopping matrices.
std::vector<CheckReport> verify_rotation_identities(const LatticeSpec& spec,
                                                    const TransformCheckOptions& opt = {});

}  // namespace wafm
