#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wafm/lattice.hpp"

namespace wafm {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx>;

inline constexpr int kDefaultModeCap = 16;

// Mode order: ascending by (site index, spin up < down, orbital 1 < 2).
// Bit m of an occupation state is the occupation of mode m.
struct ModeIndex {
  Site site;
  int orbital = 1;  // 1 or 2
  int spin = 0;     // 0 = up, 1 = down
};

inline int mode_number(int site_index, int spin, int orbital) {
  return 4 * site_index + 2 * spin + (orbital - 1);
}
int mode_number(const LatticeSpec& spec, const ModeIndex& m);
ModeIndex mode_index(const LatticeSpec& spec, int mode);

class FockOperator {
 public:
  FockOperator() = default;
  FockOperator(int modes, SpMat m);

  int modes() const { return modes_; }
  Eigen::Index dim() const { return m_.rows(); }
  const SpMat& matrix() const { return m_; }

  FockOperator adjoint() const;
  FockOperator conjugate() const;

  bool is_hermitian(double tol = 1e-12) const;
  bool is_antihermitian(double tol = 1e-12) const;
  bool is_real(double tol = 1e-12) const;
  bool is_diagonal() const;
  double max_abs() const;

  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);
  FockOperator& operator*=(cplx s);

  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(FockOperator a, cplx s) { return a *= s; }
  friend FockOperator operator*(cplx s, FockOperator a) { return a *= s; }
  friend FockOperator operator*(double s, FockOperator a) { return a *= cplx(s); }
  friend FockOperator operator-(FockOperator a) { return a *= cplx(-1.0); }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);

 private:
  int modes_ = 0;
  SpMat m_;
};

void check_mode_cap(int modes, int cap = kDefaultModeCap);

FockOperator identity_op(int modes);
FockOperator zero_op(int modes);
FockOperator annihilator(int modes, int m);
FockOperator creator(int modes, int m);

enum class MajoranaKind { Xi, Eta };
// xi = c^dag + c, eta = i (c^dag - c)
FockOperator majorana(int modes, int m, MajoranaKind kind);

FockOperator number_op(int modes, int m);
FockOperator total_number(int modes);

// sum_ij a(i,j) c_i^dag c_j
FockOperator bilinear(int modes, const Eigen::MatrixXcd& a);
// sum_ij k(i,j) c_i^dag c_j^dag
FockOperator pair_creation(int modes, const Eigen::MatrixXcd& k);
// sum_ij k(i,j) c_i c_j
FockOperator pair_annihilation(int modes, const Eigen::MatrixXcd& k);

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);

// Largest entry modulus of a - b.
double residual(const FockOperator& a, const FockOperator& b);

Eigen::VectorXcd basis_state(int modes, std::uint64_t bits);
cplx expectation(const FockOperator& a, const Eigen::VectorXcd& v);

// Sector bookkeeping. Each mask defines a conserved particle count on a
// subset of modes; total particle number is the single-mask case.
struct SectorLayout {
  int modes = 0;
  std::vector<std::uint64_t> masks;

  static SectorLayout total_number(int modes);
  static SectorLayout trivial(int modes);
};

struct SectorMap {
  SectorLayout layout;
  std::vector<std::vector<int>> keys;
  std::vector<std::vector<std::uint32_t>> states;
  std::vector<int> sector_of;
  std::vector<int> local_index;

  int num_sectors() const { return static_cast<int>(states.size()); }
  Eigen::Index block_size(int s) const { return static_cast<Eigen::Index>(states[s].size()); }
};

std::shared_ptr<const SectorMap> make_sectors(const SectorLayout& layout);

// Largest modulus of an entry coupling two different sectors.
double off_block_weight(const FockOperator& a, const SectorMap& map);

template <class Scalar>
std::vector<Eigen::SparseMatrix<Scalar>> sector_blocks(const FockOperator& a, const SectorMap& map,
                                                       double tol = 1e-12);

// Dense blocks on the k-particle subspaces (or whatever the layout defines);
// throws if the operator couples sectors.
std::vector<Eigen::MatrixXcd> sector_split(const FockOperator& a, const SectorMap& map,
                                           double tol = 1e-12);

}  // namespace wafm
