#include "wafm/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace wafm {

namespace {

// Lowest eigenvalue gap of eta eta^dag outside its kernel is at least one.
constexpr double kKernelCut = 0.5;

template <class Scalar>
linalg::Matrix<Scalar> dense(const Eigen::SparseMatrix<Scalar>& s) {
  return linalg::Matrix<Scalar>(s);
}

double commutation_residual(const FockOperator& a, const FockOperator& g) {
  return commutator(a, g).max_abs();
}

}  // namespace

template <class Scalar>
Eigen::Index ReducedBasis<Scalar>::block_size(int b) const {
  return basis[b].size() == 0 ? sectors->block_size(sector[b]) : basis[b].cols();
}

template <class Scalar>
linalg::Matrix<Scalar> ReducedBasis<Scalar>::project(const Eigen::SparseMatrix<Scalar>& sector_block,
                                                     int b) const {
  const auto& v = basis[b];
  if (v.size() == 0) return dense(sector_block);
  const linalg::Matrix<Scalar> av = sector_block * v;
  return v.adjoint() * av;
}

template <class Scalar>
ReducedBasis<Scalar> full_basis(std::shared_ptr<const SectorMap> sectors) {
  ReducedBasis<Scalar> r;
  r.sectors = std::move(sectors);
  for (int s = 0; s < r.sectors->num_sectors(); ++s) {
    r.sector.push_back(s);
    r.multiplicity.push_back(1.0);
    r.basis.emplace_back();
  }
  return r;
}

template <class Scalar>
ReducedBasis<Scalar> lowest_weight_basis(std::shared_ptr<const SectorMap> sectors,
                                         std::vector<FockOperator> generators) {
  if (generators.empty()) return full_basis<Scalar>(std::move(sectors));
  const SectorMap& map = *sectors;
  const int modes = map.layout.modes;

  FockOperator casimir = zero_op(modes);
  std::vector<FockOperator> weight;  // [eta, eta^dag], diagonal
  for (const auto& g : generators) {
    const FockOperator gd = g.adjoint();
    casimir += g * gd;
    weight.push_back(g * gd - gd * g);
    if (!weight.back().is_diagonal()) throw std::invalid_argument("pair generator weight is not diagonal");
  }
  const auto cas_blocks = sector_blocks<Scalar>(casimir, map);

  ReducedBasis<Scalar> r;
  r.sectors = sectors;
  r.generators = std::move(generators);
  double total = 0.0;
  for (int s = 0; s < map.num_sectors(); ++s) {
    const auto& states = map.states[s];
    // 2m for each generator; must be constant across the sector.
    double mult = 1.0;
    bool lowest_possible = true;
    for (const auto& w : weight) {
      const double two_m = w.matrix().coeff(states[0], states[0]).real();
      for (auto st : states)
        if (std::abs(w.matrix().coeff(st, st).real() - two_m) > 1e-12)
          throw std::invalid_argument("pair generator weight varies inside a sector");
      if (two_m > 1e-12) lowest_possible = false;
      mult *= 1.0 - two_m;
    }
    if (!lowest_possible) continue;
    linalg::Matrix<Scalar> g = dense(cas_blocks[s]);
    const Eigen::VectorXd ev = linalg::eigh<Scalar>(g);
    Eigen::Index k = 0;
    while (k < ev.size() && ev(k) < kKernelCut) ++k;
    if (k == 0) continue;
    r.sector.push_back(s);
    r.multiplicity.push_back(std::round(mult));
    r.basis.push_back(g.leftCols(k));
    total += std::round(mult) * double(k);
  }
  const double full = std::ldexp(1.0, modes);
  if (std::abs(total - full) > 0.5)
    throw std::logic_error("lowest-weight multiplets do not exhaust the Fock space");
  return r;
}

template <class Scalar>
SpectralData<Scalar>::SpectralData(std::shared_ptr<const ReducedBasis<Scalar>> basis,
                                   std::vector<SpectralBlock<Scalar>> blocks)
    : basis_(std::move(basis)), blocks_(std::move(blocks)) {
  e_min_ = std::numeric_limits<double>::infinity();
  has_vectors_ = true;
  for (const auto& b : blocks_) {
    if (b.energies.size() > 0) e_min_ = std::min(e_min_, b.energies.minCoeff());
    if (b.energies.size() > 0 && b.vectors.size() == 0) has_vectors_ = false;
  }
}

template <class Scalar>
std::vector<Eigen::VectorXd> SpectralData<Scalar>::weights(double beta) const {
  std::vector<Eigen::VectorXd> w;
  w.reserve(blocks_.size());
  for (const auto& b : blocks_) w.push_back((-beta * (b.energies.array() - e_min_)).exp().matrix());
  return w;
}

template <class Scalar>
double SpectralData<Scalar>::shifted_partition(double beta) const {
  double z = 0.0;
  const auto w = weights(beta);
  for (std::size_t b = 0; b < blocks_.size(); ++b) z += basis_->multiplicity[b] * w[b].sum();
  return z;
}

template <class Scalar>
double SpectralData<Scalar>::log_partition(double beta) const {
  const double z = shifted_partition(beta);
  const double r = std::log(z) - beta * e_min_;
  if (!std::isfinite(r)) throw std::runtime_error("non-finite log partition function");
  return r;
}

template <class Scalar>
double SpectralData<Scalar>::energy(double beta) const {
  const auto w = weights(beta);
  double num = 0.0, z = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    num += basis_->multiplicity[b] * w[b].dot(blocks_[b].energies);
    z += basis_->multiplicity[b] * w[b].sum();
  }
  return num / z;
}

template <class Scalar>
double SpectralData<Scalar>::entropy(double beta) const {
  return log_partition(beta) + beta * energy(beta);
}

template <class Scalar>
double SpectralData<Scalar>::ground_degeneracy(double tol) const {
  double g = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    g += basis_->multiplicity[b] * double((blocks_[b].energies.array() - e_min_ < tol).count());
  return g;
}

template <class Scalar>
SpectralData<Scalar> spectral(const FockOperator& h, std::shared_ptr<const ReducedBasis<Scalar>> basis,
                              bool vectors) {
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("spectral: operator is not hermitian");
  const auto sb = sector_blocks<Scalar>(h, *basis->sectors);
  std::vector<SpectralBlock<Scalar>> out(basis->num_blocks());
  for (int b = 0; b < basis->num_blocks(); ++b) {
    linalg::Matrix<Scalar> m = basis->project(sb[basis->sector[b]], b);
    if (vectors) {
      out[b].energies = linalg::eigh<Scalar>(m);
      out[b].vectors = std::move(m);
    } else {
      out[b].energies = linalg::eigenvalues<Scalar>(std::move(m));
    }
  }
  return SpectralData<Scalar>(std::move(basis), std::move(out));
}

template <class Scalar>
EigenOperator to_eigenbasis(const SpectralData<Scalar>& sd, const FockOperator& a, double tol) {
  if (!sd.has_vectors()) throw std::invalid_argument("spectral data was computed without eigenvectors");
  const auto& basis = sd.basis();
  const double scale = std::max(1.0, a.max_abs());
  for (const auto& g : basis.generators)
    if (commutation_residual(a, g) > tol * scale)
      throw std::invalid_argument("observable does not commute with the pair generators");
  const auto sb = sector_blocks<cplx>(a, *basis.sectors, tol * scale);
  EigenOperator out;
  out.blocks.reserve(basis.num_blocks());
  for (int b = 0; b < basis.num_blocks(); ++b) {
    const Eigen::SparseMatrix<cplx>& s = sb[basis.sector[b]];
    const auto& u = sd.blocks()[b].vectors;
    // Columns of w are the eigenvectors in sector coordinates.
    const linalg::Matrix<Scalar> w = basis.basis[b].size() == 0 ? u : linalg::Matrix<Scalar>(basis.basis[b] * u);
    if constexpr (std::is_same_v<Scalar, double>) {
      const Eigen::SparseMatrix<double> re = s.real(), im = s.imag();
      const Eigen::MatrixXd are = w.transpose() * (re * w);
      Eigen::MatrixXcd blk = are.cast<cplx>();
      if (im.nonZeros() > 0) {
        const Eigen::MatrixXd aim = w.transpose() * (im * w);
        blk.imag() = aim;
      }
      out.blocks.push_back(std::move(blk));
    } else {
      out.blocks.push_back(w.adjoint() * (s * w));
    }
  }
  return out;
}

template <class Scalar>
cplx thermal_expectation(const SpectralData<Scalar>& sd, const EigenOperator& a, double beta) {
  const auto w = sd.weights(beta);
  cplx num = 0.0;
  double z = 0.0;
  for (std::size_t b = 0; b < w.size(); ++b) {
    const double m = sd.basis().multiplicity[b];
    num += m * (a.blocks[b].diagonal().array() * w[b].array()).sum();
    z += m * w[b].sum();
  }
  const cplx r = num / z;
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) throw std::runtime_error("non-finite expectation");
  return r;
}

namespace {

template <class Scalar>
cplx weighted_product(const SpectralData<Scalar>& sd, const EigenOperator& a, const EigenOperator& b,
                      const std::vector<Eigen::VectorXd>& w) {
  cplx num = 0.0;
  double z = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double m = sd.basis().multiplicity[k];
    // sum_m w_m (AB)_mm = sum_{m,n} w_m A_mn B_nm
    const Eigen::MatrixXcd& A = a.blocks[k];
    const Eigen::MatrixXcd& B = b.blocks[k];
    cplx s = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (w[k](i) == 0.0) continue;
      s += w[k](i) * A.row(i).transpose().cwiseProduct(B.col(i)).sum();
    }
    num += m * s;
    z += m * w[k].sum();
  }
  return num / z;
}

template <class Scalar>
std::vector<Eigen::VectorXd> ground_weights(const SpectralData<Scalar>& sd, double tol) {
  std::vector<Eigen::VectorXd> w;
  for (const auto& b : sd.blocks())
    w.push_back(((b.energies.array() - sd.min_energy()) < tol).template cast<double>().matrix());
  return w;
}

}  // namespace

template <class Scalar>
cplx thermal_product(const SpectralData<Scalar>& sd, const EigenOperator& a, const EigenOperator& b,
                     double beta) {
  return weighted_product(sd, a, b, sd.weights(beta));
}

template <class Scalar>
cplx ground_expectation(const SpectralData<Scalar>& sd, const EigenOperator& a, double tol) {
  const auto w = ground_weights(sd, tol);
  cplx num = 0.0;
  double z = 0.0;
  for (std::size_t b = 0; b < w.size(); ++b) {
    const double m = sd.basis().multiplicity[b];
    num += m * (a.blocks[b].diagonal().array() * w[b].array()).sum();
    z += m * w[b].sum();
  }
  return num / z;
}

template <class Scalar>
cplx ground_product(const SpectralData<Scalar>& sd, const EigenOperator& a, const EigenOperator& b,
                    double tol) {
  return weighted_product(sd, a, b, ground_weights(sd, tol));
}

double duhamel_kernel(double e_m, double e_n, double beta) {
  const double tau = 1e-9 * std::max(1.0, std::abs(e_m) + std::abs(e_n));
  const double x = beta * (e_m - e_n);
  const double base = std::exp(-beta * e_n);
  if (std::abs(e_m - e_n) < tau) return base * (1.0 - 0.5 * x);
  return base * (-std::expm1(-x)) / x;
}

template <class Scalar>
cplx duhamel(const SpectralData<Scalar>& sd, const EigenOperator& a, const EigenOperator& b, double beta) {
  const double e0 = sd.min_energy();
  cplx num = 0.0;
  double z = 0.0;
  for (std::size_t k = 0; k < sd.blocks().size(); ++k) {
    const double m = sd.basis().multiplicity[k];
    const Eigen::VectorXd e = sd.blocks()[k].energies.array() - e0;
    const Eigen::MatrixXcd& A = a.blocks[k];
    const Eigen::MatrixXcd& B = b.blocks[k];
    cplx s = 0.0;
    for (Eigen::Index j = 0; j < e.size(); ++j)
      for (Eigen::Index i = 0; i < e.size(); ++i) s += A(i, j) * B(j, i) * duhamel_kernel(e(i), e(j), beta);
    num += m * s;
    z += m * (-beta * e.array()).exp().sum();
  }
  return num / z;
}

ThermalContext::ThermalContext(const LatticeSpec& spec, int spin_axis)
    : spec_(spec), axis_(spin_axis), frame_(symmetry_frame(spec, spin_axis)) {
  linalg::verify_backend();
  auto sectors = make_sectors(symmetry_layout(spec));
  basis_ = std::make_shared<const ReducedBasis<double>>(
      lowest_weight_basis<double>(std::move(sectors), pair_generators(spec, frame_)));
}

RealSpectrum ThermalContext::solve(const FockOperator& h, bool vectors) const {
  return spectral<double>(h, basis_, vectors);
}

RealSpectrum ThermalContext::solve(const ModelParams& params, const FieldConfig* h, bool vectors) const {
  return solve(build_full(spec_, params, h, frame_), vectors);
}

std::vector<std::vector<double>> ThermalContext::log_partition_batch(const ModelParams& params,
                                                                     const std::vector<FieldConfig>& fields,
                                                                     const std::vector<double>& betas) const {
  if (axis_ != 1) throw std::logic_error("the affine field family needs the spin-axis-1 frame");
  const ReducedBasis<double>& basis = *basis_;
  if (!base_ready_ || base_t_ != params.t || base_j_ != params.J) {
    ModelParams p0 = params;
    p0.B = 0.0;
    const auto h0 = sector_blocks<double>(build_full(spec_, p0, nullptr, frame_), *basis.sectors);
    base_.assign(basis.num_blocks(), {});
    s1_.assign(basis.num_blocks(), {});
    std::vector<FockOperator> s1;
    for (int x = 0; x < spec_.num_sites(); ++x) s1.push_back(spin_operator(spec_, x, 1, frame_));
    for (int b = 0; b < basis.num_blocks(); ++b) {
      const int s = basis.sector[b];
      base_[b] = basis.project(h0[s], b);
      const auto& states = basis.sectors->states[s];
      const linalg::Matrix<double>& v = basis.basis[b];
      for (int x = 0; x < spec_.num_sites(); ++x) {
        Eigen::VectorXd diag(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) diag(i) = s1[x].matrix().coeff(states[i], states[i]).real();
        if (v.size() == 0) {
          s1_[b].push_back(linalg::Matrix<double>(diag.asDiagonal()));
        } else {
          s1_[b].push_back(v.transpose() * diag.asDiagonal() * v);
        }
      }
    }
    base_t_ = params.t;
    base_j_ = params.J;
    base_ready_ = true;
  }

  std::vector<std::vector<double>> out;
  out.reserve(fields.size());
  for (const auto& h : fields) {
    const auto c = field_coefficients(spec_, params, h);
    const double shift = 0.5 * params.J * h.sum_of_squares();
    std::vector<Eigen::VectorXd> ev(basis.num_blocks());
    double e_min = std::numeric_limits<double>::infinity();
    for (int b = 0; b < basis.num_blocks(); ++b) {
      linalg::Matrix<double> m = base_[b];
      for (int x = 0; x < spec_.num_sites(); ++x)
        if (c[x] != 0.0) m.noalias() += c[x] * s1_[b][x];
      ev[b] = linalg::eigenvalues<double>(std::move(m)).array() + shift;
      if (ev[b].size() > 0) e_min = std::min(e_min, ev[b].minCoeff());
    }
    std::vector<double> row;
    for (double beta : betas) {
      double z = 0.0;
      for (int b = 0; b < basis.num_blocks(); ++b)
        z += basis.multiplicity[b] * (-beta * (ev[b].array() - e_min)).exp().sum();
      row.push_back(std::log(z) - beta * e_min);
    }
    out.push_back(std::move(row));
  }
  return out;
}

template struct ReducedBasis<double>;
template struct ReducedBasis<cplx>;
template ReducedBasis<double> full_basis<double>(std::shared_ptr<const SectorMap>);
template ReducedBasis<cplx> full_basis<cplx>(std::shared_ptr<const SectorMap>);
template ReducedBasis<double> lowest_weight_basis<double>(std::shared_ptr<const SectorMap>, std::vector<FockOperator>);
template ReducedBasis<cplx> lowest_weight_basis<cplx>(std::shared_ptr<const SectorMap>, std::vector<FockOperator>);
template class SpectralData<double>;
template class SpectralData<cplx>;
template RealSpectrum spectral<double>(const FockOperator&, std::shared_ptr<const ReducedBasis<double>>, bool);
template ComplexSpectrum spectral<cplx>(const FockOperator&, std::shared_ptr<const ReducedBasis<cplx>>, bool);
template EigenOperator to_eigenbasis<double>(const RealSpectrum&, const FockOperator&, double);
template EigenOperator to_eigenbasis<cplx>(const ComplexSpectrum&, const FockOperator&, double);
template cplx thermal_expectation<double>(const RealSpectrum&, const EigenOperator&, double);
template cplx thermal_expectation<cplx>(const ComplexSpectrum&, const EigenOperator&, double);
template cplx thermal_product<double>(const RealSpectrum&, const EigenOperator&, const EigenOperator&, double);
template cplx thermal_product<cplx>(const ComplexSpectrum&, const EigenOperator&, const EigenOperator&, double);
template cplx ground_expectation<double>(const RealSpectrum&, const EigenOperator&, double);
template cplx ground_expectation<cplx>(const ComplexSpectrum&, const EigenOperator&, double);
template cplx ground_product<double>(const RealSpectrum&, const EigenOperator&, const EigenOperator&, double);
template cplx ground_product<cplx>(const ComplexSpectrum&, const EigenOperator&, const EigenOperator&, double);
template cplx duhamel<double>(const RealSpectrum&, const EigenOperator&, const EigenOperator&, double);
template cplx duhamel<cplx>(const ComplexSpectrum&, const EigenOperator&, const EigenOperator&, double);

}  // namespace wafm
