#include "wafm/fock.hpp"

#include <bit>
#include <map>
#include <stdexcept>
#include <string>

namespace wafm {

namespace {

using Triplet = Eigen::Triplet<cplx>;

inline int jw_sign(std::uint64_t state, int m) {
  const std::uint64_t below = state & ((std::uint64_t{1} << m) - 1);
  return (std::popcount(below) & 1) ? -1 : 1;
}

struct Entry {
  int i;
  int j;
  cplx v;
};

std::vector<Entry> nonzeros(const Eigen::MatrixXcd& a) {
  std::vector<Entry> out;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (a(i, j) != cplx(0.0)) out.push_back({i, j, a(i, j)});
  return out;
}

FockOperator from_triplets(int modes, const std::vector<Triplet>& t) {
  const Eigen::Index dim = Eigen::Index{1} << modes;
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(cplx(0.0));
  return FockOperator(modes, std::move(m));
}

}  // namespace

int mode_number(const LatticeSpec& spec, const ModeIndex& m) {
  if (m.orbital < 1 || m.orbital > 2 || m.spin < 0 || m.spin > 1)
    throw std::invalid_argument("bad mode index");
  return mode_number(spec.index(m.site), m.spin, m.orbital);
}

ModeIndex mode_index(const LatticeSpec& spec, int mode) {
  ModeIndex m;
  m.site = spec.site(mode / 4);
  m.spin = (mode / 2) % 2;
  m.orbital = mode % 2 + 1;
  return m;
}

void check_mode_cap(int modes, int cap) {
  if (modes < 1 || modes > cap)
    throw std::length_error("mode count " + std::to_string(modes) + " exceeds the cap of " +
                            std::to_string(cap));
}

FockOperator::FockOperator(int modes, SpMat m) : modes_(modes), m_(std::move(m)) {
  const Eigen::Index dim = Eigen::Index{1} << modes;
  if (m_.rows() != dim || m_.cols() != dim)
    throw std::invalid_argument("operator dimension does not match mode count");
}

FockOperator FockOperator::adjoint() const { return FockOperator(modes_, SpMat(m_.adjoint())); }

FockOperator FockOperator::conjugate() const { return FockOperator(modes_, SpMat(m_.conjugate())); }

bool FockOperator::is_hermitian(double tol) const {
  return residual(*this, adjoint()) <= tol;
}

bool FockOperator::is_antihermitian(double tol) const {
  return residual(*this, -adjoint()) <= tol;
}

bool FockOperator::is_real(double tol) const {
  for (int k = 0; k < m_.outerSize(); ++k)
    for (SpMat::InnerIterator it(m_, k); it; ++it)
      if (std::abs(it.value().imag()) > tol) return false;
  return true;
}

bool FockOperator::is_diagonal() const {
  for (int k = 0; k < m_.outerSize(); ++k)
    for (SpMat::InnerIterator it(m_, k); it; ++it)
      if (it.row() != it.col() && it.value() != cplx(0.0)) return false;
  return true;
}

double FockOperator::max_abs() const {
  double r = 0.0;
  for (int k = 0; k < m_.outerSize(); ++k)
    for (SpMat::InnerIterator it(m_, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  if (o.modes_ != modes_) throw std::invalid_argument("mode count mismatch");
  m_ += o.m_;
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
  if (o.modes_ != modes_) throw std::invalid_argument("mode count mismatch");
  m_ -= o.m_;
  return *this;
}

FockOperator& FockOperator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  if (a.modes_ != b.modes_) throw std::invalid_argument("mode count mismatch");
  SpMat p = (a.m_ * b.m_).pruned(cplx(0.0));
  return FockOperator(a.modes_, std::move(p));
}

FockOperator identity_op(int modes) {
  check_mode_cap(modes);
  const Eigen::Index dim = Eigen::Index{1} << modes;
  SpMat m(dim, dim);
  m.setIdentity();
  return FockOperator(modes, std::move(m));
}

FockOperator zero_op(int modes) {
  check_mode_cap(modes);
  const Eigen::Index dim = Eigen::Index{1} << modes;
  return FockOperator(modes, SpMat(dim, dim));
}

FockOperator annihilator(int modes, int m) {
  check_mode_cap(modes);
  if (m < 0 || m >= modes) throw std::out_of_range("mode out of range");
  std::vector<Triplet> t;
  const std::uint64_t dim = std::uint64_t{1} << modes;
  const std::uint64_t bit = std::uint64_t{1} << m;
  t.reserve(dim / 2);
  for (std::uint64_t s = 0; s < dim; ++s)
    if (s & bit) t.emplace_back(static_cast<int>(s ^ bit), static_cast<int>(s), cplx(jw_sign(s, m)));
  return from_triplets(modes, t);
}

FockOperator creator(int modes, int m) { return annihilator(modes, m).adjoint(); }

FockOperator majorana(int modes, int m, MajoranaKind kind) {
  const FockOperator c = annihilator(modes, m);
  const FockOperator cd = c.adjoint();
  if (kind == MajoranaKind::Xi) return cd + c;
  return cplx(0.0, 1.0) * (cd - c);
}

FockOperator number_op(int modes, int m) {
  check_mode_cap(modes);
  if (m < 0 || m >= modes) throw std::out_of_range("mode out of range");
  std::vector<Triplet> t;
  const std::uint64_t dim = std::uint64_t{1} << modes;
  for (std::uint64_t s = 0; s < dim; ++s)
    if ((s >> m) & 1U) t.emplace_back(static_cast<int>(s), static_cast<int>(s), cplx(1.0));
  return from_triplets(modes, t);
}

FockOperator total_number(int modes) {
  check_mode_cap(modes);
  std::vector<Triplet> t;
  const std::uint64_t dim = std::uint64_t{1} << modes;
  for (std::uint64_t s = 0; s < dim; ++s)
    if (s) t.emplace_back(static_cast<int>(s), static_cast<int>(s), cplx(std::popcount(s)));
  return from_triplets(modes, t);
}

FockOperator bilinear(int modes, const Eigen::MatrixXcd& a) {
  check_mode_cap(modes);
  if (a.rows() != modes || a.cols() != modes) throw std::invalid_argument("one-body matrix size");
  const auto nz = nonzeros(a);
  const std::uint64_t dim = std::uint64_t{1} << modes;
  std::vector<Triplet> t;
  t.reserve(dim * 4);
  for (std::uint64_t s = 0; s < dim; ++s) {
    for (const auto& e : nz) {
      const std::uint64_t bj = std::uint64_t{1} << e.j;
      if (!(s & bj)) continue;
      const std::uint64_t s1 = s ^ bj;
      const std::uint64_t bi = std::uint64_t{1} << e.i;
      if (s1 & bi) continue;
      const int sign = jw_sign(s, e.j) * jw_sign(s1, e.i);
      t.emplace_back(static_cast<int>(s1 | bi), static_cast<int>(s), e.v * double(sign));
    }
  }
  return from_triplets(modes, t);
}

FockOperator pair_creation(int modes, const Eigen::MatrixXcd& k) {
  check_mode_cap(modes);
  if (k.rows() != modes || k.cols() != modes) throw std::invalid_argument("pair matrix size");
  const auto nz = nonzeros(k);
  const std::uint64_t dim = std::uint64_t{1} << modes;
  std::vector<Triplet> t;
  for (std::uint64_t s = 0; s < dim; ++s) {
    for (const auto& e : nz) {
      if (e.i == e.j) continue;
      const std::uint64_t bj = std::uint64_t{1} << e.j;
      const std::uint64_t bi = std::uint64_t{1} << e.i;
      if ((s & bj) || (s & bi)) continue;
      const std::uint64_t s1 = s | bj;
      const int sign = jw_sign(s, e.j) * jw_sign(s1, e.i);
      t.emplace_back(static_cast<int>(s1 | bi), static_cast<int>(s), e.v * double(sign));
    }
  }
  return from_triplets(modes, t);
}

FockOperator pair_annihilation(int modes, const Eigen::MatrixXcd& k) {
  check_mode_cap(modes);
  if (k.rows() != modes || k.cols() != modes) throw std::invalid_argument("pair matrix size");
  const auto nz = nonzeros(k);
  const std::uint64_t dim = std::uint64_t{1} << modes;
  std::vector<Triplet> t;
  for (std::uint64_t s = 0; s < dim; ++s) {
    for (const auto& e : nz) {
      if (e.i == e.j) continue;
      const std::uint64_t bj = std::uint64_t{1} << e.j;
      const std::uint64_t bi = std::uint64_t{1} << e.i;
      if (!(s & bj) || !(s & bi)) continue;
      const std::uint64_t s1 = s ^ bj;
      const int sign = jw_sign(s, e.j) * jw_sign(s1, e.i);
      t.emplace_back(static_cast<int>(s1 ^ bi), static_cast<int>(s), e.v * double(sign));
    }
  }
  return from_triplets(modes, t);
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) {
  return a * b + b * a;
}

double residual(const FockOperator& a, const FockOperator& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("mode count mismatch");
  const SpMat d = a.matrix() - b.matrix();
  double r = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

Eigen::VectorXcd basis_state(int modes, std::uint64_t bits) {
  check_mode_cap(modes);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << modes);
  v(static_cast<Eigen::Index>(bits)) = 1.0;
  return v;
}

cplx expectation(const FockOperator& a, const Eigen::VectorXcd& v) {
  const Eigen::VectorXcd av = a.matrix() * v;
  return v.dot(av);
}

SectorLayout SectorLayout::total_number(int modes) {
  SectorLayout l;
  l.modes = modes;
  l.masks.push_back((std::uint64_t{1} << modes) - 1);
  return l;
}

SectorLayout SectorLayout::trivial(int modes) {
  SectorLayout l;
  l.modes = modes;
  return l;
}

std::shared_ptr<const SectorMap> make_sectors(const SectorLayout& layout) {
  check_mode_cap(layout.modes);
  auto map = std::make_shared<SectorMap>();
  map->layout = layout;
  const std::uint64_t dim = std::uint64_t{1} << layout.modes;
  std::map<std::vector<int>, std::vector<std::uint32_t>> groups;
  std::vector<int> key(layout.masks.size());
  for (std::uint64_t s = 0; s < dim; ++s) {
    for (std::size_t k = 0; k < layout.masks.size(); ++k) key[k] = std::popcount(s & layout.masks[k]);
    groups[key].push_back(static_cast<std::uint32_t>(s));
  }
  map->sector_of.assign(dim, -1);
  map->local_index.assign(dim, -1);
  for (auto& [k, st] : groups) {
    const int id = static_cast<int>(map->states.size());
    for (std::size_t i = 0; i < st.size(); ++i) {
      map->sector_of[st[i]] = id;
      map->local_index[st[i]] = static_cast<int>(i);
    }
    map->keys.push_back(k);
    map->states.push_back(std::move(st));
  }
  return map;
}

double off_block_weight(const FockOperator& a, const SectorMap& map) {
  const SpMat& m = a.matrix();
  double w = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      if (map.sector_of[it.row()] != map.sector_of[it.col()]) w = std::max(w, std::abs(it.value()));
  return w;
}

template <class Scalar>
std::vector<Eigen::SparseMatrix<Scalar>> sector_blocks(const FockOperator& a, const SectorMap& map,
                                                       double tol) {
  if (a.modes() != map.layout.modes) throw std::invalid_argument("layout mode count mismatch");
  const int ns = map.num_sectors();
  std::vector<std::vector<Eigen::Triplet<Scalar>>> trip(ns);
  const SpMat& m = a.matrix();
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      const int sr = map.sector_of[it.row()];
      const int sc = map.sector_of[it.col()];
      if (sr != sc) {
        if (std::abs(it.value()) > tol)
          throw std::invalid_argument("operator couples different symmetry sectors");
        continue;
      }
      if constexpr (std::is_same_v<Scalar, double>) {
        if (std::abs(it.value().imag()) > tol)
          throw std::invalid_argument("operator is not real in this frame");
        trip[sr].emplace_back(map.local_index[it.row()], map.local_index[it.col()], it.value().real());
      } else {
        trip[sr].emplace_back(map.local_index[it.row()], map.local_index[it.col()], it.value());
      }
    }
  }
  std::vector<Eigen::SparseMatrix<Scalar>> out(ns);
  for (int s = 0; s < ns; ++s) {
    out[s].resize(map.block_size(s), map.block_size(s));
    out[s].setFromTriplets(trip[s].begin(), trip[s].end());
  }
  return out;
}

template std::vector<Eigen::SparseMatrix<double>> sector_blocks<double>(const FockOperator&,
                                                                        const SectorMap&, double);
template std::vector<Eigen::SparseMatrix<cplx>> sector_blocks<cplx>(const FockOperator&,
                                                                    const SectorMap&, double);

std::vector<Eigen::MatrixXcd> sector_split(const FockOperator& a, const SectorMap& map,
                                           double tol) {
  auto sparse = sector_blocks<cplx>(a, map, tol);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(sparse.size());
  for (auto& b : sparse) out.emplace_back(Eigen::MatrixXcd(b));
  return out;
}

}  // namespace wafm
