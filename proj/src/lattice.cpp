#include "wafm/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wafm {

namespace {

int wrap(int v, int half) {
  const int side = 2 * half;
  while (v > half) v -= side;
  while (v < -half + 1) v += side;
  return v;
}

}  // namespace

LatticeSpec::LatticeSpec(int d, std::vector<int> half_sides) : d_(d), half_(std::move(half_sides)) {
  if (d_ < 1 || d_ > 3) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  if (static_cast<int>(half_.size()) != d_)
    throw std::invalid_argument("half_sides must have exactly d entries");
  int stride = 1;
  for (int mu = 0; mu < d_; ++mu) {
    if (half_[mu] < 1) throw std::invalid_argument("half sides must be positive");
    stride_[mu] = stride;
    stride *= 2 * half_[mu];
  }
  num_sites_ = stride;
}

int LatticeSpec::index(const Site& s) const {
  int idx = 0;
  for (int mu = 0; mu < d_; ++mu) idx += (s.x[mu] + half_[mu] - 1) * stride_[mu];
  return idx;
}

Site LatticeSpec::site(int index) const {
  if (index < 0 || index >= num_sites_) throw std::out_of_range("site index out of range");
  Site s;
  for (int mu = 0; mu < d_; ++mu) {
    const int side = 2 * half_[mu];
    s.x[mu] = (index / stride_[mu]) % side - half_[mu] + 1;
  }
  return s;
}

std::vector<Site> LatticeSpec::sites() const {
  std::vector<Site> out;
  out.reserve(num_sites_);
  for (int i = 0; i < num_sites_; ++i) out.push_back(site(i));
  return out;
}

bool LatticeSpec::contains(const Site& s) const {
  for (int mu = 0; mu < 3; ++mu) {
    if (mu >= d_) {
      if (s.x[mu] != 0) return false;
    } else if (s.x[mu] < -half_[mu] + 1 || s.x[mu] > half_[mu]) {
      return false;
    }
  }
  return true;
}

std::string LatticeSpec::describe() const {
  std::ostringstream os;
  os << "d=" << d_ << " sides=";
  for (int mu = 0; mu < d_; ++mu) os << (mu ? "x" : "") << 2 * half_[mu];
  return os.str();
}

Neighbor neighbor(const LatticeSpec& spec, const Site& x, int mu) {
  if (mu < 1 || mu > spec.dim()) throw std::invalid_argument("direction out of range");
  Neighbor nb{x, false};
  const int L = spec.half_side(mu);
  int& c = nb.site.x[mu - 1];
  if (c == L) {
    c = -L + 1;
    nb.crossed = true;
  } else {
    c += 1;
  }
  return nb;
}

Site previous(const LatticeSpec& spec, const Site& x, int mu) {
  if (mu < 1 || mu > spec.dim()) throw std::invalid_argument("direction out of range");
  Site y = x;
  y.x[mu - 1] = wrap(y.x[mu - 1] - 1, spec.half_side(mu));
  return y;
}

int parity(const Site& x) { return ((x.x[0] + x.x[1] + x.x[2]) % 2 == 0) ? 1 : -1; }

PlaneSplit split_by_plane(const LatticeSpec& spec, int axis) {
  if (axis < 1 || axis > spec.dim()) throw std::invalid_argument("plane axis out of range");
  PlaneSplit split;
  split.axis = axis;
  const int n = spec.num_sites();
  split.reflect.resize(n);
  split.in_plus.resize(n);
  const int L = spec.half_side(axis);
  for (int i = 0; i < n; ++i) {
    Site s = spec.site(i);
    const bool plus = s.x[axis - 1] >= 1;
    split.in_plus[i] = plus;
    (plus ? split.plus : split.minus).push_back(i);
    Site r = s;
    r.x[axis - 1] = wrap(1 - s.x[axis - 1], L);
    split.reflect[i] = spec.index(r);
  }
  return split;
}

Momentum make_momentum(const LatticeSpec& spec, std::array<int, 3> n) {
  Momentum m;
  for (int mu = 0; mu < 3; ++mu) {
    if (mu < spec.dim()) {
      const int L = spec.half_side(mu + 1);
      m.n[mu] = wrap(n[mu], L);
      m.p[mu] = std::numbers::pi * m.n[mu] / L;
    }
  }
  return m;
}

std::vector<Momentum> momenta(const LatticeSpec& spec) {
  // Same lexicographic order as sites: last direction most significant.
  std::vector<Momentum> out;
  out.reserve(spec.num_sites());
  for (int i = 0; i < spec.num_sites(); ++i) {
    Site s = spec.site(i);
    out.push_back(make_momentum(spec, s.x));
  }
  return out;
}

Momentum antiferro_momentum(const LatticeSpec& spec) {
  std::array<int, 3> n{};
  for (int mu = 0; mu < spec.dim(); ++mu) n[mu] = spec.half_side(mu + 1);
  return make_momentum(spec, n);
}

Momentum negate(const LatticeSpec& spec, const Momentum& p) {
  return make_momentum(spec, {-p.n[0], -p.n[1], -p.n[2]});
}

Momentum shift_by_q(const LatticeSpec& spec, const Momentum& p) {
  std::array<int, 3> n = p.n;
  for (int mu = 0; mu < spec.dim(); ++mu) n[mu] += spec.half_side(mu + 1);
  return make_momentum(spec, n);
}

bool is_member(const LatticeSpec& spec, const Momentum& p) {
  for (int mu = 0; mu < 3; ++mu) {
    if (mu >= spec.dim()) {
      if (p.n[mu] != 0) return false;
      continue;
    }
    const int L = spec.half_side(mu + 1);
    if (p.n[mu] < -L + 1 || p.n[mu] > L) return false;
  }
  return true;
}

double dispersion(const LatticeSpec& spec, const Momentum& p) {
  double e = 0.0;
  for (int mu = 0; mu < spec.dim(); ++mu) e += 1.0 - std::cos(p.p[mu]);
  return e;
}

}  // namespace wafm
