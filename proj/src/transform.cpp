#include "wafm/transform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wafm {

namespace {

using Triplet = Eigen::Triplet<cplx>;
const cplx I(0.0, 1.0);

FockOperator from_triplets(int modes, std::vector<Triplet>& t) {
  const Eigen::Index dim = Eigen::Index{1} << modes;
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(cplx(0.0));
  return FockOperator(modes, std::move(m));
}

// Lift of a 2x2 unitary acting on the adjacent modes p and p+1. Adjacent
// modes carry no Jordan-Wigner string between them, so the block is local.
FockOperator two_mode_lift(int modes, int p, const Eigen::Matrix2cd& u) {
  const std::uint64_t dim = std::uint64_t{1} << modes;
  const std::uint64_t bp = std::uint64_t{1} << p;
  const std::uint64_t bq = bp << 1;
  const cplx det = u.determinant();
  std::vector<Triplet> t;
  t.reserve(2 * dim);
  for (std::uint64_t s = 0; s < dim; ++s) {
    const bool np = s & bp;
    const bool nq = s & bq;
    const auto col = static_cast<int>(s);
    const auto swapped = static_cast<int>(s ^ bp ^ bq);
    if (!np && !nq) {
      t.emplace_back(col, col, 1.0);
    } else if (np && nq) {
      t.emplace_back(col, col, det);
    } else if (np) {
      t.emplace_back(col, col, u(0, 0));
      t.emplace_back(swapped, col, u(1, 0));
    } else {
      t.emplace_back(swapped, col, u(0, 1));
      t.emplace_back(col, col, u(1, 1));
    }
  }
  return from_triplets(modes, t);
}

FockOperator diagonal_lift(int modes, const Eigen::VectorXcd& phase) {
  const std::uint64_t dim = std::uint64_t{1} << modes;
  std::vector<Triplet> t;
  t.reserve(dim);
  for (std::uint64_t s = 0; s < dim; ++s) {
    cplx v = 1.0;
    for (int m = 0; m < modes; ++m)
      if (s >> m & 1) v *= phase(m);
    t.emplace_back(static_cast<int>(s), static_cast<int>(s), v);
  }
  return from_triplets(modes, t);
}

}  // namespace

FockUnitary::FockUnitary(FockOperator u, std::string label)
    : u_(std::move(u)), u_dag_(u_.adjoint()), label_(std::move(label)) {}

FockOperator FockUnitary::conjugate(const FockOperator& a) const { return u_dag_ * (a * u_); }

double FockUnitary::unitarity_defect() const {
  return residual(u_dag_ * u_, identity_op(u_.modes()));
}

FockUnitary operator*(const FockUnitary& a, const FockUnitary& b) {
  return FockUnitary(a.u_ * b.u_, a.label_ + " * " + b.label_);
}

FockUnitary fock_lift(const Eigen::MatrixXcd& w, std::string label) {
  const int M = static_cast<int>(w.rows());
  if (w.cols() != M) throw std::invalid_argument("one-body unitary must be square");
  check_mode_cap(M);
  if ((w.adjoint() * w - Eigen::MatrixXcd::Identity(M, M)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("one-body matrix is not unitary");

  // Reduce W to a diagonal with rotations G on rows (i-1, i):
  // G_k ... G_1 W = D, hence W = G_1^dag ... G_k^dag D.
  Eigen::MatrixXcd a = w;
  FockOperator lift = identity_op(M);
  for (int j = 0; j + 1 < M; ++j) {
    for (int i = M - 1; i > j; --i) {
      const cplx lo = a(i, j);
      if (lo == cplx(0.0)) continue;
      const cplx hi = a(i - 1, j);
      const double r = std::hypot(std::abs(hi), std::abs(lo));
      Eigen::Matrix2cd g;
      g << std::conj(hi) / r, std::conj(lo) / r, -lo / r, hi / r;
      Eigen::Matrix<cplx, 2, Eigen::Dynamic> rows(2, M);
      rows.row(0) = a.row(i - 1);
      rows.row(1) = a.row(i);
      rows = g * rows;
      a.row(i - 1) = rows.row(0);
      a.row(i) = rows.row(1);
      a(i, j) = 0.0;
      lift = lift * two_mode_lift(M, i - 1, g.adjoint());
    }
  }
  lift = lift * diagonal_lift(M, a.diagonal());
  return FockUnitary(std::move(lift), std::move(label));
}

Eigen::MatrixXcd orbital_one_body(const LatticeSpec& spec, const Eigen::Matrix2cd& a,
                                  const std::vector<int>& sites) {
  const int M = spec.num_modes();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(M, M);
  for (int x : sites)
    for (int spin = 0; spin < 2; ++spin) {
      const int m0 = mode_number(x, spin, 1);
      w.block(m0, m0, 2, 2) = a;
    }
  return w;
}

FockUnitary build_u2(const LatticeSpec& spec) {
  const int M = spec.num_modes();
  check_mode_cap(M);
  if (spec.dim() < 2) return FockUnitary(identity_op(M), "U2 (identity for d=1)");
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(M, M);
  for (int x = 0; x < spec.num_sites(); ++x) {
    const cplx phase = std::exp(I * (std::numbers::pi / 2.0) * double(spec.site(x).x[1]));
    for (int k = 0; k < 4; ++k) w(4 * x + k, 4 * x + k) = phase;
  }
  return fock_lift(w, "U2");
}

FockUnitary build_u_alpha1(const LatticeSpec& spec, int plane_axis) {
  check_mode_cap(spec.num_modes());
  const PlaneSplit split = split_by_plane(spec, plane_axis);
  return fock_lift(orbital_one_body(spec, pauli::alpha(1), split.plus),
                   "U(alpha1) axis " + std::to_string(plane_axis));
}

FockUnitary particle_hole_factor(int modes, int mode) {
  check_mode_cap(modes);
  if (mode < 0 || mode >= modes) throw std::out_of_range("mode out of range");
  const std::uint64_t dim = std::uint64_t{1} << modes;
  const std::uint64_t bit = std::uint64_t{1} << mode;
  std::vector<Triplet> t;
  t.reserve(dim);
  for (std::uint64_t s = 0; s < dim; ++s) {
    const std::uint64_t s2 = s ^ bit;
    const int jw = std::popcount(s & (bit - 1));
    const int others = std::popcount(s2 & ~bit);
    const double v = ((jw + others) & 1) ? -1.0 : 1.0;
    t.emplace_back(static_cast<int>(s2), static_cast<int>(s), v);
  }
  return FockUnitary(from_triplets(modes, t), "uPH mode " + std::to_string(mode));
}

FockUnitary build_u_odd(const LatticeSpec& spec) {
  const int M = spec.num_modes();
  check_mode_cap(M);
  FockOperator u = identity_op(M);
  for (int spin = 0; spin < 2; ++spin)
    for (int x = 0; x < spec.num_sites(); ++x) {
      if (parity(spec.site(x)) > 0) continue;
      for (int orb = 1; orb <= 2; ++orb) u = u * particle_hole_factor(M, mode_number(x, spin, orb)).op();
    }
  return FockUnitary(std::move(u), "Uodd");
}

Eigen::Matrix2cd orbital_rotation(double theta) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
  u(0, 0) = std::exp(I * theta / 2.0);
  u(1, 1) = std::exp(-I * theta / 2.0);
  return u;
}

OrbitalRotation build_u3(const LatticeSpec& spec, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle must be finite");
  OrbitalRotation r;
  r.matrix = orbital_rotation(theta);
  std::vector<int> all(spec.num_sites());
  for (int x = 0; x < spec.num_sites(); ++x) all[x] = x;
  r.lift = fock_lift(orbital_one_body(spec, r.matrix, all), "U3(" + format_number(theta) + ")");
  return r;
}

AntilinearReflection::AntilinearReflection(const LatticeSpec& spec, int axis)
    : split_(split_by_plane(spec, axis)) {
  const int M = spec.num_modes();
  check_mode_cap(M);
  mode_map_.resize(M);
  for (int m = 0; m < M; ++m) mode_map_[m] = 4 * split_.reflect[m / 4] + m % 4;

  // P c^dag_{m1} ... c^dag_{mk} |0> = c^dag_{r(m1)} ... c^dag_{r(mk)} |0>;
  // reordering the image string costs the parity of its inversions.
  const std::uint64_t dim = std::uint64_t{1} << M;
  std::vector<Triplet> t;
  t.reserve(dim);
  std::vector<int> img;
  for (std::uint64_t s = 0; s < dim; ++s) {
    img.clear();
    std::uint64_t s2 = 0;
    for (int m = 0; m < M; ++m)
      if (s >> m & 1) {
        img.push_back(mode_map_[m]);
        s2 |= std::uint64_t{1} << mode_map_[m];
      }
    int inv = 0;
    for (std::size_t a = 0; a < img.size(); ++a)
      for (std::size_t b = a + 1; b < img.size(); ++b) inv += img[a] > img[b];
    t.emplace_back(static_cast<int>(s2), static_cast<int>(s), (inv & 1) ? -1.0 : 1.0);
  }
  p_ = from_triplets(M, t);
  p_dag_ = p_.adjoint();
}

int AntilinearReflection::reflect_mode(int mode) const { return mode_map_.at(mode); }

FockOperator AntilinearReflection::apply(const FockOperator& a) const {
  return p_ * (a.conjugate() * p_dag_);
}

FieldConfig reflect_field(const LatticeSpec& spec, const PlaneSplit& split, const FieldConfig& h) {
  FieldConfig out(spec);
  for (int x = 0; x < spec.num_sites(); ++x)
    for (int mu = 1; mu <= spec.dim(); ++mu) {
      const int rx = split.reflect[x];
      const int target = mu == split.axis ? spec.index(previous(spec, spec.site(rx), mu)) : rx;
      out(target, mu) = -h(x, mu);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Identity checks

namespace {

enum class Part { Plus, Minus, Boundary };

struct Bond {
  int x;
  int y;
  bool crossed;
};

class Workbench {
 public:
  Workbench(const LatticeSpec& spec, const TransformCheckOptions& opt)
      : spec(spec),
        opt(opt),
        M(spec.num_modes()),
        theta(spec, 1),
        u2(build_u2(spec)),
        ua(build_u_alpha1(spec, 1)),
        uodd(build_u_odd(spec)),
        u1(ua * uodd),
        v(u2 * u1) {
    for (int j = 1; j <= 3; ++j)
      for (int x = 0; x < spec.num_sites(); ++x) S[j].push_back(spin_operator(spec, x, j));
    lattice = spec.describe();
    params = {{"t", opt.t}, {"J", opt.J}, {"B", opt.B}, {"seed", opt.seed}};
  }

  const LatticeSpec& spec;
  const TransformCheckOptions& opt;
  int M;
  AntilinearReflection theta;
  FockUnitary u2, ua, uodd, u1, v;
  std::vector<FockOperator> S[4];
  std::string lattice;
  json params;
  std::vector<CheckReport> out;

  const PlaneSplit& split() const { return theta.split(); }

  // Bonds (x, x + e_mu) belonging to one part of the decomposition.
  std::vector<Bond> bonds(int mu, Part part) const {
    std::vector<Bond> b;
    const int L = spec.half_side(1);
    for (int x = 0; x < spec.num_sites(); ++x) {
      const Site s = spec.site(x);
      const bool plus = split().in_plus[x];
      bool keep;
      if (mu == 1) {
        const bool boundary = s.x[0] == 0 || s.x[0] == L;
        keep = part == Part::Boundary ? boundary : (!boundary && (part == Part::Plus) == plus);
      } else {
        keep = part != Part::Boundary && (part == Part::Plus) == plus;
      }
      if (!keep) continue;
      const Neighbor nb = neighbor(spec, s, mu);
      b.push_back({x, spec.index(nb.site), nb.crossed});
    }
    return b;
  }

  std::vector<int> sites(Part part) const { return part == Part::Plus ? split().plus : split().minus; }

  int mode(int x, int spin, int orb) const { return mode_number(x, spin, orb); }

  // coeff * sum_b s_b [Psi^dag(x) A Psi(y) + rev * Psi^dag(y) A Psi(x)] for one spin.
  FockOperator hopping(const std::vector<Bond>& bs, int spin, const Eigen::Matrix2cd& a, cplx coeff,
                       double rev, const std::function<double(const Bond&)>& sign) const {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(M, M);
    for (const Bond& b : bs) {
      const cplx c = coeff * sign(b);
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
          T(mode(b.x, spin, i), mode(b.y, spin, j)) += c * a(i - 1, j - 1);
          T(mode(b.y, spin, i), mode(b.x, spin, j)) += rev * c * a(i - 1, j - 1);
        }
    }
    return bilinear(M, T);
  }

  // coeff * sum_b s_b [Psi^dag(x) A tPsi^dag(y) + rev * tPsi(y) A Psi(x)] for one spin.
  FockOperator pairing(const std::vector<Bond>& bs, int spin, const Eigen::Matrix2cd& a, cplx coeff,
                       double rev, const std::function<double(const Bond&)>& sign) const {
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(M, M);
    Eigen::MatrixXcd Kd = Eigen::MatrixXcd::Zero(M, M);
    for (const Bond& b : bs) {
      const cplx c = coeff * sign(b);
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
          K(mode(b.x, spin, i), mode(b.y, spin, j)) += c * a(i - 1, j - 1);
          Kd(mode(b.y, spin, i), mode(b.x, spin, j)) += rev * c * a(i - 1, j - 1);
        }
    }
    return pair_creation(M, K) + pair_annihilation(M, Kd);
  }

  // Hopping sign of a bond in the original (antiperiodic) Hamiltonian.
  static double original_sign(const Bond& b) { return b.crossed ? -1.0 : 1.0; }
  // After U2 a wrapped direction-2 bond picks up i (-1)^{L2} on top of the
  // antiperiodic sign, which leaves (-1)^{L2+1} in front of the real form.
  double dir2_sign(const Bond& b) const {
    if (!b.crossed) return 1.0;
    return (spec.half_side(2) % 2 == 0) ? -1.0 : 1.0;
  }

  // Original-frame kinetic energy on a set of direction-mu bonds.
  FockOperator kinetic_original(const std::vector<Bond>& bs, int mu, int spin) const {
    return hopping(bs, spin, pauli::alpha(mu), I * opt.t, -1.0, original_sign);
  }

  // The form after U2: real hopping along direction 2, unchanged elsewhere.
  FockOperator kinetic_tilde(const std::vector<Bond>& bs, int mu, int spin) const {
    if (mu == 2)
      return hopping(bs, spin, pauli::alpha(2), -opt.t, 1.0, [this](const Bond& b) { return dir2_sign(b); });
    return kinetic_original(bs, mu, spin);
  }

  // The pair forms after the full transformation, for one half.
  FockOperator kinetic_hat(const std::vector<Bond>& bs, int mu, int spin, Part part) const {
    const double pm = part == Part::Plus ? 1.0 : -1.0;
    switch (mu) {
      case 1:
        return pairing(bs, spin, pauli::alpha(1), I * opt.t, -1.0, original_sign);
      case 2:
        return pairing(bs, spin, pauli::alpha(2), pm * opt.t, 1.0,
                       [this](const Bond& b) { return dir2_sign(b); });
      default:
        return pairing(bs, spin, pauli::alpha(3), -pm * I * opt.t, -1.0, original_sign);
    }
  }

  FockOperator majorana_op(int x, int spin, int orb, MajoranaKind k) const {
    return majorana(M, mode(x, spin, orb), k);
  }

  // Boundary kinetic term in Majorana form; eta_sign = +1 before U_odd, -1 after.
  FockOperator boundary_majorana(int spin, double eta_sign) const {
    FockOperator h = zero_op(M);
    const int L = spec.half_side(1);
    for (const Bond& b : bonds(1, Part::Boundary)) {
      // The x1 = L bond is written with the wrapped site first.
      const bool wrapped = spec.site(b.x).x[0] == L && b.crossed;
      const int first = wrapped ? b.y : b.x;
      const int second = wrapped ? b.x : b.y;
      for (int orb = 1; orb <= 2; ++orb) {
        h += majorana_op(first, spin, orb, MajoranaKind::Xi) * majorana_op(second, spin, orb, MajoranaKind::Xi);
        h += eta_sign * (majorana_op(first, spin, orb, MajoranaKind::Eta) *
                         majorana_op(second, spin, orb, MajoranaKind::Eta));
      }
    }
    return (0.5 * I * opt.t) * h;
  }

  // The same term as sum over x1 in {0, -L+1} of xi theta(xi) + eta theta(eta).
  FockOperator boundary_rp_form(int spin) const {
    FockOperator h = zero_op(M);
    const int L = spec.half_side(1);
    for (int x = 0; x < spec.num_sites(); ++x) {
      // The two slices coincide when L = 1 and then both terms are kept.
      const int c = spec.site(x).x[0];
      const double weight = double(c == 0) + double(c == -L + 1);
      if (weight == 0.0) continue;
      for (int orb = 1; orb <= 2; ++orb) {
        const FockOperator xi = majorana_op(x, spin, orb, MajoranaKind::Xi);
        const FockOperator eta = majorana_op(x, spin, orb, MajoranaKind::Eta);
        h += weight * (xi * theta.apply(xi) + eta * theta.apply(eta));
      }
    }
    return (0.5 * I * opt.t) * h;
  }

  // Squared spin forms. Original: (J/2) sum [S(x) + S(y) + h]^2 for j = 1, 3 and
  // -(J/2) sum [S(x) - S(y)]^2 for j = 2. Transformed: the sum becomes a
  // difference and h picks up the staggered sign.
  FockOperator square_original(const std::vector<Bond>& bs, int j, int mu, const FieldConfig* h) const {
    const FockOperator one = identity_op(M);
    FockOperator out = zero_op(M);
    for (const Bond& b : bs) {
      FockOperator a = j == 2 ? S[j][b.x] - S[j][b.y] : S[j][b.x] + S[j][b.y];
      if (j == 1 && h) a += (*h)(b.x, mu) * one;
      out += a * a;
    }
    return ((j == 2 ? -0.5 : 0.5) * opt.J) * out;
  }

  FockOperator square_hat(const std::vector<Bond>& bs, int j, int mu, const FieldConfig* h) const {
    const FockOperator one = identity_op(M);
    FockOperator out = zero_op(M);
    for (const Bond& b : bs) {
      FockOperator a = S[j][b.x] - S[j][b.y];
      if (j == 1 && h) a += (parity(spec.site(b.x)) * (*h)(b.x, mu)) * one;
      out += a * a;
    }
    return ((j == 2 ? -0.5 : 0.5) * opt.J) * out;
  }

  // -dJ sum_x [S1^2 + S3^2 - S2^2]; identical in both frames.
  FockOperator onsite(Part part) const {
    FockOperator out = zero_op(M);
    for (int x : sites(part)) out += S[1][x] * S[1][x] + S[3][x] * S[3][x] - S[2][x] * S[2][x];
    return (-spec.dim() * opt.J) * out;
  }

  FockOperator sbf_original(Part part) const {
    FockOperator out = zero_op(M);
    for (int x : sites(part)) out += double(parity(spec.site(x))) * S[1][x];
    return -opt.B * out;
  }

  FockOperator sbf_hat(Part part) const {
    FockOperator out = zero_op(M);
    for (int x : sites(part)) out += S[1][x];
    return -opt.B * out;
  }

  void report(const std::string& id, double residual, const std::string& note = {}) {
    CheckReport r = residual_report(id, lattice, params, residual, opt.tolerance);
    r.note = note;
    out.push_back(std::move(r));
  }
};

double max_of(std::initializer_list<double> v) { return *std::max_element(v.begin(), v.end()); }

void check_actions(Workbench& w) {
  const int M = w.M;
  double du = 0.0;
  for (const FockUnitary* u : {&w.u2, &w.ua, &w.uodd, &w.u1, &w.v})
    du = std::max(du, u->unitarity_defect());
  du = std::max(du, FockUnitary(w.theta.permutation(), "P_r").unitarity_defect());
  w.report("unitarity", du, "U2, U(alpha1), Uodd, their products and P_r");

  double r_u2 = 0.0, r_a1 = 0.0, r_odd = 0.0, r_maj = 0.0;
  for (int m = 0; m < M; ++m) {
    const FockOperator c = annihilator(M, m);
    const int x = m / 4;
    const Site s = w.spec.site(x);
    const cplx phase = w.spec.dim() >= 2 ? std::exp(I * (std::numbers::pi / 2.0) * double(s.x[1])) : 1.0;
    r_u2 = std::max(r_u2, residual(w.u2.conjugate(c), phase * c));

    const int partner = m ^ 1;  // other orbital, same site and spin
    const FockOperator expect_a1 = w.split().in_plus[x] ? annihilator(M, partner) : c;
    r_a1 = std::max(r_a1, residual(w.ua.conjugate(c), expect_a1));

    const bool odd = parity(s) < 0;
    r_odd = std::max(r_odd, residual(w.uodd.conjugate(c), odd ? creator(M, m) : c));
    const FockOperator xi = majorana(M, m, MajoranaKind::Xi);
    const FockOperator eta = majorana(M, m, MajoranaKind::Eta);
    r_maj = std::max(r_maj, max_of({residual(w.uodd.conjugate(xi), xi),
                                    residual(w.uodd.conjugate(eta), odd ? -eta : eta)}));
  }
  w.report("u2-phase-action", r_u2);
  w.report("alpha1-action", r_a1);
  w.report("odd-action", r_odd);
  w.report("odd-majorana-action", r_maj);

  double r_spin = 0.0, r_par = 0.0;
  for (int x = 0; x < w.spec.num_sites(); ++x) {
    const double par = parity(w.spec.site(x));
    for (int j = 1; j <= 3; ++j) r_spin = std::max(r_spin, residual(w.u2.conjugate(w.S[j][x]), w.S[j][x]));
    r_par = std::max(r_par, max_of({residual(w.uodd.conjugate(w.S[1][x]), par * w.S[1][x]),
                                    residual(w.uodd.conjugate(w.S[3][x]), par * w.S[3][x]),
                                    residual(w.uodd.conjugate(w.S[2][x]), w.S[2][x])}));
  }
  w.report("u2-spin-invariance", r_spin);
  w.report("odd-spin-parity", r_par);
}

void check_reflection_algebra(Workbench& w) {
  const int M = w.M;
  double r = 0.0;
  for (int m = 0; m < M; ++m) {
    const int rm = w.theta.reflect_mode(m);
    r = std::max(r, residual(w.theta.apply(annihilator(M, m)), annihilator(M, rm)));
    r = std::max(r, residual(w.theta.apply(creator(M, m)), creator(M, rm)));
  }
  std::mt19937_64 rng(w.opt.seed);
  std::uniform_int_distribution<int> pick(0, M - 1);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 4; ++trial) {
    const cplx z(gauss(rng), gauss(rng));
    const FockOperator a = creator(M, pick(rng)) * annihilator(M, pick(rng)) + z * annihilator(M, pick(rng));
    const FockOperator b = annihilator(M, pick(rng)) * creator(M, pick(rng)) * creator(M, pick(rng)) +
                           z * creator(M, pick(rng));
    const FockOperator ta = w.theta.apply(a);
    const FockOperator tb = w.theta.apply(b);
    r = std::max(r, residual(w.theta.apply(a * b), ta * tb));
    r = std::max(r, residual(w.theta.apply(a.adjoint()), ta.adjoint()));
    r = std::max(r, residual(w.theta.apply(z * a), std::conj(z) * ta));
    r = std::max(r, residual(w.theta.apply(ta), a));
  }
  w.report("reflection-algebra", r, "mode action, multiplicativity, adjoint, antilinearity, involution");
}

void check_kinetic(Workbench& w, FockOperator& hat_sum_check) {
  const int d = w.spec.dim();
  double r41 = 0.0, r416 = 0.0, r417 = 0.0, r417rp = 0.0, r_bulk = 0.0, r_dir[4] = {0, 0, 0, 0};
  double r_refl = 0.0;
  for (int spin = 0; spin < 2; ++spin) {
    // Transformed kinetic form after U2, direction by direction.
    FockOperator lhs = zero_op(w.M), rhs = zero_op(w.M);
    for (int mu = 1; mu <= d; ++mu) {
      std::vector<Bond> all;
      for (Part p : {Part::Plus, Part::Minus, Part::Boundary}) {
        auto b = w.bonds(mu, p);
        all.insert(all.end(), b.begin(), b.end());
      }
      lhs += w.kinetic_original(all, mu, spin);
      rhs += w.kinetic_tilde(all, mu, spin);
    }
    r41 = std::max(r41, residual(w.u2.conjugate(lhs), rhs));

    // Boundary bonds through the plane.
    const auto bnd = w.bonds(1, Part::Boundary);
    const FockOperator h0_tilde = w.u2.conjugate(w.kinetic_original(bnd, 1, spin));
    r416 = std::max(r416, residual(w.ua.conjugate(h0_tilde), w.boundary_majorana(spin, 1.0)));
    const FockOperator h0_hat = w.u1.conjugate(h0_tilde);
    r417 = std::max(r417, residual(h0_hat, w.boundary_majorana(spin, -1.0)));
    r417rp = std::max(r417rp, residual(h0_hat, w.boundary_rp_form(spin)));
    hat_sum_check += h0_hat;

    // Bulk bonds in each half.
    for (int mu = 1; mu <= d; ++mu) {
      FockOperator hat[2];
      for (Part p : {Part::Plus, Part::Minus}) {
        const auto bs = w.bonds(mu, p);
        const FockOperator h = w.v.conjugate(w.kinetic_original(bs, mu, spin));
        const double res = residual(h, w.kinetic_hat(bs, mu, spin, p));
        if (mu == 1) r_bulk = std::max(r_bulk, res);
        else r_dir[mu] = std::max(r_dir[mu], res);
        hat[p == Part::Plus ? 0 : 1] = h;
        hat_sum_check += h;
      }
      r_refl = std::max(r_refl, residual(w.theta.apply(hat[1]), hat[0]));
    }

    // Directions beyond d are checked on single bonds inside each half,
    // borrowing direction-1 neighbours: the identity is local to the bond.
    for (int mu = d + 1; mu <= 3; ++mu)
      for (Part p : {Part::Plus, Part::Minus}) {
        const auto bs = w.bonds(1, p);
        FockOperator tilde = mu == 2 ? w.hopping(bs, spin, pauli::alpha(2), -w.opt.t, 1.0, Workbench::original_sign)
                                     : w.hopping(bs, spin, pauli::alpha(3), I * w.opt.t, -1.0,
                                                 Workbench::original_sign);
        FockOperator expect = mu == 2
                                  ? w.pairing(bs, spin, pauli::alpha(2), (p == Part::Plus ? 1.0 : -1.0) * w.opt.t,
                                              1.0, Workbench::original_sign)
                                  : w.pairing(bs, spin, pauli::alpha(3),
                                              -(p == Part::Plus ? 1.0 : -1.0) * I * w.opt.t, -1.0,
                                              Workbench::original_sign);
        r_dir[mu] = std::max(r_dir[mu], residual(w.u1.conjugate(tilde), expect));
      }
  }
  w.report("kinetic-u2-form", r41);
  w.report("kinetic-boundary-majorana", r416);
  w.report("kinetic-boundary-rp-form", max_of({r417, r417rp}), "xi xi - eta eta form and xi theta(xi) + eta theta(eta) form");
  w.report("kinetic-bulk-pair-form", r_bulk);
  w.report("kinetic-dir2-pair-form", r_dir[2], d >= 2 ? "full direction-2 sums" : "bond-level, borrowed bonds");
  w.report("kinetic-dir3-pair-form", r_dir[3], d >= 3 ? "full direction-3 sums" : "bond-level, borrowed bonds");
  w.report("reflection-kinetic", r_refl);
}

void check_spin_images(Workbench& w) {
  const int M = w.M;
  double r1 = 0.0, r1a = 0.0, r2 = 0.0, r3 = 0.0, imag = 0.0;
  for (int x = 0; x < w.spec.num_sites(); ++x) {
    const double par = parity(w.spec.site(x));
    // Direct constructions: S^(1)hat = Psi_up^dag Psi_dn + h.c. and so on.
    Eigen::MatrixXcd s1 = Eigen::MatrixXcd::Zero(M, M), s2 = s1, s3 = s1;
    for (int orb = 1; orb <= 2; ++orb) {
      const int up = mode_number(x, 0, orb), dn = mode_number(x, 1, orb);
      s1(up, dn) += 1.0;
      s1(dn, up) += 1.0;
      s2(up, dn) += -I;
      s2(dn, up) += I;
      s3(up, up) += 1.0;
      s3(dn, dn) -= 1.0;
    }
    const FockOperator h1 = bilinear(M, s1), h2 = bilinear(M, s2), h3 = bilinear(M, s3);
    const FockOperator t1 = w.u2.conjugate(w.S[1][x]);
    const FockOperator t2 = w.u2.conjugate(w.S[2][x]);
    const FockOperator t3 = w.u2.conjugate(w.S[3][x]);
    r1a = std::max(r1a, max_of({residual(w.ua.conjugate(t1), h1), residual(w.ua.conjugate(t3), h3)}));
    r1 = std::max(r1, residual(w.u1.conjugate(t1), par * h1));
    r2 = std::max(r2, max_of({residual(w.ua.conjugate(t2), h2), residual(w.u1.conjugate(t2), h2)}));
    r3 = std::max(r3, residual(w.u1.conjugate(t3), par * h3));
    double re = 0.0;
    for (int k = 0; k < h2.matrix().outerSize(); ++k)
      for (SpMat::InnerIterator it(h2.matrix(), k); it; ++it) re = std::max(re, std::abs(it.value().real()));
    imag = std::max(imag, re);
  }
  w.report("alpha1-spin-invariance", r1a);
  w.report("spin1-image", r1);
  w.report("spin2-image", r2);
  w.report("spin2-imaginary", imag, "largest real part of S^(2)hat in the occupation basis");
  w.report("spin3-image", r3);
}

void check_interaction(Workbench& w, const FieldConfig& h, FockOperator& hat_sum_check) {
  const int d = w.spec.dim();
  double r_sq[4] = {0, 0, 0, 0};
  double r_refl = 0.0;
  for (int j = 1; j <= 3; ++j)
    for (int mu = 1; mu <= d; ++mu) {
      FockOperator zero_field[2];
      for (Part p : {Part::Plus, Part::Minus, Part::Boundary}) {
        const auto bs = w.bonds(mu, p);
        if (bs.empty()) continue;
        const FockOperator hat = w.v.conjugate(w.square_original(bs, j, mu, &h));
        r_sq[j] = std::max(r_sq[j], residual(hat, w.square_hat(bs, j, mu, &h)));
        hat_sum_check += hat;
        if (p != Part::Boundary)
          zero_field[p == Part::Plus ? 0 : 1] = w.v.conjugate(w.square_original(bs, j, mu, nullptr));
      }
      if (zero_field[0].modes() && zero_field[1].modes())
        r_refl = std::max(r_refl, residual(w.theta.apply(zero_field[1]), zero_field[0]));
    }
  w.report("spin1-square-form", r_sq[1], "random field on every bond");
  w.report("spin2-square-form", r_sq[2]);
  w.report("spin3-square-form", r_sq[3]);
  w.report("reflection-spin-squares", r_refl, "zero field");

  FockOperator on[2], sbf[2];
  double r_on = 0.0;
  for (Part p : {Part::Plus, Part::Minus}) {
    const int k = p == Part::Plus ? 0 : 1;
    on[k] = w.v.conjugate(w.onsite(p));
    sbf[k] = w.v.conjugate(w.sbf_original(p));
    r_on = std::max(r_on, max_of({residual(on[k], w.onsite(p)), residual(sbf[k], w.sbf_hat(p))}));
    hat_sum_check += on[k] + sbf[k];
  }
  w.report("reflection-onsite", max_of({r_on, residual(w.theta.apply(on[1]), on[0])}),
           "image of the on-site squares and its reflection");
  w.report("reflection-sbf", max_of({r_on, residual(w.theta.apply(sbf[1]), sbf[0])}));
}

// Sum of the directly constructed transformed pieces on one side (or the
// boundary), with an arbitrary field.
FockOperator direct_part(const Workbench& w, Part part, const FieldConfig& h) {
  FockOperator out = zero_op(w.M);
  for (int mu = 1; mu <= w.spec.dim(); ++mu) {
    const auto bs = w.bonds(mu, part);
    if (bs.empty()) continue;
    for (int spin = 0; spin < 2; ++spin)
      out += part == Part::Boundary ? w.boundary_majorana(spin, -1.0) : w.kinetic_hat(bs, mu, spin, part);
    for (int j = 1; j <= 3; ++j) out += w.square_hat(bs, j, mu, &h);
  }
  if (part != Part::Boundary) out += w.onsite(part) + w.sbf_hat(part);
  return out;
}

// Original-frame Hamiltonian restricted to one part, conjugated.
FockOperator conjugated_part(const Workbench& w, Part part, const FieldConfig& h) {
  FockOperator out = zero_op(w.M);
  for (int mu = 1; mu <= w.spec.dim(); ++mu) {
    const auto bs = w.bonds(mu, part);
    if (bs.empty()) continue;
    for (int spin = 0; spin < 2; ++spin) out += w.kinetic_original(bs, mu, spin);
    for (int j = 1; j <= 3; ++j) out += w.square_original(bs, j, mu, &h);
  }
  if (part != Part::Boundary) out += w.onsite(part) + w.sbf_original(part);
  return w.v.conjugate(out);
}

void check_decomposition(Workbench& w, const FieldConfig& h, const FockOperator& hat_sum_check) {
  ModelParams p;
  p.t = w.opt.t;
  p.J = w.opt.J;
  p.B = w.opt.B;
  const FockOperator hhat = w.v.conjugate(build_full(w.spec, p, &h));
  const FockOperator sum =
      direct_part(w, Part::Plus, h) + direct_part(w, Part::Minus, h) + direct_part(w, Part::Boundary, h);
  w.report("decomposition",
           max_of({residual(sum, hhat), residual(hat_sum_check, hhat)}),
           "direct pieces and conjugated pieces both summed against the conjugated Hamiltonian");

  const FieldConfig rh = reflect_field(w.spec, w.split(), h);
  const FockOperator plus = conjugated_part(w, Part::Plus, h);
  const FockOperator minus = conjugated_part(w, Part::Minus, rh);
  w.report("decomposition-reflection", residual(w.theta.apply(plus), minus),
           "theta(H+(B, h)) against H-(B, theta h)");
}

}  // namespace

std::vector<CheckReport> verify_reflection_identities(const LatticeSpec& spec, const TransformCheckOptions& opt) {
  check_mode_cap(spec.num_modes());
  Workbench w(spec, opt);
  std::mt19937_64 rng(opt.seed);
  const FieldConfig h = FieldConfig::random(spec, rng, opt.field_amplitude);

  check_actions(w);
  check_reflection_algebra(w);
  check_spin_images(w);
  FockOperator hat_sum = zero_op(w.M);
  check_kinetic(w, hat_sum);
  check_interaction(w, h, hat_sum);
  check_decomposition(w, h, hat_sum);
  return std::move(w.out);
}

std::vector<CheckReport> verify_rotation_identities(const LatticeSpec& spec, const TransformCheckOptions& opt) {
  std::vector<CheckReport> out;
  const json params = {{"t", opt.t}, {"J", opt.J}, {"B", opt.B}};
  const auto& a1 = pauli::alpha(1);
  const auto& a2 = pauli::alpha(2);
  const auto& a3 = pauli::alpha(3);
  auto dist = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return (a - b).cwiseAbs().maxCoeff(); };

  double r51 = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 16.0;
    const Eigen::Matrix2cd u = orbital_rotation(th);
    r51 = std::max(r51, dist(u.adjoint() * a1 * u, a1 * std::cos(th) + a2 * std::sin(th)));
    r51 = std::max(r51, dist(u.adjoint() * a2 * u, a2 * std::cos(th) - a1 * std::sin(th)));
    r51 = std::max(r51, dist(u.adjoint() * a3 * u, a3));
  }
  out.push_back(residual_report("rotation-alpha-relations", "2x2", params, r51, opt.tolerance));

  const Eigen::Matrix2cd q = orbital_rotation(-std::numbers::pi / 2.0);
  out.push_back(residual_report("rotation-alpha1", "2x2", params, dist(q.adjoint() * a1 * q, -a2), opt.tolerance));
  out.push_back(residual_report("rotation-alpha2", "2x2", params, dist(q.adjoint() * a2 * q, a1), opt.tolerance));
  out.push_back(residual_report("rotation-alpha3", "2x2", params, dist(q.adjoint() * a3 * q, a3), opt.tolerance));

  // Fock level: conjugating the whole Hamiltonian only replaces the hopping
  // matrices, alpha_1 -> -alpha_2 and alpha_2 -> alpha_1.
  check_mode_cap(spec.num_modes());
  const OrbitalRotation rot = build_u3(spec, -std::numbers::pi / 2.0);
  ModelParams p;
  p.t = opt.t;
  p.J = opt.J;
  p.B = opt.B;
  const FockOperator h = build_full(spec, p);
  const int M = spec.num_modes();
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(M, M);
  const Eigen::Matrix2cd mats[3] = {-a2, a1, a3};
  for (int mu = 1; mu <= spec.dim(); ++mu)
    for (int x = 0; x < spec.num_sites(); ++x) {
      const Neighbor nb = neighbor(spec, spec.site(x), mu);
      const int y = spec.index(nb.site);
      const cplx amp = I * opt.t * (nb.crossed ? -1.0 : 1.0);
      for (int spin = 0; spin < 2; ++spin)
        for (int i = 1; i <= 2; ++i)
          for (int j = 1; j <= 2; ++j) {
            T(mode_number(x, spin, i), mode_number(y, spin, j)) += amp * mats[mu - 1](i - 1, j - 1);
            T(mode_number(y, spin, i), mode_number(x, spin, j)) -= amp * mats[mu - 1](i - 1, j - 1);
          }
    }
  const FockOperator expect = h - build_kinetic(spec, opt.t) + bilinear(M, T);
  CheckReport r = residual_report("rotation-fock-kinetic", spec.describe(), params,
                                  max_of({residual(rot.lift.conjugate(h), expect), rot.lift.unitarity_defect()}),
                                  opt.tolerance);
  r.note = "U3(-pi/2) conjugation of the full Hamiltonian";
  out.push_back(std::move(r));
  return out;
}

}  // namespace wafm
