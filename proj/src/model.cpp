#include "wafm/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wafm {

namespace {

const cplx I(0.0, 1.0);

std::array<Eigen::Matrix2cd, 3> make_paulis() {
  std::array<Eigen::Matrix2cd, 3> s;
  s[0] << 0, 1, 1, 0;
  s[1] << 0, -I, I, 0;
  s[2] << 1, 0, 0, -1;
  return s;
}

const std::array<Eigen::Matrix2cd, 3>& paulis() {
  static const auto s = make_paulis();
  return s;
}

FockOperator from_one_body(const LatticeSpec& spec, const Eigen::MatrixXcd& a, const Frame& frame) {
  return bilinear(spec.num_modes(), frame.one_body(a));
}

std::vector<FockOperator> all_spins(const LatticeSpec& spec, int j, const Frame& frame) {
  std::vector<FockOperator> out;
  out.reserve(spec.num_sites());
  for (int x = 0; x < spec.num_sites(); ++x) out.push_back(spin_operator(spec, x, j, frame));
  return out;
}

}  // namespace

void validate(const ModelParams& p) {
  if (!(p.J > 0.0)) throw std::invalid_argument("J must be positive");
  if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!std::isfinite(p.t) || !std::isfinite(p.B)) throw std::invalid_argument("t and B must be finite");
}

namespace pauli {
const Eigen::Matrix2cd& alpha(int i) {
  if (i < 1 || i > 3) throw std::out_of_range("alpha index");
  return paulis()[i - 1];
}
const Eigen::Matrix2cd& tau(int j) {
  if (j < 1 || j > 3) throw std::out_of_range("tau index");
  return paulis()[j - 1];
}
}  // namespace pauli

FieldConfig::FieldConfig(const LatticeSpec& spec)
    : d_(spec.dim()), h_(static_cast<std::size_t>(spec.num_sites()) * 3, 0.0) {}

double FieldConfig::sum_of_squares() const {
  double s = 0.0;
  for (int x = 0; x < num_sites(); ++x)
    for (int mu = 1; mu <= d_; ++mu) s += (*this)(x, mu) * (*this)(x, mu);
  return s;
}

bool FieldConfig::is_zero() const { return sum_of_squares() == 0.0; }

FieldConfig FieldConfig::uniform(const LatticeSpec& spec, double value) {
  FieldConfig h(spec);
  for (int x = 0; x < spec.num_sites(); ++x)
    for (int mu = 1; mu <= spec.dim(); ++mu) h(x, mu) = value;
  return h;
}

FieldConfig FieldConfig::random(const LatticeSpec& spec, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  FieldConfig h(spec);
  for (int x = 0; x < spec.num_sites(); ++x)
    for (int mu = 1; mu <= spec.dim(); ++mu) h(x, mu) = dist(rng);
  return h;
}

Eigen::MatrixXcd Frame::one_body(const Eigen::MatrixXcd& a) const {
  if (is_identity()) return a;
  return w.adjoint() * a * w;
}

Frame symmetry_frame(const LatticeSpec& spec, int spin_axis) {
  if (spin_axis != 1 && spin_axis != 3) throw std::invalid_argument("spin axis must be 1 or 3");
  Eigen::Matrix2cd v = Eigen::Matrix2cd::Identity();
  if (spin_axis == 1) v << 1, 1, 1, -1;
  if (spin_axis == 1) v /= std::sqrt(2.0);
  const int M = spec.num_modes();
  Frame f;
  f.w = Eigen::MatrixXcd::Zero(M, M);
  for (int x = 0; x < spec.num_sites(); ++x) {
    const Site s = spec.site(x);
    const int quarter = ((s.x[0] + s.x[2]) % 4 + 4) % 4;
    const cplx phase = std::pow(I, quarter);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int orb = 1; orb <= 2; ++orb)
          f.w(mode_number(x, a, orb), mode_number(x, b, orb)) = phase * v(a, b);
  }
  return f;
}

namespace {

// Chirality class of (site, orbital); -1 when the lattice has none (d = 3).
int chirality(const LatticeSpec& spec, int site, int orbital) {
  if (spec.dim() > 2) return 0;
  const int odd = parity(spec.site(site)) < 0 ? 1 : 0;
  return (orbital - 1 + odd) % 2;
}

int num_chiralities(const LatticeSpec& spec) { return spec.dim() > 2 ? 1 : 2; }

}  // namespace

SectorLayout symmetry_layout(const LatticeSpec& spec) {
  SectorLayout l;
  l.modes = spec.num_modes();
  l.masks.assign(num_chiralities(spec), 0);
  std::uint64_t up = 0;
  for (int x = 0; x < spec.num_sites(); ++x)
    for (int orb = 1; orb <= 2; ++orb) {
      const int g = chirality(spec, x, orb);
      for (int spin = 0; spin < 2; ++spin) l.masks[g] |= std::uint64_t{1} << mode_number(x, spin, orb);
      up |= std::uint64_t{1} << mode_number(x, 0, orb);
    }
  l.masks.push_back(up);
  return l;
}

std::vector<FockOperator> pair_generators(const LatticeSpec& spec, const Frame& frame) {
  const int M = spec.num_modes();
  std::vector<FockOperator> out;
  for (int g = 0; g < num_chiralities(spec); ++g) {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(M, M);
    for (int x = 0; x < spec.num_sites(); ++x) {
      const double sign = (spec.site(x).x[1] % 2 == 0) ? 1.0 : -1.0;
      for (int orb = 1; orb <= 2; ++orb)
        if (chirality(spec, x, orb) == g) k(mode_number(x, 0, orb), mode_number(x, 1, orb)) = sign;
    }
    // c^dag_phys = c^dag_frame W^dag-row form, so K picks up W^dag on the left and conj(W) on the right.
    if (!frame.is_identity()) k = frame.w.adjoint() * k * frame.w.conjugate();
    out.push_back(pair_creation(M, k));
  }
  return out;
}

Eigen::MatrixXcd kinetic_direction_matrix(const LatticeSpec& spec, double t, int mu) {
  const int M = spec.num_modes();
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(M, M);
  const Eigen::Matrix2cd& a = pauli::alpha(mu);
  for (int xi = 0; xi < spec.num_sites(); ++xi) {
    const Neighbor nb = neighbor(spec, spec.site(xi), mu);
    const int yi = spec.index(nb.site);
    const cplx amp = I * t * (nb.crossed ? -1.0 : 1.0);
    for (int spin = 0; spin < 2; ++spin)
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
          T(mode_number(xi, spin, i), mode_number(yi, spin, j)) += amp * a(i - 1, j - 1);
          T(mode_number(yi, spin, i), mode_number(xi, spin, j)) -= amp * a(i - 1, j - 1);
        }
  }
  return T;
}

Eigen::MatrixXcd kinetic_matrix(const LatticeSpec& spec, double t) {
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(spec.num_modes(), spec.num_modes());
  for (int mu = 1; mu <= spec.dim(); ++mu) T += kinetic_direction_matrix(spec, t, mu);
  return T;
}

Eigen::MatrixXcd spin_matrix(const LatticeSpec& spec, int site, int j) {
  const int M = spec.num_modes();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(M, M);
  const Eigen::Matrix2cd& tau = pauli::tau(j);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int orb = 1; orb <= 2; ++orb)
        S(mode_number(site, a, orb), mode_number(site, b, orb)) = tau(a, b);
  return S;
}

Eigen::MatrixXcd fourier_spin_matrix(const LatticeSpec& spec, const Momentum& p) {
  if (!is_member(spec, p)) throw std::invalid_argument("momentum is not in the dual lattice");
  const int M = spec.num_modes();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(M, M);
  const double norm = 1.0 / std::sqrt(static_cast<double>(spec.num_sites()));
  for (int x = 0; x < spec.num_sites(); ++x) {
    const Site s = spec.site(x);
    double phase = 0.0;
    for (int mu = 0; mu < spec.dim(); ++mu) phase += p.p[mu] * s.x[mu];
    S += norm * std::exp(I * phase) * spin_matrix(spec, x, 1);
  }
  return S;
}

FockOperator build_kinetic(const LatticeSpec& spec, double t, const Frame& frame) {
  return from_one_body(spec, kinetic_matrix(spec, t), frame);
}

FockOperator spin_operator(const LatticeSpec& spec, int site, int j, const Frame& frame) {
  return from_one_body(spec, spin_matrix(spec, site, j), frame);
}

FockOperator total_spin(const LatticeSpec& spec, int j, const Frame& frame) {
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(spec.num_modes(), spec.num_modes());
  for (int x = 0; x < spec.num_sites(); ++x) S += spin_matrix(spec, x, j);
  return from_one_body(spec, S, frame);
}

FockOperator build_interaction(const LatticeSpec& spec, double J, const Frame& frame) {
  FockOperator H = zero_op(spec.num_modes());
  for (int j = 1; j <= 3; ++j) {
    const auto S = all_spins(spec, j, frame);
    for (int x = 0; x < spec.num_sites(); ++x)
      for (int mu = 1; mu <= spec.dim(); ++mu) {
        const int y = spec.index(neighbor(spec, spec.site(x), mu).site);
        H += J * (S[x] * S[y]);
      }
  }
  return H;
}

FockOperator build_interaction_h(const LatticeSpec& spec, double J, const FieldConfig& h,
                                 const Frame& frame) {
  const int M = spec.num_modes();
  const FockOperator one = identity_op(M);
  const auto S1 = all_spins(spec, 1, frame);
  const auto S2 = all_spins(spec, 2, frame);
  const auto S3 = all_spins(spec, 3, frame);
  FockOperator H = zero_op(M);
  for (int x = 0; x < spec.num_sites(); ++x) {
    for (int mu = 1; mu <= spec.dim(); ++mu) {
      const int y = spec.index(neighbor(spec, spec.site(x), mu).site);
      const FockOperator a = S1[x] + S1[y] + h(x, mu) * one;
      const FockOperator c = S3[x] + S3[y];
      const FockOperator b = S2[x] - S2[y];
      H += (0.5 * J) * (a * a + c * c - b * b);
    }
    H -= (spec.dim() * J) * (S1[x] * S1[x] + S3[x] * S3[x] - S2[x] * S2[x]);
  }
  return H;
}

FockOperator order_parameter(const LatticeSpec& spec, const Frame& frame) {
  Eigen::MatrixXcd O = Eigen::MatrixXcd::Zero(spec.num_modes(), spec.num_modes());
  for (int x = 0; x < spec.num_sites(); ++x)
    O += double(parity(spec.site(x))) * spin_matrix(spec, x, 1);
  return from_one_body(spec, O, frame);
}

FockOperator build_sbf(const LatticeSpec& spec, double B, const Frame& frame) {
  return -B * order_parameter(spec, frame);
}

FockOperator build_full(const LatticeSpec& spec, const ModelParams& params, const FieldConfig* h,
                        const Frame& frame) {
  FockOperator H = build_kinetic(spec, params.t, frame);
  H += h ? build_interaction_h(spec, params.J, *h, frame) : build_interaction(spec, params.J, frame);
  if (params.B != 0.0) H += build_sbf(spec, params.B, frame);
  return H;
}

FockOperator fourier_spin(const LatticeSpec& spec, const Momentum& p, const Frame& frame) {
  return from_one_body(spec, fourier_spin_matrix(spec, p), frame);
}

std::vector<double> field_coefficients(const LatticeSpec& spec, const ModelParams& params,
                                       const FieldConfig& h) {
  std::vector<double> c(spec.num_sites(), 0.0);
  for (int x = 0; x < spec.num_sites(); ++x) {
    const Site s = spec.site(x);
    for (int mu = 1; mu <= spec.dim(); ++mu)
      c[x] += params.J * (h(x, mu) + h(spec.index(previous(spec, s, mu)), mu));
    c[x] -= params.B * parity(s);
  }
  return c;
}

}  // namespace wafm
