#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wafm/fock.hpp"
#include "wafm/model.hpp"

using namespace wafm;

namespace {

const cplx kI(0.0, 1.0);

Eigen::VectorXd dense_spectrum(const FockOperator& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(a.matrix()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double norm_inf(const FockOperator& a) { return a.max_abs(); }

// One-site translation along e1 as a mode permutation.
Eigen::MatrixXcd translation(const LatticeSpec& spec) {
  const int M = spec.num_modes();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(M, M);
  for (int x = 0; x < spec.num_sites(); ++x) {
    const int y = spec.index(neighbor(spec, spec.site(x), 1).site);
    for (int k = 0; k < 4; ++k) P(4 * y + k, 4 * x + k) = 1.0;
  }
  return P;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("pauli algebra") {
    const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
    for (int i = 1; i <= 3; ++i) {
      CHECK((pauli::alpha(i) - pauli::alpha(i).adjoint()).norm() == 0.0);
      CHECK((pauli::alpha(i) * pauli::alpha(i) - one).norm() == 0.0);
      for (int j = 1; j <= 3; ++j) {
        const Eigen::Matrix2cd ac = pauli::alpha(i) * pauli::alpha(j) + pauli::alpha(j) * pauli::alpha(i);
        CHECK((ac - (i == j ? 2.0 : 0.0) * one).norm() == 0.0);
      }
      CHECK((pauli::tau(i) - pauli::alpha(i)).norm() == 0.0);
    }
    CHECK((pauli::tau(1) * pauli::tau(2) - kI * pauli::tau(3)).norm() == 0.0);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS(validate(ModelParams{0.0, 0.0, 0.0, 1.0}));
    CHECK_THROWS(validate(ModelParams{0.0, 1.0, 0.0, -1.0}));
    CHECK_NOTHROW(validate(ModelParams{-0.3, 1.0, 0.5, 2.0}));
  }

  TEST_CASE("zero couplings give zero operators") {
    const LatticeSpec s(1, {1});
    CHECK(build_kinetic(s, 0.0).max_abs() == 0.0);
    CHECK(build_sbf(s, 0.0).max_abs() == 0.0);
    const FockOperator heis = build_full(s, ModelParams{0.0, 1.3, 0.0, 1.0});
    CHECK(residual(heis, build_interaction(s, 1.3)) == 0.0);
  }

  TEST_CASE("kinetic operator on the side-4 chain") {
    const LatticeSpec s(1, {2});
    const double t = 0.8;
    const FockOperator hk = build_kinetic(s, t);
    CHECK(residual(hk, hk.adjoint()) < 1e-14);
    CHECK(std::abs(hk.matrix().diagonal().sum()) < 1e-12);
    CHECK(residual(commutator(hk, total_number(16)), zero_op(16)) < 1e-12);

    // Independent spectrum: -2t sin k alpha_1 per antiperiodic k, times two spins.
    std::vector<double> expected;
    for (double k : {-3 * std::numbers::pi / 4, -std::numbers::pi / 4, std::numbers::pi / 4, 3 * std::numbers::pi / 4})
      for (int spin = 0; spin < 2; ++spin) {
        expected.push_back(2 * t * std::sin(k));
        expected.push_back(-2 * t * std::sin(k));
      }
    std::sort(expected.begin(), expected.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kinetic_matrix(s, t));
    for (int i = 0; i < 16; ++i) CHECK(std::abs(es.eigenvalues()(i) - expected[i]) < 1e-13);
  }

  TEST_CASE("one-body kinetic matrix on several lattices is hermitian and antiperiodic") {
    for (const LatticeSpec& s : {LatticeSpec(2, {1, 2}), LatticeSpec(3, {1, 1, 1})}) {
      const Eigen::MatrixXcd k = kinetic_matrix(s, 1.0);
      CHECK((k - k.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
      // Antiperiodic plane waves: eigenvalues +-2 sqrt(sum sin^2 k_mu).
      std::vector<double> expected;
      const int n = s.num_sites();
      for (int i = 0; i < n; ++i) {
        const Site x = s.site(i);
        double sum = 0.0;
        for (int mu = 1; mu <= s.dim(); ++mu) {
          const double k_mu = std::numbers::pi * (2 * (x.x[mu - 1] + s.half_side(mu) - 1) + 1) / s.side(mu);
          sum += std::sin(k_mu) * std::sin(k_mu);
        }
        for (int spin = 0; spin < 2; ++spin) {
          expected.push_back(2 * std::sqrt(sum));
          expected.push_back(-2 * std::sqrt(sum));
        }
      }
      std::sort(expected.begin(), expected.end());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
      for (int i = 0; i < 4 * n; ++i) CHECK(std::abs(es.eigenvalues()(i) - expected[i]) < 1e-12);
    }
  }

  TEST_CASE("spin operators") {
    const LatticeSpec s(1, {1});
    const int M = s.num_modes();
    for (int x = 0; x < 2; ++x) {
      const FockOperator S1 = spin_operator(s, x, 1), S2 = spin_operator(s, x, 2), S3 = spin_operator(s, x, 3);
      CHECK(residual(commutator(S1, S2), 2.0 * kI * S3) < 1e-14);
      CHECK(residual(commutator(S2, S3), 2.0 * kI * S1) < 1e-14);
      CHECK(residual(commutator(S3, S1), 2.0 * kI * S2) < 1e-14);
      for (int j = 1; j <= 3; ++j) {
        const FockOperator S = spin_operator(s, x, j);
        CHECK(S.is_hermitian());
        const Eigen::VectorXd ev = dense_spectrum(S);
        for (int i = 0; i < ev.size(); ++i) {
          CHECK(std::abs(ev(i) - std::round(ev(i))) < 1e-12);
          CHECK(std::abs(ev(i)) <= 2.0 + 1e-12);
        }
        CHECK(std::abs(expectation(S, basis_state(M, 0))) == 0.0);
        for (int k = 1; k <= 3; ++k) CHECK(residual(commutator(S, spin_operator(s, 1 - x, k)), zero_op(M)) < 1e-14);
      }
    }
    // Both orbitals of site 0 with spin up occupied.
    const auto up = basis_state(M, 0b0011);
    const auto image = Eigen::VectorXcd(spin_operator(s, 0, 3).matrix() * up);
    CHECK((image - 2.0 * up).norm() < 1e-14);
  }

  TEST_CASE("interaction: su2, two-site form, rewrite identity") {
    const LatticeSpec two(1, {1});
    const double J = 1.3;
    const FockOperator hint = build_interaction(two, J);
    CHECK(hint.is_hermitian());
    for (int a = 1; a <= 3; ++a)
      CHECK(norm_inf(commutator(hint, total_spin(two, a))) < 1e-12 * norm_inf(hint));
    FockOperator dot = zero_op(8);
    for (int j = 1; j <= 3; ++j) dot += spin_operator(two, 0, j) * spin_operator(two, 1, j);
    CHECK(residual(hint, (2.0 * J) * dot) < 1e-13);

    const FieldConfig zero(two);
    CHECK(residual(build_interaction_h(two, J, zero), hint) < 1e-10 * norm_inf(hint));

    const LatticeSpec chain(1, {2});
    const FockOperator h4 = build_interaction(chain, J);
    CHECK(residual(build_interaction_h(chain, J, FieldConfig(chain)), h4) < 1e-10 * norm_inf(h4));
  }

  TEST_CASE("full hamiltonian is su2 invariant and number conserving") {
    const LatticeSpec s(1, {1});
    const FockOperator h = build_full(s, ModelParams{0.7, 1.1, 0.0, 1.0});
    for (int a = 1; a <= 3; ++a) CHECK(norm_inf(commutator(h, total_spin(s, a))) < 1e-12 * norm_inf(h));
    for (double B : {0.0, 0.4}) {
      std::mt19937_64 rng(3);
      const FieldConfig f = FieldConfig::random(s, rng, 1.0);
      const FockOperator hb = build_full(s, ModelParams{-0.4, 0.9, B, 1.0}, &f);
      CHECK(hb.is_hermitian());
      CHECK(residual(commutator(hb, total_number(8)), zero_op(8)) < 1e-12);
    }
  }

  TEST_CASE("uniform field adds the linear spin term and a scalar") {
    const LatticeSpec s(1, {1});
    const double J = 0.9, c = 0.6;
    const FieldConfig h = FieldConfig::uniform(s, c);
    FockOperator linear = zero_op(8);
    for (int x = 0; x < s.num_sites(); ++x) {
      const int y = s.index(neighbor(s, s.site(x), 1).site);
      linear += (J * c) * (spin_operator(s, x, 1) + spin_operator(s, y, 1));
    }
    const FockOperator scalar = (0.5 * J * h.sum_of_squares()) * identity_op(8);
    CHECK(residual(build_interaction_h(s, J, h) - build_interaction(s, J), linear + scalar) < 1e-12);
  }

  TEST_CASE("field coefficients reproduce H(B, h)") {
    const LatticeSpec s(1, {1});
    const ModelParams p{0.5, 1.2, 0.3, 1.0};
    std::mt19937_64 rng(11);
    const FieldConfig h = FieldConfig::random(s, rng, 2.0);
    const auto c = field_coefficients(s, p, h);
    FockOperator rebuilt = build_full(s, ModelParams{p.t, p.J, 0.0, 1.0});
    for (int x = 0; x < s.num_sites(); ++x) rebuilt += c[x] * spin_operator(s, x, 1);
    rebuilt += (0.5 * p.J * h.sum_of_squares()) * identity_op(8);
    CHECK(residual(build_full(s, p, &h), rebuilt) < 1e-12);
  }

  TEST_CASE("staggered source and order parameter") {
    const LatticeSpec s(1, {1});
    const FockOperator o = order_parameter(s);
    CHECK(o.is_hermitian());
    CHECK(residual(o, spin_operator(s, s.index(Site{{0, 0, 0}}), 1) - spin_operator(s, s.index(Site{{1, 0, 0}}), 1)) == 0.0);
    CHECK(residual(build_sbf(s, 0.7), -0.7 * o) < 1e-15);
    CHECK(residual(commutator(o, total_number(8)), zero_op(8)) < 1e-14);
  }

  TEST_CASE("fourier spin relations") {
    const LatticeSpec s(2, {1, 1});
    const double norm = 1.0 / std::sqrt(4.0);
    const FockOperator s0 = fourier_spin(s, make_momentum(s, {0, 0, 0}));
    CHECK(residual(s0, norm * total_spin(s, 1)) < 1e-14);
    CHECK(residual(fourier_spin(s, antiferro_momentum(s)), norm * order_parameter(s)) < 1e-14);
    for (const Momentum& p : momenta(s))
      CHECK(residual(fourier_spin(s, p).adjoint(), fourier_spin(s, negate(s, p))) < 1e-14);
    Momentum bad = make_momentum(s, {0, 0, 0});
    bad.n = {7, 0, 0};
    bad.p = {0.3, 0.0, 0.0};
    CHECK_THROWS_AS(fourier_spin_matrix(s, bad), std::invalid_argument);
  }

  TEST_CASE("ground energy from blocks matches the whole space") {
    const LatticeSpec s(1, {1});
    const FockOperator h = build_full(s, ModelParams{1.0, 1.0, 0.0, 1.0});
    const double whole = dense_spectrum(h).minCoeff();
    const auto map = make_sectors(SectorLayout::total_number(8));
    double blocked = std::numeric_limits<double>::infinity();
    for (const auto& b : sector_split(h, *map)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
      blocked = std::min(blocked, es.eigenvalues().minCoeff());
    }
    CHECK(std::abs(blocked - whole) < 1e-12);
  }

  TEST_CASE("translation leaves the spectrum invariant") {
    const LatticeSpec s(1, {1});
    const double t = 0.7, J = 1.1;
    const Eigen::MatrixXcd P = translation(s);
    const Eigen::MatrixXcd k = kinetic_matrix(s, t);
    const Eigen::MatrixXcd moved = P * k * P.adjoint();
    const FockOperator h = build_kinetic(s, t) + build_interaction(s, J);
    const FockOperator h_moved = bilinear(s.num_modes(), moved) + build_interaction(s, J);
    CHECK((dense_spectrum(h) - dense_spectrum(h_moved)).cwiseAbs().maxCoeff() < 1e-12);

    // Longer chain: the twist moves to another bond, which only changes signs.
    const LatticeSpec chain(1, {3});
    const Eigen::MatrixXcd P6 = translation(chain);
    const Eigen::MatrixXcd k6 = kinetic_matrix(chain, t);
    const Eigen::MatrixXcd m6 = P6 * k6 * P6.adjoint();
    CHECK((m6.cwiseAbs() - k6.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m6 - k6).cwiseAbs().maxCoeff() > 0.1);
  }

  TEST_CASE("symmetry frame leaves spectra unchanged and makes H real") {
    const LatticeSpec s(1, {1});
    const ModelParams p{0.6, 1.0, 0.25, 1.0};
    for (int axis : {1, 3}) {
      const Frame f = symmetry_frame(s, axis);
      const FockOperator hf = build_full(s, p, nullptr, f);
      CHECK(hf.is_real());
      CHECK((dense_spectrum(hf) - dense_spectrum(build_full(s, p))).cwiseAbs().maxCoeff() < 1e-12);
      const Eigen::MatrixXcd sa(total_spin(s, axis, f).matrix());
      CHECK((sa - Eigen::MatrixXcd(sa.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);
      for (const FockOperator& eta : pair_generators(s, f)) CHECK(residual(commutator(eta, hf), zero_op(8)) < 1e-12);
    }
  }
}
