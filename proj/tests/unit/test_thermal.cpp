#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "wafm/thermal.hpp"
#include "wafm/thermal_checks.hpp"

using namespace wafm;

namespace {

const LatticeSpec kTwoSite(1, {1});
const ModelParams kParams{0.5, 1.0, 0.0, 2.0};

const ThermalContext& two_site_context() {
  static const ThermalContext ctx(kTwoSite, 1);
  return ctx;
}

const ThermalContext& chain_context() {
  static const ThermalContext ctx(LatticeSpec(1, {2}), 1);
  return ctx;
}

const ThermalContext& square_context() {
  static const ThermalContext ctx(LatticeSpec(2, {1, 1}), 1);
  return ctx;
}

void expect_passed(const std::vector<CheckReport>& reports) {
  REQUIRE_FALSE(reports.empty());
  for (const auto& r : reports) {
    INFO(r.id << " on " << r.lattice << " value " << r.value << " " << r.note);
    CHECK(r.passed);
  }
}

// Kronecker product, first factor outermost.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Spin operators of a single four-mode site from hand-written Jordan-Wigner
// matrices: bit m is mode m = 2 spin + orbital - 1.
std::array<Eigen::MatrixXcd, 3> site_spins() {
  Eigen::Matrix2cd lower, z, one;
  lower << 0, 1, 0, 0;
  z << 1, 0, 0, -1;
  one.setIdentity();
  std::array<Eigen::MatrixXcd, 4> c;
  for (int m = 0; m < 4; ++m) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
    for (int k = 3; k >= 0; --k) op = kron(op, k == m ? Eigen::MatrixXcd(lower) : k < m ? Eigen::MatrixXcd(z) : Eigen::MatrixXcd(one));
    c[m] = op;
  }
  std::array<Eigen::MatrixXcd, 3> s;
  for (int j = 1; j <= 3; ++j) {
    s[j - 1] = Eigen::MatrixXcd::Zero(16, 16);
    for (int orb = 0; orb < 2; ++orb)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          s[j - 1] += pauli::tau(j)(a, b) * c[2 * a + orb].adjoint() * c[2 * b + orb];
  }
  return s;
}

}  // namespace

TEST_SUITE("thermal") {
  TEST_CASE("number operator spectrum is the sector labels") {
    const auto map = make_sectors(SectorLayout::total_number(8));
    auto basis = std::make_shared<const ReducedBasis<cplx>>(full_basis<cplx>(map));
    const auto sd = spectral<cplx>(total_number(8), basis);
    for (int b = 0; b < sd.basis().num_blocks(); ++b) {
      const int k = map->keys[sd.basis().sector[b]][0];
      for (Eigen::Index i = 0; i < sd.blocks()[b].energies.size(); ++i) CHECK(sd.blocks()[b].energies(i) == doctest::Approx(k));
    }
  }

  TEST_CASE("identity, energy and order parameter") {
    const ThermalContext& ctx = two_site_context();
    const ModelParams p{0.5, 1.0, 0.3, 1.0};
    const auto sd = ctx.solve(p);
    const FockOperator h = build_full(kTwoSite, p, nullptr, ctx.frame());
    const auto one = to_eigenbasis(sd, identity_op(8));
    const auto eh = to_eigenbasis(sd, h);
    for (double beta : {0.3, 1.0, 4.0}) {
      CHECK(std::abs(thermal_expectation(sd, one, beta) - 1.0) < 1e-13);
      const double step = 1e-4;
      const double fd = -(sd.log_partition(beta + step) - sd.log_partition(beta - step)) / (2 * step);
      const double e = thermal_expectation(sd, eh, beta).real();
      CHECK(std::abs(fd - e) < 1e-6 * std::max(1.0, std::abs(e)));
      CHECK(std::abs(sd.energy(beta) - e) < 1e-12);
    }
    const auto sd0 = ctx.solve(ModelParams{0.5, 1.0, 0.0, 1.0});
    const auto o = to_eigenbasis(sd0, order_parameter(kTwoSite, ctx.frame()));
    for (double beta : {0.5, 2.0}) CHECK(std::abs(thermal_expectation(sd0, o, beta)) < 1e-10);
  }

  TEST_CASE("ground state values") {
    const ThermalContext& ctx = two_site_context();
    const auto sd = ctx.solve(kParams);
    const FockOperator h = build_full(kTwoSite, kParams, nullptr, ctx.frame());
    CHECK(std::abs(ground_expectation(sd, to_eigenbasis(sd, h)).real() - sd.min_energy()) < 1e-12);
    // N does not commute with the pair generators, so it needs the unreduced basis.
    const auto map = make_sectors(SectorLayout::total_number(8));
    auto full = std::make_shared<const ReducedBasis<cplx>>(full_basis<cplx>(map));
    const auto sdf = spectral<cplx>(build_full(kTwoSite, kParams), full);
    CHECK(std::abs(sdf.min_energy() - sd.min_energy()) < 1e-12);
    const double n = ground_expectation(sdf, to_eigenbasis(sdf, total_number(8))).real();
    CHECK(std::abs(n - std::round(n)) < 1e-10);
  }

  TEST_CASE("large beta approaches the ground state on the side-4 chain") {
    const ThermalContext& ctx = chain_context();
    const LatticeSpec& s = ctx.spec();
    const auto sd = ctx.solve(kParams);
    const FockOperator h = build_full(s, kParams, nullptr, ctx.frame());
    const FockOperator bond = spin_operator(s, 0, 1, ctx.frame()) * spin_operator(s, 1, 1, ctx.frame());
    for (const FockOperator* a : {&h, &bond}) {
      const auto ea = to_eigenbasis(sd, *a);
      CHECK(std::abs(thermal_expectation(sd, ea, 200.0) - ground_expectation(sd, ea)) < 1e-6);
    }
  }

  TEST_CASE("duhamel function") {
    const ThermalContext& ctx = two_site_context();
    const auto sd = ctx.solve(kParams);
    const double beta = kParams.beta;
    const auto one = to_eigenbasis(sd, identity_op(8));
    CHECK(std::abs(duhamel(sd, one, one, beta) - 1.0) < 1e-13);

    // Operators commuting with H collapse to the plain product.
    const FockOperator h = build_full(kTwoSite, kParams, nullptr, ctx.frame());
    const auto eh = to_eigenbasis(sd, h);
    const auto sz = to_eigenbasis(sd, total_spin(kTwoSite, 1, ctx.frame()));
    CHECK(std::abs(duhamel(sd, eh, eh, beta) - thermal_product(sd, eh, eh, beta)) < 1e-11);
    CHECK(std::abs(duhamel(sd, eh, sz, beta) - thermal_product(sd, eh, sz, beta)) < 1e-11);

    const auto a = to_eigenbasis(sd, spin_operator(kTwoSite, 0, 1, ctx.frame()));
    const auto b = to_eigenbasis(sd, spin_operator(kTwoSite, 0, 1, ctx.frame()) * spin_operator(kTwoSite, 1, 1, ctx.frame()));
    CHECK(std::abs(duhamel(sd, a, b, beta) - duhamel(sd, b, a, beta)) < 1e-12);
    const cplx daa = duhamel(sd, a, a, beta);
    CHECK(std::abs(daa.imag()) < 1e-13);
    CHECK(daa.real() >= 0.0);
    CHECK(daa.real() <= thermal_product(sd, a, a, beta).real() + 1e-12);

    CHECK(duhamel_kernel(0.0, 0.0, 3.0) == doctest::Approx(1.0));
    CHECK(duhamel_kernel(-0.2, -0.5, 2.0) == doctest::Approx(duhamel_kernel(-0.5, -0.2, 2.0)));
    CHECK(duhamel_kernel(-1.0, -1.0 + 1e-12, 2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-9));

    CHECK(duhamel_quadrature_check(kTwoSite, kParams, 3, 7).passed);
  }

  TEST_CASE("sector traces against the whole space") {
    CHECK(sector_trace_check(kTwoSite, kParams, {0.5, 1.0, 5.0}).passed);
    CHECK(sector_trace_check(kTwoSite, ModelParams{-0.8, 0.6, 0.4, 1.0}, {0.2, 3.0}).passed);
  }

  TEST_CASE("two-site heisenberg against a hand-built oracle") {
    const double J = 0.9;
    const auto s = site_spins();
    const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(16, 16);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(256, 256);
    for (int j = 0; j < 3; ++j) h += 2 * J * kron(s[j], one) * kron(one, s[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd oracle = es.eigenvalues();

    const ModelParams p{0.0, J, 0.0, 1.0};
    const auto map = make_sectors(SectorLayout::total_number(8));
    auto basis = std::make_shared<const ReducedBasis<cplx>>(full_basis<cplx>(map));
    const auto sd = spectral<cplx>(build_full(kTwoSite, p), basis, false);
    std::vector<double> ours;
    for (const auto& blk : sd.blocks())
      for (Eigen::Index i = 0; i < blk.energies.size(); ++i) ours.push_back(blk.energies(i));
    std::sort(ours.begin(), ours.end());
    REQUIRE(ours.size() == 256);
    for (int i = 0; i < 256; ++i) CHECK(std::abs(ours[i] - oracle(i)) < 1e-12);

    const auto reduced = two_site_context().solve(p, nullptr, false);
    for (double beta : {0.5, 2.0}) {
      const double z = (-beta * oracle.array()).exp().sum();
      CHECK(std::abs(reduced.log_partition(beta) - std::log(z)) < 1e-11);
    }
  }

  TEST_CASE("gaussian domination on the two-site chain") {
    const ThermalContext& ctx = two_site_context();
    const FieldConfig zero(kTwoSite);
    for (double B : {0.0, 0.3}) {
      ModelParams p = kParams;
      p.B = B;
      const auto batch = ctx.log_partition_batch(p, {zero}, {0.5, 2.0});
      const auto sd = ctx.solve(p, nullptr, false);
      CHECK(std::abs(batch[0][0] - sd.log_partition(0.5)) < 1e-12);
      CHECK(std::abs(batch[0][1] - sd.log_partition(2.0)) < 1e-12);
    }
    DominationOptions opt;
    opt.draws = 40;
    CsvTable table;
    expect_passed(gaussian_domination(ctx, kParams, opt, &table));
    CHECK(table.rows.size() == 40 * 2 * 2);

    const auto fields = random_fields(kTwoSite, 3, 2.0, 4);
    for (const auto& f : fields) CHECK(gaussian_domination_curvature(ctx, kParams, f).passed);
    CHECK(gaussian_domination_odd_frame(kTwoSite, kParams, fields).passed);
  }

  TEST_CASE("random fields respect the range and the seed") {
    const auto a = random_fields(kTwoSite, 5, 1.5, 3);
    const auto b = random_fields(kTwoSite, 5, 1.5, 3);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (int x = 0; x < 2; ++x) {
        CHECK(a[i](x, 1) == b[i](x, 1));
        CHECK(std::abs(a[i](x, 1)) <= 1.5);
      }
  }

  TEST_CASE("infrared bound, C_p and DLS on the two-site chain") {
    const SpinObservables obs(two_site_context(), kParams);
    const auto rows = infrared_rows(obs);
    CHECK(rows.size() == obs.momenta().size() - 1);
    for (const auto& r : rows) {
      CHECK(r.lhs >= 0.0);
      CHECK(r.lhs <= r.rhs + 1e-10);
    }
    CsvTable table;
    CHECK(infrared_check(obs, 1e-10, &table).passed);
    CHECK(table.rows.size() == rows.size());
    expect_passed(double_commutator_checks(obs));
    const int k0 = obs.index_of(make_momentum(kTwoSite, {0, 0, 0}));
    CHECK(std::abs(obs.double_commutator(k0).interaction) < 1e-12);
    CHECK(std::abs(obs.double_commutator(k0).total()) < 1e-10);
    for (std::size_t k = 0; k < obs.momenta().size(); ++k) CHECK(obs.double_commutator(static_cast<int>(k)).total() >= -1e-10);
    for (const auto& r : dls_checks(obs)) CHECK((r.passed || r.kind == "skipped"));
  }

  TEST_CASE("C_p at t = 0 is the interaction value") {
    const SpinObservables obs(two_site_context(), ModelParams{0.0, 1.0, 0.0, 1.5});
    for (std::size_t k = 0; k < obs.momenta().size(); ++k) {
      const auto& dc = obs.double_commutator(static_cast<int>(k));
      CHECK(std::abs(dc.kinetic) < 1e-12);
      const double e = dispersion(kTwoSite, obs.momenta()[k]);
      const double bond = 0.5 * (obs.spin_product(0, 1) + obs.spin_product(1, 0));
      CHECK(std::abs(dc.interaction - (-16.0 * e * bond)) < 1e-10);
    }
  }

  TEST_CASE("local double commutator identities") { CHECK(local_double_commutator_check(1e-12).passed); }

  TEST_CASE("coth inequality") {
    for (double x = 0.01; x < 50; x *= 1.7) CHECK(1.0 / std::tanh(x) <= 1.0 + 1.0 / x);
  }

  TEST_CASE("sum rule and the two forms of m squared") {
    for (double beta : {0.5, 2.0}) {
      ModelParams p = kParams;
      p.beta = beta;
      const SpinObservables obs(two_site_context(), p);
      expect_passed(sum_rule_checks(obs));
      CHECK(lro_two_forms_check(obs).passed);
      const LroValues m = m_lro_squared(obs);
      CHECK(std::abs(m.from_order_parameter - m.from_fourier) < 1e-12);
      CHECK(std::abs(m.from_order_parameter - m.from_pairs) < 1e-12);
      CHECK(m.from_order_parameter >= 0.0);
      CHECK(m.from_order_parameter <= 4.0);
      const int k = obs.index_of(make_momentum(kTwoSite, {1, 0, 0}));
      CHECK(std::abs(obs.fourier_product(k) - obs.fourier_product(obs.index_of(negate(kTwoSite, obs.momenta()[k])))) < 1e-12);
    }
  }

  TEST_CASE("sum rule directions agree on the 2x2 square") {
    const SpinObservables obs(square_context(), kParams);
    const auto reports = sum_rule_checks(obs);
    expect_passed(reports);
    bool isotropy = false;
    for (const auto& r : reports) isotropy |= r.id == "sum-rule-isotropy";
    CHECK(isotropy);
    CHECK(lro_two_forms_check(obs).passed);
  }

  TEST_CASE("empty lattice: both sides of the sum rule vanish") {
    const LatticeSpec s = kTwoSite;
    const auto vac = basis_state(s.num_modes(), 0);
    double lhs = 0.0;
    for (const Momentum& p : momenta(s))
      lhs += expectation(fourier_spin(s, p) * fourier_spin(s, negate(s, p)), vac).real() * std::cos(p.p[0]);
    const double rhs = expectation(spin_operator(s, 0, 1) * spin_operator(s, 1, 1), vac).real();
    CHECK(lhs == 0.0);
    CHECK(rhs == 0.0);
  }
}
