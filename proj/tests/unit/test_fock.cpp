#include <doctest.h>

#include <random>
#include <stdexcept>

#include "wafm/fock.hpp"
#include "wafm/model.hpp"

using namespace wafm;

namespace {

double dense_residual(const FockOperator& a, const Eigen::MatrixXcd& b) {
  return (Eigen::MatrixXcd(a.matrix()) - b).cwiseAbs().maxCoeff();
}

void check_car(int modes, const std::vector<int>& which) {
  const FockOperator one = identity_op(modes);
  for (int m : which)
    for (int n : which) {
      const FockOperator cm = annihilator(modes, m);
      const FockOperator cn = annihilator(modes, n);
      const FockOperator expected = m == n ? one : zero_op(modes);
      CHECK(residual(anticommutator(cm, cn.adjoint()), expected) < 1e-14);
      CHECK(residual(anticommutator(cm, cn), zero_op(modes)) < 1e-14);
    }
}

}  // namespace

TEST_SUITE("fock") {
  TEST_CASE("single mode annihilator is the lowering matrix") {
    Eigen::MatrixXcd lower(2, 2);
    lower << 0, 1, 0, 0;
    CHECK(dense_residual(annihilator(1, 0), lower) == 0.0);
    CHECK(dense_residual(creator(1, 0), lower.adjoint()) == 0.0);
  }

  TEST_CASE("two modes: distinct annihilator and creator anticommute") {
    const FockOperator a = anticommutator(annihilator(2, 0), creator(2, 1));
    CHECK(a.dim() == 4);
    CHECK(a.max_abs() == 0.0);
  }

  TEST_CASE("canonical relations for every pair at eight modes") { check_car(8, {0, 1, 2, 3, 4, 5, 6, 7}); }

  TEST_CASE("canonical relations sampled at sixteen modes") { check_car(16, {0, 5, 15}); }

  TEST_CASE("mode cap") {
    CHECK_THROWS(annihilator(17, 0));
    CHECK_THROWS(check_mode_cap(20));
    CHECK_NOTHROW(check_mode_cap(16));
    CHECK_THROWS(annihilator(4, 4));
  }

  TEST_CASE("mode numbering is a bijection in the fixed order") {
    LatticeSpec s(2, {1, 1});
    for (int m = 0; m < s.num_modes(); ++m) CHECK(mode_number(s, mode_index(s, m)) == m);
    const ModeIndex first = mode_index(s, 0);
    CHECK(first.spin == 0);
    CHECK(first.orbital == 1);
    CHECK(mode_index(s, 1).orbital == 2);
    CHECK(mode_index(s, 2).spin == 1);
    CHECK(s.index(mode_index(s, 4).site) == 1);
  }

  TEST_CASE("majorana operators") {
    const int M = 4;
    const FockOperator one = identity_op(M);
    for (int m = 0; m < M; ++m) {
      const FockOperator xi = majorana(M, m, MajoranaKind::Xi);
      const FockOperator eta = majorana(M, m, MajoranaKind::Eta);
      CHECK(xi.is_hermitian());
      CHECK(eta.is_hermitian());
      CHECK(residual(xi * xi, one) < 1e-15);
      CHECK(residual(eta * eta, one) < 1e-15);
      CHECK(residual(0.5 * (xi + cplx(0, 1) * eta), annihilator(M, m)) < 1e-15);
      for (int n = 0; n < M; ++n) {
        const FockOperator xn = majorana(M, n, MajoranaKind::Xi);
        CHECK(residual(anticommutator(xi, xn), m == n ? 2.0 * one : zero_op(M)) < 1e-15);
        CHECK(residual(anticommutator(xi, majorana(M, n, MajoranaKind::Eta)), zero_op(M)) < 1e-15);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(xi.matrix()));
      CHECK(es.eigenvalues().cwiseAbs().minCoeff() == doctest::Approx(1.0));
      CHECK(es.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    }
  }

  TEST_CASE("number operator splits into k times identity") {
    const auto map = make_sectors(SectorLayout::total_number(8));
    const auto blocks = sector_split(total_number(8), *map);
    REQUIRE(blocks.size() == 9);
    const int binom[9] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
    for (int s = 0; s < 9; ++s) {
      CHECK(blocks[s].rows() == binom[s]);
      const int k = map->keys[s][0];
      CHECK((blocks[s] - k * Eigen::MatrixXcd::Identity(binom[s], binom[s])).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("sector split is multiplicative and rejects non-conserving operators") {
    const LatticeSpec s(1, {1});
    const FockOperator a = build_full(s, ModelParams{0.7, 1.1, 0.2, 1.0});
    const FockOperator b = build_kinetic(s, 1.3) + total_number(8);
    const auto map = make_sectors(SectorLayout::total_number(8));
    CHECK(residual(commutator(a, total_number(8)), zero_op(8)) < 1e-12);
    const auto ba = sector_split(a, *map);
    const auto bb = sector_split(b, *map);
    const auto bab = sector_split(a * b, *map);
    for (std::size_t k = 0; k < ba.size(); ++k) CHECK((ba[k] * bb[k] - bab[k]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS(sector_split(annihilator(8, 3), *map));
    CHECK(off_block_weight(creator(8, 0), *map) == doctest::Approx(1.0));
  }

  TEST_CASE("operator flags") {
    const FockOperator n = number_op(3, 1);
    CHECK(n.is_hermitian());
    CHECK(n.is_real());
    CHECK(n.is_diagonal());
    const FockOperator ah = cplx(0, 1) * n;
    CHECK(ah.is_antihermitian());
    CHECK_FALSE(ah.is_hermitian());
    CHECK_FALSE(annihilator(3, 0).is_diagonal());
  }

  TEST_CASE("bilinear and pair operators match products of ladder operators") {
    const int M = 4;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(M, M), k(M, M);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        a(i, j) = cplx(g(rng), g(rng));
        k(i, j) = cplx(g(rng), g(rng));
      }
    FockOperator ref_a = zero_op(M), ref_c = zero_op(M), ref_d = zero_op(M);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        ref_a += a(i, j) * (creator(M, i) * annihilator(M, j));
        ref_c += k(i, j) * (creator(M, i) * creator(M, j));
        ref_d += k(i, j) * (annihilator(M, i) * annihilator(M, j));
      }
    CHECK(residual(bilinear(M, a), ref_a) < 1e-13);
    CHECK(residual(pair_creation(M, k), ref_c) < 1e-13);
    CHECK(residual(pair_annihilation(M, k), ref_d) < 1e-13);
  }

  TEST_CASE("basis states and expectations") {
    const auto v = basis_state(4, 0b0101);
    CHECK(expectation(total_number(4), v).real() == doctest::Approx(2.0));
    CHECK(expectation(number_op(4, 1), v).real() == doctest::Approx(0.0));
    CHECK(expectation(number_op(4, 2), v).real() == doctest::Approx(1.0));
  }
}
