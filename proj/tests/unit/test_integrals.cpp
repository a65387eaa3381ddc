#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "wafm/integrals.hpp"

using namespace wafm;

namespace {

constexpr double kPi = std::numbers::pi;

double dispersion3(const std::array<double, 3>& p) { return 3.0 - std::cos(p[0]) - std::cos(p[1]) - std::cos(p[2]); }

struct McEstimate {
  double mean = 0.0;
  double sigma = 0.0;
};

// Zone average of 1/E_p. Uniform sampling has infinite variance at p = 0, so
// a fraction of the draws comes from a density ~ 1/|p|^2 on a small ball.
McEstimate monte_carlo_I(long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi), u01(0.0, 1.0);
  std::normal_distribution<double> g;
  const double w = 0.3, r = 1.0, cell = std::pow(2 * kPi, 3);
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    std::array<double, 3> p;
    if (u01(rng) < w) {
      std::array<double, 3> dir{g(rng), g(rng), g(rng)};
      const double n = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
      const double rad = r * u01(rng);
      for (int k = 0; k < 3; ++k) p[k] = rad * dir[k] / n;
    } else {
      p = {u(rng), u(rng), u(rng)};
    }
    const double q2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    double q = (1 - w) / cell;
    if (q2 < r * r) q += w / (4 * kPi * r * q2);
    const double v = 1.0 / (dispersion3(p) * cell * q);
    s += v;
    s2 += v * v;
  }
  const double mean = s / samples;
  return {mean, std::sqrt((s2 / samples - mean * mean) / samples)};
}

McEstimate monte_carlo_J(long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double v = 1.0 / std::sqrt(dispersion3({u(rng), u(rng), u(rng)}));
    s += v;
    s2 += v * v;
  }
  const double mean = s / samples;
  return {mean, std::sqrt((s2 / samples - mean * mean) / samples)};
}

// Direct enumeration of the finite sums, optionally with p relabeled as -p.
FiniteSums enumerate(const LatticeSpec& spec, bool negated) {
  FiniteSums out;
  const int d = spec.dim();
  for (const Momentum& m : momenta(spec)) {
    if (m == antiferro_momentum(spec)) continue;
    const Momentum p = negated ? negate(spec, m) : m;
    double e = 0.0, eq = 0.0, c = 0.0;
    for (int mu = 0; mu < d; ++mu) {
      e += 1 - std::cos(p.p[mu]);
      eq += 1 + std::cos(p.p[mu]);
      c += std::cos(p.p[mu]);
    }
    out.I += 1 / eq;
    out.J += 1 / std::sqrt(eq);
    out.K += std::sqrt(e / eq) * std::max(0.0, -c) / d;
    ++out.terms;
  }
  out.I /= spec.num_sites();
  out.J /= spec.num_sites();
  out.K /= spec.num_sites();
  return out;
}

}  // namespace

TEST_SUITE("integrals") {
  TEST_CASE("K in three dimensions") {
    const auto start = std::chrono::steady_clock::now();
    const IntegralResult k = integral_K(3, GridLevels{{64, 128, 256}, 2e-4});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(k.value >= 0.3494);
    CHECK(k.value <= 0.3502);
    CHECK(k.error <= 2e-4);
    CHECK(k.resolved);
    CHECK_FALSE(k.divergent);
    CHECK(secs <= 60.0);
    CHECK(k.dual_mismatch < 1e-12);
    CHECK(std::abs(std::sqrt(6.0) / 3.0 - k.value - 0.467) < 3e-3);
  }

  TEST_CASE("I and J in three dimensions against Monte Carlo") {
    const IntegralResult i3 = integral_I(3);
    const IntegralResult j3 = integral_J(3);
    REQUIRE_FALSE(i3.divergent);
    REQUIRE_FALSE(j3.divergent);
    const McEstimate mi = monte_carlo_I(10'000'000, 17);
    const McEstimate mj = monte_carlo_J(10'000'000, 18);
    INFO("I3 " << i3.value << " +- " << i3.error << "  mc " << mi.mean << " +- " << mi.sigma);
    INFO("J3 " << j3.value << " +- " << j3.error << "  mc " << mj.mean << " +- " << mj.sigma);
    CHECK(std::abs(i3.value - mi.mean) <= 3 * std::hypot(mi.sigma, i3.error));
    CHECK(std::abs(j3.value - mj.mean) <= 3 * std::hypot(mj.sigma, j3.error));
  }

  TEST_CASE("divergent integrals are flagged") {
    CHECK(integral_I(1).divergent);
    CHECK(integral_I(2).divergent);
    CHECK(integral_J(1).divergent);
    CHECK(integral_K(1).divergent);
    CHECK(std::isinf(integral_I(2).value));
    CHECK_FALSE(integral_J(2).divergent);
    CHECK_FALSE(integral_K(2).divergent);
    CHECK_THROWS(lattice_integral(IntegralKind::I, 4));
  }

  TEST_CASE("finite integrals are nonnegative and refine steadily") {
    for (int d = 1; d <= 3; ++d)
      for (IntegralKind kind : {IntegralKind::I, IntegralKind::J, IntegralKind::K}) {
        const IntegralResult r = lattice_integral(kind, d);
        if (r.divergent) continue;
        INFO(integral_name(kind) << " d=" << d);
        CHECK(r.value >= 0.0);
        CHECK(std::isfinite(r.error));
        CHECK(r.dual_mismatch < 1e-12);
        REQUIRE(r.level_values.size() >= 3);
        for (double v : r.level_values) CHECK(v >= 0.0);
        for (std::size_t l = 2; l < r.level_values.size(); ++l) {
          const double coarse = std::abs(r.level_values[l - 1] - r.level_values[l - 2]);
          const double fine = std::abs(r.level_values[l] - r.level_values[l - 1]);
          CHECK(fine <= 2 * coarse);
        }
      }
  }

  TEST_CASE("a too coarse grid is reported as unresolved") {
    const IntegralResult r = integral_K(3, GridLevels{{8, 16, 32}, 1e-8});
    CHECK_FALSE(r.resolved);
    CHECK(r.error > 1e-8);
  }

  TEST_CASE("finite sums on side-2 lattices by hand") {
    const FiniteSums one = finite_sums(LatticeSpec(1, {1}));
    CHECK(one.terms == 1);
    CHECK(one.I == doctest::Approx(0.25));
    CHECK(one.J == doctest::Approx(0.5 / std::sqrt(2.0)));
    CHECK(one.K == 0.0);

    const FiniteSums two = finite_sums(LatticeSpec(2, {1, 1}));
    CHECK(two.terms == 3);
    CHECK(two.I == doctest::Approx(0.3125));
    CHECK(two.J == doctest::Approx((0.5 + std::sqrt(2.0)) / 4));
    CHECK(two.K == 0.0);

    CHECK(finite_sums(LatticeSpec(3, {1, 1, 1})).terms == 7);
  }

  TEST_CASE("finite sums match enumeration and p -> -p") {
    for (const LatticeSpec& s : {LatticeSpec(3, {2, 3, 2}), LatticeSpec(2, {3, 5}), LatticeSpec(1, {7})}) {
      const FiniteSums f = finite_sums(s);
      for (bool neg : {false, true}) {
        const FiniteSums e = enumerate(s, neg);
        CHECK(f.terms == e.terms);
        CHECK(std::abs(f.I - e.I) < 1e-12);
        CHECK(std::abs(f.J - e.J) < 1e-12);
        CHECK(std::abs(f.K - e.K) < 1e-12);
      }
    }
  }

  TEST_CASE("finite K approaches the integral") {
    const double k3 = integral_K(3).value;
    double previous = std::numeric_limits<double>::infinity();
    for (int half : {4, 8, 16}) {
      const double gap = std::abs(finite_sums(LatticeSpec(3, {half, half, half})).K - k3);
      MESSAGE("side " << 2 * half << ": |K_L - K_3| = " << gap);
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(previous < 5e-3);
  }

  TEST_CASE("kinetic norm density limit") {
    CHECK(kinetic_norm_limit(1) == doctest::Approx(8.0 / kPi).epsilon(1e-4));
    CHECK(kinetic_norm_limit(1, 4096) == doctest::Approx(8.0 / kPi).epsilon(1e-6));
    const double c3 = kinetic_norm_limit(3);
    CHECK(c3 < 4 * std::sqrt(3.0));
    CHECK(c3 > 4.0);
  }

  TEST_CASE("integral checks and table") {
    for (const auto& r : integral_checks(GridLevels{{64, 128, 256}, 2e-4})) {
      INFO(r.id << " " << r.value << " " << r.note);
      CHECK(r.passed);
    }
    const CsvTable t = integral_table({integral_K(3), integral_I(1)});
    CHECK(t.header.front() == "constant");
    CHECK_FALSE(t.rows.empty());
  }
}
