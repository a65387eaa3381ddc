#include "wafm/lro.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wafm/thermal.hpp"

namespace wafm {

namespace {

double log_sum_exp(const Eigen::VectorXd& x) {
  const double m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

// max(sum of positive eigenvalues, -sum of negative ones) of a hermitian
// one-body matrix, which is the operator norm of its second quantization.
double many_body_norm(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::VectorXd ev = linalg::eigenvalues<cplx>(h);
  double pos = 0.0, neg = 0.0;
  for (double e : ev) (e > 0 ? pos : neg) += e;
  return std::max(pos, -neg);
}

FockOperator bond_sum(const LatticeSpec& spec, int j, const Frame& frame) {
  FockOperator out = zero_op(spec.num_modes());
  for (int x = 0; x < spec.num_sites(); ++x) {
    const int y = spec.index(neighbor(spec, spec.site(x), 1).site);
    out += spin_operator(spec, x, j, frame) * spin_operator(spec, y, j, frame);
  }
  return out;
}

// -sum p ln p over the Gibbs weights, evaluated from the probabilities
// themselves rather than from ln Z + beta E.
double gibbs_entropy(const RealSpectrum& sd, double beta) {
  const auto w = sd.weights(beta);
  const double z = sd.shifted_partition(beta);
  double s = 0.0;
  for (std::size_t b = 0; b < w.size(); ++b) {
    const double m = sd.basis().multiplicity[b];
    for (double wi : w[b]) {
      const double p = wi / z;
      if (p > 0.0) s -= m * p * std::log(p);
    }
  }
  return s;
}

}  // namespace

Eigen::VectorXcd neel_state(const LatticeSpec& spec) {
  const int M = spec.num_modes();
  check_mode_cap(M);
  Eigen::VectorXcd v = basis_state(M, 0);
  for (int x = 0; x < spec.num_sites(); ++x) {
    const int spin = parity(spec.site(x)) < 0 ? 0 : 1;
    for (int orb = 1; orb <= 2; ++orb) v = creator(M, mode_number(x, spin, orb)).matrix() * v;
  }
  return v;
}

std::vector<CheckReport> neel_checks(const LatticeSpec& spec, double t, double tol) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXcd phi = neel_state(spec);
  const int n = spec.num_sites();

  double corr = std::abs(phi.norm() - 1.0);
  corr = std::max(corr, std::abs(expectation(total_number(spec.num_modes()), phi).real() - 2.0 * n));
  int bonds = 0;
  for (int j = 1; j <= 3; ++j) {
    const double expected = j == 3 ? -4.0 : 0.0;
    std::vector<Eigen::VectorXcd> s_phi;
    for (int x = 0; x < n; ++x) s_phi.push_back(spin_operator(spec, x, j).matrix() * phi);
    for (int x = 0; x < n; ++x)
      for (int mu = 1; mu <= spec.dim(); ++mu) {
        const int y = spec.index(neighbor(spec, spec.site(x), mu).site);
        corr = std::max(corr, std::abs(s_phi[x].dot(s_phi[y]) - expected));
        if (j == 1) ++bonds;
      }
  }
  const double kin = std::abs(expectation(build_kinetic(spec, t), phi));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<CheckReport> out;
  out.push_back(residual_report("neel-correlations", spec.describe(), {{"bonds", bonds}}, corr, tol));
  out.push_back(residual_report("neel-kinetic", spec.describe(), {{"t", t}}, kin, tol));
  for (auto& r : out) r.wall_seconds = secs;
  return out;
}

PeierlsSums peierls_sums(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& family) {
  PeierlsSums s;
  s.log_trace = log_sum_exp(-linalg::eigenvalues<cplx>(a));
  Eigen::VectorXd diag(family.cols());
  for (Eigen::Index i = 0; i < family.cols(); ++i) diag(i) = family.col(i).dot(a * family.col(i)).real();
  s.log_family = log_sum_exp(-diag);
  return s;
}

CheckReport peierls_family_check(const LatticeSpec& spec, const ModelParams& params, int families,
                                 std::uint64_t seed, double tol) {
  if (spec.num_modes() > 8) throw std::invalid_argument("whole-space Peierls check needs at most 8 modes");
  validate(params);
  const Eigen::MatrixXcd a = params.beta * Eigen::MatrixXcd(build_full(spec, params).matrix());
  const Eigen::Index dim = a.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<Eigen::Index> size(1, dim);

  double worst = std::numeric_limits<double>::infinity();
  double log_trace = 0.0;
  for (int f = 0; f < families; ++f) {
    const Eigen::Index k = size(rng);
    Eigen::MatrixXcd m(dim, k);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, k);
    const PeierlsSums s = peierls_sums(a, q);
    log_trace = s.log_trace;
    worst = std::min(worst, s.log_trace - s.log_family);
  }
  json params_j = {{"t", params.t}, {"J", params.J}, {"B", params.B}, {"beta", params.beta},
                   {"family", "random"}, {"families", families}, {"seed", seed}};
  return bound_report("peierls-bound", spec.describe(), params_j, log_trace - worst, log_trace, tol);
}

double constant_C1(const LatticeSpec& spec, double t) {
  if (t == 0.0) throw std::invalid_argument("C1 is a ratio to |t|; t must be nonzero");
  const Eigen::MatrixXcd hk = kinetic_matrix(spec, t);
  double best = 0.0;
  for (const Momentum& p : momenta(spec)) {
    const Eigen::MatrixXcd sp = fourier_spin_matrix(spec, p);
    const Eigen::MatrixXcd sm = fourier_spin_matrix(spec, negate(spec, p));
    const Eigen::MatrixXcd inner = hk * sm - sm * hk;
    best = std::max(best, many_body_norm(sp * inner - inner * sp));
  }
  return best / std::abs(t);
}

double constant_C2(const LatticeSpec& spec, double t) {
  if (t == 0.0) throw std::invalid_argument("C2 is a ratio to |t|; t must be nonzero");
  return many_body_norm(kinetic_matrix(spec, t)) / (std::abs(t) * spec.num_sites());
}

double kinetic_norm_density(const LatticeSpec& spec) {
  // Hopping across the boundary carries a minus sign, so k = pi (2n + 1) / side.
  double total = 0.0;
  for (int i = 0; i < spec.num_sites(); ++i) {
    const Site s = spec.site(i);
    double sum = 0.0;
    for (int mu = 1; mu <= spec.dim(); ++mu) {
      const int n = s.x[mu - 1] + spec.half_side(mu) - 1;
      const double k = std::numbers::pi * (2 * n + 1) / spec.side(mu);
      sum += std::sin(k) * std::sin(k);
    }
    total += std::sqrt(sum);
  }
  return 4.0 * total / spec.num_sites();
}

std::vector<CheckReport> thermodynamic_chain(const LatticeSpec& spec, const ModelParams& params,
                                             const ChainOptions& opt, CsvTable* table) {
  validate(params);
  if (params.B != 0.0) throw std::invalid_argument("the correlator chain needs B = 0");
  const int d = spec.dim();
  const double n = spec.num_sites();
  const double J = params.J, at = std::abs(params.t);
  const double c2 = constant_C2(spec, 1.0);
  const double ln2 = std::numbers::ln2;

  const ThermalContext ctx1(spec, 1), ctx3(spec, 3);
  const RealSpectrum sd1 = ctx1.solve(params), sd3 = ctx3.solve(params);
  const EigenOperator b1 = to_eigenbasis(sd1, bond_sum(spec, 1, ctx1.frame()));
  const EigenOperator b3 = to_eigenbasis(sd3, bond_sum(spec, 3, ctx3.frame()));

  if (table && table->header.empty())
    table->header = {"lattice", "t", "J", "beta", "log_z", "energy", "entropy", "neel_bound",
                     "bond_s1", "bond_s3", "correlator", "correlator_lower"};

  std::vector<CheckReport> out;
  for (double beta : opt.betas) {
    const double lnz = sd1.log_partition(beta);
    const double energy = sd1.energy(beta);
    const double entropy = gibbs_entropy(sd1, beta);
    const double s1 = thermal_expectation(sd1, b1, beta).real();
    const double s3 = thermal_expectation(sd3, b3, beta).real();
    const double su2 = std::abs(s1 - s3);
    json base = {{"t", params.t}, {"J", J}, {"B", 0.0}, {"beta", beta}};
    const std::string lat = spec.describe();

    const double neel = 4.0 * d * beta * J * n;
    out.push_back(bound_report("peierls-bound", lat, base, neel, lnz, opt.tol));
    out.back().params["family"] = "neel";

    auto identity = base;
    identity["log_z"] = lnz;
    identity["entropy"] = entropy;
    out.push_back(residual_report("max-entropy-identity", lat, identity,
                                  std::abs(lnz - (-beta * energy + entropy)), opt.tol));

    out.push_back(bound_report("entropy-cap", lat, base, entropy, 4.0 * n * ln2, opt.tol));

    auto energy_j = base;
    energy_j["C2"] = c2;
    out.push_back(bound_report("energy-upper-bound", lat, energy_j, -energy, c2 * at * n - 3.0 * d * J * s3, opt.tol));

    // ln Z <= -beta <H> + S with S capped, then the energy bound, gives a
    // lower bound on the S3 bond sum; SU(2) moves it to S1.
    const double chain_lhs = (4.0 * d * J - c2 * at) * n - 4.0 / beta * n * ln2;
    auto chain_j = energy_j;
    chain_j["su2_residual"] = su2;
    CheckReport chain = bound_report("correlator-chain", lat, chain_j, chain_lhs, -3.0 * d * J * s3, opt.tol);
    chain.passed = chain.passed && su2 < opt.tol;
    out.push_back(chain);

    const double measured = -s1 / n;
    const double lower = 4.0 / 3.0 - c2 * at / (3.0 * d * J) - 4.0 * ln2 / (3.0 * d * beta * J);
    const double lower_weak = 4.0 / 3.0 - c2 * at / (3.0 * d * J) - 4.0 * ln2 / (beta * J);
    auto lb_j = chain_j;
    lb_j["weaker_bound"] = lower_weak;
    CheckReport lb = bound_report("correlator-lower-bound", lat, lb_j, lower, measured, opt.tol);
    lb.passed = lb.passed && lower_weak <= lower && su2 < opt.tol;
    out.push_back(lb);

    if (table)
      table->add_row({lat, format_number(params.t), format_number(J), format_number(beta), format_number(lnz),
                      format_number(energy), format_number(entropy), format_number(neel), format_number(s1),
                      format_number(s3), format_number(measured), format_number(lower)});
  }
  return out;
}

CertificateConstants thermodynamic_constants(const GridLevels& grid) {
  CertificateConstants c;
  c.C2 = kinetic_norm_limit(3);
  c.C1 = 4.0 * c.C2;
  c.I = integral_I(3, grid).value;
  c.J = integral_J(3, grid).value;
  c.K = integral_K(3, grid).value;
  c.source = "zone integrals; C2 large-volume kinetic norm; C1 = 4 C2";
  return c;
}

CertificateConstants lattice_constants(const LatticeSpec& spec) {
  if (spec.dim() != 3) throw std::invalid_argument("the certificate is for d = 3 lattices");
  const FiniteSums s = finite_sums(spec);
  CertificateConstants c;
  c.C2 = kinetic_norm_density(spec);
  c.C1 = 4.0 * c.C2;
  c.I = s.I;
  c.J = s.J;
  c.K = s.K;
  c.source = "finite sums on " + spec.describe() + "; C2 momentum sum; C1 = 4 C2";
  return c;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Positive:
      return "positive";
    case Verdict::NotPositive:
      return "not-positive";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

double certificate_f(double e, double k) { return e - std::sqrt(2.0 * e) * k; }

Certificate lro_certificate(double t, double J, double beta, const CertificateConstants& c) {
  if (!(J > 0.0)) throw std::invalid_argument("J must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  Certificate r;
  r.t = t;
  r.J = J;
  r.beta = beta;
  r.constants = c;
  const bool finite = std::isfinite(beta);
  const double at = std::abs(t);
  r.e0_lower = 4.0 / 3.0 - c.C2 * at / (9.0 * J) - (finite ? 4.0 * std::numbers::ln2 / (beta * J) : 0.0);
  r.thermal_term = finite ? c.I / (2.0 * beta * J) : 0.0;
  r.quantum_term = std::sqrt(c.C1 * at / (2.0 * J)) * c.J;
  if (r.e0_lower <= 0.5 * c.K * c.K) {
    r.verdict = Verdict::Inconclusive;
    r.reason = "energy lower bound at or below K^2/2, where f is not increasing";
    r.f_e0 = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.f_e0 = certificate_f(r.e0_lower, c.K);
  r.m2_lower = r.f_e0 - r.thermal_term - r.quantum_term;
  r.verdict = r.m2_lower > 0.0 ? Verdict::Positive : Verdict::NotPositive;
  return r;
}

json to_json(const Certificate& c) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["t"] = c.t;
  j["J"] = c.J;
  j["beta"] = num(c.beta);
  j["constants"] = {{"C1", c.constants.C1}, {"C2", c.constants.C2}, {"I", c.constants.I},
                    {"J", c.constants.J},   {"K", c.constants.K},   {"source", c.constants.source}};
  j["e0_lower"] = c.e0_lower;
  j["f_e0"] = num(c.f_e0);
  j["thermal_term"] = c.thermal_term;
  j["quantum_term"] = c.quantum_term;
  j["m2_lower"] = num(c.m2_lower);
  j["verdict"] = verdict_name(c.verdict);
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

CheckReport region_scan(const CertificateConstants& c, const RegionOptions& opt, CsvTable* table) {
  if (opt.t_points < 2 || opt.beta_points < 2) throw std::invalid_argument("region grid needs two points per axis");
  if (!(opt.beta_min > 0.0) || !(opt.beta_max > opt.beta_min)) throw std::invalid_argument("bad beta range");
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> ts(opt.t_points), bs(opt.beta_points);
  for (int i = 0; i < opt.t_points; ++i) ts[i] = opt.t_max * i / (opt.t_points - 1);
  const double lr = std::log(opt.beta_max / opt.beta_min);
  for (int k = 0; k < opt.beta_points; ++k) bs[k] = opt.beta_min * std::exp(lr * k / (opt.beta_points - 1));

  if (table) table->header = {"t_over_J", "beta_J", "e0_lower", "m2_lower", "verdict"};
  std::vector<std::vector<double>> m(opt.t_points, std::vector<double>(opt.beta_points));
  int positive = 0;
  for (int i = 0; i < opt.t_points; ++i)
    for (int k = 0; k < opt.beta_points; ++k) {
      const Certificate cert = lro_certificate(ts[i], 1.0, bs[k], c);
      m[i][k] = cert.m2_lower;
      positive += cert.verdict == Verdict::Positive;
      if (table)
        table->add_row({format_number(ts[i]), format_number(bs[k]), format_number(cert.e0_lower),
                        format_number(cert.m2_lower), verdict_name(cert.verdict)});
    }

  const double slack = 1e-12;
  int violations = 0;
  for (int i = 0; i < opt.t_points; ++i)
    for (int k = 0; k < opt.beta_points; ++k) {
      if (i + 1 < opt.t_points && m[i + 1][k] > m[i][k] + slack) ++violations;
      if (k + 1 < opt.beta_points && m[i][k + 1] < m[i][k] - slack) ++violations;
    }
  CheckReport r = residual_report("region-monotone", "d=3 certificate",
                                  {{"t_over_J", {0.0, opt.t_max}},
                                   {"beta_J", {opt.beta_min, opt.beta_max}},
                                   {"points", opt.t_points * opt.beta_points},
                                   {"positive", positive},
                                   {"constants_source", c.source}},
                                  violations, 0.5);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CheckReport> certificate_checks(const CertificateConstants& c, double tol) {
  const Certificate cert = lro_certificate(0.0, 1.0, kInfiniteBeta, c);
  const double closed = 4.0 / 3.0 - std::sqrt(8.0 / 3.0) * c.K;
  json p = {{"t", 0.0}, {"J", 1.0}, {"beta", "inf"}, {"K", c.K}, {"m2_lower", cert.m2_lower},
            {"verdict", verdict_name(cert.verdict)}};
  std::vector<CheckReport> out;
  out.push_back(residual_report("certificate", "d=3 certificate", p, std::abs(cert.m2_lower - closed), tol));
  out.push_back(bound_report("certificate", "d=3 certificate", p, 0.75, cert.m2_lower, 0.0));
  return out;
}

}  // namespace wafm
