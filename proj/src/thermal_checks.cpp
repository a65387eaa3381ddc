#include "wafm/thermal_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "wafm/transform.hpp"

namespace wafm {

namespace {

const cplx I(0.0, 1.0);

json base_params(const ModelParams& p) { return {{"t", p.t}, {"J", p.J}, {"B", p.B}, {"beta", p.beta}}; }

json momentum_json(const Momentum& p, int d) {
  json n = json::array();
  for (int mu = 0; mu < d; ++mu) n.push_back(p.n[mu]);
  return n;
}

std::string momentum_label(const Momentum& p, int d) {
  std::string s;
  for (int mu = 0; mu < d; ++mu) s += (mu ? " " : "") + std::to_string(p.n[mu]);
  return s;
}

bool is_q(const LatticeSpec& spec, const Momentum& p) { return p == antiferro_momentum(spec); }

double log_sum_exp(const Eigen::VectorXd& e, double beta) {
  const double e0 = e.minCoeff();
  return std::log((-beta * (e.array() - e0)).exp().sum()) - beta * e0;
}

Eigen::MatrixXcd dense(const FockOperator& a) { return Eigen::MatrixXcd(a.matrix()); }

void require_small(const LatticeSpec& spec) {
  if (spec.num_modes() > 8) throw std::invalid_argument("dense whole-space checks need at most 8 modes");
}

}  // namespace

std::vector<FieldConfig> random_fields(const LatticeSpec& spec, int count, double range, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-range, range);
  std::vector<FieldConfig> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    FieldConfig h(spec);
    for (int x = 0; x < spec.num_sites(); ++x)
      for (int mu = 1; mu <= spec.dim(); ++mu) h(x, mu) = u(rng);
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<CheckReport> gaussian_domination(const ThermalContext& ctx, const ModelParams& params,
                                             const DominationOptions& opt, CsvTable* table) {
  const LatticeSpec& spec = ctx.spec();
  std::vector<FieldConfig> fields{FieldConfig(spec)};
  const auto draws = random_fields(spec, opt.draws, opt.range, opt.seed);
  fields.insert(fields.end(), draws.begin(), draws.end());
  if (table && table->header.empty()) table->header = {"lattice", "B", "beta", "draw", "log_ratio"};

  std::vector<CheckReport> out;
  for (double B : opt.fields_B) {
    ModelParams p = params;
    p.B = B;
    const auto start = std::chrono::steady_clock::now();
    const auto lnz = ctx.log_partition_batch(p, fields, opt.betas);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t b = 0; b < opt.betas.size(); ++b) {
      double worst = -std::numeric_limits<double>::infinity();
      int violations = 0;
      const double tol = std::log1p(opt.slack);
      for (std::size_t k = 1; k < fields.size(); ++k) {
        const double r = lnz[k][b] - lnz[0][b];
        worst = std::max(worst, r);
        violations += r > tol;
        if (table)
          table->add_row({spec.describe(), format_number(B), format_number(opt.betas[b]), std::to_string(k),
                          format_number(r)});
      }
      p.beta = opt.betas[b];
      json jp = base_params(p);
      jp["draws"] = opt.draws;
      jp["range"] = opt.range;
      jp["seed"] = opt.seed;
      jp["violations"] = violations;
      jp["log_z0"] = lnz[0][b];
      CheckReport r = bound_report("gaussian-domination", spec.describe(), jp, worst, 0.0, tol);
      r.note = "largest ln Z(h) - ln Z(0) over the draws";
      r.wall_seconds = secs / double(opt.betas.size());
      out.push_back(std::move(r));
    }
  }
  return out;
}

CheckReport gaussian_domination_curvature(const ThermalContext& ctx, const ModelParams& params,
                                          const FieldConfig& h, double tol) {
  const LatticeSpec& spec = ctx.spec();
  ModelParams p0 = params;
  p0.B = 0.0;
  const auto coeff = field_coefficients(spec, p0, h);
  FockOperator a = zero_op(spec.num_modes());
  for (int x = 0; x < spec.num_sites(); ++x) a += coeff[x] * spin_operator(spec, x, 1, ctx.frame());

  const RealSpectrum sd = ctx.solve(params, nullptr, true);
  const EigenOperator ae = to_eigenbasis(sd, a);
  const double beta = params.beta;
  const double duh = duhamel(sd, ae, ae, beta).real();
  const double mean = thermal_expectation(sd, ae, beta).real();
  const double lhs = beta * beta * (duh - mean * mean);
  const double rhs = beta * params.J * h.sum_of_squares();

  // Second difference of ln Z along the same direction, for the record.
  const double eps = 1e-3;
  std::vector<FieldConfig> line;
  for (double s : {-eps, 0.0, eps}) {
    FieldConfig hs(spec);
    for (int x = 0; x < spec.num_sites(); ++x)
      for (int mu = 1; mu <= spec.dim(); ++mu) hs(x, mu) = s * h(x, mu);
    line.push_back(std::move(hs));
  }
  const auto lnz = ctx.log_partition_batch(params, line, {beta});
  const double fd = (lnz[0][0] - 2.0 * lnz[1][0] + lnz[2][0]) / (eps * eps);

  json jp = base_params(params);
  jp["finite_difference"] = fd;
  jp["duhamel_form"] = lhs - rhs;
  CheckReport r = bound_report("gaussian-domination-curvature", spec.describe(), jp, lhs, rhs, tol);
  r.note = "beta^2 [(A,A) - <A>^2] against beta J sum h^2";
  return r;
}

CheckReport gaussian_domination_odd_frame(const LatticeSpec& spec, const ModelParams& params,
                                          const std::vector<FieldConfig>& fields, double slack) {
  require_small(spec);
  const FockUnitary uodd = build_u_odd(spec);
  auto lnz = [&](const FockOperator& h) {
    return log_sum_exp(linalg::eigenvalues<cplx>(dense(h)), params.beta);
  };
  const FieldConfig zero(spec);
  const double odd0 = lnz(uodd.conjugate(build_full(spec, params, &zero)));
  double worst = -std::numeric_limits<double>::infinity();
  double frame_gap = std::abs(odd0 - lnz(build_full(spec, params, &zero)));
  for (const auto& h : fields) {
    const FockOperator hh = build_full(spec, params, &h);
    const double odd = lnz(uodd.conjugate(hh));
    worst = std::max(worst, odd - odd0);
    frame_gap = std::max(frame_gap, std::abs(odd - lnz(hh)));
  }
  json jp = base_params(params);
  jp["draws"] = fields.size();
  jp["frame_gap"] = frame_gap;
  CheckReport r = bound_report("gaussian-domination-odd-frame", spec.describe(), jp, worst, 0.0, std::log1p(slack));
  r.passed = r.passed && frame_gap < 1e-10;
  r.note = "U_odd-conjugated Hamiltonian, whole-space diagonalization; frame_gap compares with the original frame";
  return r;
}

// ---------------------------------------------------------------------------

SpinObservables::SpinObservables(const ThermalContext& ctx, const ModelParams& params)
    : ctx_(&ctx), params_(params), momenta_(wafm::momenta(ctx.spec())) {
  validate(params);
  const LatticeSpec& spec = ctx.spec();
  sd_ = ctx.solve(params, nullptr, true);
  for (const auto& p : momenta_) fourier_.push_back(to_eigenbasis(sd_, fourier_spin(spec, p, ctx.frame())));
  for (int x = 0; x < spec.num_sites(); ++x)
    spin_.push_back(to_eigenbasis(sd_, spin_operator(spec, x, 1, ctx.frame())));
  dc_.resize(momenta_.size());
}

int SpinObservables::index_of(const Momentum& p) const {
  auto it = std::find(momenta_.begin(), momenta_.end(), p);
  if (it == momenta_.end()) throw std::out_of_range("momentum not in the dual lattice");
  return static_cast<int>(it - momenta_.begin());
}

double SpinObservables::duhamel_fourier(int k) const {
  const int m = index_of(negate(ctx_->spec(), momenta_[k]));
  return duhamel(sd_, fourier_[k], fourier_[m], params_.beta).real();
}

double SpinObservables::fourier_product(int k) const {
  const int m = index_of(negate(ctx_->spec(), momenta_[k]));
  return thermal_product(sd_, fourier_[k], fourier_[m], params_.beta).real();
}

double SpinObservables::spin_product(int x, int y) const {
  return thermal_product(sd_, spin_[x], spin_[y], params_.beta).real();
}

const SpinObservables::DoubleCommutator& SpinObservables::double_commutator(int k) const {
  if (dc_[k]) return *dc_[k];
  if (params_.B != 0.0) throw std::invalid_argument("the double commutator is taken at B = 0");
  const LatticeSpec& spec = ctx_->spec();
  const Frame& frame = ctx_->frame();
  const Momentum& p = momenta_[k];
  const FockOperator a = fourier_spin(spec, p, frame);
  const FockOperator b = fourier_spin(spec, negate(spec, p), frame);
  if (parts_.empty()) {
    parts_.push_back(build_interaction(spec, params_.J, frame));
    for (int mu = 1; mu <= spec.dim(); ++mu) {
      FockOperator s = zero_op(spec.num_modes());
      for (int x = 0; x < spec.num_sites(); ++x) {
        const int y = spec.index(neighbor(spec, spec.site(x), mu).site);
        for (int j : {2, 3}) s += spin_operator(spec, x, j, frame) * spin_operator(spec, y, j, frame);
      }
      parts_.push_back(std::move(s));
    }
  }
  // The kinetic part is one-body, and so is its double commutator with
  // one-body operators: [c^dag s c, [c^dag h c, c^dag s' c]] = c^dag [s, [h, s']] c.
  const Eigen::MatrixXcd sp = fourier_spin_matrix(spec, p), sm = fourier_spin_matrix(spec, negate(spec, p));
  const Eigen::MatrixXcd hk = kinetic_matrix(spec, params_.t);
  const Eigen::MatrixXcd inner = hk * sm - sm * hk;
  const FockOperator dk = bilinear(spec.num_modes(), frame.one_body(sp * inner - inner * sp));
  const FockOperator di = commutator(a, commutator(parts_[0], b));

  // Bond form: -(8J/|L|) sum_mu (1 - cos p_mu) sum_x [S2 S2 + S3 S3](x, x + e_mu).
  FockOperator bond = zero_op(spec.num_modes());
  for (int mu = 1; mu <= spec.dim(); ++mu) {
    const double w = 1.0 - std::cos(p.p[mu - 1]);
    if (w != 0.0) bond += w * parts_[mu];
  }
  bond *= cplx(-8.0 * params_.J / spec.num_sites());

  DoubleCommutator d;
  d.kinetic = thermal_expectation(sd_, to_eigenbasis(sd_, dk), params_.beta).real();
  d.interaction = thermal_expectation(sd_, to_eigenbasis(sd_, di), params_.beta).real();
  d.operator_residual = residual(di, bond);

  // Eigenfunction expansion of the whole double commutator:
  // sum_m w_m sum_n (E_n - E_m) (A_mn B_nm + B_mn A_nm) / Z.
  const EigenOperator& ea = fourier_[k];
  const EigenOperator& eb = fourier_[index_of(negate(spec, p))];
  const auto w = sd_.weights(params_.beta);
  double num = 0.0, z = 0.0;
  for (std::size_t blk = 0; blk < w.size(); ++blk) {
    const Eigen::VectorXd& e = sd_.blocks()[blk].energies;
    const Eigen::MatrixXcd& A = ea.blocks[blk];
    const Eigen::MatrixXcd& B = eb.blocks[blk];
    double s = 0.0;
    for (Eigen::Index m = 0; m < e.size(); ++m)
      for (Eigen::Index n = 0; n < e.size(); ++n)
        s += w[blk](m) * (e(n) - e(m)) * (A(m, n) * B(n, m) + B(m, n) * A(n, m)).real();
    num += sd_.basis().multiplicity[blk] * s;
    z += sd_.basis().multiplicity[blk] * w[blk].sum();
  }
  d.spectral = num / z;
  dc_[k] = d;
  return *dc_[k];
}

// ---------------------------------------------------------------------------

std::vector<InfraredRow> infrared_rows(const SpinObservables& obs) {
  const LatticeSpec& spec = obs.context().spec();
  const ModelParams& p = obs.params();
  std::vector<InfraredRow> rows;
  for (std::size_t k = 0; k < obs.momenta().size(); ++k) {
    const Momentum& q = obs.momenta()[k];
    if (is_q(spec, q)) continue;
    InfraredRow r;
    r.p = q;
    r.lhs = obs.duhamel_fourier(static_cast<int>(k));
    r.rhs = 1.0 / (2.0 * p.beta * p.J * dispersion(spec, shift_by_q(spec, q)));
    rows.push_back(r);
  }
  return rows;
}

CheckReport infrared_check(const SpinObservables& obs, double tol, CsvTable* table) {
  const LatticeSpec& spec = obs.context().spec();
  const auto start = std::chrono::steady_clock::now();
  const auto rows = infrared_rows(obs);
  double worst = -std::numeric_limits<double>::infinity(), min_lhs = std::numeric_limits<double>::infinity();
  const InfraredRow* at = nullptr;
  for (const auto& r : rows) {
    if (r.lhs - r.rhs > worst) {
      worst = r.lhs - r.rhs;
      at = &r;
    }
    min_lhs = std::min(min_lhs, r.lhs);
  }
  if (table) {
    if (table->header.empty()) table->header = {"lattice", "B", "beta", "p", "lhs", "rhs"};
    for (const auto& r : rows)
      table->add_row({spec.describe(), format_number(obs.params().B), format_number(obs.params().beta),
                      momentum_label(r.p, spec.dim()), format_number(r.lhs), format_number(r.rhs)});
  }
  json jp = base_params(obs.params());
  jp["momenta"] = rows.size();
  jp["min_lhs"] = min_lhs;
  if (at) jp["worst_p"] = momentum_json(at->p, spec.dim());
  CheckReport r = bound_report("infrared-bound", spec.describe(), jp, at ? at->lhs : 0.0, at ? at->rhs : 0.0, tol);
  r.passed = r.passed && min_lhs >= -tol;
  r.note = "tightest momentum; Duhamel side must also be nonnegative";
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CheckReport> double_commutator_checks(const SpinObservables& obs, double tol) {
  const LatticeSpec& spec = obs.context().spec();
  const ModelParams& p = obs.params();
  double bond_corr = 0.0;
  for (int x = 0; x < spec.num_sites(); ++x)
    bond_corr += obs.spin_product(x, spec.index(neighbor(spec, spec.site(x), 1).site));
  double min_cp = std::numeric_limits<double>::infinity(), inter = 0.0, op = 0.0, split = 0.0;
  for (std::size_t k = 0; k < obs.momenta().size(); ++k) {
    const auto& dc = obs.double_commutator(static_cast<int>(k));
    min_cp = std::min(min_cp, dc.spectral);
    split = std::max(split, std::abs(dc.total() - dc.spectral));
    const double expect = -16.0 * p.J * dispersion(spec, obs.momenta()[k]) * bond_corr / spec.num_sites();
    inter = std::max(inter, std::abs(dc.interaction - expect));
    op = std::max(op, dc.operator_residual);
  }
  json jp = base_params(p);
  jp["momenta"] = obs.momenta().size();
  jp["split_residual"] = split;
  CheckReport pos = bound_report("double-commutator-positivity", spec.describe(), jp, -min_cp, 0.0, tol);
  pos.passed = pos.passed && split < tol * std::max(1.0, std::abs(min_cp));
  pos.note = "smallest C_p over the dual lattice; split_residual compares kinetic + interaction with the eigenvalue expansion";
  jp.erase("split_residual");
  jp["operator_residual"] = op;
  CheckReport in = residual_report("double-commutator-interaction", spec.describe(), jp, std::max(inter, op), tol);
  in.note = "bond-sum operator identity and the nearest-neighbour correlator form of its expectation";
  return {pos, in};
}

CheckReport local_double_commutator_check(double tol) {
  const LatticeSpec two(1, {1});
  const int M = two.num_modes();
  FockOperator s[2][4];
  for (int x = 0; x < 2; ++x)
    for (int j = 1; j <= 3; ++j) s[x][j] = spin_operator(two, x, j);
  FockOperator c = zero_op(M);
  for (int j = 1; j <= 3; ++j) c += commutator(s[0][j] * s[1][j], s[0][1]);
  const FockOperator first = (-2.0 * I) * (s[0][3] * s[1][2]) + (2.0 * I) * (s[0][2] * s[1][3]);
  const FockOperator pair = s[0][2] * s[1][2] + s[0][3] * s[1][3];
  const double r = std::max({residual(c, first), residual(commutator(s[0][1], c), -4.0 * pair),
                             residual(commutator(s[1][1], c), 4.0 * pair)});
  CheckReport rep = residual_report("local-double-commutator", two.describe(), json::object(), r, tol);
  rep.note = "256-dimensional two-site space";
  return rep;
}

std::vector<CheckReport> dls_checks(const SpinObservables& obs, double tol, CsvTable* table) {
  const LatticeSpec& spec = obs.context().spec();
  const ModelParams& p = obs.params();
  if (table && table->header.empty()) table->header = {"lattice", "beta", "p", "C_p", "lhs", "rhs_coth", "rhs_weak"};
  double worst = -std::numeric_limits<double>::infinity(), worst_weak = worst;
  double l0 = 0, r0 = 0, l1 = 0, r1 = 0;
  int used = 0;
  for (std::size_t k = 0; k < obs.momenta().size(); ++k) {
    const Momentum& q = obs.momenta()[k];
    if (is_q(spec, q)) continue;
    const double cp = obs.double_commutator(static_cast<int>(k)).spectral;
    // C_p at rounding level means the bound is vacuous (C_0 vanishes exactly).
    if (cp <= 1e-10) continue;
    ++used;
    const int m = obs.index_of(negate(spec, q));
    const double lhs = obs.fourier_product(static_cast<int>(k)) + obs.fourier_product(m);
    const double e = dispersion(spec, shift_by_q(spec, q));
    const double a = std::sqrt(cp / (2.0 * p.J * e));
    const double strong = a / std::tanh(std::sqrt(cp * p.beta * p.beta * p.J * e / 2.0));
    const double weak = a + 1.0 / (p.beta * p.J * e);
    if (lhs - strong > worst) worst = lhs - strong, l0 = lhs, r0 = strong;
    if (lhs - weak > worst_weak) worst_weak = lhs - weak, l1 = lhs, r1 = weak;
    if (table)
      table->add_row({spec.describe(), format_number(p.beta), momentum_label(q, spec.dim()), format_number(cp),
                      format_number(lhs), format_number(strong), format_number(weak)});
  }
  json jp = base_params(p);
  jp["momenta"] = used;
  if (used == 0)
    return {skipped_report("dls-bound", spec.describe(), jp, "no momentum with C_p > 0"),
            skipped_report("dls-bound-weak", spec.describe(), jp, "no momentum with C_p > 0")};
  CheckReport a = bound_report("dls-bound", spec.describe(), jp, l0, r0, tol);
  a.note = "coth form at the tightest momentum";
  CheckReport b = bound_report("dls-bound-weak", spec.describe(), jp, l1, r1, tol);
  return {a, b};
}

std::vector<CheckReport> sum_rule_checks(const SpinObservables& obs, double tol) {
  const LatticeSpec& spec = obs.context().spec();
  json jp = base_params(obs.params());
  std::vector<double> rhs(spec.dim() + 1, 0.0);
  double r = 0.0;
  for (int mu = 1; mu <= spec.dim(); ++mu) {
    double lhs = 0.0;
    for (std::size_t k = 0; k < obs.momenta().size(); ++k)
      lhs += obs.fourier_product(static_cast<int>(k)) * std::cos(obs.momenta()[k].p[mu - 1]);
    for (int x = 0; x < spec.num_sites(); ++x)
      rhs[mu] += obs.spin_product(x, spec.index(neighbor(spec, spec.site(x), mu).site));
    r = std::max(r, std::abs(lhs - rhs[mu]));
    jp["direction_" + std::to_string(mu)] = rhs[mu];
  }
  std::vector<CheckReport> out{residual_report("sum-rule", spec.describe(), jp, r, tol)};
  if (spec.dim() >= 2) {
    double iso = 0.0;
    for (int mu = 2; mu <= spec.dim(); ++mu) iso = std::max(iso, std::abs(rhs[mu] - rhs[1]));
    out.push_back(residual_report("sum-rule-isotropy", spec.describe(), jp, iso, tol));
  }
  return out;
}

LroValues m_lro_squared(const SpinObservables& obs) {
  const LatticeSpec& spec = obs.context().spec();
  const RealSpectrum& sd = obs.spectrum();
  const double n = spec.num_sites();
  LroValues v;
  const EigenOperator o = to_eigenbasis(sd, order_parameter(spec, obs.context().frame()));
  v.from_order_parameter = thermal_product(sd, o, o, obs.params().beta).real() / (n * n);
  for (int x = 0; x < spec.num_sites(); ++x)
    for (int y = 0; y < spec.num_sites(); ++y)
      v.from_pairs += parity(spec.site(x)) * parity(spec.site(y)) * obs.spin_product(x, y);
  v.from_pairs /= n * n;
  v.from_fourier = obs.fourier_product(obs.index_of(antiferro_momentum(spec))) / n;
  return v;
}

CheckReport lro_two_forms_check(const SpinObservables& obs, double tol) {
  const LroValues v = m_lro_squared(obs);
  json jp = base_params(obs.params());
  jp["m2"] = v.from_order_parameter;
  const double r = std::max({std::abs(v.from_order_parameter - v.from_pairs),
                             std::abs(v.from_order_parameter - v.from_fourier),
                             std::abs(v.from_pairs - v.from_fourier)});
  CheckReport rep = residual_report("lro-two-forms", obs.context().spec().describe(), jp, r, tol);
  rep.passed = rep.passed && v.from_order_parameter >= -tol && v.from_order_parameter <= 4.0 + tol;
  return rep;
}

// ---------------------------------------------------------------------------

CheckReport sector_trace_check(const LatticeSpec& spec, const ModelParams& params, const std::vector<double>& betas,
                               double tol) {
  require_small(spec);
  const ThermalContext ctx(spec, 1);
  const RealSpectrum reduced = ctx.solve(params, nullptr, true);
  const EigenOperator o_red = to_eigenbasis(reduced, order_parameter(spec, ctx.frame()));

  const FockOperator h = build_full(spec, params);
  const auto numbered = std::make_shared<const ReducedBasis<cplx>>(
      full_basis<cplx>(make_sectors(SectorLayout::total_number(spec.num_modes()))));
  const ComplexSpectrum by_number = spectral<cplx>(h, numbered, false);

  // Whole space through Eigen's own solver, independent of the LAPACK path.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(h));
  const Eigen::MatrixXcd o = dense(order_parameter(spec));
  const Eigen::MatrixXcd o2 = es.eigenvectors().adjoint() * (o * o) * es.eigenvectors();

  double r = 0.0;
  for (double beta : betas) {
    const double full = log_sum_exp(es.eigenvalues(), beta);
    r = std::max({r, std::abs(reduced.log_partition(beta) - full), std::abs(by_number.log_partition(beta) - full)});
    const Eigen::VectorXd w = (-beta * (es.eigenvalues().array() - es.eigenvalues().minCoeff())).exp();
    const double o2_full = (o2.diagonal().real().array() * w.array()).sum() / w.sum();
    const double o2_red = thermal_product(reduced, o_red, o_red, beta).real();
    r = std::max(r, std::abs(o2_full - o2_red) / std::max(1.0, std::abs(o2_full)));
  }
  json jp = base_params(params);
  jp["betas"] = betas;
  jp["blocks"] = ctx.basis()->num_blocks();
  CheckReport rep = residual_report("sector-trace", spec.describe(), jp, r, tol);
  rep.note = "ln Z and <O^2> from reduced blocks and number sectors against the whole space";
  return rep;
}

CheckReport duhamel_quadrature_check(const LatticeSpec& spec, const ModelParams& params, int pairs,
                                     std::uint64_t seed, double tol) {
  require_small(spec);
  const int M = spec.num_modes();
  const FockOperator h = build_full(spec, params);
  const auto whole = std::make_shared<const ReducedBasis<cplx>>(full_basis<cplx>(make_sectors(SectorLayout::trivial(M))));
  const ComplexSpectrum sd = spectral<cplx>(h, whole, true);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(h));
  const Eigen::VectorXd e = es.eigenvalues().array() - es.eigenvalues().minCoeff();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const double beta = params.beta;
  const double z = (-beta * e.array()).exp().sum();
  auto heat = [&](double s) -> Eigen::MatrixXcd {
    return v * (-s * beta * e.array()).exp().matrix().asDiagonal() * v.adjoint();
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const Eigen::Index dim = Eigen::Index{1} << M;
  auto random_hermitian = [&]() {
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
    return Eigen::MatrixXcd(0.5 * (a + a.adjoint()));
  };

  double r = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Eigen::MatrixXcd a = random_hermitian(), b = random_hermitian();
    const FockOperator fa(M, SpMat(a.sparseView())), fb(M, SpMat(b.sparseView()));
    const cplx formula = duhamel(sd, to_eigenbasis(sd, fa), to_eigenbasis(sd, fb), beta);
    auto integrand = [&](double s) { return (heat(s) * a * heat(1.0 - s) * b).trace() / z; };
    const double re = boost::math::quadrature::gauss<double, 64>::integrate(
        [&](double s) { return integrand(s).real(); }, 0.0, 1.0);
    const double im = boost::math::quadrature::gauss<double, 64>::integrate(
        [&](double s) { return integrand(s).imag(); }, 0.0, 1.0);
    r = std::max(r, std::abs(formula - cplx(re, im)) / std::max(1.0, std::abs(cplx(re, im))));
  }
  json jp = base_params(params);
  jp["pairs"] = pairs;
  jp["seed"] = seed;
  CheckReport rep = residual_report("duhamel-quadrature", spec.describe(), jp, r, tol);
  rep.note = "relative difference, 64-point Gauss-Legendre in s";
  return rep;
}

}  // namespace wafm
