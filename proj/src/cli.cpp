#include "wafm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <CLI11.hpp>

#include "wafm/integrals.hpp"
#include "wafm/thermal.hpp"
#include "wafm/thermal_checks.hpp"
#include "wafm/transform.hpp"

namespace wafm {

namespace {

const std::vector<std::string> kPeierlsIds = {"peierls-bound", "max-entropy-identity", "entropy-cap"};
const std::vector<std::string> kCorrelatorIds = {"energy-upper-bound", "correlator-chain", "correlator-lower-bound"};

void append(std::vector<CheckReport>& out, std::vector<CheckReport> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

std::vector<CheckReport> select(const std::vector<CheckReport>& all, const std::vector<std::string>& ids) {
  std::vector<CheckReport> out;
  for (const auto& r : all)
    if (std::find(ids.begin(), ids.end(), r.id) != ids.end()) out.push_back(r);
  return out;
}

}  // namespace

Runner::Runner(RunConfig cfg, std::ostream* log) : cfg_(std::move(cfg)), log_(log) { validate(cfg_); }

Runner::~Runner() = default;

void Runner::note(const std::string& line) {
  if (log_) *log_ << line << std::endl;
}

const ThermalContext& Runner::context() {
  if (!ctx_) {
    note("building thermal context for " + cfg_.lattice().describe());
    ctx_ = std::make_unique<ThermalContext>(cfg_.lattice(), 1);
  }
  return *ctx_;
}

const SpinObservables& Runner::observables(double B, double beta) {
  auto& slot = obs_[{B, beta}];
  if (!slot) {
    ModelParams p = cfg_.model;
    p.B = B;
    p.beta = beta;
    slot = std::make_unique<SpinObservables>(context(), p);
  }
  return *slot;
}

const std::vector<CheckReport>& Runner::chain() {
  if (!chain_) {
    ModelParams p = cfg_.model;
    p.B = 0.0;
    ChainOptions opt;
    opt.betas = cfg_.chain_betas;
    opt.tol = cfg_.tolerance(cfg_.tol.chain);
    chain_ = thermodynamic_chain(cfg_.lattice(), p, opt, &tables_["chain"]);
  }
  return *chain_;
}

CertificateConstants Runner::certificate_constants() {
  if (!constants_) {
    const bool computed = !(cfg_.C1 && cfg_.C2 && cfg_.I && cfg_.J && cfg_.K);
    CertificateConstants c;
    if (computed) c = thermodynamic_constants({cfg_.grid_sides, cfg_.requested_error});
    if (cfg_.C1) c.C1 = *cfg_.C1;
    if (cfg_.C2) c.C2 = *cfg_.C2;
    if (cfg_.I) c.I = *cfg_.I;
    if (cfg_.J) c.J = *cfg_.J;
    if (cfg_.K) c.K = *cfg_.K;
    if (cfg_.C1 || cfg_.C2 || cfg_.I || cfg_.J || cfg_.K)
      c.source = computed ? c.source + "; some entries from config" : "config";
    constants_ = c;
  }
  return *constants_;
}

std::vector<CheckReport> Runner::run_group(const std::string& group) {
  const auto start = std::chrono::steady_clock::now();
  const LatticeSpec spec = cfg_.lattice();
  const double tol_thermal = cfg_.tolerance(cfg_.tol.thermal);
  std::vector<CheckReport> out;

  if (group == "transforms") {
    TransformCheckOptions opt;
    opt.t = cfg_.transform_t;
    opt.J = cfg_.transform_J;
    opt.B = cfg_.transform_B;
    opt.field_amplitude = cfg_.field_amplitude;
    opt.seed = cfg_.seed;
    opt.tolerance = cfg_.tolerance(cfg_.tol.identity);
    append(out, verify_reflection_identities(spec, opt));
    append(out, verify_rotation_identities(spec, opt));
    out.push_back(local_double_commutator_check(cfg_.tolerance(cfg_.tol.local)));
  } else if (group == "oracles") {
    const LatticeSpec small = cfg_.small_lattice();
    out.push_back(sector_trace_check(small, cfg_.model, cfg_.chain_betas, tol_thermal));
    out.push_back(duhamel_quadrature_check(small, cfg_.model, cfg_.quadrature_pairs, cfg_.seed,
                                           cfg_.tolerance(cfg_.tol.quadrature)));
  } else if (group == "gaussian-domination") {
    DominationOptions opt;
    opt.fields_B = cfg_.fields_B;
    opt.betas = cfg_.betas;
    opt.draws = cfg_.draws;
    opt.range = cfg_.field_range;
    opt.seed = cfg_.seed;
    opt.slack = tol_thermal;
    append(out, gaussian_domination(context(), cfg_.model, opt, &tables_["gaussian_domination"]));
    const auto probe = random_fields(spec, 1, cfg_.field_range, cfg_.seed + 1);
    out.push_back(gaussian_domination_curvature(context(), cfg_.model, probe.front(), tol_thermal));
    const LatticeSpec small = cfg_.small_lattice();
    out.push_back(gaussian_domination_odd_frame(small, cfg_.model,
                                                random_fields(small, std::min(cfg_.draws, 20), cfg_.field_range,
                                                              cfg_.seed),
                                                tol_thermal));
  } else if (group == "infrared-bound") {
    for (double B : cfg_.fields_B)
      for (double beta : cfg_.betas) {
        const SpinObservables& obs = observables(B, beta);
        out.push_back(infrared_check(obs, tol_thermal, &tables_["infrared"]));
        if (B == 0.0) append(out, double_commutator_checks(obs, tol_thermal));
      }
  } else if (group == "dls") {
    for (double beta : cfg_.betas) append(out, dls_checks(observables(0.0, beta), cfg_.tolerance(cfg_.tol.dls),
                                                          &tables_["dls"]));
  } else if (group == "sum-rule") {
    for (double beta : cfg_.betas) {
      const SpinObservables& obs = observables(0.0, beta);
      append(out, sum_rule_checks(obs, tol_thermal));
      out.push_back(lro_two_forms_check(obs, tol_thermal));
    }
  } else if (group == "peierls") {
    append(out, neel_checks(spec, cfg_.model.t, cfg_.tolerance(cfg_.tol.local)));
    out.push_back(peierls_family_check(cfg_.small_lattice(), cfg_.model, cfg_.peierls_families, cfg_.seed,
                                       tol_thermal));
    append(out, select(chain(), kPeierlsIds));
  } else if (group == "correlator-bound") {
    append(out, select(chain(), kCorrelatorIds));
  } else if (group == "integrals") {
    const GridLevels grid{cfg_.grid_sides, cfg_.requested_error};
    std::vector<IntegralResult> results;
    for (int d = 1; d <= 3; ++d)
      for (IntegralKind k : {IntegralKind::I, IntegralKind::J, IntegralKind::K})
        results.push_back(lattice_integral(k, d, d == 3 ? grid : GridLevels{}));
    tables_["integrals"] = integral_table(results);
    append(out, integral_checks(grid));
  } else if (group == "lro-region") {
    const CertificateConstants c = certificate_constants();
    append(out, certificate_checks(c, cfg_.tolerance(cfg_.tol.local)));
    RegionOptions opt;
    opt.t_max = cfg_.region_t_max;
    opt.t_points = cfg_.region_t_points;
    opt.beta_min = cfg_.region_beta_min;
    opt.beta_max = cfg_.region_beta_max;
    opt.beta_points = cfg_.region_beta_points;
    out.push_back(region_scan(c, opt, &tables_["region"]));
  } else {
    throw ConfigError("unknown check group '" + group + "'");
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : out)
    if (r.wall_seconds == 0.0) r.wall_seconds = secs;
  std::ostringstream os;
  os << group << ": " << out.size() << " reports in " << secs << " s";
  note(os.str());
  return out;
}

RunOutcome run(const RunConfig& cfg, const std::vector<std::string>& groups, ReportWriter* writer,
               std::ostream* log) {
  Runner runner(cfg, log);
  RunOutcome outcome;
  for (const auto& g : groups) {
    auto reports = runner.run_group(g);
    if (writer) writer->write(reports);
    append(outcome.reports, std::move(reports));
  }
  outcome.tables = runner.tables();
  return outcome;
}

void emit_tables(const std::map<std::string, CsvTable>& tables, const std::filesystem::path& dir) {
  for (const auto& [name, table] : tables) write_csv(dir / (name + ".csv"), table);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for the lattice Weyl-fermion antiferromagnet"};
  std::string config_path;
  std::string out_dir = "wafm-out";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_scale;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Directory for reports.jsonl and CSV tables");
  app.add_option("--seed", seed, "Seed for random field draws and sampled checks");
  app.add_option("--tolerance-scale", tol_scale, "Multiplier applied to every tolerance");
  app.require_subcommand(1);

  const std::vector<std::string> check_names = {"transforms", "gaussian-domination", "infrared-bound", "sum-rule",
                                                "dls",        "peierls",             "correlator-bound", "oracles"};
  std::string check_name;
  auto* check = app.add_subcommand("check", "Run one group of checks");
  check->add_option("group", check_name, "Check group")->required()->check(CLI::IsMember(check_names));
  auto* integrals = app.add_subcommand("integrals", "Lattice integrals and the K constant checks");
  auto* region = app.add_subcommand("lro-region", "Certificate sanity and the region scan");
  auto* all = app.add_subcommand("report-all", "Every group listed under [run] checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kAllPassed : kConfigError;
  }

  RunConfig cfg;
  std::vector<std::string> groups;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (tol_scale) cfg.tol.scale = *tol_scale;
    validate(cfg);
    if (check->parsed()) groups = {check_name};
    if (integrals->parsed()) groups = {"integrals"};
    if (region->parsed()) groups = {"lro-region"};
    if (all->parsed()) groups = cfg.checks;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    std::filesystem::create_directories(out_dir);
    ReportWriter writer(std::filesystem::path(out_dir) / "reports.jsonl");
    const RunOutcome outcome = run(cfg, groups, &writer, &err);
    emit_tables(outcome.tables, out_dir);
    int failed = 0;
    for (const auto& r : outcome.reports) {
      out << (r.passed ? "PASS " : "FAIL ") << r.id << "  " << r.lattice << "  " << r.kind << '=' << r.value
          << '\n';
      failed += !r.passed;
    }
    out << outcome.reports.size() << " reports, " << failed << " failed\n";
    return failed ? kCheckFailed : kAllPassed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace wafm
