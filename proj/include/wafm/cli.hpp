#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wafm/config.hpp"
#include "wafm/lro.hpp"
#include "wafm/report.hpp"

namespace wafm {

class ThermalContext;
class SpinObservables;

// Runs check groups for one configuration. Expensive intermediate objects
// (the thermal context, per-(B, beta) observables, the chain) are built
// once and shared between groups.
class Runner {
 public:
  explicit Runner(RunConfig cfg, std::ostream* log = nullptr);
  ~Runner();

  const RunConfig& config() const { return cfg_; }

  // Reports of one group; tables produced along the way are kept.
  std::vector<CheckReport> run_group(const std::string& group);
  const std::map<std::string, CsvTable>& tables() const { return tables_; }

  // Constants used by the certificate: config overrides where given,
  // computed values otherwise.
  CertificateConstants certificate_constants();

 private:
  const ThermalContext& context();
  const SpinObservables& observables(double B, double beta);
  const std::vector<CheckReport>& chain();
  void note(const std::string& line);

  RunConfig cfg_;
  std::ostream* log_;
  std::unique_ptr<ThermalContext> ctx_;
  std::map<std::pair<double, double>, std::unique_ptr<SpinObservables>> obs_;
  std::optional<std::vector<CheckReport>> chain_;
  std::optional<CertificateConstants> constants_;
  std::map<std::string, CsvTable> tables_;
};

struct RunOutcome {
  std::vector<CheckReport> reports;
  std::map<std::string, CsvTable> tables;
};

// Runs the groups in order, streaming each report to `writer` if given.
RunOutcome run(const RunConfig& cfg, const std::vector<std::string>& groups, ReportWriter* writer = nullptr,
               std::ostream* log = nullptr);

// One CSV per table as <dir>/<name>.csv.
void emit_tables(const std::map<std::string, CsvTable>& tables, const std::filesystem::path& dir);

enum ExitCode : int { kAllPassed = 0, kCheckFailed = 1, kConfigError = 2, kInternalError = 3 };

// Command-line front end; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wafm
