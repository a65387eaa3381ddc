#include "wafm/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wafm {

const std::vector<std::string_view>& check_tags() {
  static const std::vector<std::string_view> tags = {
      // unitary transformations and the reflection
      "unitarity",
      "u2-phase-action",
      "u2-spin-invariance",
      "kinetic-u2-form",
      "alpha1-action",
      "alpha1-spin-invariance",
      "odd-action",
      "odd-majorana-action",
      "odd-spin-parity",
      "reflection-algebra",
      "kinetic-boundary-majorana",
      "kinetic-boundary-rp-form",
      "kinetic-bulk-pair-form",
      "kinetic-dir2-pair-form",
      "kinetic-dir3-pair-form",
      "spin1-image",
      "spin2-image",
      "spin2-imaginary",
      "spin3-image",
      "spin1-square-form",
      "spin2-square-form",
      "spin3-square-form",
      "reflection-kinetic",
      "reflection-spin-squares",
      "reflection-onsite",
      "reflection-sbf",
      "decomposition",
      "decomposition-reflection",
      "rotation-alpha-relations",
      "rotation-alpha1",
      "rotation-alpha2",
      "rotation-alpha3",
      "rotation-fock-kinetic",
      // thermal
      "sector-trace",
      "duhamel-quadrature",
      "gaussian-domination",
      "gaussian-domination-odd-frame",
      "gaussian-domination-curvature",
      "infrared-bound",
      "double-commutator-positivity",
      "double-commutator-interaction",
      "local-double-commutator",
      "dls-bound",
      "dls-bound-weak",
      "sum-rule",
      "sum-rule-isotropy",
      "lro-two-forms",
      // certificate chain
      "neel-correlations",
      "neel-kinetic",
      "peierls-bound",
      "max-entropy-identity",
      "entropy-cap",
      "energy-upper-bound",
      "correlator-chain",
      "correlator-lower-bound",
      "certificate",
      "region-monotone",
      // lattice integrals
      "integral-K",
      "integral-gap",
  };
  return tags;
}

bool is_registered(std::string_view tag) {
  const auto& t = check_tags();
  return std::find(t.begin(), t.end(), tag) != t.end();
}

namespace {

CheckReport base(std::string id, std::string lattice, json params) {
  if (!is_registered(id)) throw std::invalid_argument("unregistered check id: " + id);
  CheckReport r;
  r.id = std::move(id);
  r.lattice = std::move(lattice);
  r.params = std::move(params);
  return r;
}

}  // namespace

CheckReport residual_report(std::string id, std::string lattice, json params, double residual,
                            double tolerance) {
  CheckReport r = base(std::move(id), std::move(lattice), std::move(params));
  r.kind = "residual";
  r.value = residual;
  r.tolerance = tolerance;
  r.passed = std::isfinite(residual) && residual < tolerance;
  return r;
}

CheckReport bound_report(std::string id, std::string lattice, json params, double lhs, double rhs,
                         double tolerance) {
  CheckReport r = base(std::move(id), std::move(lattice), std::move(params));
  r.kind = "slack";
  r.value = rhs - lhs;
  r.tolerance = tolerance;
  r.passed = std::isfinite(r.value) && lhs <= rhs + tolerance;
  r.params["lhs"] = lhs;
  r.params["rhs"] = rhs;
  return r;
}

CheckReport skipped_report(std::string id, std::string lattice, json params, std::string reason) {
  CheckReport r = base(std::move(id), std::move(lattice), std::move(params));
  r.kind = "skipped";
  r.passed = true;
  r.note = std::move(reason);
  return r;
}

json to_json(const CheckReport& r) {
  json j;
  j["id"] = r.id;
  j["lattice"] = r.lattice;
  j["params"] = r.params;
  j["kind"] = r.kind;
  j["value"] = std::isfinite(r.value) ? json(r.value) : json(nullptr);
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  if (!r.note.empty()) j["note"] = r.note;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

ReportWriter::ReportWriter(const std::filesystem::path& path) : out_(path, std::ios::app) {
  if (!out_) throw std::runtime_error("cannot open report file " + path.string());
}

void ReportWriter::write(const CheckReport& r) {
  std::lock_guard lock(mu_);
  if (out_.is_open()) {
    out_ << to_json(r).dump() << '\n';
    out_.flush();
  }
  ++count_;
}

void ReportWriter::write(const std::vector<CheckReport>& rs) {
  for (const auto& r : rs) write(r);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::invalid_argument("CSV row width does not match header");
  rows.push_back(std::move(row));
}

std::string csv_field(std::string_view s) {
  const bool quote = s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!quote) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write CSV file " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_field(cells[i]);
    }
    out << "\r\n";
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

}  // namespace wafm
