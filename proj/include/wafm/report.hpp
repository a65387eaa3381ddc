#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wafm {

using json = nlohmann::ordered_json;

// Closed set of check identifiers. Every report must carry one of these.
const std::vector<std::string_view>& check_tags();
bool is_registered(std::string_view tag);

struct CheckReport {
  std::string id;
  std::string lattice;
  json params = json::object();
  // "residual": value must stay below tolerance.
  // "slack": value = rhs - lhs of an inequality, must stay above -tolerance.
  std::string kind = "residual";
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
  double wall_seconds = 0.0;
};

CheckReport residual_report(std::string id, std::string lattice, json params, double residual,
                            double tolerance);
// Passes iff lhs <= rhs + tolerance.
CheckReport bound_report(std::string id, std::string lattice, json params, double lhs, double rhs,
                         double tolerance);
CheckReport skipped_report(std::string id, std::string lattice, json params, std::string reason);

json to_json(const CheckReport& r);
bool all_passed(const std::vector<CheckReport>& reports);

// Serialized JSON-lines sink; safe to share between threads.
class ReportWriter {
 public:
  ReportWriter() = default;
  explicit ReportWriter(const std::filesystem::path& path);

  void write(const CheckReport& r);
  void write(const std::vector<CheckReport>& rs);
  std::size_t count() const { return count_; }

 private:
  std::mutex mu_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

std::string csv_field(std::string_view s);
// Shortest representation that reads back to the same double.
std::string format_number(double v);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace wafm
