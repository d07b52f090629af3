#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/config.hpp"
#include "core/pipeline.hpp"
#include "core/verifier.hpp"

namespace blowup {

using nlohmann::json;

/// Shortest round-trip decimal form; "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double v);

/// CSV with a one-line header.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  CsvWriter& cell(double v);
  CsvWriter& cell(long v);
  CsvWriter& cell(int v) { return cell(static_cast<long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// One JSON object per line.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path);
  void write(const json& j);

 private:
  std::ofstream out_;
};

/// Whitespace-separated columns with a '#' header line.
void write_grid(const std::string& path, const std::vector<std::string>& names, const std::vector<const Field*>& columns);
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

/// Creates the directory (and parents). Throws Io.
void ensure_directory(const std::string& path);

/// Library and dependency versions.
json build_versions();

/// Config hash, versions, grid, seed and the full config text.
json provenance_header(const RunConfig& cfg, const std::string& command);

json to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j);
json to_json(const ControlBudget& b);
json to_json(const IntegratorConfig& c);

json record_to_json(const CauchyDataRecord& r);
/// Throws Io on missing fields.
CauchyDataRecord record_from_json(const json& j);

}  // namespace blowup
