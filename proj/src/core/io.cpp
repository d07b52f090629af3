#include "core/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>

#include "core/error.hpp"

namespace blowup {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  return out;
}

// JSON has no infinity; non-finite numbers become strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json field(const Field& f) { return json(f); }

Field field_from(const json& j, const char* name) {
  if (!j.contains(name) || !j.at(name).is_array()) throw Error(ErrorKind::Io, std::string("record lacks field '") + name + "'");
  return j.at(name).get<Field>();
}

double num_from(const json& j, const char* name) {
  if (!j.contains(name) || !j.at(name).is_number()) throw Error(ErrorKind::Io, std::string("record lacks number '") + name + "'");
  return j.at(name).get<double>();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(open_out(path)), columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }
CsvWriter& CsvWriter::cell(long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (filled_ > 0) out_ << ",";
  if (v.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char c : v) out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
  } else {
    out_ << v;
  }
  ++filled_;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw Error(ErrorKind::Io, "CSV row has the wrong number of cells");
  out_ << "\n";
  filled_ = 0;
}

JsonlWriter::JsonlWriter(const std::string& path) : out_(open_out(path)) {}

void JsonlWriter::write(const json& j) { out_ << j.dump() << "\n"; }

void write_grid(const std::string& path, const std::vector<std::string>& names, const std::vector<const Field*>& columns) {
  auto out = open_out(path);
  out << "#";
  for (const auto& n : names) out << " " << n;
  out << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? " " : "") << format_number((*columns[c])[i]);
    out << "\n";
  }
}

void write_text(const std::string& path, const std::string& text) { open_out(path) << text; }

void write_json(const std::string& path, const json& j) { open_out(path) << j.dump(2) << "\n"; }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create directory '" + path + "': " + ec.message());
}

json build_versions() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION;
  return {{"blowup", "0.1.0"},
          {"compiler", __VERSION__},
          {"eigen", eigen.str()},
          {"boost", BOOST_LIB_VERSION},
          {"fftw", std::string(fftw_version)}};
}

json provenance_header(const RunConfig& cfg, const std::string& command) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << config_hash(cfg);
  return {{"command", command},
          {"config_hash", hash.str()},
          {"versions", build_versions()},
          {"grid", to_json(cfg.grid)},
          {"seed", cfg.seed},
          {"threads_env", std::getenv("BLOWUP_THREADS") ? std::getenv("BLOWUP_THREADS") : ""},
          {"config", to_ini(cfg)}};
}

json to_json(const GridSpec& g) {
  return {{"dim", g.dim}, {"points", g.points}, {"length", g.length}, {"origin", g.origin}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.dim = static_cast<int>(num_from(j, "dim"));
  g.points = static_cast<int>(num_from(j, "points"));
  g.length = num_from(j, "length");
  g.origin = num_from(j, "origin");
  return g;
}

json to_json(const ControlBudget& b) {
  return {{"epsilon", b.epsilon}, {"alpha", b.alpha},         {"norm_exact", b.norm_exact},
          {"norm_phi", b.norm_phi}, {"norm_tail", b.norm_tail}, {"total", b.total},
          {"pass", b.pass}};
}

json to_json(const IntegratorConfig& c) {
  return {{"T_start", c.T_start}, {"b", c.b},           {"cfl", c.cfl},
          {"dtau_max", c.dtau_max}, {"dw_max", c.dw_max}, {"shift", c.shift},
          {"u_guard", c.u_guard}, {"energy_s", c.energy_s}};
}

json record_to_json(const CauchyDataRecord& r) {
  const Provenance& p = r.provenance;
  return {{"slice_time", r.slice_time},
          {"alpha", r.alpha},
          {"s0", r.s0},
          {"grid", to_json(r.grid)},
          {"u", field(r.u)},
          {"ut", field(r.ut)},
          {"parts",
           {{"exact", {{"u", field(r.exact.u)}, {"ut", field(r.exact.ut)}}},
            {"phi", {{"u", field(r.phi.u)}, {"ut", field(r.phi.ut)}}},
            {"tail", {{"u", field(r.tail.u)}, {"ut", field(r.tail.ut)}}}}},
          {"budget", to_json(r.budget)},
          {"provenance",
           {{"surface", p.surface},
            {"lambda", number(p.lambda)},
            {"datum", p.datum},
            {"theta", number(p.theta)},
            {"alpha", p.alpha},
            {"grid", to_json(p.grid)},
            {"integrator", to_json(p.integrator)}}}};
}

CauchyDataRecord record_from_json(const json& j) {
  CauchyDataRecord r;
  r.slice_time = num_from(j, "slice_time");
  r.alpha = num_from(j, "alpha");
  r.s0 = num_from(j, "s0");
  if (!j.contains("grid")) throw Error(ErrorKind::Io, "record lacks 'grid'");
  r.grid = grid_from_json(j.at("grid"));
  r.u = field_from(j, "u");
  r.ut = field_from(j, "ut");
  const auto n = static_cast<std::size_t>(r.grid.points);
  if (r.u.size() != n || r.ut.size() != n) throw Error(ErrorKind::Io, "record fields do not match the grid size");
  if (j.contains("parts")) {
    const json& parts = j.at("parts");
    auto part = [&](const char* name) {
      if (!parts.contains(name)) throw Error(ErrorKind::Io, std::string("record lacks part '") + name + "'");
      return SlicePart{field_from(parts.at(name), "u"), field_from(parts.at(name), "ut")};
    };
    r.exact = part("exact");
    r.phi = part("phi");
    r.tail = part("tail");
  }
  if (j.contains("provenance")) {
    const json& p = j.at("provenance");
    r.provenance.surface = p.value("surface", "");
    r.provenance.datum = p.value("datum", "");
    if (p.contains("lambda") && p.at("lambda").is_number()) r.provenance.lambda = p.at("lambda").get<double>();
    if (p.contains("theta") && p.at("theta").is_number()) r.provenance.theta = p.at("theta").get<double>();
    r.provenance.alpha = p.value("alpha", r.alpha);
    r.provenance.grid = r.grid;
  }
  if (j.contains("budget")) {
    const json& b = j.at("budget");
    r.budget.epsilon = b.value("epsilon", 0.0);
    r.budget.alpha = b.value("alpha", r.alpha);
    r.budget.norm_exact = b.value("norm_exact", 0.0);
    r.budget.norm_phi = b.value("norm_phi", 0.0);
    r.budget.norm_tail = b.value("norm_tail", 0.0);
    r.budget.total = b.value("total", 0.0);
    r.budget.pass = b.value("pass", false);
  }
  return r;
}

}  // namespace blowup
