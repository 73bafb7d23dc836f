#pragma once

// Run configuration and table/JSON serialization.
//
// Doubles are written with 17 significant digits so every table re-parses
// to the identical binary value.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flipclimb/follower.hpp"
#include "flipclimb/model.hpp"
#include "flipclimb/planner.hpp"

namespace flipclimb::io {

using json = nlohmann::ordered_json;

/// Raised for malformed configuration or unreadable tables.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  RobotDims dims;
  double height = 0.095;
  PlannerParams params;
  double slip = 0.0;
  int substeps = 10;
  double d_fine = 0.001;  // column spacing of the emitted space cloud
  std::string out = ".";
  std::vector<std::string> formats{"csv", "json", "svg"};

  bool wants(const std::string& fmt) const {
    for (const auto& f : formats)
      if (f == fmt) return true;
    return false;
  }

  void validate() const {
    try {
      dims.validate();
      params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!(height > dims.r)) throw ConfigError("height must exceed the wheel radius");
    if (!(slip >= 0.0 && slip <= 1.0)) throw ConfigError("slip must lie in [0, 1]");
    if (substeps < 1) throw ConfigError("substeps must be at least 1");
    if (!(d_fine > 0)) throw ConfigError("d_fine must be positive");
    for (const auto& f : formats)
      if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown output format '" + f + "'");
  }
};

inline std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parseDouble(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("trailing characters in number: '" + s + "'");
  return v;
}

// ---------------------------------------------------------------- config

namespace detail {

inline void rejectUnknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void readIf(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline json toJson(const RunConfig& c) {
  return json{
      {"dims", {{"l", c.dims.l}, {"f", c.dims.f}, {"b", c.dims.b}, {"r", c.dims.r}}},
      {"height", c.height},
      {"params",
       {{"d0", c.params.d0},
        {"delta_d", c.params.delta_d},
        {"delta_a", c.params.delta_a},
        {"delta_alpha", c.params.delta_alpha},
        {"alpha_lb", c.params.alpha_lb},
        {"alpha_ub", c.params.alpha_ub},
        {"omega_a", c.params.omega_a}}},
      {"slip", c.slip},
      {"substeps", c.substeps},
      {"d_fine", c.d_fine},
      {"out", c.out},
      {"formats", c.formats},
  };
}

/// Overlays the keys present in j onto base.
inline RunConfig runConfigFromJson(const json& j, RunConfig base = {}) {
  detail::rejectUnknown(j, {"dims", "height", "params", "slip", "substeps", "d_fine", "out", "formats"}, "config");
  if (j.contains("dims")) {
    const auto& d = j.at("dims");
    detail::rejectUnknown(d, {"l", "f", "b", "r"}, "config.dims");
    detail::readIf(d, "l", base.dims.l);
    detail::readIf(d, "f", base.dims.f);
    detail::readIf(d, "b", base.dims.b);
    detail::readIf(d, "r", base.dims.r);
  }
  if (j.contains("params")) {
    const auto& p = j.at("params");
    detail::rejectUnknown(p, {"d0", "delta_d", "delta_a", "delta_alpha", "alpha_lb", "alpha_ub", "omega_a"},
                          "config.params");
    detail::readIf(p, "d0", base.params.d0);
    detail::readIf(p, "delta_d", base.params.delta_d);
    detail::readIf(p, "delta_a", base.params.delta_a);
    detail::readIf(p, "delta_alpha", base.params.delta_alpha);
    detail::readIf(p, "alpha_lb", base.params.alpha_lb);
    detail::readIf(p, "alpha_ub", base.params.alpha_ub);
    detail::readIf(p, "omega_a", base.params.omega_a);
  }
  detail::readIf(j, "height", base.height);
  detail::readIf(j, "slip", base.slip);
  detail::readIf(j, "substeps", base.substeps);
  detail::readIf(j, "d_fine", base.d_fine);
  detail::readIf(j, "out", base.out);
  detail::readIf(j, "formats", base.formats);
  base.validate();
  return base;
}

inline RunConfig loadRunConfig(const std::filesystem::path& file, RunConfig base = {}) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return runConfigFromJson(j, std::move(base));
}

// ---------------------------------------------------------------- csv

inline constexpr const char* kPathHeader = "d,a,alpha,beta,theta,l_t";
inline constexpr const char* kSpaceHeader = "d,a,alpha";
inline constexpr const char* kFollowHeader = "t,alpha_t,alpha_s,beta_t,beta_s,d_t,d_s,theta_t,theta_s,cx,cz";
inline constexpr const char* kCenterHeader = "t,x,z";

namespace detail {

inline std::vector<std::string> splitCells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// Yields the rows of a table after checking its header.
inline std::vector<std::vector<std::string>> readTable(std::istream& in, const std::string& header,
                                                       std::size_t columns) {
  std::string line;
  if (!std::getline(in, line) || line != header) throw ConfigError("expected header '" + header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = splitCells(line);
    if (cells.size() != columns)
      throw ConfigError("row " + std::to_string(rows.size() + 1) + ": expected " + std::to_string(columns) +
                        " cells");
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline void writeRow(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << formatDouble(v);
    first = false;
  }
  os << '\n';
}

}  // namespace detail

inline void writePathCsv(std::ostream& os, const MorphologyPath& mp) {
  os << kPathHeader << '\n';
  for (const auto& m : mp) {
    os << formatDouble(m.triplet.d) << ',' << formatDouble(m.triplet.a) << ',' << formatDouble(m.triplet.alpha)
       << ',' << formatDouble(m.beta) << ',' << formatDouble(m.theta) << ',';
    if (m.l_t) os << formatDouble(*m.l_t);
    os << '\n';
  }
}

inline MorphologyPath readPathCsv(std::istream& in) {
  MorphologyPath mp;
  for (const auto& c : detail::readTable(in, kPathHeader, 6)) {
    FullMorphology m;
    m.triplet = {parseDouble(c[0]), parseDouble(c[1]), parseDouble(c[2])};
    m.beta = parseDouble(c[3]);
    m.theta = parseDouble(c[4]);
    if (!c[5].empty()) m.l_t = parseDouble(c[5]);
    mp.push_back(m);
  }
  return mp;
}

inline void writeSpaceCsv(std::ostream& os, const std::vector<ConfigTriplet>& points) {
  os << kSpaceHeader << '\n';
  for (const auto& p : points) detail::writeRow(os, {p.d, p.a, p.alpha});
}

inline std::vector<ConfigTriplet> readSpaceCsv(std::istream& in) {
  std::vector<ConfigTriplet> out;
  for (const auto& c : detail::readTable(in, kSpaceHeader, 3))
    out.push_back({parseDouble(c[0]), parseDouble(c[1]), parseDouble(c[2])});
  return out;
}

inline void writeFollowCsv(std::ostream& os, const FollowLog& log) {
  os << kFollowHeader << '\n';
  for (const auto& r : log.records)
    detail::writeRow(os, {r.t, r.alpha_t, r.alpha_s, r.beta_t, r.beta_s, r.d_t, r.d_s, r.theta_t, r.theta_s,
                          r.cx, r.cz});
}

inline std::vector<FollowRecord> readFollowCsv(std::istream& in) {
  std::vector<FollowRecord> out;
  for (const auto& c : detail::readTable(in, kFollowHeader, 11)) {
    FollowRecord r{};
    double* fields[] = {&r.t,   &r.alpha_t, &r.alpha_s, &r.beta_t, &r.beta_s, &r.d_t,
                        &r.d_s, &r.theta_t, &r.theta_s, &r.cx,     &r.cz};
    for (std::size_t i = 0; i < 11; ++i) *fields[i] = parseDouble(c[i]);
    out.push_back(r);
  }
  return out;
}

inline void writeCenterCsv(std::ostream& os, const FollowLog& log) {
  os << kCenterHeader << '\n';
  for (const auto& r : log.records) detail::writeRow(os, {r.t, r.cx, r.cz});
}

// ---------------------------------------------------------------- json

inline json criticalsJson(const CriticalPoints& cp) {
  json j;
  for (int i = 1; i <= 9; ++i) j["dX" + std::to_string(i)] = cp(i);
  j["degenerate"] = cp.degenerate;
  json collapsed = json::array();
  for (int i = 1; i <= 9; ++i)
    if (cp.collapsed[static_cast<std::size_t>(i - 1)]) collapsed.push_back("dX" + std::to_string(i));
  j["collapsed"] = collapsed;
  return j;
}

inline void writeCriticalsCsv(std::ostream& os, const CriticalPoints& cp) {
  os << "name,d,collapsed\n";
  for (int i = 1; i <= 9; ++i)
    os << "dX" << i << ',' << formatDouble(cp(i)) << ',' << (cp.collapsed[static_cast<std::size_t>(i - 1)] ? 1 : 0)
       << '\n';
}

inline json followJson(const FollowLog& log) {
  json records = json::array();
  for (const auto& r : log.records)
    records.push_back({{"t", r.t},
                       {"alpha_t", r.alpha_t}, {"alpha_s", r.alpha_s},
                       {"beta_t", r.beta_t}, {"beta_s", r.beta_s},
                       {"d_t", r.d_t}, {"d_s", r.d_s},
                       {"theta_t", r.theta_t}, {"theta_s", r.theta_s},
                       {"cx", r.cx}, {"cz", r.cz}});
  return json{{"records", records},
              {"final", {{"d", log.final.morphology.triplet.d},
                         {"a", log.final.morphology.triplet.a},
                         {"alpha", log.final.morphology.triplet.alpha},
                         {"beta", log.final.morphology.beta},
                         {"theta", log.final.morphology.theta},
                         {"odometer", log.final.odometer},
                         {"time", log.final.time}}}};
}

// ---------------------------------------------------------------- files

/// Writes text to dir/name, creating dir if needed.
inline void writeFile(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

template <class Writer>
std::string toString(Writer&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace flipclimb::io
