#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathwise/dyadic.hpp"
#include "pathwise/error.hpp"
#include "pathwise/faber_schauder.hpp"

namespace pathwise::io {

/// Shortest-roundtrip-safe decimal: 17 significant digits.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with header and one "t,value" row per grid point.
inline void write_path_csv(std::ostream& os, const SampledPath& path, const std::string& header = "t,value") {
  os << header << '\n';
  const DyadicGrid grid = path.grid();
  for (std::size_t k = 0; k < path.size(); ++k) os << format_double(grid.point(k)) << ',' << format_double(path[k]) << '\n';
}

/// Reads "t,value" rows; the row count fixes the level and every t must be
/// the matching dyadic point.
inline SampledPath read_path_csv(std::istream& is) {
  std::string line;
  std::vector<double> ts, vs;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("CSV row without comma: '" + line + "'");
    try {
      const double t = std::stod(line.substr(0, comma));
      const double v = std::stod(line.substr(comma + 1));
      ts.push_back(t);
      vs.push_back(v);
    } catch (const std::invalid_argument&) {
      if (!first) throw DomainError("malformed CSV row: '" + line + "'");
    }
    first = false;
  }
  if (vs.size() < 2) throw DomainError("a path needs at least two rows");
  const std::size_t intervals = vs.size() - 1;
  if ((intervals & (intervals - 1)) != 0) {
    throw DomainError("row count " + std::to_string(vs.size()) + " is not 2^n + 1");
  }
  int level = 0;
  while ((std::size_t{1} << level) < intervals) ++level;
  const DyadicGrid grid(level);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (std::abs(ts[k] - grid.point(k)) > 1e-15) {
      throw DomainError("row " + std::to_string(k) + " has t = " + format_double(ts[k]) + ", expected " +
                        format_double(grid.point(k)));
    }
  }
  return SampledPath(level, std::move(vs));
}

inline nlohmann::json path_to_json(const SampledPath& path) {
  return {{"level", path.level()}, {"values", std::vector<double>(path.values().begin(), path.values().end())}};
}

inline SampledPath path_from_json(const nlohmann::json& j) {
  try {
    return SampledPath(j.at("level").get<int>(), j.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad path JSON: ") + e.what());
  }
}

inline nlohmann::json coefficients_to_json(const FSCoefficients& c) {
  nlohmann::json theta = nlohmann::json::array();
  for (int m = 0; m < c.depth(); ++m) theta.push_back(std::vector<double>(c.row(m).begin(), c.row(m).end()));
  return {{"anchor", c.anchor()}, {"slope", c.slope()}, {"theta", theta}};
}

inline FSCoefficients coefficients_from_json(const nlohmann::json& j) {
  try {
    return FSCoefficients(j.at("anchor").get<double>(), j.at("slope").get<double>(),
                          j.at("theta").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad coefficient JSON: ") + e.what());
  }
}

inline bool has_json_extension(const std::string& file) {
  return file.size() >= 5 && file.compare(file.size() - 5, 5, ".json") == 0;
}

/// Loads a path from CSV, or from JSON when the name ends in ".json".
inline SampledPath load_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DomainError("cannot open '" + file + "'");
  if (has_json_extension(file)) {
    try {
      return path_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw DomainError("'" + file + "': " + e.what());
    }
  }
  return read_path_csv(in);
}

inline void save_path(const std::string& file, const SampledPath& path) {
  std::ofstream out(file);
  if (!out) throw DomainError("cannot write '" + file + "'");
  if (has_json_extension(file)) {
    out << path_to_json(path).dump() << '\n';
  } else {
    write_path_csv(out, path);
  }
}

}  // namespace pathwise::io
