#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace ricsol::cli {

using Json = nlohmann::ordered_json;

// {case, command, grid, mode, fd_step, tolerance, seed, metrics, pass, provenance{anchor}}
struct Report {
  std::string case_id;
  std::string command;
  Json grid = Json::object();
  std::string mode = "analytic";
  double fd_step = 1e-4;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  Json metrics = Json::object();
  bool pass = false;
  std::string anchor;
};

Json to_json(const Report& r);
// Throws ParseError on missing or mistyped keys.
Report report_from_json(const Json& j);
std::string dump(const Report& r);
Report parse_report(const std::string& text);

// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::string& path, const std::string& text);

}  // namespace ricsol::cli
