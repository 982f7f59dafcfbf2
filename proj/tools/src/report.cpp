#include "ricsol_cli/report.hpp"

#include <filesystem>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "ricsol/errors.hpp"

namespace ricsol::cli {

Json to_json(const Report& r) {
  Json j;
  j["case"] = r.case_id;
  j["command"] = r.command;
  j["grid"] = r.grid;
  j["mode"] = r.mode;
  j["fd_step"] = r.fd_step;
  j["tolerance"] = r.tolerance;
  j["seed"] = r.seed;
  j["metrics"] = r.metrics;
  j["pass"] = r.pass;
  j["provenance"] = {{"anchor", r.anchor}};
  return j;
}

Report report_from_json(const Json& j) {
  try {
    Report r;
    r.case_id = j.at("case").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.grid = j.at("grid");
    r.mode = j.at("mode").get<std::string>();
    r.fd_step = j.at("fd_step").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.metrics = j.at("metrics");
    r.pass = j.at("pass").get<bool>();
    r.anchor = j.at("provenance").at("anchor").get<std::string>();
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::string dump(const Report& r) { return to_json(r).dump(2) + "\n"; }

Report parse_report(const std::string& text) {
  try {
    return report_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw DomainError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DomainError("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace ricsol::cli
