#include "spincat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spincat {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header.size())
    throw std::invalid_argument("CsvTable: row width does not match header");
  rows.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

CsvTable CsvTable::parse(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.add_row(std::move(cells));
    }
  }
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             std::uint64_t seed, const std::string& format, int workers,
                             const std::vector<std::string>& outputs) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["seed"] = seed;
  manifest["format"] = format;
  manifest["workers"] = workers;
  manifest["version"] = "spincat 1.0.0";
  manifest["outputs"] = outputs;
  return manifest;
}

nlohmann::json load_config(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path));
  if (j.is_object() && j.contains("config") && j.contains("command")) return j["config"];
  return j;
}

void check_known_keys(const nlohmann::json& config, const std::vector<std::string>& allowed,
                      const std::string& command) {
  if (!config.is_object()) throw std::invalid_argument(command + ": config must be an object");
  for (auto it = config.begin(); it != config.end(); ++it) {
    bool known = false;
    for (const auto& key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument(command + ": unknown config key \"" + it.key() + "\"");
  }
}

}  // namespace spincat
