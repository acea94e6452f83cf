#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace circreg::cli {

// Fixed-format numbers so that CSVs are byte-identical across runs.
std::string fmt(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  CsvWriter& operator<<(const std::string& cell);
  CsvWriter& operator<<(double v) { return *this << fmt(v); }
  CsvWriter& operator<<(int v) { return *this << std::to_string(v); }
  CsvWriter& operator<<(std::size_t v) { return *this << std::to_string(v); }
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t cell_ = 0;
};

// Collects parameters and diagnostics and writes manifest.json.
class Manifest {
 public:
  Manifest(std::string command, std::uint64_t seed);
  nlohmann::json& params() { return doc_["parameters"]; }
  nlohmann::json& diagnostics() { return doc_["diagnostics"]; }
  void add_artifact(const std::string& name) { doc_["artifacts"].push_back(name); }
  void warn(const std::string& message) { doc_["warnings"].push_back(message); }
  void write(const std::filesystem::path& dir);

 private:
  nlohmann::json doc_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace circreg::cli
