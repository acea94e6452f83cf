#include "cli/output.hpp"

#include <cmath>
#include <cstdio>

namespace circreg::cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (const auto& h : header) *this << h;
  end_row();
}

CsvWriter& CsvWriter::operator<<(const std::string& cell) {
  if (cell_++ > 0) out_ << ',';
  out_ << cell;
  return *this;
}

void CsvWriter::end_row() {
  if (cell_ != columns_) throw std::logic_error("csv row has the wrong number of cells");
  out_ << '\n';
  cell_ = 0;
}

Manifest::Manifest(std::string command, std::uint64_t seed) : start_(std::chrono::steady_clock::now()) {
  doc_["command"] = std::move(command);
  doc_["seed"] = seed;
  doc_["version"] = CIRCREG_VERSION;
  doc_["parameters"] = nlohmann::json::object();
  doc_["diagnostics"] = nlohmann::json::object();
  doc_["artifacts"] = nlohmann::json::array();
  doc_["warnings"] = nlohmann::json::array();
}

void Manifest::write(const std::filesystem::path& dir) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  doc_["wall_clock_seconds"] = secs;
  std::ofstream out(dir / "manifest.json");
  out << doc_.dump(2) << '\n';
}

}  // namespace circreg::cli
