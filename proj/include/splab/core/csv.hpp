#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace splab {

/// Row-oriented CSV writer with fixed-precision formatting so re-runs with
/// the same seed produce byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  template <typename... Ts>
  void row(Ts&&... vals) {
    std::ostringstream os;
    os << std::setprecision(12);
    bool first = true;
    ((os << (first ? "" : ","), first = false, os << fmt(vals)), ...);
    rows_.push_back(os.str());
  }

  bool write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    bool first = true;
    for (const auto& h : header_) {
      if (!first) out << ',';
      first = false;
      out << h;
    }
    out << '\n';
    for (const auto& r : rows_) out << r << '\n';
    return static_cast<bool>(out);
  }

  std::string to_string() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& h : header_) {
      if (!first) out << ',';
      first = false;
      out << h;
    }
    out << '\n';
    for (const auto& r : rows_) out << r << '\n';
    return out.str();
  }

  std::size_t size() const { return rows_.size(); }

 private:
  static std::string fmt(const std::string& s) { return s; }
  static std::string fmt(const char* s) { return s; }
  static std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
  }
  static std::string fmt(int v) { return std::to_string(v); }
  static std::string fmt(long v) { return std::to_string(v); }
  static std::string fmt(long long v) { return std::to_string(v); }
  static std::string fmt(std::size_t v) { return std::to_string(v); }

  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

}  // namespace splab
