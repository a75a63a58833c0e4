#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sausage/pathsim.hpp"
#include "sausage/persistence.hpp"
#include "sausage/weight.hpp"

namespace sausage {

// 17 significant digits; NaN as "nan".
std::string format_double(double x);

// Rows of a headed CSV as numbers. Throws on a header mismatch or a bad field.
std::vector<std::vector<double>> read_numeric_csv(std::istream& is,
                                                  const std::vector<std::string>& header);

void write_cloud_csv(std::ostream& os, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& is);

void write_path_csv(std::ostream& os, const PathSample& path);
PathSample read_path_csv(std::istream& is);

void write_diagram_csv(std::ostream& os, const PersistenceDiagram& d);
PersistenceDiagram read_diagram_csv(std::istream& is);

void write_weight_csv(std::ostream& os, const Weight& w);
Weight read_weight_csv(std::istream& is);

// Minimal table writer: fixed header, rows of preformatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  CsvTable& row();
  CsvTable& operator<<(double x);
  CsvTable& operator<<(long long x);
  CsvTable& operator<<(int x) { return *this << static_cast<long long>(x); }
  CsvTable& operator<<(long x) { return *this << static_cast<long long>(x); }
  CsvTable& operator<<(std::size_t x) { return *this << static_cast<long long>(x); }
  CsvTable& operator<<(bool x) { return *this << static_cast<long long>(x ? 1 : 0); }
  CsvTable& operator<<(const std::string& s);
  CsvTable& operator<<(const char* s) { return *this << std::string(s); }
  void write(std::ostream& os) const;
  void save(const std::string& path) const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace sausage
