#include "sausage/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sausage {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_csv(std::istream& is,
                                                  const std::vector<std::string>& header) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: missing header");
  if (split(line) != header) throw std::runtime_error("csv: unexpected header '" + line + "'");
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw std::runtime_error("csv: wrong field count on line " + std::to_string(lineno));
    std::vector<double> r;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size() || c.empty())
        throw std::runtime_error("csv: bad number '" + c + "' on line " + std::to_string(lineno));
      r.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  os << "x,y\n";
  for (Eigen::Index i = 0; i < cloud.cols(); ++i)
    os << format_double(cloud(0, i)) << ',' << format_double(cloud(1, i)) << '\n';
}

PointCloud read_cloud_csv(std::istream& is) {
  const auto rows = read_numeric_csv(is, {"x", "y"});
  PointCloud c(2, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) c.col(static_cast<Eigen::Index>(i)) = Point(rows[i][0], rows[i][1]);
  return c;
}

void write_path_csv(std::ostream& os, const PathSample& path) {
  os << "t,x,y\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto p = path.point(i);
    os << format_double(path.times[i]) << ',' << format_double(p.x()) << ',' << format_double(p.y()) << '\n';
  }
}

PathSample read_path_csv(std::istream& is) {
  const auto rows = read_numeric_csv(is, {"t", "x", "y"});
  if (rows.empty()) throw std::runtime_error("path csv: no samples");
  PathSample p;
  p.times.resize(rows.size());
  p.points.resize(2, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.times[i] = rows[i][0];
    p.points.col(static_cast<Eigen::Index>(i)) = Point(rows[i][1], rows[i][2]);
    if (i > 0 && !(p.times[i] > p.times[i - 1])) throw std::runtime_error("path csv: times must increase");
  }
  p.params.x0 = p.point(0);
  p.params.T = p.times.back();
  return p;
}

void write_diagram_csv(std::ostream& os, const PersistenceDiagram& d) {
  os << "q,birth,death\n";
  for (int q = 0; q < 2; ++q)
    for (const auto& p : d.degree(q)) os << q << ',' << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

PersistenceDiagram read_diagram_csv(std::istream& is) {
  PersistenceDiagram d;
  for (const auto& r : read_numeric_csv(is, {"q", "birth", "death"})) {
    const int q = static_cast<int>(r[0]);
    if (static_cast<double>(q) != r[0] || (q != 0 && q != 1))
      throw std::runtime_error("diagram csv: degree must be 0 or 1");
    d.degree(q).push_back({r[1], r[2]});
  }
  canonicalize(d);
  return d;
}

void write_weight_csv(std::ostream& os, const Weight& w) {
  os << "r,value\n";
  for (std::size_t i = 0; i < w.radii().size(); ++i)
    os << format_double(w.radii()[i]) << ',' << format_double(w.values()[i]) << '\n';
}

Weight read_weight_csv(std::istream& is) {
  std::vector<double> r, v;
  for (const auto& row : read_numeric_csv(is, {"r", "value"})) {
    r.push_back(row[0]);
    v.push_back(row[1]);
  }
  return Weight(std::move(r), std::move(v));
}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::operator<<(double x) {
  rows_.back().push_back(format_double(x));
  return *this;
}

CsvTable& CsvTable::operator<<(long long x) {
  rows_.back().push_back(std::to_string(x));
  return *this;
}

CsvTable& CsvTable::operator<<(const std::string& s) {
  rows_.back().push_back(s);
  return *this;
}

void CsvTable::write(std::ostream& os) const {
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << '\n';
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw std::logic_error("csv table: row width mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

void CsvTable::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write(f);
}

}  // namespace sausage
