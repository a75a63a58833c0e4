#include "sausage/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "sausage/csv.hpp"
#include "sausage/predicates.hpp"

namespace sausage {

double circumradius(const Point& a, const Point& b, const Point& c) {
  // The side lengths are well conditioned; only the area needs exact help.
  const double cross = orient2d_value(a, b, c);
  return (b - a).norm() * (c - a).norm() * (c - b).norm() / (2.0 * std::abs(cross));
}

Filtration alpha_filtration(const Triangulation& tri) {
  const std::size_t nv = tri.n_vertices();
  const std::size_t ne = tri.edges.size();
  const std::size_t nt = tri.triangles.size();
  const auto& P = tri.points;

  std::vector<double> tval(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& s = tri.triangles[t];
    tval[t] = circumradius(P.col(s[0]), P.col(s[1]), P.col(s[2]));
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> eval(ne);
  std::vector<double> coface_min(ne, inf);
  std::vector<char> attached(ne, 0);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& uv = tri.edges[e];
    eval[e] = 0.5 * (P.col(uv[1]) - P.col(uv[0])).norm();
  }
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& s = tri.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const auto e = static_cast<std::size_t>(tri.triangle_edges[t][static_cast<std::size_t>(k)]);
      coface_min[e] = std::min(coface_min[e], tval[t]);
      const auto& uv = tri.edges[e];
      int w = s[0] + s[1] + s[2] - uv[0] - uv[1];
      const Point pu = P.col(uv[0]) - P.col(w);
      const Point pv = P.col(uv[1]) - P.col(w);
      if (pu.dot(pv) < 0.0) attached[e] = 1;  // opposite vertex inside the diametral disk
    }
  }
  for (std::size_t e = 0; e < ne; ++e) {
    if (attached[e]) eval[e] = coface_min[e];
    eval[e] = std::min(eval[e], coface_min[e]);
  }

  Filtration f;
  f.n_vertices = nv;
  f.points = P;
  f.simplices.reserve(nv + ne + nt);
  for (std::size_t v = 0; v < nv; ++v) {
    Simplex s;
    s.dim = 0;
    s.vertices = {static_cast<int>(v), -1, -1};
    f.simplices.push_back(s);
  }
  for (std::size_t e = 0; e < ne; ++e) {
    Simplex s;
    s.dim = 1;
    s.vertices = {tri.edges[e][0], tri.edges[e][1], -1};
    s.value = eval[e];
    f.simplices.push_back(s);
  }
  for (std::size_t t = 0; t < nt; ++t) {
    Simplex s;
    s.dim = 2;
    s.vertices = tri.triangles[t];
    s.value = tval[t];
    f.simplices.push_back(s);
  }

  std::vector<int> order(f.simplices.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& S = f.simplices;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const Simplex& a = S[static_cast<std::size_t>(i)];
    const Simplex& b = S[static_cast<std::size_t>(j)];
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
  });
  std::vector<int> pos(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

  std::vector<Simplex> sorted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto id = static_cast<std::size_t>(order[k]);
    Simplex s = S[id];
    if (s.dim == 1) {
      s.faces = {pos[static_cast<std::size_t>(s.vertices[0])], pos[static_cast<std::size_t>(s.vertices[1])], -1};
    } else if (s.dim == 2) {
      const auto t = id - nv - ne;
      for (int j = 0; j < 3; ++j)
        s.faces[static_cast<std::size_t>(j)] =
            pos[nv + static_cast<std::size_t>(tri.triangle_edges[t][static_cast<std::size_t>(j)])];
      std::sort(s.faces.begin(), s.faces.end());
    }
    sorted[k] = s;
  }
  f.simplices = std::move(sorted);
  return f;
}

Filtration alpha_filtration(const PointCloud& cloud) { return alpha_filtration(delaunay(cloud)); }

void validate(const Filtration& f) {
  std::size_t nv = 0;
  for (std::size_t k = 0; k < f.simplices.size(); ++k) {
    const Simplex& s = f.simplices[k];
    if (s.dim < 0 || s.dim > 2) throw std::invalid_argument("filtration: bad dimension");
    if (s.dim == 0) {
      ++nv;
      if (s.value != 0.0) throw std::invalid_argument("filtration: vertex with nonzero value");
      continue;
    }
    for (int j = 0; j < s.dim + 1; ++j) {
      const int fj = s.faces[static_cast<std::size_t>(j)];
      if (fj < 0 || static_cast<std::size_t>(fj) >= k)
        throw std::invalid_argument("filtration: face does not precede coface");
      const Simplex& face = f.simplices[static_cast<std::size_t>(fj)];
      if (face.dim != s.dim - 1) throw std::invalid_argument("filtration: face has wrong dimension");
      if (face.value > s.value) throw std::invalid_argument("filtration: values not monotone");
    }
    if (k > 0 && f.simplices[k - 1].value > s.value)
      throw std::invalid_argument("filtration: simplices not sorted by value");
  }
  if (nv != f.n_vertices) throw std::invalid_argument("filtration: vertex count mismatch");
}

std::array<std::size_t, 3> simplex_counts(const Filtration& f, double r) {
  std::array<std::size_t, 3> c{0, 0, 0};
  for (const Simplex& s : f.simplices) {
    if (s.value > r) break;
    ++c[static_cast<std::size_t>(s.dim)];
  }
  return c;
}

void write_filtration_csv(std::ostream& os, const Filtration& f) {
  os << "value,dim,v0,v1,v2\n";
  for (const Simplex& s : f.simplices) {
    os << format_double(s.value) << ',' << s.dim;
    for (int j = 0; j < 3; ++j) {
      os << ',';
      if (j <= s.dim) os << s.vertices[static_cast<std::size_t>(j)];
    }
    os << '\n';
  }
}

}  // namespace sausage
