#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sausage/delaunay.hpp"

namespace sausage {

struct Simplex {
  int dim = 0;
  std::array<int, 3> vertices{-1, -1, -1};  // sorted; unused slots are -1
  // Filtration positions of the codimension-one faces (vertices for an edge,
  // edges for a triangle); unused slots are -1.
  std::array<int, 3> faces{-1, -1, -1};
  double value = 0.0;  // ball radius at which the simplex enters
};

struct Filtration {
  std::vector<Simplex> simplices;  // sorted by (value, dim, vertices)
  std::size_t n_vertices = 0;
  PointCloud points;  // deduplicated vertex positions
};

double circumradius(const Point& a, const Point& b, const Point& c);

// Alpha filtration in the radius parametrisation.
Filtration alpha_filtration(const Triangulation& tri);
Filtration alpha_filtration(const PointCloud& cloud);

// Throws if faces do not precede cofaces or values decrease along a face relation.
void validate(const Filtration& f);

// Sub-complex at scale r: counts of simplices with value <= r, per dimension.
std::array<std::size_t, 3> simplex_counts(const Filtration& f, double r);

void write_filtration_csv(std::ostream& os, const Filtration& f);

}  // namespace sausage
