#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sausage/types.hpp"

namespace sausage {

struct Triangulation {
  // Distinct input points in lexicographic (x, then y) order.
  PointCloud points;
  // For each vertex, the index of its first occurrence in the input cloud.
  std::vector<std::size_t> source;
  // Vertex pairs with u < v.
  std::vector<std::array<int, 2>> edges;
  // Vertex triples in increasing order.
  std::vector<std::array<int, 3>> triangles;
  // Edge ids bounding each triangle.
  std::vector<std::array<int, 3>> triangle_edges;

  std::size_t n_vertices() const { return static_cast<std::size_t>(points.cols()); }
};

// Removes exact duplicates, then triangulates by divide and conquer on a quad-edge
// structure with exact predicates. Degenerate inputs (collinear, cocircular) are
// handled exactly; cocircular ties accept any valid diagonal.
Triangulation delaunay(const PointCloud& cloud);

}  // namespace sausage
