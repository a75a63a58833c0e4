#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sausage/geometry.hpp"

namespace sausage {

struct GridSpec {
  Point origin = Point::Zero();  // lower-left corner of pixel (0, 0)
  double h = 1.0;
  long width = 0;
  long height = 0;

  Point center(long ix, long iy) const {
    return Point(origin.x() + (static_cast<double>(ix) + 0.5) * h,
                 origin.y() + (static_cast<double>(iy) + 0.5) * h);
  }
  bool operator==(const GridSpec&) const = default;
};

// Pixel grid covering box inflated by r + 2h.
GridSpec grid_for(const BoundingBox& box, double r, double h);

class GridMask {
 public:
  GridMask() = default;
  explicit GridMask(const GridSpec& spec)
      : spec_(spec), bits_(static_cast<std::size_t>(spec.width * spec.height), 0) {}

  const GridSpec& spec() const { return spec_; }
  long width() const { return spec_.width; }
  long height() const { return spec_.height; }
  bool at(long ix, long iy) const { return bits_[index(ix, iy)] != 0; }
  void set(long ix, long iy, bool v = true) { bits_[index(ix, iy)] = v ? 1 : 0; }
  std::uint8_t* row(long iy) { return bits_.data() + static_cast<std::size_t>(iy * spec_.width); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }
  std::size_t count() const;
  bool subset_of(const GridMask& other) const;

 private:
  std::size_t index(long ix, long iy) const { return static_cast<std::size_t>(iy * spec_.width + ix); }
  GridSpec spec_;
  std::vector<std::uint8_t> bits_;
};

// Pixels whose centers lie within distance r (closed) of some cloud point.
GridMask rasterize(const PointCloud& cloud, double r, double h);
GridMask rasterize(const PointCloud& cloud, double r, const GridSpec& spec);
// Per-pixel reference evaluation of the same predicate.
GridMask rasterize_brute(const PointCloud& cloud, double r, const GridSpec& spec);

GridMask mask_and(const GridMask& a, const GridMask& b);
GridMask mask_or(const GridMask& a, const GridMask& b);
GridMask mask_minus(const GridMask& a, const GridMask& b);

struct Betti2 {
  long b0 = 0;
  long b1 = 0;
  bool operator==(const Betti2&) const = default;
};

// b0: 8-connected foreground components; b1: bounded 4-connected background components.
Betti2 betti_numbers(const GridMask& mask);

// Where two disk boundaries cross at a shallow angle, the 8/4 connectivity can
// pinch a pixel or two of background off the outside. A real hole of a union
// of r-disks contains a local maximum of the distance to the centers, which
// sits well beyond r away from critical radii; the pockets do not. So with
// `cover` the same set rasterized at r + kHoleDepthPixels * h on the same grid,
// only bounded background components reaching outside `cover` count as holes.
constexpr double kHoleDepthPixels = 2.0;
Betti2 betti_numbers(const GridMask& mask, const GridMask& cover);
// Betti numbers of the r-offset of a cloud, with the depth rule.
Betti2 offset_betti(const PointCloud& cloud, double r, double h);
// V - E + F of the union of closed foreground squares.
long euler_characteristic(const GridMask& mask);
double area(const GridMask& mask);

// Raw digital Betti numbers of the intersection of two r-offsets on a shared grid.
Betti2 intersect_betti(const PointCloud& a, const PointCloud& b, double r, double h);

void write_pbm(std::ostream& os, const GridMask& mask);

}  // namespace sausage
