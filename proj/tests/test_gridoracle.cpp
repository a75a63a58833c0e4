#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sausage/gridoracle.hpp"
#include "support.hpp"

using namespace sausage;

namespace {

PointCloud single(double x, double y) {
  PointCloud c(2, 1);
  c << x, y;
  return c;
}

PointCloud equilateral(double s) {
  PointCloud c(2, 3);
  c << 0.0, s, s / 2, 0.0, 0.0, s * std::sqrt(3.0) / 2;
  return c;
}

}  // namespace

TEST_CASE("disk area converges") {
  const auto m = rasterize(single(0.3, -0.2), 1.0, 0.01);
  CHECK(std::abs(area(m) - M_PI) / M_PI < 0.02);
  const auto fine = rasterize(single(0, 0), 1.0, 0.005);
  CHECK(std::abs(area(fine) - M_PI) / M_PI < 0.01);
  CHECK(area(GridMask(grid_for(bounding_box(single(0, 0)), 1.0, 0.1))) == 0.0);
}

TEST_CASE("rasterize equals the per-pixel predicate") {
  CounterRng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = testsupport::uniform_cloud(rng, 1 + static_cast<int>(rng.below(15)));
    const double r = trial % 8 == 0 ? 0.0 : rng.uniform(0.0, 0.3);
    const double h = rng.uniform(0.004, 0.03);
    const auto spec = grid_for(bounding_box(c), std::max(r, 0.05), h);
    CHECK(rasterize(c, r, spec).bits() == rasterize_brute(c, r, spec).bits());
  }
}

TEST_CASE("r = 0 marks only pixels centred on a point") {
  GridSpec spec;
  spec.origin = Point(-0.05, -0.05);
  spec.h = 0.1;
  spec.width = spec.height = 10;
  PointCloud c(2, 2);
  c.col(0) = spec.center(3, 4);
  c.col(1) = Point(0.333, 0.777);
  const auto m = rasterize(c, 0.0, spec);
  CHECK(m.count() == 1);
  CHECK(m.at(3, 4));
}

TEST_CASE("masks and areas are monotone in r") {
  CounterRng rng(2);
  const auto c = testsupport::uniform_cloud(rng, 12);
  const auto spec = grid_for(bounding_box(c), 0.5, 0.01);
  GridMask prev = rasterize(c, 0.0, spec);
  for (double r = 0.02; r <= 0.5; r += 0.02) {
    const auto m = rasterize(c, r, spec);
    CHECK(prev.subset_of(m));
    CHECK(area(prev) <= area(m));
    prev = m;
  }
}

TEST_CASE("betti numbers of simple shapes") {
  const auto disk = rasterize(single(0, 0), 1.0, 0.02);
  CHECK(betti_numbers(disk) == Betti2{1, 0});
  CHECK(betti_numbers(GridMask(disk.spec())) == Betti2{0, 0});

  // Annulus from the two-cloud difference.
  const auto spec = disk.spec();
  const auto ring = mask_minus(rasterize(single(0, 0), 1.0, spec), rasterize(single(0, 0), 0.5, spec));
  CHECK(betti_numbers(ring) == Betti2{1, 1});

  const auto tri = equilateral(1.0);
  for (double r : {0.52, 0.55, 0.57}) CHECK(betti_numbers(rasterize(tri, r, 0.001)) == Betti2{1, 1});
  for (double r : {0.6, 0.8}) CHECK(betti_numbers(rasterize(tri, r, 0.001)) == Betti2{1, 0});
  CHECK(betti_numbers(rasterize(tri, 0.45, 0.005)) == Betti2{3, 0});
}

TEST_CASE("shallow disk crossings do not count as holes under the depth rule") {
  // Two disks crossing at about 32 degrees pinch one background pixel off at
  // the crossing point; the chain of three disks has no hole.
  PointCloud c(2, 3);
  c << 0.827014, 0.769674, 0.464236, 0.466143, 0.340630, 0.732655;
  const double r = 0.2343, h = 0.001;
  CHECK(betti_numbers(rasterize(c, r, h)) == Betti2{1, 1});
  CHECK(offset_betti(c, r, h) == Betti2{1, 0});

  // Real holes survive even 5 pixels short of their death radius.
  const auto tri = equilateral(1.0);
  const double death = 1.0 / std::sqrt(3.0);
  for (double r2 : {0.52, 0.55, death - 5 * h}) CHECK(offset_betti(tri, r2, h) == Betti2{1, 1});
  CHECK(offset_betti(tri, death + 5 * h, h) == Betti2{1, 0});
  const auto m = rasterize(tri, 0.55, h);
  CHECK_THROWS_AS(betti_numbers(m, rasterize(tri, 0.56, 0.002)), std::invalid_argument);
}

TEST_CASE("8/4 connectivity: diagonal pixels connect, enclosed 4-regions count") {
  GridSpec spec;
  spec.h = 1.0;
  spec.width = spec.height = 6;
  GridMask m(spec);
  m.set(1, 1);
  m.set(2, 2);
  CHECK(betti_numbers(m) == Betti2{1, 0});
  // A diamond of diagonal pixels encloses one 4-connected background pixel.
  GridMask d(spec);
  d.set(2, 1);
  d.set(1, 2);
  d.set(3, 2);
  d.set(2, 3);
  CHECK(betti_numbers(d) == Betti2{1, 1});
  CHECK(euler_characteristic(d) == 0);
}

TEST_CASE("Euler audit on random masks") {
  CounterRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    GridSpec spec;
    spec.width = 3 + static_cast<long>(rng.below(20));
    spec.height = 3 + static_cast<long>(rng.below(20));
    GridMask m(spec);
    const double density = rng.uniform(0.1, 0.9);
    for (long y = 0; y < spec.height; ++y)
      for (long x = 0; x < spec.width; ++x)
        if (rng.uniform() < density) m.set(x, y);
    const auto b = betti_numbers(m);
    CHECK(b.b1 >= 0);
    CHECK(euler_characteristic(m) == b.b0 - b.b1);
  }
  // Also on rasterized unions of disks.
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testsupport::uniform_cloud(rng, 15);
    const auto m = rasterize(c, rng.uniform(0.03, 0.3), 0.01);
    const auto b = betti_numbers(m);
    CHECK(euler_characteristic(m) == b.b0 - b.b1);
  }
}

TEST_CASE("intersections") {
  CounterRng rng(4);
  const auto a = testsupport::walk_cloud(rng, 10, Point(0, 0), 0.05, 0.1);
  PointCloud far = a;
  far.row(0).array() += 100.0;
  CHECK(intersect_betti(a, far, 0.2, 0.01) == Betti2{0, 0});
  CHECK(intersect_betti(a, a, 0.2, 0.01) == betti_numbers(rasterize(a, 0.2, grid_for(bounding_box(a), 0.2, 0.01))));
}

TEST_CASE("PBM dump") {
  GridSpec spec;
  spec.width = 3;
  spec.height = 2;
  GridMask m(spec);
  m.set(0, 0);
  m.set(2, 1);
  std::stringstream ss;
  write_pbm(ss, m);
  CHECK(ss.str() == "P1\n3 2\n0 0 1\n1 0 0\n");
}
