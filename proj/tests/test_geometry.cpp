#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sausage/csv.hpp"
#include "sausage/geometry.hpp"
#include "support.hpp"

using namespace sausage;
using testsupport::uniform_cloud;

TEST_CASE("hausdorff basics") {
  PointCloud a(2, 1), b(2, 1);
  a << 0.0, 0.0;
  b << 3.0, 4.0;
  CHECK(hausdorff(a, b) == 5.0);
  CHECK(hausdorff_brute(a, b) == 5.0);
  CounterRng rng(1);
  const auto c = uniform_cloud(rng, 40);
  CHECK(hausdorff(c, c) == 0.0);
  CHECK_THROWS_AS(hausdorff(PointCloud(2, 0), c), std::invalid_argument);
  CHECK_THROWS_AS(hausdorff_brute(c, PointCloud(2, 0)), std::invalid_argument);
}

TEST_CASE("grid-accelerated hausdorff equals brute force exactly") {
  CounterRng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int na = 1 + static_cast<int>(rng.below(60));
    const int nb = 1 + static_cast<int>(rng.below(60));
    PointCloud a = uniform_cloud(rng, na, -3, 3);
    PointCloud b = uniform_cloud(rng, nb, -1, 5);
    if (trial % 5 == 0) a.row(1).setConstant(0.25);  // degenerate, collinear
    if (trial % 7 == 0) b.col(0) = a.col(0);
    CHECK(hausdorff(a, b) == hausdorff_brute(a, b));
    CHECK(directed_hausdorff(a, b) == directed_hausdorff_brute(a, b));
  }
  // Far-apart clouds and a point query far outside the grid.
  PointCloud a = uniform_cloud(rng, 50), b = uniform_cloud(rng, 50, 100, 101);
  CHECK(hausdorff(a, b) == hausdorff_brute(a, b));
}

TEST_CASE("nearest queries match brute force") {
  CounterRng rng(3);
  const auto c = uniform_cloud(rng, 500);
  const BucketGrid g(c);
  for (int i = 0; i < 2000; ++i) {
    const Point q(rng.uniform(-2, 3), rng.uniform(-2, 3));
    double best = INFINITY;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      const double dx = q.x() - c(0, j), dy = q.y() - c(1, j);
      best = std::min(best, dx * dx + dy * dy);
    }
    CHECK(g.nearest_sq(q) == best);
    const double r = rng.uniform(0, 0.2);
    CHECK(g.any_within(q, r) == offset_contains(c, r, q));
    std::vector<Eigen::Index> near;
    g.within(q, r, near);
    std::size_t brute = 0;
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if ((q - c.col(j)).squaredNorm() <= r * r) ++brute;
    CHECK(near.size() == brute);
  }
}

TEST_CASE("hausdorff metric axioms") {
  CounterRng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = uniform_cloud(rng, 1 + static_cast<int>(rng.below(20)));
    const auto b = uniform_cloud(rng, 1 + static_cast<int>(rng.below(20)));
    const auto c = uniform_cloud(rng, 1 + static_cast<int>(rng.below(20)));
    CHECK(hausdorff(a, b) == hausdorff(b, a));
    CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-15);
    CHECK(hausdorff(a, b) > 0.0);
  }
}

TEST_CASE("nested clouds have zero directed distance") {
  CounterRng rng(5);
  const auto b = uniform_cloud(rng, 30);
  const PointCloud a = b.leftCols(12);
  CHECK(directed_hausdorff(a, b) == 0.0);
  CHECK(directed_hausdorff(b, a) > 0.0);
}

TEST_CASE("closed offset membership") {
  PointCloud c(2, 1);
  c << 0.0, 0.0;
  CHECK(offset_contains(c, 1.0, Point(1.0, 0.0)));
  CHECK_FALSE(offset_contains(c, 1.0, Point(1.0 + 1e-9, 0.0)));
  CHECK(offset_contains(BucketGrid(c), 1.0, Point(1.0, 0.0)));
  CHECK_FALSE(offset_contains(BucketGrid(c), 1.0, Point(1.0 + 1e-9, 0.0)));
  CounterRng rng(6);
  const auto d = uniform_cloud(rng, 10);
  for (Eigen::Index i = 0; i < d.cols(); ++i) CHECK(offset_contains(d, 0.0, Point(d.col(i))));
}

TEST_CASE("offset interleaving") {
  CounterRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = uniform_cloud(rng, 2 + static_cast<int>(rng.below(25)));
    const auto b = uniform_cloud(rng, 2 + static_cast<int>(rng.below(25)));
    const auto probes = uniform_cloud(rng, 400, -0.5, 1.5);
    const double r = rng.uniform(0.0, 0.3);
    CHECK(interleaving_check(a, a, 0.0, r, probes));
    const double eps = hausdorff(a, b);
    CHECK(interleaving_check(a, b, eps, r, probes));
    CHECK(interleaving_check(b, a, eps, r, probes));

    // The witness point realises the distance: at r = 0 it lies in its own cloud's
    // offset but outside the other cloud's (eps - tol)-offset.
    const auto w = hausdorff_witness(a, b);
    CHECK(w.distance == eps);
    PointCloud probe(2, 1);
    probe.col(0) = w.point;
    const double tol = 1e-9;
    if (w.from_a) CHECK_FALSE(interleaving_check(a, b, eps - tol, 0.0, probe));
    else CHECK_FALSE(interleaving_check(b, a, eps - tol, 0.0, probe));
  }
}

TEST_CASE("bounding box and cloud CSV") {
  PointCloud c(2, 3);
  c << 0.0, 2.0, -1.0, 1.0, 5.0, 0.5;
  const auto box = bounding_box(c);
  CHECK(box.lo == Point(-1.0, 0.5));
  CHECK(box.hi == Point(2.0, 5.0));
  std::stringstream ss;
  write_cloud_csv(ss, c);
  CHECK(ss.str().rfind("x,y\n", 0) == 0);
  const auto back = read_cloud_csv(ss);
  CHECK((back.array() == c.array()).all());
  std::stringstream bad("x,z\n1,2\n");
  CHECK_THROWS(read_cloud_csv(bad));
}
