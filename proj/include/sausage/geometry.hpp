#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sausage/types.hpp"

namespace sausage {

template <typename Derived>
void require_nonempty(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.cols() == 0) throw std::invalid_argument(std::string(what) + ": empty point cloud");
}

// sup_{x in a} min_{y in b} |x - y|, brute force.
template <typename DA, typename DB>
typename DA::Scalar directed_hausdorff_brute(const Eigen::MatrixBase<DA>& a,
                                             const Eigen::MatrixBase<DB>& b) {
  using S = typename DA::Scalar;
  require_nonempty(a, "directed_hausdorff");
  require_nonempty(b, "directed_hausdorff");
  S worst = 0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    S best = std::numeric_limits<S>::infinity();
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const S dx = a(0, i) - b(0, j);
      const S dy = a(1, i) - b(1, j);
      best = std::min(best, dx * dx + dy * dy);
    }
    worst = std::max(worst, best);
  }
  using std::sqrt;
  return sqrt(worst);
}

template <typename DA, typename DB>
typename DA::Scalar hausdorff_brute(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return std::max(directed_hausdorff_brute(a, b), directed_hausdorff_brute(b, a));
}

template <typename Derived, typename DP>
bool offset_contains(const Eigen::MatrixBase<Derived>& cloud, typename Derived::Scalar r,
                     const Eigen::MatrixBase<DP>& x) {
  using S = typename Derived::Scalar;
  const S r2 = r * r;
  for (Eigen::Index j = 0; j < cloud.cols(); ++j) {
    const S dx = x(0) - cloud(0, j);
    const S dy = x(1) - cloud(1, j);
    if (dx * dx + dy * dy <= r2) return true;
  }
  return false;
}

struct BoundingBox {
  Point lo = Point::Constant(std::numeric_limits<double>::infinity());
  Point hi = Point::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const { return !(lo.x() <= hi.x()); }
  void extend(const Point& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void extend(const BoundingBox& b) {
    if (b.empty()) return;
    extend(b.lo);
    extend(b.hi);
  }
  BoundingBox inflated(double m) const { return {(lo.array() - m).matrix(), (hi.array() + m).matrix()}; }
  double diameter() const { return empty() ? 0.0 : (hi - lo).norm(); }
};

BoundingBox bounding_box(const PointCloud& cloud);

// Uniform bucket grid over a cloud answering exact nearest-distance queries.
class BucketGrid {
 public:
  explicit BucketGrid(const PointCloud& cloud, double target_per_cell = 2.0);

  // Exact min squared distance to the cloud, computed with the same arithmetic
  // as the brute-force routines.
  double nearest_sq(const Point& q) const;
  // True iff some point lies within distance r (closed).
  bool any_within(const Point& q, double r) const;
  // Indices of all points within distance r (closed) of q.
  void within(const Point& q, double r, std::vector<Eigen::Index>& out) const;

  const PointCloud& cloud() const { return *cloud_; }

 private:
  long cell_x(double x) const;
  long cell_y(double y) const;
  double sq(const Point& q, Eigen::Index j) const {
    const double dx = q.x() - (*cloud_)(0, j);
    const double dy = q.y() - (*cloud_)(1, j);
    return dx * dx + dy * dy;
  }

  const PointCloud* cloud_;
  Point origin_;
  double cell_ = 1.0;
  long nx_ = 1, ny_ = 1;
  std::vector<std::size_t> start_;  // CSR offsets, size nx*ny+1
  std::vector<Eigen::Index> items_;
};

double directed_hausdorff(const PointCloud& a, const PointCloud& b);
// Grid-accelerated; returns the same double as hausdorff_brute.
double hausdorff(const PointCloud& a, const PointCloud& b);

// Point of a (or b) realizing the Hausdorff distance, for adversarial probes.
struct HausdorffWitness {
  double distance = 0.0;
  Point point = Point::Zero();
  bool from_a = true;
};
HausdorffWitness hausdorff_witness(const PointCloud& a, const PointCloud& b);

bool offset_contains(const BucketGrid& index, double r, const Point& x);

// Checks a^(r) subset of b^(r+eps) on the probe points.
bool interleaving_check(const PointCloud& a, const PointCloud& b, double eps, double r,
                        const PointCloud& probes);

}  // namespace sausage
