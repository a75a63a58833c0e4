#include "sausage/geometry.hpp"

namespace sausage {

BoundingBox bounding_box(const PointCloud& cloud) {
  BoundingBox b;
  for (Eigen::Index i = 0; i < cloud.cols(); ++i) b.extend(Point(cloud.col(i)));
  return b;
}

BucketGrid::BucketGrid(const PointCloud& cloud, double target_per_cell) : cloud_(&cloud) {
  require_nonempty(cloud, "BucketGrid");
  const BoundingBox box = bounding_box(cloud);
  origin_ = box.lo;
  const double n = static_cast<double>(cloud.cols());
  const Point ext = box.hi - box.lo;
  const double area = ext.x() * ext.y();
  const double diam = ext.norm();
  cell_ = std::max(std::sqrt(area * target_per_cell / n), diam * target_per_cell / n);
  if (!(cell_ > 0.0)) cell_ = 1.0;
  nx_ = static_cast<long>(ext.x() / cell_) + 1;
  ny_ = static_cast<long>(ext.y() / cell_) + 1;
  const double cap = 4.0 * n + 16.0;
  while (static_cast<double>(nx_) * static_cast<double>(ny_) > cap) {
    cell_ *= 1.5;
    nx_ = static_cast<long>(ext.x() / cell_) + 1;
    ny_ = static_cast<long>(ext.y() / cell_) + 1;
  }
  const auto ncell = static_cast<std::size_t>(nx_ * ny_);
  start_.assign(ncell + 1, 0);
  std::vector<std::size_t> key(static_cast<std::size_t>(cloud.cols()));
  for (Eigen::Index j = 0; j < cloud.cols(); ++j) {
    const long cx = std::clamp(cell_x(cloud(0, j)), 0L, nx_ - 1);
    const long cy = std::clamp(cell_y(cloud(1, j)), 0L, ny_ - 1);
    key[static_cast<std::size_t>(j)] = static_cast<std::size_t>(cy * nx_ + cx);
    ++start_[key[static_cast<std::size_t>(j)] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) start_[c + 1] += start_[c];
  items_.resize(static_cast<std::size_t>(cloud.cols()));
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (Eigen::Index j = 0; j < cloud.cols(); ++j) items_[fill[key[static_cast<std::size_t>(j)]]++] = j;
}

long BucketGrid::cell_x(double x) const {
  return static_cast<long>(std::floor((x - origin_.x()) / cell_));
}
long BucketGrid::cell_y(double y) const {
  return static_cast<long>(std::floor((y - origin_.y()) / cell_));
}

double BucketGrid::nearest_sq(const Point& q) const {
  const long cx = cell_x(q.x());
  const long cy = cell_y(q.y());
  double best = std::numeric_limits<double>::infinity();
  // Rings that do not meet the grid are empty; start at the first one that does.
  const long gap_x = std::max({0L, -cx, cx - (nx_ - 1)});
  const long gap_y = std::max({0L, -cy, cy - (ny_ - 1)});
  const long k0 = std::max(gap_x, gap_y);
  const long kmax = k0 + nx_ + ny_;
  for (long k = k0; k <= kmax; ++k) {
    const long x0 = cx - k, x1 = cx + k, y0 = cy - k, y1 = cy + k;
    auto visit = [&](long x, long y) {
      if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return;
      const auto c = static_cast<std::size_t>(y * nx_ + x);
      for (std::size_t t = start_[c]; t < start_[c + 1]; ++t) best = std::min(best, sq(q, items_[t]));
    };
    if (k == 0) {
      visit(cx, cy);
    } else {
      for (long x = std::max(x0, 0L); x <= std::min(x1, nx_ - 1); ++x) {
        visit(x, y0);
        visit(x, y1);
      }
      for (long y = std::max(y0 + 1, 0L); y <= std::min(y1 - 1, ny_ - 1); ++y) {
        visit(x0, y);
        visit(x1, y);
      }
    }
    if (x0 <= 0 && y0 <= 0 && x1 >= nx_ - 1 && y1 >= ny_ - 1) break;  // whole grid seen
    // Anything not yet visited lies outside the ring's cell rectangle.
    const double lb = std::min({q.x() - (origin_.x() + static_cast<double>(x0) * cell_),
                                origin_.x() + static_cast<double>(x1 + 1) * cell_ - q.x(),
                                q.y() - (origin_.y() + static_cast<double>(y0) * cell_),
                                origin_.y() + static_cast<double>(y1 + 1) * cell_ - q.y()});
    if (lb > 0.0 && best < lb * lb * (1.0 - 1e-12)) break;
  }
  return best;
}

bool BucketGrid::any_within(const Point& q, double r) const { return nearest_sq(q) <= r * r; }

void BucketGrid::within(const Point& q, double r, std::vector<Eigen::Index>& out) const {
  out.clear();
  const double r2 = r * r;
  const long xa = std::max(cell_x(q.x() - r), 0L), xb = std::min(cell_x(q.x() + r), nx_ - 1);
  const long ya = std::max(cell_y(q.y() - r), 0L), yb = std::min(cell_y(q.y() + r), ny_ - 1);
  for (long y = ya; y <= yb; ++y)
    for (long x = xa; x <= xb; ++x) {
      const auto c = static_cast<std::size_t>(y * nx_ + x);
      for (std::size_t t = start_[c]; t < start_[c + 1]; ++t)
        if (sq(q, items_[t]) <= r2) out.push_back(items_[t]);
    }
}

namespace {

struct Farthest {
  double sq = 0.0;
  Eigen::Index index = 0;
};

Farthest farthest_from(const PointCloud& a, const PointCloud& b) {
  const BucketGrid grid(b);
  Farthest f;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const double d = grid.nearest_sq(a.col(i));
    if (d > f.sq) f = {d, i};
  }
  return f;
}

}  // namespace

double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, "directed_hausdorff");
  return std::sqrt(farthest_from(a, b).sq);
}

double hausdorff(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, "hausdorff");
  require_nonempty(b, "hausdorff");
  return std::sqrt(std::max(farthest_from(a, b).sq, farthest_from(b, a).sq));
}

HausdorffWitness hausdorff_witness(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, "hausdorff");
  require_nonempty(b, "hausdorff");
  const Farthest fa = farthest_from(a, b);
  const Farthest fb = farthest_from(b, a);
  if (fa.sq >= fb.sq) return {std::sqrt(fa.sq), a.col(fa.index), true};
  return {std::sqrt(fb.sq), b.col(fb.index), false};
}

bool offset_contains(const BucketGrid& index, double r, const Point& x) {
  return index.any_within(x, r);
}

bool interleaving_check(const PointCloud& a, const PointCloud& b, double eps, double r,
                        const PointCloud& probes) {
  const BucketGrid ga(a), gb(b);
  for (Eigen::Index i = 0; i < probes.cols(); ++i) {
    const Point x = probes.col(i);
    if (ga.any_within(x, r) && !gb.any_within(x, r + eps)) return false;
  }
  return true;
}

}  // namespace sausage
