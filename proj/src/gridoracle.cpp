#include "sausage/gridoracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <ostream>
#include <stdexcept>

namespace sausage {

GridSpec grid_for(const BoundingBox& box, double r, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grid: pixel size must be positive");
  if (!(r >= 0.0)) throw std::invalid_argument("grid: radius must be >= 0");
  if (box.empty()) throw std::invalid_argument("grid: empty bounding box");
  const BoundingBox b = box.inflated(r + 2.0 * h);
  GridSpec s;
  s.origin = b.lo;
  s.h = h;
  s.width = static_cast<long>(std::ceil((b.hi.x() - b.lo.x()) / h)) + 1;
  s.height = static_cast<long>(std::ceil((b.hi.y() - b.lo.y()) / h)) + 1;
  return s;
}

std::size_t GridMask::count() const {
  std::size_t c = 0;
  for (auto v : bits_) c += v;
  return c;
}

bool GridMask::subset_of(const GridMask& o) const {
  if (!(spec_ == o.spec_)) throw std::invalid_argument("mask: grids differ");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !o.bits_[i]) return false;
  return true;
}

namespace {

inline bool covers(const Point& c, const Point& p, double r2) {
  const double dx = c.x() - p.x();
  const double dy = c.y() - p.y();
  return dx * dx + dy * dy <= r2;
}

}  // namespace

GridMask rasterize(const PointCloud& cloud, double r, const GridSpec& spec) {
  GridMask m(spec);
  const double r2 = r * r;
  const double h = spec.h;
  for (Eigen::Index k = 0; k < cloud.cols(); ++k) {
    const Point p = cloud.col(k);
    const long ya = std::max(0L, static_cast<long>(std::floor((p.y() - r - spec.origin.y()) / h - 0.5)) - 1);
    const long yb = std::min(spec.height - 1, static_cast<long>(std::ceil((p.y() + r - spec.origin.y()) / h - 0.5)) + 1);
    for (long iy = ya; iy <= yb; ++iy) {
      const double cy = spec.center(0, iy).y();
      const double dy = cy - p.y();
      if (dy * dy > r2) continue;
      const double half = std::sqrt(std::max(0.0, r2 - dy * dy));
      long lo = static_cast<long>(std::ceil((p.x() - half - spec.origin.x()) / h - 0.5));
      long hi = static_cast<long>(std::floor((p.x() + half - spec.origin.x()) / h - 0.5));
      lo = std::clamp(lo, 0L, spec.width - 1);
      hi = std::clamp(hi, 0L, spec.width - 1);
      if (lo > hi) std::swap(lo, hi);
      // Snap the span ends to the exact predicate; inside pixels form an interval.
      auto in = [&](long ix) { return covers(spec.center(ix, iy), p, r2); };
      while (lo > 0 && in(lo - 1)) --lo;
      while (lo <= hi && !in(lo)) ++lo;
      while (hi + 1 < spec.width && in(hi + 1)) ++hi;
      while (hi >= lo && !in(hi)) --hi;
      if (lo > hi) {
        // The rounded guess can miss a one-pixel span entirely.
        const long guess = std::clamp(static_cast<long>(std::floor((p.x() - spec.origin.x()) / h)), 0L, spec.width - 1);
        for (long ix = std::max(0L, guess - 1); ix <= std::min(spec.width - 1, guess + 1); ++ix)
          if (in(ix)) m.set(ix, iy);
        continue;
      }
      std::memset(m.row(iy) + lo, 1, static_cast<std::size_t>(hi - lo + 1));
    }
  }
  return m;
}

GridMask rasterize(const PointCloud& cloud, double r, double h) {
  return rasterize(cloud, r, grid_for(bounding_box(cloud), r, h));
}

GridMask rasterize_brute(const PointCloud& cloud, double r, const GridSpec& spec) {
  GridMask m(spec);
  const double r2 = r * r;
  for (long iy = 0; iy < spec.height; ++iy)
    for (long ix = 0; ix < spec.width; ++ix) {
      const Point c = spec.center(ix, iy);
      for (Eigen::Index k = 0; k < cloud.cols(); ++k)
        if (covers(c, cloud.col(k), r2)) {
          m.set(ix, iy);
          break;
        }
    }
  return m;
}

namespace {

template <typename Op>
GridMask combine(const GridMask& a, const GridMask& b, Op op) {
  if (!(a.spec() == b.spec())) throw std::invalid_argument("mask: grids differ");
  GridMask out(a.spec());
  for (std::size_t i = 0; i < a.bits().size(); ++i) out.bits()[i] = op(a.bits()[i], b.bits()[i]) ? 1 : 0;
  return out;
}

}  // namespace

GridMask mask_and(const GridMask& a, const GridMask& b) {
  return combine(a, b, [](auto x, auto y) { return x && y; });
}
GridMask mask_or(const GridMask& a, const GridMask& b) {
  return combine(a, b, [](auto x, auto y) { return x || y; });
}
GridMask mask_minus(const GridMask& a, const GridMask& b) {
  return combine(a, b, [](auto x, auto y) { return x && !y; });
}

namespace {

Betti2 count_components(const GridMask& mask, const GridMask* cover) {
  const long W = mask.width(), H = mask.height();
  const auto& bits = mask.bits();
  std::vector<char> seen(bits.size(), 0);
  std::vector<long> stack;
  Betti2 out;
  for (long start = 0; start < W * H; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    const bool fg = bits[static_cast<std::size_t>(start)] != 0;
    bool touches_border = false;
    bool deep = cover == nullptr;
    stack.assign(1, start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      const long v = stack.back();
      stack.pop_back();
      const long x = v % W, y = v / W;
      if (x == 0 || y == 0 || x == W - 1 || y == H - 1) touches_border = true;
      if (!deep && !fg && !cover->bits()[static_cast<std::size_t>(v)]) deep = true;
      for (long dy = -1; dy <= 1; ++dy)
        for (long dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!fg && dx != 0 && dy != 0) continue;  // background is 4-connected
          const long nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
          const long w = ny * W + nx;
          if (seen[static_cast<std::size_t>(w)] || (bits[static_cast<std::size_t>(w)] != 0) != fg) continue;
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
    }
    if (fg) ++out.b0;
    else if (!touches_border && deep) ++out.b1;
  }
  return out;
}

}  // namespace

Betti2 betti_numbers(const GridMask& mask) { return count_components(mask, nullptr); }

Betti2 betti_numbers(const GridMask& mask, const GridMask& cover) {
  if (!(mask.spec() == cover.spec())) throw std::invalid_argument("betti: grids differ");
  return count_components(mask, &cover);
}

Betti2 offset_betti(const PointCloud& cloud, double r, double h) {
  const GridSpec spec = grid_for(bounding_box(cloud), r, h);
  return betti_numbers(rasterize(cloud, r, spec), rasterize(cloud, r + kHoleDepthPixels * h, spec));
}

long euler_characteristic(const GridMask& mask) {
  const long W = mask.width(), H = mask.height();
  auto px = [&](long x, long y) { return x >= 0 && y >= 0 && x < W && y < H && mask.at(x, y); };
  long V = 0, E = 0, F = 0;
  for (long y = 0; y < H; ++y)
    for (long x = 0; x < W; ++x) F += px(x, y);
  // Lattice vertex (x, y) is the lower-left corner of pixel (x, y).
  for (long y = 0; y <= H; ++y)
    for (long x = 0; x <= W; ++x) {
      if (px(x - 1, y - 1) || px(x, y - 1) || px(x - 1, y) || px(x, y)) ++V;
      if (x < W && (px(x, y - 1) || px(x, y))) ++E;  // horizontal edge to (x+1, y)
      if (y < H && (px(x - 1, y) || px(x, y))) ++E;  // vertical edge to (x, y+1)
    }
  return V - E + F;
}

double area(const GridMask& mask) {
  return static_cast<double>(mask.count()) * mask.spec().h * mask.spec().h;
}

Betti2 intersect_betti(const PointCloud& a, const PointCloud& b, double r, double h) {
  BoundingBox box = bounding_box(a);
  box.extend(bounding_box(b));
  const GridSpec spec = grid_for(box, r, h);
  return betti_numbers(mask_and(rasterize(a, r, spec), rasterize(b, r, spec)));
}

void write_pbm(std::ostream& os, const GridMask& mask) {
  os << "P1\n" << mask.width() << ' ' << mask.height() << '\n';
  // PBM rows run top to bottom.
  for (long y = mask.height() - 1; y >= 0; --y) {
    for (long x = 0; x < mask.width(); ++x) os << (mask.at(x, y) ? '1' : '0') << (x + 1 < mask.width() ? " " : "");
    os << '\n';
  }
}

}  // namespace sausage
