#include "sausage/delaunay.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "sausage/predicates.hpp"

namespace sausage {

namespace {

// Quad-edge mesh with integer handles: edge e belongs to quad e >> 2, rotation e & 3.
class QuadEdges {
 public:
  explicit QuadEdges(std::size_t reserve_quads) {
    next_.reserve(4 * reserve_quads);
    org_.reserve(4 * reserve_quads);
    alive_.reserve(reserve_quads);
  }

  static int rot(int e) { return (e & ~3) | ((e + 1) & 3); }
  static int sym(int e) { return (e & ~3) | ((e + 2) & 3); }
  static int rot_inv(int e) { return (e & ~3) | ((e + 3) & 3); }
  int onext(int e) const { return next_[static_cast<std::size_t>(e)]; }
  int oprev(int e) const { return rot(onext(rot(e))); }
  int lnext(int e) const { return rot(onext(rot_inv(e))); }
  int rprev(int e) const { return onext(sym(e)); }
  int org(int e) const { return org_[static_cast<std::size_t>(e)]; }
  int dest(int e) const { return org(sym(e)); }

  int make_edge(int o, int d) {
    const int e = static_cast<int>(next_.size());
    next_.insert(next_.end(), {e, e + 3, e + 2, e + 1});
    org_.insert(org_.end(), {o, -1, d, -1});
    alive_.push_back(1);
    return e;
  }

  void splice(int a, int b) {
    const int alpha = rot(onext(a));
    const int beta = rot(onext(b));
    std::swap(next_[static_cast<std::size_t>(a)], next_[static_cast<std::size_t>(b)]);
    std::swap(next_[static_cast<std::size_t>(alpha)], next_[static_cast<std::size_t>(beta)]);
  }

  int connect(int a, int b) {
    const int e = make_edge(dest(a), org(b));
    splice(e, lnext(a));
    splice(sym(e), b);
    return e;
  }

  void remove(int e) {
    splice(e, oprev(e));
    splice(sym(e), oprev(sym(e)));
    alive_[static_cast<std::size_t>(e >> 2)] = 0;
  }

  std::size_t n_quads() const { return alive_.size(); }
  bool alive(std::size_t q) const { return alive_[q] != 0; }

 private:
  std::vector<int> next_;
  std::vector<int> org_;
  std::vector<char> alive_;
};

class Builder {
 public:
  Builder(const PointCloud& pts, QuadEdges& m) : p_(pts), m_(m) {}

  std::pair<int, int> run(int lo, int hi) {
    const int n = hi - lo;
    if (n == 2) {
      const int a = m_.make_edge(lo, lo + 1);
      return {a, QuadEdges::sym(a)};
    }
    if (n == 3) {
      const int a = m_.make_edge(lo, lo + 1);
      const int b = m_.make_edge(lo + 1, lo + 2);
      m_.splice(QuadEdges::sym(a), b);
      const int o = orient2d(pt(lo), pt(lo + 1), pt(lo + 2));
      if (o > 0) {
        m_.connect(b, a);
        return {a, QuadEdges::sym(b)};
      }
      if (o < 0) {
        const int c = m_.connect(b, a);
        return {QuadEdges::sym(c), c};
      }
      return {a, QuadEdges::sym(b)};
    }
    const int mid = lo + n / 2;
    auto [ldo, ldi] = run(lo, mid);
    auto [rdi, rdo] = run(mid, hi);

    // Lower common tangent.
    for (;;) {
      if (left_of(m_.org(rdi), ldi)) {
        ldi = m_.lnext(ldi);
      } else if (right_of(m_.org(ldi), rdi)) {
        rdi = m_.rprev(rdi);
      } else {
        break;
      }
    }
    int basel = m_.connect(QuadEdges::sym(rdi), ldi);
    if (m_.org(ldi) == m_.org(ldo)) ldo = QuadEdges::sym(basel);
    if (m_.org(rdi) == m_.org(rdo)) rdo = basel;

    for (;;) {
      int lcand = m_.onext(QuadEdges::sym(basel));
      if (valid(lcand, basel)) {
        while (incircle(pt(m_.dest(basel)), pt(m_.org(basel)), pt(m_.dest(lcand)),
                        pt(m_.dest(m_.onext(lcand)))) > 0) {
          const int t = m_.onext(lcand);
          m_.remove(lcand);
          lcand = t;
        }
      }
      int rcand = m_.oprev(basel);
      if (valid(rcand, basel)) {
        while (incircle(pt(m_.dest(basel)), pt(m_.org(basel)), pt(m_.dest(rcand)),
                        pt(m_.dest(m_.oprev(rcand)))) > 0) {
          const int t = m_.oprev(rcand);
          m_.remove(rcand);
          rcand = t;
        }
      }
      const bool lv = valid(lcand, basel);
      const bool rv = valid(rcand, basel);
      if (!lv && !rv) break;
      if (!lv || (rv && incircle(pt(m_.dest(lcand)), pt(m_.org(lcand)), pt(m_.org(rcand)),
                                 pt(m_.dest(rcand))) > 0)) {
        basel = m_.connect(rcand, QuadEdges::sym(basel));
      } else {
        basel = m_.connect(QuadEdges::sym(basel), QuadEdges::sym(lcand));
      }
    }
    return {ldo, rdo};
  }

 private:
  Point pt(int i) const { return p_.col(i); }
  bool left_of(int x, int e) const { return orient2d(pt(x), pt(m_.org(e)), pt(m_.dest(e))) > 0; }
  bool right_of(int x, int e) const { return orient2d(pt(x), pt(m_.dest(e)), pt(m_.org(e))) > 0; }
  bool valid(int e, int basel) const { return right_of(m_.dest(e), basel); }

  const PointCloud& p_;
  QuadEdges& m_;
};

}  // namespace

Triangulation delaunay(const PointCloud& cloud) {
  if (cloud.cols() == 0) throw std::invalid_argument("delaunay: empty point cloud");
  if (!cloud.allFinite()) throw std::invalid_argument("delaunay: non-finite coordinate");

  std::vector<std::size_t> order(static_cast<std::size_t>(cloud.cols()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t i, std::size_t j) {
    const auto a = cloud.col(static_cast<Eigen::Index>(i));
    const auto b = cloud.col(static_cast<Eigen::Index>(j));
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return i < j;
  };
  std::sort(order.begin(), order.end(), less);

  Triangulation tri;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && cloud.col(static_cast<Eigen::Index>(order[k])) ==
                     cloud.col(static_cast<Eigen::Index>(order[k - 1])))
      continue;
    tri.source.push_back(order[k]);
  }
  const auto n = static_cast<int>(tri.source.size());
  tri.points.resize(2, n);
  for (int i = 0; i < n; ++i) tri.points.col(i) = cloud.col(static_cast<Eigen::Index>(tri.source[static_cast<std::size_t>(i)]));
  if (n < 2) return tri;

  QuadEdges mesh(3 * static_cast<std::size_t>(n) + 8);
  Builder(tri.points, mesh).run(0, n);

  std::vector<int> edge_id(mesh.n_quads(), -1);
  for (std::size_t q = 0; q < mesh.n_quads(); ++q) {
    if (!mesh.alive(q)) continue;
    const int e = static_cast<int>(q << 2);
    int u = mesh.org(e), v = mesh.dest(e);
    if (u > v) std::swap(u, v);
    edge_id[q] = static_cast<int>(tri.edges.size());
    tri.edges.push_back({u, v});
  }
  for (std::size_t q = 0; q < mesh.n_quads(); ++q) {
    if (!mesh.alive(q)) continue;
    for (int r : {0, 2}) {
      const int e0 = static_cast<int>(q << 2) | r;
      const int e1 = mesh.lnext(e0);
      const int e2 = mesh.lnext(e1);
      if (mesh.lnext(e2) != e0) continue;
      // Count each face once, from its smallest directed edge.
      if (e1 < e0 || e2 < e0) continue;
      const int a = mesh.org(e0), b = mesh.org(e1), c = mesh.org(e2);
      if (orient2d(tri.points.col(a), tri.points.col(b), tri.points.col(c)) <= 0) continue;
      std::array<int, 3> t{a, b, c};
      std::sort(t.begin(), t.end());
      tri.triangles.push_back(t);
      tri.triangle_edges.push_back({edge_id[static_cast<std::size_t>(e0 >> 2)],
                                    edge_id[static_cast<std::size_t>(e1 >> 2)],
                                    edge_id[static_cast<std::size_t>(e2 >> 2)]});
    }
  }
  return tri;
}

}  // namespace sausage
