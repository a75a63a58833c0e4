#pragma once

// Generators and slow reference implementations shared by the test binaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "sausage/filtration.hpp"
#include "sausage/persistence.hpp"
#include "sausage/rng.hpp"

namespace testsupport {

using sausage::CounterRng;
using sausage::Point;
using sausage::PointCloud;

inline PointCloud uniform_cloud(CounterRng& rng, int n, double lo = 0.0, double hi = 1.0) {
  PointCloud c(2, n);
  for (int i = 0; i < n; ++i) c.col(i) = Point(rng.uniform(lo, hi), rng.uniform(lo, hi));
  return c;
}

// Rejection sampling in the unit square with pairwise distance >= gap.
inline PointCloud separated_cloud(CounterRng& rng, int n, double gap) {
  std::vector<Point> pts;
  int tries = 0;
  while (static_cast<int>(pts.size()) < n && tries < 100000) {
    ++tries;
    const Point p(rng.uniform(0, 1), rng.uniform(0, 1));
    bool ok = true;
    for (const auto& q : pts)
      if ((p - q).norm() < gap) ok = false;
    if (ok) pts.push_back(p);
  }
  PointCloud c(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) c.col(static_cast<Eigen::Index>(i)) = pts[i];
  return c;
}

// Random walk with steps of length in [lo, hi]: its r-offset is connected for r >= hi / 2.
inline PointCloud walk_cloud(CounterRng& rng, int n, Point start, double lo, double hi) {
  PointCloud c(2, n);
  Point x = start;
  for (int i = 0; i < n; ++i) {
    c.col(i) = x;
    const double ang = rng.uniform(0, 2 * M_PI);
    const double len = rng.uniform(lo, hi);
    x += len * Point(std::cos(ang), std::sin(ang));
  }
  return c;
}

inline double min_gap(const PointCloud& c) {
  double g = INFINITY;
  for (Eigen::Index i = 0; i < c.cols(); ++i)
    for (Eigen::Index j = i + 1; j < c.cols(); ++j) g = std::min(g, (c.col(i) - c.col(j)).norm());
  return g;
}

// Rank over GF(2) of a 0/1 matrix given as rows of bits.
inline int gf2_rank(std::vector<std::vector<std::uint8_t>> m) {
  int rank = 0;
  const std::size_t rows = m.size();
  if (rows == 0) return 0;
  const std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows && !m[piv][c]) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != static_cast<std::size_t>(rank) && m[r][c])
        for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[static_cast<std::size_t>(rank)][k];
    ++rank;
  }
  return rank;
}

// Betti numbers (unreduced) of the sub-complex with values <= r, from boundary ranks.
inline std::array<int, 2> betti_by_rank(const sausage::Filtration& f, double r) {
  std::vector<int> vid, eid, tid;
  std::map<int, int> pos_to_local;
  for (std::size_t k = 0; k < f.simplices.size(); ++k) {
    const auto& s = f.simplices[k];
    if (s.value > r) continue;
    auto& bucket = s.dim == 0 ? vid : (s.dim == 1 ? eid : tid);
    pos_to_local[static_cast<int>(k)] = static_cast<int>(bucket.size());
    bucket.push_back(static_cast<int>(k));
  }
  std::vector<std::vector<std::uint8_t>> d1(vid.size(), std::vector<std::uint8_t>(eid.size(), 0));
  for (std::size_t j = 0; j < eid.size(); ++j)
    for (int a = 0; a < 2; ++a) d1[static_cast<std::size_t>(pos_to_local[f.simplices[static_cast<std::size_t>(eid[j])].faces[static_cast<std::size_t>(a)]])][j] = 1;
  std::vector<std::vector<std::uint8_t>> d2(eid.size(), std::vector<std::uint8_t>(tid.size(), 0));
  for (std::size_t j = 0; j < tid.size(); ++j)
    for (int a = 0; a < 3; ++a) d2[static_cast<std::size_t>(pos_to_local[f.simplices[static_cast<std::size_t>(tid[j])].faces[static_cast<std::size_t>(a)]])][j] = 1;
  const int r1 = gf2_rank(d1);
  const int r2 = eid.empty() ? 0 : gf2_rank(d2);
  return {static_cast<int>(vid.size()) - r1, static_cast<int>(eid.size()) - r1 - r2};
}

// Textbook column reduction of the full boundary matrix (all dimensions, no
// shortcuts). Reduced degree 0: the essential vertex is dropped.
inline sausage::PersistenceDiagram reference_reduction(const sausage::Filtration& f) {
  const std::size_t n = f.simplices.size();
  std::vector<std::vector<int>> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = f.simplices[k];
    for (int a = 0; a < s.dim + 1 && s.dim > 0; ++a) col[k].push_back(s.faces[static_cast<std::size_t>(a)]);
    std::sort(col[k].begin(), col[k].end());
  }
  std::map<int, std::size_t> low_owner;
  sausage::PersistenceDiagram d;
  for (std::size_t k = 0; k < n; ++k) {
    auto& c = col[k];
    while (!c.empty()) {
      auto it = low_owner.find(c.back());
      if (it == low_owner.end()) break;
      std::vector<int> x;
      std::set_symmetric_difference(c.begin(), c.end(), col[it->second].begin(), col[it->second].end(),
                                    std::back_inserter(x));
      c = x;
    }
    if (c.empty()) continue;
    low_owner[c.back()] = k;
    const auto& birth = f.simplices[static_cast<std::size_t>(c.back())];
    const auto& death = f.simplices[k];
    if (death.value > birth.value) d.degree(birth.dim).push_back({birth.value, death.value});
  }
  sausage::canonicalize(d);
  return d;
}

// Exhaustive search over all partial matchings (each point to a partner or the
// diagonal), with pruning that never discards an optimum.
inline double brute_bottleneck(const std::vector<sausage::PersistencePair>& d,
                               const std::vector<sausage::PersistencePair>& e) {
  auto sup = [](const sausage::PersistencePair& x, const sausage::PersistencePair& y) {
    return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
  };
  auto diag = [](const sausage::PersistencePair& x) { return 0.5 * (x.death - x.birth); };
  double best = INFINITY;
  std::vector<char> used(e.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, double cur) -> void {
    if (cur >= best) return;
    if (i == d.size()) {
      double c = cur;
      for (std::size_t j = 0; j < e.size(); ++j)
        if (!used[j]) c = std::max(c, diag(e[j]));
      best = std::min(best, c);
      return;
    }
    self(self, i + 1, std::max(cur, diag(d[i])));
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      self(self, i + 1, std::max(cur, sup(d[i], e[j])));
      used[j] = 0;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

inline std::vector<sausage::PersistencePair> random_diagram(CounterRng& rng, int n) {
  std::vector<sausage::PersistencePair> out;
  for (int i = 0; i < n; ++i) {
    const double b = rng.uniform(0, 1);
    out.push_back({b, b + rng.uniform(0.001, 1)});
  }
  return out;
}

// Coarse values force many exactly tied candidate costs.
inline std::vector<sausage::PersistencePair> lattice_diagram(CounterRng& rng, int n) {
  std::vector<sausage::PersistencePair> out;
  for (int i = 0; i < n; ++i) {
    const double b = 0.125 * static_cast<double>(rng.below(8));
    out.push_back({b, b + 0.125 * static_cast<double>(1 + rng.below(8))});
  }
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  MeanSe r;
  r.n = x.size();
  if (x.empty()) return r;
  for (double v : x) r.mean += v;
  r.mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - r.mean) * (v - r.mean);
  if (x.size() > 1) r.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return r;
}

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
inline std::pair<double, double> ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
  return {d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace testsupport
