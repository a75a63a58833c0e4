#include "sausage/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sausage {

namespace {

// Uniform grid over diagram points for sup-norm box queries.
class BoxIndex {
 public:
  explicit BoxIndex(const std::vector<PersistencePair>& pts) : pts_(pts) {
    if (pts.empty()) return;
    lo_b_ = hi_b_ = pts[0].birth;
    lo_d_ = hi_d_ = pts[0].death;
    for (const auto& p : pts) {
      lo_b_ = std::min(lo_b_, p.birth);
      hi_b_ = std::max(hi_b_, p.birth);
      lo_d_ = std::min(lo_d_, p.death);
      hi_d_ = std::max(hi_d_, p.death);
    }
    const double ext = std::max(hi_b_ - lo_b_, hi_d_ - lo_d_);
    const double n = static_cast<double>(pts.size());
    cell_ = ext > 0.0 ? ext / std::max(1.0, std::sqrt(n)) : 1.0;
    nb_ = static_cast<long>((hi_b_ - lo_b_) / cell_) + 1;
    nd_ = static_cast<long>((hi_d_ - lo_d_) / cell_) + 1;
    start_.assign(static_cast<std::size_t>(nb_ * nd_) + 1, 0);
    std::vector<std::size_t> key(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      key[i] = static_cast<std::size_t>(cd(pts[i].death) * nb_ + cb(pts[i].birth));
      ++start_[key[i] + 1];
    }
    for (std::size_t c = 0; c + 1 < start_.size(); ++c) start_[c + 1] += start_[c];
    items_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[key[i]]++] = static_cast<int>(i);
  }

  // Calls f(j, cost) for every point with sup-norm distance <= r from x.
  template <typename F>
  void query(const PersistencePair& x, double r, F&& f) const {
    if (pts_.empty()) return;
    const long b0 = cb(x.birth - r), b1 = cb(x.birth + r);
    const long d0 = cd(x.death - r), d1 = cd(x.death + r);
    for (long dd = d0; dd <= d1; ++dd)
      for (long bb = b0; bb <= b1; ++bb) {
        const auto c = static_cast<std::size_t>(dd * nb_ + bb);
        for (std::size_t t = start_[c]; t < start_[c + 1]; ++t) {
          const int j = items_[t];
          const double cost = sup_cost(x, pts_[static_cast<std::size_t>(j)]);
          if (cost <= r) f(j, cost);
        }
      }
  }

 private:
  long cb(double b) const {
    const double v = std::floor((b - lo_b_) / cell_);
    return static_cast<long>(std::clamp(v, 0.0, static_cast<double>(nb_ - 1)));
  }
  long cd(double d) const {
    const double v = std::floor((d - lo_d_) / cell_);
    return static_cast<long>(std::clamp(v, 0.0, static_cast<double>(nd_ - 1)));
  }

  const std::vector<PersistencePair>& pts_;
  double lo_b_ = 0, hi_b_ = 0, lo_d_ = 0, hi_d_ = 0, cell_ = 1.0;
  long nb_ = 1, nd_ = 1;
  std::vector<std::size_t> start_;
  std::vector<int> items_;
};

// Matching from the "far" points of one side into the whole other side, using
// only edges of sup-norm cost <= delta.
class SideMatcher {
 public:
  SideMatcher(const std::vector<PersistencePair>& left, const BoxIndex& right_index,
              std::size_t n_right)
      : left_(left), right_(right_index), n_right_(n_right) {}

  // Returns false if some far left point cannot be matched. match_left[i] is the
  // partner of left point i (or -1).
  bool run(double delta, std::vector<int>& match_left) {
    match_left.assign(left_.size(), -1);
    match_right_.assign(n_right_, -1);
    stamp_.assign(n_right_, 0);
    delta_ = delta;
    round_ = 0;
    for (std::size_t i = 0; i < left_.size(); ++i) {
      if (!(diagonal_cost(left_[i]) > delta)) continue;
      ++round_;
      if (!augment(static_cast<int>(i))) return false;
    }
    for (std::size_t j = 0; j < n_right_; ++j)
      if (match_right_[j] >= 0) match_left[static_cast<std::size_t>(match_right_[j])] = static_cast<int>(j);
    return true;
  }

 private:
  bool augment(int u) {
    std::vector<int> nbrs;
    right_.query(left_[static_cast<std::size_t>(u)], delta_, [&](int j, double) { nbrs.push_back(j); });
    for (int j : nbrs) {
      if (match_right_[static_cast<std::size_t>(j)] < 0) {
        stamp_[static_cast<std::size_t>(j)] = round_;
        match_right_[static_cast<std::size_t>(j)] = u;
        return true;
      }
    }
    for (int j : nbrs) {
      auto& st = stamp_[static_cast<std::size_t>(j)];
      if (st == round_) continue;
      st = round_;
      if (augment(match_right_[static_cast<std::size_t>(j)])) {
        match_right_[static_cast<std::size_t>(j)] = u;
        return true;
      }
    }
    return false;
  }

  const std::vector<PersistencePair>& left_;
  const BoxIndex& right_;
  std::size_t n_right_;
  std::vector<int> match_right_;
  std::vector<long> stamp_;
  long round_ = 0;
  double delta_ = 0.0;
};

class Solver {
 public:
  Solver(const std::vector<PersistencePair>& d, const std::vector<PersistencePair>& e)
      : d_(d), e_(e), index_d_(d), index_e_(e), md_(d, index_e_, e.size()), me_(e, index_d_, d.size()) {}

  bool feasible(double delta) {
    return md_.run(delta, m1_) && me_.run(delta, m2_);
  }

  // Combines a matching covering far D points with one covering far E points.
  // In each component of M1 u M2 (a path or an even cycle), keep the M1 edges
  // unless an end of the path is an E point covered by M2 alone.
  Matching combine(double delta) {
    if (!feasible(delta)) throw std::logic_error("bottleneck: witness requested at infeasible value");
    const int n = static_cast<int>(d_.size()), m = static_cast<int>(e_.size());
    // Vertex ids: D point i is i, E point j is n + j.
    std::vector<int> a1(static_cast<std::size_t>(n + m), -1), a2(static_cast<std::size_t>(n + m), -1);
    for (int i = 0; i < n; ++i) {
      const int j = m1_[static_cast<std::size_t>(i)];
      if (j >= 0) {
        a1[static_cast<std::size_t>(i)] = n + j;
        a1[static_cast<std::size_t>(n + j)] = i;
      }
    }
    for (int j = 0; j < m; ++j) {
      const int i = m2_[static_cast<std::size_t>(j)];
      if (i >= 0) {
        a2[static_cast<std::size_t>(n + j)] = i;
        a2[static_cast<std::size_t>(i)] = n + j;
      }
    }
    std::vector<int> partner(static_cast<std::size_t>(n), -1);
    std::vector<char> seen(static_cast<std::size_t>(n + m), 0);
    std::vector<int> comp, stack;
    for (int s = 0; s < n + m; ++s) {
      if (seen[static_cast<std::size_t>(s)]) continue;
      comp.clear();
      stack.assign(1, s);
      seen[static_cast<std::size_t>(s)] = 1;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (int w : {a1[static_cast<std::size_t>(v)], a2[static_cast<std::size_t>(v)]})
          if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
          }
      }
      bool keep_m2 = false;
      for (int v : comp)
        if (v >= n && a1[static_cast<std::size_t>(v)] < 0 && a2[static_cast<std::size_t>(v)] >= 0) keep_m2 = true;
      const auto& chosen = keep_m2 ? a2 : a1;
      for (int v : comp)
        if (v < n && chosen[static_cast<std::size_t>(v)] >= 0)
          partner[static_cast<std::size_t>(v)] = chosen[static_cast<std::size_t>(v)] - n;
    }

    Matching out;
    std::vector<char> e_used(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < n; ++i) {
      const int j = partner[static_cast<std::size_t>(i)];
      if (j >= 0) {
        out.pairs.emplace_back(i, j);
        e_used[static_cast<std::size_t>(j)] = 1;
      } else {
        out.d_diagonal.push_back(i);
      }
    }
    for (int j = 0; j < m; ++j)
      if (!e_used[static_cast<std::size_t>(j)]) out.e_diagonal.push_back(j);
    out.cost = matching_cost(d_, e_, out);
    return out;
  }

  // Sup-norm costs in (lo, hi) on edges touching a point whose diagonal cost exceeds lo.
  std::vector<double> pair_candidates(double lo, double hi) const {
    std::vector<double> c;
    auto collect = [&](const std::vector<PersistencePair>& side, const BoxIndex& other) {
      for (const auto& x : side) {
        if (!(diagonal_cost(x) > lo)) continue;
        other.query(x, hi, [&](int, double cost) {
          if (cost > lo && cost < hi) c.push_back(cost);
        });
      }
    };
    collect(d_, index_e_);
    collect(e_, index_d_);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  }

 private:
  const std::vector<PersistencePair>& d_;
  const std::vector<PersistencePair>& e_;
  BoxIndex index_d_, index_e_;
  SideMatcher md_, me_;
  std::vector<int> m1_, m2_;
};

// Smallest feasible value in a sorted list whose last entry is known feasible.
template <typename Pred>
std::size_t first_feasible(const std::vector<double>& v, Pred&& ok) {
  std::size_t lo = 0, hi = v.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(v[mid])) hi = mid; else lo = mid + 1;
  }
  return lo;
}

}  // namespace

double matching_cost(const std::vector<PersistencePair>& d, const std::vector<PersistencePair>& e,
                     const Matching& m) {
  std::vector<int> used_d(d.size(), 0), used_e(e.size(), 0);
  double c = 0.0;
  for (const auto& [i, j] : m.pairs) {
    ++used_d.at(static_cast<std::size_t>(i));
    ++used_e.at(static_cast<std::size_t>(j));
    c = std::max(c, sup_cost(d[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]));
  }
  for (int i : m.d_diagonal) {
    ++used_d.at(static_cast<std::size_t>(i));
    c = std::max(c, diagonal_cost(d[static_cast<std::size_t>(i)]));
  }
  for (int j : m.e_diagonal) {
    ++used_e.at(static_cast<std::size_t>(j));
    c = std::max(c, diagonal_cost(e[static_cast<std::size_t>(j)]));
  }
  for (int u : used_d)
    if (u != 1) throw std::logic_error("matching: D point not used exactly once");
  for (int u : used_e)
    if (u != 1) throw std::logic_error("matching: E point not used exactly once");
  return c;
}

BottleneckResult bottleneck(const std::vector<PersistencePair>& d,
                            const std::vector<PersistencePair>& e) {
  BottleneckResult res;
  if (d.empty() && e.empty()) return res;
  for (const auto* side : {&d, &e})
    for (const auto& p : *side)
      if (!std::isfinite(p.birth) || !std::isfinite(p.death) || p.death < p.birth)
        throw std::invalid_argument("bottleneck: diagram points must be finite with birth <= death");

  Solver solver(d, e);
  std::vector<double> diag{0.0};
  for (const auto& p : d) diag.push_back(diagonal_cost(p));
  for (const auto& p : e) diag.push_back(diagonal_cost(p));
  std::sort(diag.begin(), diag.end());
  diag.erase(std::unique(diag.begin(), diag.end()), diag.end());

  const std::size_t k = first_feasible(diag, [&](double x) { return solver.feasible(x); });
  double best = diag[k];
  if (k > 0) {
    const std::vector<double> cand = solver.pair_candidates(diag[k - 1], diag[k]);
    if (!cand.empty()) {
      std::vector<double> with_top = cand;
      with_top.push_back(diag[k]);
      best = with_top[first_feasible(with_top, [&](double x) { return solver.feasible(x); })];
    }
  }
  res.matching = solver.combine(best);
  res.distance = res.matching.cost;
  return res;
}

BottleneckResult bottleneck(const PersistenceDiagram& d, const PersistenceDiagram& e, int q) {
  return bottleneck(d.degree(q), e.degree(q));
}

}  // namespace sausage
