#include "sausage/persistence.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sausage {

const std::vector<PersistencePair>& PersistenceDiagram::degree(int q) const {
  if (q == 0) return h0;
  if (q == 1) return h1;
  throw std::invalid_argument("diagram: degree must be 0 or 1");
}

std::vector<PersistencePair>& PersistenceDiagram::degree(int q) {
  if (q == 0) return h0;
  if (q == 1) return h1;
  throw std::invalid_argument("diagram: degree must be 0 or 1");
}

void canonicalize(PersistenceDiagram& d) {
  auto by_birth = [](const PersistencePair& a, const PersistencePair& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  };
  std::sort(d.h0.begin(), d.h0.end(), by_birth);
  std::sort(d.h1.begin(), d.h1.end(), by_birth);
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n), rank(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      int& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    auto& ra = rank[static_cast<std::size_t>(a)];
    auto& rb = rank[static_cast<std::size_t>(b)];
    if (ra < rb) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    if (ra == rb) ++rank[static_cast<std::size_t>(a)];
    return true;
  }
  std::vector<int> parent;
  std::vector<unsigned char> rank;
};

// Symmetric difference of two sorted columns into out.
void add_columns(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else if (b[j] < a[i]) {
      out.push_back(b[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
}

}  // namespace

PersistenceDiagram reduce(const Filtration& f) {
  validate(f);
  const auto& S = f.simplices;
  const std::size_t n = S.size();
  PersistenceDiagram dgm;

  // Vertex simplices are identified by their position; union-find over positions.
  DisjointSets sets(n);
  std::vector<char> negative_edge(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const Simplex& s = S[k];
    if (s.dim != 1) continue;
    if (sets.unite(s.faces[0], s.faces[1])) {
      negative_edge[k] = 1;
      // All vertices are born at 0, so the younger component dies here.
      if (s.value > 0.0) dgm.h0.push_back({0.0, s.value});
    }
  }

  std::vector<int> owner(n, -1);            // edge position -> triangle column that has it as pivot
  std::vector<std::vector<int>> columns(n);  // reduced triangle columns, by triangle position
  std::vector<char> paired_edge(n, 0);
  std::vector<int> col, tmp;
  for (std::size_t k = 0; k < n; ++k) {
    const Simplex& s = S[k];
    if (s.dim != 2) continue;
    col.clear();
    for (int fj : s.faces)
      if (!negative_edge[static_cast<std::size_t>(fj)]) col.push_back(fj);
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      const int low = col.back();
      const int o = owner[static_cast<std::size_t>(low)];
      if (o < 0) break;
      add_columns(col, columns[static_cast<std::size_t>(o)], tmp);
      col.swap(tmp);
    }
    if (col.empty()) continue;  // would create a 2-cycle; impossible in the plane
    const int low = col.back();
    owner[static_cast<std::size_t>(low)] = static_cast<int>(k);
    paired_edge[static_cast<std::size_t>(low)] = 1;
    const double b = S[static_cast<std::size_t>(low)].value;
    if (s.value > b) dgm.h1.push_back({b, s.value});
    columns[k] = col;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (S[k].dim == 1 && !negative_edge[k] && !paired_edge[k])
      throw std::logic_error("reduce: essential degree-1 class in a bounded complex");
  canonicalize(dgm);
  return dgm;
}

PersistenceDiagram alpha_diagram(const PointCloud& cloud) { return reduce(alpha_filtration(cloud)); }

PersistenceDiagram window_restrict(const PersistenceDiagram& d, double r0, double r1) {
  PersistenceDiagram out;
  for (int q = 0; q < 2; ++q)
    for (const auto& p : d.degree(q))
      if (r0 <= p.birth && p.birth < p.death && p.death <= r1) out.degree(q).push_back(p);
  return out;
}

int BettiCurve::operator()(double r) const {
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  if (it == radii.begin()) return 0;
  return counts[static_cast<std::size_t>(it - radii.begin() - 1)];
}

BettiCurve betti_curve(const std::vector<PersistencePair>& pairs) {
  std::map<double, int> delta;
  for (const auto& p : pairs) {
    if (!(p.birth < p.death)) continue;
    ++delta[p.birth];
    --delta[p.death];
  }
  BettiCurve c;
  int run = 0;
  for (const auto& [r, dv] : delta) {
    if (dv == 0) continue;
    run += dv;
    c.radii.push_back(r);
    c.counts.push_back(run);
  }
  return c;
}

BettiCurve betti_curve(const PersistenceDiagram& d, int q) { return betti_curve(d.degree(q)); }

}  // namespace sausage
