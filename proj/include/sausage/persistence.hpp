#pragma once

#include <cstddef>
#include <vector>

#include "sausage/filtration.hpp"

namespace sausage {

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
  double persistence() const { return death - birth; }
  bool operator==(const PersistencePair&) const = default;
};

// Degree 0 is reduced (no essential component bar); degree 1 deaths are finite.
struct PersistenceDiagram {
  std::vector<PersistencePair> h0;
  std::vector<PersistencePair> h1;

  const std::vector<PersistencePair>& degree(int q) const;
  std::vector<PersistencePair>& degree(int q);
  std::size_t size() const { return h0.size() + h1.size(); }
};

// Sorts every degree by birth, then death.
void canonicalize(PersistenceDiagram& d);

// Degree 0 via union-find in filtration order; degree 1 via column reduction
// over GF(2) with rows of negative edges compressed out.
PersistenceDiagram reduce(const Filtration& f);

PersistenceDiagram alpha_diagram(const PointCloud& cloud);

// Pairs with r0 <= birth < death <= r1.
PersistenceDiagram window_restrict(const PersistenceDiagram& d, double r0, double r1);

// Right-continuous step function r -> #{(b, d): b <= r < d}.
struct BettiCurve {
  std::vector<double> radii;  // strictly increasing change points
  std::vector<int> counts;    // value on [radii[i], radii[i+1]); 0 before radii[0]

  int operator()(double r) const;
};

BettiCurve betti_curve(const std::vector<PersistencePair>& pairs);
BettiCurve betti_curve(const PersistenceDiagram& d, int q);

}  // namespace sausage
