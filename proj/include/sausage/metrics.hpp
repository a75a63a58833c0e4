#pragma once

#include <utility>
#include <vector>

#include "sausage/persistence.hpp"

namespace sausage {

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (index in D, index in E)
  std::vector<int> d_diagonal;             // D points sent to the diagonal
  std::vector<int> e_diagonal;             // E points sent to the diagonal
  double cost = 0.0;
};

struct BottleneckResult {
  double distance = 0.0;
  Matching matching;
};

inline double sup_cost(const PersistencePair& x, const PersistencePair& y) {
  return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}
inline double diagonal_cost(const PersistencePair& x) { return 0.5 * (x.death - x.birth); }

// Recomputes the cost of a matching and checks it is a valid partial matching.
double matching_cost(const std::vector<PersistencePair>& d, const std::vector<PersistencePair>& e,
                     const Matching& m);

// Exact bottleneck distance with an optimal matching as witness.
BottleneckResult bottleneck(const std::vector<PersistencePair>& d,
                            const std::vector<PersistencePair>& e);
BottleneckResult bottleneck(const PersistenceDiagram& d, const PersistenceDiagram& e, int q);

}  // namespace sausage
