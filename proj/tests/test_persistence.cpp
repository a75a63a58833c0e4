#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sausage/csv.hpp"
#include "sausage/persistence.hpp"
#include "sausage/weight.hpp"
#include "support.hpp"

using namespace sausage;
using testsupport::uniform_cloud;

namespace {

PointCloud cloud_of(std::initializer_list<std::pair<double, double>> pts) {
  PointCloud c(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index i = 0;
  for (auto [x, y] : pts) c.col(i++) = Point(x, y);
  return c;
}

Weight random_weight(CounterRng& rng, double r0, double r1) {
  const int k = 1 + static_cast<int>(rng.below(6));
  std::vector<double> xs{r0, r1};
  for (int i = 0; i < k; ++i) xs.push_back(rng.uniform(r0, r1));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> vs(xs.size());
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) vs[i] = rng.uniform(-1, 2);
  return Weight(xs, vs);
}

}  // namespace

TEST_CASE("diagrams of small configurations") {
  SUBCASE("single point") {
    const auto d = alpha_diagram(cloud_of({{0.3, 0.4}}));
    CHECK(d.h0.empty());
    CHECK(d.h1.empty());
  }
  SUBCASE("equilateral triangle") {
    const auto d = alpha_diagram(cloud_of({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}));
    REQUIRE(d.h1.size() == 1);
    CHECK(d.h1[0].birth == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.h1[0].death == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
    REQUIRE(d.h0.size() == 2);
    for (const auto& p : d.h0) {
      CHECK(p.birth == 0.0);
      CHECK(p.death == doctest::Approx(0.5).epsilon(1e-14));
    }
  }
  SUBCASE("unit square") {
    const auto d = alpha_diagram(cloud_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    REQUIRE(d.h1.size() == 1);
    CHECK(d.h1[0].birth == 0.5);
    CHECK(d.h1[0].death == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(d.h0.size() == 3);
  }
  SUBCASE("malformed filtration is rejected") {
    auto f = alpha_filtration(cloud_of({{0, 0}, {1, 0}, {0, 1}}));
    f.simplices.back().faces[0] = static_cast<int>(f.simplices.size());
    CHECK_THROWS_AS(reduce(f), std::invalid_argument);
  }
}

TEST_CASE("reduction equals the textbook full-matrix reduction") {
  CounterRng rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(60));
    PointCloud c = uniform_cloud(rng, n);
    if (trial % 6 == 0)  // lattice points: many ties in the filtration values
      for (int i = 0; i < n; ++i) c.col(i) = Point(0.1 * (i % 7), 0.1 * (i / 7));
    const auto f = alpha_filtration(c);
    const auto fast = reduce(f);
    const auto ref = testsupport::reference_reduction(f);
    CHECK(fast.h0 == ref.h0);
    CHECK(fast.h1 == ref.h1);
  }
}

TEST_CASE("births minus deaths equal boundary-rank Betti numbers") {
  CounterRng rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const auto c = uniform_cloud(rng, 4 + static_cast<int>(rng.below(20)));
    const auto f = alpha_filtration(c);
    const auto d = reduce(f);
    const auto b0 = betti_curve(d, 0), b1 = betti_curve(d, 1);
    for (int i = 0; i < 12; ++i) {
      const double r = i == 0 ? 0.0 : rng.uniform(0.0, 0.6);
      const auto ranks = testsupport::betti_by_rank(f, r);
      CHECK(ranks[0] == b0(r) + 1);
      CHECK(ranks[1] == b1(r));
    }
    // Exactly at critical values too.
    for (const auto& s : f.simplices) {
      if (s.dim == 0) continue;
      const auto ranks = testsupport::betti_by_rank(f, s.value);
      CHECK(ranks[0] == b0(s.value) + 1);
      CHECK(ranks[1] == b1(s.value));
    }
  }
}

TEST_CASE("diagram invariants: finite, positive persistence, bounded deaths") {
  CounterRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = alpha_diagram(uniform_cloud(rng, 100));
    for (int q = 0; q < 2; ++q)
      for (const auto& p : d.degree(q)) {
        CHECK(std::isfinite(p.death));
        CHECK(p.birth < p.death);
        CHECK(p.death < 10.0);
      }
    // Reduced H0 of n distinct points has n - 1 bars.
    CHECK(d.h0.size() == 99);
  }
}

TEST_CASE("betti curves") {
  const std::vector<PersistencePair> pairs{{1, 3}, {2, 4}};
  const auto b = betti_curve(pairs);
  CHECK(b(0.5) == 0);
  CHECK(b(1.0) == 1);
  CHECK(b(1.5) == 1);
  CHECK(b(2.5) == 2);
  CHECK(b(3.0) == 1);  // the class dying at 3 is no longer alive
  CHECK(b(3.5) == 1);
  CHECK(b(4.0) == 0);
  CHECK(b(5.0) == 0);
  const auto e = betti_curve(std::vector<PersistencePair>{});
  CHECK(e(0.0) == 0);
  CHECK(e(100.0) == 0);
}

TEST_CASE("window restriction") {
  PersistenceDiagram d;
  d.h1 = {{0.1, 0.5}, {0.3, 0.9}};
  const auto w = window_restrict(d, 0.2, 1.0);
  REQUIRE(w.h1.size() == 1);
  CHECK(w.h1[0] == PersistencePair{0.3, 0.9});
  CHECK(window_restrict(d, 0.0, 1.0).h1 == d.h1);
  CHECK(window_restrict(d, 2.0, 3.0).h1.empty());
}

TEST_CASE("weights") {
  const Weight w({0.4, 0.6, 0.8}, {0.0, 2.0, 0.0});
  CHECK(w(0.5) == doctest::Approx(1.0));
  CHECK(w(0.3) == 0.0);
  CHECK(w(0.9) == 0.0);
  CHECK(w.integral(0.0, 1.0) == doctest::Approx(0.4));
  CHECK(w.integral(0.4, 0.5) == doctest::Approx(0.05));
  CHECK_THROWS(Weight({0.0, 1.0}, {0.0, 0.0}));
  CHECK_THROWS(Weight({0.5, 1.0}, {1.0, 0.0}));
  CHECK_THROWS(Weight({0.5, 0.5, 1.0}, {0.0, 1.0, 0.0}));
  CHECK_THROWS(Weight({0.5}, {0.0}));

  const auto fam = hat_family(0.5, 1.5, 6);
  REQUIRE(fam.size() == 6);
  Weight sum = fam[0];
  for (std::size_t i = 1; i < fam.size(); ++i) sum = sum + fam[i];
  for (double r = 0.65; r < 1.35; r += 0.01) CHECK(sum(r) == doctest::Approx(1.0));

  std::stringstream ss;
  write_weight_csv(ss, w);
  const auto back = read_weight_csv(ss);
  CHECK(back.radii() == w.radii());
  CHECK(back.values() == w.values());
}

TEST_CASE("phi_psi examples") {
  PersistenceDiagram d;
  d.h1 = {{0.5, 0.7}};
  CHECK(phi_psi(d, plateau(0.4, 0.8, 1e-6)) == doctest::Approx(0.2).epsilon(1e-12));
  PersistenceDiagram far;
  far.h1 = {{0.05, 0.2}, {2.0, 3.0}};
  CHECK(phi_psi(far, plateau(0.4, 0.8, 1e-3)) == 0.0);
  d.h0 = {{0.0, 0.6}};  // degree 0 does not contribute
  CHECK(phi_psi(d, plateau(0.4, 0.8, 1e-6)) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("pair-sum and Betti-curve routes agree") {
  CounterRng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<PersistencePair> pairs;
    const int n = static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) {
      const double b = rng.uniform(0, 2);
      pairs.push_back({b, b + rng.uniform(1e-6, 1.5)});
    }
    if (trial % 10 == 0 && n > 1) pairs[1] = pairs[0];  // multiplicity
    const Weight psi = random_weight(rng, rng.uniform(0.05, 0.8), rng.uniform(1.0, 2.5));
    const double a = phi_psi(pairs, psi);
    const double b = integrate_betti(betti_curve(pairs), psi);
    CHECK(std::abs(a - b) <= 1e-10);
  }
  // On real diagrams as well.
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = alpha_diagram(uniform_cloud(rng, 200, 0, 3));
    const Weight psi = random_weight(rng, 0.01, 0.3);
    CHECK(std::abs(phi_psi(d, psi) - integrate_betti(betti_curve(d, 1), psi)) <= 1e-10);
  }
}

TEST_CASE("phi_psi does not determine the diagram") {
  CounterRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const double r0 = 0.5, r1 = 1.5;
    std::vector<double> t;
    for (int i = 0; i < 4; ++i) t.push_back(rng.uniform(r0 + 1e-3, r1 - 1e-3));
    std::sort(t.begin(), t.end());
    const double b1 = t[0], b2 = t[1], d1 = t[2], d2 = t[3];
    PersistenceDiagram m1, m2;
    m1.h1 = {{b1, d1}, {b2, d2}};
    m2.h1 = {{b1, d2}, {b2, d1}};
    const Weight psi = random_weight(rng, r0, r1);
    CHECK(std::abs(phi_psi(m1, psi) - phi_psi(m2, psi)) <= 1e-10);
  }
}

TEST_CASE("diagram CSV never emits inf and round-trips") {
  CounterRng rng(6);
  const auto d = alpha_diagram(uniform_cloud(rng, 50));
  std::stringstream ss;
  write_diagram_csv(ss, d);
  CHECK(ss.str().find("inf") == std::string::npos);
  CHECK(ss.str().rfind("q,birth,death\n", 0) == 0);
  const auto back = read_diagram_csv(ss);
  CHECK(back.h0 == d.h0);
  CHECK(back.h1 == d.h1);
}
