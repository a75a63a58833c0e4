#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sausage/experiments.hpp"
#include "sausage/weight.hpp"
#include "support.hpp"

using namespace sausage;
using testsupport::walk_cloud;

namespace {

ExperimentConfig small_lln() {
  ExperimentConfig c;
  c.T_ladder = {40, 80};
  c.seeds = {0, 1, 2};
  c.checkpoints = 2;
  return c;
}

PersistenceDiagram two_bars(double b1, double d1, double b2, double d2) {
  PersistenceDiagram d;
  d.h1 = {{b1, d1}, {b2, d2}};
  return d;
}

// Continuous piecewise-linear weight with random breakpoints in [lo, hi].
Weight random_weight(CounterRng& rng, double lo, double hi) {
  const int k = 2 + static_cast<int>(rng.below(6));
  std::vector<double> r{lo}, v{0.0};
  for (int i = 1; i <= k; ++i) {
    r.push_back(lo + (hi - lo) * i / (k + 1));
    v.push_back(rng.uniform(-2, 2));
  }
  r.push_back(hi);
  v.push_back(0.0);
  return Weight(r, v);
}

}  // namespace

TEST_CASE("config JSON roundtrip preserves the hash") {
  ExperimentConfig c;
  c.mu = Point(0.6, -0.8);
  c.T_ladder = {100, 300};
  c.seeds = {4, 9};
  c.psi_radii = {0.5, 0.8, 1.5};
  c.psi_values = {0, 2, 0};
  c.regen_grid = {{1.5, 0.5, 2.0, 0.25}};
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.mu.isApprox(c.mu));
  REQUIRE(back.regen_grid.size() == 1);
  CHECK(back.regen_grid[0].R == 0.25);
  CHECK(back.psi()(0.8) == doctest::Approx(2.0));

  ExperimentConfig d = c;
  d.threads = 7;
  d.out_dir = "/elsewhere";
  CHECK(config_hash(d) == config_hash(c));
  d.T = 999;
  CHECK(config_hash(d) != config_hash(c));

  const ExperimentConfig nested = config_from_json(R"({"psi": {"radii": [0.5, 1, 1.5], "values": [0, 1, 0]}})");
  CHECK(nested.psi()(1.0) == doctest::Approx(1.0));
  CHECK_THROWS(config_from_json(R"({"mu": [1, 0, 0]})"));
  CHECK_THROWS(config_from_json("{not json"));
}

TEST_CASE("config checks") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.check_topology(false));
  CHECK_THROWS_AS(c.check_topology(true), std::invalid_argument);  // L = 8 < 2a
  c.L = 8.4;
  CHECK_NOTHROW(c.check_topology(true));
  c.a = 3.9;
  CHECK_THROWS_AS(c.check_topology(true), std::invalid_argument);
  ExperimentConfig z;
  z.mu = Point(0, 0);
  CHECK_THROWS_AS(z.check_topology(false), std::invalid_argument);
  ExperimentConfig w;
  w.psi_radii = {0.2, 1.0, 1.4};
  w.psi_values = {0, 1, 0};
  CHECK_THROWS_AS(w.check_topology(false), std::invalid_argument);
  ExperimentConfig bad;
  bad.r0 = 2.0;
  CHECK_THROWS(bad.check());
}

TEST_CASE("parallel_for covers every index once and forwards exceptions") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 6) throw std::runtime_error("x"); }),
                  std::runtime_error);
}

TEST_CASE("loglog slope and median") {
  std::vector<double> x, y;
  for (int k = 1; k <= 6; ++k) {
    x.push_back(std::ldexp(1.0, -k));
    y.push_back(3.0 * std::pow(x.back(), 0.5));
  }
  CHECK(loglog_slope(x, y) == doctest::Approx(0.5).epsilon(1e-12));
  y[2] = 0.0;  // dropped
  CHECK(loglog_slope(x, y) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("stability rows satisfy the chain on a short ladder") {
  ExperimentConfig c;
  c.mu = Point(0, 0);
  c.seeds = {5, 6};
  c.mesh_exponents = {6, 7, 8};
  c.ref_exponent = 11;
  const StabilityReport r = run_stability(c);
  CHECK(r.rows.size() == 2 * 3 * 3);
  CHECK(r.violations == 0);
  for (const auto& row : r.rows) {
    if (row.variant != "sample") continue;
    CHECK(row.d_b0 <= row.d_h + 1e-9);
    CHECK(row.d_b1 <= row.d_h + 1e-9);
    CHECK(row.d_h <= row.omega + 1e-9);
  }
  CHECK(r.slope.size() == 2);
  c.ref_exponent = 10;
  CHECK_THROWS_AS(run_stability(c), std::invalid_argument);
}

TEST_CASE("LLN decomposition: telescoping, direct prefixes and thread independence") {
  ExperimentConfig c = small_lln();
  const LlnReport r1 = run_phi_lln(c);
  c.threads = 3;
  const LlnReport r3 = run_phi_lln(c);
  CHECK(r1.max_telescoping_error <= 1e-8);
  REQUIRE(r1.rows.size() == r3.rows.size());
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].phi == r3.rows[i].phi);
    CHECK(r1.rows[i].n_cycles == r3.rows[i].n_cycles);
  }
  CHECK(r1.cycles.size() == r3.cycles.size());

  // Independent route: Phi of the path prefix, recomputed from scratch.
  const SimulatedRun run = simulate_run(c, 1);
  const Weight psi = c.psi();
  for (const auto& row : r1.rows) {
    if (row.seed != 1) continue;
    std::size_t n = 0;
    while (n < run.path.times.size() && run.path.times[n] <= row.T + 1e-9) ++n;
    const double direct = phi_psi(alpha_diagram(run.path.points.leftCols(static_cast<Eigen::Index>(n))), psi);
    CHECK(row.phi[0] == doctest::Approx(direct).epsilon(1e-12));
    if (row.n_cycles > 0) CHECK(row.n_cycles == run.trace.count_up_to(row.T));
  }

  // Cycle increments against globally recomputed increments of the prefix.
  for (const auto& cyc : r1.cycles) {
    if (cyc.seed != 1 || cyc.k < 2) continue;
    const auto end = static_cast<Eigen::Index>(run.trace.tau_index[cyc.k - 1] + 1);
    const auto prev = static_cast<Eigen::Index>(run.trace.tau_index[cyc.k - 2] + 1);
    const double inc = phi_psi(alpha_diagram(run.path.points.leftCols(end)), psi) -
                       phi_psi(alpha_diagram(run.path.points.leftCols(prev)), psi);
    CHECK(cyc.z[0] == doctest::Approx(inc).epsilon(1e-9));
    CHECK(cyc.m_coarse[0] >= std::abs(cyc.z[0]));
  }

  const LlnSummary& s = r1.at(80);
  CHECK(s.cycles > 0);
  CHECK(std::isfinite(s.mean_ratio));
  CHECK_THROWS(r1.at(55));
}

TEST_CASE("zero-noise ramp has no holes") {
  ExperimentConfig c;
  c.noise_scale = 0.0;
  c.T_ladder = {50, 100};
  c.seeds = {0, 1};
  const LlnReport r = run_phi_lln(c);
  for (const auto& row : r.rows) {
    CHECK(row.phi[0] == 0.0);
    CHECK(row.n_cycles == static_cast<std::size_t>(row.T / c.L));
  }
  CHECK(r.at(100).mean_rho_cycle == 0.0);
  CHECK(r.at(100).mean_delta_tau == doctest::Approx(c.L));
  const IntensityReport in = estimate_intensity(c, 3);
  for (double x : in.lambda) CHECK(x == 0.0);
}

TEST_CASE("intensity bins add up to the tent-sum functional") {
  ExperimentConfig c = small_lln();
  c.T_ladder = {60};
  const IntensityReport r = estimate_intensity(c, 4);
  REQUIRE(r.lambda.size() == 4);
  CHECK(std::abs(r.sum_lambda - r.tent_sum_rho) <= 1e-8 * (1.0 + std::abs(r.tent_sum_rho)));
  for (std::size_t i = 1; i < r.centers.size(); ++i) CHECK(r.centers[i] > r.centers[i - 1]);
}

TEST_CASE("audit_pair on disjoint, identical and random walk clouds") {
  CounterRng rng(41);
  const double r = 0.3, h = 0.01;
  const PointCloud A = walk_cloud(rng, 12, Point(0, 0), 0.2, 0.4);
  PointCloud B = A;
  B.row(0).array() += 100.0;
  const PairAudit far = audit_pair(A, B, r, h);
  CHECK(far.inter == Betti2{0, 0});
  CHECK(far.uni.b0 == far.a.b0 + far.b.b0);
  CHECK(far.uni.b1 == far.a.b1 + far.b.b1);
  CHECK(far.mv_ok);

  const PairAudit same = audit_pair(A, A, r, h);
  CHECK(same.inter == same.a);
  CHECK(same.uni == same.a);
  CHECK(same.mv_ok);
  CHECK(same.intersection_ok);

  for (int t = 0; t < 10; ++t) {
    const PointCloud X = walk_cloud(rng, 15, Point(0, 0), 0.2, 0.5);
    const PointCloud Y = walk_cloud(rng, 15, Point(rng.uniform(-1, 1), rng.uniform(-1, 1)), 0.2, 0.5);
    const PairAudit p = audit_pair(X, Y, 0.35, 0.01);
    CHECK(p.mv_ok);
    CHECK(p.intersection_ok);
  }
}

TEST_CASE("interface audit on short paths") {
  ExperimentConfig c;
  c.T = 30;
  c.L = 8.4;
  c.seeds = {0, 1};
  c.n_radii = 5;
  const InterfaceReport r = run_interface_audit(c);
  CHECK(r.paths.size() == 2);
  CHECK(r.mv_violations == 0);
  CHECK(r.intersection_violations == 0);
  CHECK(r.slab_violations == 0);
  CHECK(r.far_violations == 0);
  CHECK(r.bound_violations == 0);
  for (double x : r.i_k) CHECK(x >= 0.0);
  for (const auto& p : r.paths) CHECK(p.integral_beta1 <= p.bound);
  CHECK_THROWS_AS(run_interface_audit(ExperimentConfig{}), std::invalid_argument);
}

TEST_CASE("complexity bound on a circle-like closed path") {
  // Densely sampled unit circle: one hole for r < 1, so the integral of beta1
  // over [r0, r1] = [0.2, 0.6] is 0.4.
  PathSample p;
  const int n = 2000;
  p.points.resize(2, n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = 2 * M_PI * i / n;
    p.times.push_back(t);
    p.points.col(i) = Point(std::cos(t), std::sin(t));
  }
  const PathBound b = complexity_bound(p, 0.2, 0.6, 0.01);
  CHECK(b.integral_beta1 == doctest::Approx(0.4).epsilon(1e-3));
  // area of the 0.6 annulus, (1.6^2 - 0.4^2) pi, to grid accuracy
  CHECK(b.area_r1 == doctest::Approx(2.4 * M_PI).epsilon(0.01));
  CHECK(b.ok);
}

TEST_CASE("regeneration battery and renewal on small samples") {
  ExperimentConfig c;
  c.regen_paths = 300;
  c.regen_grid = {{1, 1, 1, 1}, {2, 0.5, 2, 0.5}};
  const RegenStatsReport b = run_regen_battery(c);
  std::size_t checked = 0;
  for (const auto& row : b.rows) {
    if (row.informational || row.quantity == "mean_tau1") continue;
    ++checked;
    CHECK_MESSAGE(row.within(4.0), row.quantity << " z=" << row.z());
  }
  CHECK(checked == 2 * 3);
  c.renewal_T = 200;
  c.renewal_seeds = 3;
  const RegenStatsReport n = run_renewal(c);
  bool saw_rate = false;
  for (const auto& row : n.rows)
    if (row.quantity == "renewal_rate") {
      saw_rate = true;
      CHECK(row.closed_form == doctest::Approx(1 - std::exp(-2.0)));
      CHECK(row.within(4.0));
    }
  CHECK(saw_rate);
}

TEST_CASE("crossed bar pairs are indistinguishable by every smoothed functional") {
  CounterRng rng(77);
  for (int t = 0; t < 20; ++t) {
    double v[4];
    for (double& x : v) x = rng.uniform(0.5, 1.5);
    std::sort(v, v + 4);
    const PersistenceDiagram mu1 = two_bars(v[0], v[2], v[1], v[3]);
    const PersistenceDiagram mu2 = two_bars(v[0], v[3], v[1], v[2]);
    for (int k = 0; k < 50; ++k) {
      const Weight psi = random_weight(rng, 0.5, 1.5);
      CHECK(std::abs(phi_psi(mu1, psi) - phi_psi(mu2, psi)) <= 1e-10);
    }
  }
}

TEST_CASE("manifest records hash, outputs and versions") {
  ExperimentConfig c;
  c.out_dir = (std::filesystem::temp_directory_path() / "sausage_manifest_test").string();
  write_manifest(c, "unit", 1.5, {"a.csv", "b.csv"});
  std::ifstream f(std::filesystem::path(c.out_dir) / "manifest.json");
  REQUIRE(f);
  const auto j = nlohmann::json::parse(f);
  CHECK(j.at("config_hash").get<std::string>() == config_hash(c));
  CHECK(j.at("outputs").size() == 2);
  CHECK(j.at("wall_seconds").get<double>() == 1.5);
  CHECK(j.at("versions").contains("eigen"));
  CHECK(config_from_json(j.at("config").dump()).T == c.T);
}
