#include "sausage/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Core>
#include <boost/random/normal_distribution.hpp>
#include <boost/version.hpp>

#include "json.hpp"
#include "sausage/geometry.hpp"
#include "sausage/metrics.hpp"
#include "sausage/rng.hpp"

namespace sausage {

using nlohmann::json;

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);
constexpr const char* kVersion = "0.1.0";

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

struct Moments {
  double mean = nan();
  double sd = nan();
  double se = nan();
  std::size_t n = 0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  std::vector<double> v;
  for (double y : x)
    if (std::isfinite(y)) v.push_back(y);
  m.n = v.size();
  if (v.empty()) return m;
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  double ss = 0.0;
  for (double y : v) ss += (y - m.mean) * (y - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  m.se = m.sd / std::sqrt(static_cast<double>(v.size()));
  return m;
}

PointCloud columns(const PointCloud& pts, std::size_t first, std::size_t last) {
  return pts.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(last - first + 1));
}

// Last sample index with time <= T.
std::size_t index_at(const std::vector<double>& times, double T) {
  const auto it = std::upper_bound(times.begin(), times.end(), T + 1e-9 * std::max(1.0, T));
  if (it == times.begin()) return 0;
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

int betti1_at(const std::vector<PersistencePair>& h1, double r) {
  int c = 0;
  for (const auto& p : h1) c += p.birth <= r && r < p.death;
  return c;
}

}  // namespace

// ---- configuration ---------------------------------------------------------

Weight ExperimentConfig::psi() const {
  if (psi_radii.empty()) return unit_hat(r0, r1);
  return Weight(psi_radii, psi_values);
}

std::vector<double> ExperimentConfig::t_ladder() const {
  std::vector<double> v = T_ladder.empty() ? std::vector<double>{T} : T_ladder;
  std::sort(v.begin(), v.end());
  return v;
}

RegenParams ExperimentConfig::regen_params() const {
  RegenParams p;
  p.L = L;
  p.R = R;
  p.a = a;
  p.eps_cut = eps_cut;
  p.nu = mu.norm();
  return p;
}

void ExperimentConfig::check() const {
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (!(noise_scale >= 0.0)) throw std::invalid_argument("config: noise_scale must be >= 0");
  if (!(r0 > 0.0 && r1 > r0)) throw std::invalid_argument("config: need 0 < r0 < r1");
  if (!(h > 0.0)) throw std::invalid_argument("config: h must be positive");
  if (seeds.empty()) throw std::invalid_argument("config: empty seed list");
  if (threads == 0) throw std::invalid_argument("config: threads must be >= 1");
  for (double t : t_ladder())
    if (!(t >= dt)) throw std::invalid_argument("config: every T must be >= dt");
  if (n_radii < 2) throw std::invalid_argument("config: n_radii must be >= 2");
}

void ExperimentConfig::check_topology(bool slabs) const {
  check();
  if (!(mu.norm() > 0.0)) throw std::invalid_argument("config: drift must be nonzero");
  if (!(L > R + 2.0 * r1)) throw std::invalid_argument("config: need L > R + 2 r1");
  if (slabs) {
    if (!(a > R + 2.0 * r1)) throw std::invalid_argument("config: need a > R + 2 r1");
    if (!(L > 2.0 * a)) throw std::invalid_argument("config: need L > 2a");
  }
  const Weight w = psi();
  if (w.r0() < r0 - 1e-12 || w.r1() > r1 + 1e-12)
    throw std::invalid_argument("config: psi must be supported in [r0, r1]");
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  if (j.contains("mu")) {
    const auto m = j.at("mu").get<std::vector<double>>();
    if (m.size() != 2) throw std::invalid_argument("config: mu needs two components");
    c.mu = Point(m[0], m[1]);
  }
#define SAUSAGE_FIELD(name) c.name = j.value(#name, c.name)
  SAUSAGE_FIELD(T);
  SAUSAGE_FIELD(T_ladder);
  SAUSAGE_FIELD(dt);
  SAUSAGE_FIELD(noise_scale);
  SAUSAGE_FIELD(r0);
  SAUSAGE_FIELD(r1);
  SAUSAGE_FIELD(psi_radii);
  SAUSAGE_FIELD(psi_values);
  SAUSAGE_FIELD(L);
  SAUSAGE_FIELD(R);
  SAUSAGE_FIELD(a);
  SAUSAGE_FIELD(eps_cut);
  SAUSAGE_FIELD(margin);
  SAUSAGE_FIELD(h);
  SAUSAGE_FIELD(n_radii);
  SAUSAGE_FIELD(critical_skip);
  SAUSAGE_FIELD(seeds);
  SAUSAGE_FIELD(threads);
  SAUSAGE_FIELD(out_dir);
  SAUSAGE_FIELD(stab_T);
  SAUSAGE_FIELD(mesh_exponents);
  SAUSAGE_FIELD(ref_exponent);
  SAUSAGE_FIELD(noise_eta);
  SAUSAGE_FIELD(poly_h);
  SAUSAGE_FIELD(regen_paths);
  SAUSAGE_FIELD(regen_dt);
  SAUSAGE_FIELD(regen_eps_cut);
  SAUSAGE_FIELD(renewal_T);
  SAUSAGE_FIELD(renewal_nu);
  SAUSAGE_FIELD(renewal_L);
  SAUSAGE_FIELD(renewal_R);
  SAUSAGE_FIELD(renewal_seeds);
  SAUSAGE_FIELD(renewal_rho);
  SAUSAGE_FIELD(checkpoints);
  SAUSAGE_FIELD(bins);
#undef SAUSAGE_FIELD
  if (j.contains("psi")) {
    c.psi_radii = j.at("psi").at("radii").get<std::vector<double>>();
    c.psi_values = j.at("psi").at("values").get<std::vector<double>>();
  }
  if (j.contains("regen_grid")) {
    c.regen_grid.clear();
    for (const auto& g : j.at("regen_grid")) {
      RegenGridPoint p;
      p.nu = g.value("nu", p.nu);
      p.a = g.value("a", p.a);
      p.L = g.value("L", p.L);
      p.R = g.value("R", p.R);
      c.regen_grid.push_back(p);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_json(ss.str());
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["mu"] = {c.mu.x(), c.mu.y()};
#define SAUSAGE_FIELD(name) j[#name] = c.name
  SAUSAGE_FIELD(T);
  SAUSAGE_FIELD(T_ladder);
  SAUSAGE_FIELD(dt);
  SAUSAGE_FIELD(noise_scale);
  SAUSAGE_FIELD(r0);
  SAUSAGE_FIELD(r1);
  SAUSAGE_FIELD(psi_radii);
  SAUSAGE_FIELD(psi_values);
  SAUSAGE_FIELD(L);
  SAUSAGE_FIELD(R);
  SAUSAGE_FIELD(a);
  SAUSAGE_FIELD(eps_cut);
  SAUSAGE_FIELD(margin);
  SAUSAGE_FIELD(h);
  SAUSAGE_FIELD(n_radii);
  SAUSAGE_FIELD(critical_skip);
  SAUSAGE_FIELD(seeds);
  SAUSAGE_FIELD(threads);
  SAUSAGE_FIELD(out_dir);
  SAUSAGE_FIELD(stab_T);
  SAUSAGE_FIELD(mesh_exponents);
  SAUSAGE_FIELD(ref_exponent);
  SAUSAGE_FIELD(noise_eta);
  SAUSAGE_FIELD(poly_h);
  SAUSAGE_FIELD(regen_paths);
  SAUSAGE_FIELD(regen_dt);
  SAUSAGE_FIELD(regen_eps_cut);
  SAUSAGE_FIELD(renewal_T);
  SAUSAGE_FIELD(renewal_nu);
  SAUSAGE_FIELD(renewal_L);
  SAUSAGE_FIELD(renewal_R);
  SAUSAGE_FIELD(renewal_seeds);
  SAUSAGE_FIELD(renewal_rho);
  SAUSAGE_FIELD(checkpoints);
  SAUSAGE_FIELD(bins);
#undef SAUSAGE_FIELD
  j["regen_grid"] = json::array();
  for (const auto& g : c.regen_grid) j["regen_grid"].push_back({{"nu", g.nu}, {"a", g.a}, {"L", g.L}, {"R", g.R}});
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

std::string config_hash(const ExperimentConfig& cfg) {
  json j = config_json(cfg);
  // scheduling and output location do not change results
  j.erase("threads");
  j.erase("out_dir");
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          next.store(n);
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// ---- stability -------------------------------------------------------------

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return nan();
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : nan();
}

double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
  if (v.empty()) return nan();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

StabilityReport run_stability(const ExperimentConfig& cfg) {
  cfg.check();
  if (cfg.mesh_exponents.empty()) throw std::invalid_argument("stability: empty mesh ladder");
  const int finest = *std::max_element(cfg.mesh_exponents.begin(), cfg.mesh_exponents.end());
  const int coarsest = *std::min_element(cfg.mesh_exponents.begin(), cfg.mesh_exponents.end());
  if (coarsest < 0 || cfg.ref_exponent < finest + 3)
    throw std::invalid_argument("stability: reference mesh must be at least 8x finer than the finest mesh");

  const std::size_t ns = cfg.seeds.size();
  std::vector<std::vector<StabilityRow>> per(ns);
  parallel_for(ns, cfg.threads, [&](std::size_t s) {
    DriftedBMParams p;
    p.mu = cfg.mu;
    p.T = cfg.stab_T;
    p.dt = std::ldexp(cfg.stab_T, -cfg.ref_exponent);
    p.seed = cfg.seeds[s];
    const PathSample path = simulate_bm(p);
    const PersistenceDiagram ref = alpha_diagram(path.points);
    auto& rows = per[s];
    for (int m : cfg.mesh_exponents) {
      const auto stride = static_cast<std::size_t>(1) << (cfg.ref_exponent - m);
      const Partition part = Partition::stride(path, stride);
      const double omega = modulus_of_continuity(path, part.mesh);
      const PointCloud sub = subsample(path, part);

      auto add = [&](const char* variant, const PointCloud& cloud, double slack) {
        StabilityRow r;
        r.seed = p.seed;
        r.variant = variant;
        r.exponent = m;
        r.mesh = part.mesh;
        r.omega = omega;
        r.slack = slack;
        r.d_h = hausdorff(path.points, cloud);
        const PersistenceDiagram d = alpha_diagram(cloud);
        r.d_b0 = bottleneck(ref, d, 0).distance;
        r.d_b1 = bottleneck(ref, d, 1).distance;
        const double tol = 1e-9;
        if (r.variant == "sample")
          r.ok = r.d_b0 <= r.d_h + tol && r.d_b1 <= r.d_h + tol && r.d_h <= omega + tol;
        else
          r.ok = r.d_b0 <= omega + slack + tol && r.d_b1 <= omega + slack + tol;
        rows.push_back(r);
      };
      add("sample", sub, 0.0);
      if (cfg.noise_eta > 0.0) {
        const NoisyCloud nc = add_noise(sub, cfg.noise_eta, derive_seed(p.seed, static_cast<std::uint64_t>(m)));
        add("noise", nc.cloud, nc.realized_eta);
      }
      if (cfg.poly_h > 0.0) add("polygon", polygonal_densify(path, part, cfg.poly_h), 0.5 * cfg.poly_h);
    }
  });

  StabilityReport rep;
  rep.seeds = cfg.seeds;
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> mesh, b0, b1, bmax;
    for (const auto& r : per[s]) {
      rep.rows.push_back(r);
      if (!r.ok) ++rep.violations;
      if (r.variant != "sample") continue;
      mesh.push_back(r.mesh);
      b0.push_back(r.d_b0);
      b1.push_back(r.d_b1);
      bmax.push_back(std::max(r.d_b0, r.d_b1));
    }
    rep.slope0.push_back(loglog_slope(mesh, b0));
    rep.slope1.push_back(loglog_slope(mesh, b1));
    rep.slope.push_back(loglog_slope(mesh, bmax));
  }
  rep.median_slope0 = median(rep.slope0);
  rep.median_slope1 = median(rep.slope1);
  rep.median_slope = median(rep.slope);
  return rep;
}

CsvTable StabilityReport::table() const {
  CsvTable t({"seed", "variant", "exponent", "mesh", "omega", "slack", "d_h", "d_b0", "d_b1", "ok"});
  for (const auto& r : rows)
    t.row() << r.seed << r.variant << r.exponent << r.mesh << r.omega << r.slack << r.d_h << r.d_b0 << r.d_b1
            << r.ok;
  return t;
}

CsvTable StabilityReport::slope_table() const {
  CsvTable t({"seed", "slope", "slope_h0", "slope_h1"});
  for (std::size_t i = 0; i < seeds.size(); ++i) t.row() << seeds[i] << slope[i] << slope0[i] << slope1[i];
  t.row() << "median" << median_slope << median_slope0 << median_slope1;
  return t;
}

// ---- regeneration statistics -----------------------------------------------

double RegenStatRow::z() const { return se > 0.0 ? (estimate - closed_form) / se : nan(); }

bool RegenStatRow::within(double k) const {
  if (!(se > 0.0)) return estimate == closed_form;
  return one_sided ? estimate <= closed_form + k * se : std::abs(estimate - closed_form) <= k * se;
}

CsvTable RegenStatsReport::table() const {
  CsvTable t({"quantity", "nu", "a", "L", "R", "closed_form", "estimate", "se", "z", "n", "within_3se",
              "informational"});
  for (const auto& r : rows)
    t.row() << r.quantity << r.point.nu << r.point.a << r.point.L << r.point.R << r.closed_form << r.estimate
            << r.se << r.z() << r.n << r.within() << r.informational;
  return t;
}

namespace {

// One-dimensional drifted walk, extended in place. Ziggurat normals on a
// sequential engine: the battery is the hottest loop and Box-Muller's log and
// sincos dominated it.
class FreshWalk {
 public:
  FreshWalk(double nu, double dt, std::uint64_t seed)
      : nu_(nu), dt_(dt), sq_(std::sqrt(dt)), eng_(seed, Stream::Increments) {
    u.push_back(0.0);
    t.push_back(0.0);
  }
  void extend(std::size_t n) {
    u.reserve(n + 1);
    t.reserve(n + 1);
    for (std::size_t i = u.size() - 1; i < n; ++i) {
      u.push_back(u.back() + nu_ * dt_ + sq_ * normal_(eng_));
      t.push_back(static_cast<double>(i + 1) * dt_);
    }
  }
  std::vector<double> u, t;

 private:
  double nu_, dt_, sq_;
  PhiloxEngine eng_;
  boost::random::normal_distribution<double> normal_;
};

struct FreshOutcome {
  bool resolved = false;
  double good0 = 0, ruin = 0, sigma = 0, tau1 = 0, theta_h1 = 0, theta_tau = 0;
};

FreshOutcome fresh_path(const RegenGridPoint& g, double dt, double eps, std::uint64_t seed) {
  RegenParams rp;
  rp.L = g.L;
  rp.R = g.R;
  rp.nu = g.nu;
  rp.variance = 1.0;
  rp.eps_cut = eps;
  rp.bridge_seed = derive_seed(seed, 1);
  const double dstar = rp.horizon();
  const double tail = std::log(1.0 / eps) / (2.0 * g.nu);
  const double top = std::max({g.L + g.a, g.L + dstar, tail - g.a, tail - g.R});
  // start near the mean time to climb `top` and grow by a quarter until decided
  auto n = static_cast<std::size_t>(std::ceil((top / g.nu + 1.0) / dt));
  FreshWalk walk(g.nu, dt, seed);
  const std::vector<double>& u = walk.u;
  const std::vector<double>& t = walk.t;
  FreshOutcome o;
  const double low = std::min(g.a, g.R), high = std::max(g.a, g.R);
  for (int attempt = 0; attempt < 40; ++attempt, n += n / 4) {
    walk.extend(n);
    const RegenTrace tr = detect_regenerations(u, t, rp);
    const std::size_t end = u.size();
    // a path that never went below -low never went below -high either
    const bool below_low = !std::isnan(last_visit_below(tr, end, -low));
    const bool below_high = below_low && !std::isnan(last_visit_below(tr, end, -high));
    const bool ruined = g.a <= g.R ? below_low : below_high;
    const bool dropped = g.R <= g.a ? below_low : below_high;
    if (!ruined && u.back() < tail - g.a) continue;
    if (!dropped && u.back() < tail - g.R) continue;
    const std::size_t hit = first_up_crossing(tr, 0, g.a);
    if (hit == npos || tr.hits.empty() || tr.tau.empty()) continue;
    const std::size_t w1 = first_up_crossing(tr, tr.hits[0], tr.level(1) + g.a);
    const std::size_t w2 = first_up_crossing(tr, tr.tau_index[0], tr.level(tr.tau_level[0]) + g.a);
    if (w1 == npos || w2 == npos) continue;
    o.resolved = true;
    o.good0 = dropped ? 0.0 : 1.0;
    o.ruin = ruined ? 1.0 : 0.0;
    o.sigma = t[hit];
    o.tau1 = tr.tau[0];
    o.theta_h1 = t[w1] - t[tr.hits[0]];
    o.theta_tau = t[w2] - tr.tau[0];
    return o;
  }
  return o;
}

RegenStatRow stat_row(std::string q, const RegenGridPoint& g, double cf, const std::vector<double>& x,
                      bool info = false, bool one_sided = false) {
  const Moments m = moments(x);
  RegenStatRow r;
  r.quantity = std::move(q);
  r.point = g;
  r.closed_form = cf;
  r.estimate = m.mean;
  r.se = m.se;
  r.n = m.n;
  r.informational = info;
  r.one_sided = one_sided;
  return r;
}

// Indicator means: the standard error under the null p = cf, so that rare events
// with no hits in the sample still get a usable scale.
RegenStatRow proportion_row(std::string q, const RegenGridPoint& g, double cf, const std::vector<double>& x) {
  RegenStatRow r = stat_row(std::move(q), g, cf, x);
  r.se = std::sqrt(cf * (1.0 - cf) / static_cast<double>(r.n));
  return r;
}

}  // namespace

RegenStatsReport run_regen_battery(const ExperimentConfig& cfg) {
  if (cfg.regen_paths < 2) throw std::invalid_argument("regen: need at least two paths");
  std::vector<RegenGridPoint> grid = cfg.regen_grid;
  if (grid.empty()) grid = {{0.5, 1, 1, 1}, {1, 1, 1, 1}, {2, 1, 1, 1}, {0.5, 2, 2, 0.5}, {1, 2, 2, 0.5}, {2, 2, 2, 0.5}};
  RegenStatsReport rep;
  const auto np = static_cast<std::size_t>(cfg.regen_paths);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const RegenGridPoint& g = grid[gi];
    std::vector<FreshOutcome> out(np);
    const std::uint64_t base = derive_seed(cfg.seeds.front(), 1000 + gi);
    parallel_for(np, cfg.threads, [&](std::size_t i) {
      out[i] = fresh_path(g, cfg.regen_dt, cfg.regen_eps_cut, derive_seed(base, i));
    });
    std::vector<double> good0, ruin, sigma, tau1, th1, thtau;
    for (const auto& o : out) {
      if (!o.resolved) {
        ++rep.unresolved;
        continue;
      }
      good0.push_back(o.good0);
      ruin.push_back(o.ruin);
      sigma.push_back(o.sigma);
      tau1.push_back(o.tau1);
      th1.push_back(o.theta_h1);
      thtau.push_back(o.theta_tau);
    }
    rep.rows.push_back(proportion_row("p_good", g, p_good(g.nu, g.R), good0));
    rep.rows.push_back(proportion_row("ruin", g, ruin_prob(g.nu, g.a), ruin));
    rep.rows.push_back(stat_row("mean_sigma_a", g, g.a / g.nu, sigma));
    rep.rows.push_back(stat_row("mean_tau1", g, mean_tau1(g.nu, g.L, g.R), tau1));
    rep.rows.push_back(stat_row("theta_plus_at_first_hit", g, g.a / g.nu, th1, true));
    rep.rows.push_back(stat_row("theta_plus_at_tau1", g, mean_forward_window_good(g.nu, g.R, g.a), thtau, true));
  }
  return rep;
}

RegenStatsReport run_renewal(const ExperimentConfig& cfg) {
  if (cfg.renewal_seeds < 2) throw std::invalid_argument("renewal: need at least two seeds");
  const RegenGridPoint g{cfg.renewal_nu, cfg.renewal_rho, cfg.renewal_L, cfg.renewal_R};
  RegenParams rp;
  rp.L = g.L;
  rp.R = g.R;
  rp.a = cfg.renewal_rho;
  rp.eps_cut = cfg.eps_cut;
  const double T = cfg.renewal_T;
  const double margin = rp.horizon() / g.nu + 20.0;
  const auto ns = static_cast<std::size_t>(cfg.renewal_seeds);
  struct Out {
    double rate = 0, good = 0;
    std::vector<double> cycles, theta_plus, theta_minus;
  };
  std::vector<Out> out(ns);
  const std::uint64_t base = derive_seed(cfg.seeds.front(), 2000);
  parallel_for(ns, cfg.threads, [&](std::size_t i) {
    DriftedBMParams p;
    p.mu = Point(g.nu, 0.0);
    p.T = T + margin;
    p.dt = cfg.regen_dt;
    p.seed = derive_seed(base, i);
    const PathSample path = simulate_bm(p);
    RegenParams q = rp;
    q.bridge_seed = derive_seed(p.seed, 1);
    const RegenTrace tr = detect_regenerations(path, q);
    Out& o = out[i];
    o.rate = static_cast<double>(tr.count_up_to(T)) / T;
    std::size_t good = 0, resolved = 0;
    const std::size_t last = index_at(path.times, T);
    for (std::size_t n = 0; n < tr.hits.size() && tr.hits[n] <= last; ++n) {
      if (tr.status[n] == CutStatus::Unresolved) continue;
      ++resolved;
      good += tr.status[n] == CutStatus::Good;
    }
    o.good = resolved ? static_cast<double>(good) / static_cast<double>(resolved) : nan();
    for (std::size_t k = 0; k < tr.tau.size() && tr.tau[k] <= T; ++k) {
      if (k >= 1) o.cycles.push_back(tr.delta_tau[k]);
      o.theta_plus.push_back(tr.theta_plus[k]);
      o.theta_minus.push_back(tr.theta_minus[k]);
    }
  });
  std::vector<double> rate, good, cycles, tp, tm;
  for (const auto& o : out) {
    rate.push_back(o.rate);
    good.push_back(o.good);
    cycles.insert(cycles.end(), o.cycles.begin(), o.cycles.end());
    tp.insert(tp.end(), o.theta_plus.begin(), o.theta_plus.end());
    tm.insert(tm.end(), o.theta_minus.begin(), o.theta_minus.end());
  }
  RegenStatsReport rep;
  rep.rows.push_back(stat_row("renewal_rate", g, g.nu * p_good(g.nu, g.R) / g.L, rate));
  rep.rows.push_back(stat_row("stationary_cycle_mean", g, mean_tau1(g.nu, g.L, g.R), cycles));
  rep.rows.push_back(stat_row("good_fraction", g, p_good(g.nu, g.R), good));
  rep.rows.push_back(stat_row("theta_plus_at_cuts", g, mean_forward_window_good(g.nu, g.R, g.a), tp, true));
  rep.rows.push_back(stat_row("theta_minus_at_cuts", g, g.a / g.nu, tm, true, true));
  return rep;
}

RegenStatsReport run_regen_stats(const ExperimentConfig& cfg) {
  RegenStatsReport rep = run_regen_battery(cfg);
  const RegenStatsReport ren = run_renewal(cfg);
  rep.rows.insert(rep.rows.end(), ren.rows.begin(), ren.rows.end());
  rep.unresolved += ren.unresolved;
  return rep;
}

// ---- persistence LLN -------------------------------------------------------

SimulatedRun simulate_run(const ExperimentConfig& cfg, std::uint64_t seed) {
  RegenParams rp = cfg.regen_params();
  rp.bridge_seed = derive_seed(seed, 0xB1D6E);
  const double nu = cfg.mu.norm();
  if (!(nu > 0.0)) throw std::invalid_argument("simulate_run: drift must be nonzero");
  const double margin = cfg.margin > 0.0 ? cfg.margin : rp.horizon() / nu + 20.0;
  DriftedBMParams p;
  p.mu = cfg.mu;
  p.T = cfg.t_ladder().back() + margin;
  p.dt = cfg.dt;
  p.seed = seed;
  p.noise_scale = cfg.noise_scale;
  SimulatedRun run;
  run.path = simulate_bm(p);
  run.trace = detect_regenerations(run.path, rp);
  return run;
}

namespace {

struct LlnSeed {
  std::vector<CycleRecord> cycles;
  std::vector<LlnRow> rows;
};

std::vector<double> phis(const PersistenceDiagram& d, const std::vector<Weight>& w) {
  std::vector<double> out;
  for (const auto& x : w) out.push_back(phi_psi(d.h1, x));
  return out;
}

LlnSeed lln_seed(const ExperimentConfig& cfg, const std::vector<Weight>& weights, std::uint64_t seed) {
  const SimulatedRun run = simulate_run(cfg, seed);
  const auto& pts = run.path.points;
  const auto& tr = run.trace;
  const std::vector<double> ladder = cfg.t_ladder();
  const std::size_t nw = weights.size();
  const std::size_t last_idx = index_at(run.path.times, ladder.back());

  // start index of block k is starts[k-1]; block k ends at tau_index[k-1]
  std::vector<std::size_t> starts{0};
  std::size_t n_max = 0;
  while (n_max < tr.tau_index.size() && tr.tau_index[n_max] <= last_idx) {
    starts.push_back(tr.tau_index[n_max]);
    ++n_max;
  }

  auto phi_range = [&](std::size_t s, std::size_t e) { return phis(alpha_diagram(columns(pts, s, e)), weights); };

  LlnSeed out;
  std::vector<std::vector<double>> block_phi(n_max);  // Phi of block k+1
  for (std::size_t k = 0; k < n_max; ++k) block_phi[k] = phi_range(starts[k], tr.tau_index[k]);

  for (std::size_t k = 0; k < n_max; ++k) {
    CycleRecord c;
    c.seed = seed;
    c.k = k + 1;
    c.tau = tr.tau[k];
    c.delta_tau = tr.delta_tau[k];
    // Increments within cycle k+1 only see the previous block.
    const std::size_t base = k == 0 ? 0 : starts[k - 1];
    auto increment = [&](std::size_t end) {
      std::vector<double> v = phi_range(base, end);
      if (k > 0)
        for (std::size_t w = 0; w < nw; ++w) v[w] -= block_phi[k - 1][w];
      return v;
    };
    c.z = k == 0 ? block_phi[0] : increment(tr.tau_index[k]);
    c.m_coarse.assign(nw, 0.0);
    for (std::size_t w = 0; w < nw; ++w) c.m_coarse[w] = std::abs(c.z[w]);
    for (int j = 1; j <= cfg.checkpoints; ++j) {
      const double tj = tr.tau[k] - c.delta_tau + c.delta_tau * j / (cfg.checkpoints + 1);
      const std::size_t idx = index_at(run.path.times, tj);
      if (idx <= starts[k]) continue;
      const std::vector<double> v = increment(idx);
      for (std::size_t w = 0; w < nw; ++w) c.m_coarse[w] = std::max(c.m_coarse[w], std::abs(v[w]));
    }
    out.cycles.push_back(std::move(c));
  }

  for (double T : ladder) {
    LlnRow row;
    row.seed = seed;
    row.T = T;
    const std::size_t idx = index_at(run.path.times, T);
    row.phi = phi_range(0, idx);
    std::size_t n = 0;
    while (n < n_max && tr.tau_index[n] <= idx) ++n;
    row.n_cycles = n;
    row.sum_z.assign(nw, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t w = 0; w < nw; ++w) row.sum_z[w] += out.cycles[k].z[w];
    if (n == 0) {
      row.remainder = row.phi;
    } else {
      row.remainder = phi_range(starts[n - 1], idx);
      for (std::size_t w = 0; w < nw; ++w) row.remainder[w] -= block_phi[n - 1][w];
    }
    for (std::size_t w = 0; w < nw; ++w)
      row.telescoping_error = std::max(row.telescoping_error, std::abs(row.sum_z[w] + row.remainder[w] - row.phi[w]) /
                                                                  (1.0 + std::abs(row.phi[w])));
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

LlnReport run_phi_lln(const ExperimentConfig& cfg) { return run_phi_lln(cfg, {cfg.psi()}); }

LlnReport run_phi_lln(const ExperimentConfig& cfg, const std::vector<Weight>& weights) {
  cfg.check_topology(false);
  if (weights.empty()) throw std::invalid_argument("philln: no weights");
  const std::size_t ns = cfg.seeds.size();
  std::vector<LlnSeed> per(ns);
  parallel_for(ns, cfg.threads, [&](std::size_t s) { per[s] = lln_seed(cfg, weights, cfg.seeds[s]); });

  LlnReport rep;
  rep.weights = weights;
  if (cfg.dt > cfg.r0 * cfg.r0 / 100.0)
    rep.warnings.push_back("dt exceeds r0^2/100; sampling error may be visible in the radius window");
  for (auto& s : per) {
    rep.cycles.insert(rep.cycles.end(), s.cycles.begin(), s.cycles.end());
    rep.rows.insert(rep.rows.end(), s.rows.begin(), s.rows.end());
  }
  for (const auto& r : rep.rows) rep.max_telescoping_error = std::max(rep.max_telescoping_error, r.telescoping_error);

  for (double T : cfg.t_ladder()) {
    for (std::size_t w = 0; w < weights.size(); ++w) {
      LlnSummary sm;
      sm.T = T;
      sm.weight = w;
      std::vector<double> ratio, rho;
      double zsum = 0, dsum = 0;
      std::size_t min_cycles = npos;
      for (std::size_t s = 0; s < ns; ++s) {
        for (const auto& r : per[s].rows)
          if (r.T == T) ratio.push_back(r.phi[w] / T);
        double zs = 0, ds = 0;
        std::size_t c = 0;
        for (const auto& cy : per[s].cycles) {
          if (cy.k < 2 || cy.tau > T + 1e-9 * T) continue;
          zs += cy.z[w];
          ds += cy.delta_tau;
          ++c;
        }
        rho.push_back(ds > 0.0 ? zs / ds : nan());
        zsum += zs;
        dsum += ds;
        sm.cycles += c;
        min_cycles = std::min(min_cycles, c);
      }
      const Moments mr = moments(ratio), mc = moments(rho);
      sm.mean_ratio = mr.mean;
      sm.sd_ratio = mr.sd;
      sm.se_ratio = mr.se;
      sm.mean_rho_cycle = mc.mean;
      sm.se_rho_cycle = mc.se;
      sm.pooled_rho_cycle = dsum > 0.0 ? zsum / dsum : nan();
      sm.mean_delta_tau = sm.cycles ? dsum / static_cast<double>(sm.cycles) : nan();
      sm.gamma_hat = sm.cycles ? zsum / static_cast<double>(sm.cycles) : nan();
      sm.low_confidence = min_cycles < 10;
      rep.summary.push_back(sm);
    }
    if (rep.summary.back().low_confidence) {
      std::ostringstream os;
      os << "T=" << T << ": some seed has fewer than 10 complete cycles; estimates are low-confidence";
      rep.warnings.push_back(os.str());
    }
  }
  return rep;
}

const LlnSummary& LlnReport::at(double T, std::size_t weight) const {
  for (const auto& s : summary)
    if (std::abs(s.T - T) <= 1e-9 * std::max(1.0, T) && s.weight == weight) return s;
  throw std::out_of_range("philln: no summary for that T / weight");
}

std::vector<double> LlnReport::rho_cycle(std::size_t w) const {
  std::vector<std::uint64_t> order;
  for (const auto& r : rows)
    if (std::find(order.begin(), order.end(), r.seed) == order.end()) order.push_back(r.seed);
  double Tmax = 0.0;
  for (const auto& r : rows) Tmax = std::max(Tmax, r.T);
  std::vector<double> out;
  for (auto seed : order) {
    double zs = 0, ds = 0;
    for (const auto& c : cycles)
      if (c.seed == seed && c.k >= 2 && c.tau <= Tmax + 1e-9 * Tmax) {
        zs += c.z[w];
        ds += c.delta_tau;
      }
    out.push_back(ds > 0.0 ? zs / ds : nan());
  }
  return out;
}

CsvTable LlnReport::cycle_table() const {
  std::vector<std::string> h{"seed", "k", "tau_k", "delta_tau_k"};
  for (std::size_t w = 0; w < weights.size(); ++w) h.push_back("z_" + std::to_string(w));
  for (std::size_t w = 0; w < weights.size(); ++w) h.push_back("m_coarse_" + std::to_string(w));
  CsvTable t(h);
  for (const auto& c : cycles) {
    t.row() << c.seed << c.k << c.tau << c.delta_tau;
    for (double z : c.z) t << z;
    for (double m : c.m_coarse) t << m;
  }
  return t;
}

CsvTable LlnReport::row_table() const {
  CsvTable t({"seed", "T", "weight", "n_cycles", "phi", "sum_z", "remainder", "ratio", "telescoping_error"});
  for (const auto& r : rows)
    for (std::size_t w = 0; w < r.phi.size(); ++w)
      t.row() << r.seed << r.T << w << r.n_cycles << r.phi[w] << r.sum_z[w] << r.remainder[w] << r.phi[w] / r.T
              << r.telescoping_error;
  return t;
}

CsvTable LlnReport::summary_table() const {
  CsvTable t({"T", "weight", "mean_ratio", "sd_ratio", "se_ratio", "mean_rho_cycle", "se_rho_cycle",
              "pooled_rho_cycle", "gamma_hat", "mean_delta_tau", "cycles", "low_confidence"});
  for (const auto& s : summary)
    t.row() << s.T << s.weight << s.mean_ratio << s.sd_ratio << s.se_ratio << s.mean_rho_cycle << s.se_rho_cycle
            << s.pooled_rho_cycle << s.gamma_hat << s.mean_delta_tau << s.cycles << s.low_confidence;
  return t;
}

// ---- interface audit -------------------------------------------------------

// Raw digital counts on purpose: the four masks then form one consistent
// 8/4 topology, where a pinched intersection neck and the cusp pocket it
// leaves in the union are counted together.
PairAudit audit_masks(const GridMask& A, const GridMask& B) {
  PairAudit p;
  p.a = betti_numbers(A);
  p.b = betti_numbers(B);
  p.uni = betti_numbers(mask_or(A, B));
  p.inter = betti_numbers(mask_and(A, B));
  const long d = p.uni.b1 - p.a.b1 - p.b.b1;
  p.mv_ok = -p.inter.b1 <= d && d <= p.inter.b0;
  p.intersection_ok = p.inter.b1 + p.inter.b0 <= p.a.b1 + p.b.b1 + p.uni.b1 + 1;
  return p;
}

PairAudit audit_pair(const PointCloud& A, const PointCloud& B, double r, double h) {
  BoundingBox box = bounding_box(A);
  box.extend(bounding_box(B));
  const GridSpec spec = grid_for(box, r, h);
  return audit_masks(rasterize(A, r, spec), rasterize(B, r, spec));
}

PathBound complexity_bound(const PathSample& path, double r0, double r1, double h) {
  PathBound b;
  b.T = path.times.back();
  b.seed = path.params.seed;
  const PersistenceDiagram d = alpha_diagram(path.points);
  for (const auto& p : d.h1) b.integral_beta1 += std::max(0.0, std::min(p.death, r1) - std::max(p.birth, r0));
  b.area_r1 = area(rasterize(path.points, r1, h));
  b.bound = b.area_r1 / (2.0 * M_PI * r0);
  b.ok = b.integral_beta1 <= b.bound;
  return b;
}

namespace {

struct InterfaceSeed {
  std::vector<InterfaceRow> rows;
  PathBound bound;
  std::vector<double> i_k;
};

std::vector<double> critical_values(const PersistenceDiagram& d) {
  std::vector<double> c;
  for (const auto& p : d.h0) c.push_back(p.death);
  for (const auto& p : d.h1) {
    c.push_back(p.birth);
    c.push_back(p.death);
  }
  return c;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

InterfaceSeed interface_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  const SimulatedRun run = simulate_run(cfg, seed);
  const auto& pts = run.path.points;
  const auto& tr = run.trace;
  const double Tmax = cfg.t_ladder().back();
  const std::size_t last_idx = index_at(run.path.times, Tmax);
  const Point e = cfg.mu.normalized();
  const Weight psi = cfg.psi();

  InterfaceSeed out;
  {
    PathSample prefix;
    prefix.params = run.path.params;
    prefix.times.assign(run.path.times.begin(), run.path.times.begin() + static_cast<long>(last_idx) + 1);
    prefix.points = columns(pts, 0, last_idx);
    out.bound = complexity_bound(prefix, cfg.r0, cfg.r1, cfg.h);
  }

  std::vector<std::size_t> starts{0}, ends;
  while (ends.size() < tr.tau_index.size() && tr.tau_index[ends.size()] <= last_idx) {
    ends.push_back(tr.tau_index[ends.size()]);
    starts.push_back(ends.back());
  }
  const std::size_t n = ends.size();
  out.bound.n_blocks = n;
  std::vector<PointCloud> blocks;
  std::vector<PersistenceDiagram> diag;
  for (std::size_t k = 0; k < n; ++k) {
    blocks.push_back(columns(pts, starts[k], ends[k]));
    diag.push_back(alpha_diagram(blocks.back()));
  }

  std::vector<double> radii(static_cast<std::size_t>(cfg.n_radii));
  for (std::size_t i = 0; i < radii.size(); ++i)
    radii[i] = cfg.r0 + (cfg.r1 - cfg.r0) * static_cast<double>(i) / static_cast<double>(radii.size() - 1);

  // interface integrand (b0 + b1 of the overlap) per cut and radius
  std::vector<std::vector<double>> inter_sum(n > 0 ? n - 1 : 0, std::vector<double>(radii.size(), 0.0));
  std::vector<bool> radius_clean(radii.size(), true);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const PersistenceDiagram du = alpha_diagram(columns(pts, starts[k], ends[k + 1]));
    std::vector<double> crit = critical_values(diag[k]);
    for (const PersistenceDiagram* d : {static_cast<const PersistenceDiagram*>(&diag[k + 1]), &du}) {
      const auto c = critical_values(*d);
      crit.insert(crit.end(), c.begin(), c.end());
    }
    const double level = tr.level(tr.tau_level[k]);
    const std::size_t cut = ends[k];
    const double th_m = tr.theta_minus[k], th_p = tr.theta_plus[k];
    const bool windows = std::isfinite(th_m) && std::isfinite(th_p);
    PointCloud wa, wb;
    if (windows) {
      const std::size_t lo = index_at(run.path.times, tr.tau[k] - th_m);
      const std::size_t hi = index_at(run.path.times, tr.tau[k] + th_p);
      wa = columns(pts, lo, cut);
      wb = columns(pts, cut, hi);
    }

    BoundingBox box = bounding_box(blocks[k]);
    box.extend(bounding_box(blocks[k + 1]));
    if (windows) {
      box.extend(bounding_box(wa));
      box.extend(bounding_box(wb));
    }
    const GridSpec spec = grid_for(box, cfg.r1, cfg.h);

    bool far_ok = true;
    if (k + 2 < n) {
      BoundingBox fb = bounding_box(blocks[k]);
      fb.extend(bounding_box(blocks[k + 2]));
      const GridSpec fs = grid_for(fb, cfg.r1, cfg.h);
      far_ok = mask_and(rasterize(blocks[k], cfg.r1, fs), rasterize(blocks[k + 2], cfg.r1, fs)).count() == 0;
    }

    std::vector<double> integrand(radii.size(), 0.0);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double r = radii[i];
      InterfaceRow row;
      row.seed = seed;
      row.k = k + 1;
      row.r = r;
      row.far_disjoint = far_ok;
      row.critical_gap = std::numeric_limits<double>::infinity();
      for (double c : crit) row.critical_gap = std::min(row.critical_gap, std::abs(c - r));
      row.skipped = row.critical_gap < cfg.critical_skip * cfg.h;
      if (row.skipped) radius_clean[i] = false;

      const GridMask ma = rasterize(blocks[k], r, spec), mb = rasterize(blocks[k + 1], r, spec);
      row.audit = audit_masks(ma, mb);
      const GridMask ov = mask_and(ma, mb);
      row.in_slab = true;
      for (long y = 0; y < ov.height() && row.in_slab; ++y)
        for (long x = 0; x < ov.width(); ++x)
          if (ov.at(x, y) && std::abs(e.dot(spec.center(x, y)) - level) > cfg.a) {
            row.in_slab = false;
            break;
          }
      if (windows) {
        const GridMask wm = mask_and(rasterize(wa, r, spec), rasterize(wb, r, spec));
        row.window_diff = mask_minus(wm, ov).count() + mask_minus(ov, wm).count();
        row.window_match = row.window_diff == 0;
      }
      integrand[i] = static_cast<double>(row.audit.inter.b0 + row.audit.inter.b1) * std::abs(psi(r));
      inter_sum[k][i] = static_cast<double>(row.audit.inter.b0 + row.audit.inter.b1);
      out.rows.push_back(row);
    }
    out.i_k.push_back(trapezoid(radii, integrand));
  }

  // almost-additivity over blocks 1..n
  if (n >= 1) {
    const PersistenceDiagram whole = alpha_diagram(columns(pts, 0, ends[n - 1]));
    std::vector<double> fu(radii.size()), fy(radii.size());
    bool pointwise = true;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double r = radii[i];
      const int bu = betti1_at(whole.h1, r);
      int by = 0;
      for (const auto& d : diag) by += betti1_at(d.h1, r);
      double bi = 0.0;
      for (const auto& v : inter_sum) bi += v[i];
      if (radius_clean[i] && std::abs(bu - by) > bi) pointwise = false;
      fu[i] = bu * psi(r);
      fy[i] = by * psi(r);
    }
    out.bound.phi_tau_n = trapezoid(radii, fu);
    out.bound.sum_y = trapezoid(radii, fy);
    out.bound.sum_i = std::accumulate(out.i_k.begin(), out.i_k.end(), 0.0);
    out.bound.additivity_ok = pointwise && std::abs(out.bound.phi_tau_n - out.bound.sum_y) <= out.bound.sum_i + 1e-12;
  } else {
    out.bound.additivity_ok = true;
  }
  return out;
}

}  // namespace

InterfaceReport run_interface_audit(const ExperimentConfig& cfg) {
  cfg.check_topology();
  const std::size_t ns = cfg.seeds.size();
  std::vector<InterfaceSeed> per(ns);
  parallel_for(ns, cfg.threads, [&](std::size_t s) { per[s] = interface_seed(cfg, cfg.seeds[s]); });
  InterfaceReport rep;
  for (const auto& s : per) {
    for (const auto& r : s.rows) {
      rep.rows.push_back(r);
      if (!r.far_disjoint) ++rep.far_violations;
      if (r.skipped) {
        ++rep.skipped;
        continue;
      }
      if (!r.audit.mv_ok) ++rep.mv_violations;
      if (!r.audit.intersection_ok) ++rep.intersection_violations;
      if (!r.in_slab) ++rep.slab_violations;
      if (!r.window_match) ++rep.window_mismatches;
    }
    rep.paths.push_back(s.bound);
    if (!s.bound.ok) ++rep.bound_violations;
    if (!s.bound.additivity_ok) ++rep.additivity_violations;
    rep.i_k.insert(rep.i_k.end(), s.i_k.begin(), s.i_k.end());
  }
  return rep;
}

CsvTable InterfaceReport::row_table() const {
  CsvTable t({"seed", "k", "r", "b0_a", "b1_a", "b0_b", "b1_b", "b0_union", "b1_union", "b0_inter", "b1_inter",
              "mv_ok", "intersection_ok", "in_slab", "window_match", "window_diff", "far_disjoint", "skipped",
              "critical_gap"});
  for (const auto& r : rows) {
    const auto& a = r.audit;
    t.row() << r.seed << r.k << r.r << a.a.b0 << a.a.b1 << a.b.b0 << a.b.b1 << a.uni.b0 << a.uni.b1 << a.inter.b0
            << a.inter.b1 << a.mv_ok << a.intersection_ok << r.in_slab << r.window_match << r.window_diff
            << r.far_disjoint << r.skipped << r.critical_gap;
  }
  return t;
}

CsvTable InterfaceReport::path_table() const {
  CsvTable t({"seed", "T", "blocks", "integral_beta1", "area_r1", "bound", "slack_factor", "ok", "phi_tau_n",
              "sum_y", "sum_i", "additivity_ok"});
  for (const auto& p : paths)
    t.row() << p.seed << p.T << p.n_blocks << p.integral_beta1 << p.area_r1 << p.bound
            << (p.integral_beta1 > 0.0 ? p.bound / p.integral_beta1 : std::numeric_limits<double>::infinity())
            << p.ok << p.phi_tau_n << p.sum_y << p.sum_i << p.additivity_ok;
  return t;
}

// ---- intensity -------------------------------------------------------------

IntensityReport estimate_intensity(const ExperimentConfig& cfg, int bins) {
  IntensityReport rep;
  rep.hats = hat_family(cfg.r0, cfg.r1, bins);
  Weight total = rep.hats.front();
  for (std::size_t i = 1; i < rep.hats.size(); ++i) total = total + rep.hats[i];
  std::vector<Weight> weights = rep.hats;
  weights.push_back(total);
  const LlnReport lln = run_phi_lln(cfg, weights);

  const std::size_t m = rep.hats.size();
  const std::size_t ns = cfg.seeds.size();
  rep.positive = true;
  for (std::size_t w = 0; w <= m; ++w) {
    const std::vector<double> rho = lln.rho_cycle(w);
    const Moments all = moments(rho);
    const Moments ga = moments(std::vector<double>(rho.begin(), rho.begin() + static_cast<long>(ns / 2)));
    const Moments gb = moments(std::vector<double>(rho.begin() + static_cast<long>(ns / 2), rho.end()));
    if (w == m) {
      rep.tent_sum_rho = all.mean;
      break;
    }
    rep.centers.push_back(rep.hats[w].radii()[1]);
    rep.lambda.push_back(all.mean);
    rep.se.push_back(all.se);
    rep.group_a.push_back(ga.mean);
    rep.group_a_se.push_back(ga.se);
    rep.group_b.push_back(gb.mean);
    rep.group_b_se.push_back(gb.se);
    if (!(all.mean >= -3.0 * (std::isfinite(all.se) ? all.se : 0.0))) rep.positive = false;
  }
  rep.sum_lambda = std::accumulate(rep.lambda.begin(), rep.lambda.end(), 0.0);
  return rep;
}

CsvTable IntensityReport::table() const {
  CsvTable t({"bin", "center", "lambda", "se", "group_a", "group_a_se", "group_b", "group_b_se"});
  for (std::size_t i = 0; i < lambda.size(); ++i)
    t.row() << i << centers[i] << lambda[i] << se[i] << group_a[i] << group_a_se[i] << group_b[i] << group_b_se[i];
  t.row() << "sum" << nan() << sum_lambda << nan() << "tent_sum_rho" << tent_sum_rho << nan() << nan();
  return t;
}

// ---- output ----------------------------------------------------------------

void write_manifest(const ExperimentConfig& cfg, const std::string& command, double wall_seconds,
                    const std::vector<std::string>& outputs) {
  std::filesystem::create_directories(cfg.out_dir);
  json j;
  j["command"] = command;
  j["config"] = config_json(cfg);
  j["config_hash"] = config_hash(cfg);
  j["wall_seconds"] = wall_seconds;
  j["outputs"] = outputs;
  j["versions"] = {{"sausage", kVersion},
                   {"compiler", __VERSION__},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"boost", BOOST_LIB_VERSION},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  std::ofstream f(std::filesystem::path(cfg.out_dir) / "manifest.json");
  if (!f) throw std::runtime_error("cannot write manifest in " + cfg.out_dir);
  f << j.dump(2) << '\n';
}

}  // namespace sausage
