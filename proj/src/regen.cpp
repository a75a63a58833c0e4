#include "sausage/regen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sausage/csv.hpp"
#include "sausage/rng.hpp"

namespace sausage {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

void require_mgf_domain(double nu, double theta) {
  if (!(theta < 0.5 * nu * nu))
    throw std::domain_error("mgf: theta must be below nu^2/2 (got theta=" + std::to_string(theta) +
                            ", nu^2/2=" + std::to_string(0.5 * nu * nu) + ")");
}

}  // namespace

double p_good(double nu, double R) {
  require_positive(nu, "nu");
  if (!(R >= 0.0)) throw std::invalid_argument("R must be >= 0");
  if (std::isinf(R)) return 1.0;
  return -std::expm1(-2.0 * nu * R);
}

double hitting_laplace(double nu, double a, double lambda) {
  require_positive(nu, "nu");
  if (!(a >= 0.0)) throw std::invalid_argument("a must be >= 0");
  if (!(lambda >= -0.5 * nu * nu)) throw std::domain_error("hitting_laplace: lambda below -nu^2/2");
  return std::exp(-a * (std::sqrt(nu * nu + 2.0 * lambda) - nu));
}

double ruin_prob(double nu, double a) {
  require_positive(nu, "nu");
  if (!(a >= 0.0)) throw std::invalid_argument("a must be >= 0");
  return std::exp(-2.0 * nu * a);
}

double mean_tau1(double nu, double L, double R) {
  require_positive(L, "L");
  require_positive(R, "R");
  return L / (nu * p_good(nu, R));
}

double slab_mgf(double nu, double R, double theta) {
  require_positive(nu, "nu");
  require_positive(R, "R");
  const double s2 = nu * nu - 2.0 * theta;
  if (s2 >= 0.0) return std::cosh(nu * R) / std::cosh(std::sqrt(s2) * R);
  const double w = std::sqrt(-s2) * R;
  if (!(w < 0.5 * std::numbers::pi))
    throw std::domain_error("slab_mgf: theta must be below nu^2/2 + pi^2/(8 R^2)");
  return std::cosh(nu * R) / std::cos(w);
}

double mean_slab_exit(double nu, double R) {
  require_positive(nu, "nu");
  require_positive(R, "R");
  return R / nu * std::tanh(nu * R);
}

double sigma_mgf(double nu, double L, double theta) {
  require_positive(nu, "nu");
  require_positive(L, "L");
  require_mgf_domain(nu, theta);
  return std::exp(L * (nu - std::sqrt(nu * nu - 2.0 * theta)));
}

double tau1_geometric_mgf(double nu, double L, double R, double theta) {
  const double p = p_good(nu, R);
  const double M = sigma_mgf(nu, L, theta);
  const double q = (1.0 - p) * M;
  if (!(q < 1.0)) throw std::domain_error("tau1_geometric_mgf: geometric series diverges");
  return p * M / (1.0 - q);
}

double mean_forward_window_good(double nu, double R, double rho) {
  require_positive(nu, "nu");
  require_positive(R, "R");
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  auto coth = [](double x) { return 1.0 / std::tanh(x); };
  return ((rho + R) * coth(nu * (rho + R)) - R * coth(nu * R)) / nu;
}

double RegenParams::horizon() const { return R + std::log(1.0 / eps_cut) / (2.0 * nu); }

void RegenParams::check() const {
  if (!(nu > 0.0)) throw std::invalid_argument("regen: drift must be nonzero (nu > 0)");
  require_positive(L, "L");
  require_positive(R, "R");
  if (!(eps_cut > 0.0 && eps_cut < 1.0)) throw std::invalid_argument("regen: eps_cut must lie in (0, 1)");
  if (!(variance >= 0.0)) throw std::invalid_argument("regen: variance must be >= 0");
  if (!(a >= 0.0)) throw std::invalid_argument("regen: a must be >= 0");
  if (r1 > 0.0) {
    if (!(a > R + 2.0 * r1)) throw std::invalid_argument("regen: need a > R + 2 r1");
    if (!(L > 2.0 * a)) throw std::invalid_argument("regen: need L > 2a");
  }
}

std::size_t RegenTrace::count_up_to(double T) const {
  std::size_t c = 0;
  const double lim = T + 1e-12 * std::max(1.0, std::abs(T));
  for (double x : tau)
    if (x <= lim) ++c;
  return c;
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);
bool bridged(const RegenTrace& tr) {
  return tr.params.rule == CrossingRule::Bridge && tr.params.variance > 0.0;
}

// Counter uniforms are never below 2^-53, which caps how far a sampled bridge
// can leave the segment between its endpoints.
constexpr double kMaxNegLog = 36.8;

// sqrt(d^2 + c) - d <= sqrt(c) for every step
double excursion_bound(const RegenTrace& tr) {
  if (!bridged(tr)) return 0.0;
  double dt = 0.0;
  for (std::size_t j = 0; j + 1 < tr.t.size(); ++j) dt = std::max(dt, tr.t[j + 1] - tr.t[j]);
  return 0.5 * std::sqrt(2.0 * tr.params.variance * dt * kMaxNegLog);
}

}  // namespace

// P(min < l) = exp(-2 (a - l)(b - l) / (s^2 dt)) for l below both ends; the
// inverse of that law at a single uniform gives the minimum.
double step_min(const RegenTrace& tr, std::size_t j) {
  const double a = tr.u[j], b = tr.u[j + 1];
  if (!bridged(tr)) return std::min(a, b);
  const double s2dt = 2.0 * tr.params.variance * (tr.t[j + 1] - tr.t[j]);
  const double v = counter_uniform2(tr.params.bridge_seed, Stream::BridgeMin, j)[0];
  return std::min(std::min(a, b), 0.5 * (a + b - std::sqrt((b - a) * (b - a) - s2dt * std::log(v))));
}

double step_max(const RegenTrace& tr, std::size_t j) {
  const double a = tr.u[j], b = tr.u[j + 1];
  if (!bridged(tr)) return std::max(a, b);
  const double s2dt = 2.0 * tr.params.variance * (tr.t[j + 1] - tr.t[j]);
  const double v = counter_uniform2(tr.params.bridge_seed, Stream::BridgeMax, j)[0];
  return std::max(std::max(a, b), 0.5 * (a + b + std::sqrt((b - a) * (b - a) - s2dt * std::log(v))));
}

namespace {

bool reaches(const RegenTrace& tr, std::size_t j, double level) {
  const double top = std::max(tr.u[j], tr.u[j + 1]);
  if (top >= level) return true;
  return top + tr.max_excursion >= level && step_max(tr, j) >= level;
}

bool dips(const RegenTrace& tr, std::size_t j, double level) {
  const double bottom = std::min(tr.u[j], tr.u[j + 1]);
  if (bottom < level) return true;
  return bottom - tr.max_excursion < level && step_min(tr, j) < level;
}

}  // namespace

std::size_t first_up_crossing(const RegenTrace& tr, std::size_t from, double level) {
  if (from >= tr.u.size()) return npos;
  if (tr.u[from] >= level) return from;
  for (std::size_t j = from; j + 1 < tr.u.size(); ++j)
    if (reaches(tr, j, level)) return j + 1;
  return npos;
}

double last_visit_below(const RegenTrace& tr, std::size_t before, double level) {
  for (std::size_t k = before; k-- > 0;) {
    if (k + 1 < tr.u.size() && tr.u[k] > level && tr.u[k + 1] > level && dips(tr, k, level))
      return 0.5 * (tr.t[k] + tr.t[k + 1]);
    if (tr.u[k] <= level) return tr.t[k];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

RegenTrace detect_regenerations(const std::vector<double>& u, const std::vector<double>& times,
                                const RegenParams& params) {
  params.check();
  if (u.size() != times.size() || u.size() < 2)
    throw std::invalid_argument("regen: need matching sequences with at least two samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("regen: times must increase strictly");

  RegenTrace tr;
  tr.params = params;
  tr.u = u;
  tr.t = times;
  tr.u0 = u[0];
  tr.d_star = params.horizon();
  tr.max_excursion = excursion_bound(tr);

  std::size_t n = 1;
  for (std::size_t j = 0; j + 1 < u.size(); ++j)
    while (reaches(tr, j, tr.level(n))) {
      tr.hits.push_back(j + 1);
      ++n;
    }

  // Cut n is bad iff U (bridges included) goes below level - R before the first
  // sample at or above level + D*; unresolved if that sample does not exist.
  // Both window ends only move forward, so a monotone deque over lower bounds of
  // the step minima finds the candidates; exact bridge draws settle them.
  const std::size_t ns = u.size();
  std::vector<double> lb(ns - 1);
  for (std::size_t j = 0; j + 1 < ns; ++j) lb[j] = std::min(u[j], u[j + 1]) - tr.max_excursion;
  std::deque<std::size_t> window;  // step indices with increasing lb
  std::size_t top_idx = 0, pushed = 0;
  tr.status.reserve(tr.hits.size());
  for (std::size_t i = 0; i < tr.hits.size(); ++i) {
    const std::size_t h = tr.hits[i];
    const double lev = tr.level(i + 1);
    top_idx = std::max(top_idx, h);
    while (top_idx < ns && u[top_idx] < lev + tr.d_star) ++top_idx;
    const std::size_t stop = std::min(top_idx, ns - 1);  // steps [h, stop)
    for (; pushed < stop; ++pushed) {
      while (!window.empty() && lb[window.back()] >= lb[pushed]) window.pop_back();
      window.push_back(pushed);
    }
    while (!window.empty() && window.front() < h) window.pop_front();
    const double floor_level = lev - params.R;
    bool dipped = u[h] < floor_level;
    if (!dipped && !window.empty() && lb[window.front()] < floor_level)
      for (std::size_t j = h; j < stop && !dipped; ++j) dipped = dips(tr, j, floor_level);
    const CutStatus s = dipped ? CutStatus::Bad : (top_idx < ns ? CutStatus::Good : CutStatus::Unresolved);
    tr.status.push_back(s);
    if (s == CutStatus::Unresolved) ++tr.n_unresolved; else ++tr.n_resolved;
  }

  std::size_t prev_level = 0;
  double prev_tau = times[0];
  for (std::size_t i = 0; i < tr.hits.size(); ++i) {
    if (tr.status[i] == CutStatus::Unresolved) break;
    if (tr.status[i] != CutStatus::Good) continue;
    const std::size_t h = tr.hits[i];
    tr.tau_index.push_back(h);
    tr.tau.push_back(times[h]);
    tr.tau_level.push_back(i + 1);
    tr.delta_tau.push_back(times[h] - prev_tau);
    tr.n_candidates.push_back(static_cast<int>(i + 1 - prev_level));
    prev_level = i + 1;
    prev_tau = times[h];
  }
  if (params.a > 0.0) {
    for (const auto& w : window_stats(tr, params.a)) {
      tr.theta_minus.push_back(w.theta_minus);
      tr.theta_plus.push_back(w.theta_plus);
    }
  } else {
    tr.theta_minus.assign(tr.tau.size(), std::numeric_limits<double>::quiet_NaN());
    tr.theta_plus.assign(tr.tau.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return tr;
}

RegenTrace detect_regenerations(const PathSample& path, RegenParams params) {
  params.nu = path.params.mu.norm();
  if (!(params.nu > 0.0)) throw std::invalid_argument("regen: drift must be nonzero (nu > 0)");
  params.variance = path.params.noise_scale;
  return detect_regenerations(project_longitudinal(path, path.params.mu), path.times, params);
}

std::vector<WindowPair> window_stats(const RegenTrace& tr, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("window_stats: rho must be positive");
  std::vector<WindowPair> out(tr.tau.size());
  for (std::size_t k = 0; k < tr.tau.size(); ++k) {
    const std::size_t h = tr.tau_index[k];
    const double lev = tr.level(tr.tau_level[k]);
    const std::size_t up = first_up_crossing(tr, h, lev + rho);
    if (up != npos) out[k].theta_plus = tr.t[up] - tr.t[h];
    const double back = last_visit_below(tr, h, lev - rho);
    if (!std::isnan(back)) out[k].theta_minus = tr.t[h] - back;
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> block_ranges(const RegenTrace& tr) {
  std::vector<std::pair<std::size_t, std::size_t>> r;
  std::size_t start = 0;
  for (std::size_t idx : tr.tau_index) {
    r.emplace_back(start, idx);
    start = idx;
  }
  return r;
}

std::vector<PointCloud> extract_blocks(const PathSample& path, const RegenTrace& tr) {
  std::vector<PointCloud> blocks;
  for (const auto& [s, e] : block_ranges(tr)) {
    if (e >= path.size()) throw std::out_of_range("extract_blocks: trace does not match path");
    const auto len = static_cast<Eigen::Index>(e - s + 1);
    PointCloud b = path.points.middleCols(static_cast<Eigen::Index>(s), len);
    b.colwise() -= path.points.col(static_cast<Eigen::Index>(s));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

void write_trace_csv(std::ostream& os, const RegenTrace& tr) {
  os << "k,tau_k,delta_tau_k,n_candidates,theta_minus,theta_plus\n";
  for (std::size_t k = 0; k < tr.tau.size(); ++k)
    os << (k + 1) << ',' << format_double(tr.tau[k]) << ',' << format_double(tr.delta_tau[k]) << ','
       << tr.n_candidates[k] << ',' << format_double(tr.theta_minus[k]) << ','
       << format_double(tr.theta_plus[k]) << '\n';
}

}  // namespace sausage
