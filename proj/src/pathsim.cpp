#include "sausage/pathsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sausage/rng.hpp"

namespace sausage {

namespace {

void check_params(const DriftedBMParams& p) {
  const bool finite = p.x0.allFinite() && p.mu.allFinite() && std::isfinite(p.T) &&
                      std::isfinite(p.dt) && std::isfinite(p.noise_scale);
  if (!finite) throw std::invalid_argument("simulate: non-finite parameter");
  if (!(p.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (!(p.T >= p.dt)) throw std::invalid_argument("simulate: need T >= dt");
  if (p.noise_scale < 0.0) throw std::invalid_argument("simulate: negative noise scale");
}

PathSample run_euler(double theta, const DriftedBMParams& p) {
  check_params(p);
  if (!std::isfinite(theta) || theta < 0.0)
    throw std::invalid_argument("simulate_ou: theta must be finite and >= 0");
  PathSample out;
  out.params = p;
  out.theta = theta;
  out.times = time_grid(p.T, p.dt);
  const std::size_t n = out.times.size();
  out.points.resize(2, static_cast<Eigen::Index>(n));
  const double sigma = std::sqrt(p.noise_scale);
  Point x = p.x0;
  out.points.col(0) = x;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = out.times[i + 1] - out.times[i];
    Point g = Point::Zero();
    if (sigma != 0.0) g = counter_gaussian2(p.seed, Stream::Increments, i);
    const Point drift = p.mu - theta * x;
    x = x + drift * h + (std::sqrt(h) * sigma) * g;
    out.points.col(static_cast<Eigen::Index>(i + 1)) = x;
  }
  return out;
}

}  // namespace

std::vector<double> time_grid(double T, double dt) {
  if (!(dt > 0.0) || !(T >= dt) || !std::isfinite(T))
    throw std::invalid_argument("time_grid: need 0 < dt <= T");
  const double ratio = T / dt;
  auto n = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    n = static_cast<std::size_t>(std::ceil(ratio));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * dt;
  t[n] = T;
  if (n >= 1 && !(t[n - 1] < T)) t.erase(t.end() - 2);
  return t;
}

PathSample simulate_bm(const DriftedBMParams& params) { return run_euler(0.0, params); }

PathSample simulate_ou(double theta, const DriftedBMParams& params) {
  return run_euler(theta, params);
}

Partition Partition::from_indices(const PathSample& path, std::vector<std::size_t> idx) {
  if (idx.empty()) throw std::invalid_argument("partition: empty index list");
  if (idx.front() != 0 || idx.back() + 1 != path.size())
    throw std::invalid_argument("partition: must start at 0 and end at the final sample");
  Partition p;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= path.size()) throw std::out_of_range("partition: index out of range");
    if (i > 0) {
      if (idx[i] <= idx[i - 1]) throw std::invalid_argument("partition: indices must increase");
      p.mesh = std::max(p.mesh, path.times[idx[i]] - path.times[idx[i - 1]]);
    }
  }
  p.indices = std::move(idx);
  return p;
}

Partition Partition::full(const PathSample& path) { return stride(path, 1); }

Partition Partition::stride(const PathSample& path, std::size_t k) {
  if (k == 0) throw std::invalid_argument("partition: stride must be positive");
  std::vector<std::size_t> idx;
  const std::size_t last = path.size() - 1;
  for (std::size_t i = 0; i < last; i += k) idx.push_back(i);
  idx.push_back(last);
  return from_indices(path, std::move(idx));
}

double modulus_of_continuity(const PathSample& path, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("modulus_of_continuity: delta must be >= 0");
  const auto& t = path.times;
  const double lim = delta * (1.0 + 1e-12) + 1e-15;
  double best = 0.0;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point pi = path.point(i);
    for (std::size_t j = i + 1; j < n && t[j] - t[i] <= lim; ++j)
      best = std::max(best, (path.point(j) - pi).squaredNorm());
  }
  return std::sqrt(best);
}

PointCloud subsample(const PathSample& path, const Partition& part) {
  PointCloud c(2, static_cast<Eigen::Index>(part.indices.size()));
  for (std::size_t i = 0; i < part.indices.size(); ++i) {
    if (part.indices[i] >= path.size()) throw std::out_of_range("subsample: index out of range");
    c.col(static_cast<Eigen::Index>(i)) = path.point(part.indices[i]);
  }
  return c;
}

NoisyCloud add_noise(const PointCloud& cloud, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("add_noise: bad eta");
  NoisyCloud out{cloud, 0.0};
  if (eta == 0.0) return out;
  for (Eigen::Index i = 0; i < cloud.cols(); ++i) {
    const auto u = counter_uniform2(seed, Stream::Noise, static_cast<std::uint64_t>(i));
    double rad = eta * std::sqrt(u[0]);
    const double ang = 2.0 * std::numbers::pi * u[1];
    const Point dir(std::cos(ang), std::sin(ang));
    Point moved = cloud.col(i) + rad * dir;
    double disp = (moved - cloud.col(i)).norm();
    // Rounding in the addition can push the displacement a hair over eta.
    while (disp > eta) {
      rad *= 1.0 - 0x1.0p-40;
      moved = cloud.col(i) + rad * dir;
      disp = (moved - cloud.col(i)).norm();
    }
    out.cloud.col(i) = moved;
    out.realized_eta = std::max(out.realized_eta, disp);
  }
  return out;
}

PointCloud polygonal_densify(const PathSample& path, const Partition& part, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("polygonal_densify: h must be positive");
  std::vector<Point> pts;
  for (std::size_t s = 0; s + 1 < part.indices.size(); ++s) {
    const Point p = path.point(part.indices[s]);
    const Point q = path.point(part.indices[s + 1]);
    const double len = (q - p).norm();
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h)));
    for (std::size_t j = 0; j < k; ++j)
      pts.push_back(p + (static_cast<double>(j) / static_cast<double>(k)) * (q - p));
  }
  pts.push_back(path.point(part.indices.back()));
  PointCloud c(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) c.col(static_cast<Eigen::Index>(i)) = pts[i];
  return c;
}

std::vector<double> project_longitudinal(const PathSample& path, const Point& mu) {
  const double nu = mu.norm();
  if (!(nu > 0.0)) throw std::invalid_argument("project_longitudinal: zero drift");
  const Point e = mu / nu;
  std::vector<double> u(path.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = e.dot(path.point(i));
  return u;
}

std::vector<double> project_transverse(const PathSample& path, const Point& mu) {
  const double nu = mu.norm();
  if (!(nu > 0.0)) throw std::invalid_argument("project_transverse: zero drift");
  const Point e_perp(-mu.y() / nu, mu.x() / nu);
  std::vector<double> v(path.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = e_perp.dot(path.point(i));
  return v;
}

}  // namespace sausage
