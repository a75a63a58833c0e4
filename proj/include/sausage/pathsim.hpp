#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sausage/types.hpp"

namespace sausage {

struct DriftedBMParams {
  Point x0 = Point::Zero();
  Point mu = Point::Zero();
  double T = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  // Variance multiplier on the Gaussian increments. 0 gives the deterministic
  // drift-only path used by test fixtures.
  double noise_scale = 1.0;
};

struct PathSample {
  std::vector<double> times;
  PointCloud points;  // column i is the position at times[i]
  DriftedBMParams params;
  double theta = 0.0;  // OU mean-reversion rate; 0 for plain drifted BM

  std::size_t size() const { return times.size(); }
  Point point(std::size_t i) const { return points.col(static_cast<Eigen::Index>(i)); }
};

struct Partition {
  std::vector<std::size_t> indices;
  double mesh = 0.0;

  static Partition from_indices(const PathSample& path, std::vector<std::size_t> indices);
  static Partition full(const PathSample& path);
  // Every k-th sample, always ending on the final sample.
  static Partition stride(const PathSample& path, std::size_t k);
};

// 0 = t_0 < t_1 < ... < t_n = T with t_i = i*dt below T.
std::vector<double> time_grid(double T, double dt);

PathSample simulate_bm(const DriftedBMParams& params);
// Euler-Maruyama for dX = (mu - theta X) dt + dW.
PathSample simulate_ou(double theta, const DriftedBMParams& params);

double modulus_of_continuity(const PathSample& path, double delta);

PointCloud subsample(const PathSample& path, const Partition& part);

struct NoisyCloud {
  PointCloud cloud;
  double realized_eta = 0.0;
};
// Independent uniform-in-disk displacements of radius at most eta.
NoisyCloud add_noise(const PointCloud& cloud, double eta, std::uint64_t seed);

// Points along the polygon through the partition's samples, consecutive spacing <= h.
PointCloud polygonal_densify(const PathSample& path, const Partition& part, double h);

std::vector<double> project_longitudinal(const PathSample& path, const Point& mu);
std::vector<double> project_transverse(const PathSample& path, const Point& mu);

}  // namespace sausage
