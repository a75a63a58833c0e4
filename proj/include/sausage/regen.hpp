#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include "sausage/pathsim.hpp"

namespace sausage {

// ---- closed forms for U_t = nu t + B_t --------------------------------------

// Probability that U never drops more than R below its starting point.
double p_good(double nu, double R);
// E[exp(-lambda sigma_a^+)] for the first passage to +a.
double hitting_laplace(double nu, double a, double lambda);
// Probability of ever reaching -a.
double ruin_prob(double nu, double a);
// L / (nu p_good): the mean cycle length.
double mean_tau1(double nu, double L, double R);
// E[exp(theta eta)] for the exit time eta from (-R, R); continued past nu^2/2
// through cos up to the first pole.
double slab_mgf(double nu, double R, double theta);
double mean_slab_exit(double nu, double R);
// E[exp(theta sigma_L^+)], theta < nu^2 / 2.
double sigma_mgf(double nu, double L, double theta);
// p M / (1 - (1 - p) M) with M = sigma_mgf(nu, L, theta).
double tau1_geometric_mgf(double nu, double L, double R, double theta);
// Mean time to advance rho after a level hit conditioned never to drop R below it.
double mean_forward_window_good(double nu, double R, double rho);

// ---- detection -------------------------------------------------------------

enum class CrossingRule {
  Grid,    // an event happens iff a sample crosses the level
  Bridge,  // also counts crossings by the Brownian bridge between samples
};

struct RegenParams {
  double L = 1.0;
  double R = 1.0;
  double a = 0.0;  // slab half-width for the stored windows; 0 disables them
  double eps_cut = 1e-10;
  double nu = 1.0;
  double variance = 1.0;  // per unit time, for bridge crossing probabilities
  CrossingRule rule = CrossingRule::Bridge;
  std::uint64_t bridge_seed = 0;
  double r1 = 0.0;  // when > 0, enforce a > R + 2 r1 and L > 2a

  double horizon() const;  // D* = R + log(1/eps_cut) / (2 nu)
  void check() const;
};

enum class CutStatus : signed char { Bad = 0, Good = 1, Unresolved = -1 };

struct RegenTrace {
  RegenParams params;
  std::vector<double> u;  // longitudinal coordinate per sample
  std::vector<double> t;
  double u0 = 0.0;
  double d_star = 0.0;
  double max_excursion = 0.0;  // bound on how far any sampled bridge leaves its chord

  // Candidates: level n (1-based) is u0 + n L, first crossed at sample hits[n-1].
  std::vector<std::size_t> hits;
  std::vector<CutStatus> status;

  // Regenerations (k = 1..): sample index, time, ladder number, cycle data.
  std::vector<std::size_t> tau_index;
  std::vector<double> tau;
  std::vector<std::size_t> tau_level;
  std::vector<double> delta_tau;
  std::vector<int> n_candidates;
  std::vector<double> theta_minus;  // at params.a, NaN when undefined or disabled
  std::vector<double> theta_plus;

  std::size_t n_resolved = 0;
  std::size_t n_unresolved = 0;

  double level(std::size_t n) const { return u0 + static_cast<double>(n) * params.L; }
  // N(T): regenerations with tau_k <= T.
  std::size_t count_up_to(double T) const;
};

RegenTrace detect_regenerations(const std::vector<double>& u, const std::vector<double>& times,
                                const RegenParams& params);
// Convenience: projects the path on its drift direction and takes nu and variance from it.
RegenTrace detect_regenerations(const PathSample& path, RegenParams params);

// Extremes of U over step j -> j+1. Under the bridge rule they are drawn from
// the Brownian-bridge laws with one uniform per step and side, so every level
// query on the same step sees the same excursion.
double step_min(const RegenTrace& tr, std::size_t j);
double step_max(const RegenTrace& tr, std::size_t j);

// First sample index j >= from at which the level is reached (a crossing during
// step j-1 -> j counts). Returns npos if never.
std::size_t first_up_crossing(const RegenTrace& tr, std::size_t from, double level);
// Time of the last visit at or below level strictly before sample index `before`;
// NaN if there is none.
double last_visit_below(const RegenTrace& tr, std::size_t before, double level);

struct WindowPair {
  double theta_minus = std::numeric_limits<double>::quiet_NaN();
  double theta_plus = std::numeric_limits<double>::quiet_NaN();
};
// Backward and forward windows at each regeneration, measured from its nominal level.
std::vector<WindowPair> window_stats(const RegenTrace& tr, double rho);

// Block k covers samples tau_{k-1}..tau_k (tau_0 = 0), recentred at its first point.
std::vector<PointCloud> extract_blocks(const PathSample& path, const RegenTrace& tr);
// Sample index ranges [start, end] of the blocks.
std::vector<std::pair<std::size_t, std::size_t>> block_ranges(const RegenTrace& tr);

void write_trace_csv(std::ostream& os, const RegenTrace& tr);

}  // namespace sausage
