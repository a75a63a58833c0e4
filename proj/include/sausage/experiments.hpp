#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sausage/csv.hpp"
#include "sausage/gridoracle.hpp"
#include "sausage/pathsim.hpp"
#include "sausage/persistence.hpp"
#include "sausage/regen.hpp"
#include "sausage/weight.hpp"

namespace sausage {

struct RegenGridPoint {
  double nu = 1.0;
  double a = 1.0;  // hitting / ruin level
  double L = 1.0;
  double R = 1.0;
};

struct ExperimentConfig {
  // path model and radius window
  Point mu = Point(1.0, 0.0);
  double T = 1000.0;
  std::vector<double> T_ladder;  // empty means {T}
  double dt = 0.0025;
  double noise_scale = 1.0;  // 0 gives the deterministic ramp
  double r0 = 0.5;
  double r1 = 1.5;
  std::vector<double> psi_radii;  // empty means the unit hat on [r0, r1]
  std::vector<double> psi_values;

  // regeneration geometry
  double L = 8.0;
  double R = 1.0;
  double a = 4.1;
  double eps_cut = 1e-10;
  double margin = 0.0;  // extra simulated time past max T; 0 picks one from D*

  // grid oracle
  double h = 0.02;
  int n_radii = 11;
  double critical_skip = 5.0;  // in units of h

  std::vector<std::uint64_t> seeds{0};
  unsigned threads = 1;
  std::string out_dir = ".";

  // stability
  double stab_T = 1.0;
  std::vector<int> mesh_exponents{8, 9, 10, 11, 12, 13};
  int ref_exponent = 16;
  double noise_eta = 0.01;
  double poly_h = 0.005;

  // regeneration battery and renewal run
  std::vector<RegenGridPoint> regen_grid;
  int regen_paths = 10000;
  double regen_dt = 1e-3;
  double regen_eps_cut = 1e-6;
  double renewal_T = 2000.0;
  double renewal_nu = 1.0;
  double renewal_L = 1.0;
  double renewal_R = 1.0;
  int renewal_seeds = 20;
  double renewal_rho = 0.5;

  int checkpoints = 8;  // per cycle, for the coarse oscillation M_k; 0 disables
  int bins = 6;

  Weight psi() const;
  std::vector<double> t_ladder() const;
  RegenParams regen_params() const;
  // Window and ordering constraints for the topology experiments. Blocks k and
  // k+2 stay apart once L > R + 2 r1, which is all the cycle decomposition
  // needs; the interface slabs additionally want a > R + 2 r1 and L > 2a.
  void check_topology(bool slabs = true) const;
  void check() const;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);
// FNV-1a of the canonical JSON dump.
std::string config_hash(const ExperimentConfig& cfg);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Callers write results
// into slot i, which keeps the output independent of scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

// ---- stability --------------------------------------------------------------

struct StabilityRow {
  std::uint64_t seed = 0;
  std::string variant;  // "sample", "noise", "polygon"
  int exponent = 0;
  double mesh = 0.0;
  double omega = 0.0;
  double slack = 0.0;  // realized eta or h/2
  double d_h = 0.0;
  double d_b0 = 0.0;
  double d_b1 = 0.0;
  bool ok = false;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  std::vector<std::uint64_t> seeds;
  // Per seed, sample variant. `slope` uses the bottleneck distance of the full
  // diagram, max(d_b0, d_b1); the per-degree fits are kept for reporting.
  std::vector<double> slope, slope0, slope1;
  double median_slope = 0.0;
  double median_slope0 = 0.0;
  double median_slope1 = 0.0;
  std::size_t violations = 0;
  CsvTable table() const;
  CsvTable slope_table() const;
};

StabilityReport run_stability(const ExperimentConfig& cfg);

// Least-squares slope of log y on log x over entries with y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
double median(std::vector<double> v);

// ---- regeneration statistics -----------------------------------------------

struct RegenStatRow {
  std::string quantity;
  RegenGridPoint point;
  double closed_form = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  std::size_t n = 0;
  bool informational = false;  // not part of the pass/fail battery
  bool one_sided = false;      // estimate <= closed_form + k se
  double z() const;
  bool within(double k = 3.0) const;
};

struct RegenStatsReport {
  std::vector<RegenStatRow> rows;
  std::size_t unresolved = 0;  // paths dropped for running out of horizon
  CsvTable table() const;
};

// Fresh-start statistics on the battery grid: P(no backtrack R), ruin at a,
// E[sigma_a^+], E[tau_1], forward windows. Paths are simulated only until every
// quantity is decided.
RegenStatsReport run_regen_battery(const ExperimentConfig& cfg);
// Long paths: N(T)/T, stationary cycle mean, good-cut fraction, windows.
RegenStatsReport run_renewal(const ExperimentConfig& cfg);
RegenStatsReport run_regen_stats(const ExperimentConfig& cfg);

// ---- persistence LLN -------------------------------------------------------

struct CycleRecord {
  std::uint64_t seed = 0;
  std::size_t k = 0;  // 1-based
  double tau = 0.0;
  double delta_tau = 0.0;
  std::vector<double> z;  // per weight
  std::vector<double> m_coarse;  // lower bound on the in-cycle oscillation, per weight
};

struct LlnRow {
  std::uint64_t seed = 0;
  double T = 0.0;
  std::size_t n_cycles = 0;  // N(T)
  std::vector<double> phi;   // direct Phi_psi(T), per weight
  std::vector<double> sum_z;
  std::vector<double> remainder;
  double telescoping_error = 0.0;  // max over weights of |sum_z + rem - phi| / (1 + |phi|)
};

struct LlnSummary {
  double T = 0.0;
  std::size_t weight = 0;
  double mean_ratio = 0.0;  // mean over seeds of Phi(T)/T
  double sd_ratio = 0.0;
  double se_ratio = 0.0;
  double mean_rho_cycle = 0.0;  // mean over seeds of sum_{k>=2} Z_k / sum_{k>=2} dtau_k
  double se_rho_cycle = 0.0;
  double pooled_rho_cycle = 0.0;
  double mean_delta_tau = 0.0;
  double gamma_hat = 0.0;  // pooled mean Z_k, k >= 2
  std::size_t cycles = 0;
  bool low_confidence = false;
};

struct LlnReport {
  std::vector<Weight> weights;
  std::vector<CycleRecord> cycles;
  std::vector<LlnRow> rows;
  std::vector<LlnSummary> summary;  // per (T, weight)
  std::vector<std::string> warnings;
  double max_telescoping_error = 0.0;
  const LlnSummary& at(double T, std::size_t weight = 0) const;
  // Per-seed cycle estimates at the largest T, for weight w.
  std::vector<double> rho_cycle(std::size_t w = 0) const;
  CsvTable cycle_table() const;
  CsvTable row_table() const;
  CsvTable summary_table() const;
};

// One seed's path with its regeneration trace, simulated past max T by the margin.
struct SimulatedRun {
  PathSample path;
  RegenTrace trace;
};
SimulatedRun simulate_run(const ExperimentConfig& cfg, std::uint64_t seed);

LlnReport run_phi_lln(const ExperimentConfig& cfg);
LlnReport run_phi_lln(const ExperimentConfig& cfg, const std::vector<Weight>& weights);

// ---- interface audit -------------------------------------------------------

struct PairAudit {
  Betti2 a, b, uni, inter;
  // Two-sided Mayer-Vietoris bound: -b1(A n B) <= b1(A u B) - b1(A) - b1(B) <= b0(A n B).
  bool mv_ok = false;
  // b1(A n B) + b0(A n B) <= b1(A) + b1(B) + b1(A u B) + 1.
  bool intersection_ok = false;
};
PairAudit audit_pair(const PointCloud& A, const PointCloud& B, double r, double h);
PairAudit audit_masks(const GridMask& A, const GridMask& B);

struct InterfaceRow {
  std::uint64_t seed = 0;
  std::size_t k = 0;  // cut between blocks k and k+1
  double r = 0.0;
  PairAudit audit;
  bool in_slab = false;
  bool window_match = false;  // overlap equals A_k(r) n B_k(r)
  std::size_t window_diff = 0;  // pixels in the symmetric difference
  bool far_disjoint = true;  // blocks k and k+2 do not meet
  bool skipped = false;
  double critical_gap = 0.0;  // distance from r to the nearest critical value
};

struct PathBound {
  std::uint64_t seed = 0;
  double T = 0.0;
  double integral_beta1 = 0.0;  // exact, from the diagram
  double area_r1 = 0.0;         // grid area of the r1 sausage
  double bound = 0.0;           // area / (2 pi r0)
  bool ok = false;
  // almost-additivity, grid-evaluated over the ladder by the trapezoid rule
  double phi_tau_n = 0.0;
  double sum_y = 0.0;
  double sum_i = 0.0;
  bool additivity_ok = false;
  std::size_t n_blocks = 0;
};

struct InterfaceReport {
  std::vector<InterfaceRow> rows;
  std::vector<PathBound> paths;
  std::vector<double> i_k;  // integrated interface term per cut
  std::size_t mv_violations = 0;
  std::size_t intersection_violations = 0;
  std::size_t slab_violations = 0;
  std::size_t window_mismatches = 0;
  std::size_t far_violations = 0;
  std::size_t bound_violations = 0;
  std::size_t additivity_violations = 0;
  std::size_t skipped = 0;
  CsvTable row_table() const;
  CsvTable path_table() const;
};

InterfaceReport run_interface_audit(const ExperimentConfig& cfg);
// Pathwise complexity bound only (no per-cut rasters).
PathBound complexity_bound(const PathSample& path, double r0, double r1, double h);

// ---- intensity -------------------------------------------------------------

struct IntensityReport {
  std::vector<Weight> hats;
  std::vector<double> centers;
  std::vector<double> lambda, se;  // per bin
  std::vector<double> group_a, group_a_se, group_b, group_b_se;
  double tent_sum_rho = 0.0;
  double sum_lambda = 0.0;
  bool positive = false;  // every bin >= -3 SE
  CsvTable table() const;
};

IntensityReport estimate_intensity(const ExperimentConfig& cfg, int bins);

// ---- output ----------------------------------------------------------------

// Writes manifest.json into cfg.out_dir.
void write_manifest(const ExperimentConfig& cfg, const std::string& command, double wall_seconds,
                    const std::vector<std::string>& outputs);

}  // namespace sausage
