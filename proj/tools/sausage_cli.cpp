#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sausage/csv.hpp"
#include "sausage/experiments.hpp"
#include "sausage/metrics.hpp"
#include "sausage/persistence.hpp"
#include "sausage/regen.hpp"

using namespace sausage;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_seeds;
  std::optional<unsigned> threads;
  std::string out_dir;
};

ExperimentConfig resolve(const Globals& g) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
  if (g.n_seeds) {
    c.seeds.clear();
    const std::uint64_t base = g.seed.value_or(0);
    for (int i = 0; i < *g.n_seeds; ++i) c.seeds.push_back(base + static_cast<std::uint64_t>(i));
  } else if (g.seed) {
    c.seeds = {*g.seed};
  }
  if (g.threads) c.threads = *g.threads;
  if (!g.out_dir.empty()) c.out_dir = g.out_dir;
  return c;
}

std::ifstream open_in(const std::string& p) {
  std::ifstream f(p);
  if (!f) throw std::runtime_error("cannot read " + p);
  return f;
}

// Run bookkeeping: collects output names and writes the manifest at the end.
class Run {
 public:
  Run(ExperimentConfig cfg, std::string command) : cfg_(std::move(cfg)), command_(std::move(command)) {
    std::filesystem::create_directories(cfg_.out_dir);
  }
  const ExperimentConfig& cfg() const { return cfg_; }

  void table(const std::string& name, const CsvTable& t) {
    std::ofstream f(path(name));
    if (!f) throw std::runtime_error("cannot write " + path(name));
    t.write(f);
    outputs_.push_back(name);
  }
  template <class Fn>
  void file(const std::string& name, Fn&& write) {
    std::ofstream f(path(name));
    if (!f) throw std::runtime_error("cannot write " + path(name));
    write(f);
    outputs_.push_back(name);
  }
  void finish() {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_manifest(cfg_, command_, wall, outputs_);
    std::printf("wrote %zu file(s) to %s in %.2fs\n", outputs_.size() + 1, cfg_.out_dir.c_str(), wall);
  }

 private:
  std::string path(const std::string& name) const { return (std::filesystem::path(cfg_.out_dir) / name).string(); }
  ExperimentConfig cfg_;
  std::string command_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print_matching(const PersistenceDiagram& a, const PersistenceDiagram& b, int q, const BottleneckResult& r) {
  const auto& d = a.degree(q);
  const auto& e = b.degree(q);
  std::printf("bottleneck H%d %s\n", q, format_double(r.distance).c_str());
  std::printf("kind,i,j,birth_a,death_a,birth_b,death_b,cost\n");
  for (auto [i, j] : r.matching.pairs) {
    const auto& x = d[static_cast<std::size_t>(i)];
    const auto& y = e[static_cast<std::size_t>(j)];
    std::printf("pair,%d,%d,%s,%s,%s,%s,%s\n", i, j, format_double(x.birth).c_str(), format_double(x.death).c_str(),
                format_double(y.birth).c_str(), format_double(y.death).c_str(), format_double(sup_cost(x, y)).c_str());
  }
  for (int i : r.matching.d_diagonal) {
    const auto& x = d[static_cast<std::size_t>(i)];
    std::printf("diag_a,%d,,%s,%s,,,%s\n", i, format_double(x.birth).c_str(), format_double(x.death).c_str(),
                format_double(diagonal_cost(x)).c_str());
  }
  for (int j : r.matching.e_diagonal) {
    const auto& y = e[static_cast<std::size_t>(j)];
    std::printf("diag_b,,%d,,,%s,%s,%s\n", j, format_double(y.birth).c_str(), format_double(y.death).c_str(),
                format_double(diagonal_cost(y)).c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent homology of sampled planar paths and their regeneration structure"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "single seed, or the first one with --seeds");
  app.add_option("--seeds", g.n_seeds, "run this many consecutive seeds")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--out-dir", g.out_dir, "output directory");

  auto* sim = app.add_subcommand("simulate", "simulate one drifted path and detect its regenerations");
  std::optional<double> sim_T;
  sim->add_option("--T", sim_T, "horizon (defaults to the config's largest T)");

  auto* dia = app.add_subcommand("diagram", "alpha persistence diagram of a cloud or path CSV");
  std::string dia_in;
  bool dia_path = false;
  dia->add_option("input", dia_in, "x,y cloud CSV (or t,x,y with --path)")->required()->check(CLI::ExistingFile);
  dia->add_flag("--path", dia_path, "input is a path CSV with a time column");

  auto* bot = app.add_subcommand("bottleneck", "bottleneck distance between two diagram CSVs");
  int q = 1;
  std::string bot_a, bot_b;
  bot->add_option("--q", q, "homological degree")->check(CLI::Range(0, 1));
  bot->add_option("A", bot_a)->required()->check(CLI::ExistingFile);
  bot->add_option("B", bot_b)->required()->check(CLI::ExistingFile);

  app.add_subcommand("stability", "sampling, noise and polygon stability on a mesh ladder");
  auto* reg = app.add_subcommand("regen", "closed-form battery and renewal statistics");
  bool reg_battery = false, reg_renewal = false;
  reg->add_flag("--battery-only", reg_battery);
  reg->add_flag("--renewal-only", reg_renewal);
  app.add_subcommand("philln", "smoothed persistence LLN over the T ladder");
  app.add_subcommand("interface", "Mayer-Vietoris, slab and window audit at each cut");
  auto* inten = app.add_subcommand("intensity", "binned persistence intensity from hat weights");
  std::optional<int> bins;
  inten->add_option("--bins", bins)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = resolve(g);
    if (sim->parsed()) {
      ExperimentConfig c = cfg;
      if (sim_T) c.T_ladder = {*sim_T};
      Run run(c, "simulate");
      for (auto s : c.seeds) {
        const SimulatedRun r = simulate_run(c, s);
        const std::string tag = std::to_string(s);
        run.file("path_" + tag + ".csv", [&](std::ostream& os) { write_path_csv(os, r.path); });
        run.file("trace_" + tag + ".csv", [&](std::ostream& os) { write_trace_csv(os, r.trace); });
        std::printf("seed %s: %zu samples, %zu regenerations, %zu unresolved cuts\n", tag.c_str(), r.path.times.size(),
                    r.trace.tau.size(), r.trace.n_unresolved);
      }
      run.finish();
    } else if (dia->parsed()) {
      auto in = open_in(dia_in);
      const PointCloud cloud = dia_path ? read_path_csv(in).points : read_cloud_csv(in);
      PersistenceDiagram d = alpha_diagram(cloud);
      canonicalize(d);
      if (g.out_dir.empty()) {
        write_diagram_csv(std::cout, d);
      } else {
        Run run(cfg, "diagram " + dia_in);
        run.file("diagram.csv", [&](std::ostream& os) { write_diagram_csv(os, d); });
        std::printf("%zu points: %zu H0 and %zu H1 pairs\n", static_cast<std::size_t>(cloud.cols()), d.h0.size(),
                    d.h1.size());
        run.finish();
      }
    } else if (bot->parsed()) {
      auto fa = open_in(bot_a);
      auto fb = open_in(bot_b);
      const PersistenceDiagram a = read_diagram_csv(fa);
      const PersistenceDiagram b = read_diagram_csv(fb);
      print_matching(a, b, q, bottleneck(a, b, q));
    } else if (app.got_subcommand("stability")) {
      Run run(cfg, "stability");
      const StabilityReport r = run_stability(cfg);
      run.table("stability.csv", r.table());
      run.table("stability_slopes.csv", r.slope_table());
      std::printf("%zu rows, %zu violations, median slope %.3f (H0 %.3f, H1 %.3f)\n", r.rows.size(), r.violations,
                  r.median_slope, r.median_slope0, r.median_slope1);
      run.finish();
    } else if (reg->parsed()) {
      Run run(cfg, "regen");
      RegenStatsReport r = reg_battery ? run_regen_battery(cfg) : reg_renewal ? run_renewal(cfg) : run_regen_stats(cfg);
      run.table("regen.csv", r.table());
      std::size_t bad = 0, checked = 0;
      for (const auto& row : r.rows) {
        if (row.informational) continue;
        ++checked;
        if (!row.within()) ++bad;
      }
      std::printf("%zu checked rows, %zu outside 3 SE, %zu unresolved paths\n", checked, bad, r.unresolved);
      run.finish();
    } else if (app.got_subcommand("philln")) {
      Run run(cfg, "philln");
      const LlnReport r = run_phi_lln(cfg);
      run.table("lln_cycles.csv", r.cycle_table());
      run.table("lln_rows.csv", r.row_table());
      run.table("lln_summary.csv", r.summary_table());
      for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("%zu cycles, max telescoping error %.3g\n", r.cycles.size(), r.max_telescoping_error);
      run.finish();
    } else if (app.got_subcommand("interface")) {
      Run run(cfg, "interface");
      const InterfaceReport r = run_interface_audit(cfg);
      run.table("interface_rows.csv", r.row_table());
      run.table("interface_paths.csv", r.path_table());
      std::printf(
          "%zu rows (%zu skipped): MV %zu, intersection %zu, slab %zu, window %zu, far %zu, bound %zu, additivity %zu "
          "violations\n",
          r.rows.size(), r.skipped, r.mv_violations, r.intersection_violations, r.slab_violations, r.window_mismatches,
          r.far_violations, r.bound_violations, r.additivity_violations);
      run.finish();
    } else if (inten->parsed()) {
      Run run(cfg, "intensity");
      const IntensityReport r = estimate_intensity(cfg, bins.value_or(cfg.bins));
      run.table("intensity.csv", r.table());
      std::printf("sum of bins %.6g, tent-sum route %.6g, %s\n", r.sum_lambda, r.tent_sum_rho,
                  r.positive ? "all bins nonnegative within 3 SE" : "some bin below -3 SE");
      run.finish();
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
