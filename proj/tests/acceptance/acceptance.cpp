// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, next to the check they gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mamax/inner_solver.hpp"
#include "mamax/pso.hpp"
#include "mamax/rng.hpp"
#include "mamax/scenario.hpp"
#include "mamax/schemes.hpp"
#include "run_config.hpp"
#include "runner.hpp"

using namespace mamax;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, bool pass, const char* name, const std::string& detail) {
  std::printf("[%2d] %s %s: %s\n", id, pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

AntennaPositioningVector random_apv(Rng& rng, int num_antennas, double region_size) {
  AntennaPositioningVector apv(static_cast<std::size_t>(num_antennas));
  for (auto& pos : apv) {
    pos.x = rng.uniform(-region_size / 2, region_size / 2);
    pos.y = rng.uniform(-region_size / 2, region_size / 2);
  }
  return apv;
}

// 200 mixed-size instances shared by the first two criteria.
struct CorpusStats {
  double worst_decrease = 0.0;  // largest objective drop between iterations
  double worst_spread = 0.0;    // largest relative equal-rate spread
  double elapsed_s = 0.0;
  int instances = 0;
};

CorpusStats run_bcd_corpus() {
  const int users[] = {2, 4, 8};
  const int antennas[] = {4, 8, 16};
  const int paths[] = {2, 5, 10};
  CorpusStats stats;
  auto start = Clock::now();
  for (int i = 0; stats.instances < 200; ++i) {
    ScenarioConfig cfg;
    cfg.num_users = users[i % 3];
    cfg.num_antennas = antennas[(i / 3) % 3];
    cfg.paths_per_user = paths[(i / 9) % 3];
    if (cfg.num_users > cfg.num_antennas) continue;
    cfg.rng_seed = 1000 + static_cast<std::uint64_t>(i);
    ScenarioInstance instance = generate_scenario(cfg);
    Rng rng(Rng::derive(cfg.rng_seed, {900}));
    AntennaPositioningVector apv = random_apv(rng, cfg.num_antennas, cfg.region_size);
    InnerSolution sol = bcd_solve(apv, instance, 1e-3, 1e-3);
    for (std::size_t j = 1; j < sol.objective_trace.size(); ++j)
      stats.worst_decrease =
          std::max(stats.worst_decrease, sol.objective_trace[j - 1] - sol.objective_trace[j]);
    stats.worst_spread = std::max(stats.worst_spread, sol.max_equal_sinr_spread);
    ++stats.instances;
  }
  stats.elapsed_s = seconds_since(start);
  return stats;
}

// 20 movable-array trials at the default desk setup, shared by the swarm,
// ordering, improvement, and path-sweep criteria.
struct DeskCorpus {
  std::vector<TrialResult> ma, aps, fpa;
};

constexpr std::uint64_t kDeskRootSeed = 42;
constexpr int kDeskTrials = 20;

PsoParams desk_pso() {
  PsoParams pso;
  pso.swarm_size = 50;
  pso.max_iters = 100;
  return pso;
}

std::vector<TrialResult> run_scheme_trials(SchemeKind scheme, int paths_per_user) {
  ScenarioConfig cfg;
  cfg.paths_per_user = paths_per_user;
  PsoParams pso = desk_pso();
  std::vector<TrialResult> trials;
  trials.reserve(kDeskTrials);
  for (int i = 0; i < kDeskTrials; ++i) {
    cfg.rng_seed = trial_seed(kDeskRootSeed, i);
    trials.push_back(run_trial(cfg, scheme, pso));
  }
  return trials;
}

double mean_rate(const std::vector<TrialResult>& trials) {
  double sum = 0.0;
  for (const auto& t : trials) sum += t.min_rate;
  return sum / static_cast<double>(trials.size());
}

bool any_failed(const std::vector<TrialResult>& trials, std::string& detail) {
  for (const auto& t : trials)
    if (t.failed) {
      detail = "trial failed: " + t.error;
      return true;
    }
  return false;
}

std::vector<std::string> file_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main() {
  // 1 and 2: alternating inner solver over the mixed corpus.
  CorpusStats corpus = run_bcd_corpus();
  {
    constexpr double kMonotoneSlack = 1e-9;
    bool pass = corpus.worst_decrease <= kMonotoneSlack && corpus.elapsed_s < 60.0;
    report(1, pass, "inner objective traces are non-decreasing",
           "largest drop " + fmt(corpus.worst_decrease) + " over " +
               std::to_string(corpus.instances) + " instances, " + fmt(corpus.elapsed_s) + " s");
  }
  {
    constexpr double kSpreadTol = 1e-6;
    report(2, corpus.worst_spread <= kSpreadTol, "power control equalizes the rates",
           "largest relative spread " + fmt(corpus.worst_spread));
  }

  // 3: single-user runs admit a closed form.
  {
    constexpr double kTol = 1e-6;
    const int antennas[] = {1, 2, 4, 8, 16};
    const int paths[] = {1, 2, 5, 10};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      ScenarioConfig cfg;
      cfg.num_users = 1;
      cfg.num_antennas = antennas[i % 5];
      cfg.paths_per_user = paths[(i / 5) % 4];
      cfg.rng_seed = 2000 + static_cast<std::uint64_t>(i);
      ScenarioInstance instance = generate_scenario(cfg);
      Rng rng(Rng::derive(cfg.rng_seed, {901}));
      AntennaPositioningVector apv = random_apv(rng, cfg.num_antennas, cfg.region_size);
      ChannelMatrix channels = channel_matrix(apv, instance.users, cfg.wavelength);
      double expected =
          std::log2(1.0 + cfg.p_max * channels.entries.col(0).squaredNorm() / cfg.noise_power);
      InnerSolution sol = bcd_solve(apv, instance, 1e-3, 1e-3);
      worst = std::max(worst, std::abs(sol.min_rate - expected));
    }
    report(3, worst <= kTol, "single-user rate matches its closed form",
           "largest deviation " + fmt(worst) + " over 100 draws");
  }

  // 4: the combiner satisfies its normal equations.
  {
    constexpr double kRelTol = 1e-10;
    const int users[] = {2, 4, 8};
    const int antennas[] = {4, 8, 16};
    double worst = 0.0;
    for (int i = 0, draws = 0; draws < 100; ++i) {
      ScenarioConfig cfg;
      cfg.num_users = users[i % 3];
      cfg.num_antennas = antennas[(i / 3) % 3];
      cfg.paths_per_user = 5;
      if (cfg.num_users > cfg.num_antennas) continue;
      ++draws;
      cfg.rng_seed = 2500 + static_cast<std::uint64_t>(i);
      ScenarioInstance instance = generate_scenario(cfg);
      Rng rng(Rng::derive(cfg.rng_seed, {902}));
      AntennaPositioningVector apv = random_apv(rng, cfg.num_antennas, cfg.region_size);
      ChannelMatrix channels = channel_matrix(apv, instance.users, cfg.wavelength);
      PowerVector power(cfg.num_users);
      for (int k = 0; k < cfg.num_users; ++k) power[k] = rng.uniform(0.0, cfg.p_max);
      CombiningMatrix combining = mmse_combiner(channels, power, cfg.noise_power);
      const Eigen::MatrixXcd& h = channels.entries;
      Eigen::MatrixXcd gram = h * power.asDiagonal() * h.adjoint();
      gram += cfg.noise_power * Eigen::MatrixXcd::Identity(h.rows(), h.rows());
      double rel = (gram * combining - h).norm() / h.norm();
      worst = std::max(worst, rel);
    }
    report(4, worst <= kRelTol, "combiner solves its normal equations",
           "largest relative residual " + fmt(worst) + " over 100 draws");
  }

  // 5, 7, 8, 9 share one paired desk corpus.
  DeskCorpus desk;
  desk.ma = run_scheme_trials(SchemeKind::MovableOptimized, 10);

  {
    std::string detail;
    bool pass = !any_failed(desk.ma, detail);
    int clean = 0;
    int monotone = 0;
    for (const auto& trial : desk.ma) {
      bool ok = true;
      for (std::size_t j = 1; j < trial.trace.size(); ++j)
        if (trial.trace[j].best_fitness < trial.trace[j - 1].best_fitness) ok = false;
      monotone += ok ? 1 : 0;
      clean += trial.penalty_count == 0 ? 1 : 0;
    }
    pass = pass && monotone == kDeskTrials && clean >= 19;
    if (detail.empty())
      detail = std::to_string(monotone) + "/20 monotone, " + std::to_string(clean) +
               "/20 with zero final penalty";
    report(5, pass, "swarm best never regresses and spacing penalties die out", detail);
  }

  // 6: swarm search against an exhaustive placement grid on tiny instances.
  {
    constexpr double kFitnessSlack = 0.05;  // bits/s/Hz
    constexpr double kGridStep = 0.01;      // wavelength / 10
    auto start = Clock::now();
    double worst_deficit = 1e300;
    bool pass = true;
    std::string fail_detail;
    for (int i = 0; i < 10 && pass; ++i) {
      ScenarioConfig cfg;
      cfg.num_users = 2;
      cfg.num_antennas = 2;
      cfg.paths_per_user = 2;
      cfg.rng_seed = 4000 + static_cast<std::uint64_t>(i);
      ScenarioInstance instance = generate_scenario(cfg);

      TrialResult trial = run_trial(cfg, SchemeKind::MovableOptimized, desk_pso());
      if (trial.failed) {
        pass = false;
        fail_detail = "trial failed: " + trial.error;
        break;
      }
      double swarm_fitness = trial.trace.back().best_fitness;

      // Channel row of every grid point, built in one shot: a placement's
      // channel matrix is just two of these rows stacked.
      const int per_axis = static_cast<int>(std::lround(cfg.region_size / kGridStep)) + 1;
      AntennaPositioningVector grid;
      grid.reserve(static_cast<std::size_t>(per_axis * per_axis));
      for (int r = 0; r < per_axis; ++r)
        for (int c = 0; c < per_axis; ++c)
          grid.push_back({(c - (per_axis - 1) / 2.0) * kGridStep,
                          (r - (per_axis - 1) / 2.0) * kGridStep});
      ChannelMatrix rows = channel_matrix(grid, instance.users, cfg.wavelength);

      // Exchange symmetry: placements (a, b) and (b, a) give the same rate,
      // so only a < b is scanned. Pairs closer than min_dist score below any
      // feasible placement and are skipped.
      double grid_best = 0.0;
      const std::size_t points = grid.size();
      for (std::size_t a = 0; a < points; ++a) {
        for (std::size_t b = a + 1; b < points; ++b) {
          double dx = grid[a].x - grid[b].x;
          double dy = grid[a].y - grid[b].y;
          if (dx * dx + dy * dy < cfg.min_dist * cfg.min_dist) continue;
          ChannelMatrix pair;
          pair.carrier_wavelength = cfg.wavelength;
          pair.entries.resize(2, cfg.num_users);
          pair.entries.row(0) = rows.entries.row(static_cast<Eigen::Index>(a));
          pair.entries.row(1) = rows.entries.row(static_cast<Eigen::Index>(b));
          double rate = bcd_solve(pair, cfg.p_max, cfg.noise_power, 1e-3, 1e-3).min_rate;
          grid_best = std::max(grid_best, rate);
        }
      }
      worst_deficit = std::min(worst_deficit, swarm_fitness - grid_best);
      if (swarm_fitness < grid_best - kFitnessSlack) {
        pass = false;
        fail_detail = "instance " + std::to_string(i) + ": swarm " + fmt(swarm_fitness) +
                      " vs grid " + fmt(grid_best);
      }
    }
    double elapsed = seconds_since(start);
    pass = pass && elapsed < 600.0;
    report(6, pass, "swarm search matches an exhaustive placement grid",
           fail_detail.empty() ? "worst margin " + fmt(worst_deficit) + " over 10 instances, " +
                                     fmt(elapsed) + " s"
                               : fail_detail);
  }

  desk.aps = run_scheme_trials(SchemeKind::AlternatingPositionSelection, 10);
  desk.fpa = run_scheme_trials(SchemeKind::FixedUPA, 10);

  {
    std::string detail;
    bool pass = !any_failed(desk.aps, detail) && !any_failed(desk.fpa, detail);
    int ma_over_aps = 0;
    int aps_over_fpa = 0;
    for (int i = 0; i < kDeskTrials; ++i) {
      ma_over_aps += desk.ma[static_cast<std::size_t>(i)].min_rate >=
                             desk.aps[static_cast<std::size_t>(i)].min_rate
                         ? 1
                         : 0;
      aps_over_fpa += desk.aps[static_cast<std::size_t>(i)].min_rate >=
                              desk.fpa[static_cast<std::size_t>(i)].min_rate
                          ? 1
                          : 0;
    }
    double ma = mean_rate(desk.ma), aps = mean_rate(desk.aps), fpa = mean_rate(desk.fpa);
    pass = pass && ma >= aps && aps >= fpa && ma_over_aps >= 16 && aps_over_fpa >= 16;
    if (detail.empty())
      detail = "means " + fmt(ma) + " >= " + fmt(aps) + " >= " + fmt(fpa) + "; per-seed " +
               std::to_string(ma_over_aps) + "/20 and " + std::to_string(aps_over_fpa) + "/20";
    report(7, pass, "movable beats selection beats fixed", detail);
  }

  {
    constexpr double kMinImprovement = 0.30;
    double ma = mean_rate(desk.ma), fpa = mean_rate(desk.fpa);
    double gain = ma / fpa - 1.0;
    report(8, gain >= kMinImprovement, "movable array clears the improvement bar",
           "mean " + fmt(ma) + " vs " + fmt(fpa) + ", gain " + fmt(100.0 * gain) + "%");
  }

  {
    std::vector<TrialResult> l2 = run_scheme_trials(SchemeKind::MovableOptimized, 2);
    std::vector<TrialResult> l6 = run_scheme_trials(SchemeKind::MovableOptimized, 6);
    std::string detail;
    bool pass = !any_failed(l2, detail) && !any_failed(l6, detail);
    double m2 = mean_rate(l2), m6 = mean_rate(l6), m10 = mean_rate(desk.ma);
    pass = pass && m2 < m6 && m6 < m10;
    if (detail.empty()) detail = fmt(m2) + " < " + fmt(m6) + " < " + fmt(m10) + " over paths {2, 6, 10}";
    report(9, pass, "rate grows with the number of paths", detail);
  }

  // 10: identical configurations reproduce the result table byte for byte.
  // wall_time_s, the one column that measures the machine rather than the
  // model, is excluded from the comparison.
  {
    cli::RunConfig cfg;
    cfg.scenario.num_users = 2;
    cfg.scenario.num_antennas = 4;
    cfg.scenario.paths_per_user = 2;
    cfg.scenario.rng_seed = 77;
    cfg.pso.swarm_size = 6;
    cfg.pso.max_iters = 6;
    cfg.num_trials = 2;
    fs::path dir_a = fs::temp_directory_path() / "mamax_acceptance_a";
    fs::path dir_b = fs::temp_directory_path() / "mamax_acceptance_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    std::ostringstream sink;
    cfg.output_dir = dir_a.string();
    int rc_a = cli::run(cfg, false, sink);
    cfg.output_dir = dir_b.string();
    int rc_b = cli::run(cfg, false, sink);

    bool pass = rc_a == 0 && rc_b == 0;
    std::string detail;
    std::vector<std::string> rows_a = file_lines(dir_a / "results.csv");
    std::vector<std::string> rows_b = file_lines(dir_b / "results.csv");
    pass = pass && rows_a.size() == rows_b.size() && !rows_a.empty();
    for (std::size_t i = 0; pass && i < rows_a.size(); ++i) {
      if (rows_a[i].substr(0, rows_a[i].rfind(',')) != rows_b[i].substr(0, rows_b[i].rfind(','))) {
        pass = false;
        detail = "results.csv row " + std::to_string(i) + " differs";
      }
    }
    if (pass && file_bytes(dir_a / "manifest.json") != file_bytes(dir_b / "manifest.json")) {
      pass = false;
      detail = "manifests differ";
    }
    if (pass) {
      std::vector<fs::path> names;
      for (const auto& entry : fs::directory_iterator(dir_a / "trials"))
        names.push_back(entry.path().filename());
      std::sort(names.begin(), names.end());
      for (const auto& name : names) {
        if (file_bytes(dir_a / "trials" / name) != file_bytes(dir_b / "trials" / name)) {
          pass = false;
          detail = "trial record " + name.string() + " differs";
          break;
        }
      }
      if (pass && detail.empty())
        detail = std::to_string(rows_a.size() - 1) + " rows and " + std::to_string(names.size()) +
                 " trial records identical (wall_time_s column excluded)";
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    report(10, pass, "identical runs reproduce identical tables", detail);
  }

  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
