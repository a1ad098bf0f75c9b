// Acceptance suite: one pass/fail line per criterion. The CLI binary path
// is expected as argv[1] (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssdo/fixtures.hpp"
#include "ssdo/io.hpp"
#include "ssdo/oracle.hpp"
#include "ssdo/path_form.hpp"
#include "ssdo/solver.hpp"
#include "ssdo/traffic.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace ssdo;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;

struct Context {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& message) {
    if (!ok) failures.push_back(message);
  }
  void note(const std::string& message) { notes.push_back(message); }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool nonincreasing(const SolveReport& report, double tol, Context& ctx,
                   const std::string& label) {
  for (std::size_t i = 1; i < report.mlu_trajectory.size(); ++i)
    if (report.mlu_trajectory[i].mlu >
        report.mlu_trajectory[i - 1].mlu + tol) {
      ctx.require(false, label + ": trajectory increases at step " +
                             std::to_string(i));
      return false;
    }
  return true;
}

// Shared across criteria 4-7: every solver run observed anywhere in the
// suite must keep a monotone trajectory, and hot runs must dominate their
// initial configuration.
struct MonotoneLedger {
  long checked = 0;
  std::vector<std::string> violations;

  void observe(const SolveReport& report, const char* label) {
    ++checked;
    for (std::size_t i = 1; i < report.mlu_trajectory.size(); ++i)
      if (report.mlu_trajectory[i].mlu >
          report.mlu_trajectory[i - 1].mlu + 1e-6)
        violations.push_back(std::string(label) + " step " + std::to_string(i));
  }
  void observe_hot(const SolveReport& report, double initial_mlu,
                   const char* label) {
    observe(report, label);
    if (report.final_mlu > initial_mlu + 1e-6)
      violations.push_back(std::string(label) + " hot final above initial");
  }
};

MonotoneLedger g_ledger;

// ---------------------------------------------------------------------------

void criterion_1(Context& ctx) {
  Topology topology = complete_dcn_topology(3, 2.0);
  PathSet paths = yen_paths_all_pairs(topology, 2);
  DemandMatrix demands = triangle_fixture_demands();

  auto t0 = Clock::now();
  auto [split, report] = run(topology, demands, paths, {});
  double elapsed = seconds_since(t0);

  ctx.require(std::abs(report.final_mlu - 0.75) <= 1e-4,
              "final MLU " + std::to_string(report.final_mlu) + " != 0.75");
  ctx.require(std::abs(split.at(0, 1, 1) - 0.75) <= 1e-3,
              "direct ratio not 0.75");
  ctx.require(std::abs(split.at(0, 2, 1) - 0.25) <= 1e-3,
              "detour ratio not 0.25");
  ctx.require(report.mlu_trajectory.size() >= 2 &&
                  std::abs(report.mlu_trajectory[1].mlu - 0.75) <= 1e-4,
              "first outer iteration did not reach 0.75");
  ctx.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + "s >= 1s");
  ctx.note("runtime " + std::to_string(elapsed) + "s");
}

void criterion_2(Context& ctx) {
  Topology topology = complete_dcn_topology(3, 2.0);
  PathSet paths = yen_paths_all_pairs(topology, 2);
  DemandMatrix demands = triangle_fixture_demands();
  SplitTensor split = cold_start(topology, demands, paths);
  UtilizationState state = compute_utilization(topology, demands, split);
  SubproblemView view =
      background_traffic(topology, state, split, demands, paths, {0, 1});

  std::vector<double> fbar = residual_ratios(view, 0.8);
  ctx.require(fbar.size() == 2, "expected two candidates");
  ctx.require(std::abs(fbar[0] - 0.8) <= 1e-12, "direct bound != 0.8");
  ctx.require(std::abs(fbar[1] - 0.3) <= 1e-12, "detour bound != 0.3");

  auto normalized = feasibility_check(fbar);
  ctx.require(normalized.has_value(), "judgment must be feasible");
  if (normalized) {
    ctx.require(std::abs((*normalized)[0] - 0.8 / 1.1) <= 1e-12,
                "normalized direct ratio wrong");
    ctx.require(std::abs((*normalized)[1] - 0.3 / 1.1) <= 1e-12,
                "normalized detour ratio wrong");
  }
}

void criterion_3(Context& ctx) {
  auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> cap(0.1, 5.0);
  std::uniform_real_distribution<double> bg(0.0, 5.0);
  std::uniform_real_distribution<double> dem(0.1, 3.0);
  std::uniform_real_distribution<double> level(0.0, 4.0);
  std::uniform_int_distribution<int> midcount(1, 4);
  std::uniform_int_distribution<int> legcount(1, 2);

  long violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    SubproblemView view;
    view.src = 0;
    view.dst = 1;
    view.demand = dem(rng);
    view.leg_offset.push_back(0);
    int mids = midcount(rng);
    for (int m = 0; m < mids; ++m) {
      view.mids.push_back(m + 1);
      for (int l = legcount(rng); l > 0; --l)
        view.legs.push_back({{0, m + 1}, cap(rng), bg(rng)});
      view.leg_offset.push_back(static_cast<int>(view.legs.size()));
    }
    for (int pair = 0; pair < 10; ++pair) {
      double u1 = level(rng), u2 = level(rng);
      if (u1 > u2) std::swap(u1, u2);
      std::vector<double> f1 = residual_ratios(view, u1);
      std::vector<double> f2 = residual_ratios(view, u2);
      std::vector<double> b1 = balanced_ratios(f1);
      std::vector<double> b2 = balanced_ratios(f2);
      double s1 = 0, s2 = 0, t1 = 0, t2 = 0;
      for (int m = 0; m < mids; ++m) {
        if (f1[m] > f2[m] + 1e-12 || b1[m] > b2[m] + 1e-12) ++violations;
        s1 += f1[m];
        s2 += f2[m];
        t1 += b1[m];
        t2 += b2[m];
      }
      if (s1 > s2 + 1e-12 || t1 > t2 + 1e-12) ++violations;
    }
  }
  double elapsed = seconds_since(t0);
  ctx.require(violations == 0, std::to_string(violations) + " violations");
  ctx.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s >= 10s");
  ctx.note("runtime " + std::to_string(elapsed) + "s");
}

void criterion_4(Context& ctx) {
  auto t0 = Clock::now();
  std::mt19937_64 rng(4040);
  std::uniform_int_distribution<int> nodes(4, 6);
  long cases = 0, failures = 0;

  for (int trial = 0; trial < 200; ++trial) {
    auto inst = testsupport::random_instance(rng, nodes(rng), 3, 0.45);
    SplitTensor split = testsupport::random_tensor(rng, inst.paths);
    UtilizationState state =
        compute_utilization(inst.topology, inst.demands, split);
    double initial = max_utilization(state);

    std::vector<SdPair> demanded = inst.demands.demanded_pairs();
    std::shuffle(demanded.begin(), demanded.end(), rng);
    std::size_t tested = std::min<std::size_t>(4, demanded.size());
    for (std::size_t i = 0; i < tested; ++i) {
      SdPair sd = demanded[i];
      SubproblemView view = background_traffic(inst.topology, state, split,
                                               inst.demands, inst.paths, sd);
      std::vector<double> ratios = bbsm(view, 1e-6);

      SplitTensor updated = split;
      UtilizationState probe = state;
      apply_sd_update(inst.topology, probe, updated, inst.demands, inst.paths,
                      sd, ratios);
      double achieved = max_utilization(probe);

      SubproblemOracleResult oracle = grid_subproblem_optimum(
          inst.topology, inst.demands, split, inst.paths, sd, 1e-3);
      ++cases;
      if (achieved > oracle.optimal_mlu + 2e-3) {
        ++failures;
        ctx.require(false, "subproblem above oracle: " +
                               std::to_string(achieved) + " vs " +
                               std::to_string(oracle.optimal_mlu));
      }
    }

    // Full solver runs feed the shared monotonicity/hot-start ledger.
    auto cold = run(inst.topology, inst.demands, inst.paths, {});
    g_ledger.observe(cold.report, "c4-cold");
    auto hot = run(inst.topology, inst.demands, inst.paths, {}, &split);
    g_ledger.observe_hot(hot.report, initial, "c4-hot");
  }
  double elapsed = seconds_since(t0);
  ctx.require(elapsed < 300.0, "runtime " + std::to_string(elapsed) + "s >= 5min");
  ctx.note(std::to_string(cases) + " subproblems, " + std::to_string(failures) +
           " above oracle, runtime " + std::to_string(elapsed) + "s");
}

void criterion_5(Context& ctx) {
  std::mt19937_64 rng(5050);
  std::uniform_int_distribution<int> nodes(4, 5);
  std::uniform_real_distribution<double> dem(0.2, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int within = 0, exceptions = 0, bad_exceptions = 0;

  for (int trial = 0; trial < 100; ++trial) {
    int n = nodes(rng);
    // Keep the free simplex dimensions within the oracle caps: either two
    // pairs with three candidates or three pairs with two.
    bool wide = coin(rng) < 0.5;
    int k = wide ? 3 : 2;
    int pair_count = wide ? 2 : 3;

    auto inst = testsupport::random_instance(rng, n, k, 0.0);
    DemandMatrix demands(n);
    std::vector<SdPair> all;
    for (int s = 0; s < n; ++s)
      for (int d = 0; d < n; ++d)
        if (s != d) all.push_back({s, d});
    std::shuffle(all.begin(), all.end(), rng);
    for (int p = 0; p < pair_count; ++p)
      demands.set(all[p].first, all[p].second, dem(rng));

    auto result = run(inst.topology, demands, inst.paths, {});
    g_ledger.observe(result.report, "c5-cold");
    OracleResult oracle =
        grid_global_optimum(inst.topology, demands, inst.paths, 0.02);

    if (result.report.final_mlu <= oracle.optimal_mlu + 1e-2) {
      ++within;
    } else {
      ++exceptions;
      ctx.note("seed " + std::to_string(trial) + ": plateau at " +
               std::to_string(result.report.final_mlu) + " vs optimum " +
               std::to_string(oracle.optimal_mlu));
      // Exceptions must be converged plateaus, not budget artifacts.
      if (result.report.termination != Termination::converged)
        ++bad_exceptions;
    }
  }
  ctx.require(within >= 90, "only " + std::to_string(within) +
                                "/100 within 1e-2 of the exhaustive optimum");
  ctx.require(bad_exceptions == 0, "exception without converged termination");
  ctx.note(std::to_string(within) + "/100 within tolerance, " +
           std::to_string(exceptions) + " logged plateaus");
}

void criterion_6(Context& ctx) {
  RingFixture fixture = ring_deadlock_fixture(8);

  auto hot = path_ssdo(fixture.topology, fixture.demands, fixture.paths,
                       fixture.all_detour_split, {});
  ctx.require(std::abs(hot.report.final_mlu - 1.0) <= 1e-6,
              "deadlocked hot start must stay at MLU 1");
  g_ledger.observe_hot(hot.report, 1.0, "c6-hot");

  PathSplit initial =
      path_cold_start(fixture.topology, fixture.demands, fixture.paths);
  auto cold = path_ssdo(fixture.topology, fixture.demands, fixture.paths,
                        initial, {});
  ctx.require(std::abs(cold.report.final_mlu - 0.2) <= 1e-6,
              "cold start must reach MLU 0.2");
  g_ledger.observe(cold.report, "c6-cold");
}

void criterion_7(Context& ctx) {
  ctx.require(g_ledger.checked > 0, "no runs were observed");
  for (const std::string& v : g_ledger.violations) ctx.require(false, v);
  ctx.note(std::to_string(g_ledger.checked) + " runs checked, " +
           std::to_string(g_ledger.violations.size()) + " violations");
}

void criterion_8(Context& ctx) {
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<int> nodes(4, 6);
  int found = 0, attempts = 0;

  while (found < 100 && attempts < 20000) {
    ++attempts;
    auto inst = testsupport::random_instance(rng, nodes(rng), 3, 0.45);
    SplitTensor split = testsupport::random_tensor(rng, inst.paths);
    UtilizationState state =
        compute_utilization(inst.topology, inst.demands, split);
    SdPair sd = testsupport::random_demanded_pair(rng, inst.demands);
    SubproblemView view = background_traffic(inst.topology, state, split,
                                             inst.demands, inst.paths, sd);

    std::vector<double> ratios = bbsm(view, 1e-8);
    apply_sd_update(inst.topology, state, split, inst.demands, inst.paths, sd,
                    ratios);
    double achieved = max_utilization(state);

    // Multi-solution cases: the optimum is pinned by background traffic.
    if (std::abs(achieved - view.u_lb) > 1e-7) continue;
    ++found;

    // Balance conditions over the candidate paths.
    double ue = 0.0;
    for (std::size_t m = 0; m < view.mids.size(); ++m) {
      if (ratios[m] <= 1e-9) continue;
      double path_util = 0.0;
      for (int e = view.leg_offset[m]; e < view.leg_offset[m + 1]; ++e)
        path_util = std::max(path_util,
                             state.util_at(view.legs[e].edge.src,
                                           view.legs[e].edge.dst));
      ue = std::max(ue, path_util);
    }
    for (std::size_t m = 0; m < view.mids.size(); ++m) {
      double path_util = 0.0;
      for (int e = view.leg_offset[m]; e < view.leg_offset[m + 1]; ++e)
        path_util = std::max(path_util,
                             state.util_at(view.legs[e].edge.src,
                                           view.legs[e].edge.dst));
      if (ratios[m] > 1e-9)
        ctx.require(std::abs(path_util - ue) <= 1e-5,
                    "used path off the balance level by " +
                        std::to_string(std::abs(path_util - ue)));
      else
        ctx.require(path_util >= ue - 1e-5,
                    "unused path below the balance level");
    }
  }
  ctx.require(found >= 100, "only found " + std::to_string(found) +
                                " multi-solution cases");
  ctx.note(std::to_string(found) + " cases from " + std::to_string(attempts) +
           " attempts");
}

void criterion_9(Context& ctx) {
  std::mt19937_64 rng(9090);
  auto inst = testsupport::random_instance(rng, 10, 3, 0.5);
  SplitTensor split = testsupport::random_tensor(rng, inst.paths);
  UtilizationState state =
      compute_utilization(inst.topology, inst.demands, split);

  std::exponential_distribution<double> expo(1.0);
  for (int step = 0; step < 10000; ++step) {
    SdPair sd = testsupport::random_demanded_pair(rng, inst.demands);
    std::vector<NodeId> mids = inst.paths.intermediates(sd.first, sd.second);
    std::vector<double> ratios(mids.size());
    double sum = 0.0;
    for (double& r : ratios) {
      r = expo(rng) + 1e-3;
      sum += r;
    }
    for (double& r : ratios) r /= sum;
    apply_sd_update(inst.topology, state, split, inst.demands, inst.paths, sd,
                    ratios);
  }

  std::vector<double> literal = testsupport::load_by_formula(inst.demands, split);
  double worst = 0.0;
  for (std::size_t e = 0; e < state.load.size(); ++e)
    worst = std::max(worst, std::abs(state.load[e] - literal[e]));
  ctx.require(worst <= 1e-9,
              "incremental drift " + std::to_string(worst) + " above 1e-9");
  ctx.note("max drift " + std::to_string(worst));
}

void criterion_10(Context& ctx) {
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<int> nodes(4, 6);
  int agree = 0, disagree = 0, unverified = 0;

  for (int trial = 0; trial < 50; ++trial) {
    auto inst = testsupport::random_instance(rng, nodes(rng), 3, 0.4);
    auto dense_result = run(inst.topology, inst.demands, inst.paths, {});
    PathSplit initial =
        path_cold_start(inst.topology, inst.demands, inst.paths);
    auto path_result =
        path_ssdo(inst.topology, inst.demands, inst.paths, initial, {});

    if (std::abs(dense_result.report.final_mlu - path_result.report.final_mlu) <=
        1e-5) {
      ++agree;
      continue;
    }
    ++disagree;
    // Discrepancies must still both sit near the exhaustive optimum when the
    // instance is small enough for it.
    try {
      OracleResult oracle =
          grid_global_optimum(inst.topology, inst.demands, inst.paths, 0.02);
      ctx.require(dense_result.report.final_mlu <= oracle.optimal_mlu + 1e-2,
                  "dense result far from optimum on a disagreeing instance");
      ctx.require(path_result.report.final_mlu <= oracle.optimal_mlu + 1e-2,
                  "path result far from optimum on a disagreeing instance");
    } catch (const TooLargeError&) {
      ++unverified;
    }
  }
  ctx.require(agree >= 48, "only " + std::to_string(agree) + "/50 agree");
  ctx.note(std::to_string(agree) + "/50 agree, " + std::to_string(disagree) +
           " checked against the oracle (" + std::to_string(unverified) +
           " beyond oracle caps)");
}

void criterion_11(Context& ctx) {
  auto t_setup = Clock::now();
  Topology topology = complete_dcn_topology(155, 10.0);
  PathSet paths = yen_paths_all_pairs(topology, 4);
  DemandMatrix demands =
      gravity_demands(topology, 50000.0, 11, {.noise_sigma = 0.3});
  double setup_seconds = seconds_since(t_setup);

  auto t0 = Clock::now();
  auto [split, report] = run(topology, demands, paths, {});
  double solve_seconds = seconds_since(t0);

  ctx.require(solve_seconds < 120.0,
              "solve took " + std::to_string(solve_seconds) + "s >= 120s");
  nonincreasing(report, 1e-6, ctx, "scale smoke");
  double initial = report.mlu_trajectory.front().mlu;
  ctx.require(report.final_mlu < initial,
              "no strict improvement over the shortest-path start");
  ctx.note("setup " + std::to_string(setup_seconds) + "s, solve " +
           std::to_string(solve_seconds) + "s, MLU " + std::to_string(initial) +
           " -> " + std::to_string(report.final_mlu) + ", iterations " +
           std::to_string(report.iterations));
}

void criterion_12(Context& ctx) {
  if (g_cli.empty()) {
    ctx.require(false, "CLI path missing (pass as argv[1])");
    return;
  }
  fs::path root = fs::temp_directory_path() / "ssdo_acceptance_det";
  fs::remove_all(root);
  fs::create_directories(root);

  auto shell = [&](const std::string& args) {
    std::string cmd =
        g_cli + " " + args + " > " + (root / "log.txt").string() + " 2>&1";
    return std::system(cmd.c_str()) == 0;
  };

  for (const char* tag : {"a", "b"}) {
    fs::path dir = root / tag;
    fs::create_directories(dir);
    bool ok = shell("gen --out-dir " + dir.string() +
                    " --complete 6 --capacity 2 --paths-per-pair 3 "
                    "--gravity 18 --noise 0.4 --seed 33");
    ok = ok && shell("solve --topology " + (dir / "topology.json").string() +
                     " --paths " + (dir / "paths.json").string() +
                     " --demands " + (dir / "demands.csv").string() +
                     " --split-out " + (dir / "split.json").string());
    ctx.require(ok, std::string("pipeline failed in ") + tag);
  }
  for (const char* name : {"demands.csv", "topology.json", "paths.json",
                           "split.json"}) {
    std::string a = read_file(root / "a" / name);
    std::string b = read_file(root / "b" / name);
    ctx.require(!a.empty() && a == b,
                std::string(name) + " differs between identical runs");
  }
  fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];

  struct Criterion {
    const char* name;
    std::function<void(Context&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"3-node end-to-end solve", criterion_1},
      {"feasibility judgment arithmetic", criterion_2},
      {"ratio-bound monotonicity", criterion_3},
      {"subproblem optimality vs grid oracle", criterion_4},
      {"global desk-scale quality", criterion_5},
      {"ring deadlock regression", criterion_6},
      {"monotone trajectories and hot-start dominance", criterion_7},
      {"balance conditions in multi-solution cases", criterion_8},
      {"incremental consistency over 10000 updates", criterion_9},
      {"dense/path form equivalence", criterion_10},
      {"scale smoke test", criterion_11},
      {"CLI determinism", criterion_12},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Context ctx;
    auto t0 = Clock::now();
    try {
      criteria[i].fn(ctx);
    } catch (const std::exception& e) {
      ctx.require(false, std::string("exception: ") + e.what());
    }
    double elapsed = seconds_since(t0);
    bool ok = ctx.failures.empty();
    if (!ok) ++failed;
    std::printf("[%s] criterion %02zu: %s (%.2fs)", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, elapsed);
    for (const std::string& note : ctx.notes) std::printf(" | %s", note.c_str());
    std::printf("\n");
    for (const std::string& failure : ctx.failures)
      std::printf("       - %s\n", failure.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
