// Command-line front end: instance generation, solving, failure and
// perturbation sweeps, and the desk-scale exhaustive oracle.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssdo/fixtures.hpp"
#include "ssdo/io.hpp"
#include "ssdo/oracle.hpp"
#include "ssdo/path_form.hpp"
#include "ssdo/rng.hpp"
#include "ssdo/solver.hpp"
#include "ssdo/traffic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitInfeasible = 4;

std::vector<std::string> default_node_names(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (n <= 26)
      names.push_back(std::string(1, static_cast<char>('A' + i)));
    else
      names.push_back("N" + std::to_string(i));
  }
  return names;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Instance {
  ssdo::NamedTopology named;
  ssdo::PathSet paths;
  ssdo::DemandMatrix demands;
};

// Runs one ingestion step, prefixing any failure with the offending file.
template <typename Fn>
auto with_file_context(const std::string& path, Fn&& fn)
    -> decltype(fn()) {
  try {
    return fn();
  } catch (const ssdo::InvariantViolation& e) {
    throw ssdo::InvariantViolation(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw ssdo::InvariantViolation(path + ": " + e.what());
  }
}

ssdo::DemandMatrix load_demands(const std::string& path) {
  return with_file_context(path, [&] {
    std::string text = ssdo::read_file(path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
      return ssdo::demands_from_json(json::parse(text));
    return ssdo::demands_from_csv(text);
  });
}

Instance load_instance(const std::string& topology_path,
                       const std::string& paths_path,
                       const std::string& demands_path) {
  ssdo::NamedTopology named = with_file_context(topology_path, [&] {
    return ssdo::topology_from_json(json::parse(ssdo::read_file(topology_path)));
  });
  ssdo::PathSet paths = with_file_context(paths_path, [&] {
    ssdo::PathSet loaded = ssdo::path_set_from_json(
        json::parse(ssdo::read_file(paths_path)), named.node_names);
    ssdo::validate_path_set(named.topology, loaded);
    return loaded;
  });
  ssdo::DemandMatrix demands = load_demands(demands_path);
  if (demands.node_count() != named.topology.node_count())
    throw ssdo::InvariantViolation(demands_path +
                                   ": demand matrix does not match topology size");
  return {std::move(named), std::move(paths), std::move(demands)};
}

json make_manifest(const std::vector<std::pair<std::string, std::string>>& inputs,
                   const std::vector<std::pair<std::string, std::string>>& outputs,
                   const json& config, std::uint64_t seed) {
  for (const auto& [label, path] : inputs) {
    (void)label;
    if (!fs::exists(path))
      throw ssdo::InvariantViolation("input file does not exist: " + path);
  }
  json m;
  m["schema"] = "run-manifest/1";
  m["tool_version"] = kToolVersion;
  m["seed"] = seed;
  json in = json::object();
  for (const auto& [label, path] : inputs) in[label] = path;
  json out = json::object();
  for (const auto& [label, path] : outputs) out[label] = path;
  m["inputs"] = std::move(in);
  m["outputs"] = std::move(out);
  m["config"] = config;
  return m;
}

void write_json(const fs::path& path, const json& j) {
  ssdo::atomic_write_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string out_dir;
  int complete_n = 0;
  double capacity = 1.0;
  int ring_n = 0;
  std::string graphml;
  double default_capacity = 1.0;
  int paths_per_pair = 0;
  bool all_paths = false;
  double gravity_total = 0.0;
  double noise = 0.0;
  std::string demands_spec;
  std::uint64_t seed = 0;
  int snapshots = 1;
  double walk_sigma = 0.0;
};

int run_gen(const GenArgs& args) {
  fs::create_directories(args.out_dir);
  const fs::path dir(args.out_dir);

  int sources = (args.complete_n > 0) + (args.ring_n > 0) + !args.graphml.empty();
  if (sources != 1)
    throw CLI::ValidationError(
        "gen", "need exactly one of --complete, --ring-deadlock, --graphml");

  json config;
  config["seed"] = args.seed;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;

  if (args.ring_n > 0) {
    ssdo::RingFixture fixture = ssdo::ring_deadlock_fixture(args.ring_n);
    std::vector<std::string> names = default_node_names(args.ring_n);
    config["topology"] = "ring-deadlock";
    config["n"] = args.ring_n;

    write_json(dir / "topology.json",
               ssdo::topology_to_json(fixture.topology, names));
    write_json(dir / "paths.json", ssdo::path_set_to_json(fixture.paths, names));
    ssdo::atomic_write_file(dir / "demands.csv",
                            ssdo::demands_to_csv(fixture.demands));
    write_json(dir / "detour_split.json",
               ssdo::path_split_to_json(fixture.all_detour_split, fixture.paths,
                                        names));
    outputs = {{"topology", (dir / "topology.json").string()},
               {"paths", (dir / "paths.json").string()},
               {"demands", (dir / "demands.csv").string()},
               {"detour_split", (dir / "detour_split.json").string()}};
    write_json(dir / "manifest.json",
               make_manifest(inputs, outputs, config, args.seed));
    std::cout << "wrote ring fixture to " << dir.string() << "\n";
    return 0;
  }

  ssdo::NamedTopology named = [&] {
    if (args.complete_n > 0) {
      config["topology"] = "complete";
      config["n"] = args.complete_n;
      config["capacity"] = args.capacity;
      return ssdo::NamedTopology{
          ssdo::complete_dcn_topology(args.complete_n, args.capacity),
          default_node_names(args.complete_n)};
    }
    config["topology"] = "graphml";
    config["graphml"] = args.graphml;
    config["default_capacity"] = args.default_capacity;
    inputs.emplace_back("graphml", args.graphml);
    return ssdo::topology_from_graphml(ssdo::read_file(args.graphml),
                                       args.default_capacity);
  }();

  const int n = named.topology.node_count();
  int k = args.all_paths ? n - 1 : args.paths_per_pair;
  if (k <= 0)
    throw CLI::ValidationError("gen", "need --paths-per-pair or --all-paths");
  config["paths_per_pair"] = k;

  ssdo::PathSet paths = ssdo::yen_paths_all_pairs(named.topology, k);

  ssdo::DemandMatrix demands = [&]() -> ssdo::DemandMatrix {
    if (args.gravity_total > 0.0) {
      config["demands"] = "gravity";
      config["total_volume"] = args.gravity_total;
      config["noise"] = args.noise;
      return ssdo::gravity_demands(named.topology, args.gravity_total, args.seed,
                                   {.noise_sigma = args.noise});
    }
    if (args.demands_spec == "manual:fig2") {
      if (n != 3)
        throw ssdo::InvariantViolation(
            "manual:fig2 demands need a 3-node topology");
      config["demands"] = args.demands_spec;
      return ssdo::triangle_fixture_demands();
    }
    if (args.demands_spec.rfind("csv:", 0) == 0) {
      std::string file = args.demands_spec.substr(4);
      inputs.emplace_back("demands_csv", file);
      config["demands"] = args.demands_spec;
      ssdo::DemandMatrix d = ssdo::demands_from_csv(ssdo::read_file(file));
      if (d.node_count() != n)
        throw ssdo::InvariantViolation("demand CSV does not match topology size");
      return d;
    }
    throw CLI::ValidationError(
        "gen", "need --gravity or --demands (manual:fig2 or csv:<file>)");
  }();

  write_json(dir / "topology.json",
             ssdo::topology_to_json(named.topology, named.node_names));
  write_json(dir / "paths.json",
             ssdo::path_set_to_json(paths, named.node_names));
  outputs = {{"topology", (dir / "topology.json").string()},
             {"paths", (dir / "paths.json").string()}};

  if (args.snapshots <= 1) {
    ssdo::atomic_write_file(dir / "demands.csv", ssdo::demands_to_csv(demands));
    outputs.emplace_back("demands", (dir / "demands.csv").string());
  } else {
    config["snapshots"] = args.snapshots;
    config["walk_sigma"] = args.walk_sigma;
    auto rng = ssdo::make_rng(args.seed, "series");
    std::normal_distribution<double> normal(0.0, 1.0);
    ssdo::DemandMatrix current = demands;
    for (int t = 0; t < args.snapshots; ++t) {
      char name[32];
      std::snprintf(name, sizeof(name), "demands_%03d.csv", t);
      ssdo::atomic_write_file(dir / name, ssdo::demands_to_csv(current));
      outputs.emplace_back(name, (dir / name).string());
      if (t + 1 < args.snapshots && args.walk_sigma > 0.0) {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            current.set(i, j,
                        current.at(i, j) * std::exp(args.walk_sigma * normal(rng)));
          }
      }
    }
  }

  write_json(dir / "manifest.json",
             make_manifest(inputs, outputs, config, args.seed));
  std::cout << "wrote instance to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string topology, paths, demands;
  std::string form = "auto";
  std::string hot_start;
  bool dual_start = false;
  std::optional<double> budget_seconds;
  bool static_traversal = false;
  double epsilon = 1e-6;
  double epsilon0 = 1e-6;
  std::string report_out;
  std::string split_out;
  std::string util_csv;
};

void write_util_csv(const fs::path& path, const ssdo::Topology& topology,
                    const ssdo::UtilizationState& state,
                    const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "src,dst,capacity,load,util\n";
  for (const ssdo::Edge& e : topology.edges()) {
    out << names[e.src] << ',' << names[e.dst] << ',';
    if (topology.unbounded(e.src, e.dst))
      out << "unbounded";
    else
      out << topology.capacity(e.src, e.dst);
    out << ',' << fmt_double(state.load_at(e.src, e.dst)) << ','
        << fmt_double(state.util_at(e.src, e.dst)) << '\n';
  }
  ssdo::atomic_write_file(path, out.str());
}

int run_solve(const SolveArgs& args) {
  Instance inst = load_instance(args.topology, args.paths, args.demands);
  const auto& names = inst.named.node_names;

  bool dense = args.form == "dense" ||
               (args.form == "auto" && inst.paths.two_hop_only());
  if (args.form == "dense" && !inst.paths.two_hop_only())
    throw ssdo::InvariantViolation(
        "dense form requires one- and two-hop paths only; use --form path");

  ssdo::SolverConfig config;
  config.epsilon = args.epsilon;
  config.epsilon0 = args.epsilon0;
  config.time_budget_seconds = args.budget_seconds;
  config.static_traversal = args.static_traversal;

  json config_echo;
  config_echo["form"] = dense ? "dense" : "path";
  config_echo["epsilon"] = args.epsilon;
  config_echo["epsilon0"] = args.epsilon0;
  if (args.budget_seconds) config_echo["budget_seconds"] = *args.budget_seconds;
  config_echo["static"] = args.static_traversal;
  config_echo["dual_start"] = args.dual_start;

  std::vector<std::pair<std::string, std::string>> inputs = {
      {"topology", args.topology}, {"paths", args.paths},
      {"demands", args.demands}};
  if (!args.hot_start.empty()) inputs.emplace_back("hot_start", args.hot_start);
  std::vector<std::pair<std::string, std::string>> outputs;
  if (!args.report_out.empty()) outputs.emplace_back("report", args.report_out);
  if (!args.split_out.empty()) outputs.emplace_back("split", args.split_out);
  if (!args.util_csv.empty()) outputs.emplace_back("util_csv", args.util_csv);

  // Hot-start files carry either representation; convert as needed.
  std::optional<ssdo::PathSplit> hot_path;
  std::optional<ssdo::SplitTensor> hot_tensor;
  if (!args.hot_start.empty()) {
    with_file_context(args.hot_start, [&] {
      json hot = json::parse(ssdo::read_file(args.hot_start));
      std::string schema = hot.value("schema", "");
      if (schema == "split-tensor/1") {
        hot_tensor = ssdo::split_tensor_from_json(hot, inst.named.topology,
                                                  inst.paths, names);
        if (!dense)
          hot_path = ssdo::path_split_from_tensor(inst.paths, *hot_tensor);
      } else if (schema == "path-split/1") {
        hot_path = ssdo::path_split_from_json(hot, inst.demands, inst.paths, names);
        if (dense) hot_tensor = ssdo::tensor_from_path_split(inst.paths, *hot_path);
      } else {
        throw ssdo::InvariantViolation("unknown hot-start schema: " + schema);
      }
    });
  }
  if (args.dual_start && !hot_tensor && !hot_path)
    throw CLI::ValidationError("solve", "--dual-start requires --hot-start");

  ssdo::SolveReport report;
  json dual_info;
  ssdo::UtilizationState state(inst.named.topology.node_count());
  json split_json;

  if (dense) {
    ssdo::DenseSolveResult result = [&] {
      if (args.dual_start) {
        ssdo::DualStartResult dual = ssdo::run_dual_start(
            inst.named.topology, inst.demands, inst.paths, config, *hot_tensor);
        dual_info["selected"] = dual.cold_selected ? "cold" : "hot";
        dual_info["cold"] = ssdo::report_to_json(dual.cold_report);
        dual_info["hot"] = ssdo::report_to_json(dual.hot_report);
        return std::move(dual.best);
      }
      return ssdo::run(inst.named.topology, inst.demands, inst.paths, config,
                       hot_tensor ? &*hot_tensor : nullptr);
    }();
    report = result.report;
    state = ssdo::compute_utilization(inst.named.topology, inst.demands,
                                      result.split);
    split_json = ssdo::split_tensor_to_json(result.split, names);
  } else {
    ssdo::PathSolveResult result = [&] {
      if (args.dual_start) {
        ssdo::PathDualStartResult dual = ssdo::path_ssdo_dual_start(
            inst.named.topology, inst.demands, inst.paths, config, *hot_path);
        dual_info["selected"] = dual.cold_selected ? "cold" : "hot";
        dual_info["cold"] = ssdo::report_to_json(dual.cold_report);
        dual_info["hot"] = ssdo::report_to_json(dual.hot_report);
        return std::move(dual.best);
      }
      const ssdo::PathSplit initial =
          hot_path ? *hot_path
                   : ssdo::path_cold_start(inst.named.topology, inst.demands,
                                           inst.paths);
      return ssdo::path_ssdo(inst.named.topology, inst.demands, inst.paths,
                             initial, config);
    }();
    report = result.report;
    state = ssdo::path_utilization(inst.named.topology, inst.demands, inst.paths,
                                   result.split);
    split_json = ssdo::path_split_to_json(result.split, inst.paths, names);
  }

  if (!args.split_out.empty()) write_json(args.split_out, split_json);
  if (!args.util_csv.empty())
    write_util_csv(args.util_csv, inst.named.topology, state, names);
  if (!args.report_out.empty()) {
    json rj = ssdo::report_to_json(report);
    if (!dual_info.is_null()) rj["dual_start"] = dual_info;
    rj["manifest"] = make_manifest(inputs, outputs, config_echo, 0);
    write_json(args.report_out, rj);
  }

  std::cout << "final_mlu=" << report.final_mlu << " termination="
            << (report.termination == ssdo::Termination::converged
                    ? "converged"
                    : "budget_exhausted")
            << " iterations=" << report.iterations
            << " sd_updates=" << report.sd_updates << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// experiment failures

struct FailureArgs {
  std::string topology, paths, demands, out;
  std::string counts = "1,2,4";
  int trials = 3;
  std::uint64_t seed = 0;
  bool normalize = false;
  int retry_cap = 20;
  int paths_per_pair = 0;  // 0: infer from the path-set file
};

int run_failures(const FailureArgs& args) {
  Instance inst = load_instance(args.topology, args.paths, args.demands);
  const int n = inst.named.topology.node_count();

  int k = args.paths_per_pair;
  if (k <= 0)
    for (int s = 0; s < n; ++s)
      for (int d = 0; d < n; ++d)
        k = std::max(k, static_cast<int>(inst.paths.paths(s, d).size()));
  if (k <= 0) throw ssdo::InvariantViolation("path set is empty");

  ssdo::SolverConfig config;
  auto solve_mlu = [&](const ssdo::Topology& topology,
                       const ssdo::PathSet& paths) {
    if (paths.two_hop_only())
      return ssdo::run(topology, inst.demands, paths, config).report.final_mlu;
    return ssdo::path_ssdo(topology, inst.demands, paths,
                           ssdo::path_cold_start(topology, inst.demands, paths),
                           config)
        .report.final_mlu;
  };

  const double baseline = solve_mlu(inst.named.topology, inst.paths);
  const std::vector<ssdo::Edge> all_edges = inst.named.topology.edges();
  const auto& names = inst.named.node_names;

  std::ostringstream out;
  out << "count,trial,removed_edges,status,mlu,normalized_mlu\n";

  for (const std::string& count_str : split_list(args.counts)) {
    const int count = std::stoi(count_str);
    if (count < 0 || count > static_cast<int>(all_edges.size()))
      throw ssdo::InvariantViolation("failure count out of range");
    for (int trial = 0; trial < args.trials; ++trial) {
      auto rng = ssdo::make_rng(args.seed, "failures/" + count_str + "/" +
                                               std::to_string(trial));
      bool done = false;
      for (int attempt = 0; attempt < args.retry_cap && !done; ++attempt) {
        std::vector<ssdo::Edge> pool = all_edges;
        std::shuffle(pool.begin(), pool.end(), rng);
        ssdo::FailureScenario scenario{{pool.begin(), pool.begin() + count}};
        std::sort(scenario.removed_edges.begin(), scenario.removed_edges.end());
        try {
          ssdo::Topology failed =
              ssdo::apply_failures(inst.named.topology, scenario, inst.demands);
          ssdo::PathSet failed_paths = ssdo::yen_paths_all_pairs(failed, k);
          double mlu = solve_mlu(failed, failed_paths);
          std::string removed;
          for (const ssdo::Edge& e : scenario.removed_edges) {
            if (!removed.empty()) removed += ';';
            removed += names[e.src] + "->" + names[e.dst];
          }
          out << count << ',' << trial << ',' << removed << ",ok,"
              << fmt_double(mlu) << ',';
          if (args.normalize) out << fmt_double(mlu / baseline);
          out << '\n';
          done = true;
        } catch (const ssdo::DisconnectsError&) {
          // resample
        }
      }
      if (!done) out << count << ',' << trial << ",,skipped,,\n";
    }
  }
  ssdo::atomic_write_file(args.out, out.str());
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// experiment perturb

struct PerturbArgs {
  std::string topology, paths, out;
  std::string series;  // comma-separated demand CSVs, snapshot order
  std::string scales = "2,5,20";
  std::uint64_t seed = 0;
  bool normalize = false;
};

int run_perturb(const PerturbArgs& args) {
  ssdo::NamedTopology named =
      ssdo::topology_from_json(json::parse(ssdo::read_file(args.topology)));
  ssdo::PathSet paths = ssdo::path_set_from_json(
      json::parse(ssdo::read_file(args.paths)), named.node_names);
  ssdo::validate_path_set(named.topology, paths);

  ssdo::DemandSeries series;
  series.interval_label = "snapshot";
  for (const std::string& file : split_list(args.series))
    series.snapshots.push_back(load_demands(file));
  if (series.snapshots.size() < 2)
    throw ssdo::InvariantViolation("--series needs at least two snapshot files");

  ssdo::SolverConfig config;
  auto solve_mlu = [&](const ssdo::DemandMatrix& demands) {
    if (paths.two_hop_only())
      return ssdo::run(named.topology, demands, paths, config).report.final_mlu;
    return ssdo::path_ssdo(named.topology, demands, paths,
                           ssdo::path_cold_start(named.topology, demands, paths),
                           config)
        .report.final_mlu;
  };

  std::vector<double> baseline;
  if (args.normalize)
    for (const auto& snap : series.snapshots) baseline.push_back(solve_mlu(snap));

  std::ostringstream out;
  out << "scale,snapshot,mlu,normalized_mlu\n";
  for (const std::string& scale_str : split_list(args.scales)) {
    const double scale = std::stod(scale_str);
    ssdo::DemandSeries perturbed = ssdo::perturb_series(
        series, scale, ssdo::stream_key(args.seed, "perturb-scale-" + scale_str));
    for (std::size_t t = 0; t < perturbed.snapshots.size(); ++t) {
      double mlu = solve_mlu(perturbed.snapshots[t]);
      out << scale_str << ',' << t << ',' << fmt_double(mlu) << ',';
      if (args.normalize) out << fmt_double(mlu / baseline[t]);
      out << '\n';
    }
  }
  ssdo::atomic_write_file(args.out, out.str());
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
  std::string topology, paths, demands, out;
  double step = 1e-2;
};

int run_oracle(const OracleArgs& args) {
  Instance inst = load_instance(args.topology, args.paths, args.demands);
  ssdo::OracleResult result = ssdo::grid_global_optimum(
      inst.named.topology, inst.demands, inst.paths, args.step);

  json j;
  j["schema"] = "oracle-result/1";
  j["optimal_mlu"] = result.optimal_mlu;
  j["grid_step"] = result.grid_step;
  j["argmin"] = ssdo::path_split_to_json(result.argmin, inst.paths,
                                         inst.named.node_names);
  json config;
  config["step"] = args.step;
  j["manifest"] = make_manifest({{"topology", args.topology},
                                 {"paths", args.paths},
                                 {"demands", args.demands}},
                                {{"result", args.out}}, config, 0);
  write_json(args.out, j);
  std::cout << "optimal_mlu=" << result.optimal_mlu << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver-free traffic-engineering optimizer (minimizes MLU)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("ssdo ") + kToolVersion);

  GenArgs gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "Generate topology, path-set and demand files");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--complete", gen.complete_n, "Complete graph on N nodes");
  gen_cmd->add_option("--capacity", gen.capacity, "Uniform edge capacity");
  gen_cmd->add_option("--ring-deadlock", gen.ring_n, "Ring fixture on N nodes");
  gen_cmd->add_option("--graphml", gen.graphml, "Import a GraphML topology");
  gen_cmd->add_option("--default-capacity", gen.default_capacity,
                      "Capacity for GraphML edges without one");
  gen_cmd->add_option("--paths-per-pair", gen.paths_per_pair,
                      "Candidate paths per pair (Yen)");
  gen_cmd->add_flag("--all-paths", gen.all_paths,
                    "Use |V|-1 candidate paths per pair");
  gen_cmd->add_option("--gravity,--total-volume", gen.gravity_total,
                      "Gravity demands with this total volume");
  gen_cmd->add_option("--noise", gen.noise,
                      "Multiplicative noise sigma for gravity demands");
  gen_cmd->add_option("--demands", gen.demands_spec,
                      "Demand source: manual:fig2 or csv:<file>");
  gen_cmd->add_option("--seed", gen.seed, "Seed for all randomness");
  gen_cmd->add_option("--snapshots", gen.snapshots,
                      "Emit a demand series of this length");
  gen_cmd->add_option("--walk-sigma", gen.walk_sigma,
                      "Per-step multiplicative drift of the series");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Optimize split ratios");
  solve_cmd->add_option("--topology", solve.topology)->required();
  solve_cmd->add_option("--paths", solve.paths)->required();
  solve_cmd->add_option("--demands", solve.demands)->required();
  solve_cmd->add_option("--form", solve.form, "dense|path|auto")
      ->check(CLI::IsMember({"dense", "path", "auto"}));
  solve_cmd->add_option("--hot-start", solve.hot_start,
                        "Initial split file (tensor or path form)");
  solve_cmd->add_flag("--dual-start", solve.dual_start,
                      "Run cold and hot starts, keep the better result");
  double budget = 0.0;
  CLI::Option* budget_opt =
      solve_cmd->add_option("--budget-seconds", budget, "Wall-clock budget");
  solve_cmd->add_flag("--static", solve.static_traversal,
                      "Visit every demanded pair each iteration");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Subproblem tolerance");
  solve_cmd->add_option("--epsilon0", solve.epsilon0, "Termination threshold");
  solve_cmd->add_option("--report", solve.report_out, "Report JSON output");
  solve_cmd->add_option("--split-out", solve.split_out, "Split JSON output");
  solve_cmd->add_option("--util-csv", solve.util_csv,
                        "Per-edge utilization CSV output");

  FailureArgs failures;
  PerturbArgs perturb;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "Batch sweeps");
  exp_cmd->require_subcommand(1);
  CLI::App* fail_cmd =
      exp_cmd->add_subcommand("failures", "Random link-failure sweep");
  fail_cmd->add_option("--topology", failures.topology)->required();
  fail_cmd->add_option("--paths", failures.paths)->required();
  fail_cmd->add_option("--demands", failures.demands)->required();
  fail_cmd->add_option("--out", failures.out, "Output CSV")->required();
  fail_cmd->add_option("--counts", failures.counts, "Failure counts, e.g. 1,2,4");
  fail_cmd->add_option("--trials", failures.trials, "Trials per count");
  fail_cmd->add_option("--seed", failures.seed);
  fail_cmd->add_flag("--normalize", failures.normalize,
                     "Also report MLU relative to the unfailed solve");
  fail_cmd->add_option("--retry-cap", failures.retry_cap,
                       "Resample limit for disconnecting scenarios");
  fail_cmd->add_option("--paths-per-pair", failures.paths_per_pair,
                       "Paths per pair when recomputing (default: inferred)");

  CLI::App* pert_cmd =
      exp_cmd->add_subcommand("perturb", "Demand perturbation sweep");
  pert_cmd->add_option("--topology", perturb.topology)->required();
  pert_cmd->add_option("--paths", perturb.paths)->required();
  pert_cmd->add_option("--series", perturb.series,
                       "Comma-separated demand CSVs in snapshot order")
      ->required();
  pert_cmd->add_option("--out", perturb.out, "Output CSV")->required();
  pert_cmd->add_option("--scales", perturb.scales, "Variance scales, e.g. 2,5,20");
  pert_cmd->add_option("--seed", perturb.seed);
  pert_cmd->add_flag("--normalize", perturb.normalize,
                     "Also report MLU relative to the unperturbed solve");

  OracleArgs oracle;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Exhaustive grid optimum (desk scale)");
  oracle_cmd->add_option("--topology", oracle.topology)->required();
  oracle_cmd->add_option("--paths", oracle.paths)->required();
  oracle_cmd->add_option("--demands", oracle.demands)->required();
  oracle_cmd->add_option("--step", oracle.step, "Grid step");
  oracle_cmd->add_option("--out", oracle.out, "Result JSON output")->required();

  try {
    app.parse(argc, argv);
    if (budget_opt->count() > 0) solve.budget_seconds = budget;

    if (gen_cmd->parsed()) return run_gen(gen);
    if (solve_cmd->parsed()) return run_solve(solve);
    if (exp_cmd->parsed()) {
      if (fail_cmd->parsed()) return run_failures(failures);
      if (pert_cmd->parsed()) return run_perturb(perturb);
    }
    if (oracle_cmd->parsed()) return run_oracle(oracle);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const ssdo::NoPathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ssdo::DisconnectsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ssdo::NeverFeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ssdo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
