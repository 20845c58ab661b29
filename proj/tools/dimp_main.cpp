// dimp: command-line harness for static vs. dynamic-reuse influence maximization runs.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 usage or config error, 3 I/O error,
// 4 malformed or inconsistent input data.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dimp/diffusion.hpp"
#include "dimp/error.hpp"
#include "dimp/experiment.hpp"
#include "dimp/graph.hpp"
#include "dimp/random.hpp"
#include "dimp/synthetic.hpp"
#include "dimp/update_batch.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kData = 4 };

struct Overrides {
  std::string config_path;
  std::string graph_path;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> updates;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--graph", o.graph_path, "edge list (overrides graph_path)");
  cmd->add_option("--k", o.k, "seed budget");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--updates", o.updates, "update counts")->delimiter(',');
  cmd->add_option("--out", o.out, "output directory");
}

dimp::ExperimentConfig resolve_config(const Overrides& o) {
  dimp::ExperimentConfig c =
      o.config_path.empty() ? dimp::ExperimentConfig{} : dimp::load_config_file(o.config_path);
  if (!o.graph_path.empty()) c.graph_path = o.graph_path;
  if (o.k) c.k = *o.k;
  if (o.seed) c.master_seed = *o.seed;
  if (!o.updates.empty()) c.update_counts = o.updates;
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dimp::IoError("cannot write " + path.string());
  return out;
}

int run_pipeline(const Overrides& o, dimp::RunPlan plan) {
  const dimp::ExperimentConfig config = resolve_config(o);
  const dimp::Graph g = dimp::load_experiment_graph(config);
  const fs::path out_dir = config.output_dir;

  std::ofstream csv = open_output(out_dir / "runs.csv");
  dimp::write_runs_csv_header(csv);
  nlohmann::json records = nlohmann::json::array();

  dimp::run_experiment(g, config, plan, [&](const dimp::RunRecord& r) {
    dimp::write_run_csv_row(csv, r);
    csv.flush();
    nlohmann::json row = {
        {"algorithm", dimp::algorithm_tag(r.algorithm)},
        {"update_count", r.update_count},
        {"repeat", r.repeat},
        {"timestep", r.timestep},
        {"sample_size", r.sample_size},
        {"wall_time_ms", r.wall_time_ms},
        {"influence_mc_mean", r.influence.mean},
        {"influence_mc_stderr", r.influence.standard_error},
        {"rr_estimate", r.rr_estimate},
        {"seeds", r.seeds},
    };
    if (r.reuse) row["reuse"] = nlohmann::json::parse(dimp::mix_stats_json(*r.reuse));
    records.push_back(std::move(row));
    std::fprintf(stderr, "%s u=%zu rep=%zu t=%zu  %.1f ms  influence %.2f\n",
                 std::string(dimp::algorithm_tag(r.algorithm)).c_str(), r.update_count, r.repeat,
                 r.timestep, r.wall_time_ms, r.influence.mean);
  });
  if (!csv) throw dimp::IoError("write error on runs.csv");

  std::ofstream sidecar = open_output(out_dir / "runs.json");
  const nlohmann::json doc = {
      {"config", nlohmann::json::parse(dimp::config_to_json(config))},
      {"graph", {{"nodes", g.node_count()}, {"edges", g.edge_count()}}},
      {"records", std::move(records)},
  };
  sidecar << doc.dump(2) << '\n';
  std::printf("wrote %s\n", (out_dir / "runs.csv").string().c_str());
  return kOk;
}

int gen_updates(const Overrides& o) {
  const dimp::ExperimentConfig config = resolve_config(o);
  const dimp::Graph g = dimp::load_experiment_graph(config);
  for (std::size_t count : config.update_counts) {
    const dimp::UpdateBatch batch = dimp::experiment_batch(g, config, count, 0, 1);
    const fs::path path = fs::path(config.output_dir) / ("updates_" + std::to_string(count) + ".csv");
    std::ofstream out = open_output(path);
    dimp::write_update_batch_csv(out, g, batch);
    if (!out) throw dimp::IoError("write error on " + path.string());
    std::printf("wrote %s (%zu rows)\n", path.string().c_str(), batch.size());
  }
  return kOk;
}

int evaluate(const Overrides& o, const std::string& seeds_path, std::size_t r) {
  dimp::ExperimentConfig config = o.config_path.empty() ? dimp::ExperimentConfig{}
                                                        : dimp::load_config_file(o.config_path);
  if (!o.graph_path.empty()) config.graph_path = o.graph_path;
  if (o.seed) config.master_seed = *o.seed;
  const dimp::Graph g = dimp::load_experiment_graph(config);

  std::ifstream in(seeds_path);
  if (!in) throw dimp::IoError("cannot open seeds file: " + seeds_path);
  const dimp::SeedSet seeds = dimp::read_seed_file(in, g);
  dimp::Rng rng = dimp::Rng::substream(config.master_seed, {dimp::stream::kMonteCarlo});
  const dimp::InfluenceEstimate est = dimp::estimate_influence_mc(g, seeds, r, rng);
  std::printf("seeds=%zu runs=%zu mean=%.4f stderr=%.6f\n", seeds.size(), est.runs, est.mean,
              est.standard_error);
  return kOk;
}

int gen_graph(std::size_t nodes, std::size_t per_node, std::uint64_t seed, const std::string& out) {
  const dimp::Graph g = dimp::generate_synthetic_graph(nodes, per_node, seed);
  const fs::path path = fs::path(out.empty() ? "out" : out) / "graph.txt";
  std::ofstream file = open_output(path);
  dimp::write_edge_list(file, g);
  if (!file) throw dimp::IoError("write error on " + path.string());
  std::printf("wrote %s (n=%zu, m=%zu)\n", path.string().c_str(), g.node_count(), g.edge_count());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic influence maximization with RR-set reuse"};
  app.require_subcommand(1);

  Overrides o;
  auto* run_static = app.add_subcommand("run-static", "rebuild from scratch at every timestep");
  auto* run_dynamic = app.add_subcommand("run-dynamic", "mix the previous collection forward");
  auto* updates = app.add_subcommand("gen-updates", "write the generated update batches as CSV");
  auto* eval = app.add_subcommand("evaluate", "Monte Carlo influence of a seed list");
  auto* graph = app.add_subcommand("gen-graph", "write a synthetic preferential-attachment graph");
  for (auto* cmd : {run_static, run_dynamic, updates, eval}) add_common(cmd, o);

  std::string seeds_path;
  std::size_t r = 10'000;
  eval->add_option("--seeds", seeds_path, "whitespace-separated node ids")->required();
  eval->add_option("--r", r, "Monte Carlo runs")->check(CLI::PositiveNumber);

  std::size_t nodes = 30'000;
  std::size_t per_node = 11;
  std::uint64_t graph_seed = 1;
  graph->add_option("--nodes", nodes, "node count")->check(CLI::PositiveNumber);
  graph->add_option("--edges-per-node", per_node, "attachment edges per new node");
  graph->add_option("--seed", graph_seed, "generator seed");
  graph->add_option("--out", o.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_static) return run_pipeline(o, {true, false});
    if (*run_dynamic) return run_pipeline(o, {false, true});
    if (*updates) return gen_updates(o);
    if (*eval) return evaluate(o, seeds_path, r);
    if (*graph) return gen_graph(nodes, per_node, graph_seed, o.out);
  } catch (const dimp::IoError& e) {
    std::fprintf(stderr, "dimp: %s\n", e.what());
    return kIo;
  } catch (const dimp::ArgumentError& e) {
    std::fprintf(stderr, "dimp: %s\n", e.what());
    return kUsage;
  } catch (const dimp::Error& e) {
    std::fprintf(stderr, "dimp: %s\n", e.what());
    return kData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dimp: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
