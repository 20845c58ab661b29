#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimp/diffusion.hpp"
#include "dimp/graph.hpp"
#include "dimp/reuse_mixing.hpp"
#include "dimp/seed_selection.hpp"

namespace dimp {

/// Everything a run needs. JSON keys match the field names; the sample size
/// policy is flattened into sample_size_mode, sample_size, c0,
/// stability_threshold, min_sample_size and max_sample_size.
struct ExperimentConfig {
  std::string graph_path;
  std::string weight_model = "wc";
  std::size_t k = 50;
  double epsilon = 0.1;
  double ell = 1.0;
  std::size_t r_mc = 10'000;
  std::size_t repeats = 10;
  std::vector<std::size_t> update_counts{1'000, 10'000};
  std::size_t timesteps = 1;
  std::uint64_t master_seed = 1;
  double lambda = kDefaultLambda;
  SampleSizePolicy sample_size;
  std::string output_dir = "out";
  std::size_t threads = 1;
  bool save_collections = false;
  std::size_t synthetic_nodes = 30'000;
  std::size_t synthetic_edges_per_node = 11;

  /// Throws ArgumentError on k, r_mc or repeats below 1 and other bad values.
  void validate() const;
};

/// Parses a flat JSON object; unknown keys and wrong types are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

enum class Algorithm { kStatic, kDynamicReuse };
std::string_view algorithm_tag(Algorithm a);

struct RunRecord {
  Algorithm algorithm = Algorithm::kStatic;
  std::size_t update_count = 0;
  std::size_t repeat = 0;
  std::size_t timestep = 0;
  std::size_t sample_size = 0;
  /// Sample-size decision, collection build or mix, and greedy selection only.
  double wall_time_ms = 0.0;
  InfluenceEstimate influence;
  double rr_estimate = 0.0;
  std::optional<MixStats> reuse;
  std::vector<std::int64_t> seeds;  // original ids, selection order
};

struct RunPlan {
  bool run_static = true;
  bool run_dynamic = true;
};

using RecordSink = std::function<void(const RunRecord&)>;

/// For every update count and repeat: timestep 0 solves from scratch, each
/// later timestep applies a generated batch and either rebuilds (static) or
/// mixes the previous collection forward (dynamic). Both algorithms see the
/// same batches and the same Monte Carlo streams. `g0` must carry weights.
std::vector<RunRecord> run_experiment(const Graph& g0, const ExperimentConfig& config,
                                      const RunPlan& plan, const RecordSink& sink = {});

/// The batch applied at `timestep` of repeat `repeat` for `update_count`.
UpdateBatch experiment_batch(const Graph& g, const ExperimentConfig& config,
                             std::size_t update_count, std::size_t repeat, std::size_t timestep);

/// Loads graph_path and applies the configured weight model. Without a path the
/// synthetic generator runs with synthetic_nodes, synthetic_edges_per_node and
/// master_seed.
Graph load_experiment_graph(const ExperimentConfig& config);

void write_runs_csv_header(std::ostream& out);
void write_run_csv_row(std::ostream& out, const RunRecord& record);
std::string mix_stats_json(const MixStats& stats);

/// Whitespace-separated original node ids. Throws ArgumentError on unknown
/// ids, duplicates or an empty list.
SeedSet read_seed_file(std::istream& in, const Graph& g);

}  // namespace dimp
