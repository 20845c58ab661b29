#include "dimp/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "dimp/error.hpp"
#include "dimp/rr_collection.hpp"
#include "dimp/synthetic.hpp"
#include "dimp/update_batch.hpp"
#include "json.hpp"

namespace dimp {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::size_t as_count(const json& value, const std::string& key) {
  if (!value.is_number_unsigned()) throw ArgumentError("config: '" + key + "' must be a non-negative integer");
  return value.get<std::size_t>();
}

double as_real(const json& value, const std::string& key) {
  if (!value.is_number()) throw ArgumentError("config: '" + key + "' must be a number");
  return value.get<double>();
}

std::string as_string(const json& value, const std::string& key) {
  if (!value.is_string()) throw ArgumentError("config: '" + key + "' must be a string");
  return value.get<std::string>();
}

std::string_view mode_name(SampleSizeMode mode) {
  return mode == SampleSizeMode::kFixed ? "fixed" : "doubling";
}

std::string format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

std::vector<std::int64_t> original_ids(const Graph& g, const std::vector<NodeId>& nodes) {
  std::vector<std::int64_t> ids;
  ids.reserve(nodes.size());
  for (NodeId v : nodes) ids.push_back(g.original_id(v));
  return ids;
}

void save_collection_file(const ExperimentConfig& config, const RRCollection& c, Algorithm a,
                          std::size_t count, std::size_t repeat, std::size_t t) {
  const auto dir = std::filesystem::path(config.output_dir) / "collections";
  std::filesystem::create_directories(dir);
  const auto path = dir / (std::string(algorithm_tag(a)) + "_u" + std::to_string(count) + "_r" +
                           std::to_string(repeat) + "_t" + std::to_string(t) + ".json");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  save_collection(out, c);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (k < 1) throw ArgumentError("config: k must be at least 1");
  if (r_mc < 1) throw ArgumentError("config: r_mc must be at least 1");
  if (repeats < 1) throw ArgumentError("config: repeats must be at least 1");
  if (weight_model != "wc") throw ArgumentError("config: unsupported weight_model '" + weight_model + "'");
  if (!(epsilon > 0.0)) throw ArgumentError("config: epsilon must be positive");
  if (!(lambda >= 0.0)) throw ArgumentError("config: lambda must be non-negative");
  if (threads < 1) throw ArgumentError("config: threads must be at least 1");
  if (sample_size.mode == SampleSizeMode::kFixed && sample_size.fixed_size < 1)
    throw ArgumentError("config: sample_size must be at least 1");
  if (sample_size.min_size < 1 || sample_size.min_size > sample_size.max_size)
    throw ArgumentError("config: need 1 <= min_sample_size <= max_sample_size");
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  if (!doc.is_object()) throw ParseError("config: top level must be an object", 0);

  ExperimentConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "graph_path") c.graph_path = as_string(value, key);
    else if (key == "weight_model") c.weight_model = as_string(value, key);
    else if (key == "k") c.k = as_count(value, key);
    else if (key == "epsilon") c.epsilon = c.sample_size.epsilon = as_real(value, key);
    else if (key == "ell") c.ell = c.sample_size.ell = as_real(value, key);
    else if (key == "r_mc") c.r_mc = as_count(value, key);
    else if (key == "repeats") c.repeats = as_count(value, key);
    else if (key == "update_counts") {
      if (!value.is_array()) throw ArgumentError("config: 'update_counts' must be an array");
      c.update_counts.clear();
      for (const auto& item : value) c.update_counts.push_back(as_count(item, key));
    } else if (key == "timesteps") c.timesteps = as_count(value, key);
    else if (key == "master_seed") c.master_seed = as_count(value, key);
    else if (key == "lambda") c.lambda = as_real(value, key);
    else if (key == "sample_size_mode") {
      const std::string mode = as_string(value, key);
      if (mode == "fixed") c.sample_size.mode = SampleSizeMode::kFixed;
      else if (mode == "doubling") c.sample_size.mode = SampleSizeMode::kDoubling;
      else throw ArgumentError("config: sample_size_mode must be 'fixed' or 'doubling'");
    } else if (key == "sample_size") c.sample_size.fixed_size = as_count(value, key);
    else if (key == "c0") c.sample_size.c0 = as_real(value, key);
    else if (key == "stability_threshold") c.sample_size.stability_threshold = as_real(value, key);
    else if (key == "min_sample_size") c.sample_size.min_size = as_count(value, key);
    else if (key == "max_sample_size") c.sample_size.max_size = as_count(value, key);
    else if (key == "output_dir") c.output_dir = as_string(value, key);
    else if (key == "threads") c.threads = as_count(value, key);
    else if (key == "save_collections") {
      if (!value.is_boolean()) throw ArgumentError("config: 'save_collections' must be a boolean");
      c.save_collections = value.get<bool>();
    } else if (key == "synthetic_nodes") c.synthetic_nodes = as_count(value, key);
    else if (key == "synthetic_edges_per_node") c.synthetic_edges_per_node = as_count(value, key);
    else throw ArgumentError("config: unknown key '" + key + "'");
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  const json doc = {
      {"graph_path", c.graph_path},
      {"weight_model", c.weight_model},
      {"k", c.k},
      {"epsilon", c.epsilon},
      {"ell", c.ell},
      {"r_mc", c.r_mc},
      {"repeats", c.repeats},
      {"update_counts", c.update_counts},
      {"timesteps", c.timesteps},
      {"master_seed", c.master_seed},
      {"lambda", c.lambda},
      {"sample_size_mode", mode_name(c.sample_size.mode)},
      {"sample_size", c.sample_size.fixed_size},
      {"c0", c.sample_size.c0},
      {"stability_threshold", c.sample_size.stability_threshold},
      {"min_sample_size", c.sample_size.min_size},
      {"max_sample_size", c.sample_size.max_size},
      {"output_dir", c.output_dir},
      {"threads", c.threads},
      {"save_collections", c.save_collections},
      {"synthetic_nodes", c.synthetic_nodes},
      {"synthetic_edges_per_node", c.synthetic_edges_per_node},
  };
  return doc.dump(2);
}

std::string_view algorithm_tag(Algorithm a) {
  return a == Algorithm::kStatic ? "static" : "dynamic-reuse";
}

UpdateBatch experiment_batch(const Graph& g, const ExperimentConfig& config,
                             std::size_t update_count, std::size_t repeat, std::size_t timestep) {
  Rng rng = Rng::substream(config.master_seed, {stream::kUpdates, update_count, repeat, timestep});
  return generate_random_updates(g, update_count, rng, static_cast<std::int64_t>(timestep));
}

Graph load_experiment_graph(const ExperimentConfig& config) {
  if (config.graph_path.empty())
    return assign_wc_weights(generate_synthetic_graph(
        config.synthetic_nodes, config.synthetic_edges_per_node, config.master_seed));
  const EdgeListLoad load = load_edge_list_file(config.graph_path);
  return assign_wc_weights(load.graph);
}

std::vector<RunRecord> run_experiment(const Graph& g0, const ExperimentConfig& config,
                                      const RunPlan& plan, const RecordSink& sink) {
  config.validate();
  if (!g0.has_weights()) throw ArgumentError("run_experiment: graph has no weights");
  std::vector<RunRecord> records;
  auto emit = [&](RunRecord r) {
    if (sink) sink(r);
    records.push_back(std::move(r));
  };

  SampleSizePolicy policy = config.sample_size;
  policy.epsilon = config.epsilon;
  policy.ell = config.ell;
  const BuildOptions build{config.threads};
  const MixOptions mix{config.lambda, config.threads};

  auto evaluate = [&](const Graph& g, const SelectionResult& sel, std::size_t count,
                      std::size_t repeat, std::size_t t) {
    Rng rng = Rng::substream(config.master_seed, {stream::kMonteCarlo, count, repeat, t});
    return estimate_influence_mc(g, SeedSet::of(sel.seeds), config.r_mc, rng);
  };

  for (std::size_t count : config.update_counts) {
    for (std::size_t repeat = 0; repeat < config.repeats; ++repeat) {
      Graph g = g0;

      auto solve_static = [&](std::size_t t) {
        const auto start = Clock::now();
        const std::uint64_t seed = derive_seed(config.master_seed, {stream::kBuild, count, repeat, t});
        const std::size_t n_r = decide_sample_size(g, config.k, policy, seed, build);
        RRCollection c = build_collection(g, n_r, seed, build);
        SelectionResult sel = greedy_select(c, config.k);
        const double elapsed = ms_since(start);
        return std::tuple{std::move(c), std::move(sel), elapsed};
      };

      auto [collection, selection, elapsed] = solve_static(0);
      const InfluenceEstimate influence0 = evaluate(g, selection, count, repeat, 0);
      for (Algorithm a : {Algorithm::kStatic, Algorithm::kDynamicReuse}) {
        if ((a == Algorithm::kStatic && !plan.run_static) ||
            (a == Algorithm::kDynamicReuse && !plan.run_dynamic))
          continue;
        RunRecord r;
        r.algorithm = a;
        r.update_count = count;
        r.repeat = repeat;
        r.timestep = 0;
        r.sample_size = collection.size();
        r.wall_time_ms = elapsed;
        r.influence = influence0;
        r.rr_estimate = selection.rr_influence_estimate;
        r.seeds = original_ids(g, selection.seeds);
        if (config.save_collections) save_collection_file(config, collection, a, count, repeat, 0);
        emit(std::move(r));
      }
      RRCollection dynamic_collection;
      if (plan.run_dynamic) dynamic_collection = std::move(collection);

      for (std::size_t t = 1; t <= config.timesteps; ++t) {
        const UpdateBatch batch = experiment_batch(g, config, count, repeat, t);
        g = apply_update_batch(g, batch);

        if (plan.run_static) {
          auto [c, sel, ms] = solve_static(t);
          RunRecord r;
          r.algorithm = Algorithm::kStatic;
          r.update_count = count;
          r.repeat = repeat;
          r.timestep = t;
          r.sample_size = c.size();
          r.wall_time_ms = ms;
          r.influence = evaluate(g, sel, count, repeat, t);
          r.rr_estimate = sel.rr_influence_estimate;
          r.seeds = original_ids(g, sel.seeds);
          if (config.save_collections) save_collection_file(config, c, r.algorithm, count, repeat, t);
          emit(std::move(r));
        }
        if (plan.run_dynamic) {
          const auto start = Clock::now();
          const std::size_t n_r = dynamic_collection.size();
          MixResult mixed = mix_collection(std::move(dynamic_collection), g, batch, n_r, mix);
          SelectionResult sel = greedy_select(mixed.collection, config.k);
          const double ms = ms_since(start);
          dynamic_collection = std::move(mixed.collection);

          RunRecord r;
          r.algorithm = Algorithm::kDynamicReuse;
          r.update_count = count;
          r.repeat = repeat;
          r.timestep = t;
          r.sample_size = dynamic_collection.size();
          r.wall_time_ms = ms;
          r.influence = evaluate(g, sel, count, repeat, t);
          r.rr_estimate = sel.rr_influence_estimate;
          r.reuse = mixed.stats;
          r.seeds = original_ids(g, sel.seeds);
          if (config.save_collections)
            save_collection_file(config, dynamic_collection, r.algorithm, count, repeat, t);
          emit(std::move(r));
        }
      }
    }
  }
  return records;
}

void write_runs_csv_header(std::ostream& out) {
  out << "algorithm,update_count,repeat,timestep,sample_size,wall_time_ms,influence_mc_mean,"
         "influence_mc_stderr,rr_estimate,kept,resampled_accepted,fresh,ratio_fast_path_hits,"
         "kept_fraction,seeds\n";
}

void write_run_csv_row(std::ostream& out, const RunRecord& r) {
  out << algorithm_tag(r.algorithm) << ',' << r.update_count << ',' << r.repeat << ','
      << r.timestep << ',' << r.sample_size << ',' << format("%.3f", r.wall_time_ms) << ','
      << format("%.4f", r.influence.mean) << ',' << format("%.6f", r.influence.standard_error)
      << ',' << format("%.4f", r.rr_estimate) << ',';
  if (r.reuse) {
    out << r.reuse->kept << ',' << r.reuse->resampled_accepted << ',' << r.reuse->fresh << ','
        << r.reuse->ratio_fast_path_hits << ',' << format("%.6f", r.reuse->kept_fraction());
  } else {
    out << ",,,,";
  }
  out << ',';
  for (std::size_t i = 0; i < r.seeds.size(); ++i) out << (i ? " " : "") << r.seeds[i];
  out << '\n';
}

std::string mix_stats_json(const MixStats& s) {
  const json doc = {
      {"kept", s.kept},
      {"resampled_accepted", s.resampled_accepted},
      {"fresh", s.fresh},
      {"ratio_fast_path_hits", s.ratio_fast_path_hits},
      {"wall_time_ms", s.wall_time_ms},
  };
  return doc.dump();
}

SeedSet read_seed_file(std::istream& in, const Graph& g) {
  std::vector<NodeId> nodes;
  std::unordered_set<NodeId> seen;
  std::string token;
  while (in >> token) {
    std::int64_t raw = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), raw);
    if (ec != std::errc() || end != token.data() + token.size())
      throw ArgumentError("seeds: '" + token + "' is not an integer node id");
    const auto v = g.node_of(raw);
    if (!v) throw ArgumentError("seeds: unknown node id " + token);
    if (!seen.insert(*v).second) throw ArgumentError("seeds: duplicate node id " + token);
    nodes.push_back(*v);
  }
  if (nodes.empty()) throw ArgumentError("seeds: no node ids given");
  return SeedSet::of(std::move(nodes));
}

}  // namespace dimp
