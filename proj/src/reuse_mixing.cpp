#include "dimp/reuse_mixing.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <string>

#include "dimp/error.hpp"
#include "dimp/parallel.hpp"

namespace dimp {
namespace {

double dead_factor(double old_p, double new_p, double lambda) {
  return (1.0 - new_p + lambda) / (1.0 - old_p + lambda);
}

double bfs_factor(double old_p, double new_p, double lambda) {
  return ((new_p + lambda) / (old_p + lambda)) * ((1.0 - old_p + lambda) / (1.0 - new_p + lambda));
}

enum class Decision : std::uint8_t { kKept, kAccepted, kRejected };

struct Outcome {
  Decision decision = Decision::kKept;
  RRSet replacement;
};

void check_consecutive(const RRCollection& old, const Graph& g_new, const UpdateBatch& batch) {
  if (old.node_count() != g_new.node_count())
    throw StaleBatchError("mix_collection: collection and graph differ in node count");
  if (batch.base_version && *batch.base_version != old.graph_version())
    throw StaleBatchError("mix_collection: batch was generated against a different snapshot");
  if (version_after(old.graph_version(), g_new, batch) != g_new.version())
    throw StaleBatchError(
        "mix_collection: graph is not the collection's snapshot with the batch applied");
}

}  // namespace

RatioContext::RatioContext(std::size_t node_count, const UpdateBatch& batch, double lambda)
    : lambda_(lambda), is_target_(node_count, 0), dead_ratio_(node_count, 1.0) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ArgumentError("ratio context: lambda must be finite and non-negative");
  changes_.reserve(batch.size() * 2);
  for (const auto& d : batch.deltas) {
    if (d.u >= node_count || d.v >= node_count)
      throw ArgumentError("ratio context: delta endpoint out of range");
    if (!changes_.emplace(key(d.u, d.v), ProbabilityChange{d.old_p, d.new_p}).second)
      throw ArgumentError("ratio context: duplicate edge in batch");
    is_target_[d.v] = 1;
    dead_ratio_[d.v] *= dead_factor(d.old_p, d.new_p, lambda);
  }
  changed_targets_ = changed_target_nodes(batch);
}

double dead_ratio(NodeId v, const RatioContext& ctx) { return ctx.dead_ratio(v); }

double dead_ratio(NodeId v, const Graph& g_old, const Graph& g_new, double lambda) {
  double ratio = 1.0;
  const EdgeId first = g_new.first_in_edge(v);
  for (EdgeId e = first; e < first + g_new.in_degree(v); ++e)
    ratio *= dead_factor(g_old.prob(e), g_new.prob(e), lambda);
  return ratio;
}

double rr_probability_ratio(const RRSet& r, const RatioContext& ctx) {
  double ratio = 1.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const NodeId v = r.nodes[i];
    if (ctx.is_changed_target(v)) ratio *= ctx.dead_ratio(v);
    if (i == 0) continue;
    if (const ProbabilityChange* c = ctx.find_change(v, r.parents[i]))
      ratio *= bfs_factor(c->old_p, c->new_p, ctx.lambda());
  }
  return ratio;
}

RRSet Resampler::resample(const RRSet& old, const Graph& g_new, const RatioContext& ctx,
                          Rng& rng) {
  old_.resize(g_new.node_count());
  active_.resize(g_new.node_count());
  old_.clear();
  active_.clear();
  for (NodeId v : old.nodes) old_.insert(v);

  RRSet r;
  r.nodes.reserve(old.nodes.size());
  r.parents.reserve(old.nodes.size());
  const NodeId root = old.root();
  r.nodes.push_back(root);
  r.parents.push_back(root);
  active_.insert(root);
  for (std::size_t head = 0; head < r.nodes.size(); ++head) {
    const NodeId v = r.nodes[head];
    const bool v_in_old = old_.contains(v);
    const auto sources = g_new.in_sources(v);
    const auto probs = g_new.in_probs(v);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const NodeId u = sources[i];
      if (active_.contains(u)) continue;
      bool success;
      if (ctx.find_change(u, v) != nullptr) {
        success = rng.coin(probs[i]);
      } else if (v_in_old) {
        success = old_.contains(u);
      } else {
        success = rng.coin(probs[i]);
      }
      if (success) {
        active_.insert(u);
        r.nodes.push_back(u);
        r.parents.push_back(v);
      }
    }
  }
  return r;
}

RRSet resample_rr_set(const RRSet& old, const Graph& g_new, const RatioContext& ctx, Rng& rng) {
  Resampler resampler(g_new.node_count());
  return resampler.resample(old, g_new, ctx, rng);
}

MixResult mix_collection(RRCollection old, const Graph& g_new, const UpdateBatch& batch,
                         std::size_t n_r, const MixOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (n_r == 0) throw ArgumentError("mix_collection: n_r must be at least 1");
  check_consecutive(old, g_new, batch);

  const RatioContext ctx(g_new.node_count(), batch, options.lambda);
  const std::uint64_t seed = old.master_seed();
  const std::uint64_t generation = old.generation() + 1;

  MixStats stats;
  stats.input_sets = old.size();

  std::vector<char> is_candidate(old.size(), 0);
  for (NodeId v : ctx.changed_targets())
    for (SetIndex i : old.sets_containing(v)) is_candidate[i] = 1;
  std::vector<SetIndex> candidates;
  for (SetIndex i = 0; i < old.size(); ++i)
    if (is_candidate[i]) candidates.push_back(i);
  stats.candidates = candidates.size();

  // Remain and sample steps; every set draws from its own substream, so the
  // outcome does not depend on the thread split.
  std::vector<Outcome> outcomes(candidates.size());
  parallel_for(candidates.size(), options.threads,
               [&](std::size_t begin, std::size_t end, std::size_t) {
                 Resampler resampler(g_new.node_count());
                 for (std::size_t c = begin; c < end; ++c) {
                   const SetIndex slot = candidates[c];
                   Rng rng = Rng::substream(seed, {stream::kMix, generation, slot});
                   const RRSet& r = old[slot];
                   if (rng.uniform01() < remain_probability(rr_probability_ratio(r, ctx))) {
                     outcomes[c].decision = Decision::kKept;
                     continue;
                   }
                   RRSet resampled = resampler.resample(r, g_new, ctx, rng);
                   if (rng.uniform01() < accept_probability(rr_probability_ratio(resampled, ctx))) {
                     outcomes[c].decision = Decision::kAccepted;
                     outcomes[c].replacement = std::move(resampled);
                   } else {
                     outcomes[c].decision = Decision::kRejected;
                   }
                 }
               });

  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };

  if (n_r == old.size()) {
    // Nothing can trigger the early break or the trim here: at most one output
    // per input, so the output reaches n_r only at the last input.
    std::vector<std::pair<SetIndex, RRSet>> replacements;
    std::vector<SetIndex> vacant;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      switch (outcomes[c].decision) {
        case Decision::kKept:
          ++stats.kept;
          break;
        case Decision::kAccepted:
          ++stats.resampled_accepted;
          replacements.emplace_back(candidates[c], std::move(outcomes[c].replacement));
          break;
        case Decision::kRejected:
          vacant.push_back(candidates[c]);
          break;
      }
    }
    stats.ratio_fast_path_hits = old.size() - candidates.size();
    stats.kept += stats.ratio_fast_path_hits;
    stats.fresh = vacant.size();

    std::vector<RRSet> fresh(vacant.size());
    parallel_for(vacant.size(), options.threads,
                 [&](std::size_t begin, std::size_t end, std::size_t) {
                   RRSampler sampler(g_new.node_count());
                   for (std::size_t i = begin; i < end; ++i)
                     fresh[i] = sample_slot(sampler, g_new, seed, generation, vacant[i]);
                 });
    for (std::size_t i = 0; i < vacant.size(); ++i)
      replacements.emplace_back(vacant[i], std::move(fresh[i]));

    old.replace_slots(std::move(replacements));
    old.advance(g_new.version());
    stats.wall_time_ms = elapsed_ms();
    return {std::move(old), stats};
  }

  // General case, in the literal append order.
  std::vector<RRSet> old_sets = std::move(old).take_sets();
  std::vector<RRSet> next;
  next.reserve(n_r);
  std::size_t c = 0;
  for (SetIndex i = 0; i < old_sets.size() && next.size() < n_r; ++i) {
    if (!is_candidate[i]) {
      ++stats.ratio_fast_path_hits;
      ++stats.kept;
      next.push_back(std::move(old_sets[i]));
      continue;
    }
    Outcome& outcome = outcomes[c++];
    if (outcome.decision == Decision::kKept) {
      ++stats.kept;
      next.push_back(std::move(old_sets[i]));
    } else if (outcome.decision == Decision::kAccepted) {
      ++stats.resampled_accepted;
      next.push_back(std::move(outcome.replacement));
    }
  }
  Rng trim = Rng::substream(seed, {stream::kTrim, generation});
  while (next.size() > n_r) {
    const std::size_t victim = trim.uniform_index(next.size());
    std::swap(next[victim], next.back());
    next.pop_back();
  }
  RRSampler sampler(g_new.node_count());
  while (next.size() < n_r) {
    next.push_back(sample_slot(sampler, g_new, seed, generation, next.size()));
    ++stats.fresh;
  }
  RRCollection result(g_new.node_count(), std::move(next), g_new.version(), seed, generation);
  stats.wall_time_ms = elapsed_ms();
  return {std::move(result), stats};
}

}  // namespace dimp
