#include "dimp/rr_collection.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <string>

#include "dimp/error.hpp"
#include "dimp/parallel.hpp"
#include "json.hpp"

namespace dimp {
namespace {

constexpr const char* kFormatName = "dimp-rr-collection";
constexpr int kFormatVersion = 1;

}  // namespace

RRCollection::RRCollection(std::size_t node_count, std::vector<RRSet> sets,
                           std::uint64_t graph_version, std::uint64_t master_seed,
                           std::uint64_t generation)
    : node_count_(node_count),
      sets_(std::move(sets)),
      target_size_(sets_.size()),
      graph_version_(graph_version),
      master_seed_(master_seed),
      generation_(generation) {
  if (sets_.size() >= std::numeric_limits<SetIndex>::max())
    throw ArgumentError("rr collection: too many sets");
  for (const RRSet& r : sets_) {
    for (NodeId v : r.nodes)
      if (v >= node_count_) throw ArgumentError("rr collection: node id out of range");
  }
  index_ = rebuild_index();
}

std::size_t RRCollection::total_entries() const {
  std::size_t total = 0;
  for (const RRSet& r : sets_) total += r.size();
  return total;
}

std::vector<std::vector<SetIndex>> RRCollection::rebuild_index() const {
  std::vector<std::size_t> counts(node_count_, 0);
  for (const RRSet& r : sets_)
    for (NodeId v : r.nodes) ++counts[v];
  std::vector<std::vector<SetIndex>> index(node_count_);
  for (std::size_t v = 0; v < node_count_; ++v) index[v].reserve(counts[v]);
  for (SetIndex i = 0; i < sets_.size(); ++i)
    for (NodeId v : sets_[i].nodes) index[v].push_back(i);
  return index;
}

void RRCollection::replace_slots(std::vector<std::pair<SetIndex, RRSet>> replacements) {
  if (replacements.empty()) return;
  using Entry = std::pair<NodeId, SetIndex>;
  std::vector<Entry> removed;
  std::vector<Entry> added;
  for (const auto& [slot, set] : replacements) {
    if (slot >= sets_.size()) throw ArgumentError("replace_slots: slot out of range");
    for (NodeId v : sets_[slot].nodes) removed.emplace_back(v, slot);
    for (NodeId v : set.nodes) {
      if (v >= node_count_) throw ArgumentError("replace_slots: node id out of range");
      added.emplace_back(v, slot);
    }
  }
  std::sort(removed.begin(), removed.end());
  std::sort(added.begin(), added.end());

  // Walk both entry lists grouped by node; each touched list is rebuilt once as
  // (old \ removed) merged with added, which keeps it sorted.
  std::vector<SetIndex> drop;
  std::vector<SetIndex> add;
  std::vector<SetIndex> kept;
  std::size_t ri = 0;
  std::size_t ai = 0;
  while (ri < removed.size() || ai < added.size()) {
    NodeId v = kNoNode;
    if (ri < removed.size()) v = removed[ri].first;
    if (ai < added.size()) v = std::min(v, added[ai].first);
    drop.clear();
    add.clear();
    for (; ri < removed.size() && removed[ri].first == v; ++ri) drop.push_back(removed[ri].second);
    for (; ai < added.size() && added[ai].first == v; ++ai) add.push_back(added[ai].second);

    auto& list = index_[v];
    kept.clear();
    std::set_difference(list.begin(), list.end(), drop.begin(), drop.end(),
                        std::back_inserter(kept));
    list.clear();
    std::merge(kept.begin(), kept.end(), add.begin(), add.end(), std::back_inserter(list));
  }

  for (auto& [slot, set] : replacements) sets_[slot] = std::move(set);
}

RRSet sample_slot(RRSampler& sampler, const Graph& g, std::uint64_t master_seed,
                  std::uint64_t generation, std::uint64_t slot) {
  Rng rng = generation == 0 ? Rng::substream(master_seed, {stream::kBuild, slot})
                            : Rng::substream(master_seed, {stream::kFresh, generation, slot});
  return sampler.sample(g, rng);
}

RRCollection build_collection(const Graph& g, std::size_t n_r, std::uint64_t master_seed,
                              const BuildOptions& options) {
  if (n_r == 0) throw ArgumentError("build_collection: n_r must be at least 1");
  if (g.node_count() == 0) throw ArgumentError("build_collection: empty graph");
  std::vector<RRSet> sets(n_r);
  parallel_for(n_r, options.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    RRSampler sampler(g.node_count());
    for (std::size_t i = begin; i < end; ++i) sets[i] = sample_slot(sampler, g, master_seed, 0, i);
  });
  return RRCollection(g.node_count(), std::move(sets), g.version(), master_seed, 0);
}

std::size_t coverage(const RRCollection& c, const SeedSet& seeds) {
  std::vector<char> covered(c.size(), 0);
  std::size_t count = 0;
  for (NodeId s : seeds.nodes()) {
    if (s >= c.node_count()) throw ArgumentError("coverage: seed id out of range");
    for (SetIndex i : c.sets_containing(s)) {
      if (!covered[i]) {
        covered[i] = 1;
        ++count;
      }
    }
  }
  return count;
}

double estimate_influence_rr(const RRCollection& c, const SeedSet& seeds, std::size_t n) {
  if (c.empty()) throw ArgumentError("estimate_influence_rr: empty collection");
  return static_cast<double>(n) * static_cast<double>(coverage(c, seeds)) /
         static_cast<double>(c.size());
}

void save_collection(std::ostream& out, const RRCollection& c) {
  nlohmann::json sets = nlohmann::json::array();
  for (const RRSet& r : c.sets()) {
    sets.push_back({{"root", r.root()}, {"nodes", r.nodes}, {"parents", r.parents}});
  }
  const nlohmann::json doc = {
      {"format", kFormatName},
      {"version", kFormatVersion},
      {"n", c.node_count()},
      {"target_size", c.target_size()},
      {"master_seed", c.master_seed()},
      {"generation", c.generation()},
      {"graph_version", c.graph_version()},
      {"sets", std::move(sets)},
  };
  out << doc.dump() << '\n';
  if (!out) throw IoError("write error while saving rr collection");
}

RRCollection load_collection(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("rr collection: ") + e.what(), 0);
  }
  try {
    if (doc.at("format").get<std::string>() != kFormatName)
      throw ParseError("rr collection: unknown format", 0);
    if (doc.at("version").get<int>() != kFormatVersion)
      throw ParseError("rr collection: unsupported version", 0);
    const auto n = doc.at("n").get<std::size_t>();
    std::vector<RRSet> sets;
    sets.reserve(doc.at("sets").size());
    for (const auto& entry : doc.at("sets")) {
      RRSet r;
      r.nodes = entry.at("nodes").get<std::vector<NodeId>>();
      r.parents = entry.at("parents").get<std::vector<NodeId>>();
      if (!is_valid_rr_set(r, n) || r.root() != entry.at("root").get<NodeId>())
        throw ParseError("rr collection: malformed set " + std::to_string(sets.size()), 0);
      sets.push_back(std::move(r));
    }
    if (sets.size() != doc.at("target_size").get<std::size_t>())
      throw ParseError("rr collection: set count differs from target_size", 0);
    return RRCollection(n, std::move(sets), doc.at("graph_version").get<std::uint64_t>(),
                        doc.at("master_seed").get<std::uint64_t>(),
                        doc.at("generation").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("rr collection: ") + e.what(), 0);
  }
}

}  // namespace dimp
