// generators.hpp - HyperCL and HyperLap hypergraph generators
#ifndef HYPERLAP_GENERATORS_HPP
#define HYPERLAP_GENERATORS_HPP

#include "hyperlap/core.hpp"
#include "hyperlap/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hyperlap {

struct GeneratorConfig {
    std::vector<std::uint32_t> sizes;    // one per hyperedge
    std::vector<std::uint64_t> degrees;  // one per node; zero-degree nodes are never drawn
    int levels = 1;
    std::vector<double> weights;  // empty means {1, 0, ..., 0}
    std::uint64_t seed = 0;
    unsigned threads = 1;  // 0 = hardware concurrency
};

// Sizes and degrees of `g`, one level, weight {1}.
GeneratorConfig config_from(const Hypergraph& g, std::uint64_t seed = 0);

// Throws InfeasibleSize, InvalidLevelCount, InvalidWeights or InvalidConfig.
void validate(const GeneratorConfig& cfg);

// Counters for the collision overhead.
struct GenerationStats {
    std::uint64_t draws = 0;          // node draws
    std::uint64_t duplicates = 0;     // draws rejected as already in the edge
    std::uint64_t group_redraws = 0;  // (level, group) picks rejected as too small
};

// Degree-proportional node sampler over every group of a level partition.
// One prefix-sum table over the partition order serves all levels, so a draw
// is a binary search inside the group's slice.
class NodeSampler {
public:
    NodeSampler(std::span<const NodeId> order, int levels, std::span<const std::uint64_t> degrees);
    NodeSampler(const LevelPartition& partition, std::span<const std::uint64_t> degrees);

    int levels() const { return levels_; }
    std::size_t num_nodes() const { return order_.size(); }
    std::size_t num_groups(int level) const { return std::size_t{1} << (level - 1); }
    std::size_t group_begin(int level, std::size_t group) const;
    std::size_t group_end(int level, std::size_t group) const { return group_begin(level, group + 1); }

    std::uint64_t group_weight(int level, std::size_t group) const;
    std::size_t positive_count(int level, std::size_t group) const;
    bool feasible(int level, std::size_t group, std::uint32_t size) const {
        return positive_count(level, group) >= size;
    }
    // True when some group of `level` holds at least `size` positive-degree nodes.
    bool level_feasible(int level, std::uint32_t size) const;

    // Pr[v] = d_v / (sum of degrees in the group).
    NodeId draw(int level, std::size_t group, Rng& rng) const;

    // Draws `size` distinct nodes from one group, resampling duplicates, and
    // writes them sorted to `out`. Throws NonConvergence after 1000*size draws.
    void draw_edge(int level, std::size_t group, std::uint32_t size, Rng& rng, NodeId* out,
                   GenerationStats* stats = nullptr) const;

    // Uniform group at `level`, redrawn until it can host `size` nodes.
    // Throws InfeasibleSize when no group can.
    void draw_edge_at_level(int level, std::uint32_t size, Rng& rng, NodeId* out,
                            GenerationStats* stats = nullptr) const;

private:
    std::vector<NodeId> order_;
    std::vector<std::uint64_t> prefix_;    // prefix_[i] = sum of degrees of order_[0..i)
    std::vector<std::uint32_t> positive_;  // prefix count of positive-degree nodes
    int levels_ = 1;
};

// Largest level whose groups can hold `size` nodes: min(L, max l with
// size * 2^(l-1) <= n), 0 if size > n.
int suitable_levels(std::size_t num_nodes, std::uint32_t size, int levels);

Hypergraph hyper_cl(const GeneratorConfig& cfg, GenerationStats* stats = nullptr);
Hypergraph hyper_lap(const GeneratorConfig& cfg, const LevelPartition& partition, GenerationStats* stats = nullptr);

// HyperLap on `factor` copies of the size and degree lists of `g`, over a
// fresh partition of |V|*factor nodes seeded from `seed`.
Hypergraph upscale(const Hypergraph& g, std::uint32_t factor, int levels, const std::vector<double>& weights,
                   std::uint64_t seed, unsigned threads = 1, GenerationStats* stats = nullptr);

}  // namespace hyperlap

#endif  // HYPERLAP_GENERATORS_HPP
