// measures.hpp - hyperedge overlap measures
#ifndef HYPERLAP_MEASURES_HPP
#define HYPERLAP_MEASURES_HPP

#include "hyperlap/core.hpp"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace hyperlap {

// A set of hyperedges given as node lists. Every list must be non-empty and
// duplicate-free; the set itself may repeat edges.
using EdgeSet = std::span<const std::vector<NodeId>>;

// |E| / |union of E|. Throws EmptyInput.
double density(EdgeSet edges);
// (sum of |e|) / |union of E|, the mean degree of the covered nodes inside E.
double overlapness(EdgeSet edges);

enum class BaselineKind { Intersection, UnionInverse, Jaccard, OverlapCoefficient };

double baseline_measure(BaselineKind kind, EdgeSet edges);

struct EgonetStat {
    NodeId node = 0;
    std::size_t num_edges = 0;           // |E_v|
    std::size_t num_distinct_nodes = 0;  // |union of E_v|
    std::size_t sum_sizes = 0;           // sum of |e| over E_v
    double density = 0.0;
    double overlapness = 0.0;
};

// One entry per node of positive degree, in node order.
std::vector<EgonetStat> egonet_stats(const Hypergraph& g);

// Co-occurrence counts of node pairs that share at least one hyperedge.
class PairDegreeTable {
public:
    static std::uint64_t key(NodeId u, NodeId v) {
        if (u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(u) << 32) | v;
    }

    // 0 when the pair never co-occurs.
    std::uint32_t count(NodeId u, NodeId v) const;
    const std::uint32_t* find(NodeId u, NodeId v) const;

    std::size_t size() const { return counts_.size(); }
    // Sum of all counts; equals sum over edges of C(|e|, 2).
    std::uint64_t total() const;
    std::vector<double> values() const;

    const std::unordered_map<std::uint64_t, std::uint32_t>& counts() const { return counts_; }
    std::unordered_map<std::uint64_t, std::uint32_t>& mutable_counts() { return counts_; }

private:
    std::unordered_map<std::uint64_t, std::uint32_t> counts_;
};

constexpr std::uint64_t default_pair_capacity = std::uint64_t{1} << 31;

// Throws CapacityExceeded when sum C(|e|,2) exceeds `capacity`.
PairDegreeTable pair_degrees(const Hypergraph& g, std::uint64_t capacity = default_pair_capacity);

struct TripleOptions {
    std::size_t max_enum_size = 100;
    std::uint64_t sample_budget = 10'000'000;
    std::uint64_t seed = 0;
    bool force_sampled = false;
};

struct TripleKey {
    NodeId a, b, c;  // a < b < c
    bool operator==(const TripleKey&) const = default;
};

struct TripleKeyHash {
    std::size_t operator()(const TripleKey& t) const;
};

// Degrees of node triples. Exact mode holds every co-occurring triple;
// sampled mode holds the degrees of distinct triples drawn uniformly (with
// replacement) from the set of co-occurring triples.
struct TripleDegreeSample {
    bool sampled = false;
    std::uint64_t draws = 0;                                        // sampled mode only
    std::unordered_map<TripleKey, std::uint32_t, TripleKeyHash> exact;  // exact mode only
    std::vector<std::uint32_t> sampled_counts;                      // sampled mode only

    std::size_t sample_size() const { return sampled ? sampled_counts.size() : exact.size(); }
    std::uint32_t count(NodeId u, NodeId v, NodeId w) const;  // exact mode only
    std::uint64_t total() const;                              // exact: sum C(|e|,3)
    std::vector<double> values() const;
};

TripleDegreeSample triple_degrees(const Hypergraph& g, const TripleOptions& options = {});

// Mean pair degree over the pairs of `e`; 0 for singletons. Throws
// MissingPair when a pair of `e` is absent from `pairs`.
double homogeneity(std::span<const NodeId> e, const PairDegreeTable& pairs);

// Homogeneity of every hyperedge, indexed like the edges of `g`.
std::vector<double> homogeneity_values(const Hypergraph& g);
DistributionSample homogeneity_distribution(const Hypergraph& g);

enum class EgonetMeasure { Density, Overlapness };

// (mean real - mean null) / max |real_i - null_j|. The denominator is taken
// from the extremes of both samples. Throws DegenerateDenominator when every
// value in both samples is equal, EmptyInput on an empty sample.
double significance(std::span<const double> real, std::span<const double> null);
double significance(const Hypergraph& real, const Hypergraph& null, EgonetMeasure measure);

std::vector<double> egonet_values(const std::vector<EgonetStat>& stats, EgonetMeasure measure);

// Rounds each value to its nearest integer (report-only binning).
std::vector<double> bin_to_nearest_integer(std::vector<double> values);

}  // namespace hyperlap

#endif  // HYPERLAP_MEASURES_HPP
