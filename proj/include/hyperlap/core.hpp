// core.hpp - hypergraph data model, level partition and empirical samples
#ifndef HYPERLAP_CORE_HPP
#define HYPERLAP_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlap {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Errc {
    NodeOutOfRange,
    EmptyEdge,
    DuplicateNode,
    InvalidLevelCount,
    ParseError,
    EmptyDataset,
    IoError,
    EmptyInput,
    NonFiniteValue,
    CapacityExceeded,
    MissingPair,
    DegenerateDenominator,
    InsufficientTail,
    DegenerateData,
    InfeasibleSize,
    NonConvergence,
    InvalidWeights,
    InvalidConfig,
    NoEligibleEdges,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg);

    Errc code() const { return code_; }

private:
    Errc code_;
};

// A hyperedge as handed to the builders. `nodes` is kept sorted and
// duplicate-free once it is part of a Hypergraph.
struct HyperedgeRecord {
    std::vector<NodeId> nodes;
    std::optional<int> level;  // provenance level of generated edges (1-based)
};

// Immutable node/hyperedge incidence store. Edges and incidence lists are
// both kept in CSR form.
class Hypergraph {
public:
    Hypergraph() = default;

    // Validates and sorts every edge. Throws NodeOutOfRange, EmptyEdge or
    // DuplicateNode.
    static Hypergraph from_edges(std::span<const HyperedgeRecord> edges, std::size_t num_nodes);

    // Trusted constructor for generators: every slice of `pins` described by
    // `offsets` must already be sorted, duplicate-free and in range.
    // `levels` is either empty or has one entry per edge (0 = no level).
    static Hypergraph from_csr(std::vector<std::size_t> offsets, std::vector<NodeId> pins,
                               std::vector<std::uint8_t> levels, std::size_t num_nodes);

    std::size_t num_nodes() const { return num_nodes_; }
    std::size_t num_edges() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_pins() const { return pins_.size(); }
    std::size_t max_edge_size() const { return max_edge_size_; }

    std::span<const NodeId> edge(std::size_t e) const {
        return {pins_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
    }
    std::size_t edge_size(std::size_t e) const { return offsets_[e + 1] - offsets_[e]; }

    bool has_levels() const { return !levels_.empty(); }
    std::optional<int> level(std::size_t e) const;

    std::uint32_t degree(NodeId v) const {
        return static_cast<std::uint32_t>(incidence_offsets_[v + 1] - incidence_offsets_[v]);
    }
    std::span<const EdgeId> incident(NodeId v) const {
        return {incidence_.data() + incidence_offsets_[v],
                incidence_offsets_[v + 1] - incidence_offsets_[v]};
    }

    std::vector<std::uint64_t> degree_sequence() const;
    std::vector<std::uint32_t> size_sequence() const;
    std::vector<HyperedgeRecord> records() const;

    const std::vector<std::size_t>& offsets() const { return offsets_; }
    const std::vector<NodeId>& pins() const { return pins_; }
    const std::vector<std::uint8_t>& levels() const { return levels_; }

    // Original node labels (dense id -> label) when loaded from a file.
    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);

    bool same_edges(const Hypergraph& other) const;

private:
    void build_incidence();

    std::size_t num_nodes_ = 0;
    std::size_t max_edge_size_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> pins_;
    std::vector<std::uint8_t> levels_;
    std::vector<std::size_t> incidence_offsets_{0};
    std::vector<EdgeId> incidence_;
    std::vector<std::string> labels_;
};

Hypergraph build_incidence(std::span<const HyperedgeRecord> edges, std::size_t num_nodes);

// Largest L allowed for a node count: floor(log2(num_nodes)).
int max_levels(std::size_t num_nodes);

// Hierarchical node partition. Levels are 1-based (level 1 is a single group
// holding every node); groups are 0-based, level l has 2^(l-1) of them.
//
// All levels are slices of one random permutation of the nodes: group i of
// level l covers positions [floor(n*i/2^(l-1)), floor(n*(i+1)/2^(l-1))), so the
// size formula and the hierarchy S_i = S_{2i} u S_{2i+1} hold by construction.
class LevelPartition {
public:
    LevelPartition() = default;

    // Throws InvalidLevelCount unless 1 <= levels <= max_levels(num_nodes).
    static LevelPartition make(std::size_t num_nodes, int levels, std::uint64_t seed);
    // Partition over a caller-supplied node order (a permutation of 0..n-1).
    static LevelPartition from_order(std::vector<NodeId> order, int levels);

    int num_levels() const { return levels_; }
    std::size_t num_nodes() const { return order_.size(); }
    std::size_t num_groups(int level) const { return std::size_t{1} << (level - 1); }

    // Position range of a group inside order().
    std::size_t group_begin(int level, std::size_t group) const;
    std::size_t group_end(int level, std::size_t group) const { return group_begin(level, group + 1); }

    std::span<const NodeId> members(int level, std::size_t group) const;
    std::size_t group_of(int level, NodeId v) const;

    const std::vector<NodeId>& order() const { return order_; }
    std::size_t position(NodeId v) const { return position_[v]; }

private:
    int levels_ = 0;
    std::vector<NodeId> order_;
    std::vector<std::size_t> position_;
};

// Multiset of finite reals kept sorted for CDF queries.
class DistributionSample {
public:
    DistributionSample() = default;
    // Throws EmptyInput on an empty input, NonFiniteValue on NaN/inf.
    explicit DistributionSample(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }
    double mean() const;

    // Fraction of values <= x.
    double ecdf(double x) const;

    // (value, multiplicity) pairs in ascending value order.
    std::vector<std::pair<double, std::size_t>> histogram() const;

private:
    std::vector<double> values_;
};

}  // namespace hyperlap

#endif  // HYPERLAP_CORE_HPP
