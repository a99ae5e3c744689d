#include "hyperlap/core.hpp"
#include "hyperlap/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace hyperlap {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NodeOutOfRange: return "NodeOutOfRange";
        case Errc::EmptyEdge: return "EmptyEdge";
        case Errc::DuplicateNode: return "DuplicateNode";
        case Errc::InvalidLevelCount: return "InvalidLevelCount";
        case Errc::ParseError: return "ParseError";
        case Errc::EmptyDataset: return "EmptyDataset";
        case Errc::IoError: return "IoError";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::CapacityExceeded: return "CapacityExceeded";
        case Errc::MissingPair: return "MissingPair";
        case Errc::DegenerateDenominator: return "DegenerateDenominator";
        case Errc::InsufficientTail: return "InsufficientTail";
        case Errc::DegenerateData: return "DegenerateData";
        case Errc::InfeasibleSize: return "InfeasibleSize";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::InvalidWeights: return "InvalidWeights";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::NoEligibleEdges: return "NoEligibleEdges";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& msg)
    : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

// ---------------------------------------------------------------------------
// Hypergraph

Hypergraph Hypergraph::from_edges(std::span<const HyperedgeRecord> edges, std::size_t num_nodes) {
    Hypergraph g;
    g.num_nodes_ = num_nodes;
    g.offsets_.reserve(edges.size() + 1);
    bool any_level = false;
    for (const auto& e : edges) any_level = any_level || e.level.has_value();
    if (any_level) g.levels_.reserve(edges.size());

    std::vector<NodeId> scratch;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.nodes.empty()) throw Error(Errc::EmptyEdge, "hyperedge " + std::to_string(i) + " has no nodes");
        scratch.assign(e.nodes.begin(), e.nodes.end());
        std::sort(scratch.begin(), scratch.end());
        if (std::adjacent_find(scratch.begin(), scratch.end()) != scratch.end())
            throw Error(Errc::DuplicateNode, "hyperedge " + std::to_string(i) + " repeats a node");
        if (scratch.back() >= num_nodes)
            throw Error(Errc::NodeOutOfRange, "hyperedge " + std::to_string(i) + " references node " +
                                                  std::to_string(scratch.back()) + " >= " +
                                                  std::to_string(num_nodes));
        g.pins_.insert(g.pins_.end(), scratch.begin(), scratch.end());
        g.offsets_.push_back(g.pins_.size());
        g.max_edge_size_ = std::max(g.max_edge_size_, scratch.size());
        if (any_level) g.levels_.push_back(static_cast<std::uint8_t>(e.level.value_or(0)));
    }
    g.build_incidence();
    return g;
}

Hypergraph Hypergraph::from_csr(std::vector<std::size_t> offsets, std::vector<NodeId> pins,
                                std::vector<std::uint8_t> levels, std::size_t num_nodes) {
    Hypergraph g;
    g.num_nodes_ = num_nodes;
    g.offsets_ = std::move(offsets);
    g.pins_ = std::move(pins);
    g.levels_ = std::move(levels);
    for (std::size_t e = 0; e + 1 < g.offsets_.size(); ++e)
        g.max_edge_size_ = std::max(g.max_edge_size_, g.offsets_[e + 1] - g.offsets_[e]);
    g.build_incidence();
    return g;
}

void Hypergraph::build_incidence() {
    incidence_offsets_.assign(num_nodes_ + 1, 0);
    for (NodeId v : pins_) ++incidence_offsets_[v + 1];
    std::partial_sum(incidence_offsets_.begin(), incidence_offsets_.end(), incidence_offsets_.begin());
    incidence_.resize(pins_.size());
    std::vector<std::size_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
    const std::size_t m = num_edges();
    for (std::size_t e = 0; e < m; ++e)
        for (std::size_t k = offsets_[e]; k < offsets_[e + 1]; ++k)
            incidence_[cursor[pins_[k]]++] = static_cast<EdgeId>(e);
}

std::optional<int> Hypergraph::level(std::size_t e) const {
    if (levels_.empty() || levels_[e] == 0) return std::nullopt;
    return levels_[e];
}

std::vector<std::uint64_t> Hypergraph::degree_sequence() const {
    std::vector<std::uint64_t> d(num_nodes_);
    for (std::size_t v = 0; v < num_nodes_; ++v) d[v] = degree(static_cast<NodeId>(v));
    return d;
}

std::vector<std::uint32_t> Hypergraph::size_sequence() const {
    std::vector<std::uint32_t> s(num_edges());
    for (std::size_t e = 0; e < s.size(); ++e) s[e] = static_cast<std::uint32_t>(edge_size(e));
    return s;
}

std::vector<HyperedgeRecord> Hypergraph::records() const {
    std::vector<HyperedgeRecord> out(num_edges());
    for (std::size_t e = 0; e < out.size(); ++e) {
        auto nodes = edge(e);
        out[e].nodes.assign(nodes.begin(), nodes.end());
        out[e].level = level(e);
    }
    return out;
}

void Hypergraph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != num_nodes_)
        throw Error(Errc::InvalidConfig, "label table size does not match node count");
    labels_ = std::move(labels);
}

bool Hypergraph::same_edges(const Hypergraph& other) const {
    return num_nodes_ == other.num_nodes_ && offsets_ == other.offsets_ && pins_ == other.pins_;
}

Hypergraph build_incidence(std::span<const HyperedgeRecord> edges, std::size_t num_nodes) {
    return Hypergraph::from_edges(edges, num_nodes);
}

int max_levels(std::size_t num_nodes) {
    if (num_nodes == 0) return 0;
    return static_cast<int>(std::bit_width(num_nodes)) - 1;
}

// ---------------------------------------------------------------------------
// LevelPartition

LevelPartition LevelPartition::make(std::size_t num_nodes, int levels, std::uint64_t seed) {
    if (levels < 1 || levels > max_levels(num_nodes))
        throw Error(Errc::InvalidLevelCount, "level count " + std::to_string(levels) +
                                                 " outside [1, floor(log2 " + std::to_string(num_nodes) + ")]");
    std::vector<NodeId> order(num_nodes);
    std::iota(order.begin(), order.end(), NodeId{0});
    Rng rng(derive_seed(seed, {0x7061727469ULL}));
    for (std::size_t i = num_nodes; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    return from_order(std::move(order), levels);
}

LevelPartition LevelPartition::from_order(std::vector<NodeId> order, int levels) {
    if (levels < 1 || levels > max_levels(order.size()))
        throw Error(Errc::InvalidLevelCount, "level count " + std::to_string(levels) + " not supported for " +
                                                 std::to_string(order.size()) + " nodes");
    LevelPartition p;
    p.levels_ = levels;
    p.position_.assign(order.size(), order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] >= order.size() || p.position_[order[i]] != order.size())
            throw Error(Errc::InvalidConfig, "partition order is not a permutation");
        p.position_[order[i]] = i;
    }
    p.order_ = std::move(order);
    return p;
}

std::size_t LevelPartition::group_begin(int level, std::size_t group) const {
    const std::size_t n = order_.size();
    const unsigned shift = static_cast<unsigned>(level - 1);
    return static_cast<std::size_t>((static_cast<unsigned __int128>(n) * group) >> shift);
}

std::span<const NodeId> LevelPartition::members(int level, std::size_t group) const {
    const std::size_t b = group_begin(level, group);
    return {order_.data() + b, group_end(level, group) - b};
}

std::size_t LevelPartition::group_of(int level, NodeId v) const {
    // Largest i with floor(n*i/k) <= pos, i.e. i = floor((k*(pos+1) - 1) / n).
    const std::size_t n = order_.size();
    const auto k = static_cast<unsigned __int128>(1) << (level - 1);
    return static_cast<std::size_t>((k * (position_[v] + 1) - 1) / n);
}

// ---------------------------------------------------------------------------
// DistributionSample

DistributionSample::DistributionSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(Errc::EmptyInput, "distribution sample is empty");
    for (double x : values_)
        if (!std::isfinite(x)) throw Error(Errc::NonFiniteValue, "distribution sample holds a non-finite value");
    std::sort(values_.begin(), values_.end());
}

double DistributionSample::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double DistributionSample::ecdf(double x) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

std::vector<std::pair<double, std::size_t>> DistributionSample::histogram() const {
    std::vector<std::pair<double, std::size_t>> out;
    for (double x : values_) {
        if (!out.empty() && out.back().first == x)
            ++out.back().second;
        else
            out.emplace_back(x, 1);
    }
    return out;
}

}  // namespace hyperlap
