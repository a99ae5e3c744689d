#include "hyperlap/measures.hpp"
#include "hyperlap/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hyperlap {

namespace {

void require_nonempty(EdgeSet edges) {
    if (edges.empty()) throw Error(Errc::EmptyInput, "edge set is empty");
    for (const auto& e : edges)
        if (e.empty()) throw Error(Errc::EmptyEdge, "edge set contains an empty hyperedge");
}

std::size_t union_size(EdgeSet edges) {
    std::vector<NodeId> all;
    for (const auto& e : edges) all.insert(all.end(), e.begin(), e.end());
    std::sort(all.begin(), all.end());
    return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

std::size_t intersection_size(EdgeSet edges) {
    std::vector<NodeId> common(edges.front().begin(), edges.front().end());
    std::sort(common.begin(), common.end());
    std::vector<NodeId> next, sorted;
    for (std::size_t i = 1; i < edges.size() && !common.empty(); ++i) {
        sorted.assign(edges[i].begin(), edges[i].end());
        std::sort(sorted.begin(), sorted.end());
        next.clear();
        std::set_intersection(common.begin(), common.end(), sorted.begin(), sorted.end(), std::back_inserter(next));
        common.swap(next);
    }
    return common.size();
}

std::uint64_t choose2(std::uint64_t k) { return k * (k - 1) / 2; }
std::uint64_t choose3(std::uint64_t k) { return k < 3 ? 0 : k * (k - 1) * (k - 2) / 6; }

// Number of edges containing every node of `nodes`, via sorted incidence lists.
std::uint32_t common_degree(const Hypergraph& g, std::span<const NodeId> nodes) {
    std::span<const EdgeId> base = g.incident(nodes[0]);
    for (NodeId v : nodes.subspan(1))
        if (g.incident(v).size() < base.size()) base = g.incident(v);
    std::uint32_t count = 0;
    for (EdgeId e : base) {
        auto edge = g.edge(e);
        bool all = true;
        for (NodeId v : nodes) all = all && std::binary_search(edge.begin(), edge.end(), v);
        count += all ? 1 : 0;
    }
    return count;
}

}  // namespace

double density(EdgeSet edges) {
    require_nonempty(edges);
    return static_cast<double>(edges.size()) / static_cast<double>(union_size(edges));
}

double overlapness(EdgeSet edges) {
    require_nonempty(edges);
    std::size_t total = 0;
    for (const auto& e : edges) total += e.size();
    return static_cast<double>(total) / static_cast<double>(union_size(edges));
}

double baseline_measure(BaselineKind kind, EdgeSet edges) {
    require_nonempty(edges);
    switch (kind) {
        case BaselineKind::Intersection:
            return static_cast<double>(intersection_size(edges));
        case BaselineKind::UnionInverse:
            return 1.0 / static_cast<double>(union_size(edges));
        case BaselineKind::Jaccard:
            return static_cast<double>(intersection_size(edges)) / static_cast<double>(union_size(edges));
        case BaselineKind::OverlapCoefficient: {
            std::size_t smallest = std::numeric_limits<std::size_t>::max();
            for (const auto& e : edges) smallest = std::min(smallest, e.size());
            return static_cast<double>(intersection_size(edges)) / static_cast<double>(smallest);
        }
    }
    return 0.0;
}

std::vector<EgonetStat> egonet_stats(const Hypergraph& g) {
    std::vector<EgonetStat> out;
    std::vector<std::uint32_t> stamp(g.num_nodes(), 0);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        const auto node = static_cast<NodeId>(v);
        auto edges = g.incident(node);
        if (edges.empty()) continue;
        const auto mark = static_cast<std::uint32_t>(v + 1);
        EgonetStat s;
        s.node = node;
        s.num_edges = edges.size();
        for (EdgeId e : edges) {
            auto nodes = g.edge(e);
            s.sum_sizes += nodes.size();
            for (NodeId u : nodes) {
                if (stamp[u] != mark) {
                    stamp[u] = mark;
                    ++s.num_distinct_nodes;
                }
            }
        }
        s.density = static_cast<double>(s.num_edges) / static_cast<double>(s.num_distinct_nodes);
        s.overlapness = static_cast<double>(s.sum_sizes) / static_cast<double>(s.num_distinct_nodes);
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pairs

const std::uint32_t* PairDegreeTable::find(NodeId u, NodeId v) const {
    auto it = counts_.find(key(u, v));
    return it == counts_.end() ? nullptr : &it->second;
}

std::uint32_t PairDegreeTable::count(NodeId u, NodeId v) const {
    const auto* c = find(u, v);
    return c ? *c : 0;
}

std::uint64_t PairDegreeTable::total() const {
    std::uint64_t t = 0;
    for (const auto& [k, c] : counts_) t += c;
    return t;
}

std::vector<double> PairDegreeTable::values() const {
    std::vector<double> out;
    out.reserve(counts_.size());
    for (const auto& [k, c] : counts_) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

PairDegreeTable pair_degrees(const Hypergraph& g, std::uint64_t capacity) {
    std::uint64_t occurrences = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) occurrences += choose2(g.edge_size(e));
    if (occurrences > capacity)
        throw Error(Errc::CapacityExceeded, "pair enumeration needs " + std::to_string(occurrences) +
                                                " entries, capacity is " + std::to_string(capacity));
    PairDegreeTable table;
    auto& counts = table.mutable_counts();
    counts.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(occurrences, std::uint64_t{1} << 26)));
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto nodes = g.edge(e);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j) ++counts[PairDegreeTable::key(nodes[i], nodes[j])];
    }
    return table;
}

// ---------------------------------------------------------------------------
// Triples

std::size_t TripleKeyHash::operator()(const TripleKey& t) const {
    return static_cast<std::size_t>(
        mix64((static_cast<std::uint64_t>(t.a) << 32 | t.b) ^ mix64(t.c)));
}

std::uint32_t TripleDegreeSample::count(NodeId u, NodeId v, NodeId w) const {
    NodeId k[3] = {u, v, w};
    std::sort(k, k + 3);
    auto it = exact.find({k[0], k[1], k[2]});
    return it == exact.end() ? 0 : it->second;
}

std::uint64_t TripleDegreeSample::total() const {
    std::uint64_t t = 0;
    if (sampled)
        for (auto c : sampled_counts) t += c;
    else
        for (const auto& [k, c] : exact) t += c;
    return t;
}

std::vector<double> TripleDegreeSample::values() const {
    std::vector<double> out;
    if (sampled) {
        out.assign(sampled_counts.begin(), sampled_counts.end());
    } else {
        out.reserve(exact.size());
        for (const auto& [k, c] : exact) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

TripleDegreeSample triple_degrees(const Hypergraph& g, const TripleOptions& options) {
    TripleDegreeSample out;
    std::uint64_t occurrences = 0;
    bool small_edges = true;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        occurrences += choose3(g.edge_size(e));
        small_edges = small_edges && g.edge_size(e) <= options.max_enum_size;
    }
    out.sampled = options.force_sampled || !small_edges || occurrences > options.sample_budget;

    if (!out.sampled) {
        out.exact.reserve(static_cast<std::size_t>(occurrences));
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            auto n = g.edge(e);
            for (std::size_t i = 0; i < n.size(); ++i)
                for (std::size_t j = i + 1; j < n.size(); ++j)
                    for (std::size_t k = j + 1; k < n.size(); ++k) ++out.exact[{n[i], n[j], n[k]}];
        }
        return out;
    }

    if (occurrences == 0) return out;
    // Draw a triple occurrence uniformly (edge proportional to C(|e|,3), then a
    // uniform triple inside it) and keep it with probability 1/d3, which makes
    // kept triples uniform over distinct co-occurring triples.
    std::vector<std::uint64_t> cumulative(g.num_edges() + 1, 0);
    for (std::size_t e = 0; e < g.num_edges(); ++e) cumulative[e + 1] = cumulative[e] + choose3(g.edge_size(e));
    Rng rng(derive_seed(options.seed, {0x747269ULL}));
    out.draws = options.sample_budget;
    for (std::uint64_t draw = 0; draw < options.sample_budget; ++draw) {
        const std::uint64_t x = rng.below(occurrences);
        const auto e = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin() - 1);
        auto nodes = g.edge(e);
        const std::uint64_t k = nodes.size();
        std::uint64_t i = rng.below(k), j = rng.below(k - 1), l = rng.below(k - 2);
        // Map three draws to three distinct positions.
        if (j >= i) ++j;
        std::uint64_t lo = std::min(i, j), hi = std::max(i, j);
        if (l >= lo) ++l;
        if (l >= hi) ++l;
        NodeId t[3] = {nodes[i], nodes[j], nodes[l]};
        std::sort(t, t + 3);
        const std::uint32_t d3 = common_degree(g, t);
        if (rng.uniform() * d3 < 1.0) out.sampled_counts.push_back(d3);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Homogeneity

double homogeneity(std::span<const NodeId> e, const PairDegreeTable& pairs) {
    if (e.size() < 2) return 0.0;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            const auto* c = pairs.find(e[i], e[j]);
            if (!c)
                throw Error(Errc::MissingPair, "pair (" + std::to_string(e[i]) + ", " + std::to_string(e[j]) +
                                                   ") is not in the pair-degree table");
            sum += *c;
        }
    }
    return static_cast<double>(sum) / static_cast<double>(choose2(e.size()));
}

std::vector<double> homogeneity_values(const Hypergraph& g) {
    const PairDegreeTable pairs = pair_degrees(g);
    std::vector<double> out(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) out[e] = homogeneity(g.edge(e), pairs);
    return out;
}

DistributionSample homogeneity_distribution(const Hypergraph& g) {
    return DistributionSample(homogeneity_values(g));
}

// ---------------------------------------------------------------------------
// Significance

double significance(std::span<const double> real, std::span<const double> null) {
    if (real.empty() || null.empty()) throw Error(Errc::EmptyInput, "significance needs egonets in both graphs");
    auto [rmin, rmax] = std::minmax_element(real.begin(), real.end());
    auto [nmin, nmax] = std::minmax_element(null.begin(), null.end());
    const double denom = std::max(std::abs(*rmax - *nmin), std::abs(*nmax - *rmin));
    if (denom == 0.0)
        throw Error(Errc::DegenerateDenominator, "all egonet values are equal across both graphs");
    const double mean_real = std::accumulate(real.begin(), real.end(), 0.0) / static_cast<double>(real.size());
    const double mean_null = std::accumulate(null.begin(), null.end(), 0.0) / static_cast<double>(null.size());
    return (mean_real - mean_null) / denom;
}

std::vector<double> egonet_values(const std::vector<EgonetStat>& stats, EgonetMeasure measure) {
    std::vector<double> out(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i)
        out[i] = measure == EgonetMeasure::Density ? stats[i].density : stats[i].overlapness;
    return out;
}

double significance(const Hypergraph& real, const Hypergraph& null, EgonetMeasure measure) {
    const auto r = egonet_values(egonet_stats(real), measure);
    const auto n = egonet_values(egonet_stats(null), measure);
    return significance(r, n);
}

std::vector<double> bin_to_nearest_integer(std::vector<double> values) {
    for (double& x : values) x = std::round(x);
    return values;
}

}  // namespace hyperlap
