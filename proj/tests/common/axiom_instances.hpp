// axiom_instances.hpp - premise-satisfying edge-set pairs for the overlap axioms
#ifndef HYPERLAP_TEST_AXIOM_INSTANCES_HPP
#define HYPERLAP_TEST_AXIOM_INSTANCES_HPP

#include "hyperlap/measures.hpp"
#include "hyperlap/random.hpp"

#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace testutil {

using hyperlap::NodeId;
using hyperlap::Rng;
using Edges = std::vector<std::vector<NodeId>>;

inline std::size_t union_count(const Edges& es) {
    std::set<NodeId> u;
    for (const auto& e : es) u.insert(e.begin(), e.end());
    return u.size();
}

inline std::vector<NodeId> random_subset(Rng& rng, std::size_t pool, std::size_t size) {
    std::set<NodeId> s;
    while (s.size() < size) s.insert(static_cast<NodeId>(rng.below(pool)));
    return {s.begin(), s.end()};
}

// Edge set of `m` edges of size `s` covering exactly nodes 0..n-1.
inline Edges covering_uniform(Rng& rng, std::size_t n, std::size_t s, std::size_t m) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    Edges out;
    for (std::size_t i = 0; i < n; i += s) {
        std::set<NodeId> e;
        for (std::size_t j = i; j < std::min(n, i + s); ++j) e.insert(perm[j]);
        while (e.size() < s) e.insert(static_cast<NodeId>(rng.below(n)));
        out.emplace_back(e.begin(), e.end());
    }
    while (out.size() < m) out.push_back(random_subset(rng, n, s));
    return out;
}

inline Edges with_sizes(Rng& rng, std::size_t pool, const std::vector<std::size_t>& sizes) {
    Edges out;
    for (auto s : sizes) out.push_back(random_subset(rng, pool, s));
    return out;
}

// Premise generators. Each returns (E, E') with f(E) < f(E') required.
inline std::optional<std::pair<Edges, Edges>> axiom1_instance(Rng& rng) {
    const std::size_t n = 2 + rng.below(10);
    const std::size_t s = 1 + rng.below(n);
    const std::size_t cover = (n + s - 1) / s;
    const std::size_t m = cover + rng.below(4);
    const std::size_t m2 = m + 1 + rng.below(4);
    return std::pair{covering_uniform(rng, n, s, m), covering_uniform(rng, n, s, m2)};
}

inline std::optional<std::pair<Edges, Edges>> axiom2_instance(Rng& rng) {
    const std::size_t m = 1 + rng.below(6);
    std::vector<std::size_t> sizes(m);
    for (auto& s : sizes) s = 1 + rng.below(4);
    auto e = with_sizes(rng, 4 + rng.below(8), sizes);
    auto e2 = with_sizes(rng, 4 + rng.below(8), sizes);
    const auto u = union_count(e), u2 = union_count(e2);
    if (u == u2) return std::nullopt;
    if (u < u2) std::swap(e, e2);
    return std::pair{e, e2};
}

inline std::optional<std::pair<Edges, Edges>> axiom3_instance(Rng& rng) {
    const std::size_t m = 1 + rng.below(6);
    std::vector<std::size_t> sizes(m), bigger(m);
    for (auto& s : sizes) s = 1 + rng.below(3);
    bigger = sizes;
    const std::size_t strict = rng.below(m);
    bigger[strict] += 1 + rng.below(2);
    for (std::size_t j = 0; j < m; ++j)
        if (j != strict) bigger[j] += rng.below(2);
    const std::size_t pool = 6 + rng.below(3);
    auto e = with_sizes(rng, pool, sizes);
    auto e2 = with_sizes(rng, pool, bigger);
    if (union_count(e) != union_count(e2)) return std::nullopt;
    return std::pair{e, e2};
}

// Measures of the axiom table; Density and the four baselines.
enum class TableMeasure { Intersection, UnionInverse, Jaccard, OverlapCoefficient, Density };

inline const char* table_measure_name(TableMeasure m) {
    switch (m) {
        case TableMeasure::Intersection: return "intersection";
        case TableMeasure::UnionInverse: return "union inverse";
        case TableMeasure::Jaccard: return "jaccard";
        case TableMeasure::OverlapCoefficient: return "overlap coefficient";
        case TableMeasure::Density: return "density";
    }
    return "?";
}

inline double table_measure(TableMeasure m, hyperlap::EdgeSet e) {
    using hyperlap::BaselineKind;
    switch (m) {
        case TableMeasure::Intersection: return baseline_measure(BaselineKind::Intersection, e);
        case TableMeasure::UnionInverse: return baseline_measure(BaselineKind::UnionInverse, e);
        case TableMeasure::Jaccard: return baseline_measure(BaselineKind::Jaccard, e);
        case TableMeasure::OverlapCoefficient: return baseline_measure(BaselineKind::OverlapCoefficient, e);
        case TableMeasure::Density: return hyperlap::density(e);
    }
    return 0;
}

// Cells of the table where the measure fails the axiom.
inline bool table_fails(TableMeasure m, int axiom) {
    if (m == TableMeasure::Density) return axiom == 3;
    if (m == TableMeasure::UnionInverse) return axiom != 2;
    return true;
}

struct Counterexample {
    int axiom;
    TableMeasure measure;
    Edges e, e2;  // premises hold, yet f(e) < f(e2) does not
};

inline std::vector<Counterexample> stored_counterexamples() {
    constexpr NodeId a = 0, b = 1, c = 2, d = 3;
    const Edges path = {{a, b}, {b, c}}, triangle = {{a, b}, {b, c}, {a, c}};
    const Edges star = {{a, b}, {a, c}, {a, d}}, grown = {{a, b}, {a, c}, {b, c, d}};
    // sizes (3,2,2) against (3,4,5) on five nodes each
    const Edges chain = {{10, 11, 12}, {12, 13}, {13, 14}};
    const Edges nested = {{0, 1, 2}, {0, 1, 2, 3}, {0, 1, 2, 3, 4}};
    std::vector<Counterexample> out;
    for (auto m : {TableMeasure::Intersection, TableMeasure::UnionInverse, TableMeasure::Jaccard,
                   TableMeasure::OverlapCoefficient})
        out.push_back({1, m, path, triangle});
    for (auto m : {TableMeasure::Intersection, TableMeasure::Jaccard, TableMeasure::OverlapCoefficient})
        out.push_back({2, m, star, triangle});
    for (auto m : {TableMeasure::Intersection, TableMeasure::UnionInverse, TableMeasure::Jaccard,
                   TableMeasure::OverlapCoefficient})
        out.push_back({3, m, star, grown});
    out.push_back({3, TableMeasure::Density, chain, nested});
    return out;
}

// Checks the premises of each axiom directly.
inline bool premises_hold(int axiom, const Edges& e, const Edges& e2) {
    const auto u = union_count(e), u2 = union_count(e2);
    if (axiom == 1) {
        if (e.size() >= e2.size() || u != u2) return false;
        const auto s = e.front().size();
        for (const auto* set : {&e, &e2})
            for (const auto& x : *set)
                if (x.size() != s) return false;
        return true;
    }
    if (e.size() != e2.size()) return false;
    if (axiom == 2) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i].size() != e2[i].size()) return false;
        return u > u2;
    }
    bool strict = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].size() > e2[i].size()) return false;
        strict = strict || e[i].size() < e2[i].size();
    }
    return strict && u == u2;
}

}  // namespace testutil

#endif
