#include "helpers.hpp"

#include "hyperlap/measures.hpp"
#include "hyperlap/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace hyperlap;

namespace {

using Edges = std::vector<std::vector<NodeId>>;

// a..e = 0..4, v..z = 10..14
const Edges E1 = {{0, 1, 2}, {0, 1, 2, 3}, {0, 1, 2, 3, 4}};
const Edges E2 = {{10, 11, 12}, {12, 13}, {13, 14}};

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidConfig;
}

Hypergraph random_graph(Rng& rng, std::size_t n, std::size_t m, std::size_t max_size) {
    std::vector<HyperedgeRecord> recs;
    for (std::size_t e = 0; e < m; ++e) {
        std::set<NodeId> nodes;
        const std::size_t s = 1 + rng.below(std::min(max_size, n));
        while (nodes.size() < s) nodes.insert(static_cast<NodeId>(rng.below(n)));
        recs.push_back({{nodes.begin(), nodes.end()}, std::nullopt});
    }
    return Hypergraph::from_edges(recs, n);
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("density and overlapness exemplar") {
    CHECK(density(E1) == doctest::Approx(3.0 / 5).epsilon(1e-14));
    CHECK(density(E2) == doctest::Approx(3.0 / 5).epsilon(1e-14));
    CHECK(overlapness(E1) == doctest::Approx(12.0 / 5).epsilon(1e-14));
    CHECK(overlapness(E2) == doctest::Approx(7.0 / 5).epsilon(1e-14));
    const Edges single = {{0, 1}};
    CHECK(density(single) == 0.5);
    CHECK(overlapness(single) == 1.0);
    CHECK(code_of([] { density(Edges{}); }) == Errc::EmptyInput);
}

TEST_CASE("baselines on E1") {
    CHECK(baseline_measure(BaselineKind::Intersection, E1) == 3.0);
    CHECK(baseline_measure(BaselineKind::Jaccard, E1) == doctest::Approx(3.0 / 5));
    CHECK(baseline_measure(BaselineKind::OverlapCoefficient, E1) == 1.0);
    CHECK(baseline_measure(BaselineKind::UnionInverse, E1) == doctest::Approx(1.0 / 5));
    const Edges disjoint = {{0, 1}, {2, 3}};
    CHECK(baseline_measure(BaselineKind::Intersection, disjoint) == 0.0);
    CHECK(baseline_measure(BaselineKind::Jaccard, disjoint) == 0.0);
    const Edges same = {{0, 1}, {0, 1}};
    CHECK(baseline_measure(BaselineKind::OverlapCoefficient, same) == 1.0);
    CHECK(baseline_measure(BaselineKind::Jaccard, same) == 1.0);
}

TEST_CASE("egonet of a star") {
    const auto g = testutil::graph({{0, 1}, {0, 2}});
    const auto st = egonet_stats(g);
    REQUIRE(st.size() == 3);
    CHECK(st[0].node == 0);
    CHECK(st[0].density == doctest::Approx(2.0 / 3));
    CHECK(st[0].overlapness == doctest::Approx(4.0 / 3));
    CHECK(st[1].density == doctest::Approx(0.5));
    CHECK(st[1].overlapness == 1.0);
}

TEST_CASE("degree-0 nodes have no egonet row") {
    const auto g = testutil::graph({{0, 1}, {3, 4, 5}}, 7);
    const auto st = egonet_stats(g);
    CHECK(st.size() == 5);
    CHECK(st[2].density == doctest::Approx(1.0 / 3));
}

TEST_CASE("egonet invariants against a direct oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_graph(rng, 30, 40, 6);
        for (const auto& s : egonet_stats(g)) {
            Edges ego;
            for (EdgeId e : g.incident(s.node)) ego.emplace_back(g.edge(e).begin(), g.edge(e).end());
            CHECK(s.num_edges == ego.size());
            CHECK(s.density == doctest::Approx(density(ego)));
            CHECK(s.overlapness == doctest::Approx(overlapness(ego)));
            CHECK(s.overlapness >= s.density);
            CHECK(s.overlapness >= 1.0);
        }
    }
}

TEST_CASE("overlapness is the mean degree inside the set") {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        Edges edges;
        for (std::size_t e = 0, m = 1 + rng.below(8); e < m; ++e) {
            std::set<NodeId> s;
            for (std::size_t k = 0, sz = 1 + rng.below(5); k < sz; ++k) s.insert(static_cast<NodeId>(rng.below(10)));
            edges.emplace_back(s.begin(), s.end());
        }
        std::map<NodeId, int> deg;
        for (const auto& e : edges)
            for (NodeId v : e) ++deg[v];
        double total = 0;
        for (const auto& [v, d] : deg) total += d;
        CHECK(overlapness(edges) == doctest::Approx(total / deg.size()));
    }
}

TEST_CASE("pair degrees") {
    const auto g = testutil::graph({{0, 1, 2}, {0, 1}});
    const auto p = pair_degrees(g);
    CHECK(p.size() == 3);
    CHECK(p.count(0, 1) == 2);
    CHECK(p.count(2, 0) == 1);
    CHECK(p.count(1, 2) == 1);
    CHECK(p.count(0, 3) == 0);
    const auto d = pair_degrees(testutil::graph({{0, 1}, {2, 3}, {4, 5, 6}}));
    for (double v : d.values()) CHECK(v == 1.0);
    CHECK(code_of([&] { pair_degrees(g, 3); }) == Errc::CapacityExceeded);
}

TEST_CASE("pair and triple sums match the edge sizes") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_graph(rng, 25, 50, 7);
        std::uint64_t c2 = 0, c3 = 0;
        for (auto s : g.size_sequence()) {
            c2 += std::uint64_t{s} * (s - 1) / 2;
            c3 += s < 3 ? 0 : std::uint64_t{s} * (s - 1) * (s - 2) / 6;
        }
        CHECK(pair_degrees(g).total() == c2);
        const auto t = triple_degrees(g);
        CHECK(!t.sampled);
        CHECK(t.total() == c3);
    }
}

TEST_CASE("triple degree examples") {
    const auto one = triple_degrees(testutil::graph({{0, 1, 2, 3}}));
    CHECK(one.exact.size() == 4);
    for (const auto& [k, c] : one.exact) CHECK(c == 1);
    CHECK(triple_degrees(testutil::graph({{0, 1, 2}})).count(2, 0, 1) == 1);
    const auto dup = triple_degrees(testutil::graph({{0, 1, 2}, {0, 1, 3}, {0, 1, 2}}));
    CHECK(dup.count(0, 1, 2) == 2);
    CHECK(dup.count(0, 1, 3) == 1);
}

TEST_CASE("sampled triples are uniform over distinct triples") {
    // (0,1,2) occurs five times, (3,4,5) once
    const auto g = testutil::graph({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {3, 4, 5}});
    TripleOptions opt;
    opt.force_sampled = true;
    opt.sample_budget = 60000;
    opt.seed = 3;
    const auto t = triple_degrees(g, opt);
    CHECK(t.sampled);
    CHECK(t.draws == 60000);
    const auto fives = std::count(t.sampled_counts.begin(), t.sampled_counts.end(), 5u);
    const auto ones = std::count(t.sampled_counts.begin(), t.sampled_counts.end(), 1u);
    CHECK(fives + ones == static_cast<long>(t.sample_size()));
    CHECK(static_cast<double>(fives) / t.sample_size() == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("large edges switch triples to sampled mode") {
    TripleOptions opt;
    opt.max_enum_size = 3;
    opt.sample_budget = 100;
    const auto t = triple_degrees(testutil::graph({{0, 1, 2, 3}, {0, 1, 2}}), opt);
    CHECK(t.sampled);
    CHECK(t.sample_size() <= 100);
}

TEST_CASE("homogeneity examples") {
    CHECK(homogeneity_values(testutil::graph({{0, 1}, {0, 1}})) == std::vector<double>{2, 2});
    CHECK(homogeneity_values(testutil::graph({{0, 1}, {2, 3, 4}})) == std::vector<double>{1, 1});
    CHECK(homogeneity_values(testutil::graph({{0}, {0, 1}})) == std::vector<double>{0, 1});
    // pairs of {0,1,2}: (0,1)=2, (0,2)=1, (1,2)=1
    const auto h = homogeneity_values(testutil::graph({{0, 1, 2}, {0, 1}}));
    CHECK(h[0] == doctest::Approx(4.0 / 3));
    CHECK(h[1] == 2.0);
}

TEST_CASE("homogeneity needs every pair") {
    const auto p = pair_degrees(testutil::graph({{0, 1}}));
    const std::vector<NodeId> e = {0, 1, 2};
    CHECK(code_of([&] { homogeneity(e, p); }) == Errc::MissingPair);
}

TEST_CASE("homogeneity is invariant under relabeling") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 20;
        const auto g = random_graph(rng, n, 30, 5);
        std::vector<NodeId> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        std::vector<HyperedgeRecord> recs;
        for (const auto& r : g.records()) {
            HyperedgeRecord q;
            for (NodeId v : r.nodes) q.nodes.push_back(perm[v]);
            recs.push_back(q);
        }
        const auto h = homogeneity_values(g);
        const auto hp = homogeneity_values(Hypergraph::from_edges(recs, n));
        for (std::size_t e = 0; e < h.size(); ++e) CHECK(h[e] == doctest::Approx(hp[e]));
    }
}

TEST_CASE("significance examples") {
    const std::vector<double> r1 = {2, 2}, n1 = {1, 1}, r2 = {1, 3}, n2 = {2, 2};
    CHECK(significance(r1, n1) == doctest::Approx(1.0));
    CHECK(significance(r2, n2) == doctest::Approx(0.0));
    CHECK(code_of([&] { significance(n2, n2); }) == Errc::DegenerateDenominator);
    CHECK(code_of([&] { significance(std::vector<double>{}, n2); }) == Errc::EmptyInput);
    const auto g = testutil::graph({{0, 1}, {0, 2}, {0, 1, 3}});
    CHECK(significance(g, g, EgonetMeasure::Density) == 0.0);
    CHECK(significance(g, g, EgonetMeasure::Overlapness) == 0.0);
}

TEST_CASE("significance matches brute-force pairs") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(1 + rng.below(10)), b(1 + rng.below(10));
        for (auto& x : a) x = rng.uniform() * 5;
        for (auto& x : b) x = rng.uniform() * 5;
        double den = 0;
        for (double x : a)
            for (double y : b) den = std::max(den, std::abs(x - y));
        const double num = std::accumulate(a.begin(), a.end(), 0.0) / a.size() -
                           std::accumulate(b.begin(), b.end(), 0.0) / b.size();
        CHECK(significance(a, b) == doctest::Approx(num / den));
    }
}

TEST_CASE("nearest integer binning") {
    CHECK(bin_to_nearest_integer({1.2, 1.5, 2.49, 3.7}) == std::vector<double>{1, 2, 2, 4});
}

}
