#include "helpers.hpp"

#include "hyperlap/generators.hpp"
#include "hyperlap/ingest.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace hyperlap;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidConfig;
}

GeneratorConfig uniform_cfg(std::size_t n, std::uint32_t s, std::size_t m, int levels, std::vector<double> w,
                            std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.sizes.assign(m, s);
    cfg.degrees.assign(n, 1);
    cfg.levels = levels;
    cfg.weights = std::move(w);
    cfg.seed = seed;
    return cfg;
}

std::vector<std::uint32_t> sorted_sizes(const Hypergraph& g) {
    auto s = g.size_sequence();
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

TEST_SUITE("generators") {

TEST_CASE("only one pair is possible") {
    GeneratorConfig cfg;
    cfg.sizes = {2};
    cfg.degrees = {1, 1};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cfg.seed = seed;
        const auto g = hyper_cl(cfg);
        const auto e = g.edge(0);
        CHECK(std::vector<NodeId>(e.begin(), e.end()) == std::vector<NodeId>{0, 1});
    }
}

TEST_CASE("node draws follow the degrees") {
    GeneratorConfig cfg;
    const std::size_t n = 100000;
    cfg.sizes.assign(n, 1);
    cfg.degrees = {3, 1};
    cfg.seed = 5;
    const auto g = hyper_cl(cfg);
    const double p = 0.75, sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(g.degree(0) - n * p) < 3 * sigma);
}

TEST_CASE("sampler probabilities inside a group") {
    const std::vector<NodeId> order = {3, 1, 0, 2};
    const std::vector<std::uint64_t> deg = {1, 2, 0, 5};
    const NodeSampler s(order, 2, deg);
    CHECK(s.group_weight(1, 0) == 8);
    CHECK(s.group_weight(2, 0) == 7);  // nodes 3, 1
    CHECK(s.group_weight(2, 1) == 1);  // nodes 0, 2
    CHECK(s.positive_count(2, 1) == 1);
    CHECK(!s.feasible(2, 1, 2));
    CHECK(s.level_feasible(2, 2));
    Rng rng(4);
    std::map<NodeId, int> hits;
    for (int i = 0; i < 70000; ++i) ++hits[s.draw(2, 0, rng)];
    CHECK(hits[3] == doctest::Approx(50000).epsilon(0.02));
    CHECK(hits[1] == doctest::Approx(20000).epsilon(0.03));
    for (int i = 0; i < 1000; ++i) CHECK(s.draw(2, 1, rng) == 0);
}

TEST_CASE("zero-degree nodes are never drawn") {
    GeneratorConfig cfg;
    cfg.sizes.assign(2000, 3);
    cfg.degrees = {0, 4, 0, 2, 7, 1, 0, 3};
    cfg.seed = 1;
    const auto g = hyper_cl(cfg);
    for (NodeId v : {0u, 2u, 6u}) CHECK(g.degree(v) == 0);
    cfg.levels = 2;
    cfg.weights = {0.5, 0.5};
    const auto p = LevelPartition::make(8, 2, 3);
    const auto h = hyper_lap(cfg, p);
    for (NodeId v : {0u, 2u, 6u}) CHECK(h.degree(v) == 0);
}

TEST_CASE("hypercl preserves sizes and degrees on contact-high") {
    const auto target = load_hypergraph(testutil::contact_high(), DatasetFormat::EdgeListLines);
    const auto d = target.degree_sequence();
    std::vector<double> avg(d.size(), 0.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = hyper_cl(config_from(target, seed));
        CHECK(sorted_sizes(g) == sorted_sizes(target));
        for (std::size_t v = 0; v < d.size(); ++v) avg[v] += g.degree(static_cast<NodeId>(v)) / 10.0;
    }
    double err = 0, mean = 0;
    for (std::size_t v = 0; v < d.size(); ++v) {
        err += std::abs(avg[v] - static_cast<double>(d[v]));
        mean += static_cast<double>(d[v]);
    }
    CHECK(err / mean < 0.1);
}

TEST_CASE("hypercl records level 1") {
    const auto g = hyper_cl(uniform_cfg(20, 3, 50, 1, {}, 2));
    for (std::size_t e = 0; e < g.num_edges(); ++e) CHECK(g.level(e) == 1);
}

TEST_CASE("one level draws like hypercl") {
    GeneratorConfig cfg;
    const std::size_t n = 100000;
    cfg.sizes.assign(n, 1);
    cfg.degrees = {3, 1};
    cfg.seed = 6;
    const auto g = hyper_lap(cfg, LevelPartition::from_order({1, 0}, 1));
    const double p = 0.75, sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(g.degree(0) - n * p) < 3 * sigma);
    for (std::size_t e = 0; e < 100; ++e) CHECK(g.level(e) == 1);
}

TEST_CASE("level 2 group 0 probability for 8 nodes") {
    const std::size_t m = 40000;
    const auto cfg = uniform_cfg(8, 2, m, 2, {0.5, 0.5}, 21);
    const auto p = LevelPartition::make(8, 2, 4);
    const auto g = hyper_lap(cfg, p);
    std::size_t hits = 0;
    for (std::size_t e = 0; e < m; ++e)
        if (g.level(e) == 2 && p.group_of(2, g.edge(e)[0]) == 0) ++hits;
    const double sigma = std::sqrt(m * 0.25 * 0.75);
    CHECK(std::abs(static_cast<double>(hits) - 0.25 * m) < 3 * sigma);
}

TEST_CASE("per group frequencies follow the level weights") {
    const std::size_t m = 100000;
    const std::vector<double> w = {0.2, 0.3, 0.5};
    const auto cfg = uniform_cfg(64, 4, m, 3, w, 31);
    const auto p = LevelPartition::make(64, 3, 8);
    const auto g = hyper_lap(cfg, p);
    std::map<std::pair<int, std::size_t>, std::size_t> counts;
    for (std::size_t e = 0; e < m; ++e) {
        const int l = *g.level(e);
        const auto grp = p.group_of(l, g.edge(e)[0]);
        for (NodeId v : g.edge(e)) CHECK(p.group_of(l, v) == grp);
        ++counts[{l, grp}];
    }
    int outside = 0;
    for (int l = 1; l <= 3; ++l)
        for (std::size_t grp = 0; grp < p.num_groups(l); ++grp) {
            const double q = w[l - 1] / static_cast<double>(p.num_groups(l));
            const double sigma = std::sqrt(m * q * (1 - q));
            outside += std::abs(static_cast<double>(counts[{l, grp}]) - m * q) >= 3 * sigma;
        }
    CHECK(outside == 0);
}

TEST_CASE("levels too small for an edge get no weight") {
    CHECK(suitable_levels(64, 4, 10) == 5);
    CHECK(suitable_levels(64, 4, 3) == 3);
    CHECK(suitable_levels(10, 3, 3) == 2);
    CHECK(suitable_levels(10, 11, 3) == 0);
    CHECK(suitable_levels(10, 1, 3) == 3);
    // size 5 on 16 nodes fits levels 1 and 2 only
    auto cfg = uniform_cfg(16, 5, 3000, 4, {0.25, 0.25, 0.25, 0.25}, 3);
    const auto g = hyper_lap(cfg, LevelPartition::make(16, 4, 1));
    std::size_t l2 = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        CHECK(*g.level(e) <= 2);
        l2 += *g.level(e) == 2;
    }
    CHECK(static_cast<double>(l2) / 3000 == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("sizes are preserved exactly") {
    const auto target = load_hypergraph(testutil::contact_high(), DatasetFormat::EdgeListLines);
    auto cfg = config_from(target, 4);
    cfg.levels = 4;
    cfg.weights = {0.1, 0.2, 0.3, 0.4};
    const auto g = hyper_lap(cfg, LevelPartition::make(target.num_nodes(), 4, 4));
    CHECK(sorted_sizes(g) == sorted_sizes(target));
    CHECK(g.num_nodes() == target.num_nodes());
}

TEST_CASE("output is deterministic and thread independent") {
    const auto target = load_hypergraph(testutil::contact_high(), DatasetFormat::EdgeListLines);
    auto cfg = config_from(target, 17);
    cfg.levels = 5;
    cfg.weights = {0.2, 0.2, 0.2, 0.2, 0.2};
    const auto p = LevelPartition::make(target.num_nodes(), 5, 2);
    const auto one = hyper_lap(cfg, p);
    CHECK(one.same_edges(hyper_lap(cfg, p)));
    for (unsigned t : {2u, 3u, 8u}) {
        cfg.threads = t;
        const auto many = hyper_lap(cfg, p);
        CHECK(one.same_edges(many));
        CHECK(one.levels() == many.levels());
    }
    cfg.seed = 18;
    CHECK(!one.same_edges(hyper_lap(cfg, p)));
}

TEST_CASE("invalid configs") {
    auto cfg = uniform_cfg(8, 2, 10, 2, {0.5, 0.5}, 1);
    const auto p = LevelPartition::make(8, 2, 1);
    auto bad = cfg;
    bad.weights = {0.5, 0.6};
    CHECK(code_of([&] { hyper_lap(bad, p); }) == Errc::InvalidWeights);
    bad.weights = {1.5, -0.5};
    CHECK(code_of([&] { hyper_lap(bad, p); }) == Errc::InvalidWeights);
    bad.weights = {1.0};
    CHECK(code_of([&] { hyper_lap(bad, p); }) == Errc::InvalidWeights);
    bad = cfg;
    bad.levels = 4;
    bad.weights = {0.25, 0.25, 0.25, 0.25};
    CHECK(code_of([&] { validate(bad); }) == Errc::InvalidLevelCount);
    bad = cfg;
    bad.sizes = {9};
    CHECK(code_of([&] { hyper_cl(bad); }) == Errc::InfeasibleSize);
    bad = cfg;
    bad.degrees = {1, 0, 0, 0, 0, 0, 0, 0};
    CHECK(code_of([&] { hyper_cl(bad); }) == Errc::InfeasibleSize);
    // size 5 only fits level 1, which has no weight
    bad = uniform_cfg(8, 5, 3, 2, {0.0, 1.0}, 1);
    CHECK(code_of([&] { hyper_lap(bad, p); }) == Errc::InvalidWeights);
}

TEST_CASE("collision budget") {
    GeneratorConfig cfg;
    cfg.sizes = {3};
    cfg.degrees = {1'000'000'000'000'000'000ULL, 1, 1};
    CHECK(code_of([&] { hyper_cl(cfg); }) == Errc::NonConvergence);
}

TEST_CASE("generation stats count draws") {
    GenerationStats st;
    const auto g = hyper_cl(uniform_cfg(10, 5, 100, 1, {}, 3), &st);
    CHECK(st.draws >= 500);
    CHECK(st.draws == 500 + st.duplicates);
}

TEST_CASE("upscale tiles the lists") {
    const auto g = testutil::graph({{0, 1, 2}, {1, 2}, {2, 3}, {0, 3}});
    const auto one = upscale(g, 1, 1, {1.0}, 5);
    CHECK(one.num_nodes() == 4);
    CHECK(one.num_edges() == 4);
    const auto five = upscale(g, 5, 2, {0.5, 0.5}, 5);
    CHECK(five.num_nodes() == 20);
    CHECK(five.num_edges() == 20);
    auto expect = g.size_sequence();
    std::vector<std::uint32_t> tiled;
    for (int i = 0; i < 5; ++i) tiled.insert(tiled.end(), expect.begin(), expect.end());
    std::sort(tiled.begin(), tiled.end());
    CHECK(sorted_sizes(five) == tiled);
    CHECK(code_of([&] { upscale(g, 0, 1, {1.0}, 5); }) == Errc::InvalidConfig);
}

}
