#include "hyperlap/generators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_set>

namespace hyperlap {

GeneratorConfig config_from(const Hypergraph& g, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.sizes = g.size_sequence();
    cfg.degrees = g.degree_sequence();
    cfg.levels = 1;
    cfg.weights = {1.0};
    cfg.seed = seed;
    return cfg;
}

namespace {

std::vector<double> resolved_weights(const GeneratorConfig& cfg) {
    if (!cfg.weights.empty()) return cfg.weights;
    std::vector<double> w(static_cast<std::size_t>(std::max(cfg.levels, 1)), 0.0);
    w[0] = 1.0;
    return w;
}

unsigned worker_count(unsigned requested, std::size_t items) {
    unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(t, items / 256 + 1)));
}

// Runs fn(lo, hi, stats) over [0, n) split into contiguous chunks.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, GenerationStats* stats, Fn&& fn) {
    const unsigned workers = worker_count(threads, n);
    std::vector<GenerationStats> local(workers);
    if (workers == 1) {
        fn(0, n, local[0]);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
            pool.emplace_back([&, w, lo, hi] {
                try {
                    fn(lo, hi, local[w]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    if (stats) {
        for (const auto& s : local) {
            stats->draws += s.draws;
            stats->duplicates += s.duplicates;
            stats->group_redraws += s.group_redraws;
        }
    }
}

std::vector<std::size_t> offsets_for(const std::vector<std::uint32_t>& sizes) {
    std::vector<std::size_t> off(sizes.size() + 1, 0);
    for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
    return off;
}

constexpr std::uint64_t kEdgeStream = 0x65646765;

}  // namespace

void validate(const GeneratorConfig& cfg) {
    const std::size_t n = cfg.degrees.size();
    if (cfg.sizes.empty()) throw Error(Errc::InvalidConfig, "no hyperedge sizes given");
    if (cfg.levels < 1 || (cfg.levels > 1 && cfg.levels > max_levels(n)))
        throw Error(Errc::InvalidLevelCount, "level count " + std::to_string(cfg.levels) + " outside [1, floor(log2 " +
                                                 std::to_string(n) + ")]");
    const auto w = resolved_weights(cfg);
    if (w.size() != static_cast<std::size_t>(cfg.levels))
        throw Error(Errc::InvalidWeights, std::to_string(w.size()) + " weights for " + std::to_string(cfg.levels) +
                                              " levels");
    double sum = 0;
    for (double x : w) {
        if (!(x >= 0) || !std::isfinite(x)) throw Error(Errc::InvalidWeights, "weights must be finite and >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw Error(Errc::InvalidWeights, "weights sum to " + std::to_string(sum));
    const std::size_t positive =
        static_cast<std::size_t>(std::count_if(cfg.degrees.begin(), cfg.degrees.end(), [](auto d) { return d > 0; }));
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        const auto s = cfg.sizes[i];
        if (s == 0) throw Error(Errc::InvalidConfig, "hyperedge " + std::to_string(i) + " has size 0");
        if (s > positive)
            throw Error(Errc::InfeasibleSize, "hyperedge size " + std::to_string(s) + " exceeds the " +
                                                  std::to_string(positive) + " nodes of positive degree");
    }
}

// ---------------------------------------------------------------------------
// NodeSampler

NodeSampler::NodeSampler(std::span<const NodeId> order, int levels, std::span<const std::uint64_t> degrees)
    : order_(order.begin(), order.end()), levels_(levels) {
    if (order_.size() != degrees.size()) throw Error(Errc::InvalidConfig, "partition and degree list disagree");
    prefix_.assign(order_.size() + 1, 0);
    positive_.assign(order_.size() + 1, 0);
    for (std::size_t i = 0; i < order_.size(); ++i) {
        const std::uint64_t d = degrees[order_[i]];
        prefix_[i + 1] = prefix_[i] + d;
        positive_[i + 1] = positive_[i] + (d > 0 ? 1 : 0);
    }
}

NodeSampler::NodeSampler(const LevelPartition& partition, std::span<const std::uint64_t> degrees)
    : NodeSampler(partition.order(), partition.num_levels(), degrees) {}

std::size_t NodeSampler::group_begin(int level, std::size_t group) const {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(order_.size()) * group) >> (level - 1));
}

std::uint64_t NodeSampler::group_weight(int level, std::size_t group) const {
    return prefix_[group_end(level, group)] - prefix_[group_begin(level, group)];
}

std::size_t NodeSampler::positive_count(int level, std::size_t group) const {
    return positive_[group_end(level, group)] - positive_[group_begin(level, group)];
}

bool NodeSampler::level_feasible(int level, std::uint32_t size) const {
    for (std::size_t g = 0; g < num_groups(level); ++g)
        if (feasible(level, g, size)) return true;
    return false;
}

NodeId NodeSampler::draw(int level, std::size_t group, Rng& rng) const {
    const std::size_t b = group_begin(level, group), e = group_end(level, group);
    const std::uint64_t x = prefix_[b] + rng.below(prefix_[e] - prefix_[b]);
    // First position whose running sum exceeds x.
    const auto it = std::upper_bound(prefix_.begin() + static_cast<std::ptrdiff_t>(b) + 1,
                                     prefix_.begin() + static_cast<std::ptrdiff_t>(e) + 1, x);
    return order_[static_cast<std::size_t>(it - prefix_.begin()) - 1];
}

void NodeSampler::draw_edge(int level, std::size_t group, std::uint32_t size, Rng& rng, NodeId* out,
                            GenerationStats* stats) const {
    const std::uint64_t budget = 1000ULL * size;
    std::uint64_t draws = 0;
    std::uint32_t filled = 0;
    std::unordered_set<NodeId> seen;
    const bool use_set = size > 32;
    while (filled < size) {
        if (draws == budget)
            throw Error(Errc::NonConvergence, "could not draw " + std::to_string(size) + " distinct nodes in " +
                                                  std::to_string(budget) + " draws");
        ++draws;
        const NodeId v = draw(level, group, rng);
        const bool dup = use_set ? !seen.insert(v).second : std::find(out, out + filled, v) != out + filled;
        if (dup) {
            if (stats) ++stats->duplicates;
            continue;
        }
        out[filled++] = v;
    }
    if (stats) stats->draws += draws;
    std::sort(out, out + size);
}

void NodeSampler::draw_edge_at_level(int level, std::uint32_t size, Rng& rng, NodeId* out,
                                     GenerationStats* stats) const {
    const std::size_t groups = num_groups(level);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const std::size_t g = rng.below(groups);
        if (feasible(level, g, size)) return draw_edge(level, g, size, rng, out, stats);
        if (stats) ++stats->group_redraws;
    }
    // Uniform over the feasible groups, same law as redrawing forever.
    std::vector<std::size_t> ok;
    for (std::size_t g = 0; g < groups; ++g)
        if (feasible(level, g, size)) ok.push_back(g);
    if (ok.empty())
        throw Error(Errc::InfeasibleSize, "no group at level " + std::to_string(level) + " has " +
                                              std::to_string(size) + " nodes of positive degree");
    draw_edge(level, ok[rng.below(ok.size())], size, rng, out, stats);
}

int suitable_levels(std::size_t num_nodes, std::uint32_t size, int levels) {
    int l = 0;
    while (l < levels && (static_cast<unsigned __int128>(size) << l) <= num_nodes) ++l;
    return l;
}

// ---------------------------------------------------------------------------
// Generators

Hypergraph hyper_cl(const GeneratorConfig& cfg, GenerationStats* stats) {
    GeneratorConfig one = cfg;
    one.levels = 1;
    one.weights = {1.0};
    validate(one);
    std::vector<NodeId> order(cfg.degrees.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    const NodeSampler sampler(order, 1, cfg.degrees);

    auto offsets = offsets_for(cfg.sizes);
    std::vector<NodeId> pins(offsets.back());
    parallel_chunks(cfg.sizes.size(), cfg.threads, stats, [&](std::size_t lo, std::size_t hi, GenerationStats& st) {
        for (std::size_t i = lo; i < hi; ++i) {
            Rng rng(derive_seed(cfg.seed, {kEdgeStream, i}));
            sampler.draw_edge(1, 0, cfg.sizes[i], rng, pins.data() + offsets[i], &st);
        }
    });
    std::vector<std::uint8_t> levels(cfg.sizes.size(), 1);
    return Hypergraph::from_csr(std::move(offsets), std::move(pins), std::move(levels), cfg.degrees.size());
}

Hypergraph hyper_lap(const GeneratorConfig& cfg, const LevelPartition& partition, GenerationStats* stats) {
    validate(cfg);
    if (partition.num_nodes() != cfg.degrees.size() || partition.num_levels() != cfg.levels)
        throw Error(Errc::InvalidConfig, "partition does not match the generator config");
    const auto weights = resolved_weights(cfg);
    const NodeSampler sampler(partition, cfg.degrees);
    const std::size_t n = cfg.degrees.size();

    // Level law per distinct size: cumulative weights over levels 1..L_e.
    struct SizePlan {
        std::vector<double> cumulative;
    };
    std::map<std::uint32_t, SizePlan> plans;
    for (std::uint32_t s : cfg.sizes) {
        if (plans.count(s)) continue;
        const int le = suitable_levels(n, s, cfg.levels);
        SizePlan plan;
        double acc = 0;
        bool any = false;
        for (int l = 1; l <= le; ++l) {
            acc += weights[static_cast<std::size_t>(l - 1)];
            plan.cumulative.push_back(acc);
            any = any || (weights[static_cast<std::size_t>(l - 1)] > 0 && sampler.level_feasible(l, s));
        }
        if (!(acc > 0))
            throw Error(Errc::InvalidWeights, "all suitable levels for size " + std::to_string(s) + " have weight 0");
        if (!any)
            throw Error(Errc::InfeasibleSize, "no weighted suitable level has a group with " + std::to_string(s) +
                                                  " nodes of positive degree");
        plans.emplace(s, std::move(plan));
    }

    auto offsets = offsets_for(cfg.sizes);
    std::vector<NodeId> pins(offsets.back());
    std::vector<std::uint8_t> levels(cfg.sizes.size(), 0);
    parallel_chunks(cfg.sizes.size(), cfg.threads, stats, [&](std::size_t lo, std::size_t hi, GenerationStats& st) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint32_t s = cfg.sizes[i];
            const auto& cum = plans.at(s).cumulative;
            Rng rng(derive_seed(cfg.seed, {kEdgeStream, i}));
            for (std::uint64_t attempt = 0;; ++attempt) {
                if (attempt == 1'000'000)
                    throw Error(Errc::NonConvergence, "no feasible group found for hyperedge " + std::to_string(i));
                const double u = rng.uniform() * cum.back();
                const auto li = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
                const int level = static_cast<int>(std::min(li, cum.size() - 1)) + 1;
                const std::size_t g = rng.below(sampler.num_groups(level));
                if (!sampler.feasible(level, g, s)) {
                    ++st.group_redraws;
                    continue;
                }
                sampler.draw_edge(level, g, s, rng, pins.data() + offsets[i], &st);
                levels[i] = static_cast<std::uint8_t>(level);
                break;
            }
        }
    });
    return Hypergraph::from_csr(std::move(offsets), std::move(pins), std::move(levels), n);
}

Hypergraph upscale(const Hypergraph& g, std::uint32_t factor, int levels, const std::vector<double>& weights,
                   std::uint64_t seed, unsigned threads, GenerationStats* stats) {
    if (factor < 1) throw Error(Errc::InvalidConfig, "upscale factor must be >= 1");
    GeneratorConfig cfg;
    const auto sizes = g.size_sequence();
    const auto degrees = g.degree_sequence();
    cfg.sizes.reserve(sizes.size() * factor);
    cfg.degrees.reserve(degrees.size() * factor);
    for (std::uint32_t k = 0; k < factor; ++k) {
        cfg.sizes.insert(cfg.sizes.end(), sizes.begin(), sizes.end());
        cfg.degrees.insert(cfg.degrees.end(), degrees.begin(), degrees.end());
    }
    cfg.levels = levels;
    cfg.weights = weights;
    cfg.seed = seed;
    cfg.threads = threads;
    validate(cfg);
    const auto partition = LevelPartition::make(cfg.degrees.size(), levels, seed);
    return hyper_lap(cfg, partition, stats);
}

}  // namespace hyperlap
