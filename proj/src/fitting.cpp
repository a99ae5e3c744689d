#include "hyperlap/fitting.hpp"
#include "hyperlap/tailstats.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace hyperlap {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kPartitionStream = 0x70617274;
constexpr std::uint64_t kRemoveStream = 0x72656d6f;
constexpr std::uint64_t kRegenStream = 0x72656765;

std::uint64_t choose2(std::uint64_t k) { return k * (k - 1) / 2; }

double homogeneity_of(std::uint64_t pair_sum, std::size_t size) {
    return size < 2 ? 0.0 : static_cast<double>(pair_sum) / static_cast<double>(choose2(size));
}

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

template <typename Fn>
void for_each_pair(std::span<const NodeId> e, Fn&& fn) {
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) fn(PairDegreeTable::key(e[i], e[j]));
}

}  // namespace

double hhd(const Hypergraph& target, const Hypergraph& candidate) {
    return ks_distance(homogeneity_distribution(target), homogeneity_distribution(candidate));
}

int fraction_count(double resolution) {
    if (!(resolution > 0) || resolution > 1)
        throw Error(Errc::InvalidConfig, "update resolution must lie in (0, 1]");
    return static_cast<int>(std::ceil(1.0 / resolution - 1e-9));
}

double fraction_at(double resolution, int i) { return std::min(1.0, resolution * i); }

// ---------------------------------------------------------------------------
// FitState

FitState::FitState(const Hypergraph& target, Hypergraph start, LevelPartition partition, const FitOptions& options)
    : target_h_(sorted(homogeneity_values(target))),
      partition_(std::move(partition)),
      sampler_(partition_, target.degree_sequence()),
      options_(options) {
    if (target_h_.empty()) throw Error(Errc::EmptyInput, "target hypergraph has no edges");
    if (start.num_nodes() != target.num_nodes())
        throw Error(Errc::InvalidConfig, "start graph and target disagree on node count");
    reset(std::move(start));
}

void FitState::reset(Hypergraph g) {
    current_ = std::move(g);
    pairs_ = pair_degrees(current_);
    const std::size_t m = current_.num_edges();
    pair_sum_.assign(m, 0);
    h_.assign(m, 0.0);
    for (std::size_t e = 0; e < m; ++e) {
        std::uint64_t s = 0;
        for_each_pair(current_.edge(e), [&](std::uint64_t k) { s += pairs_.counts().at(k); });
        pair_sum_[e] = s;
        h_[e] = homogeneity_of(s, current_.edge_size(e));
    }
    sorted_h_ = sorted(h_);
    hhd_ = ks_distance_sorted(target_h_, sorted_h_);
}

std::vector<EdgeId> FitState::eligible(int level) const {
    std::vector<EdgeId> out;
    if (level < 2 || level > partition_.num_levels()) return out;
    std::map<std::size_t, bool> fits;
    const std::size_t n = current_.num_nodes();
    for (std::size_t e = 0; e < current_.num_edges(); ++e) {
        if (current_.level(e).value_or(1) != level - 1) continue;
        const std::size_t s = current_.edge_size(e);
        auto it = fits.find(s);
        if (it == fits.end()) {
            const bool ok = suitable_levels(n, static_cast<std::uint32_t>(s), level) >= level &&
                            sampler_.level_feasible(level, static_cast<std::uint32_t>(s));
            it = fits.emplace(s, ok).first;
        }
        if (it->second) out.push_back(static_cast<EdgeId>(e));
    }
    return out;
}

Proposal FitState::propose(int level, double fraction, int repeat, const std::vector<EdgeId>& eligible) const {
    Proposal p;
    p.level = level;
    p.fraction = fraction;
    p.repeat = repeat;
    if (eligible.empty()) return p;
    std::vector<EdgeId> order = eligible;
    Rng shuffle(derive_seed(options_.seed, {kRemoveStream, static_cast<std::uint64_t>(level),
                                            static_cast<std::uint64_t>(repeat)}));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(order.size()) - 1e-9));
    p.removed.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(k, order.size())));
    p.added.resize(p.removed.size());
    for (std::size_t j = 0; j < p.removed.size(); ++j) {
        const auto s = static_cast<std::uint32_t>(current_.edge_size(p.removed[j]));
        p.added[j].resize(s);
        Rng rng(derive_seed(options_.seed, {kRegenStream, static_cast<std::uint64_t>(level),
                                            static_cast<std::uint64_t>(repeat), j}));
        sampler_.draw_edge_at_level(level, s, rng, p.added[j].data());
    }
    return p;
}

Proposal FitState::propose(int level, double fraction, int repeat) const {
    return propose(level, fraction, repeat, eligible(level));
}

double FitState::evaluate(const Proposal& p, std::vector<double>* values) const {
    std::unordered_map<std::uint64_t, std::int64_t> delta;
    for (EdgeId e : p.removed) for_each_pair(current_.edge(e), [&](std::uint64_t k) { --delta[k]; });
    for (const auto& e : p.added) for_each_pair(e, [&](std::uint64_t k) { ++delta[k]; });

    std::vector<char> removed(current_.num_edges(), 0);
    for (EdgeId e : p.removed) removed[e] = 1;

    // Surviving edges that hold a changed pair.
    std::unordered_map<EdgeId, std::int64_t> change;
    for (const auto& [k, d] : delta) {
        if (d == 0) continue;
        const auto u = static_cast<NodeId>(k >> 32), v = static_cast<NodeId>(k & 0xffffffffu);
        auto a = current_.incident(u), b = current_.incident(v);
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) {
                ++i;
            } else if (b[j] < a[i]) {
                ++j;
            } else {
                if (!removed[a[i]]) change[a[i]] += d;
                ++i;
                ++j;
            }
        }
    }

    std::vector<double> drop, add;
    for (EdgeId e : p.removed) drop.push_back(h_[e]);
    for (const auto& [e, c] : change) {
        if (c == 0) continue;
        drop.push_back(h_[e]);
        add.push_back(homogeneity_of(static_cast<std::uint64_t>(static_cast<std::int64_t>(pair_sum_[e]) + c),
                                     current_.edge_size(e)));
    }
    for (const auto& e : p.added) {
        std::int64_t s = 0;
        for_each_pair(e, [&](std::uint64_t k) {
            const auto it = pairs_.counts().find(k);
            s += (it == pairs_.counts().end() ? 0 : it->second) + delta[k];
        });
        add.push_back(homogeneity_of(static_cast<std::uint64_t>(s), e.size()));
    }
    std::sort(drop.begin(), drop.end());
    std::sort(add.begin(), add.end());

    std::vector<double> kept;
    kept.reserve(sorted_h_.size());
    std::size_t j = 0;
    for (double x : sorted_h_) {
        if (j < drop.size() && drop[j] == x) {
            ++j;
            continue;
        }
        kept.push_back(x);
    }
    std::vector<double> merged;
    merged.reserve(kept.size() + add.size());
    std::merge(kept.begin(), kept.end(), add.begin(), add.end(), std::back_inserter(merged));
    const double d = ks_distance_sorted(target_h_, merged);
    if (values) *values = std::move(merged);
    return d;
}

Hypergraph FitState::materialize(const Proposal& p) const {
    std::vector<const NodeId*> begin(current_.num_edges());
    std::vector<std::size_t> size(current_.num_edges());
    for (std::size_t e = 0; e < current_.num_edges(); ++e) {
        begin[e] = current_.edge(e).data();
        size[e] = current_.edge_size(e);
    }
    std::vector<std::uint8_t> levels = current_.levels();
    if (levels.empty()) levels.assign(current_.num_edges(), 1);
    for (std::size_t j = 0; j < p.removed.size(); ++j) {
        begin[p.removed[j]] = p.added[j].data();
        levels[p.removed[j]] = static_cast<std::uint8_t>(p.level);
    }
    std::vector<std::size_t> offsets(current_.num_edges() + 1, 0);
    std::vector<NodeId> pins;
    pins.reserve(current_.num_pins());
    for (std::size_t e = 0; e < current_.num_edges(); ++e) {
        pins.insert(pins.end(), begin[e], begin[e] + size[e]);
        offsets[e + 1] = pins.size();
    }
    return Hypergraph::from_csr(std::move(offsets), std::move(pins), std::move(levels), current_.num_nodes());
}

void FitState::accept(const Proposal& p) { reset(materialize(p)); }

Hypergraph update_step(const FitState& state, double fraction, int level, int repeat) {
    if (level < 2 || level > state.partition().num_levels())
        throw Error(Errc::InvalidConfig, "update level must lie in [2, L]");
    return state.materialize(state.propose(level, fraction, repeat));
}

std::vector<double> level_shares(const Hypergraph& g, int levels) {
    std::vector<double> w(static_cast<std::size_t>(levels), 0.0);
    if (g.num_edges() == 0) return w;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const int l = g.level(e).value_or(1);
        if (l >= 1 && l <= levels) w[static_cast<std::size_t>(l - 1)] += 1.0;
    }
    for (double& x : w) x /= static_cast<double>(g.num_edges());
    return w;
}

// ---------------------------------------------------------------------------
// HyperLap+

FitResult hyper_lap_plus(const Hypergraph& target, const FitOptions& options) {
    const int n_frac = fraction_count(options.resolution);
    if (options.repeats < 1) throw Error(Errc::InvalidConfig, "repeats must be >= 1");
    if (target.num_edges() == 0) throw Error(Errc::EmptyInput, "target hypergraph has no edges");
    const std::size_t n = target.num_nodes();
    const int levels = options.levels > 0 ? options.levels : max_levels(n);
    if (levels < 1 || levels > max_levels(n))
        throw Error(Errc::InvalidLevelCount, "level count " + std::to_string(levels) + " not supported for " +
                                                 std::to_string(n) + " nodes");

    GeneratorConfig cfg = config_from(target, derive_seed(options.seed, {kInitStream}));
    cfg.threads = options.threads;
    Hypergraph start = hyper_cl(cfg);
    FitState state(target, std::move(start),
                   LevelPartition::make(n, levels, derive_seed(options.seed, {kPartitionStream})), options);

    FitResult result;
    result.levels = levels;
    result.seed = options.seed;
    result.initial_hhd = state.current_hhd();

    for (int level = 2; level <= levels; ++level) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto eligible = state.eligible(level);
        std::vector<FitCandidate> cands(static_cast<std::size_t>(n_frac));
        for (int i = 0; i < n_frac; ++i) {
            auto& c = cands[static_cast<std::size_t>(i)];
            c.level = level;
            c.fraction = fraction_at(options.resolution, i + 1);
            c.hhd.assign(static_cast<std::size_t>(options.repeats), std::numeric_limits<double>::infinity());
        }
        if (!eligible.empty()) {
            const std::size_t tasks = cands.size() * static_cast<std::size_t>(options.repeats);
            std::atomic<std::size_t> next{0};
            auto work = [&] {
                for (std::size_t t; (t = next++) < tasks;) {
                    auto& c = cands[t / static_cast<std::size_t>(options.repeats)];
                    const int r = static_cast<int>(t % static_cast<std::size_t>(options.repeats));
                    const Proposal p = state.propose(level, c.fraction, r, eligible);
                    c.replaced = p.removed.size();
                    c.hhd[static_cast<std::size_t>(r)] = state.evaluate(p);
                }
            };
            const unsigned workers = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                                          : options.threads;
            if (workers <= 1) {
                work();
            } else {
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < std::min<std::size_t>(workers, tasks); ++w) pool.emplace_back(work);
                for (auto& th : pool) th.join();
            }
        }
        for (auto& c : cands)
            c.mean_hhd = std::accumulate(c.hhd.begin(), c.hhd.end(), 0.0) / static_cast<double>(c.hhd.size());

        // Smallest fraction wins ties.
        std::size_t best = 0;
        for (std::size_t i = 1; i < cands.size(); ++i)
            if (cands[i].mean_hhd < cands[best].mean_hhd) best = i;
        const auto& chosen = cands[best];
        const auto realization = static_cast<int>(std::min_element(chosen.hhd.begin(), chosen.hhd.end()) -
                                                  chosen.hhd.begin());
        const double after = chosen.hhd[static_cast<std::size_t>(realization)];
        result.candidates.insert(result.candidates.end(), cands.begin(), cands.end());

        const bool improved = std::isfinite(after) && after < state.current_hhd();
        if (improved) {
            FitStep step;
            step.level = level;
            step.fraction = chosen.fraction;
            step.replaced = chosen.replaced;
            step.hhd_before = state.current_hhd();
            state.accept(state.propose(level, chosen.fraction, realization, eligible));
            step.hhd_after = state.current_hhd();
            result.history.push_back(step);
        }
        result.level_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        if (!improved) break;
    }

    result.final_hhd = state.current_hhd();
    result.weights = level_shares(state.current(), levels);
    result.graph = state.current();
    return result;
}

}  // namespace hyperlap
