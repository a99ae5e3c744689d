// fitting.hpp - HyperLap+ level-weight fitting
#ifndef HYPERLAP_FITTING_HPP
#define HYPERLAP_FITTING_HPP

#include "hyperlap/core.hpp"
#include "hyperlap/generators.hpp"
#include "hyperlap/measures.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace hyperlap {

// KS distance between the hyperedge homogeneity distributions.
double hhd(const Hypergraph& target, const Hypergraph& candidate);

struct FitOptions {
    double resolution = 0.05;  // p; fraction candidates are p, 2p, ..., 1
    int levels = 0;            // 0 = floor(log2 |V|)
    int repeats = 1;           // realizations per fraction candidate
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Number of fraction candidates and the i-th one (1-based), capped at 1.
int fraction_count(double resolution);
double fraction_at(double resolution, int i);

// One candidate move: edges removed from level-1 and their replacements.
struct Proposal {
    int level = 0;
    double fraction = 0.0;
    int repeat = 0;
    std::vector<EdgeId> removed;              // indices into the current graph
    std::vector<std::vector<NodeId>> added;   // added[j] replaces removed[j], sorted
};

class FitState {
public:
    FitState(const Hypergraph& target, Hypergraph start, LevelPartition partition, const FitOptions& options);

    const Hypergraph& current() const { return current_; }
    const LevelPartition& partition() const { return partition_; }
    const NodeSampler& sampler() const { return sampler_; }
    double current_hhd() const { return hhd_; }
    const std::vector<double>& target_homogeneity() const { return target_h_; }  // sorted
    const std::vector<double>& homogeneity() const { return h_; }                // per edge
    const std::vector<double>& sorted_homogeneity() const { return sorted_h_; }

    // Edges at provenance level `level`-1 whose size fits level `level` and
    // for which some level-`level` group has enough positive-degree nodes.
    std::vector<EdgeId> eligible(int level) const;

    // Removes the first ceil(fraction * |eligible|) edges of a shuffle fixed
    // by (seed, level, repeat) and regenerates each at `level` from its own
    // substream, so larger fractions extend smaller ones.
    Proposal propose(int level, double fraction, int repeat, const std::vector<EdgeId>& eligible) const;
    Proposal propose(int level, double fraction, int repeat = 0) const;

    // HHD of the proposal against the target from an incremental update of
    // pair degrees. With `values`, also returns the candidate's sorted
    // homogeneity multiset.
    double evaluate(const Proposal& p, std::vector<double>* values = nullptr) const;

    Hypergraph materialize(const Proposal& p) const;
    void accept(const Proposal& p);

private:
    void reset(Hypergraph g);

    std::vector<double> target_h_;
    Hypergraph current_;
    LevelPartition partition_;
    NodeSampler sampler_;
    FitOptions options_;
    PairDegreeTable pairs_;
    std::vector<std::uint64_t> pair_sum_;  // per edge, sum of its pair degrees
    std::vector<double> h_;
    std::vector<double> sorted_h_;
    double hhd_ = 0.0;
};

// A copy of the current graph after one update; the current graph itself
// when no edge is eligible.
Hypergraph update_step(const FitState& state, double fraction, int level, int repeat = 0);

struct FitCandidate {
    int level = 0;
    double fraction = 0.0;
    std::size_t replaced = 0;
    std::vector<double> hhd;  // one per repeat; +inf when nothing is eligible
    double mean_hhd = std::numeric_limits<double>::infinity();
};

struct FitStep {
    int level = 0;
    double fraction = 0.0;
    std::size_t replaced = 0;
    double hhd_before = 0.0;
    double hhd_after = 0.0;
};

struct FitResult {
    Hypergraph graph;
    int levels = 0;
    std::vector<double> weights;  // share of edges per provenance level
    std::vector<FitStep> history;  // accepted steps only
    std::vector<FitCandidate> candidates;
    std::vector<double> level_seconds;  // wall clock per evaluated level
    double initial_hhd = 0.0;
    double final_hhd = 0.0;
    std::uint64_t seed = 0;
};

FitResult hyper_lap_plus(const Hypergraph& target, const FitOptions& options = {});

// Per-level edge shares of a graph with provenance levels.
std::vector<double> level_shares(const Hypergraph& g, int levels);

}  // namespace hyperlap

#endif  // HYPERLAP_FITTING_HPP
