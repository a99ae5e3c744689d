// hyperlap command-line entry point
#include "cli/commands.hpp"

#include "hyperlap/core.hpp"

#include <CLI11.hpp>

#include <iostream>

using hyperlap::cli::RunConfig;

namespace {

void add_common(CLI::App* app, RunConfig& c, bool needs_input = true) {
    auto* in = app->add_option("-i,--input", c.input, "input hypergraph (file, or nverts prefix/directory)");
    if (needs_input) in->required();
    app->add_option("--format", c.format, "input format")->check(CLI::IsMember({"edgelist", "nverts"}));
    app->add_option("-o,--out", c.out, "output directory");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    app->add_flag("--dedupe,!--keep-dupes", c.dedupe, "drop set-equal duplicate hyperedges (default on)");
    app->add_flag("--drop-singletons,!--keep-singletons", c.drop_singletons, "drop size-1 hyperedges (default on)");
}

void add_triples(CLI::App* app, RunConfig& c) {
    app->add_option("--triples", c.triples, "triple degree mode")->check(CLI::IsMember({"auto", "exact", "sampled"}));
    app->add_option("--max-enum-size", c.triple_max_size, "largest edge enumerated exactly in auto mode");
    app->add_option("--budget", c.triple_budget, "triple occurrences enumerated, or draws when sampling");
}

void add_levels(CLI::App* app, RunConfig& c) {
    app->add_option("--levels", c.levels, "number of levels L (default floor(log2 |V|))");
    app->add_option("--weights", c.weights, "level weights w1,...,wL (default uniform)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypergraph overlap measures and HyperCL / HyperLap / HyperLap+ generators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(HYPERLAP_VERSION));
    RunConfig c;
    std::string report;

    auto* stats = app.add_subcommand("stats", "egonet, pair/triple degree and homogeneity distributions");
    add_common(stats, c);
    add_triples(stats, c);

    auto* gen = app.add_subcommand("generate", "generate a hypergraph with HyperCL or HyperLap");
    gen->add_option("model", c.model, "hypercl or hyperlap")->required()->check(CLI::IsMember({"hypercl", "hyperlap"}));
    add_common(gen, c, false);
    gen->add_option("--sizes", c.sizes_file, "file with one hyperedge size per line");
    gen->add_option("--degrees", c.degrees_file, "file with one node degree per line");
    add_levels(gen, c);

    auto* fit = app.add_subcommand("fit", "fit HyperLap level weights with HyperLap+");
    add_common(fit, c);
    fit->add_option("--levels", c.levels, "number of levels L (default floor(log2 |V|))");
    fit->add_option("--resolution", c.resolution, "update resolution p")->check(CLI::Range(1e-6, 1.0));
    fit->add_option("--repeats", c.repeats, "realizations per fraction candidate")->check(CLI::PositiveNumber);

    auto* cmp = app.add_subcommand("compare", "KS statistics and significance between two hypergraphs");
    add_common(cmp, c);
    cmp->add_option("--other", c.other, "second hypergraph, treated as the randomized one and never deduplicated")->required();
    add_triples(cmp, c);

    auto* tail = app.add_subcommand("tailfit", "heavy-tail log-likelihood ratios against the exponential");
    add_common(tail, c);
    tail->add_option("--distribution", c.distribution, "which distribution to fit")
        ->check(CLI::IsMember({"pair", "triple", "degree", "size", "homogeneity"}));
    tail->add_option("--xmin", c.xmin, "min, scan, or a number");
    tail->add_flag("--binned", c.binned, "round homogeneity to integers and fit discrete models");
    add_triples(tail, c);

    auto* up = app.add_subcommand("upscale", "HyperLap on tiled size and degree lists");
    add_common(up, c);
    up->add_option("--factor", c.factor, "scale factor")->check(CLI::PositiveNumber);
    add_levels(up, c);

    auto* bench = app.add_subcommand("bench", "generation time over an upscaling ladder");
    add_common(bench, c);
    bench->add_option("--factors", c.factors, "scale factors")->delimiter(',');
    bench->add_option("--runs", c.bench_runs, "timed runs per factor (minimum kept)")->check(CLI::PositiveNumber);
    bench->add_flag("--fit", c.bench_fit, "also time HyperLap+ on each upscaled graph");
    bench->add_option("--resolution", c.resolution, "update resolution p for --fit");
    add_levels(bench, c);

    auto* rep = app.add_subcommand("replay", "re-run the config embedded in a report");
    rep->add_option("report", report, "report JSON written by an earlier run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json r;
        if (rep->parsed()) {
            r = hyperlap::cli::replay(report);
        } else {
            c.command = app.get_subcommands().front()->get_name();
            r = hyperlap::cli::run(c);
        }
        const auto& cfg = r.at("config");
        std::cout << cfg.at("command").get<std::string>() << ": wrote " << cfg.at("out").get<std::string>() << '\n';
        return 0;
    } catch (const hyperlap::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
