#include "commands.hpp"

#include "hyperlap/fitting.hpp"
#include "hyperlap/generators.hpp"
#include "hyperlap/ingest.hpp"
#include "hyperlap/measures.hpp"
#include "hyperlap/tailstats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

namespace hyperlap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const RunConfig& c) {
    return json{{"command", c.command},
                {"model", c.model},
                {"input", c.input},
                {"other", c.other},
                {"format", c.format},
                {"out", c.out},
                {"seed", c.seed},
                {"threads", c.threads},
                {"dedupe", c.dedupe},
                {"drop_singletons", c.drop_singletons},
                {"sizes_file", c.sizes_file},
                {"degrees_file", c.degrees_file},
                {"levels", c.levels},
                {"weights", c.weights},
                {"resolution", c.resolution},
                {"repeats", c.repeats},
                {"factor", c.factor},
                {"factors", c.factors},
                {"bench_runs", c.bench_runs},
                {"bench_fit", c.bench_fit},
                {"triples", c.triples},
                {"triple_max_size", c.triple_max_size},
                {"triple_budget", c.triple_budget},
                {"distribution", c.distribution},
                {"xmin", c.xmin},
                {"binned", c.binned}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("command", c.command);
    get("model", c.model);
    get("input", c.input);
    get("other", c.other);
    get("format", c.format);
    get("out", c.out);
    get("seed", c.seed);
    get("threads", c.threads);
    get("dedupe", c.dedupe);
    get("drop_singletons", c.drop_singletons);
    get("sizes_file", c.sizes_file);
    get("degrees_file", c.degrees_file);
    get("levels", c.levels);
    get("weights", c.weights);
    get("resolution", c.resolution);
    get("repeats", c.repeats);
    get("factor", c.factor);
    get("factors", c.factors);
    get("bench_runs", c.bench_runs);
    get("bench_fit", c.bench_fit);
    get("triples", c.triples);
    get("triple_max_size", c.triple_max_size);
    get("triple_budget", c.triple_budget);
    get("distribution", c.distribution);
    get("xmin", c.xmin);
    get("binned", c.binned);
    return c;
}

namespace {

Hypergraph load(const RunConfig& c, const std::string& path) {
    if (path.empty()) throw Error(Errc::InvalidConfig, "--input is required");
    LoadOptions o;
    o.dedupe = c.dedupe;
    o.drop_singletons = c.drop_singletons;
    return load_hypergraph(path, parse_format(c.format), o);
}

fs::path out_dir(const RunConfig& c) {
    fs::path p(c.out);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error(Errc::IoError, "cannot create output directory " + p.string());
    return p;
}

json report_header(const RunConfig& c) {
    return json{{"tool", "hyperlap"}, {"version", HYPERLAP_VERSION}, {"seed", c.seed}, {"config", to_json(c)}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
}

std::ofstream open_csv(const fs::path& path, const char* header) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << header << '\n';
    return out;
}

void write_histogram(const fs::path& path, const std::vector<double>& values) {
    auto out = open_csv(path, "value,count");
    if (values.empty()) return;
    for (const auto& [v, n] : DistributionSample(values).histogram()) out << v << ',' << n << '\n';
    if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
}

TripleOptions triple_options(const RunConfig& c) {
    TripleOptions t;
    t.seed = c.seed;
    if (c.triples == "exact") {
        t.max_enum_size = std::numeric_limits<std::size_t>::max();
        t.sample_budget = std::numeric_limits<std::uint64_t>::max();
    } else if (c.triples == "sampled") {
        t.force_sampled = true;
        t.max_enum_size = c.triple_max_size;
        t.sample_budget = c.triple_budget;
    } else if (c.triples == "auto") {
        t.max_enum_size = c.triple_max_size;
        t.sample_budget = c.triple_budget;
    } else {
        throw Error(Errc::InvalidConfig, "--triples must be auto, exact or sampled");
    }
    return t;
}

json triple_info(const TripleDegreeSample& t) {
    return json{{"mode", t.sampled ? "sampled" : "exact"}, {"draws", t.draws}, {"sample_size", t.sample_size()}};
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> as_double(const auto& v) { return {v.begin(), v.end()}; }

std::vector<std::uint64_t> read_integers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open " + path);
    std::vector<std::uint64_t> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::size_t pos = 0;
        try {
            out.push_back(std::stoull(line, &pos));
        } catch (const std::exception&) {
            throw ParseError(path, line_no, "expected a non-negative integer");
        }
    }
    return out;
}

std::vector<double> uniform_weights(int levels) {
    return std::vector<double>(static_cast<std::size_t>(levels), 1.0 / levels);
}

void resolve_levels(RunConfig& c, std::size_t num_nodes) {
    if (c.levels == 0) c.levels = std::max(1, max_levels(num_nodes));
    if (c.weights.empty()) c.weights = uniform_weights(c.levels);
}

json graph_summary(const Hypergraph& g) {
    return json{{"num_nodes", g.num_nodes()},
                {"num_edges", g.num_edges()},
                {"sum_sizes", g.num_pins()},
                {"max_edge_size", g.max_edge_size()}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------

json cmd_stats(const RunConfig& c) {
    const Hypergraph g = load(c, c.input);
    const fs::path dir = out_dir(c);

    const auto ego = egonet_stats(g);
    {
        auto out = open_csv(dir / "egonets.csv", "node,label,num_edges,num_distinct_nodes,sum_sizes,density,overlapness");
        for (const auto& s : ego)
            out << s.node << ',' << (g.labels().empty() ? std::to_string(s.node) : g.labels()[s.node]) << ','
                << s.num_edges << ',' << s.num_distinct_nodes << ',' << s.sum_sizes << ',' << s.density << ','
                << s.overlapness << '\n';
    }
    const auto pairs = pair_degrees(g).values();
    const auto triples = triple_degrees(g, triple_options(c));
    const auto h = homogeneity_values(g);
    write_histogram(dir / "pair_degrees.csv", pairs);
    write_histogram(dir / "triple_degrees.csv", triples.values());
    write_histogram(dir / "homogeneity.csv", h);
    write_histogram(dir / "degrees.csv", as_double(g.degree_sequence()));
    write_histogram(dir / "sizes.csv", as_double(g.size_sequence()));

    json r = report_header(c);
    r["graph"] = graph_summary(g);
    r["triples"] = triple_info(triples);
    r["means"] = {{"egonet_density", mean_of(egonet_values(ego, EgonetMeasure::Density))},
                  {"egonet_overlapness", mean_of(egonet_values(ego, EgonetMeasure::Overlapness))},
                  {"homogeneity", mean_of(h)},
                  {"pair_degree", mean_of(pairs)}};
    r["files"] = {"egonets.csv", "pair_degrees.csv", "triple_degrees.csv", "homogeneity.csv", "degrees.csv",
                  "sizes.csv"};
    write_json(dir / "stats.json", r);
    return r;
}

json cmd_generate(const RunConfig& in) {
    RunConfig c = in;
    GeneratorConfig gen;
    std::vector<std::string> labels;
    if (!c.input.empty()) {
        const Hypergraph g = load(c, c.input);
        gen = config_from(g);
        labels = g.labels();
    } else {
        if (c.sizes_file.empty() || c.degrees_file.empty())
            throw Error(Errc::InvalidConfig, "generate needs --input or both --sizes and --degrees");
        for (auto s : read_integers(c.sizes_file)) gen.sizes.push_back(static_cast<std::uint32_t>(s));
        gen.degrees = read_integers(c.degrees_file);
    }
    gen.seed = c.seed;
    gen.threads = c.threads;
    GenerationStats stats;
    Hypergraph out;
    if (c.model == "hypercl") {
        c.levels = 1;
        c.weights = {1.0};
        out = hyper_cl(gen, &stats);
    } else if (c.model == "hyperlap") {
        resolve_levels(c, gen.degrees.size());
        gen.levels = c.levels;
        gen.weights = c.weights;
        validate(gen);
        out = hyper_lap(gen, LevelPartition::make(gen.degrees.size(), c.levels, c.seed), &stats);
    } else {
        throw Error(Errc::InvalidConfig, "unknown model '" + c.model + "' (expected hypercl or hyperlap)");
    }
    out.set_labels(std::move(labels));
    const fs::path dir = out_dir(c);
    write_hypergraph(out, dir / "generated.txt", true);

    json r = report_header(c);
    r["graph"] = graph_summary(out);
    r["collisions"] = {{"draws", stats.draws}, {"duplicates", stats.duplicates}, {"group_redraws", stats.group_redraws}};
    r["level_shares"] = level_shares(out, c.levels);
    r["files"] = {"generated.txt", "generated.txt.levels"};
    write_json(dir / "generate.json", r);
    return r;
}

json cmd_fit(const RunConfig& in) {
    RunConfig c = in;
    const Hypergraph target = load(c, c.input);
    if (c.levels == 0) c.levels = max_levels(target.num_nodes());
    FitOptions o;
    o.resolution = c.resolution;
    o.levels = c.levels;
    o.repeats = c.repeats;
    o.seed = c.seed;
    o.threads = c.threads;
    FitResult fit = hyper_lap_plus(target, o);
    fit.graph.set_labels(target.labels());
    c.weights = fit.weights;

    const fs::path dir = out_dir(c);
    write_hypergraph(fit.graph, dir / "fitted.txt", true);
    {
        auto out = open_csv(dir / "candidates.csv", "level,fraction,replaced,mean_hhd");
        for (const auto& k : fit.candidates)
            out << k.level << ',' << k.fraction << ',' << k.replaced << ','
                << (std::isfinite(k.mean_hhd) ? std::to_string(k.mean_hhd) : "inf") << '\n';
    }
    json r = report_header(c);
    r["initial_hhd"] = fit.initial_hhd;
    r["final_hhd"] = fit.final_hhd;
    r["levels"] = fit.levels;
    r["weights"] = fit.weights;
    r["level_seconds"] = fit.level_seconds;
    json hist = json::array();
    for (const auto& s : fit.history)
        hist.push_back({{"level", s.level},
                        {"fraction", s.fraction},
                        {"replaced", s.replaced},
                        {"hhd_before", s.hhd_before},
                        {"hhd_after", s.hhd_after}});
    r["history"] = hist;
    json cands = json::array();
    for (const auto& k : fit.candidates) {
        json hs = json::array();
        for (double x : k.hhd) hs.push_back(finite_or_null(x));
        cands.push_back({{"level", k.level},
                         {"fraction", k.fraction},
                         {"replaced", k.replaced},
                         {"hhd", hs},
                         {"mean_hhd", finite_or_null(k.mean_hhd)}});
    }
    r["candidates"] = cands;
    r["files"] = {"fitted.txt", "fitted.txt.levels", "candidates.csv"};
    write_json(dir / "fit.json", r);
    return r;
}

json cmd_compare(const RunConfig& c) {
    if (c.other.empty()) throw Error(Errc::InvalidConfig, "compare needs --other");
    const Hypergraph a = load(c, c.input);
    // Generated graphs legitimately repeat hyperedges, so the second input
    // is never deduplicated.
    RunConfig keep = c;
    keep.dedupe = false;
    const Hypergraph b = load(keep, c.other);
    const auto ea = egonet_stats(a), eb = egonet_stats(b);
    const auto ta = triple_degrees(a, triple_options(c)), tb = triple_degrees(b, triple_options(c));

    auto ks = [](const std::vector<double>& x, const std::vector<double>& y) -> json {
        if (x.empty() || y.empty()) return nullptr;
        return ks_distance(DistributionSample(x), DistributionSample(y));
    };
    auto sig = [&](EgonetMeasure m) -> json {
        try {
            return significance(egonet_values(ea, m), egonet_values(eb, m));
        } catch (const Error& e) {
            if (e.code() != Errc::DegenerateDenominator) throw;
            return nullptr;
        }
    };
    json r = report_header(c);
    r["graphs"] = {graph_summary(a), graph_summary(b)};
    r["ks"] = {{"egonet_density", ks(egonet_values(ea, EgonetMeasure::Density), egonet_values(eb, EgonetMeasure::Density))},
               {"egonet_overlapness",
                ks(egonet_values(ea, EgonetMeasure::Overlapness), egonet_values(eb, EgonetMeasure::Overlapness))},
               {"pair_degree", ks(pair_degrees(a).values(), pair_degrees(b).values())},
               {"triple_degree", ks(ta.values(), tb.values())},
               {"homogeneity", ks(homogeneity_values(a), homogeneity_values(b))}};
    r["significance"] = {{"density", sig(EgonetMeasure::Density)}, {"overlapness", sig(EgonetMeasure::Overlapness)}};
    r["triples"] = {triple_info(ta), triple_info(tb)};
    write_json(out_dir(c) / "compare.json", r);
    return r;
}

json cmd_tailfit(const RunConfig& c) {
    const Hypergraph g = load(c, c.input);
    std::vector<double> values;
    DataKind kind = DataKind::Discrete;
    json extra;
    if (c.distribution == "pair") {
        values = pair_degrees(g).values();
    } else if (c.distribution == "triple") {
        const auto t = triple_degrees(g, triple_options(c));
        values = t.values();
        extra = triple_info(t);
    } else if (c.distribution == "degree") {
        values = as_double(g.degree_sequence());
    } else if (c.distribution == "size") {
        values = as_double(g.size_sequence());
    } else if (c.distribution == "homogeneity") {
        values = homogeneity_values(g);
        if (c.binned)
            values = bin_to_nearest_integer(std::move(values));
        else
            kind = DataKind::Continuous;
    } else {
        throw Error(Errc::InvalidConfig, "unknown distribution '" + c.distribution + "'");
    }
    XminPolicy policy;
    if (c.xmin == "scan") {
        policy = XminPolicy::ks_scan();
    } else if (c.xmin != "min") {
        try {
            policy = XminPolicy::fixed(std::stod(c.xmin));
        } catch (const std::invalid_argument&) {
            throw Error(Errc::InvalidConfig, "--xmin must be min, scan or a number");
        }
    }
    const TailFitResult fit = fit_tails(DistributionSample(values), kind, policy);
    json r = report_header(c);
    r["distribution"] = c.distribution;
    r["fit"] = to_json(fit);
    if (!extra.is_null()) r["triples"] = extra;
    write_json(out_dir(c) / "tailfit.json", r);
    return r;
}

json cmd_upscale(const RunConfig& in) {
    RunConfig c = in;
    const Hypergraph g = load(c, c.input);
    resolve_levels(c, g.num_nodes() * c.factor);
    GenerationStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    const Hypergraph out = upscale(g, c.factor, c.levels, c.weights, c.seed, c.threads, &stats);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const fs::path dir = out_dir(c);
    write_hypergraph(out, dir / "upscaled.txt", true);
    json r = report_header(c);
    r["graph"] = graph_summary(out);
    r["seconds"] = secs;
    r["collisions"] = {{"draws", stats.draws}, {"duplicates", stats.duplicates}, {"group_redraws", stats.group_redraws}};
    r["files"] = {"upscaled.txt", "upscaled.txt.levels"};
    write_json(dir / "upscale.json", r);
    return r;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(Errc::InvalidConfig, "slope needs two or more points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    if (sxx == 0) throw Error(Errc::DegenerateData, "all x values are equal");
    return sxy / sxx;
}

json cmd_bench(const RunConfig& in) {
    RunConfig c = in;
    const Hypergraph g = load(c, c.input);
    // One level count and weight vector for the whole ladder, taken from the
    // base graph, so only the size changes between rows.
    resolve_levels(c, g.num_nodes());
    if (c.factors.empty()) throw Error(Errc::InvalidConfig, "--factors is empty");
    if (c.bench_runs < 1) throw Error(Errc::InvalidConfig, "--runs must be >= 1");

    const fs::path dir = out_dir(c);
    auto csv = open_csv(dir / "bench.csv", c.bench_fit ? "factor,num_edges,sum_sizes,gen_seconds,fit_seconds"
                                                       : "factor,num_edges,sum_sizes,gen_seconds");
    std::vector<double> xs, ys;
    json rows = json::array();
    for (std::uint32_t f : c.factors) {
        double best = std::numeric_limits<double>::infinity();
        Hypergraph out;
        for (int run = 0; run < c.bench_runs; ++run) {
            const auto t0 = std::chrono::steady_clock::now();
            out = upscale(g, f, c.levels, c.weights, c.seed, c.threads);
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        json row = {{"factor", f}, {"num_edges", out.num_edges()}, {"sum_sizes", out.num_pins()}, {"gen_seconds", best}};
        csv << f << ',' << out.num_edges() << ',' << out.num_pins() << ',' << best;
        if (c.bench_fit) {
            FitOptions o;
            o.seed = c.seed;
            o.threads = c.threads;
            o.resolution = c.resolution;
            const auto t0 = std::chrono::steady_clock::now();
            hyper_lap_plus(out, o);
            const double fit_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row["fit_seconds"] = fit_secs;
            csv << ',' << fit_secs;
        }
        csv << '\n';
        rows.push_back(row);
        xs.push_back(static_cast<double>(out.num_pins()));
        ys.push_back(std::max(best, 1e-9));
    }
    json r = report_header(c);
    r["rows"] = rows;
    r["slope"] = xs.size() >= 2 ? json(log_log_slope(xs, ys)) : json(nullptr);
    r["files"] = {"bench.csv"};
    write_json(dir / "bench.json", r);
    return r;
}

json run(const RunConfig& c) {
    if (c.command == "stats") return cmd_stats(c);
    if (c.command == "generate") return cmd_generate(c);
    if (c.command == "fit") return cmd_fit(c);
    if (c.command == "compare") return cmd_compare(c);
    if (c.command == "tailfit") return cmd_tailfit(c);
    if (c.command == "upscale") return cmd_upscale(c);
    if (c.command == "bench") return cmd_bench(c);
    throw Error(Errc::InvalidConfig, "unknown command '" + c.command + "'");
}

json replay(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw Error(Errc::IoError, "cannot open " + report_path);
    json report;
    try {
        report = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, report_path + ": " + e.what());
    }
    if (!report.contains("config")) throw Error(Errc::InvalidConfig, report_path + " has no embedded config");
    return run(config_from_json(report.at("config")));
}

}  // namespace hyperlap::cli
