// commands.hpp - command implementations behind the hyperlap CLI
#ifndef HYPERLAP_CLI_COMMANDS_HPP
#define HYPERLAP_CLI_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace hyperlap::cli {

// Fully resolved settings of one run. Reports embed it so a run can be
// replayed from its own output.
struct RunConfig {
    std::string command;  // stats generate fit compare tailfit upscale bench
    std::string model = "hyperlap";  // generate: hypercl | hyperlap
    std::string input;
    std::string other;  // compare: second input
    std::string format = "edgelist";
    std::string out = ".";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool dedupe = true;
    bool drop_singletons = true;

    // explicit generator inputs (one integer per line)
    std::string sizes_file;
    std::string degrees_file;

    int levels = 0;  // 0 = floor(log2 |V|)
    std::vector<double> weights;  // empty = uniform
    double resolution = 0.05;
    int repeats = 1;
    std::uint32_t factor = 1;
    std::vector<std::uint32_t> factors = {5, 25, 125, 625};
    int bench_runs = 3;
    bool bench_fit = false;

    std::string triples = "auto";  // auto | exact | sampled
    std::size_t triple_max_size = 100;
    std::uint64_t triple_budget = 10'000'000;

    std::string distribution = "pair";  // pair triple degree size homogeneity
    std::string xmin = "min";           // min | scan | <number>
    bool binned = false;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Each returns the report it wrote to <out>/<command>.json.
nlohmann::json run(const RunConfig& cfg);
nlohmann::json cmd_stats(const RunConfig& cfg);
nlohmann::json cmd_generate(const RunConfig& cfg);
nlohmann::json cmd_fit(const RunConfig& cfg);
nlohmann::json cmd_compare(const RunConfig& cfg);
nlohmann::json cmd_tailfit(const RunConfig& cfg);
nlohmann::json cmd_upscale(const RunConfig& cfg);
nlohmann::json cmd_bench(const RunConfig& cfg);

// Reads the config embedded in a report and runs it again.
nlohmann::json replay(const std::string& report_path);

// Least-squares slope of log(y) on log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hyperlap::cli

#endif  // HYPERLAP_CLI_COMMANDS_HPP
