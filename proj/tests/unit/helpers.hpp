// helpers.hpp - small builders shared by the unit tests
#ifndef HYPERLAP_TEST_HELPERS_HPP
#define HYPERLAP_TEST_HELPERS_HPP

#include "hyperlap/core.hpp"

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace testutil {

inline hyperlap::Hypergraph graph(std::initializer_list<std::vector<hyperlap::NodeId>> edges, std::size_t n = 0) {
    std::vector<hyperlap::HyperedgeRecord> recs;
    std::size_t top = 0;
    for (const auto& e : edges) {
        recs.push_back({e, std::nullopt});
        for (auto v : e) top = std::max<std::size_t>(top, v + 1);
    }
    return hyperlap::Hypergraph::from_edges(recs, n ? n : top);
}

inline std::filesystem::path data_file(const std::string& rel) {
    return std::filesystem::path(HYPERLAP_SOURCE_DIR) / "data" / rel;
}

inline std::filesystem::path contact_high() { return data_file("contact-high/contact-high.txt"); }

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("hyperlap_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testutil

#endif
