// ingest.hpp - dataset readers and writers
#ifndef HYPERLAP_INGEST_HPP
#define HYPERLAP_INGEST_HPP

#include "hyperlap/core.hpp"

#include <filesystem>
#include <string>

namespace hyperlap {

enum class DatasetFormat {
    EdgeListLines,   // one hyperedge per line, labels split on commas/whitespace
    NVertsSimplices  // <name>-nverts.txt + <name>-simplices.txt
};

struct LoadOptions {
    bool dedupe = true;
    bool drop_singletons = true;
};

class ParseError : public Error {
public:
    ParseError(const std::filesystem::path& file, std::size_t line, const std::string& msg);

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// For NVertsSimplices `path` may be a directory `<dir>/` (name taken from the
// directory), a prefix `<dir>/<name>`, or either of the two files.
//
// Within-edge duplicate labels are collapsed first, then singletons are
// dropped, then set-equal edges are deduplicated (first occurrence kept).
// Dense node ids follow first appearance among the surviving edges.
Hypergraph load_hypergraph(const std::filesystem::path& path, DatasetFormat format, const LoadOptions& options = {});

// Parses edge-list text held in memory; `origin` is only used in messages.
Hypergraph parse_edge_list(const std::string& text, const LoadOptions& options = {},
                           const std::filesystem::path& origin = "<memory>");

// Writes one edge per line using node labels when present, ids otherwise.
// With `with_levels`, provenance levels go to `<path>.levels`, one per line.
void write_hypergraph(const Hypergraph& g, const std::filesystem::path& path, bool with_levels = false);

DatasetFormat parse_format(const std::string& name);

}  // namespace hyperlap

#endif  // HYPERLAP_INGEST_HPP
