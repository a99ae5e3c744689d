#include "hyperlap/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace hyperlap {

namespace fs = std::filesystem;

ParseError::ParseError(const fs::path& file, std::size_t line, const std::string& msg)
    : Error(Errc::ParseError, file.string() + ":" + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool is_separator(char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_separator(s.front()) && s.front() != ',') s.remove_prefix(1);
    while (!s.empty() && is_separator(s.back()) && s.back() != ',') s.remove_suffix(1);
    return s;
}

// Label-keyed edges before dense id assignment.
using LabelEdge = std::vector<std::string_view>;

Hypergraph finish(std::vector<LabelEdge> raw, const LoadOptions& options, const fs::path& origin) {
    // Collapse duplicates inside each edge, then drop singletons.
    std::vector<LabelEdge> kept;
    kept.reserve(raw.size());
    for (auto& e : raw) {
        LabelEdge unique;
        unique.reserve(e.size());
        for (auto label : e)
            if (std::find(unique.begin(), unique.end(), label) == unique.end()) unique.push_back(label);
        if (options.drop_singletons && unique.size() < 2) continue;
        kept.push_back(std::move(unique));
    }

    // Set-equal edges are detected on sorted label lists so that dedupe does
    // not depend on id assignment.
    if (options.dedupe) {
        std::vector<LabelEdge> deduped;
        std::unordered_set<std::string> seen;
        for (auto& e : kept) {
            LabelEdge sorted = e;
            std::sort(sorted.begin(), sorted.end());
            std::string key;
            for (auto label : sorted) {
                key.append(label);
                key.push_back('\0');
            }
            if (seen.insert(std::move(key)).second) deduped.push_back(std::move(e));
        }
        kept = std::move(deduped);
    }

    if (kept.empty()) throw Error(Errc::EmptyDataset, "no hyperedges survive preprocessing in " + origin.string());

    std::unordered_map<std::string_view, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<HyperedgeRecord> records(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto& nodes = records[i].nodes;
        nodes.reserve(kept[i].size());
        for (auto label : kept[i]) {
            auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(labels.size()));
            if (inserted) labels.emplace_back(label);
            nodes.push_back(it->second);
        }
    }
    Hypergraph g = Hypergraph::from_edges(records, labels.size());
    g.set_labels(std::move(labels));
    return g;
}

void split_labels(std::string_view line, LabelEdge& out) {
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_separator(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_separator(line[j])) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        ++line_no;
        fn(line, line_no);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

std::vector<LabelEdge> parse_edge_lines(std::string_view text, const fs::path& origin) {
    std::vector<LabelEdge> edges;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') return;
        LabelEdge e;
        split_labels(t, e);
        if (e.empty()) throw ParseError(origin, line_no, "line holds separators but no node labels");
        edges.push_back(std::move(e));
    });
    return edges;
}

struct NVertsFiles {
    fs::path nverts;
    fs::path simplices;
};

NVertsFiles resolve_nverts(const fs::path& path) {
    const std::string nv_suffix = "-nverts.txt";
    const std::string sx_suffix = "-simplices.txt";
    fs::path prefix;
    if (fs::is_directory(path)) {
        fs::path dir = path;
        if (!dir.has_filename()) dir = dir.parent_path();
        prefix = dir / dir.filename();
    } else {
        std::string s = path.string();
        auto ends_with = [&](const std::string& suffix) {
            return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
        };
        if (ends_with(nv_suffix))
            prefix = s.substr(0, s.size() - nv_suffix.size());
        else if (ends_with(sx_suffix))
            prefix = s.substr(0, s.size() - sx_suffix.size());
        else
            prefix = path;
    }
    return {fs::path(prefix.string() + nv_suffix), fs::path(prefix.string() + sx_suffix)};
}

std::vector<LabelEdge> parse_nverts(std::string_view nverts_text, std::string_view simplices_text,
                                    const NVertsFiles& files) {
    std::vector<std::string_view> stream;
    for_each_line(simplices_text, [&](std::string_view line, std::size_t line_no) {
        std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') return;
        LabelEdge tokens;
        split_labels(t, tokens);
        if (tokens.size() != 1) throw ParseError(files.simplices, line_no, "expected exactly one node label");
        stream.push_back(tokens.front());
    });

    std::vector<LabelEdge> edges;
    std::size_t cursor = 0;
    for_each_line(nverts_text, [&](std::string_view line, std::size_t line_no) {
        std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') return;
        std::size_t count = 0;
        for (char c : t) {
            if (c < '0' || c > '9') throw ParseError(files.nverts, line_no, "expected a non-negative integer");
            count = count * 10 + static_cast<std::size_t>(c - '0');
        }
        if (count == 0) throw ParseError(files.nverts, line_no, "hyperedge of size 0");
        if (cursor + count > stream.size())
            throw ParseError(files.nverts, line_no, "simplices file ends before this hyperedge is complete");
        edges.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(cursor),
                           stream.begin() + static_cast<std::ptrdiff_t>(cursor + count));
        cursor += count;
    });
    if (cursor != stream.size())
        throw ParseError(files.simplices, stream.size(),
                         std::to_string(stream.size() - cursor) + " node labels left over after the last hyperedge");
    return edges;
}

}  // namespace

Hypergraph parse_edge_list(const std::string& text, const LoadOptions& options, const fs::path& origin) {
    return finish(parse_edge_lines(text, origin), options, origin);
}

Hypergraph load_hypergraph(const fs::path& path, DatasetFormat format, const LoadOptions& options) {
    if (format == DatasetFormat::EdgeListLines) {
        const std::string text = read_file(path);
        return finish(parse_edge_lines(text, path), options, path);
    }
    const NVertsFiles files = resolve_nverts(path);
    const std::string nverts = read_file(files.nverts);
    const std::string simplices = read_file(files.simplices);
    return finish(parse_nverts(nverts, simplices, files), options, files.nverts);
}

void write_hypergraph(const Hypergraph& g, const fs::path& path, bool with_levels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    const auto& labels = g.labels();
    std::string line;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        line.clear();
        for (NodeId v : g.edge(e)) {
            if (!line.empty()) line.push_back(' ');
            line += labels.empty() ? std::to_string(v) : labels[v];
        }
        line.push_back('\n');
        out << line;
    }
    if (!out) throw Error(Errc::IoError, "failed writing " + path.string());

    if (with_levels) {
        std::ofstream lv(path.string() + ".levels", std::ios::binary);
        if (!lv) throw Error(Errc::IoError, "cannot write " + path.string() + ".levels");
        for (std::size_t e = 0; e < g.num_edges(); ++e) lv << g.level(e).value_or(0) << '\n';
        if (!lv) throw Error(Errc::IoError, "failed writing " + path.string() + ".levels");
    }
}

DatasetFormat parse_format(const std::string& name) {
    if (name == "edgelist") return DatasetFormat::EdgeListLines;
    if (name == "nverts") return DatasetFormat::NVertsSimplices;
    throw Error(Errc::InvalidConfig, "unknown dataset format '" + name + "' (expected edgelist or nverts)");
}

}  // namespace hyperlap
