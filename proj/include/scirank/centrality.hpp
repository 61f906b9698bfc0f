#pragma once

#include "scirank/corpus.hpp"
#include "scirank/index.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scirank {

/// Undirected simple co-authorship graph. Nodes are numbered in ascending
/// author-name order; adjacency lists are sorted.
class CoauthorGraph {
public:
    CoauthorGraph() = default;

    /// Builds from explicit names and edges (by node index). Self-loops and
    /// repeated edges are dropped; names are re-sorted.
    CoauthorGraph(std::vector<std::string> names, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t node_count() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept;

    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<std::uint32_t>& neighbors(std::size_t node) const { return adjacency_.at(node); }
    bool has_edge(std::size_t a, std::size_t b) const;

    /// node index for an author name, or -1.
    std::ptrdiff_t find(std::string_view name) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<std::uint32_t>> adjacency_;
};

/// Normalized betweenness per node index, aligned with graph.names().
struct BetweennessScores {
    std::vector<std::string> authors;
    std::vector<double> scores;

    /// 0 for authors not in the graph.
    double score_of(std::string_view author) const;
};

/// Graph over the authors of every entry in `results`. Throws
/// UnknownDocument for ids missing from the corpus.
CoauthorGraph build_coauthor_graph(const RankedList& results, const Corpus& corpus);

/// Brandes accumulation over BFS shortest paths, normalized by
/// 2 / ((n-1)(n-2)); all zeros when n < 3.
BetweennessScores betweenness(const CoauthorGraph& graph);

/// Stable re-sort by (max author betweenness desc, input rank asc).
RankedList rerank_by_centrality(const RankedList& results, const BetweennessScores& scores, const Corpus& corpus);

struct AuthorScore {
    std::string author;
    double score = 0.0;

    friend bool operator==(const AuthorScore&, const AuthorScore&) = default;
};

/// Top-k authors by score, ties by name.
std::vector<AuthorScore> central_authors(const BetweennessScores& scores, std::size_t k);

} // namespace scirank
