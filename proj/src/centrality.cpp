#include "scirank/centrality.hpp"

#include "scirank/error.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace scirank {

CoauthorGraph::CoauthorGraph(std::vector<std::string> names,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    const auto n = names.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
    std::vector<std::size_t> remap(n);
    names_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        remap[order[i]] = i;
        names_.push_back(std::move(names[order[i]]));
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (names_[i] == names_[i - 1]) {
            throw InvalidArgument("duplicate author node: " + names_[i]);
        }
    }
    adjacency_.resize(n);
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) {
            throw InvalidArgument("edge endpoint out of range");
        }
        const auto u = remap[a];
        const auto v = remap[b];
        if (u == v) {
            continue;
        }
        adjacency_[u].push_back(static_cast<std::uint32_t>(v));
        adjacency_[v].push_back(static_cast<std::uint32_t>(u));
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
}

std::size_t CoauthorGraph::edge_count() const noexcept {
    std::size_t degree_sum = 0;
    for (const auto& adj : adjacency_) {
        degree_sum += adj.size();
    }
    return degree_sum / 2;
}

bool CoauthorGraph::has_edge(std::size_t a, std::size_t b) const {
    const auto& adj = adjacency_.at(a);
    return std::binary_search(adj.begin(), adj.end(), static_cast<std::uint32_t>(b));
}

std::ptrdiff_t CoauthorGraph::find(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) {
        return -1;
    }
    return it - names_.begin();
}

double BetweennessScores::score_of(std::string_view author) const {
    auto it = std::lower_bound(authors.begin(), authors.end(), author);
    if (it == authors.end() || *it != author) {
        return 0.0;
    }
    return scores[static_cast<std::size_t>(it - authors.begin())];
}

CoauthorGraph build_coauthor_graph(const RankedList& results, const Corpus& corpus) {
    std::set<std::string> authors;
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : results.entries) {
        const auto& rec = corpus.at(e.doc_id);
        for (std::size_t i = 0; i < rec.authors.size(); ++i) {
            authors.insert(rec.authors[i]);
            for (std::size_t j = i + 1; j < rec.authors.size(); ++j) {
                if (rec.authors[i] == rec.authors[j]) {
                    continue;
                }
                pairs.emplace(std::min(rec.authors[i], rec.authors[j]), std::max(rec.authors[i], rec.authors[j]));
            }
        }
    }
    std::vector<std::string> names(authors.begin(), authors.end());
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(pairs.size());
    auto index_of = [&](const std::string& s) {
        return static_cast<std::size_t>(std::lower_bound(names.begin(), names.end(), s) - names.begin());
    };
    for (const auto& [a, b] : pairs) {
        edges.emplace_back(index_of(a), index_of(b));
    }
    return CoauthorGraph(std::move(names), edges);
}

BetweennessScores betweenness(const CoauthorGraph& graph) {
    const std::size_t n = graph.node_count();
    BetweennessScores out;
    out.authors = graph.names();
    out.scores.assign(n, 0.0);
    if (n < 3) {
        return out;
    }

    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::ptrdiff_t> dist(n);
    std::vector<std::vector<std::uint32_t>> preds(n);
    std::vector<std::uint32_t> stack;
    stack.reserve(n);
    std::deque<std::uint32_t> queue;

    for (std::uint32_t s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        for (auto& p : preds) {
            p.clear();
        }
        stack.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while (!queue.empty()) {
            const auto v = queue.front();
            queue.pop_front();
            stack.push_back(v);
            for (const auto w : graph.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        while (!stack.empty()) {
            const auto w = stack.back();
            stack.pop_back();
            for (const auto v : preds[w]) {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) {
                out.scores[w] += delta[w];
            }
        }
    }

    // Each unordered pair was accumulated from both endpoints.
    const double nd = static_cast<double>(n);
    const double scale = 2.0 / ((nd - 1.0) * (nd - 2.0)) / 2.0;
    for (auto& v : out.scores) {
        v *= scale;
    }
    return out;
}

RankedList rerank_by_centrality(const RankedList& results, const BetweennessScores& scores, const Corpus& corpus) {
    RankedList out;
    out.query = results.query;
    out.total_hits = results.total_hits;
    out.provenance = Provenance::centrality;
    out.entries.reserve(results.entries.size());
    for (const auto& e : results.entries) {
        const auto& rec = corpus.at(e.doc_id);
        double best = 0.0;
        for (const auto& a : rec.authors) {
            best = std::max(best, scores.score_of(a));
        }
        out.entries.push_back(RankedEntry{e.doc_id, best, e.rank});
    }
    std::stable_sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.rank < b.rank;
    });
    renumber(out);
    return out;
}

std::vector<AuthorScore> central_authors(const BetweennessScores& scores, std::size_t k) {
    if (k < 1) {
        throw InvalidArgument("central_authors requires k >= 1");
    }
    std::vector<AuthorScore> all;
    all.reserve(scores.authors.size());
    for (std::size_t i = 0; i < scores.authors.size(); ++i) {
        all.push_back(AuthorScore{scores.authors[i], scores.scores[i]});
    }
    // authors are name-sorted already, so stability gives the name tie-break.
    std::stable_sort(all.begin(), all.end(),
                     [](const AuthorScore& a, const AuthorScore& b) { return a.score > b.score; });
    if (all.size() > k) {
        all.resize(k);
    }
    return all;
}

} // namespace scirank
