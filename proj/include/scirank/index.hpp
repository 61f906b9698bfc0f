#pragma once

#include "scirank/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scirank {

struct Posting {
    std::uint32_t doc;  ///< index into InvertedIndex::docs()
    std::uint32_t tf;   ///< raw in-document term count

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct IndexedDoc {
    std::string id;
    std::uint32_t length = 0;  ///< indexed token count
    bool has_abstract = false;

    friend bool operator==(const IndexedDoc&, const IndexedDoc&) = default;
};

/// Term -> postings over title, abstract and controlled terms.
class InvertedIndex {
public:
    InvertedIndex() = default;
    InvertedIndex(std::vector<IndexedDoc> docs, std::map<std::string, std::vector<Posting>, std::less<>> postings);

    std::size_t doc_count() const noexcept { return docs_.size(); }
    const std::vector<IndexedDoc>& docs() const noexcept { return docs_; }

    /// Postings sorted by doc slot; empty span for unknown terms.
    const std::vector<Posting>& postings(std::string_view term) const;
    std::size_t df(std::string_view term) const { return postings(term).size(); }
    std::size_t term_count() const noexcept { return postings_.size(); }

    /// 1 + ln(N / (df + 1)).
    double idf(std::string_view term) const;

    const std::map<std::string, std::vector<Posting>, std::less<>>& all_postings() const noexcept {
        return postings_;
    }

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

private:
    std::vector<IndexedDoc> docs_;
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

/// Disjunctive bag of tokens.
struct Query {
    std::vector<std::string> terms;

    static Query parse(std::string_view text) { return Query{tokenize(text)}; }

    friend bool operator==(const Query&, const Query&) = default;
};

enum class Provenance { baseline, str_expanded, bradford, centrality };

std::string_view to_string(Provenance p);

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  ///< 1-based

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
    Query query;
    std::vector<RankedEntry> entries;
    Provenance provenance = Provenance::baseline;
    std::size_t total_hits = 0;

    friend bool operator==(const RankedList&, const RankedList&) = default;
};

struct SearchOptions {
    /// Drop matching records that have no abstract before counting hits.
    bool require_abstract = false;
};

InvertedIndex build_index(const Corpus& corpus);

/// Top-k documents under the baseline tf-idf score. Throws InvalidArgument
/// on an empty query or k < 1.
RankedList search(const InvertedIndex& index, const Query& query, std::size_t k, SearchOptions options = {});

/// Every matching document, ranked; entries.size() == total_hits.
RankedList search_all(const InvertedIndex& index, const Query& query, SearchOptions options = {});

/// Keeps the first k entries; total_hits is unchanged.
RankedList truncate(RankedList list, std::size_t k);

/// Re-assigns contiguous 1-based ranks in entry order.
void renumber(RankedList& list);

void write_index(std::ostream& out, const InvertedIndex& index);
InvertedIndex read_index(std::istream& in);
void save_index(const std::filesystem::path& path, const InvertedIndex& index);
InvertedIndex load_index(const std::filesystem::path& path);

} // namespace scirank
