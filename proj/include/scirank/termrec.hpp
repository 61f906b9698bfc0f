#pragma once

#include "scirank/corpus.hpp"
#include "scirank/index.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scirank {

/// 2x2 co-occurrence counts for one (free term, controlled term) pair.
struct Contingency {
    std::uint64_t n11 = 0;  ///< docs with the free term and the descriptor
    std::uint64_t n1x = 0;  ///< docs with the free term in title/abstract
    std::uint64_t nx1 = 0;  ///< docs indexed with the descriptor
    std::uint64_t n = 0;    ///< corpus size

    friend bool operator==(const Contingency&, const Contingency&) = default;
};

/// Log-likelihood ratio G^2 = 2 * sum O ln(O/E) over the four cells, with
/// 0 ln 0 = 0. Returns 0 when observed co-occurrence is at or below the
/// independence expectation (n11 * N <= n1x * nx1).
double log_likelihood_ratio(const Contingency& table);

struct Association {
    std::string controlled_term;
    double score = 0.0;
    Contingency table;

    friend bool operator==(const Association&, const Association&) = default;
};

struct TermScore {
    std::string term;
    double score = 0.0;

    friend bool operator==(const TermScore&, const TermScore&) = default;
};

struct TrainOptions {
    /// Free terms must occur in at least this many documents.
    std::size_t min_df = 2;
};

/// Free term -> descriptors ranked by association score (descending, ties by
/// descriptor ascending). Pairs with a zero score are kept for their counts
/// but never recommended.
class AssociationModel {
public:
    AssociationModel() = default;
    explicit AssociationModel(std::map<std::string, std::vector<Association>, std::less<>> by_term);

    /// Every stored pair for `term`, ranked; empty for unknown terms.
    const std::vector<Association>& associations(std::string_view term) const;

    std::size_t term_count() const noexcept { return by_term_.size(); }
    std::size_t pair_count() const noexcept;

    const std::map<std::string, std::vector<Association>, std::less<>>& all() const noexcept { return by_term_; }

    friend bool operator==(const AssociationModel&, const AssociationModel&) = default;

private:
    std::map<std::string, std::vector<Association>, std::less<>> by_term_;
};

/// Co-word analysis between title/abstract tokens and controlled terms.
/// Throws InvalidArgument when no record carries a controlled term.
AssociationModel train_str(const Corpus& corpus, TrainOptions options = {});

/// Top-k positively associated descriptors; throws InvalidArgument if k < 1.
std::vector<TermScore> recommend(const AssociationModel& model, std::string_view term, std::size_t k);

struct ExpandedQuery {
    std::vector<std::string> original_terms;
    /// Descriptors as stored, best first.
    std::vector<TermScore> added_terms;

    /// original_terms followed by the new tokens of every added descriptor.
    Query combined() const;
};

/// Union of each query token's top-k recommendations scored by max
/// association, truncated to k; descriptors whose tokens are all already in
/// the query are skipped. k == 0 leaves the query unchanged.
ExpandedQuery expand_query(const AssociationModel& model, const Query& query, std::size_t k = 4);

/// Tab-separated lines: free term, descriptor, n11, n1x, nx1, N, score.
void write_model(std::ostream& out, const AssociationModel& model);
AssociationModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const AssociationModel& model);
AssociationModel load_model(const std::filesystem::path& path);

} // namespace scirank
