#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scirank {

/// One bibliographic metadata record.
struct BibRecord {
    std::string id;
    std::string title;
    std::optional<std::string> abstract;
    /// Exact post-trim journal name; grouping key for journal tallies.
    std::optional<std::string> journal;
    /// Exact post-trim author names, in byline order.
    std::vector<std::string> authors;
    /// Thesaurus descriptors, deduplicated preserving first occurrence.
    std::vector<std::string> controlled_terms;
    std::optional<int> year;
    std::string doc_type;

    bool has_abstract() const noexcept { return abstract && !abstract->empty(); }

    friend bool operator==(const BibRecord&, const BibRecord&) = default;
};

/// Immutable, id-addressable collection of records in file order.
class Corpus {
public:
    Corpus() = default;

    /// Validates and normalizes `records`; throws ParseError on a duplicate id.
    explicit Corpus(std::vector<BibRecord> records);

    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    const std::vector<BibRecord>& records() const noexcept { return records_; }

    /// nullptr when the id is unknown.
    const BibRecord* find(std::string_view id) const;

    /// Throws UnknownDocument when the id is unknown.
    const BibRecord& at(std::string_view id) const;

    auto begin() const noexcept { return records_.begin(); }
    auto end() const noexcept { return records_.end(); }

    friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

private:
    std::vector<BibRecord> records_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// Trims ASCII and Unicode-agnostic whitespace (space, tab, CR, LF, FF, VT).
std::string trim(std::string_view s);

/// Applies record invariants: trims names, drops blank authors, dedups
/// controlled terms. Throws ParseError when the id is empty.
BibRecord normalize_record(BibRecord record);

/// Parses one JSON Lines record; `line_no` is used for diagnostics.
BibRecord parse_record(std::string_view line, std::size_t line_no = 0);

/// Serializes a record as a single JSON line (no trailing newline).
std::string format_record(const BibRecord& record);

Corpus read_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

/// Case-folded tokens split on every code point that is neither a letter
/// nor a digit. Invalid UTF-8 bytes act as separators.
std::vector<std::string> tokenize(std::string_view text);

} // namespace scirank
