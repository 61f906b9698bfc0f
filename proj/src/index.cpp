#include "scirank/index.hpp"

#include "scirank/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace scirank {

namespace {

const std::vector<Posting> kNoPostings;

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("index line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'", line_no);
    }
    return value;
}

} // namespace

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::baseline:
        return "baseline";
    case Provenance::str_expanded:
        return "str_expanded";
    case Provenance::bradford:
        return "bradford";
    case Provenance::centrality:
        return "centrality";
    }
    return "baseline";
}

InvertedIndex::InvertedIndex(std::vector<IndexedDoc> docs,
                             std::map<std::string, std::vector<Posting>, std::less<>> postings)
    : docs_(std::move(docs)), postings_(std::move(postings)) {}

const std::vector<Posting>& InvertedIndex::postings(std::string_view term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? kNoPostings : it->second;
}

double InvertedIndex::idf(std::string_view term) const {
    const auto n = static_cast<double>(docs_.size());
    return 1.0 + std::log(n / (static_cast<double>(df(term)) + 1.0));
}

InvertedIndex build_index(const Corpus& corpus) {
    std::vector<IndexedDoc> docs;
    std::map<std::string, std::vector<Posting>, std::less<>> postings;
    docs.reserve(corpus.size());
    for (const auto& rec : corpus) {
        const auto slot = static_cast<std::uint32_t>(docs.size());
        std::map<std::string, std::uint32_t> counts;
        std::uint32_t length = 0;
        auto add = [&](std::string_view text) {
            for (auto& tok : tokenize(text)) {
                ++counts[std::move(tok)];
                ++length;
            }
        };
        add(rec.title);
        if (rec.abstract) {
            add(*rec.abstract);
        }
        for (const auto& term : rec.controlled_terms) {
            add(term);
        }
        for (auto& [term, tf] : counts) {
            postings[term].push_back(Posting{slot, tf});
        }
        docs.push_back(IndexedDoc{rec.id, length, rec.has_abstract()});
    }
    return InvertedIndex(std::move(docs), std::move(postings));
}

RankedList search_all(const InvertedIndex& index, const Query& query, SearchOptions options) {
    if (query.terms.empty()) {
        throw InvalidArgument("search requires a non-empty query");
    }
    // Duplicate query tokens count once for coord and scoring.
    std::vector<std::string_view> terms;
    {
        std::unordered_set<std::string_view> seen;
        for (const auto& t : query.terms) {
            if (seen.insert(t).second) {
                terms.push_back(t);
            }
        }
    }

    struct Acc {
        double sum = 0.0;
        std::size_t matched = 0;
    };
    std::unordered_map<std::uint32_t, Acc> acc;
    for (const auto term : terms) {
        const auto& plist = index.postings(term);
        if (plist.empty()) {
            continue;
        }
        const double idf = index.idf(term);
        for (const auto& p : plist) {
            const auto& doc = index.docs()[p.doc];
            if (options.require_abstract && !doc.has_abstract) {
                continue;
            }
            auto& a = acc[p.doc];
            a.sum += std::sqrt(static_cast<double>(p.tf)) * idf * idf / std::sqrt(static_cast<double>(doc.length));
            ++a.matched;
        }
    }

    RankedList out;
    out.query = query;
    out.provenance = Provenance::baseline;
    out.entries.reserve(acc.size());
    const auto qn = static_cast<double>(terms.size());
    for (const auto& [slot, a] : acc) {
        const double coord = static_cast<double>(a.matched) / qn;
        out.entries.push_back(RankedEntry{index.docs()[slot].id, coord * a.sum, 0});
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& x, const RankedEntry& y) {
        if (x.score != y.score) {
            return x.score > y.score;
        }
        return x.doc_id < y.doc_id;
    });
    out.total_hits = out.entries.size();
    renumber(out);
    return out;
}

RankedList search(const InvertedIndex& index, const Query& query, std::size_t k, SearchOptions options) {
    if (k < 1) {
        throw InvalidArgument("search requires k >= 1");
    }
    return truncate(search_all(index, query, options), k);
}

RankedList truncate(RankedList list, std::size_t k) {
    if (list.entries.size() > k) {
        list.entries.resize(k);
    }
    return list;
}

void renumber(RankedList& list) {
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        list.entries[i].rank = i + 1;
    }
}

// Format: "N\t<count>" then one "D\t<id>\t<len>\t<has_abstract>" line per
// document in slot order, then "T\t<term>\t<slot>:<tf>,<slot>:<tf>..." per term.
void write_index(std::ostream& out, const InvertedIndex& index) {
    out << "N\t" << index.doc_count() << '\n';
    for (const auto& d : index.docs()) {
        out << "D\t" << d.id << '\t' << d.length << '\t' << (d.has_abstract ? 1 : 0) << '\n';
    }
    for (const auto& [term, plist] : index.all_postings()) {
        out << "T\t" << term << '\t';
        for (std::size_t i = 0; i < plist.size(); ++i) {
            if (i) {
                out << ',';
            }
            out << plist[i].doc << ':' << plist[i].tf;
        }
        out << '\n';
    }
}

InvertedIndex read_index(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected = std::numeric_limits<std::size_t>::max();
    std::vector<IndexedDoc> docs;
    std::map<std::string, std::vector<Posting>, std::less<>> postings;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto f = split_tabs(line);
        auto bad = [&] { return ParseError("index line " + std::to_string(line_no) + ": malformed", line_no); };
        if (f[0] == "N" && f.size() == 2) {
            expected = parse_number<std::size_t>(f[1], line_no);
        } else if (f[0] == "D" && f.size() == 4) {
            docs.push_back(IndexedDoc{std::string(f[1]), parse_number<std::uint32_t>(f[2], line_no), f[3] == "1"});
        } else if (f[0] == "T" && f.size() == 3) {
            std::vector<Posting> plist;
            std::string_view rest = f[2];
            while (!rest.empty()) {
                auto comma = rest.find(',');
                auto item = rest.substr(0, comma);
                auto colon = item.find(':');
                if (colon == std::string_view::npos) {
                    throw bad();
                }
                auto slot = parse_number<std::uint32_t>(item.substr(0, colon), line_no);
                if (slot >= docs.size()) {
                    throw bad();
                }
                plist.push_back(Posting{slot, parse_number<std::uint32_t>(item.substr(colon + 1), line_no)});
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
            postings.emplace(std::string(f[1]), std::move(plist));
        } else {
            throw bad();
        }
    }
    if (expected != std::numeric_limits<std::size_t>::max() && expected != docs.size()) {
        throw ParseError("index header count does not match document lines", 0);
    }
    return InvertedIndex(std::move(docs), std::move(postings));
}

void save_index(const std::filesystem::path& path, const InvertedIndex& index) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write index file: " + path.string());
    }
    write_index(out, index);
}

InvertedIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read index file: " + path.string(), 0);
    }
    return read_index(in);
}

} // namespace scirank
