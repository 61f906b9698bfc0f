#include "scirank/corpus.hpp"

#include "scirank/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <locale>
#include <sstream>
#include <unordered_set>

namespace scirank {

using nlohmann::json;

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        throw ParseError("line " + std::to_string(line_no) + ": field '" + key + "' must be a string", line_no);
    }
    return it->get<std::string>();
}

std::vector<std::string> string_array(const json& obj, const char* key, std::size_t line_no) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return out;
    }
    if (!it->is_array()) {
        throw ParseError("line " + std::to_string(line_no) + ": field '" + key + "' must be an array", line_no);
    }
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw ParseError("line " + std::to_string(line_no) + ": field '" + key + "' must hold strings", line_no);
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

// Code-point classification. glibc's C.UTF-8 locale carries full Unicode
// ctype tables; without it, non-ASCII code points are treated as letters.
class CharClassifier {
public:
    CharClassifier() {
        try {
            locale_ = std::locale("C.UTF-8");
            unicode_ = true;
        } catch (const std::runtime_error&) {
            locale_ = std::locale::classic();
        }
        facet_ = &std::use_facet<std::ctype<wchar_t>>(locale_);
    }

    bool is_word(char32_t cp) const {
        if (cp < 0x80) {
            return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
        }
        if (!unicode_) {
            return true;
        }
        return facet_->is(std::ctype_base::alnum, static_cast<wchar_t>(cp));
    }

    char32_t fold(char32_t cp) const {
        if (cp < 0x80) {
            return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
        }
        if (!unicode_) {
            return cp;
        }
        return static_cast<char32_t>(facet_->tolower(static_cast<wchar_t>(cp)));
    }

private:
    std::locale locale_;
    const std::ctype<wchar_t>* facet_ = nullptr;
    bool unicode_ = false;
};

const CharClassifier& classifier() {
    static const CharClassifier instance;
    return instance;
}

// Decodes one code point starting at text[i]; advances i. Returns
// U+FFFF-like sentinel 0xFFFFFFFF for invalid sequences (one byte consumed).
constexpr char32_t kInvalid = 0xFFFFFFFFu;

char32_t decode_utf8(std::string_view text, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kInvalid;
    }
    if (i + len > text.size()) {
        ++i;
        return kInvalid;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(text[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kInvalid;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t min_for_len[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < min_for_len[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kInvalid;
    }
    i += len;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) {
        ++b;
    }
    while (e > b && is_space(s[e - 1])) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

BibRecord normalize_record(BibRecord record) {
    record.id = trim(record.id);
    if (record.id.empty()) {
        throw ParseError("record id must be non-empty", 0);
    }
    if (record.journal) {
        record.journal = trim(*record.journal);
        if (record.journal->empty()) {
            record.journal.reset();
        }
    }
    std::vector<std::string> authors;
    authors.reserve(record.authors.size());
    for (const auto& a : record.authors) {
        auto name = trim(a);
        if (!name.empty()) {
            authors.push_back(std::move(name));
        }
    }
    record.authors = std::move(authors);

    std::vector<std::string> terms;
    std::unordered_set<std::string> seen;
    for (const auto& t : record.controlled_terms) {
        auto term = trim(t);
        if (!term.empty() && seen.insert(term).second) {
            terms.push_back(std::move(term));
        }
    }
    record.controlled_terms = std::move(terms);
    return record;
}

Corpus::Corpus(std::vector<BibRecord> records) {
    records_.reserve(records.size());
    for (auto& r : records) {
        auto rec = normalize_record(std::move(r));
        auto [it, inserted] = by_id_.emplace(rec.id, records_.size());
        if (!inserted) {
            throw ParseError("duplicate id '" + rec.id + "' at records " + std::to_string(it->second + 1) +
                                 " and " + std::to_string(records_.size() + 1),
                             records_.size() + 1);
        }
        records_.push_back(std::move(rec));
    }
}

const BibRecord* Corpus::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &records_[it->second];
}

const BibRecord& Corpus::at(std::string_view id) const {
    if (const auto* r = find(id)) {
        return *r;
    }
    throw UnknownDocument(std::string(id));
}

BibRecord parse_record(std::string_view line, std::size_t line_no) {
    const auto where = "line " + std::to_string(line_no) + ": ";
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(where + "malformed record: " + e.what(), line_no);
    }
    if (!obj.is_object()) {
        throw ParseError(where + "record must be an object", line_no);
    }
    BibRecord rec;
    auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) {
        throw ParseError(where + "missing string field 'id'", line_no);
    }
    rec.id = id->get<std::string>();
    rec.title = optional_string(obj, "title", line_no).value_or("");
    rec.abstract = optional_string(obj, "abstract", line_no);
    rec.journal = optional_string(obj, "journal", line_no);
    rec.authors = string_array(obj, "authors", line_no);
    rec.controlled_terms = string_array(obj, "controlled_terms", line_no);
    rec.doc_type = optional_string(obj, "doc_type", line_no).value_or("");
    if (auto y = obj.find("year"); y != obj.end() && !y->is_null()) {
        if (!y->is_number_integer()) {
            throw ParseError(where + "field 'year' must be an integer", line_no);
        }
        rec.year = y->get<int>();
    }
    try {
        return normalize_record(std::move(rec));
    } catch (const ParseError& e) {
        throw ParseError(where + e.what(), line_no);
    }
}

std::string format_record(const BibRecord& r) {
    json obj;
    obj["id"] = r.id;
    obj["title"] = r.title;
    if (r.abstract) {
        obj["abstract"] = *r.abstract;
    }
    if (r.journal) {
        obj["journal"] = *r.journal;
    }
    obj["authors"] = r.authors;
    obj["controlled_terms"] = r.controlled_terms;
    if (r.year) {
        obj["year"] = *r.year;
    }
    obj["doc_type"] = r.doc_type;
    return obj.dump();
}

Corpus read_corpus(std::istream& in) {
    std::vector<BibRecord> records;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto rec = parse_record(line, line_no);
        auto [it, inserted] = first_line.emplace(rec.id, line_no);
        if (!inserted) {
            throw ParseError("duplicate id '" + rec.id + "' on lines " + std::to_string(it->second) + " and " +
                                 std::to_string(line_no),
                             line_no);
        }
        records.push_back(std::move(rec));
    }
    return Corpus(std::move(records));
}

Corpus load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read corpus file: " + path.string(), 0);
    }
    return read_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    for (const auto& r : corpus) {
        out << format_record(r) << '\n';
    }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write corpus file: " + path.string());
    }
    write_corpus(out, corpus);
}

std::vector<std::string> tokenize(std::string_view text) {
    const auto& cls = classifier();
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = decode_utf8(text, i);
        if (cp != kInvalid && cls.is_word(cp)) {
            encode_utf8(cls.fold(cp), current);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

} // namespace scirank
