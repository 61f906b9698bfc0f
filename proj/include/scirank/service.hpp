#pragma once

#include "scirank/corpus.hpp"
#include "scirank/index.hpp"
#include "scirank/termrec.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace scirank {

enum class RerankMode { none, bradford, centrality };

/// Parses "none" | "bradford" | "centrality" (also "default" for none).
std::optional<RerankMode> parse_rerank(std::string_view text);
std::string_view to_string(RerankMode mode);

struct SearchRequest {
    std::string q;
    bool expand = false;
    std::size_t k_expand = 4;
    RerankMode rerank = RerankMode::none;
    std::size_t k = 10;
    bool require_abstract = false;
};

/// Everything a loaded service answers from. Immutable once built.
struct Snapshot {
    Corpus corpus;
    InvertedIndex index;
    AssociationModel model;
};

/// Indexes and trains on `corpus`. A corpus without controlled terms gets an
/// empty association model.
std::shared_ptr<const Snapshot> build_snapshot(Corpus corpus, TrainOptions options = {});

/// Writes corpus.jsonl, index.tsv and model.tsv into `dir`.
void save_snapshot(const std::filesystem::path& dir, const Snapshot& snapshot);
std::shared_ptr<const Snapshot> load_snapshot(const std::filesystem::path& dir);

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// Ranked entries joined with their bibliographic fields.
nlohmann::json ranked_list_to_json(const RankedList& list, const Corpus& corpus);

/// Request handling against an atomically swappable snapshot.
class Engine {
public:
    explicit Engine(std::shared_ptr<const Snapshot> snapshot);

    std::shared_ptr<const Snapshot> snapshot() const;
    void reload(std::shared_ptr<const Snapshot> snapshot);

    Response handle_search(const SearchRequest& request) const;
    Response handle_recommend(const std::string& term, long k) const;
    Response handle_healthz() const;

    /// Decodes query-string parameters; malformed values yield a 400.
    Response handle_search_params(const std::multimap<std::string, std::string>& params) const;
    Response handle_recommend_params(const std::multimap<std::string, std::string>& params) const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Snapshot> snapshot_;
};

/// HTTP front end: GET /search, /recommend and /healthz.
class HttpService {
public:
    explicit HttpService(Engine& engine);
    ~HttpService();

    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds the listening socket; port 0 picks a free port. Returns the
    /// bound port. Throws Error when binding fails.
    int bind(const std::string& host, int port);

    /// Blocks until stop() is called.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace scirank
