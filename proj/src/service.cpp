#include "scirank/service.hpp"

#include "scirank/bradford.hpp"
#include "scirank/centrality.hpp"
#include "scirank/error.hpp"

#include <httplib.h>

#include <charconv>
#include <fstream>

namespace scirank {

using nlohmann::json;

namespace {

constexpr std::size_t kPanelSize = 10;

Response error_response(int status, const std::string& message) {
    return Response{status, json{{"error", message}}};
}

std::optional<std::string> param(const std::multimap<std::string, std::string>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<bool> parse_bool(std::string_view s) {
    if (s == "1" || s == "true" || s == "yes" || s == "on") {
        return true;
    }
    if (s == "0" || s == "false" || s == "no" || s == "off" || s.empty()) {
        return false;
    }
    return std::nullopt;
}

std::optional<long> parse_long(std::string_view s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

json optional_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

std::optional<RerankMode> parse_rerank(std::string_view text) {
    if (text.empty() || text == "none" || text == "default") {
        return RerankMode::none;
    }
    if (text == "bradford") {
        return RerankMode::bradford;
    }
    if (text == "centrality") {
        return RerankMode::centrality;
    }
    return std::nullopt;
}

std::string_view to_string(RerankMode mode) {
    switch (mode) {
    case RerankMode::none:
        return "none";
    case RerankMode::bradford:
        return "bradford";
    case RerankMode::centrality:
        return "centrality";
    }
    return "none";
}

std::shared_ptr<const Snapshot> build_snapshot(Corpus corpus, TrainOptions options) {
    auto snap = std::make_shared<Snapshot>();
    snap->index = build_index(corpus);
    const bool has_controlled = std::any_of(corpus.begin(), corpus.end(),
                                            [](const BibRecord& r) { return !r.controlled_terms.empty(); });
    if (has_controlled) {
        snap->model = train_str(corpus, options);
    }
    snap->corpus = std::move(corpus);
    return snap;
}

void save_snapshot(const std::filesystem::path& dir, const Snapshot& snapshot) {
    std::filesystem::create_directories(dir);
    save_corpus(dir / "corpus.jsonl", snapshot.corpus);
    save_index(dir / "index.tsv", snapshot.index);
    save_model(dir / "model.tsv", snapshot.model);
}

std::shared_ptr<const Snapshot> load_snapshot(const std::filesystem::path& dir) {
    auto snap = std::make_shared<Snapshot>();
    snap->corpus = load_corpus(dir / "corpus.jsonl");
    snap->index = load_index(dir / "index.tsv");
    snap->model = load_model(dir / "model.tsv");
    if (snap->index.doc_count() != snap->corpus.size()) {
        throw Error("index and corpus in " + dir.string() + " disagree on document count");
    }
    return snap;
}

json ranked_list_to_json(const RankedList& list, const Corpus& corpus) {
    json entries = json::array();
    for (const auto& e : list.entries) {
        const auto& rec = corpus.at(e.doc_id);
        entries.push_back({{"rank", e.rank},
                           {"id", e.doc_id},
                           {"title", rec.title},
                           {"year", rec.year ? json(*rec.year) : json(nullptr)},
                           {"journal", optional_json(rec.journal)},
                           {"authors", rec.authors},
                           {"score", e.score},
                           {"provenance", to_string(list.provenance)}});
    }
    return json{{"query", list.query.terms},
                {"provenance", to_string(list.provenance)},
                {"total_hits", list.total_hits},
                {"entries", std::move(entries)}};
}

Engine::Engine(std::shared_ptr<const Snapshot> snapshot) : snapshot_(std::move(snapshot)) {
    if (!snapshot_) {
        throw InvalidArgument("engine requires a snapshot");
    }
}

std::shared_ptr<const Snapshot> Engine::snapshot() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

void Engine::reload(std::shared_ptr<const Snapshot> snapshot) {
    if (!snapshot) {
        throw InvalidArgument("engine requires a snapshot");
    }
    std::lock_guard lock(mutex_);
    snapshot_ = std::move(snapshot);
}

Response Engine::handle_search(const SearchRequest& request) const {
    if (request.k < 1) {
        return error_response(400, "k must be >= 1");
    }
    const auto original = Query::parse(request.q);
    if (original.terms.empty()) {
        return error_response(400, "query must contain at least one term");
    }
    const auto snap = snapshot();

    Query effective = original;
    json expansion = json::array();
    if (request.expand) {
        const auto expanded = expand_query(snap->model, original, request.k_expand);
        effective = expanded.combined();
        for (const auto& t : expanded.added_terms) {
            expansion.push_back({{"term", t.term}, {"score", t.score}});
        }
    }

    auto hits = search_all(snap->index, effective, SearchOptions{request.require_abstract});
    if (request.expand) {
        hits.provenance = Provenance::str_expanded;
    }

    const auto tally = tally_journals(hits, snap->corpus);
    const auto scores = betweenness(build_coauthor_graph(hits, snap->corpus));

    RankedList ranked;
    switch (request.rerank) {
    case RerankMode::none:
        ranked = std::move(hits);
        break;
    case RerankMode::bradford:
        ranked = bradfordize(hits, snap->corpus);
        break;
    case RerankMode::centrality:
        ranked = rerank_by_centrality(hits, scores, snap->corpus);
        break;
    }
    ranked = truncate(std::move(ranked), request.k);

    json body = ranked_list_to_json(ranked, snap->corpus);
    body["original_query"] = original.terms;
    body["rerank"] = to_string(request.rerank);
    body["expansion_terms"] = std::move(expansion);

    json journals = json::array();
    for (std::size_t i = 0; i < tally.journals.size() && i < kPanelSize; ++i) {
        journals.push_back({{"journal", tally.journals[i].journal}, {"count", tally.journals[i].count}});
    }
    body["journals"] = std::move(journals);
    body["non_journal_docs"] = tally.non_journal_docs;
    if (!tally.empty()) {
        const auto zones = bradford_zones(tally);
        json core = json::array();
        for (const auto& j : zones.core().journals) {
            core.push_back(j.journal);
        }
        body["core_journals"] = std::move(core);
    } else {
        body["core_journals"] = json::array();
    }

    json authors = json::array();
    if (!scores.authors.empty()) {
        for (const auto& a : central_authors(scores, kPanelSize)) {
            authors.push_back({{"author", a.author}, {"score", a.score}});
        }
    }
    body["central_authors"] = std::move(authors);
    return Response{200, std::move(body)};
}

Response Engine::handle_recommend(const std::string& term, long k) const {
    if (k < 1) {
        return error_response(400, "k must be >= 1");
    }
    const auto tokens = tokenize(term);
    if (tokens.size() > 1) {
        return error_response(400, "term must be a single token");
    }
    const auto snap = snapshot();
    json list = json::array();
    if (!tokens.empty()) {
        for (const auto& r : recommend(snap->model, tokens.front(), static_cast<std::size_t>(k))) {
            list.push_back({{"term", r.term}, {"score", r.score}});
        }
    }
    return Response{200, json{{"term", tokens.empty() ? std::string() : tokens.front()}, {"recommendations", list}}};
}

Response Engine::handle_healthz() const {
    const auto snap = snapshot();
    return Response{200, json{{"status", "ok"},
                              {"documents", snap->corpus.size()},
                              {"terms", snap->index.term_count()},
                              {"associations", snap->model.pair_count()}}};
}

Response Engine::handle_search_params(const std::multimap<std::string, std::string>& params) const {
    SearchRequest req;
    req.q = param(params, "q").value_or("");
    if (auto v = param(params, "expand")) {
        auto b = parse_bool(*v);
        if (!b) {
            return error_response(400, "expand must be a boolean");
        }
        req.expand = *b;
    }
    if (auto v = param(params, "require_abstract")) {
        auto b = parse_bool(*v);
        if (!b) {
            return error_response(400, "require_abstract must be a boolean");
        }
        req.require_abstract = *b;
    }
    if (auto v = param(params, "rerank")) {
        auto mode = parse_rerank(*v);
        if (!mode) {
            return error_response(400, "unknown rerank value: " + *v);
        }
        req.rerank = *mode;
    }
    if (auto v = param(params, "k")) {
        auto n = parse_long(*v);
        if (!n || *n < 1) {
            return error_response(400, "k must be a positive integer");
        }
        req.k = static_cast<std::size_t>(*n);
    }
    if (auto v = param(params, "k_expand")) {
        auto n = parse_long(*v);
        if (!n || *n < 0) {
            return error_response(400, "k_expand must be a non-negative integer");
        }
        req.k_expand = static_cast<std::size_t>(*n);
    }
    return handle_search(req);
}

Response Engine::handle_recommend_params(const std::multimap<std::string, std::string>& params) const {
    long k = 4;
    if (auto v = param(params, "k")) {
        auto n = parse_long(*v);
        if (!n) {
            return error_response(400, "k must be an integer");
        }
        k = *n;
    }
    return handle_recommend(param(params, "term").value_or(""), k);
}

struct HttpService::Impl {
    explicit Impl(Engine& e) : engine(e) {}

    Engine& engine;
    httplib::Server server;
};

HttpService::HttpService(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto guarded = [reply](httplib::Response& res, auto&& fn) {
        try {
            reply(res, fn());
        } catch (const std::exception& e) {
            reply(res, error_response(500, e.what()));
        }
    };
    auto& engine_ref = impl_->engine;
    impl_->server.Get("/search", [&engine_ref, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return engine_ref.handle_search_params(req.params); });
    });
    impl_->server.Get("/recommend", [&engine_ref, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return engine_ref.handle_recommend_params(req.params); });
    });
    impl_->server.Get("/healthz", [&engine_ref, guarded](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { return engine_ref.handle_healthz(); });
    });
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) {
            throw Error("cannot bind " + host);
        }
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw Error("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpService::listen() { impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

} // namespace scirank
