// scirank: index, search, recommend, eval and serve from the command line.

#include "scirank/bradford.hpp"
#include "scirank/centrality.hpp"
#include "scirank/corpus.hpp"
#include "scirank/error.hpp"
#include "scirank/evalkit.hpp"
#include "scirank/index.hpp"
#include "scirank/service.hpp"
#include "scirank/termrec.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace scirank;

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : std::move(fallback);
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

void print_search(std::ostream& out, const nlohmann::json& body) {
    out << "total hits: " << body["total_hits"].get<std::size_t>() << "  (" << body["provenance"].get<std::string>()
        << ")\n";
    if (!body["expansion_terms"].empty()) {
        std::vector<std::string> terms;
        for (const auto& t : body["expansion_terms"]) {
            terms.push_back(t["term"].get<std::string>());
        }
        out << "expanded with: " << join(terms, ", ") << '\n';
    }
    for (const auto& e : body["entries"]) {
        out << std::setw(4) << e["rank"].get<std::size_t>() << "  " << std::fixed << std::setprecision(6)
            << std::setw(12) << e["score"].get<double>() << "  " << e["id"].get<std::string>() << "  "
            << e["title"].get<std::string>();
        if (!e["year"].is_null()) {
            out << " (" << e["year"].get<int>() << ")";
        }
        if (!e["journal"].is_null()) {
            out << "  [" << e["journal"].get<std::string>() << "]";
        }
        out << '\n';
    }
    if (!body["journals"].empty()) {
        out << "\ncore journals:\n";
        for (const auto& j : body["journals"]) {
            out << "  " << j["journal"].get<std::string>() << " (" << j["count"].get<std::size_t>() << ")\n";
        }
    }
    if (!body["central_authors"].empty()) {
        out << "\ncentral authors:\n";
        for (const auto& a : body["central_authors"]) {
            out << "  " << a["author"].get<std::string>() << " (" << std::setprecision(6)
                << a["score"].get<double>() << ")\n";
        }
    }
}

HttpService* g_service = nullptr;

extern "C" void handle_stop_signal(int) {
    if (g_service) {
        g_service->stop();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Science-model retrieval: tf-idf search with term expansion and bibliometric re-ranking"};
    app.require_subcommand(1);

    // index
    auto* index_cmd = app.add_subcommand("index", "Build and persist index and term model from a corpus");
    std::string corpus_path;
    std::string out_dir;
    std::size_t min_df = 2;
    index_cmd->add_option("corpus", corpus_path, "Corpus file (JSON Lines)")->required();
    index_cmd->add_option("out", out_dir, "Output directory")->required();
    index_cmd->add_option("--min-df", min_df, "Minimum document frequency for free terms")->capture_default_str();

    // search
    auto* search_cmd = app.add_subcommand("search", "Search a persisted index");
    std::string index_dir;
    std::vector<std::string> query_words;
    SearchRequest request;
    std::string rerank = "none";
    bool json_out = false;
    search_cmd->add_option("index_dir", index_dir, "Directory written by 'index'")->required();
    search_cmd->add_option("query", query_words, "Query words")->required();
    search_cmd->add_flag("--expand", request.expand, "Expand the query with recommended descriptors");
    search_cmd->add_option("--k-expand", request.k_expand, "Number of descriptors to add")->capture_default_str();
    search_cmd->add_option("--rerank", rerank, "none | bradford | centrality")
        ->check(CLI::IsMember({"none", "default", "bradford", "centrality"}))
        ->capture_default_str();
    search_cmd->add_option("--k", request.k, "Results to print")->check(CLI::PositiveNumber)->capture_default_str();
    search_cmd->add_flag("--require-abstract", request.require_abstract, "Only records with an abstract");
    search_cmd->add_flag("--json", json_out, "Print the JSON response");

    // recommend
    auto* rec_cmd = app.add_subcommand("recommend", "Recommend controlled terms for a free term");
    std::string term;
    long rec_k = 4;
    rec_cmd->add_option("index_dir", index_dir, "Directory written by 'index'")->required();
    rec_cmd->add_option("term", term, "Free term")->required();
    rec_cmd->add_option("--k", rec_k, "Number of recommendations")->capture_default_str();
    rec_cmd->add_flag("--json", json_out, "Print the JSON response");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Precision, agreement and overlap from relevance judgments");
    std::string judgments_path;
    std::string runs_path;
    std::string counts_path;
    std::string plot_path;
    EvalOptions eval_options;
    eval_cmd->add_option("judgments", judgments_path, "Judgment file (topic doc assessor verdict)");
    eval_cmd->add_option("runs", runs_path, "Run file (topic service rank doc)");
    eval_cmd->add_option("--counts", counts_path, "Aggregate counts file (topic service relevant not_relevant)");
    eval_cmd->add_option("--top-n", eval_options.top_n, "Pool depth per service")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--plot-data", plot_path, "Write per-topic precision/SE rows to this file");
    eval_cmd->add_flag("--json", json_out, "Print the JSON report instead of the table");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
    std::string serve_index = env_or("SCIRANK_INDEX_DIR", "");
    std::string serve_corpus = env_or("SCIRANK_CORPUS", "");
    std::string serve_model = env_or("SCIRANK_MODEL", "");
    std::string listen = env_or("SCIRANK_LISTEN", "127.0.0.1:8080");
    serve_cmd->add_option("--index-dir", serve_index, "Directory written by 'index' (env SCIRANK_INDEX_DIR)");
    serve_cmd->add_option("--corpus", serve_corpus, "Corpus file, indexed at startup (env SCIRANK_CORPUS)");
    serve_cmd->add_option("--model", serve_model, "Term model file to use with --corpus (env SCIRANK_MODEL)");
    serve_cmd->add_option("--listen", listen, "host:port (env SCIRANK_LISTEN)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*index_cmd) {
            auto snap = build_snapshot(load_corpus(corpus_path), TrainOptions{min_df});
            save_snapshot(out_dir, *snap);
            std::cout << "indexed " << snap->corpus.size() << " records, " << snap->index.term_count()
                      << " terms, " << snap->model.pair_count() << " associations -> " << out_dir << '\n';
            return 0;
        }
        if (*search_cmd) {
            request.q = join(query_words, " ");
            request.rerank = *parse_rerank(rerank);
            Engine engine(load_snapshot(index_dir));
            auto r = engine.handle_search(request);
            if (r.status != 200) {
                std::cerr << "scirank search: " << r.body["error"].get<std::string>() << '\n';
                return 2;
            }
            if (json_out) {
                std::cout << r.body.dump() << '\n';
            } else {
                print_search(std::cout, r.body);
            }
            return 0;
        }
        if (*rec_cmd) {
            Engine engine(load_snapshot(index_dir));
            auto r = engine.handle_recommend(term, rec_k);
            if (r.status != 200) {
                std::cerr << "scirank recommend: " << r.body["error"].get<std::string>() << '\n';
                return 2;
            }
            if (json_out) {
                std::cout << r.body.dump() << '\n';
            } else {
                for (const auto& item : r.body["recommendations"]) {
                    std::cout << item["term"].get<std::string>() << '\t' << item["score"].get<double>() << '\n';
                }
            }
            return 0;
        }
        if (*eval_cmd) {
            EvalReport report;
            if (!counts_path.empty()) {
                if (!judgments_path.empty() || !runs_path.empty()) {
                    std::cerr << "scirank eval: --counts cannot be combined with judgment/run files\n";
                    return 2;
                }
                const auto rows = load_counts(counts_path);
                report = report_from_counts(rows);
            } else {
                if (judgments_path.empty() || runs_path.empty()) {
                    std::cerr << "scirank eval: need <judgments> <runs> or --counts <file>\n";
                    return 2;
                }
                report = evaluate(load_judgments(judgments_path), load_runs(runs_path), eval_options);
            }
            if (json_out) {
                std::cout << report_to_json(report) << '\n';
            } else {
                print_report_table(std::cout, report);
            }
            if (!plot_path.empty()) {
                std::ofstream plot(plot_path);
                if (!plot) {
                    std::cerr << "scirank eval: cannot write " << plot_path << '\n';
                    return 1;
                }
                write_plot_data(plot, report);
            }
            return 0;
        }
        if (*serve_cmd) {
            std::shared_ptr<const Snapshot> snap;
            if (!serve_index.empty()) {
                snap = load_snapshot(serve_index);
            } else if (!serve_corpus.empty()) {
                auto corpus = load_corpus(serve_corpus);
                if (!serve_model.empty()) {
                    auto s = std::make_shared<Snapshot>();
                    s->index = build_index(corpus);
                    s->model = load_model(serve_model);
                    s->corpus = std::move(corpus);
                    snap = std::move(s);
                } else {
                    snap = build_snapshot(std::move(corpus));
                }
            } else {
                std::cerr << "scirank serve: need --index-dir or --corpus\n";
                return 2;
            }
            const auto colon = listen.rfind(':');
            if (colon == std::string::npos) {
                std::cerr << "scirank serve: --listen must be host:port\n";
                return 2;
            }
            const std::string host = listen.substr(0, colon);
            const int port = std::stoi(listen.substr(colon + 1));
            Engine engine(std::move(snap));
            HttpService service(engine);
            const int bound = service.bind(host, port);
            g_service = &service;
            std::signal(SIGINT, handle_stop_signal);
            std::signal(SIGTERM, handle_stop_signal);
            std::cout << "listening on " << host << ":" << bound << std::endl;
            service.listen();
            g_service = nullptr;
            return 0;
        }
    } catch (const scirank::Error& e) {
        std::cerr << "scirank: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "scirank: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
