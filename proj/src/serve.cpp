#include "litnav/serve.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "litnav/errors.hpp"
#include "litnav/jsonio.hpp"
#include "litnav/wire.hpp"

using nlohmann::json;

namespace litnav {

struct Service::Impl {
    const Corpus& corpus;
    EngineConfig config;
    Taxonomy taxonomy;
    httplib::Server server;
    std::thread thread;
    std::mutex sessions_mutex;
    std::map<std::string, json> sessions;
    std::uint64_t session_counter = 0;
    std::filesystem::path marker;

    Impl(const Corpus& c, EngineConfig cfg, Taxonomy tax)
        : corpus(c), config(std::move(cfg)), taxonomy(std::move(tax)) {}

    void place_marker() {
        marker = corpus.directory() / ".serving";
        std::ofstream out(marker);
        out << "litnav service\n";
    }

    void remove_marker() {
        if (!marker.empty()) {
            std::error_code ec;
            std::filesystem::remove(marker, ec);
            marker.clear();
        }
    }

    static void reply_json(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static void reply_error(httplib::Response& res, int status, const std::string& code,
                            const std::string& message) {
        reply_json(res, status, json{{"error", code}, {"message", message}});
    }

    void handle_search(const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            reply_error(res, 400, "BadRequest", e.what());
            return;
        }
        const std::string query = body.value("query", std::string{});
        if (query.empty()) {
            reply_error(res, 400, "BadRequest", "missing 'query'");
            return;
        }
        SearchSettings settings = config.settings;
        settings.k = body.value("k", settings.k);
        settings.max_rounds = body.value("max_rounds", settings.max_rounds);
        settings.workers = body.value("workers", settings.workers);

        std::string session_id;
        {
            std::lock_guard<std::mutex> lock(sessions_mutex);
            char buf[32];
            std::snprintf(buf, sizeof(buf), "s%06llu",
                          static_cast<unsigned long long>(++session_counter));
            session_id = buf;
        }
        try {
            OwnedBackends owned = make_backends(config);
            EngineBackends backends = owned.view();
            SearchOutcome outcome =
                run_search(SearchIntent{query, session_id}, settings, corpus, backends);
            config.install_rates(outcome.session.ledger);
            json audit = json::array();
            for (const auto& e : outcome.session.audit_log) audit.push_back(e);
            {
                std::lock_guard<std::mutex> lock(sessions_mutex);
                sessions[session_id] =
                    json{{"session_id", session_id}, {"query", query}, {"events", audit}};
            }
            reply_json(res, 200,
                       json{{"session_id", session_id},
                            {"termination_reason", outcome.session.termination_reason},
                            {"rounds", outcome.session.rounds},
                            {"total_cost_usd", outcome.session.ledger.total_usd_string()},
                            {"ranking", to_json(outcome.ranking)}});
        } catch (const InvalidPlan& e) {
            reply_error(res, 400, "InvalidPlan", e.what());
        } catch (const std::exception& e) {
            reply_error(res, 500, "SearchFailed", e.what());
        }
    }

    void handle_session(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        std::lock_guard<std::mutex> lock(sessions_mutex);
        const auto it = sessions.find(id);
        if (it == sessions.end()) {
            reply_error(res, 404, "UnknownSession", id);
            return;
        }
        reply_json(res, 200, it->second);
    }

    void handle_evaluate(const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            reply_error(res, 400, "BadRequest", e.what());
            return;
        }
        if (!body.contains("suite") || !body["suite"].is_array() || !body.contains("results") ||
            !body["results"].is_array()) {
            reply_error(res, 400, "BadRequest", "'suite' and 'results' arrays are required");
            return;
        }
        const auto k = body.value("k", config.settings.k);
        const bool strict_k = body.value("strict_k", config.strict_k);
        try {
            std::ostringstream suite_lines;
            for (const auto& t : body["suite"]) suite_lines << t.dump() << '\n';
            std::istringstream suite_in(suite_lines.str());
            const std::vector<BenchTask> tasks = load_suite(suite_in, corpus, taxonomy);

            std::map<std::string, ReturnedList> by_task;
            for (const auto& r : body["results"]) {
                ReturnedList list;
                list.task_id = r.value("task_id", std::string{});
                if (r.contains("cost_usd") && r["cost_usd"].is_number()) {
                    list.cost_usd = r["cost_usd"].get<double>();
                }
                for (const auto& e : r.value("entries", json::array())) {
                    list.entries.push_back(citation_from_json(e));
                }
                by_task[list.task_id] = std::move(list);
            }
            std::vector<TaskMetrics> metrics;
            metrics.reserve(tasks.size());
            for (const auto& task : tasks) {
                ReturnedList returned;
                const auto it = by_task.find(task.task_id);
                if (it != by_task.end()) returned = it->second;
                TaskMetrics m = evaluate_ranking(returned, task, k, corpus, strict_k);
                m.hallucination = audit_hallucination(returned, corpus, k);
                metrics.push_back(std::move(m));
            }
            reply_json(res, 200, to_json(aggregate_report(tasks, metrics, k, strict_k)));
        } catch (const SuiteLoadError& e) {
            reply_error(res, 400, e.code, e.what());
        } catch (const std::exception& e) {
            reply_error(res, 500, "EvaluateFailed", e.what());
        }
    }

    void handle_paper(const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        const std::string tier_str = req.matches[2];
        const auto tier = tier_from_string(tier_str);
        if (!tier) {
            reply_error(res, 400, "BadRequest", "tier must be meta, abstract or chunks");
            return;
        }
        try {
            switch (*tier) {
                case Tier::meta:
                    reply_json(res, 200, to_json(corpus.meta(id)));
                    return;
                case Tier::abstract: {
                    json j = to_json(corpus.abstract_entry(id));
                    j.erase("embedding");  // reading tools serve text, not vectors
                    reply_json(res, 200, j);
                    return;
                }
                case Tier::chunks: {
                    json arr = json::array();
                    for (const auto& c : corpus.chunks(id)) {
                        json j = to_json(c);
                        j.erase("embedding");
                        arr.push_back(std::move(j));
                    }
                    reply_json(res, 200, arr);
                    return;
                }
            }
        } catch (const UnknownPaperId& e) {
            reply_error(res, 404, "UnknownPaperId", e.what());
        } catch (const TierEmpty& e) {
            reply_error(res, 404, "TierEmpty", e.what());
        }
    }

    void install_routes() {
        server.Post("/search", [this](const httplib::Request& req, httplib::Response& res) {
            handle_search(req, res);
        });
        server.Get(R"(/session/([^/]+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       handle_session(req, res);
                   });
        server.Post("/evaluate", [this](const httplib::Request& req, httplib::Response& res) {
            handle_evaluate(req, res);
        });
        server.Get(R"(/paper/([^/]+)/([^/]+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       handle_paper(req, res);
                   });
        server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("{\"status\":\"ok\"}", "application/json");
        });
    }
};

Service::Service(const Corpus& corpus, EngineConfig config, Taxonomy taxonomy)
    : impl_(std::make_unique<Impl>(corpus, std::move(config), std::move(taxonomy))) {
    impl_->install_routes();
}

Service::~Service() {
    stop();
}

int Service::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw Error("cannot bind service port");
    } else if (!impl_->server.bind_to_port(host, port)) {
        throw Error("cannot bind service port " + std::to_string(port));
    }
    impl_->place_marker();
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void Service::stop() {
    if (!impl_) return;
    if (impl_->server.is_running()) impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
    impl_->remove_marker();
}

bool Service::running() const {
    return impl_->server.is_running();
}

int Service::run(const std::string& host, int port) {
    impl_->place_marker();
    const bool ok = impl_->server.listen(host, port);
    impl_->remove_marker();
    return ok ? 0 : 1;
}

}  // namespace litnav
