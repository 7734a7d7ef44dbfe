#include "litnav/remote.hpp"

#include <httplib.h>

#include "litnav/errors.hpp"
#include "litnav/wire.hpp"

using nlohmann::json;

namespace litnav {

namespace {

json post_json(const RemoteOptions& options, const std::string& path, const json& body) {
    httplib::Client client(options.base_url);
    client.set_connection_timeout(options.timeout_seconds, 0);
    client.set_read_timeout(options.timeout_seconds, 0);
    httplib::Headers headers;
    if (!options.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + options.api_key);
    }
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = "connection error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            throw BackendFailure("endpoint " + options.base_url + path + " returned HTTP " +
                                     std::to_string(res->status) + ": " + res->body,
                                 options.base_url + path, attempt);
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw BackendFailure("endpoint " + options.base_url + path +
                                     " returned invalid JSON: " + e.what(),
                                 options.base_url + path, attempt);
        }
    }
    throw BackendFailure("endpoint " + options.base_url + path + " unreachable after " +
                             std::to_string(options.max_attempts) + " attempts (" + last_error +
                             ")",
                         options.base_url + path, options.max_attempts);
}

}  // namespace

RemoteEncoder::RemoteEncoder(RemoteOptions options, std::size_t dimension)
    : options_(std::move(options)), dim_(dimension),
      name_("remote-encoder(" + options_.base_url + ")") {}

Vec RemoteEncoder::encode(std::string_view text) {
    return encode_batch({std::string(text)}).front();
}

std::vector<Vec> RemoteEncoder::encode_batch(const std::vector<std::string>& texts) {
    for (const auto& t : texts) {
        if (t.find_first_not_of(" \t\r\n") == std::string::npos) throw EmptyText();
    }
    const json reply = post_json(options_, "/encode", json{{"texts", texts}});
    if (!reply.contains("embeddings") || !reply["embeddings"].is_array() ||
        reply["embeddings"].size() != texts.size()) {
        throw BackendFailure("encoder reply missing same-order 'embeddings' array",
                             options_.base_url + "/encode", 1);
    }
    std::vector<Vec> out;
    out.reserve(texts.size());
    for (const auto& e : reply["embeddings"]) {
        Vec v = e.get<Vec>();
        if (v.size() != dim_) throw DimensionMismatch(dim_, v.size());
        if (!l2_normalize(v)) {
            throw BackendFailure("encoder returned a zero-norm embedding",
                                 options_.base_url + "/encode", 1);
        }
        out.push_back(std::move(v));
    }
    {
        std::lock_guard<std::mutex> lock(usage_mutex_);
        usage_.push_back(usage_from_json(reply, name_));
    }
    return out;
}

std::vector<TokenUsage> RemoteEncoder::drain_usage() {
    std::lock_guard<std::mutex> lock(usage_mutex_);
    std::vector<TokenUsage> out;
    out.swap(usage_);
    return out;
}

RemoteScorer::RemoteScorer(RemoteOptions options)
    : options_(std::move(options)), name_("remote-scorer(" + options_.base_url + ")") {}

Judgment RemoteScorer::judge(const std::string& query, const Checklist& checklist,
                             const PaperBundle& paper) {
    const json reply = post_json(options_, "/judge",
                                 json{{"query", query},
                                      {"checklist", to_json(checklist)},
                                      {"paper", to_json(paper)}});
    Judgment judgment = judgment_from_json(reply);
    judgment.usage = usage_from_json(reply, name_);
    return judgment;
}

RemoteNavigator::RemoteNavigator(RemoteOptions options)
    : options_(std::move(options)), name_("remote-navigator(" + options_.base_url + ")") {}

PlanResult RemoteNavigator::plan(const std::string& query) {
    const json reply = post_json(options_, "/plan", json{{"query", query}});
    PlanResult result;
    if (!reply.contains("strategy") || !reply.contains("checklist")) {
        throw BackendFailure("plan reply must carry 'strategy' and 'checklist'",
                             options_.base_url + "/plan", 1);
    }
    result.strategy = strategy_from_json(reply["strategy"]);
    result.checklist = checklist_from_json(reply["checklist"]);
    result.usage = usage_from_json(reply, name_);
    return result;
}

ReflectResult RemoteNavigator::reflect(const std::string& query, const SearchStrategy& strategy,
                                       const Checklist& checklist, const RankedList& ranked) {
    const json reply = post_json(options_, "/reflect",
                                 json{{"query", query},
                                      {"strategy", to_json(strategy)},
                                      {"checklist", to_json(checklist)},
                                      {"ranking", to_json(ranked)}});
    ReflectResult result;
    if (!reply.contains("strategy") || !reply.contains("checklist")) {
        throw BackendFailure("reflect reply must carry 'strategy' and 'checklist'",
                             options_.base_url + "/reflect", 1);
    }
    result.strategy = strategy_from_json(reply["strategy"]);
    result.checklist = checklist_from_json(reply["checklist"]);
    result.stop = reply.value("stop", false);
    result.usage = usage_from_json(reply, name_);
    return result;
}

RemoteListwise::RemoteListwise(RemoteOptions options)
    : options_(std::move(options)), name_("remote-listwise(" + options_.base_url + ")") {}

std::vector<std::string> RemoteListwise::reorder(const std::string& query,
                                                 const std::vector<const ScoredPaper*>& window) {
    json bundle = json::array();
    for (const ScoredPaper* p : window) bundle.push_back(to_json(*p));
    const json reply = post_json(options_, "/reorder",
                                 json{{"query", query}, {"window", std::move(bundle)}});
    if (!reply.contains("order") || !reply["order"].is_array()) {
        throw BackendFailure("reorder reply must carry an 'order' array",
                             options_.base_url + "/reorder", 1);
    }
    {
        std::lock_guard<std::mutex> lock(usage_mutex_);
        usage_ = usage_from_json(reply, name_);
    }
    return reply["order"].get<std::vector<std::string>>();
}

TokenUsage RemoteListwise::drain_usage() {
    std::lock_guard<std::mutex> lock(usage_mutex_);
    TokenUsage out = usage_;
    usage_ = TokenUsage{};
    return out;
}

}  // namespace litnav
