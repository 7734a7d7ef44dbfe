#include "litnav/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "litnav/backends.hpp"
#include "litnav/errors.hpp"
#include "litnav/remote.hpp"

using nlohmann::json;

namespace litnav {

namespace {

void read_backend(const json& j, const char* key, std::string& backend, std::string& url) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (it->is_string()) {
        backend = it->get<std::string>();
        return;
    }
    backend = it->value("backend", backend);
    url = it->value("url", url);
}

const char* env(const char* name) {
    return std::getenv(name);
}

}  // namespace

EngineConfig EngineConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error("config file " + path.string() + ": " + e.what());
    }
    EngineConfig c;
    if (j.contains("corpus")) c.corpus_dir = j["corpus"].get<std::string>();
    c.dimension = j.value("dimension", c.dimension);
    c.settings.k = j.value("k", c.settings.k);
    c.settings.k_evidence = j.value("k_evidence", c.settings.k_evidence);
    c.settings.max_rounds = j.value("max_rounds", c.settings.max_rounds);
    c.settings.theta_new = j.value("theta_new", c.settings.theta_new);
    c.settings.workers = j.value("workers", c.settings.workers);
    c.settings.window_m = j.value("window", c.settings.window_m);
    c.per_channel_limit = j.value("per_channel_limit", c.per_channel_limit);
    c.strict_k = j.value("strict_k", c.strict_k);
    if (j.contains("taxonomy")) c.taxonomy_file = j["taxonomy"].get<std::string>();
    read_backend(j, "encoder", c.encoder_backend, c.encoder_url);
    read_backend(j, "navigator", c.navigator_backend, c.navigator_url);
    read_backend(j, "scorer", c.scorer_backend, c.scorer_url);
    read_backend(j, "listwise", c.listwise_backend, c.listwise_url);
    if (const auto it = j.find("rates"); it != j.end()) {
        for (const auto& [model, r] : it->items()) {
            c.rates[model] = {r.value("input_usd_per_mtok", 0.0),
                              r.value("output_usd_per_mtok", 0.0)};
        }
    }
    return c;
}

void EngineConfig::apply_env() {
    if (const char* v = env("LITNAV_ENCODER_URL")) {
        encoder_url = v;
        encoder_backend = "remote";
    }
    if (const char* v = env("LITNAV_NAVIGATOR_URL")) {
        navigator_url = v;
        navigator_backend = "remote";
    }
    if (const char* v = env("LITNAV_SCORER_URL")) {
        scorer_url = v;
        scorer_backend = "remote";
    }
    if (const char* v = env("LITNAV_LISTWISE_URL")) {
        listwise_url = v;
        listwise_backend = "remote";
    }
    if (const char* v = env("LITNAV_API_KEY")) api_key = v;
}

void EngineConfig::install_rates(CostLedger& ledger) const {
    for (const auto& [model, r] : rates) ledger.set_rate(model, r.first, r.second);
}

OwnedBackends make_backends(const EngineConfig& config) {
    OwnedBackends b;

    if (config.encoder_backend == "hash") {
        b.encoder = std::make_unique<HashingEncoder>(config.dimension);
    } else if (config.encoder_backend == "remote") {
        if (config.encoder_url.empty()) throw Error("encoder backend 'remote' needs a url");
        b.encoder = std::make_unique<RemoteEncoder>(
            RemoteOptions{config.encoder_url, config.api_key}, config.dimension);
    } else {
        throw Error("unknown encoder backend '" + config.encoder_backend + "'");
    }

    if (config.scorer_backend == "mock") {
        b.scorer = std::make_unique<MockScorer>();
    } else if (config.scorer_backend == "remote") {
        if (config.scorer_url.empty()) throw Error("scorer backend 'remote' needs a url");
        b.scorer =
            std::make_unique<RemoteScorer>(RemoteOptions{config.scorer_url, config.api_key});
    } else {
        throw Error("unknown scorer backend '" + config.scorer_backend + "'");
    }

    if (config.navigator_backend == "heuristic") {
        HeuristicNavigator::Options opts;
        opts.per_channel_limit = config.per_channel_limit;
        b.navigator = std::make_unique<HeuristicNavigator>(opts);
    } else if (config.navigator_backend == "remote") {
        if (config.navigator_url.empty()) throw Error("navigator backend 'remote' needs a url");
        b.navigator = std::make_unique<RemoteNavigator>(
            RemoteOptions{config.navigator_url, config.api_key});
    } else {
        throw Error("unknown navigator backend '" + config.navigator_backend + "'");
    }

    if (config.listwise_backend == "none" || config.listwise_backend.empty()) {
        // score order stands
    } else if (config.listwise_backend == "identity") {
        b.listwise = std::make_unique<IdentityListwise>();
    } else if (config.listwise_backend == "remote") {
        if (config.listwise_url.empty()) throw Error("listwise backend 'remote' needs a url");
        b.listwise = std::make_unique<RemoteListwise>(
            RemoteOptions{config.listwise_url, config.api_key});
    } else {
        throw Error("unknown listwise backend '" + config.listwise_backend + "'");
    }
    return b;
}

}  // namespace litnav
