#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "litnav/orchestrator.hpp"

namespace litnav {

// Engine configuration. Resolution order: built-in defaults, then the
// config file, then LITNAV_* environment variables, then command-line
// flags (applied by the CLI layer).
struct EngineConfig {
    std::filesystem::path corpus_dir;
    std::size_t dimension = 256;
    SearchSettings settings;
    std::uint32_t per_channel_limit = 50;  // handed to local navigators
    bool strict_k = false;
    std::filesystem::path taxonomy_file;

    std::string encoder_backend = "hash";        // hash | remote
    std::string navigator_backend = "heuristic"; // heuristic | remote
    std::string scorer_backend = "mock";         // mock | remote
    std::string listwise_backend = "none";       // none | identity | remote

    std::string encoder_url;
    std::string navigator_url;
    std::string scorer_url;
    std::string listwise_url;
    std::string api_key;

    // model -> (USD per 1M input tokens, USD per 1M output tokens)
    std::map<std::string, std::pair<double, double>> rates;

    static EngineConfig from_file(const std::filesystem::path& path);
    // LITNAV_ENCODER_URL / _NAVIGATOR_URL / _SCORER_URL / _LISTWISE_URL /
    // _API_KEY; setting a URL also switches that backend to "remote".
    void apply_env();

    void install_rates(CostLedger& ledger) const;
};

// Owns the configured backend set; view() hands out the non-owning struct
// run_search expects. Navigators keep per-session state, so construct a
// fresh set per search session.
struct OwnedBackends {
    std::unique_ptr<EncoderBackend> encoder;
    std::unique_ptr<ScorerBackend> scorer;
    std::unique_ptr<NavigatorBackend> navigator;
    std::unique_ptr<ListwiseBackend> listwise;  // may stay null

    EngineBackends view() {
        return EngineBackends{encoder.get(), scorer.get(), navigator.get(), listwise.get()};
    }
};

OwnedBackends make_backends(const EngineConfig& config);

}  // namespace litnav
