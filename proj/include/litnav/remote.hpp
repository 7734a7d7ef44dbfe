#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "litnav/orchestrator.hpp"

namespace litnav {

// HTTP adapters for the four pluggable backends. All of them POST a JSON
// body and expect a JSON reply carrying an optional "usage" object
// ({"model", "input_tokens", "output_tokens"}) with exact transport-layer
// token counts. Calls are independently retryable; after `max_attempts`
// connection failures a BackendFailure carries the endpoint and attempt
// count.
struct RemoteOptions {
    std::string base_url;      // e.g. http://127.0.0.1:8090
    std::string api_key;       // sent as Authorization: Bearer <key> when set
    int max_attempts = 3;
    int timeout_seconds = 30;
};

class RemoteEncoder final : public EncoderBackend {
public:
    RemoteEncoder(RemoteOptions options, std::size_t dimension);
    const std::string& name() const override { return name_; }
    std::size_t dimension() const override { return dim_; }
    Vec encode(std::string_view text) override;
    std::vector<Vec> encode_batch(const std::vector<std::string>& texts) override;
    std::vector<TokenUsage> drain_usage() override;

private:
    RemoteOptions options_;
    std::size_t dim_;
    std::string name_;
    std::mutex usage_mutex_;
    std::vector<TokenUsage> usage_;
};

class RemoteScorer final : public ScorerBackend {
public:
    explicit RemoteScorer(RemoteOptions options);
    const std::string& name() const override { return name_; }
    Judgment judge(const std::string& query, const Checklist& checklist,
                   const PaperBundle& paper) override;

private:
    RemoteOptions options_;
    std::string name_;
};

class RemoteNavigator final : public NavigatorBackend {
public:
    explicit RemoteNavigator(RemoteOptions options);
    const std::string& name() const override { return name_; }
    PlanResult plan(const std::string& query) override;
    ReflectResult reflect(const std::string& query, const SearchStrategy& strategy,
                          const Checklist& checklist, const RankedList& ranked) override;

private:
    RemoteOptions options_;
    std::string name_;
};

class RemoteListwise final : public ListwiseBackend {
public:
    explicit RemoteListwise(RemoteOptions options);
    const std::string& name() const override { return name_; }
    std::vector<std::string> reorder(const std::string& query,
                                     const std::vector<const ScoredPaper*>& window) override;
    TokenUsage drain_usage() override;

private:
    RemoteOptions options_;
    std::string name_;
    std::mutex usage_mutex_;
    TokenUsage usage_;
};

}  // namespace litnav
