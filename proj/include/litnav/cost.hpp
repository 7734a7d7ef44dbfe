#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace litnav {

// One backend call's token consumption. Mock/local backends report zeros;
// remote adapters must pass through exact counts from the transport layer.
struct TokenUsage {
    std::string model;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
};

// Price for one model in micro-dollars per 1M tokens. Kept integral so the
// ledger total is exact (no floating-point money).
struct Rate {
    std::int64_t input_micro_per_mtok = 0;
    std::int64_t output_micro_per_mtok = 0;
};

class CostLedger {
public:
    struct Entry {
        std::string model;
        std::int64_t input_tokens = 0;
        std::int64_t output_tokens = 0;
        // cost of this entry in pico-dollars (1e-12 USD): exact integer
        std::int64_t cost_pico_usd = 0;
    };

    void set_rate(const std::string& model, double usd_per_mtok_in, double usd_per_mtok_out);
    void set_rate_micro(const std::string& model, Rate rate);
    const std::map<std::string, Rate>& rates() const { return rates_; }

    // Appends an entry; throws NegativeTokens. A model absent from the rate
    // table is priced (0, 0) and remembered as a warning.
    void accumulate(const std::string& model, std::int64_t input_tokens, std::int64_t output_tokens);
    void accumulate(const TokenUsage& usage) {
        accumulate(usage.model, usage.input_tokens, usage.output_tokens);
    }

    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<std::string>& unknown_models() const { return unknown_models_; }

    // Exact total in pico-dollars; total_usd() is the double view for reports.
    __int128 total_pico_usd() const { return total_pico_; }
    double total_usd() const { return static_cast<double>(total_pico_) / 1e12; }

    // Exact decimal rendering of the total, e.g. "0.002".
    std::string total_usd_string() const;

private:
    std::vector<Entry> entries_;
    std::map<std::string, Rate> rates_;
    std::vector<std::string> unknown_models_;
    __int128 total_pico_ = 0;
};

}  // namespace litnav
