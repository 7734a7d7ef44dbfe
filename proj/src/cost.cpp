#include "litnav/cost.hpp"

#include <algorithm>
#include <cmath>

#include "litnav/errors.hpp"

namespace litnav {

void CostLedger::set_rate(const std::string& model, double usd_per_mtok_in, double usd_per_mtok_out) {
    set_rate_micro(model, Rate{static_cast<std::int64_t>(std::llround(usd_per_mtok_in * 1e6)),
                               static_cast<std::int64_t>(std::llround(usd_per_mtok_out * 1e6))});
}

void CostLedger::set_rate_micro(const std::string& model, Rate rate) {
    rates_[model] = rate;
}

void CostLedger::accumulate(const std::string& model, std::int64_t input_tokens,
                            std::int64_t output_tokens) {
    if (input_tokens < 0 || output_tokens < 0) throw NegativeTokens();
    Rate rate;
    const auto it = rates_.find(model);
    if (it != rates_.end()) {
        rate = it->second;
    } else if (std::find(unknown_models_.begin(), unknown_models_.end(), model) ==
               unknown_models_.end()) {
        unknown_models_.push_back(model);
    }
    // tokens * (micro-USD per 1M tokens) = pico-USD
    const std::int64_t pico =
        input_tokens * rate.input_micro_per_mtok + output_tokens * rate.output_micro_per_mtok;
    entries_.push_back(Entry{model, input_tokens, output_tokens, pico});
    total_pico_ += pico;
}

std::string CostLedger::total_usd_string() const {
    __int128 v = total_pico_;
    const bool neg = v < 0;
    if (neg) v = -v;
    const auto whole = static_cast<unsigned long long>(v / 1000000000000LL);
    auto frac = static_cast<unsigned long long>(v % 1000000000000LL);
    std::string out = (neg ? "-" : "") + std::to_string(whole);
    if (frac != 0) {
        std::string digits(12, '0');
        for (int i = 11; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + frac % 10);
            frac /= 10;
        }
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += "." + digits;
    }
    return out;
}

}  // namespace litnav
