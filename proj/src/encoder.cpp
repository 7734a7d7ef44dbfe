#include "litnav/encoder.hpp"

#include "litnav/errors.hpp"
#include "litnav/text.hpp"

namespace litnav {

std::vector<Vec> EncoderBackend::encode_batch(const std::vector<std::string>& texts) {
    std::vector<Vec> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(encode(t));
    return out;
}

HashingEncoder::HashingEncoder(std::size_t dimension)
    : dim_(dimension), name_("hash3-" + std::to_string(dimension)) {}

Vec HashingEncoder::encode(std::string_view text) {
    const std::string s = collapse_whitespace(lower_ascii(text));
    if (s.empty()) throw EmptyText();
    Vec v(dim_, 0.0);
    auto bump = [&](std::string_view gram) {
        const std::uint64_t h = fnv1a64(gram);
        const std::size_t bucket = h % dim_;
        v[bucket] += (h & 0x8000000000000000ULL) ? -1.0 : 1.0;
    };
    if (s.size() < 3) {
        bump(s);
    } else {
        for (std::size_t i = 0; i + 3 <= s.size(); ++i) bump(std::string_view(s).substr(i, 3));
    }
    if (!l2_normalize(v)) {
        // All grams cancelled; fall back to a one-hot keyed by the whole text.
        v.assign(dim_, 0.0);
        v[fnv1a64(s) % dim_] = 1.0;
    }
    return v;
}

}  // namespace litnav
