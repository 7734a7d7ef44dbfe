#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "litnav/cost.hpp"
#include "litnav/embedding.hpp"

namespace litnav {

// Shared text encoder contract. Implementations must be deterministic:
// identical input text yields bitwise-identical output within one process
// configuration. encode() output is always unit-norm.
class EncoderBackend {
public:
    virtual ~EncoderBackend() = default;

    virtual const std::string& name() const = 0;
    virtual std::size_t dimension() const = 0;

    // Throws EmptyText when the input is empty after whitespace trim;
    // remote implementations throw BackendFailure with retry metadata.
    virtual Vec encode(std::string_view text) = 0;

    virtual std::vector<Vec> encode_batch(const std::vector<std::string>& texts);

    // Token usage recorded since the last drain (remote backends only).
    // Safe to call concurrently with encode().
    virtual std::vector<TokenUsage> drain_usage() { return {}; }
};

// Deterministic reference encoder: signed feature hashing of character
// 3-grams into `dimension` buckets, L2-normalized. No model dependency;
// equal texts map to equal vectors, distinct texts collide only by hash.
class HashingEncoder final : public EncoderBackend {
public:
    explicit HashingEncoder(std::size_t dimension = 256);

    const std::string& name() const override { return name_; }
    std::size_t dimension() const override { return dim_; }
    Vec encode(std::string_view text) override;

private:
    std::size_t dim_;
    std::string name_;
};

}  // namespace litnav
