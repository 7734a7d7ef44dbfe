#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "litnav/cost.hpp"
#include "litnav/verify.hpp"

namespace litnav {

struct RankedEntry {
    std::uint32_t rank = 0;  // 1-based, contiguous
    ScoredPaper paper;
    // 0 when no listwise backend reordered the window; otherwise the
    // position this entry held before the listwise pass (audit field).
    std::uint32_t pre_rerank_rank = 0;
};

struct RankedList {
    std::vector<RankedEntry> entries;  // length <= cutoff_k
    std::uint32_t cutoff_k = 0;

    std::vector<std::string> ids() const;
};

// Listwise reranker contract: returns a permutation of the window's paper
// ids. Anything that is not a true permutation is rejected by the caller.
class ListwiseBackend {
public:
    virtual ~ListwiseBackend() = default;
    virtual const std::string& name() const = 0;
    virtual std::vector<std::string> reorder(const std::string& query,
                                             const std::vector<const ScoredPaper*>& window) = 0;
    virtual TokenUsage drain_usage() { return {}; }
};

// Sort by relevance descending, ties by mean score descending then
// paper_id ascending; truncate to K. Deterministic for any input order.
RankedList final_rank(const std::vector<ScoredPaper>& scored, std::uint32_t k);

struct ListwiseOutcome {
    RankedList list;
    bool reordered = false;
    bool invalid_permutation = false;  // backend output rejected, window kept
    TokenUsage usage;
};

// Replaces the top-min(M, len) window with the backend's permutation;
// entries below the window are untouched.
ListwiseOutcome apply_listwise_window(const RankedList& ranked, std::uint32_t window_size,
                                      ListwiseBackend& backend, const std::string& query);

// Line-delimited output format (the engine's primary deliverable): one JSON
// object per entry with fixed field order and 6-decimal scores, so that
// identical inputs produce byte-identical files.
void write_ranked_list(std::ostream& out, const RankedList& ranked);
std::string ranked_entry_line(const RankedEntry& e);

}  // namespace litnav
