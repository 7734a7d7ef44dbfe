#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litnav/corpus.hpp"
#include "litnav/encoder.hpp"

namespace litnav {

// A web finding supplied by the planning layer. Findings never enter a
// candidate pool directly; they must first map to a verified corpus entry.
struct ExternalFinding {
    std::string title;
    std::string doi;
    std::string link;
};

struct SearchStrategy {
    std::vector<std::string> semantic_queries;
    std::vector<std::string> seed_paper_ids;
    std::uint32_t expansion_depth = 1;
    std::vector<ExternalFinding> external_findings;
    std::uint32_t per_channel_limit = 50;

    bool all_channels_empty() const {
        return semantic_queries.empty() && seed_paper_ids.empty() && external_findings.empty();
    }
    // Empty string when valid, else the reason the strategy is unusable.
    std::string validate() const;
};

enum class Channel { semantic, citation, web };
const char* channel_name(Channel c);

struct PoolEntry {
    std::set<Channel> provenance;
    std::uint32_t round_added = 0;
};

// Candidate pool: every key resolves in the meta tier by construction.
struct CandidatePool {
    std::map<std::string, PoolEntry> entries;

    bool contains(const std::string& id) const { return entries.count(id) != 0; }
    std::size_t size() const { return entries.size(); }
    // Ids ascending (map order).
    std::vector<std::string> ids() const;
};

// Top-`limit` papers by cosine between the encoded query and the abstract
// tier. Throws EmptyText / TierEmpty("abstract").
std::vector<std::pair<std::string, double>> semantic_direct(const std::string& query_text,
                                                            std::uint32_t limit,
                                                            const Corpus& corpus,
                                                            EncoderBackend& encoder,
                                                            int threads = 0);

struct ExpandResult {
    std::set<std::string> ids;                 // reachable within depth hops, seeds excluded
    std::vector<std::string> unknown_seeds;    // dropped, reported, never fatal
};

// Breadth-first expansion along references ∪ cited_by edges.
ExpandResult citation_expand(const std::vector<std::string>& seed_ids, std::uint32_t depth,
                             const Corpus& corpus);

// Maps an external finding to a verified entry: normalized-DOI match first,
// then normalized-title match. No-match returns nullopt and the finding is
// discarded by the caller; nothing unverified can reach a pool.
std::optional<std::string> web_to_repo_verify(const ExternalFinding& finding,
                                              const Corpus& corpus);

struct ChannelOutput {
    Channel channel;
    std::vector<std::string> ids;
};

// Set union with provenance merge; ordering is paper_id ascending and the
// result is identical for any permutation of the inputs.
CandidatePool merge_candidates(const std::vector<ChannelOutput>& channel_outputs,
                               std::uint32_t round);

}  // namespace litnav
