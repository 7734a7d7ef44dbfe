#include "litnav/channels.hpp"

#include <deque>

#include "litnav/errors.hpp"
#include "litnav/text.hpp"

namespace litnav {

const char* channel_name(Channel c) {
    switch (c) {
        case Channel::semantic: return "semantic";
        case Channel::citation: return "citation";
        case Channel::web: return "web";
    }
    return "?";
}

std::string SearchStrategy::validate() const {
    if (per_channel_limit < 1) return "per_channel_limit must be >= 1";
    if (all_channels_empty()) {
        return "strategy drives no channel (no semantic queries, seeds or external findings)";
    }
    for (const auto& q : semantic_queries) {
        if (trim(q).empty()) return "semantic query is empty";
    }
    for (const auto& f : external_findings) {
        if (trim(f.title).empty()) return "external finding has an empty title";
    }
    return {};
}

std::vector<std::string> CandidatePool::ids() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& [id, e] : entries) out.push_back(id);
    return out;
}

std::vector<std::pair<std::string, double>> semantic_direct(const std::string& query_text,
                                                            std::uint32_t limit,
                                                            const Corpus& corpus,
                                                            EncoderBackend& encoder,
                                                            int threads) {
    if (corpus.abstract_count() == 0) throw TierEmpty("<corpus>", "abstract");
    const Vec q = encoder.encode(query_text);
    const auto hits = top_k_similar(corpus.abstract_index(), q, limit, threads);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.emplace_back(h.item_id, h.score);
    return out;
}

ExpandResult citation_expand(const std::vector<std::string>& seed_ids, std::uint32_t depth,
                             const Corpus& corpus) {
    ExpandResult result;
    std::set<std::string> seeds;
    std::deque<std::pair<std::string, std::uint32_t>> frontier;
    for (const auto& s : seed_ids) {
        if (!corpus.contains(s)) {
            result.unknown_seeds.push_back(s);
            continue;
        }
        if (seeds.insert(s).second) frontier.emplace_back(s, 0);
    }
    if (depth == 0) return result;

    std::set<std::string> visited = seeds;
    while (!frontier.empty()) {
        const auto [id, dist] = frontier.front();
        frontier.pop_front();
        if (dist == depth) continue;
        for (const auto& next : corpus.citation_neighbors(id, Direction::both)) {
            if (!visited.insert(next).second) continue;
            result.ids.insert(next);
            frontier.emplace_back(next, dist + 1);
        }
    }
    return result;
}

std::optional<std::string> web_to_repo_verify(const ExternalFinding& finding,
                                              const Corpus& corpus) {
    if (!finding.doi.empty()) {
        if (auto id = corpus.find_by_doi(normalize_doi(finding.doi))) return id;
    }
    if (auto id = corpus.find_by_title(normalize_title(finding.title))) return id;
    return std::nullopt;
}

CandidatePool merge_candidates(const std::vector<ChannelOutput>& channel_outputs,
                               std::uint32_t round) {
    CandidatePool pool;
    for (const auto& out : channel_outputs) {
        for (const auto& id : out.ids) {
            auto& entry = pool.entries[id];
            entry.provenance.insert(out.channel);
            entry.round_added = round;
        }
    }
    return pool;
}

}  // namespace litnav
