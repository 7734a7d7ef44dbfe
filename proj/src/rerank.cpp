#include "litnav/rerank.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include <json.hpp>

#include "litnav/errors.hpp"
#include "litnav/text.hpp"

using nlohmann::json;

namespace litnav {

std::vector<std::string> RankedList::ids() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.paper.paper_id);
    return out;
}

RankedList final_rank(const std::vector<ScoredPaper>& scored, std::uint32_t k) {
    if (k == 0) throw Error("rank cutoff K must be >= 1");
    std::vector<const ScoredPaper*> order;
    order.reserve(scored.size());
    for (const auto& s : scored) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const ScoredPaper* a, const ScoredPaper* b) {
        if (a->relevance != b->relevance) return a->relevance > b->relevance;
        if (a->mean_score != b->mean_score) return a->mean_score > b->mean_score;
        return a->paper_id < b->paper_id;
    });
    RankedList list;
    list.cutoff_k = k;
    const std::size_t take = std::min<std::size_t>(k, order.size());
    list.entries.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        list.entries.push_back({static_cast<std::uint32_t>(i + 1), *order[i], 0});
    }
    return list;
}

ListwiseOutcome apply_listwise_window(const RankedList& ranked, std::uint32_t window_size,
                                      ListwiseBackend& backend, const std::string& query) {
    ListwiseOutcome outcome;
    outcome.list = ranked;
    const std::size_t m = std::min<std::size_t>(window_size, ranked.entries.size());
    if (m < 2) return outcome;

    std::vector<const ScoredPaper*> window;
    window.reserve(m);
    for (std::size_t i = 0; i < m; ++i) window.push_back(&ranked.entries[i].paper);

    const std::vector<std::string> order = backend.reorder(query, window);
    outcome.usage = backend.drain_usage();

    // Validate a true permutation of the window ids.
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < m; ++i) pos[ranked.entries[i].paper.paper_id] = i;
    bool valid = order.size() == m;
    std::map<std::string, bool> used;
    if (valid) {
        for (const auto& id : order) {
            const auto it = pos.find(id);
            if (it == pos.end() || used[id]) {
                valid = false;
                break;
            }
            used[id] = true;
        }
    }
    if (!valid) {
        outcome.invalid_permutation = true;
        return outcome;
    }

    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
        if (order[i] != ranked.entries[i].paper.paper_id) {
            changed = true;
            break;
        }
    }
    if (!changed) return outcome;

    outcome.reordered = true;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t from = pos[order[i]];
        outcome.list.entries[i] = ranked.entries[from];
        outcome.list.entries[i].rank = static_cast<std::uint32_t>(i + 1);
        outcome.list.entries[i].pre_rerank_rank = ranked.entries[from].rank;
    }
    for (std::size_t i = m; i < ranked.entries.size(); ++i) {
        outcome.list.entries[i].pre_rerank_rank = ranked.entries[i].rank;
    }
    return outcome;
}

std::string ranked_entry_line(const RankedEntry& e) {
    // Assembled by hand: fixed field order and fixed-precision scores keep
    // the file byte-stable across runs and platforms.
    std::string line = "{\"rank\":" + std::to_string(e.rank);
    line += ",\"paper_id\":" + json(e.paper.paper_id).dump();
    line += ",\"relevance\":" + fmt_fixed(e.paper.relevance);
    line += ",\"mean_score\":" + fmt_fixed(e.paper.mean_score);
    line += ",\"confidence\":" + fmt_fixed(e.paper.confidence);
    line += ",\"checkpoint_scores\":[";
    for (std::size_t i = 0; i < e.paper.checkpoint_scores.size(); ++i) {
        const auto& cs = e.paper.checkpoint_scores[i];
        if (i > 0) line += ',';
        line += "{\"checkpoint_id\":" + std::to_string(cs.checkpoint_id);
        line += ",\"score\":" + std::to_string(cs.score);
        line += ",\"rationale\":" + json(cs.rationale).dump() + "}";
    }
    line += "],\"evidence\":{";
    bool first_cp = true;
    for (const auto& [cp_id, refs] : e.paper.evidence.per_checkpoint) {
        if (!first_cp) line += ',';
        first_cp = false;
        line += json(std::to_string(cp_id)).dump() + ":[";
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (i > 0) line += ',';
            line += "{\"chunk_index\":" + std::to_string(refs[i].chunk_index);
            line += ",\"similarity\":" + fmt_fixed(refs[i].similarity) + "}";
        }
        line += "]";
    }
    line += "}";
    if (e.pre_rerank_rank != 0) {
        line += ",\"pre_rerank_rank\":" + std::to_string(e.pre_rerank_rank);
    }
    line += "}";
    return line;
}

void write_ranked_list(std::ostream& out, const RankedList& ranked) {
    for (const auto& e : ranked.entries) out << ranked_entry_line(e) << '\n';
}

}  // namespace litnav
