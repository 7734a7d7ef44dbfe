#include "litnav/backends.hpp"

#include <algorithm>

#include "litnav/text.hpp"

namespace litnav {

Judgment MockScorer::judge(const std::string& query, const Checklist& checklist,
                           const PaperBundle& paper) {
    (void)query;
    // One token set over abstract + every located evidence text: the rule is
    // independent of evidence ordering and of which checkpoint surfaced a chunk.
    std::set<std::string> haystack;
    for (const auto& w : tokenize_words(paper.abstract_text)) haystack.insert(w);
    for (const auto& [cp_id, texts] : paper.evidence_texts) {
        for (const auto& [idx, text] : texts) {
            for (const auto& w : tokenize_words(text)) haystack.insert(w);
        }
    }

    Judgment judgment;
    double sum = 0.0;
    for (const auto& cp : checklist.checkpoints) {
        int matched = 0;
        std::string matched_words;
        for (const auto& w : content_words(cp.requirement_text)) {
            if (haystack.count(w)) {
                ++matched;
                if (!matched_words.empty()) matched_words += ", ";
                matched_words += w;
            }
        }
        CheckpointScore cs;
        cs.checkpoint_id = cp.checkpoint_id;
        cs.score = 1 + std::min(4, matched);
        cs.rationale = matched > 0 ? "matched terms: " + matched_words : "no checkpoint terms found";
        const auto ev = paper.evidence_texts.find(cp.checkpoint_id);
        if (ev != paper.evidence_texts.end() && !ev->second.empty()) {
            cs.rationale += " [chunk " + std::to_string(ev->second.front().first) + "]";
        } else if (!paper.abstract_text.empty()) {
            cs.rationale += " [abstract]";
        }
        sum += cs.score;
        judgment.scores.push_back(std::move(cs));
    }
    const double mean = sum / static_cast<double>(checklist.size());
    judgment.confidence = std::clamp(mean / 5.0 - 0.01, 0.01, 0.99);
    judgment.usage = TokenUsage{name_, 0, 0};
    return judgment;
}

FunctionScorer fixed_scorer(int score, double rho) {
    return FunctionScorer("fixed-scorer", [score, rho](const std::string&,
                                                       const Checklist& checklist,
                                                       const PaperBundle&) {
        Judgment j;
        for (const auto& cp : checklist.checkpoints) {
            j.scores.push_back({cp.checkpoint_id, score, "scripted"});
        }
        j.confidence = rho;
        return j;
    });
}

std::vector<std::string> derive_checklist_texts(const std::string& query,
                                                std::uint32_t max_checkpoints) {
    std::vector<std::string> texts;
    std::string cur;
    for (const char c : query) {
        if (c == ';' || c == '.' || c == '!' || c == '?') {
            const std::string t = trim(cur);
            if (!t.empty()) texts.push_back(t);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    const std::string t = trim(cur);
    if (!t.empty()) texts.push_back(t);
    if (texts.empty()) texts.push_back(trim(query));
    if (texts.size() > max_checkpoints) texts.resize(max_checkpoints);
    return texts;
}

PlanResult HeuristicNavigator::plan(const std::string& query) {
    PlanResult result;
    result.strategy.semantic_queries.push_back(trim(query));
    result.strategy.expansion_depth = options_.expansion_depth;
    result.strategy.per_channel_limit = options_.per_channel_limit;
    result.checklist = Checklist::from_texts(derive_checklist_texts(query,
                                                                    options_.max_checkpoints));
    result.usage = TokenUsage{name_, 0, 0};
    return result;
}

ReflectResult HeuristicNavigator::reflect(const std::string& query,
                                          const SearchStrategy& strategy,
                                          const Checklist& checklist, const RankedList& ranked) {
    (void)query;
    ReflectResult result;
    result.strategy = strategy;
    result.checklist = checklist;
    result.usage = TokenUsage{name_, 0, 0};
    ++reflect_calls_;
    if (reflect_calls_ > 1 || ranked.entries.empty()) {
        result.stop = true;
        return result;
    }
    // Expand around what round 1 surfaced.
    result.strategy.seed_paper_ids.clear();
    const std::size_t take = std::min<std::size_t>(options_.seed_count, ranked.entries.size());
    for (std::size_t i = 0; i < take; ++i) {
        result.strategy.seed_paper_ids.push_back(ranked.entries[i].paper.paper_id);
    }
    result.stop = false;
    return result;
}

ReflectResult ScriptedNavigator::reflect(const std::string& query,
                                         const SearchStrategy& strategy,
                                         const Checklist& checklist, const RankedList& ranked) {
    (void)query;
    (void)ranked;
    if (next_ < reflects_.size()) return reflects_[next_++];
    ReflectResult result;
    result.strategy = strategy;
    result.checklist = checklist;
    result.stop = true;
    return result;
}

std::vector<std::string> IdentityListwise::reorder(const std::string& query,
                                                   const std::vector<const ScoredPaper*>& window) {
    (void)query;
    std::vector<std::string> out;
    out.reserve(window.size());
    for (const ScoredPaper* p : window) out.push_back(p->paper_id);
    return out;
}

}  // namespace litnav
