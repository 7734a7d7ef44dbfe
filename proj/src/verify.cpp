#include "litnav/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "litnav/errors.hpp"
#include "litnav/text.hpp"

namespace litnav {

std::string Checklist::validate() const {
    if (checkpoints.empty()) return "checklist has no checkpoints";
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i].checkpoint_id != i + 1) {
            return "checkpoint ids must be contiguous from 1";
        }
        if (trim(checkpoints[i].requirement_text).empty()) {
            return "checkpoint " + std::to_string(i + 1) + " has empty requirement text";
        }
    }
    return {};
}

std::uint64_t Checklist::hash() const {
    std::uint64_t h = fnv1a64("checklist");
    for (const auto& c : checkpoints) {
        h = fnv1a64(c.requirement_text, h);
        h = fnv1a64("\x1f", h);
    }
    return h;
}

Checklist Checklist::from_texts(const std::vector<std::string>& texts) {
    Checklist cl;
    cl.checkpoints.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        cl.checkpoints.push_back({static_cast<std::uint32_t>(i + 1), texts[i]});
    }
    return cl;
}

EvidenceSet locate_evidence(const std::string& paper_id, const Checklist& checklist,
                            std::uint32_t k_evidence, const Corpus& corpus,
                            EncoderBackend& encoder) {
    std::vector<Vec> embeddings;
    embeddings.reserve(checklist.size());
    for (const auto& c : checklist.checkpoints) {
        embeddings.push_back(encoder.encode(c.requirement_text));
    }
    return locate_evidence_with(paper_id, checklist, k_evidence, corpus, embeddings);
}

EvidenceSet locate_evidence_with(const std::string& paper_id, const Checklist& checklist,
                                 std::uint32_t k_evidence, const Corpus& corpus,
                                 const std::vector<Vec>& checkpoint_embeddings) {
    if (k_evidence == 0) throw Error("k_evidence must be >= 1");
    if (checkpoint_embeddings.size() != checklist.size()) {
        throw Error("checkpoint embedding count does not match checklist");
    }
    EvidenceSet set;
    set.paper_id = paper_id;
    if (!corpus.contains(paper_id)) throw UnknownPaperId(paper_id);
    if (!corpus.has_chunks(paper_id)) {
        for (const auto& c : checklist.checkpoints) set.per_checkpoint[c.checkpoint_id] = {};
        return set;
    }
    const auto& chunks = corpus.chunks(paper_id);
    for (std::size_t ci = 0; ci < checklist.size(); ++ci) {
        const Vec& q = checkpoint_embeddings[ci];
        std::vector<EvidenceRef> refs;
        refs.reserve(chunks.size());
        for (const auto& chunk : chunks) {
            refs.push_back({chunk.chunk_index, dot(q, chunk.embedding)});
        }
        const std::size_t take = std::min<std::size_t>(k_evidence, refs.size());
        std::partial_sort(refs.begin(), refs.begin() + static_cast<std::ptrdiff_t>(take),
                          refs.end(), [](const EvidenceRef& a, const EvidenceRef& b) {
                              if (a.similarity != b.similarity) return a.similarity > b.similarity;
                              return a.chunk_index < b.chunk_index;
                          });
        refs.resize(take);
        set.per_checkpoint[checklist.checkpoints[ci].checkpoint_id] = std::move(refs);
    }
    return set;
}

std::pair<double, double> aggregate_relevance(const std::vector<CheckpointScore>& scores,
                                              double rho) {
    if (scores.empty()) throw EmptyChecklist();
    double sum = 0.0;
    for (const auto& s : scores) {
        if (s.score < 1 || s.score > 5) {
            throw MalformedJudgment("checkpoint score " + std::to_string(s.score) +
                                    " outside {1..5}");
        }
        sum += s.score;
    }
    if (!(rho > 0.0 && rho < 1.0)) {
        throw MalformedJudgment("confidence outside (0,1)");
    }
    const double mean = sum / static_cast<double>(scores.size());
    return {mean, (mean + rho) / 6.0};
}

ScoredPaper score_candidate(const std::string& paper_id, const std::string& query,
                            const Checklist& checklist, const EvidenceSet& evidence,
                            ScorerBackend& backend, const Corpus& corpus, TokenUsage* usage) {
    PaperBundle bundle;
    bundle.meta = &corpus.meta(paper_id);
    if (corpus.has_abstract(paper_id)) {
        bundle.abstract_text = corpus.abstract_entry(paper_id).abstract_text;
    }
    if (corpus.has_chunks(paper_id)) {
        const auto& chunks = corpus.chunks(paper_id);
        for (const auto& [cp_id, refs] : evidence.per_checkpoint) {
            auto& texts = bundle.evidence_texts[cp_id];
            for (const auto& ref : refs) {
                texts.emplace_back(ref.chunk_index, chunks.at(ref.chunk_index).text);
            }
        }
    }

    Judgment judgment = backend.judge(query, checklist, bundle);
    if (usage != nullptr) *usage = judgment.usage;

    if (judgment.scores.size() != checklist.size()) {
        throw MalformedJudgment("scorer returned " + std::to_string(judgment.scores.size()) +
                                " scores for " + std::to_string(checklist.size()) +
                                " checkpoints");
    }
    for (std::size_t i = 0; i < judgment.scores.size(); ++i) {
        if (judgment.scores[i].checkpoint_id != i + 1) {
            throw MalformedJudgment("scorer checkpoint ids out of order");
        }
    }

    ScoredPaper scored;
    scored.paper_id = paper_id;
    scored.checkpoint_scores = std::move(judgment.scores);
    std::tie(scored.mean_score, scored.relevance) =
        aggregate_relevance(scored.checkpoint_scores, judgment.confidence);
    scored.confidence = judgment.confidence;
    scored.evidence = evidence;
    return scored;
}

}  // namespace litnav
