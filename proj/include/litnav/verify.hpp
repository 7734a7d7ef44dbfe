#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "litnav/corpus.hpp"
#include "litnav/cost.hpp"
#include "litnav/encoder.hpp"

namespace litnav {

struct Checkpoint {
    std::uint32_t checkpoint_id = 0;  // 1..m
    std::string requirement_text;
};

struct Checklist {
    std::vector<Checkpoint> checkpoints;

    std::size_t size() const { return checkpoints.size(); }
    // Empty string when valid: m >= 1, ids contiguous 1..m, texts nonempty.
    std::string validate() const;
    std::uint64_t hash() const;
    static Checklist from_texts(const std::vector<std::string>& texts);
};

struct EvidenceRef {
    std::uint32_t chunk_index = 0;
    double similarity = 0.0;
};

// Per-checkpoint supporting chunks of one paper, each list sorted by
// similarity descending (ties by chunk_index ascending).
struct EvidenceSet {
    std::string paper_id;
    std::map<std::uint32_t, std::vector<EvidenceRef>> per_checkpoint;
};

struct CheckpointScore {
    std::uint32_t checkpoint_id = 0;
    int score = 0;  // 1..5
    std::string rationale;
};

struct ScoredPaper {
    std::string paper_id;
    std::vector<CheckpointScore> checkpoint_scores;  // length m
    double mean_score = 0.0;   // (1/m) * sum s_j
    double confidence = 0.0;   // rho in (0,1)
    double relevance = 0.0;    // (mean_score + confidence) / 6
    EvidenceSet evidence;
};

// Everything a scorer may look at for one candidate.
struct PaperBundle {
    const PaperRecord* meta = nullptr;
    std::string abstract_text;  // empty when the tier holds nothing
    // checkpoint_id -> (chunk_index, chunk text), same order as the evidence set
    std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::string>>> evidence_texts;
};

struct Judgment {
    std::vector<CheckpointScore> scores;  // must be exactly m, each in 1..5
    double confidence = 0.0;              // must be in (0,1)
    TokenUsage usage;
};

// Relevance judge contract. judge() must be deterministic per
// (query, checklist, paper) so that retries and parallel workers are safe.
class ScorerBackend {
public:
    virtual ~ScorerBackend() = default;
    virtual const std::string& name() const = 0;
    virtual Judgment judge(const std::string& query, const Checklist& checklist,
                           const PaperBundle& paper) = 0;
};

// Top-k_evidence chunks of the paper per checkpoint by cosine against the
// checkpoint text. Papers without chunks yield empty lists for every
// checkpoint (scoring then falls back to the abstract).
EvidenceSet locate_evidence(const std::string& paper_id, const Checklist& checklist,
                            std::uint32_t k_evidence, const Corpus& corpus,
                            EncoderBackend& encoder);

// Same, with checkpoint embeddings precomputed (one encoder pass per
// checklist instead of per candidate).
EvidenceSet locate_evidence_with(const std::string& paper_id, const Checklist& checklist,
                                 std::uint32_t k_evidence, const Corpus& corpus,
                                 const std::vector<Vec>& checkpoint_embeddings);

// mean of s_j and (mean + rho) / 6. Throws EmptyChecklist / MalformedJudgment.
std::pair<double, double> aggregate_relevance(const std::vector<CheckpointScore>& scores,
                                              double rho);

// Runs the backend on the assembled bundle, validates the judgment and
// aggregates. Throws MalformedJudgment (candidate is then excluded from
// ranking by the caller) or BackendFailure.
ScoredPaper score_candidate(const std::string& paper_id, const std::string& query,
                            const Checklist& checklist, const EvidenceSet& evidence,
                            ScorerBackend& backend, const Corpus& corpus,
                            TokenUsage* usage = nullptr);

}  // namespace litnav
