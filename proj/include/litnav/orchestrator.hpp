#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "litnav/channels.hpp"
#include "litnav/corpus.hpp"
#include "litnav/cost.hpp"
#include "litnav/rerank.hpp"
#include "litnav/verify.hpp"

namespace litnav {

struct SearchIntent {
    std::string query;
    std::string session_id;  // derived from the query when empty
};

struct PlanResult {
    SearchStrategy strategy;
    Checklist checklist;
    TokenUsage usage;
};

struct ReflectResult {
    SearchStrategy strategy;
    Checklist checklist;
    bool stop = false;
    TokenUsage usage;
};

// Planning policy contract: produces the initial strategy/checklist and
// refines them from ranked evidence after each round.
class NavigatorBackend {
public:
    virtual ~NavigatorBackend() = default;
    virtual const std::string& name() const = 0;
    virtual PlanResult plan(const std::string& query) = 0;
    virtual ReflectResult reflect(const std::string& query, const SearchStrategy& strategy,
                                  const Checklist& checklist, const RankedList& ranked) = 0;
};

// Knobs of one search run. per-channel limits travel inside strategies;
// workers is the librarian pool size N.
struct SearchSettings {
    std::uint32_t k_evidence = 3;
    std::uint32_t max_rounds = 3;
    double theta_new = 0.5;   // a round must add a new candidate at least this relevant
    int workers = 8;          // librarian pool size N
    std::uint32_t window_m = 50;  // listwise window
    std::uint32_t k = 20;         // final cutoff K
};

struct EngineBackends {
    EncoderBackend* encoder = nullptr;
    ScorerBackend* scorer = nullptr;
    NavigatorBackend* navigator = nullptr;
    ListwiseBackend* listwise = nullptr;  // optional; null keeps score order
};

struct RoundRecord {
    std::uint32_t round = 0;  // 1-based
    SearchStrategy strategy;
    Checklist checklist;
    std::vector<std::string> new_candidates;  // ids first pooled this round
    std::size_t scored_count = 0;             // candidates verified this round
    std::size_t excluded_count = 0;           // malformed judgments this round
    bool added_relevant = false;  // some new candidate reached theta_new
    RankedList ranking;           // over the cumulative scored pool
};

// Evolving state of one search: append-only history, monotone candidate
// pool, idempotent per-(paper, checklist) scoring cache and cost ledger.
struct SearchSession {
    SearchIntent intent;
    std::uint32_t rounds = 0;
    CandidatePool pool;
    std::map<std::string, ScoredPaper> scored;  // key: hash(checklist) | paper_id
    std::map<std::uint64_t, std::vector<Vec>> checkpoint_embeddings;  // per checklist hash
    std::vector<RoundRecord> history;
    CostLedger ledger;
    std::string termination_reason;
    std::vector<nlohmann::json> audit_log;

    void audit(nlohmann::json event) { audit_log.push_back(std::move(event)); }
    static std::string score_key(std::uint64_t checklist_hash, const std::string& paper_id);
    // All pool candidates scored under this checklist, id-ascending.
    std::vector<ScoredPaper> scored_pool(std::uint64_t checklist_hash) const;
};

// Runs the navigator's plan and validates it. Throws InvalidPlan (the
// session is not usable afterwards) or BackendFailure.
PlanResult plan(const SearchIntent& intent, NavigatorBackend& navigator, SearchSession& session);

// One Retrieve -> Verify -> Rerank round: channels fan out over the
// read-only corpus, new candidates join the pool, unscored candidates are
// verified by `workers` parallel librarians and the cumulative scored pool
// is reranked. Per-candidate failures never abort the round.
RoundRecord run_round(SearchSession& session, const SearchStrategy& strategy,
                      const Checklist& checklist, const SearchSettings& settings,
                      const Corpus& corpus, EngineBackends& backends);

struct ReflectOutcome {
    SearchStrategy strategy;
    Checklist checklist;
    bool stop = false;
    bool valid = false;   // false: backend failed or violated invariants
    std::string error;
};

// Asks the navigator to refine strategy/checklist from the latest ranked
// results. Requires at least one completed round.
ReflectOutcome reflect_step(SearchSession& session, NavigatorBackend& navigator);

struct SearchOutcome {
    RankedList ranking;
    SearchSession session;
};

// Full loop: plan, then rounds of run_round + reflect_step until the
// navigator stops, max_rounds is reached, or a round adds nothing new of
// relevance >= theta_new.
SearchOutcome run_search(const SearchIntent& intent, const SearchSettings& settings,
                         const Corpus& corpus, EngineBackends& backends);

}  // namespace litnav
