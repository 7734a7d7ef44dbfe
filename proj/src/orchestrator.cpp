#include "litnav/orchestrator.hpp"

#include <algorithm>
#include <cstdio>

#include "litnav/errors.hpp"
#include "litnav/text.hpp"
#include "litnav/wire.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

using nlohmann::json;

namespace litnav {

namespace {

constexpr char kKeySep = '\x1f';

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void record_usage(SearchSession& session, const TokenUsage& usage) {
    if (usage.model.empty() && usage.input_tokens == 0 && usage.output_tokens == 0) return;
    session.ledger.accumulate(usage);
}

struct ChannelRun {
    ChannelOutput output;
    std::vector<std::string> warnings;
};

// Channel bodies swallow their own failures into warnings: exceptions must
// not escape an OpenMP section, and one failing channel never aborts a round.
ChannelRun run_semantic(const SearchStrategy& strategy, const Corpus& corpus,
                        EncoderBackend& encoder) {
    ChannelRun run{{Channel::semantic, {}}, {}};
    for (const auto& query : strategy.semantic_queries) {
        try {
            for (auto& [id, score] : semantic_direct(query, strategy.per_channel_limit, corpus,
                                                     encoder)) {
                run.output.ids.push_back(id);
            }
        } catch (const std::exception& e) {
            run.warnings.push_back(std::string("semantic: ") + e.what());
        }
    }
    return run;
}

ChannelRun run_citation(const SearchStrategy& strategy, const Corpus& corpus) {
    ChannelRun run{{Channel::citation, {}}, {}};
    if (strategy.seed_paper_ids.empty()) return run;
    try {
        const ExpandResult expanded =
            citation_expand(strategy.seed_paper_ids, strategy.expansion_depth, corpus);
        for (const auto& seed : expanded.unknown_seeds) {
            run.warnings.push_back("citation: unknown seed id " + seed);
        }
        // Expansion yields an id-ascending set; the per-channel cap keeps the
        // lexicographically first ids for determinism.
        std::size_t taken = 0;
        for (const auto& id : expanded.ids) {
            if (taken++ == strategy.per_channel_limit) break;
            run.output.ids.push_back(id);
        }
    } catch (const std::exception& e) {
        run.warnings.push_back(std::string("citation: ") + e.what());
    }
    return run;
}

ChannelRun run_web(const SearchStrategy& strategy, const Corpus& corpus) {
    ChannelRun run{{Channel::web, {}}, {}};
    std::size_t matched = 0;
    for (const auto& finding : strategy.external_findings) {
        if (matched == strategy.per_channel_limit) break;
        if (auto id = web_to_repo_verify(finding, corpus)) {
            run.output.ids.push_back(*id);
            ++matched;
        }
        // No-match findings are discarded: nothing unverified enters a pool.
    }
    return run;
}

std::string validate_plan(const SearchStrategy& strategy, const Checklist& checklist) {
    if (const std::string err = strategy.validate(); !err.empty()) return "strategy: " + err;
    if (const std::string err = checklist.validate(); !err.empty()) return "checklist: " + err;
    return {};
}

const std::vector<Vec>& checkpoint_vectors(SearchSession& session, const Checklist& checklist,
                                           EncoderBackend& encoder) {
    const std::uint64_t h = checklist.hash();
    auto it = session.checkpoint_embeddings.find(h);
    if (it == session.checkpoint_embeddings.end()) {
        std::vector<Vec> vecs;
        vecs.reserve(checklist.size());
        for (const auto& cp : checklist.checkpoints) {
            vecs.push_back(encoder.encode(cp.requirement_text));
        }
        it = session.checkpoint_embeddings.emplace(h, std::move(vecs)).first;
    }
    return it->second;
}

}  // namespace

std::string SearchSession::score_key(std::uint64_t checklist_hash, const std::string& paper_id) {
    return hash_hex(checklist_hash) + kKeySep + paper_id;
}

std::vector<ScoredPaper> SearchSession::scored_pool(std::uint64_t checklist_hash) const {
    std::vector<ScoredPaper> out;
    for (const auto& [id, entry] : pool.entries) {
        const auto it = scored.find(score_key(checklist_hash, id));
        if (it != scored.end()) out.push_back(it->second);
    }
    return out;
}

PlanResult plan(const SearchIntent& intent, NavigatorBackend& navigator, SearchSession& session) {
    if (trim(intent.query).empty()) throw InvalidPlan("search intent query is empty");
    PlanResult result = navigator.plan(intent.query);
    record_usage(session, result.usage);
    if (const std::string err = validate_plan(result.strategy, result.checklist); !err.empty()) {
        session.audit({{"event", "invalid_plan"}, {"error", err}});
        throw InvalidPlan("navigator produced an invalid plan: " + err);
    }
    session.audit({{"event", "plan"},
                   {"navigator", navigator.name()},
                   {"strategy", to_json(result.strategy)},
                   {"checklist", to_json(result.checklist)}});
    return result;
}

RoundRecord run_round(SearchSession& session, const SearchStrategy& strategy,
                      const Checklist& checklist, const SearchSettings& settings,
                      const Corpus& corpus, EngineBackends& backends) {
    const std::uint32_t round = ++session.rounds;
    RoundRecord rec;
    rec.round = round;
    rec.strategy = strategy;
    rec.checklist = checklist;

    // Channels fan out concurrently over the read-only corpus; the merge
    // below is order-independent, so scheduling cannot change the result.
    ChannelRun semantic_run, citation_run, web_run;
#if defined(_OPENMP)
#pragma omp parallel sections num_threads(3)
    {
#pragma omp section
        semantic_run = run_semantic(strategy, corpus, *backends.encoder);
#pragma omp section
        citation_run = run_citation(strategy, corpus);
#pragma omp section
        web_run = run_web(strategy, corpus);
    }
#else
    semantic_run = run_semantic(strategy, corpus, *backends.encoder);
    citation_run = run_citation(strategy, corpus);
    web_run = run_web(strategy, corpus);
#endif
    for (const auto& usage : backends.encoder->drain_usage()) record_usage(session, usage);
    for (const ChannelRun* run : {&semantic_run, &citation_run, &web_run}) {
        for (const auto& w : run->warnings) {
            session.audit({{"event", "channel_warning"}, {"round", round}, {"message", w}});
        }
    }

    const CandidatePool round_pool = merge_candidates(
        {semantic_run.output, citation_run.output, web_run.output}, round);
    for (const auto& [id, entry] : round_pool.entries) {
        auto [it, inserted] = session.pool.entries.emplace(id, entry);
        if (inserted) {
            rec.new_candidates.push_back(id);
        } else {
            it->second.provenance.insert(entry.provenance.begin(), entry.provenance.end());
        }
    }

    // Verify whatever the cache does not cover under this checklist.
    const std::uint64_t cl_hash = checklist.hash();
    std::vector<std::string> to_score;
    for (const auto& [id, entry] : session.pool.entries) {
        if (!session.scored.count(SearchSession::score_key(cl_hash, id))) to_score.push_back(id);
    }
    struct Slot {
        bool ok = false;
        ScoredPaper paper;
        TokenUsage usage;
        std::string error;
    };
    std::vector<Slot> slots(to_score.size());
    if (!to_score.empty()) {
        const std::vector<Vec>& cp_vecs =
            checkpoint_vectors(session, checklist, *backends.encoder);
        for (const auto& usage : backends.encoder->drain_usage()) record_usage(session, usage);
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(to_score.size());
        const int workers = std::max(1, settings.workers);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            Slot& slot = slots[static_cast<std::size_t>(i)];
            const std::string& id = to_score[static_cast<std::size_t>(i)];
            try {
                const EvidenceSet evidence =
                    locate_evidence_with(id, checklist, settings.k_evidence, corpus, cp_vecs);
                slot.paper = score_candidate(id, session.intent.query, checklist, evidence,
                                             *backends.scorer, corpus, &slot.usage);
                slot.ok = true;
            } catch (const std::exception& e) {
                slot.error = e.what();
            }
        }
    }

    // Join point: results enter the session in candidate order, so the
    // ledger and audit trail do not depend on worker scheduling.
    for (std::size_t i = 0; i < slots.size(); ++i) {
        Slot& slot = slots[i];
        record_usage(session, slot.usage);
        if (slot.ok) {
            ++rec.scored_count;
            session.scored.emplace(SearchSession::score_key(cl_hash, to_score[i]),
                                   std::move(slot.paper));
        } else {
            ++rec.excluded_count;
            session.audit({{"event", "candidate_excluded"},
                           {"round", round},
                           {"paper_id", to_score[i]},
                           {"error", slot.error}});
        }
    }
    for (const auto& id : rec.new_candidates) {
        const auto it = session.scored.find(SearchSession::score_key(cl_hash, id));
        if (it != session.scored.end() && it->second.relevance >= settings.theta_new) {
            rec.added_relevant = true;
            break;
        }
    }

    RankedList ranked = final_rank(session.scored_pool(cl_hash), settings.k);
    if (backends.listwise != nullptr && ranked.entries.size() >= 2) {
        ListwiseOutcome outcome = apply_listwise_window(ranked, settings.window_m,
                                                        *backends.listwise,
                                                        session.intent.query);
        record_usage(session, outcome.usage);
        if (outcome.invalid_permutation) {
            session.audit({{"event", "invalid_permutation"},
                           {"round", round},
                           {"listwise", backends.listwise->name()}});
        }
        ranked = std::move(outcome.list);
    }
    rec.ranking = std::move(ranked);

    session.audit({{"event", "round"},
                   {"round", round},
                   {"new_candidates", rec.new_candidates.size()},
                   {"pool_size", session.pool.size()},
                   {"scored", rec.scored_count},
                   {"excluded", rec.excluded_count},
                   {"ranked", rec.ranking.entries.size()}});
    session.history.push_back(rec);
    return rec;
}

ReflectOutcome reflect_step(SearchSession& session, NavigatorBackend& navigator) {
    if (session.history.empty()) throw Error("reflect_step requires a completed round");
    const RoundRecord& last = session.history.back();
    ReflectOutcome outcome;
    try {
        ReflectResult result = navigator.reflect(session.intent.query, last.strategy,
                                                 last.checklist, last.ranking);
        record_usage(session, result.usage);
        if (const std::string err = validate_plan(result.strategy, result.checklist);
            !err.empty()) {
            outcome.error = "navigator reflect violated plan invariants: " + err;
        } else {
            outcome.strategy = std::move(result.strategy);
            outcome.checklist = std::move(result.checklist);
            outcome.stop = result.stop;
            outcome.valid = true;
        }
    } catch (const BackendFailure& e) {
        outcome.error = e.what();
    }
    session.audit({{"event", "reflect"},
                   {"round", session.rounds},
                   {"valid", outcome.valid},
                   {"stop", outcome.stop},
                   {"error", outcome.error}});
    return outcome;
}

SearchOutcome run_search(const SearchIntent& intent, const SearchSettings& settings,
                         const Corpus& corpus, EngineBackends& backends) {
    if (backends.encoder == nullptr || backends.scorer == nullptr ||
        backends.navigator == nullptr) {
        throw Error("run_search requires encoder, scorer and navigator backends");
    }
    if (settings.max_rounds == 0) throw Error("max_rounds must be >= 1");

    SearchOutcome out;
    SearchSession& session = out.session;
    session.intent = intent;
    if (session.intent.session_id.empty()) {
        session.intent.session_id = "s-" + hash_hex(fnv1a64(intent.query));
    }
    session.audit({{"event", "session_start"},
                   {"session_id", session.intent.session_id},
                   {"query", intent.query}});

    PlanResult current = plan(session.intent, *backends.navigator, session);
    SearchStrategy strategy = std::move(current.strategy);
    Checklist checklist = std::move(current.checklist);

    while (true) {
        const RoundRecord rec =
            run_round(session, strategy, checklist, settings, corpus, backends);
        out.ranking = rec.ranking;
        if (session.rounds >= settings.max_rounds) {
            session.termination_reason = "max_rounds";
            break;
        }
        if (!rec.added_relevant) {
            // Nothing new cleared theta; the strategy space is exhausted.
            session.termination_reason = "exhausted";
            break;
        }
        const ReflectOutcome reflected = reflect_step(session, *backends.navigator);
        if (!reflected.valid) {
            session.termination_reason = "backend_failure";
            break;
        }
        if (reflected.stop) {
            session.termination_reason = "navigator_stop";
            break;
        }
        strategy = reflected.strategy;
        checklist = reflected.checklist;
    }

    session.audit({{"event", "terminate"},
                   {"reason", session.termination_reason},
                   {"rounds", session.rounds},
                   {"total_cost_usd", session.ledger.total_usd_string()}});
    return out;
}

}  // namespace litnav
