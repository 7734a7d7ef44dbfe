#include "litnav/wire.hpp"

#include "litnav/errors.hpp"

using nlohmann::json;

namespace litnav {

json to_json(const SearchStrategy& s) {
    json findings = json::array();
    for (const auto& f : s.external_findings) {
        findings.push_back({{"title", f.title}, {"doi", f.doi}, {"link", f.link}});
    }
    return json{{"semantic_queries", s.semantic_queries},
                {"seed_paper_ids", s.seed_paper_ids},
                {"expansion_depth", s.expansion_depth},
                {"external_findings", findings},
                {"per_channel_limit", s.per_channel_limit}};
}

SearchStrategy strategy_from_json(const json& j) {
    SearchStrategy s;
    s.semantic_queries = j.value("semantic_queries", std::vector<std::string>{});
    s.seed_paper_ids = j.value("seed_paper_ids", std::vector<std::string>{});
    s.expansion_depth = j.value("expansion_depth", 1u);
    s.per_channel_limit = j.value("per_channel_limit", 50u);
    if (const auto it = j.find("external_findings"); it != j.end() && it->is_array()) {
        for (const auto& f : *it) {
            s.external_findings.push_back(ExternalFinding{f.value("title", std::string{}),
                                                          f.value("doi", std::string{}),
                                                          f.value("link", std::string{})});
        }
    }
    return s;
}

json to_json(const Checklist& c) {
    json arr = json::array();
    for (const auto& cp : c.checkpoints) {
        arr.push_back({{"checkpoint_id", cp.checkpoint_id}, {"text", cp.requirement_text}});
    }
    return arr;
}

Checklist checklist_from_json(const json& j) {
    Checklist c;
    for (const auto& cp : j) {
        if (cp.is_string()) {
            c.checkpoints.push_back({static_cast<std::uint32_t>(c.checkpoints.size() + 1),
                                     cp.get<std::string>()});
        } else {
            c.checkpoints.push_back({cp.value("checkpoint_id",
                                              static_cast<std::uint32_t>(c.checkpoints.size() + 1)),
                                     cp.value("text", std::string{})});
        }
    }
    return c;
}

json to_json(const CheckpointScore& s) {
    return json{{"checkpoint_id", s.checkpoint_id}, {"score", s.score}, {"rationale", s.rationale}};
}

json to_json(const ScoredPaper& p) {
    json scores = json::array();
    for (const auto& s : p.checkpoint_scores) scores.push_back(to_json(s));
    json evidence = json::object();
    for (const auto& [cp_id, refs] : p.evidence.per_checkpoint) {
        json arr = json::array();
        for (const auto& r : refs) {
            arr.push_back({{"chunk_index", r.chunk_index}, {"similarity", r.similarity}});
        }
        evidence[std::to_string(cp_id)] = std::move(arr);
    }
    return json{{"paper_id", p.paper_id},
                {"checkpoint_scores", scores},
                {"mean_score", p.mean_score},
                {"confidence", p.confidence},
                {"relevance", p.relevance},
                {"evidence", evidence}};
}

json to_json(const RankedEntry& e) {
    json j = to_json(e.paper);
    j["rank"] = e.rank;
    if (e.pre_rerank_rank != 0) j["pre_rerank_rank"] = e.pre_rerank_rank;
    return j;
}

json to_json(const RankedList& l) {
    json arr = json::array();
    for (const auto& e : l.entries) arr.push_back(to_json(e));
    return arr;
}

json to_json(const PaperBundle& b) {
    json evidence = json::array();
    for (const auto& [cp_id, texts] : b.evidence_texts) {
        json chunks = json::array();
        for (const auto& [idx, text] : texts) {
            chunks.push_back({{"chunk_index", idx}, {"text", text}});
        }
        evidence.push_back({{"checkpoint_id", cp_id}, {"chunks", std::move(chunks)}});
    }
    json j{{"abstract", b.abstract_text}, {"evidence", evidence}};
    if (b.meta != nullptr) {
        j["paper_id"] = b.meta->paper_id;
        j["title"] = b.meta->title;
        j["authors"] = b.meta->authors;
        j["date"] = b.meta->date;
        j["venue"] = b.meta->venue;
    }
    return j;
}

Judgment judgment_from_json(const json& j) {
    Judgment out;
    const auto scores = j.find("scores");
    if (scores == j.end() || !scores->is_array()) {
        throw MalformedJudgment("judgment missing 'scores' array");
    }
    for (const auto& s : *scores) {
        if (!s.is_object() || !s.contains("score")) {
            throw MalformedJudgment("judgment score entry malformed");
        }
        CheckpointScore cs;
        cs.checkpoint_id = s.value("checkpoint_id",
                                   static_cast<std::uint32_t>(out.scores.size() + 1));
        if (!s["score"].is_number_integer()) {
            throw MalformedJudgment("checkpoint score is not an integer");
        }
        cs.score = s["score"].get<int>();
        cs.rationale = s.value("rationale", std::string{});
        out.scores.push_back(std::move(cs));
    }
    if (!j.contains("confidence") || !j["confidence"].is_number()) {
        throw MalformedJudgment("judgment missing numeric 'confidence'");
    }
    out.confidence = j["confidence"].get<double>();
    return out;
}

TokenUsage usage_from_json(const json& j, const std::string& fallback_model) {
    TokenUsage usage;
    usage.model = fallback_model;
    if (const auto it = j.find("usage"); it != j.end() && it->is_object()) {
        usage.model = it->value("model", fallback_model);
        usage.input_tokens = it->value("input_tokens", static_cast<std::int64_t>(0));
        usage.output_tokens = it->value("output_tokens", static_cast<std::int64_t>(0));
    }
    if (j.contains("model") && j["model"].is_string()) usage.model = j["model"].get<std::string>();
    return usage;
}

}  // namespace litnav
