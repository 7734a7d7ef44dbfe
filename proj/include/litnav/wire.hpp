#pragma once

#include <json.hpp>

#include "litnav/channels.hpp"
#include "litnav/rerank.hpp"
#include "litnav/verify.hpp"

namespace litnav {

nlohmann::json to_json(const SearchStrategy& s);
SearchStrategy strategy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Checklist& c);
Checklist checklist_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CheckpointScore& s);
nlohmann::json to_json(const ScoredPaper& p);
nlohmann::json to_json(const RankedEntry& e);
nlohmann::json to_json(const RankedList& l);

nlohmann::json to_json(const PaperBundle& b);

// Parses a scorer judgment: {"scores":[{checkpoint_id,score,rationale}...],
// "confidence": rho}. Structural problems raise MalformedJudgment.
Judgment judgment_from_json(const nlohmann::json& j);

TokenUsage usage_from_json(const nlohmann::json& j, const std::string& fallback_model);

}  // namespace litnav
