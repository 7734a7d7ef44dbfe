#pragma once

#include <json.hpp>

#include "litnav/corpus.hpp"

namespace litnav {

nlohmann::json to_json(const PaperRecord& rec);
nlohmann::json to_json(const AbstractEntry& entry);
nlohmann::json to_json(const EvidenceChunk& chunk);
nlohmann::json to_json(const IngestReport& report);

PaperRecord paper_record_from_json(const nlohmann::json& j);
AbstractEntry abstract_entry_from_json(const nlohmann::json& j);
EvidenceChunk evidence_chunk_from_json(const nlohmann::json& j);

}  // namespace litnav
