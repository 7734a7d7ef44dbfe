#include "litnav/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "litnav/errors.hpp"
#include "litnav/jsonio.hpp"
#include "litnav/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace litnav {

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kMetaFile = "meta.jsonl";
constexpr const char* kAbstractFile = "abstracts.jsonl";
constexpr const char* kChunkFile = "chunks.jsonl";
constexpr const char* kLockFile = ".lock";
constexpr const char* kServingMarker = ".serving";
constexpr int kFormatVersion = 1;

std::string get_string(const json& j, const char* key, bool required, std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        if (required) {
            throw Error("MalformedRecord: line " + std::to_string(line) + " missing field '" +
                        key + "'");
        }
        return {};
    }
    if (!it->is_string()) {
        throw Error("MalformedRecord: line " + std::to_string(line) + " field '" + key +
                    "' is not a string");
    }
    return it->get<std::string>();
}

std::vector<std::string> get_string_array(const json& j, const char* key, std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_array()) {
        throw Error("MalformedRecord: line " + std::to_string(line) + " field '" + key +
                    "' is not an array");
    }
    std::vector<std::string> out;
    out.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_string()) {
            throw Error("MalformedRecord: line " + std::to_string(line) + " field '" + key +
                        "' holds a non-string element");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

// Reads or computes the embedding of a record; throws DimensionMismatch /
// Error("MalformedRecord: ...") on contract violations.
Vec resolve_embedding(const json& j, const std::string& text, std::size_t dim,
                      EncoderBackend* encoder, std::size_t line) {
    const auto it = j.find("embedding");
    if (it != j.end() && !it->is_null()) {
        if (!it->is_array()) {
            throw Error("MalformedRecord: line " + std::to_string(line) +
                        " embedding is not an array");
        }
        if (it->size() != dim) throw DimensionMismatch(dim, it->size());
        Vec v;
        v.reserve(dim);
        for (const auto& x : *it) {
            if (!x.is_number()) {
                throw Error("MalformedRecord: line " + std::to_string(line) +
                            " embedding holds a non-numeric element");
            }
            v.push_back(x.get<double>());
        }
        if (!l2_normalize(v)) {
            throw Error("MalformedRecord: line " + std::to_string(line) +
                        " embedding has zero norm");
        }
        return v;
    }
    if (encoder == nullptr) {
        throw Error("MalformedRecord: line " + std::to_string(line) +
                    " embedding missing and no encoder configured");
    }
    return encoder->encode(text);
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& l : lines) out << l << '\n';
}

}  // namespace

std::optional<Tier> tier_from_string(std::string_view s) {
    if (s == "meta") return Tier::meta;
    if (s == "abstract") return Tier::abstract;
    if (s == "chunks" || s == "chunk") return Tier::chunks;
    return std::nullopt;
}

Corpus::~Corpus() {
    release_lock();
}

Corpus::Corpus(Corpus&& other) noexcept : abstract_index_(0) {
    *this = std::move(other);
}

Corpus& Corpus::operator=(Corpus&& other) noexcept {
    if (this == &other) return *this;
    release_lock();
    dir_ = std::move(other.dir_);
    dimension_ = other.dimension_;
    writable_ = other.writable_;
    locked_ = other.locked_;
    meta_ = std::move(other.meta_);
    abstracts_ = std::move(other.abstracts_);
    chunks_ = std::move(other.chunks_);
    abstract_index_ = std::move(other.abstract_index_);
    doi_index_ = std::move(other.doi_index_);
    title_index_ = std::move(other.title_index_);
    other.locked_ = false;  // lock ownership transfers
    other.writable_ = false;
    return *this;
}

void Corpus::release_lock() {
    if (locked_) {
        std::error_code ec;
        fs::remove(dir_ / kLockFile, ec);
        locked_ = false;
    }
}

Corpus Corpus::create(const fs::path& dir, std::size_t dimension) {
    if (dimension == 0) throw Error("corpus dimension must be >= 1");
    fs::create_directories(dir);
    if (fs::exists(dir / kManifest)) {
        throw CorpusLocked("corpus already exists at " + dir.string());
    }
    if (fs::exists(dir / kServingMarker)) {
        throw CorpusLocked("ingest refused: a service is running on " + dir.string());
    }
    // O_EXCL-style lock: single writer per directory.
    std::FILE* lock = std::fopen((dir / kLockFile).c_str(), "wx");
    if (lock == nullptr) {
        throw CorpusLocked("corpus is locked by another writer: " + dir.string());
    }
    std::fclose(lock);
    Corpus c;
    c.dir_ = dir;
    c.dimension_ = dimension;
    c.writable_ = true;
    c.locked_ = true;
    c.abstract_index_ = VectorStore(dimension);
    return c;
}

Corpus Corpus::open(const fs::path& dir) {
    if (!fs::exists(dir / kManifest)) {
        throw Error("no corpus at " + dir.string());
    }
    if (fs::exists(dir / kLockFile)) {
        throw CorpusLocked("corpus has an active writer: " + dir.string());
    }
    Corpus c;
    c.dir_ = dir;
    c.load();
    c.build_derived_indexes();
    return c;
}

IngestReport Corpus::ingest_records(std::istream& stream, EncoderBackend* encoder) {
    if (!writable_) throw Error("corpus is open read-only");
    if (encoder != nullptr && encoder->dimension() != dimension_) {
        throw DimensionMismatch(dimension_, encoder->dimension());
    }
    IngestReport report;
    struct StagedChunk {
        EvidenceChunk chunk;
        std::size_t line;
    };
    std::map<std::string, std::size_t> abstract_lines;
    std::map<std::string, std::vector<StagedChunk>> staged_chunks;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            json j = json::parse(line);
            if (!j.is_object()) throw Error("MalformedRecord: line is not a JSON object");
            const std::string tier_str = get_string(j, "tier", true, line_no);
            const auto tier = tier_from_string(tier_str);
            if (!tier) throw Error("MalformedRecord: unknown tier '" + tier_str + "'");
            const std::string paper_id = get_string(j, "paper_id", true, line_no);
            if (paper_id.empty()) throw Error("MalformedRecord: empty paper_id");

            switch (*tier) {
                case Tier::meta: {
                    if (meta_.count(paper_id)) throw Error("DuplicatePaperId");
                    PaperRecord rec;
                    rec.paper_id = paper_id;
                    rec.title = get_string(j, "title", true, line_no);
                    if (trim(rec.title).empty()) throw Error("MalformedRecord: empty title");
                    rec.authors = get_string_array(j, "authors", line_no);
                    rec.date = get_string(j, "date", true, line_no);
                    if (!valid_iso_date(rec.date)) {
                        throw Error("MalformedRecord: date '" + rec.date +
                                    "' is not YYYY-MM-DD");
                    }
                    rec.venue = get_string(j, "venue", false, line_no);
                    rec.link = get_string(j, "link", false, line_no);
                    rec.doi = normalize_doi(get_string(j, "doi", false, line_no));
                    rec.discipline = get_string(j, "discipline", false, line_no);
                    // references deduped with order kept; self-citations dropped.
                    std::unordered_set<std::string> seen;
                    for (auto& r : get_string_array(j, "references", line_no)) {
                        if (r == paper_id || !seen.insert(r).second) continue;
                        rec.references.push_back(std::move(r));
                    }
                    // cited_by is derived; any supplied value is ignored.
                    meta_.emplace(paper_id, std::move(rec));
                    break;
                }
                case Tier::abstract: {
                    if (abstracts_.count(paper_id)) throw Error("DuplicatePaperId");
                    AbstractEntry entry;
                    entry.paper_id = paper_id;
                    entry.abstract_text = get_string(j, "abstract_text", true, line_no);
                    if (trim(entry.abstract_text).empty()) {
                        throw Error("MalformedRecord: empty abstract_text");
                    }
                    entry.embedding =
                        resolve_embedding(j, entry.abstract_text, dimension_, encoder, line_no);
                    abstracts_.emplace(paper_id, std::move(entry));
                    abstract_lines[paper_id] = line_no;
                    break;
                }
                case Tier::chunks: {
                    const auto idx_it = j.find("chunk_index");
                    if (idx_it == j.end() || !idx_it->is_number_unsigned()) {
                        throw Error("MalformedRecord: chunk_index missing or negative");
                    }
                    EvidenceChunk chunk;
                    chunk.paper_id = paper_id;
                    chunk.chunk_index = idx_it->get<std::uint32_t>();
                    chunk.text = get_string(j, "text", true, line_no);
                    if (trim(chunk.text).empty()) throw Error("MalformedRecord: empty text");
                    auto& staged = staged_chunks[paper_id];
                    for (const auto& s : staged) {
                        if (s.chunk.chunk_index == chunk.chunk_index) {
                            throw Error("DuplicatePaperId");
                        }
                    }
                    chunk.embedding =
                        resolve_embedding(j, chunk.text, dimension_, encoder, line_no);
                    staged.push_back(StagedChunk{std::move(chunk), line_no});
                    break;
                }
            }
        } catch (const DimensionMismatch&) {
            report.rejected_records.push_back({line_no, "DimensionMismatch"});
        } catch (const json::exception& e) {
            report.rejected_records.push_back(
                {line_no, std::string("MalformedRecord: ") + e.what()});
        } catch (const Error& e) {
            report.rejected_records.push_back({line_no, e.what()});
        }
    }

    // Resolution pass: the staged stream is only coherent as a whole, so
    // orphans, gaps and dangling citations are settled after the last line.
    for (auto it = abstracts_.begin(); it != abstracts_.end();) {
        if (!meta_.count(it->first)) {
            report.rejected_records.push_back(
                {abstract_lines[it->first], "UnknownPaperId: abstract for unknown paper"});
            it = abstracts_.erase(it);
        } else {
            ++it;
        }
    }
    for (auto& [paper_id, staged] : staged_chunks) {
        if (!meta_.count(paper_id)) {
            for (const auto& s : staged) {
                report.rejected_records.push_back(
                    {s.line, "UnknownPaperId: chunk for unknown paper"});
            }
            continue;
        }
        std::sort(staged.begin(), staged.end(), [](const StagedChunk& a, const StagedChunk& b) {
            return a.chunk.chunk_index < b.chunk.chunk_index;
        });
        bool contiguous = true;
        for (std::size_t i = 0; i < staged.size(); ++i) {
            if (staged[i].chunk.chunk_index != i) {
                contiguous = false;
                break;
            }
        }
        if (!contiguous) {
            for (const auto& s : staged) {
                report.rejected_records.push_back(
                    {s.line, "ChunkIndexGap: chunk indexes not contiguous from 0"});
            }
            continue;
        }
        auto& dst = chunks_[paper_id];
        dst.reserve(staged.size());
        for (auto& s : staged) dst.push_back(std::move(s.chunk));
    }

    for (auto& [id, rec] : meta_) {
        std::vector<std::string> resolved;
        resolved.reserve(rec.references.size());
        for (auto& ref : rec.references) {
            if (meta_.count(ref)) {
                resolved.push_back(std::move(ref));
            } else {
                ++report.dangling_citations_dropped;
            }
        }
        rec.references = std::move(resolved);
        rec.cited_by.clear();
    }
    for (const auto& [id, rec] : meta_) {
        for (const auto& ref : rec.references) meta_.at(ref).cited_by.push_back(id);
    }
    for (auto& [id, rec] : meta_) {
        std::sort(rec.cited_by.begin(), rec.cited_by.end());
    }

    report.papers_ingested = meta_.size();
    report.abstracts_ingested = abstracts_.size();
    report.chunks_ingested = chunk_count();

    std::sort(report.rejected_records.begin(), report.rejected_records.end(),
              [](const RejectedRecord& a, const RejectedRecord& b) { return a.line < b.line; });

    build_derived_indexes();
    persist();
    writable_ = false;
    release_lock();
    return report;
}

std::size_t Corpus::chunk_count() const {
    std::size_t n = 0;
    for (const auto& [id, v] : chunks_) n += v.size();
    return n;
}

const PaperRecord& Corpus::meta(const std::string& paper_id) const {
    const auto it = meta_.find(paper_id);
    if (it == meta_.end()) throw UnknownPaperId(paper_id);
    return it->second;
}

const AbstractEntry& Corpus::abstract_entry(const std::string& paper_id) const {
    if (!meta_.count(paper_id)) throw UnknownPaperId(paper_id);
    const auto it = abstracts_.find(paper_id);
    if (it == abstracts_.end()) throw TierEmpty(paper_id, "abstract");
    return it->second;
}

const std::vector<EvidenceChunk>& Corpus::chunks(const std::string& paper_id) const {
    if (!meta_.count(paper_id)) throw UnknownPaperId(paper_id);
    const auto it = chunks_.find(paper_id);
    if (it == chunks_.end() || it->second.empty()) throw TierEmpty(paper_id, "chunk");
    return it->second;
}

bool Corpus::has_abstract(const std::string& paper_id) const {
    return abstracts_.count(paper_id) != 0;
}

bool Corpus::has_chunks(const std::string& paper_id) const {
    const auto it = chunks_.find(paper_id);
    return it != chunks_.end() && !it->second.empty();
}

std::set<std::string> Corpus::citation_neighbors(const std::string& paper_id,
                                                 Direction dir) const {
    const PaperRecord& rec = meta(paper_id);
    std::set<std::string> out;
    if (dir == Direction::references || dir == Direction::both) {
        out.insert(rec.references.begin(), rec.references.end());
    }
    if (dir == Direction::cited_by || dir == Direction::both) {
        out.insert(rec.cited_by.begin(), rec.cited_by.end());
    }
    out.erase(paper_id);
    return out;
}

std::vector<std::string> Corpus::paper_ids() const {
    std::vector<std::string> ids;
    ids.reserve(meta_.size());
    for (const auto& [id, rec] : meta_) ids.push_back(id);
    return ids;
}

std::optional<std::string> Corpus::find_by_doi(const std::string& normalized_doi) const {
    if (normalized_doi.empty()) return std::nullopt;
    const auto it = doi_index_.find(normalized_doi);
    if (it == doi_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Corpus::find_by_title(const std::string& normalized_title) const {
    if (normalized_title.empty()) return std::nullopt;
    const auto it = title_index_.find(normalized_title);
    if (it == title_index_.end()) return std::nullopt;
    return it->second;
}

void Corpus::build_derived_indexes() {
    abstract_index_ = VectorStore(dimension_);
    for (const auto& [id, entry] : abstracts_) {
        abstract_index_.add(id, entry.embedding);
    }
    abstract_index_.freeze();
    doi_index_.clear();
    title_index_.clear();
    // meta_ iterates id-ascending, so collisions keep the smallest id.
    for (const auto& [id, rec] : meta_) {
        if (!rec.doi.empty()) doi_index_.emplace(rec.doi, id);
        const std::string t = normalize_title(rec.title);
        if (!t.empty()) title_index_.emplace(t, id);
    }
}

void Corpus::persist() const {
    json manifest{{"format_version", kFormatVersion},
                  {"dimension", dimension_},
                  {"papers", meta_.size()},
                  {"abstracts", abstracts_.size()},
                  {"chunks", chunk_count()}};
    std::ofstream mf(dir_ / kManifest, std::ios::binary | std::ios::trunc);
    mf << manifest.dump(2) << '\n';

    std::vector<std::string> lines;
    lines.reserve(meta_.size());
    for (const auto& [id, rec] : meta_) lines.push_back(to_json(rec).dump());
    write_lines(dir_ / kMetaFile, lines);

    lines.clear();
    for (const auto& [id, entry] : abstracts_) lines.push_back(to_json(entry).dump());
    write_lines(dir_ / kAbstractFile, lines);

    lines.clear();
    for (const auto& [id, vec] : chunks_) {
        for (const auto& chunk : vec) lines.push_back(to_json(chunk).dump());
    }
    write_lines(dir_ / kChunkFile, lines);
}

void Corpus::load() {
    std::ifstream mf(dir_ / kManifest);
    json manifest = json::parse(mf);
    if (manifest.at("format_version").get<int>() != kFormatVersion) {
        throw Error("unsupported corpus format version");
    }
    dimension_ = manifest.at("dimension").get<std::size_t>();
    abstract_index_ = VectorStore(dimension_);

    auto each_line = [](const fs::path& p, auto&& fn) {
        std::ifstream in(p, std::ios::binary);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            fn(json::parse(line));
        }
    };
    each_line(dir_ / kMetaFile, [&](json j) {
        PaperRecord rec = paper_record_from_json(j);
        meta_.emplace(rec.paper_id, std::move(rec));
    });
    each_line(dir_ / kAbstractFile, [&](json j) {
        AbstractEntry e = abstract_entry_from_json(j);
        if (e.embedding.size() != dimension_) throw DimensionMismatch(dimension_, e.embedding.size());
        abstracts_.emplace(e.paper_id, std::move(e));
    });
    each_line(dir_ / kChunkFile, [&](json j) {
        EvidenceChunk c = evidence_chunk_from_json(j);
        if (c.embedding.size() != dimension_) throw DimensionMismatch(dimension_, c.embedding.size());
        chunks_[c.paper_id].push_back(std::move(c));
    });
    for (auto& [id, vec] : chunks_) {
        std::sort(vec.begin(), vec.end(), [](const EvidenceChunk& a, const EvidenceChunk& b) {
            return a.chunk_index < b.chunk_index;
        });
    }
}

// ---------------------------------------------------------------------------
// JSON converters (shared by persistence, the service and the CLI)

json to_json(const PaperRecord& rec) {
    return json{{"tier", "meta"},
                {"paper_id", rec.paper_id},
                {"title", rec.title},
                {"authors", rec.authors},
                {"date", rec.date},
                {"venue", rec.venue},
                {"link", rec.link},
                {"doi", rec.doi},
                {"references", rec.references},
                {"cited_by", rec.cited_by},
                {"discipline", rec.discipline}};
}

json to_json(const AbstractEntry& entry) {
    return json{{"tier", "abstract"},
                {"paper_id", entry.paper_id},
                {"abstract_text", entry.abstract_text},
                {"embedding", entry.embedding}};
}

json to_json(const EvidenceChunk& chunk) {
    return json{{"tier", "chunk"},
                {"paper_id", chunk.paper_id},
                {"chunk_index", chunk.chunk_index},
                {"text", chunk.text},
                {"embedding", chunk.embedding}};
}

json to_json(const IngestReport& report) {
    json rejected = json::array();
    for (const auto& r : report.rejected_records) {
        rejected.push_back(json{{"line", r.line}, {"reason", r.reason}});
    }
    return json{{"papers_ingested", report.papers_ingested},
                {"abstracts_ingested", report.abstracts_ingested},
                {"chunks_ingested", report.chunks_ingested},
                {"dangling_citations_dropped", report.dangling_citations_dropped},
                {"rejected_records", rejected}};
}

PaperRecord paper_record_from_json(const json& j) {
    PaperRecord rec;
    rec.paper_id = j.at("paper_id").get<std::string>();
    rec.title = j.at("title").get<std::string>();
    rec.authors = j.value("authors", std::vector<std::string>{});
    rec.date = j.at("date").get<std::string>();
    rec.venue = j.value("venue", std::string{});
    rec.link = j.value("link", std::string{});
    rec.doi = j.value("doi", std::string{});
    rec.references = j.value("references", std::vector<std::string>{});
    rec.cited_by = j.value("cited_by", std::vector<std::string>{});
    rec.discipline = j.value("discipline", std::string{});
    return rec;
}

AbstractEntry abstract_entry_from_json(const json& j) {
    AbstractEntry e;
    e.paper_id = j.at("paper_id").get<std::string>();
    e.abstract_text = j.at("abstract_text").get<std::string>();
    e.embedding = j.at("embedding").get<Vec>();
    return e;
}

EvidenceChunk evidence_chunk_from_json(const json& j) {
    EvidenceChunk c;
    c.paper_id = j.at("paper_id").get<std::string>();
    c.chunk_index = j.at("chunk_index").get<std::uint32_t>();
    c.text = j.at("text").get<std::string>();
    c.embedding = j.at("embedding").get<Vec>();
    return c;
}

}  // namespace litnav
