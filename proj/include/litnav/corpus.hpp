#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litnav/embedding.hpp"
#include "litnav/encoder.hpp"

namespace litnav {

struct PaperRecord {
    std::string paper_id;
    std::string title;
    std::vector<std::string> authors;
    std::string date;  // YYYY-MM-DD
    std::string venue;
    std::string link;
    std::string doi;  // stored normalized (lowercase, no https://doi.org/ prefix)
    std::vector<std::string> references;  // resolved ids only, dangling dropped at ingest
    std::vector<std::string> cited_by;    // derived inverse of references, sorted
    std::string discipline;
};

struct AbstractEntry {
    std::string paper_id;
    std::string abstract_text;
    Vec embedding;  // unit norm
};

struct EvidenceChunk {
    std::string paper_id;
    std::uint32_t chunk_index = 0;  // contiguous from 0 per paper
    std::string text;
    Vec embedding;  // unit norm
};

struct RejectedRecord {
    std::size_t line = 0;  // 1-based line in the ingest stream
    std::string reason;
};

struct IngestReport {
    std::size_t papers_ingested = 0;
    std::size_t abstracts_ingested = 0;
    std::size_t chunks_ingested = 0;
    std::size_t dangling_citations_dropped = 0;
    std::vector<RejectedRecord> rejected_records;
};

enum class Tier { meta, abstract, chunks };
enum class Direction { references, cited_by, both };

std::optional<Tier> tier_from_string(std::string_view s);

// The three-tier verified paper repository plus citation graph. Writing is
// single-process (directory lock); once opened read-only every accessor is
// safe to call concurrently.
class Corpus {
public:
    Corpus(const Corpus&) = delete;
    Corpus& operator=(const Corpus&) = delete;
    Corpus(Corpus&& other) noexcept;
    Corpus& operator=(Corpus&& other) noexcept;
    ~Corpus();

    // Creates an empty corpus directory in exclusive write mode.
    static Corpus create(const std::filesystem::path& dir, std::size_t dimension);

    // Opens a persisted corpus read-only.
    static Corpus open(const std::filesystem::path& dir);

    // Consumes the full line-delimited record stream, resolves the citation
    // graph (dropping dangling ids), rebuilds the cited_by inverse index and
    // persists the corpus. Writer mode only. `encoder` supplies embeddings
    // for records that omit them; records needing it are rejected when null.
    IngestReport ingest_records(std::istream& stream, EncoderBackend* encoder = nullptr);

    std::size_t dimension() const { return dimension_; }
    std::size_t paper_count() const { return meta_.size(); }
    std::size_t abstract_count() const { return abstracts_.size(); }
    std::size_t chunk_count() const;
    bool contains(const std::string& paper_id) const { return meta_.count(paper_id) != 0; }
    const std::filesystem::path& directory() const { return dir_; }

    // Reading tools. meta/abstract/chunks throw UnknownPaperId for ids
    // absent from the meta tier; abstract/chunks throw TierEmpty when the
    // paper exists but the tier holds nothing for it.
    const PaperRecord& meta(const std::string& paper_id) const;
    const AbstractEntry& abstract_entry(const std::string& paper_id) const;
    const std::vector<EvidenceChunk>& chunks(const std::string& paper_id) const;
    bool has_abstract(const std::string& paper_id) const;
    bool has_chunks(const std::string& paper_id) const;

    // 1-hop neighborhood; never contains paper_id itself nor unresolved ids.
    std::set<std::string> citation_neighbors(const std::string& paper_id, Direction dir) const;

    // All paper ids, ascending.
    std::vector<std::string> paper_ids() const;

    // Unit-vector index over the abstract tier (built at open/ingest).
    const VectorStore& abstract_index() const { return abstract_index_; }

    // Lookup helpers for web-to-repository verification; keys must already
    // be normalized with normalize_doi / normalize_title.
    std::optional<std::string> find_by_doi(const std::string& normalized_doi) const;
    std::optional<std::string> find_by_title(const std::string& normalized_title) const;

private:
    Corpus() : abstract_index_(0) {}

    void build_derived_indexes();
    void persist() const;
    void load();
    void release_lock();

    std::filesystem::path dir_;
    std::size_t dimension_ = 0;
    bool writable_ = false;
    bool locked_ = false;

    std::map<std::string, PaperRecord> meta_;
    std::map<std::string, AbstractEntry> abstracts_;
    std::map<std::string, std::vector<EvidenceChunk>> chunks_;

    VectorStore abstract_index_;
    std::map<std::string, std::string> doi_index_;    // normalized doi -> paper_id
    std::map<std::string, std::string> title_index_;  // normalized title -> paper_id
};

}  // namespace litnav
