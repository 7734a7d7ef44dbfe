#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "litnav/corpus.hpp"
#include "litnav/verify.hpp"

namespace litnav {

// Reference taxonomy: top-level disciplines with their fine-grained topics.
class Taxonomy {
public:
    static Taxonomy load(const std::filesystem::path& file);
    static Taxonomy empty() { return Taxonomy{}; }

    bool has_discipline(const std::string& name) const { return disciplines_.count(name) != 0; }
    std::size_t discipline_count() const { return disciplines_.size(); }
    std::size_t topic_count() const;
    const std::map<std::string, std::vector<std::string>>& disciplines() const {
        return disciplines_;
    }

private:
    std::map<std::string, std::vector<std::string>> disciplines_;
};

struct BenchTask {
    std::string task_id;
    std::string query;
    Checklist checklist;
    std::set<std::string> ground_truth;  // nonempty, every id resolves in the corpus
    std::string discipline;              // taxonomy discipline or "unknown"
};

// One returned citation; any subset of fields may be present. Entries with
// a paper_id are resolved directly, the rest fall back to DOI-then-title.
struct Citation {
    std::string paper_id;
    std::string title;
    std::vector<std::string> authors;
    std::string date;
    std::string link;
};

struct ReturnedList {
    std::string task_id;
    std::vector<Citation> entries;
    std::optional<double> cost_usd;  // self-reported by the system under test
};

struct HallucinationRates {
    double title = 0, author = 0, date = 0, link = 0, all = 0;
};

struct TaskMetrics {
    double recall = 0, precision = 0, f1 = 0, ndcg = 0;
    HallucinationRates hallucination;
    std::optional<double> cost_usd;
};

// Resolves a citation against the corpus: explicit paper_id first (must
// exist), then normalized DOI, then normalized title.
std::optional<std::string> resolve_citation(const Citation& c, const Corpus& corpus);

// Recall/Precision/F1/NDCG at cutoff K with binary gains. `strict_k`
// divides precision by K instead of min(K, |returned|).
TaskMetrics evaluate_ranking(const ReturnedList& returned, const BenchTask& task, std::uint32_t k,
                             const Corpus& corpus, bool strict_k = false);

// Field-level verification of the top-K citations against the corpus.
// An unresolvable citation counts as hallucinated on all four fields; a
// resolved one is compared field by field (missing citation fields make
// no claim and therefore cannot fail).
HallucinationRates audit_hallucination(const ReturnedList& returned, const Corpus& corpus,
                                       std::uint32_t k);

// Line-delimited task suite. Throws SuiteLoadError naming the first bad line.
std::vector<BenchTask> load_suite(std::istream& in, const Corpus& corpus,
                                  const Taxonomy& taxonomy);
std::vector<BenchTask> load_suite_file(const std::filesystem::path& path, const Corpus& corpus,
                                       const Taxonomy& taxonomy);

// Results file: either one JSON object per line with {"task_id", "entries"}
// or a bare ranked-list file (single anonymous task). Entries may be in the
// engine's ranked output form or the minimal citation form.
std::vector<ReturnedList> load_results_file(const std::filesystem::path& path);
Citation citation_from_json(const nlohmann::json& j);

struct SuiteReport {
    struct Row {
        std::string task_id;
        std::string discipline;
        TaskMetrics metrics;
    };
    std::vector<Row> tasks;
    TaskMetrics overall;                          // unweighted macro average
    std::map<std::string, TaskMetrics> by_discipline;
    std::map<std::string, std::size_t> discipline_counts;
    bool strict_k = false;
    std::uint32_t k = 20;

    // Machine-readable line records, byte-stable.
    std::string to_machine() const;
    // Aligned-column text table.
    std::string to_table() const;
};

SuiteReport aggregate_report(const std::vector<BenchTask>& tasks,
                             const std::vector<TaskMetrics>& metrics, std::uint32_t k,
                             bool strict_k);

nlohmann::json to_json(const TaskMetrics& m);
nlohmann::json to_json(const SuiteReport& report);

}  // namespace litnav
