#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <json.hpp>

#include "litnav/backends.hpp"
#include "litnav/config.hpp"
#include "litnav/corpus.hpp"
#include "litnav/errors.hpp"
#include "litnav/evalbench.hpp"
#include "litnav/jsonio.hpp"
#include "litnav/rerank.hpp"
#include "litnav/serve.hpp"
#include "litnav/text.hpp"
#include "litnav/wire.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string corpus_dir;
    std::string format = "text";
};

litnav::EngineConfig resolve_config(const CommonFlags& flags) {
    litnav::EngineConfig config;
    if (!flags.config_path.empty()) {
        config = litnav::EngineConfig::from_file(flags.config_path);
    }
    config.apply_env();
    if (!flags.corpus_dir.empty()) config.corpus_dir = flags.corpus_dir;
    return config;
}

void fail(const std::string& code, const std::string& message) {
    std::cerr << json{{"error", code}, {"message", message}}.dump() << std::endl;
}

litnav::Taxonomy load_taxonomy(const litnav::EngineConfig& config) {
    if (!config.taxonomy_file.empty()) return litnav::Taxonomy::load(config.taxonomy_file);
    return litnav::Taxonomy::empty();
}

void print_ingest_report(const litnav::IngestReport& report, const std::string& format) {
    if (format == "machine") {
        std::cout << litnav::to_json(report).dump() << '\n';
        return;
    }
    std::cout << "papers ingested:            " << report.papers_ingested << '\n'
              << "abstracts ingested:         " << report.abstracts_ingested << '\n'
              << "chunks ingested:            " << report.chunks_ingested << '\n'
              << "dangling citations dropped: " << report.dangling_citations_dropped << '\n'
              << "rejected records:           " << report.rejected_records.size() << '\n';
    for (const auto& r : report.rejected_records) {
        std::cout << "  line " << r.line << ": " << r.reason << '\n';
    }
}

int cmd_ingest(const CommonFlags& flags, const std::string& input, std::size_t dimension_flag) {
    litnav::EngineConfig config = resolve_config(flags);
    if (config.corpus_dir.empty()) {
        fail("BadInvocation", "ingest needs --corpus (or a config with one)");
        return 1;
    }
    if (dimension_flag != 0) config.dimension = dimension_flag;
    litnav::OwnedBackends backends = litnav::make_backends(config);
    litnav::Corpus corpus = litnav::Corpus::create(config.corpus_dir, config.dimension);
    litnav::IngestReport report;
    if (input == "-") {
        report = corpus.ingest_records(std::cin, backends.encoder.get());
    } else {
        std::ifstream in(input);
        if (!in) {
            fail("BadInvocation", "cannot open input file " + input);
            return 1;
        }
        report = corpus.ingest_records(in, backends.encoder.get());
    }
    print_ingest_report(report, flags.format);
    return 0;
}

struct SearchFlags {
    std::string query;
    std::string out = "ranked.jsonl";
    std::string audit_log;
    std::string session_id;
    std::optional<std::uint32_t> k;
    std::optional<std::uint32_t> max_rounds;
    std::optional<int> workers;
};

int cmd_search(const CommonFlags& flags, const SearchFlags& sf) {
    litnav::EngineConfig config = resolve_config(flags);
    if (config.corpus_dir.empty()) {
        fail("BadInvocation", "search needs --corpus (or a config with one)");
        return 1;
    }
    if (sf.k) config.settings.k = *sf.k;
    if (sf.max_rounds) config.settings.max_rounds = *sf.max_rounds;
    if (sf.workers) config.settings.workers = *sf.workers;

    const litnav::Corpus corpus = litnav::Corpus::open(config.corpus_dir);
    litnav::OwnedBackends owned = litnav::make_backends(config);
    litnav::EngineBackends backends = owned.view();

    litnav::SearchOutcome outcome = litnav::run_search(
        litnav::SearchIntent{sf.query, sf.session_id}, config.settings, corpus, backends);
    config.install_rates(outcome.session.ledger);

    {
        std::ofstream out(sf.out, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail("WriteFailed", "cannot write " + sf.out);
            return 1;
        }
        litnav::write_ranked_list(out, outcome.ranking);
    }
    const std::string audit_path =
        sf.audit_log.empty() ? sf.out + ".audit.jsonl" : sf.audit_log;
    {
        std::ofstream out(audit_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail("WriteFailed", "cannot write " + audit_path);
            return 1;
        }
        for (const auto& e : outcome.session.audit_log) out << e.dump() << '\n';
    }
    std::cout << "session " << outcome.session.intent.session_id << ": "
              << outcome.session.rounds << " round(s), " << outcome.ranking.entries.size()
              << " ranked (" << outcome.session.termination_reason << "), cost $"
              << outcome.session.ledger.total_usd_string() << '\n'
              << "ranked list: " << sf.out << '\n'
              << "audit log:   " << audit_path << '\n';
    return 0;
}

struct EvalFlags {
    std::string suite;
    std::string results;
    std::string out;
    std::uint32_t k = 20;
    bool strict_k = false;
};

int cmd_eval(const CommonFlags& flags, const EvalFlags& ef) {
    litnav::EngineConfig config = resolve_config(flags);
    if (config.corpus_dir.empty()) {
        fail("BadInvocation", "eval needs --corpus (or a config with one)");
        return 1;
    }
    const litnav::Corpus corpus = litnav::Corpus::open(config.corpus_dir);
    const litnav::Taxonomy taxonomy = load_taxonomy(config);
    const std::vector<litnav::BenchTask> tasks =
        litnav::load_suite_file(ef.suite, corpus, taxonomy);
    std::vector<litnav::ReturnedList> lists = litnav::load_results_file(ef.results);
    if (lists.size() == 1 && lists[0].task_id.empty() && tasks.size() == 1) {
        lists[0].task_id = tasks[0].task_id;  // bare ranked-list file
    }
    std::map<std::string, const litnav::ReturnedList*> by_task;
    for (const auto& l : lists) by_task[l.task_id] = &l;

    std::vector<litnav::TaskMetrics> metrics;
    metrics.reserve(tasks.size());
    for (const auto& task : tasks) {
        litnav::ReturnedList returned;
        const auto it = by_task.find(task.task_id);
        if (it != by_task.end()) returned = *it->second;
        litnav::TaskMetrics m =
            litnav::evaluate_ranking(returned, task, ef.k, corpus, ef.strict_k);
        m.hallucination = litnav::audit_hallucination(returned, corpus, ef.k);
        metrics.push_back(std::move(m));
    }
    const litnav::SuiteReport report =
        litnav::aggregate_report(tasks, metrics, ef.k, ef.strict_k);
    const std::string rendered =
        flags.format == "machine" ? report.to_machine() : report.to_table();
    if (ef.out.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(ef.out, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail("WriteFailed", "cannot write " + ef.out);
            return 1;
        }
        out << rendered;
        std::cout << "report: " << ef.out << '\n';
    }
    return 0;
}

int cmd_audit(const CommonFlags& flags, const std::string& results_path, std::uint32_t k) {
    litnav::EngineConfig config = resolve_config(flags);
    if (config.corpus_dir.empty()) {
        fail("BadInvocation", "audit needs --corpus (or a config with one)");
        return 1;
    }
    const litnav::Corpus corpus = litnav::Corpus::open(config.corpus_dir);
    const std::vector<litnav::ReturnedList> lists = litnav::load_results_file(results_path);
    if (lists.empty()) {
        fail("BadInvocation", "results file holds no returned lists");
        return 1;
    }
    litnav::HallucinationRates macro;
    for (const auto& l : lists) {
        const litnav::HallucinationRates r = litnav::audit_hallucination(l, corpus, k);
        std::cout << json{{"task_id", l.task_id},
                          {"entries", l.entries.size()},
                          {"title", r.title},
                          {"author", r.author},
                          {"date", r.date},
                          {"link", r.link},
                          {"all", r.all}}
                         .dump()
                  << '\n';
        macro.title += r.title;
        macro.author += r.author;
        macro.date += r.date;
        macro.link += r.link;
        macro.all += r.all;
    }
    const double n = static_cast<double>(lists.size());
    std::cout << json{{"task_id", "overall"},
                      {"lists", lists.size()},
                      {"title", macro.title / n},
                      {"author", macro.author / n},
                      {"date", macro.date / n},
                      {"link", macro.link / n},
                      {"all", macro.all / n}}
                     .dump()
              << '\n';
    return 0;
}

int cmd_serve(const CommonFlags& flags, const std::string& host, int port) {
    litnav::EngineConfig config = resolve_config(flags);
    if (config.corpus_dir.empty()) {
        fail("BadInvocation", "serve needs --corpus (or a config with one)");
        return 1;
    }
    const litnav::Corpus corpus = litnav::Corpus::open(config.corpus_dir);
    litnav::Service service(corpus, config, load_taxonomy(config));
    std::cout << "serving corpus " << config.corpus_dir.string() << " on " << host << ":" << port
              << '\n';
    return service.run(host, port);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"agentic literature retrieval engine"};
    app.require_subcommand(1);

    CommonFlags common;
    app.add_option("--config", common.config_path, "engine configuration file (JSON)");

    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--corpus", common.corpus_dir, "corpus directory");
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"text", "machine"}));
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "build a corpus from line-delimited records");
    std::string ingest_input;
    std::size_t ingest_dim = 0;
    add_common(ingest);
    ingest->add_option("--input", ingest_input, "records file (JSON Lines), '-' for stdin")
        ->required();
    ingest->add_option("--dimension", ingest_dim, "embedding dimension (default 256)");

    // search
    auto* search = app.add_subcommand("search", "run a search session over a corpus");
    SearchFlags sf;
    add_common(search);
    search->add_option("--query", sf.query, "natural-language search intent")->required();
    search->add_option("--out", sf.out, "ranked list output file");
    search->add_option("--audit-log", sf.audit_log, "session audit log file");
    search->add_option("--session-id", sf.session_id, "session identifier");
    std::uint32_t k_flag = 0, rounds_flag = 0;
    int workers_flag = 0;
    search->add_option("--k", k_flag, "ranking cutoff K (default 20)");
    search->add_option("--max-rounds", rounds_flag, "maximum retrieval rounds");
    search->add_option("--workers", workers_flag, "librarian pool size N");

    // eval
    auto* eval = app.add_subcommand("eval", "score returned lists against a benchmark suite");
    EvalFlags ef;
    add_common(eval);
    eval->add_option("--suite", ef.suite, "benchmark suite file (JSON Lines)")->required();
    eval->add_option("--results", ef.results, "returned lists file")->required();
    eval->add_option("--out", ef.out, "report output file (default stdout)");
    eval->add_option("--k", ef.k, "metric cutoff K (default 20)");
    eval->add_flag("--strict-k", ef.strict_k, "divide precision by K instead of |returned|");

    // audit
    auto* audit = app.add_subcommand("audit", "field-level hallucination audit of returned lists");
    std::string audit_results;
    std::uint32_t audit_k = 20;
    add_common(audit);
    audit->add_option("--results", audit_results, "returned lists file")->required();
    audit->add_option("--k", audit_k, "audit cutoff K (default 20)");

    // serve
    auto* serve = app.add_subcommand("serve", "expose the engine over HTTP");
    std::string host = "127.0.0.1";
    int port = 8080;
    add_common(serve);
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "bind port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    try {
        if (ingest->parsed()) return cmd_ingest(common, ingest_input, ingest_dim);
        if (search->parsed()) {
            if (k_flag != 0) sf.k = k_flag;
            if (rounds_flag != 0) sf.max_rounds = rounds_flag;
            if (workers_flag != 0) sf.workers = workers_flag;
            return cmd_search(common, sf);
        }
        if (eval->parsed()) return cmd_eval(common, ef);
        if (audit->parsed()) return cmd_audit(common, audit_results, audit_k);
        if (serve->parsed()) return cmd_serve(common, host, port);
    } catch (const litnav::SuiteLoadError& e) {
        fail(e.code, e.what());
        return 1;
    } catch (const litnav::Error& e) {
        fail("EngineError", e.what());
        return 1;
    } catch (const std::exception& e) {
        fail("InternalError", e.what());
        return 1;
    }
    return 2;
}
