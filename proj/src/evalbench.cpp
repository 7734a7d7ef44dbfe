#include "litnav/evalbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "litnav/errors.hpp"
#include "litnav/text.hpp"

using nlohmann::json;

namespace litnav {

Taxonomy Taxonomy::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open taxonomy file " + file.string());
    json j = json::parse(in);
    Taxonomy t;
    for (const auto& d : j.at("disciplines")) {
        t.disciplines_[d.at("discipline").get<std::string>()] =
            d.at("topics").get<std::vector<std::string>>();
    }
    return t;
}

std::size_t Taxonomy::topic_count() const {
    std::size_t n = 0;
    for (const auto& [d, topics] : disciplines_) n += topics.size();
    return n;
}

std::optional<std::string> resolve_citation(const Citation& c, const Corpus& corpus) {
    if (!c.paper_id.empty()) {
        if (corpus.contains(c.paper_id)) return c.paper_id;
        return std::nullopt;  // claims an id the corpus does not know
    }
    if (!c.link.empty()) {
        // The link field carries the DOI when the citation has one.
        if (auto id = corpus.find_by_doi(normalize_doi(c.link))) return id;
    }
    if (!c.title.empty()) {
        if (auto id = corpus.find_by_title(normalize_title(c.title))) return id;
    }
    return std::nullopt;
}

TaskMetrics evaluate_ranking(const ReturnedList& returned, const BenchTask& task, std::uint32_t k,
                             const Corpus& corpus, bool strict_k) {
    if (task.ground_truth.empty()) throw Error("EmptyGroundTruth: task " + task.task_id);
    const std::size_t considered = std::min<std::size_t>(k, returned.entries.size());

    // Binary gains; a ground-truth paper earns its gain at its first
    // occurrence only, so duplicates cannot inflate DCG beyond IDCG.
    std::set<std::string> hit_ids;
    double dcg = 0.0;
    for (std::size_t i = 0; i < considered; ++i) {
        const auto id = resolve_citation(returned.entries[i], corpus);
        if (id && task.ground_truth.count(*id) && hit_ids.insert(*id).second) {
            dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    double idcg = 0.0;
    const std::size_t ideal = std::min<std::size_t>(k, task.ground_truth.size());
    for (std::size_t i = 0; i < ideal; ++i) {
        idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }

    TaskMetrics m;
    m.cost_usd = returned.cost_usd;
    const double hits = static_cast<double>(hit_ids.size());
    m.recall = hits / static_cast<double>(task.ground_truth.size());
    const std::size_t denom = strict_k ? k : considered;
    m.precision = denom == 0 ? 0.0 : hits / static_cast<double>(denom);
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.ndcg = idcg > 0.0 ? dcg / idcg : 0.0;
    return m;
}

HallucinationRates audit_hallucination(const ReturnedList& returned, const Corpus& corpus,
                                       std::uint32_t k) {
    HallucinationRates rates;
    const std::size_t n = std::min<std::size_t>(k, returned.entries.size());
    if (n == 0) return rates;

    std::size_t bad_title = 0, bad_author = 0, bad_date = 0, bad_link = 0, bad_any = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Citation& c = returned.entries[i];
        const auto id = resolve_citation(c, corpus);
        if (!id) {
            ++bad_title;
            ++bad_author;
            ++bad_date;
            ++bad_link;
            ++bad_any;
            continue;
        }
        const PaperRecord& rec = corpus.meta(*id);
        bool title_ok = true, author_ok = true, date_ok = true, link_ok = true;
        if (!c.title.empty()) {
            title_ok = normalize_title(c.title) == normalize_title(rec.title);
        }
        if (!c.authors.empty()) {
            std::multiset<std::string> claimed, actual;
            for (const auto& a : c.authors) claimed.insert(surname_key(a));
            for (const auto& a : rec.authors) actual.insert(surname_key(a));
            author_ok = claimed == actual;
        }
        if (!c.date.empty()) {
            date_ok = year_of(c.date) == year_of(rec.date) && year_of(c.date) != -1;
        }
        if (!c.link.empty()) {
            const std::string as_doi = normalize_doi(c.link);
            link_ok = (!rec.doi.empty() && as_doi == rec.doi) ||
                      (!rec.link.empty() && normalize_link(c.link) == normalize_link(rec.link));
        }
        if (!title_ok) ++bad_title;
        if (!author_ok) ++bad_author;
        if (!date_ok) ++bad_date;
        if (!link_ok) ++bad_link;
        if (!title_ok || !author_ok || !date_ok || !link_ok) ++bad_any;
    }
    const double dn = static_cast<double>(n);
    rates.title = bad_title / dn;
    rates.author = bad_author / dn;
    rates.date = bad_date / dn;
    rates.link = bad_link / dn;
    rates.all = bad_any / dn;
    return rates;
}

std::vector<BenchTask> load_suite(std::istream& in, const Corpus& corpus,
                                  const Taxonomy& taxonomy) {
    std::vector<BenchTask> tasks;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw SuiteLoadError(line_no, "MalformedTask", e.what());
        }
        if (!j.is_object() || !j.contains("task_id") || !j.contains("query") ||
            !j.contains("checklist") || !j.contains("ground_truth")) {
            throw SuiteLoadError(line_no, "MalformedTask",
                                 "required fields: task_id, query, checklist, ground_truth");
        }
        BenchTask task;
        try {
            task.task_id = j.at("task_id").get<std::string>();
            task.query = j.at("query").get<std::string>();
            task.checklist =
                Checklist::from_texts(j.at("checklist").get<std::vector<std::string>>());
            for (const auto& id : j.at("ground_truth").get<std::vector<std::string>>()) {
                task.ground_truth.insert(id);
            }
            task.discipline = j.value("discipline", std::string{"unknown"});
        } catch (const json::exception& e) {
            throw SuiteLoadError(line_no, "MalformedTask", e.what());
        }
        if (task.task_id.empty() || trim(task.query).empty()) {
            throw SuiteLoadError(line_no, "MalformedTask", "empty task_id or query");
        }
        if (!seen_ids.insert(task.task_id).second) {
            throw SuiteLoadError(line_no, "MalformedTask",
                                 "duplicate task_id " + task.task_id);
        }
        if (const std::string err = task.checklist.validate(); !err.empty()) {
            throw SuiteLoadError(line_no, "MalformedTask", err);
        }
        if (task.ground_truth.empty()) {
            throw SuiteLoadError(line_no, "EmptyGroundTruth", "task " + task.task_id);
        }
        for (const auto& id : task.ground_truth) {
            if (!corpus.contains(id)) {
                throw SuiteLoadError(line_no, "UnknownGroundTruthId", id);
            }
        }
        if (!taxonomy.has_discipline(task.discipline)) task.discipline = "unknown";
        tasks.push_back(std::move(task));
    }
    return tasks;
}

std::vector<BenchTask> load_suite_file(const std::filesystem::path& path, const Corpus& corpus,
                                       const Taxonomy& taxonomy) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open suite file " + path.string());
    return load_suite(in, corpus, taxonomy);
}

Citation citation_from_json(const json& j) {
    Citation c;
    c.paper_id = j.value("paper_id", std::string{});
    c.title = j.value("title", std::string{});
    c.authors = j.value("authors", std::vector<std::string>{});
    c.date = j.value("date", std::string{});
    c.link = j.value("link", std::string{});
    if (c.link.empty()) c.link = j.value("doi", std::string{});
    return c;
}

std::vector<ReturnedList> load_results_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open results file " + path.string());
    std::vector<ReturnedList> lists;
    ReturnedList flat;  // bare ranked-list form accumulates here
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error("results line " + std::to_string(line_no) + ": " + e.what());
        }
        if (j.is_object() && j.contains("entries")) {
            ReturnedList list;
            list.task_id = j.value("task_id", std::string{});
            if (j.contains("cost_usd") && j["cost_usd"].is_number()) {
                list.cost_usd = j["cost_usd"].get<double>();
            }
            for (const auto& e : j["entries"]) list.entries.push_back(citation_from_json(e));
            lists.push_back(std::move(list));
        } else if (j.is_object()) {
            flat.entries.push_back(citation_from_json(j));
        } else {
            throw Error("results line " + std::to_string(line_no) + ": not a JSON object");
        }
    }
    if (!flat.entries.empty()) {
        if (!lists.empty()) {
            throw Error("results file mixes bare entries with task records");
        }
        lists.push_back(std::move(flat));
    }
    return lists;
}

namespace {

void add_metrics(TaskMetrics& acc, const TaskMetrics& m) {
    acc.recall += m.recall;
    acc.precision += m.precision;
    acc.f1 += m.f1;
    acc.ndcg += m.ndcg;
    acc.hallucination.title += m.hallucination.title;
    acc.hallucination.author += m.hallucination.author;
    acc.hallucination.date += m.hallucination.date;
    acc.hallucination.link += m.hallucination.link;
    acc.hallucination.all += m.hallucination.all;
}

void divide_metrics(TaskMetrics& acc, double n) {
    acc.recall /= n;
    acc.precision /= n;
    acc.f1 /= n;
    acc.ndcg /= n;
    acc.hallucination.title /= n;
    acc.hallucination.author /= n;
    acc.hallucination.date /= n;
    acc.hallucination.link /= n;
    acc.hallucination.all /= n;
}

std::string metrics_json_fields(const TaskMetrics& m) {
    std::string s;
    s += "\"recall\":" + fmt_fixed(m.recall);
    s += ",\"precision\":" + fmt_fixed(m.precision);
    s += ",\"f1\":" + fmt_fixed(m.f1);
    s += ",\"ndcg\":" + fmt_fixed(m.ndcg);
    s += ",\"hallucination\":{";
    s += "\"title\":" + fmt_fixed(m.hallucination.title);
    s += ",\"author\":" + fmt_fixed(m.hallucination.author);
    s += ",\"date\":" + fmt_fixed(m.hallucination.date);
    s += ",\"link\":" + fmt_fixed(m.hallucination.link);
    s += ",\"all\":" + fmt_fixed(m.hallucination.all);
    s += "}";
    if (m.cost_usd) s += ",\"cost_usd\":" + fmt_fixed(*m.cost_usd);
    return s;
}

}  // namespace

SuiteReport aggregate_report(const std::vector<BenchTask>& tasks,
                             const std::vector<TaskMetrics>& metrics, std::uint32_t k,
                             bool strict_k) {
    if (tasks.size() != metrics.size()) throw Error("tasks/metrics size mismatch");
    if (tasks.empty()) throw Error("aggregate_report requires at least one task");
    SuiteReport report;
    report.k = k;
    report.strict_k = strict_k;

    std::map<std::string, TaskMetrics> disc_acc;
    std::map<std::string, double> disc_cost_sum;
    std::map<std::string, std::size_t> disc_cost_n;
    double cost_sum = 0.0;
    std::size_t cost_n = 0;

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        report.tasks.push_back({tasks[i].task_id, tasks[i].discipline, metrics[i]});
        add_metrics(report.overall, metrics[i]);
        add_metrics(disc_acc[tasks[i].discipline], metrics[i]);
        ++report.discipline_counts[tasks[i].discipline];
        if (metrics[i].cost_usd) {
            cost_sum += *metrics[i].cost_usd;
            ++cost_n;
            disc_cost_sum[tasks[i].discipline] += *metrics[i].cost_usd;
            ++disc_cost_n[tasks[i].discipline];
        }
    }
    divide_metrics(report.overall, static_cast<double>(tasks.size()));
    if (cost_n == tasks.size()) report.overall.cost_usd = cost_sum / static_cast<double>(cost_n);
    for (auto& [disc, acc] : disc_acc) {
        const double n = static_cast<double>(report.discipline_counts[disc]);
        divide_metrics(acc, n);
        if (disc_cost_n[disc] == report.discipline_counts[disc] && disc_cost_n[disc] > 0) {
            acc.cost_usd = disc_cost_sum[disc] / n;
        }
        report.by_discipline.emplace(disc, acc);
    }
    return report;
}

std::string SuiteReport::to_machine() const {
    std::string out;
    out += "{\"record\":\"suite\",\"tasks\":" + std::to_string(tasks.size()) +
           ",\"k\":" + std::to_string(k) +
           ",\"precision_denominator\":\"" + (strict_k ? "k" : "returned") + "\"}\n";
    for (const auto& row : tasks) {
        out += "{\"record\":\"task\",\"task_id\":" + json(row.task_id).dump() +
               ",\"discipline\":" + json(row.discipline).dump() + "," +
               metrics_json_fields(row.metrics) + "}\n";
    }
    for (const auto& [disc, m] : by_discipline) {
        out += "{\"record\":\"discipline\",\"discipline\":" + json(disc).dump() +
               ",\"tasks\":" + std::to_string(discipline_counts.at(disc)) + "," +
               metrics_json_fields(m) + "}\n";
    }
    out += "{\"record\":\"overall\"," + metrics_json_fields(overall) + "}\n";
    return out;
}

json to_json(const TaskMetrics& m) {
    json j{{"recall", m.recall},
           {"precision", m.precision},
           {"f1", m.f1},
           {"ndcg", m.ndcg},
           {"hallucination",
            {{"title", m.hallucination.title},
             {"author", m.hallucination.author},
             {"date", m.hallucination.date},
             {"link", m.hallucination.link},
             {"all", m.hallucination.all}}}};
    if (m.cost_usd) j["cost_usd"] = *m.cost_usd;
    return j;
}

json to_json(const SuiteReport& report) {
    json tasks = json::array();
    for (const auto& row : report.tasks) {
        json t = to_json(row.metrics);
        t["task_id"] = row.task_id;
        t["discipline"] = row.discipline;
        tasks.push_back(std::move(t));
    }
    json disciplines = json::array();
    for (const auto& [disc, m] : report.by_discipline) {
        json d = to_json(m);
        d["discipline"] = disc;
        d["tasks"] = report.discipline_counts.at(disc);
        disciplines.push_back(std::move(d));
    }
    return json{{"k", report.k},
                {"precision_denominator", report.strict_k ? "k" : "returned"},
                {"tasks", std::move(tasks)},
                {"disciplines", std::move(disciplines)},
                {"overall", to_json(report.overall)}};
}

std::string SuiteReport::to_table() const {
    std::ostringstream os;
    auto row = [&os](const std::string& name, std::size_t n, const TaskMetrics& m) {
        os << "  ";
        os.width(28);
        os.setf(std::ios::left, std::ios::adjustfield);
        os << (name.size() > 28 ? name.substr(0, 28) : name);
        os.unsetf(std::ios::adjustfield);
        char buf[160];
        std::snprintf(buf, sizeof(buf), " %5zu  %8.4f  %8.4f  %8.4f  %8.4f  %8.4f", n, m.recall,
                      m.precision, m.f1, m.ndcg, m.hallucination.all);
        os << buf;
        if (m.cost_usd) {
            std::snprintf(buf, sizeof(buf), "  %10.4f", *m.cost_usd);
            os << buf;
        }
        os << '\n';
    };
    os << "suite report (K=" << k << ", precision denominator: "
       << (strict_k ? "K" : "returned") << ")\n";
    os << "  group                         tasks    recall      prec        f1      ndcg  "
          "halluc\n";
    for (const auto& [disc, m] : by_discipline) {
        row(disc, discipline_counts.at(disc), m);
    }
    row("overall", tasks.size(), overall);
    return os.str();
}

}  // namespace litnav
