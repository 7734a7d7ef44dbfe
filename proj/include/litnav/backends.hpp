#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "litnav/orchestrator.hpp"

namespace litnav {

// Deterministic keyword-overlap scorer used for tests and offline runs:
// s_j = 1 + min(4, #distinct content words of checkpoint j, lowercased,
// length >= 4, appearing in the paper's abstract + evidence texts), and
// rho = clamp(mean(s)/5 - 0.01, 0.01, 0.99). Order-independent.
class MockScorer final : public ScorerBackend {
public:
    MockScorer() = default;
    const std::string& name() const override { return name_; }
    Judgment judge(const std::string& query, const Checklist& checklist,
                   const PaperBundle& paper) override;

private:
    std::string name_ = "mock-scorer";
};

// Test scorer with a fully scripted judgment function.
class FunctionScorer final : public ScorerBackend {
public:
    using Fn = std::function<Judgment(const std::string&, const Checklist&, const PaperBundle&)>;
    FunctionScorer(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
    const std::string& name() const override { return name_; }
    Judgment judge(const std::string& query, const Checklist& checklist,
                   const PaperBundle& paper) override {
        return fn_(query, checklist, paper);
    }

private:
    std::string name_;
    Fn fn_;
};

// Returns the same score for every checkpoint of every paper.
FunctionScorer fixed_scorer(int score, double rho);

// Local planning policy with no model dependency: the checklist is the
// query split into requirement clauses, the first reflect turns the top
// ranked ids into citation seeds, the second reflect stops.
class HeuristicNavigator final : public NavigatorBackend {
public:
    struct Options {
        std::uint32_t per_channel_limit = 50;
        std::uint32_t expansion_depth = 1;
        std::uint32_t seed_count = 5;
        std::uint32_t max_checkpoints = 8;
    };
    explicit HeuristicNavigator(Options options = {}) : options_(options) {}
    const std::string& name() const override { return name_; }
    PlanResult plan(const std::string& query) override;
    ReflectResult reflect(const std::string& query, const SearchStrategy& strategy,
                          const Checklist& checklist, const RankedList& ranked) override;

private:
    Options options_;
    std::string name_ = "heuristic-navigator";
    std::uint32_t reflect_calls_ = 0;
};

// Splits a query into checklist requirement texts (clause boundaries:
// ';', '.', '!', '?'). Falls back to the whole query.
std::vector<std::string> derive_checklist_texts(const std::string& query,
                                                std::uint32_t max_checkpoints = 8);

// Fully scripted navigator: a fixed plan and a queue of reflect results.
// Once the queue is exhausted every further reflect repeats the current
// plan with stop = true.
class ScriptedNavigator final : public NavigatorBackend {
public:
    ScriptedNavigator(PlanResult plan, std::vector<ReflectResult> reflects = {})
        : plan_(std::move(plan)), reflects_(std::move(reflects)) {}
    const std::string& name() const override { return name_; }
    PlanResult plan(const std::string& query) override { return plan_; }
    ReflectResult reflect(const std::string& query, const SearchStrategy& strategy,
                          const Checklist& checklist, const RankedList& ranked) override;

private:
    std::string name_ = "scripted-navigator";
    PlanResult plan_;
    std::vector<ReflectResult> reflects_;
    std::size_t next_ = 0;
};

// Navigator driven by callables (test harness building block).
class FunctionNavigator final : public NavigatorBackend {
public:
    using PlanFn = std::function<PlanResult(const std::string&)>;
    using ReflectFn = std::function<ReflectResult(const std::string&, const SearchStrategy&,
                                                  const Checklist&, const RankedList&)>;
    FunctionNavigator(std::string name, PlanFn plan_fn, ReflectFn reflect_fn)
        : name_(std::move(name)), plan_(std::move(plan_fn)), reflect_(std::move(reflect_fn)) {}
    const std::string& name() const override { return name_; }
    PlanResult plan(const std::string& query) override { return plan_(query); }
    ReflectResult reflect(const std::string& query, const SearchStrategy& strategy,
                          const Checklist& checklist, const RankedList& ranked) override {
        return reflect_(query, strategy, checklist, ranked);
    }

private:
    std::string name_;
    PlanFn plan_;
    ReflectFn reflect_;
};

class IdentityListwise final : public ListwiseBackend {
public:
    const std::string& name() const override { return name_; }
    std::vector<std::string> reorder(const std::string& query,
                                     const std::vector<const ScoredPaper*>& window) override;

private:
    std::string name_ = "identity-listwise";
};

// Listwise backend driven by a callable (tests use it for reversal and
// invalid-permutation cases).
class FunctionListwise final : public ListwiseBackend {
public:
    using Fn = std::function<std::vector<std::string>(const std::string&,
                                                      const std::vector<const ScoredPaper*>&)>;
    FunctionListwise(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
    const std::string& name() const override { return name_; }
    std::vector<std::string> reorder(const std::string& query,
                                     const std::vector<const ScoredPaper*>& window) override {
        return fn_(query, window);
    }

private:
    std::string name_;
    Fn fn_;
};

}  // namespace litnav
