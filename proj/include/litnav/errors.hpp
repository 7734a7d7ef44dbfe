#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace litnav {

// Base class for all engine errors. Errors that are normal outcomes
// (no-match lookups, rejected ingest records, malformed judgments that
// merely exclude a candidate) are reported through return values instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownPaperId : public Error {
public:
    explicit UnknownPaperId(const std::string& id)
        : Error("unknown paper id: " + id), paper_id(id) {}
    std::string paper_id;
};

class TierEmpty : public Error {
public:
    TierEmpty(const std::string& id, const std::string& tier)
        : Error("paper " + id + " has no " + tier + " tier data") {}
};

class EmptyText : public Error {
public:
    EmptyText() : Error("text is empty after whitespace trim") {}
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("embedding dimension mismatch: expected " + std::to_string(expected) +
                ", got " + std::to_string(got)) {}
};

class EmptyChecklist : public Error {
public:
    EmptyChecklist() : Error("checklist has no checkpoints") {}
};

// Remote or scripted backend failed to produce a usable response.
// Carries retry metadata so callers can report what was attempted.
class BackendFailure : public Error {
public:
    BackendFailure(const std::string& what, std::string endpoint_arg = {}, int attempts_arg = 1)
        : Error(what), endpoint(std::move(endpoint_arg)), attempts(attempts_arg) {}
    std::string endpoint;
    int attempts = 1;
};

// Scorer output violated the judgment contract (wrong score count,
// score outside 1..5, confidence outside (0,1)).
class MalformedJudgment : public Error {
public:
    using Error::Error;
};

class InvalidPlan : public Error {
public:
    using Error::Error;
};

class NegativeTokens : public Error {
public:
    NegativeTokens() : Error("token counts must be nonnegative") {}
};

class CorpusLocked : public Error {
public:
    explicit CorpusLocked(const std::string& why) : Error(why) {}
};

// Raised by suite loading with the 1-based line of the offending task.
class SuiteLoadError : public Error {
public:
    SuiteLoadError(std::size_t line_arg, const std::string& reason, const std::string& what)
        : Error("suite line " + std::to_string(line_arg) + ": " + reason + ": " + what),
          line(line_arg), code(reason) {}
    std::size_t line;
    std::string code;  // MalformedTask | EmptyGroundTruth | UnknownGroundTruthId
};

}  // namespace litnav
