#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "solver.hpp"

namespace nehari {

/// JSON images of the result types. Doubles are emitted by nlohmann's
/// shortest round-trip formatting, so identical inputs give byte-identical
/// documents. Wall-clock times are deliberately kept out of these.
nlohmann::json to_json(const Thresholds& th);
nlohmann::json to_json(const ConditionReport& rep);
nlohmann::json to_json(const BranchPoint& bp);
nlohmann::json to_json(const BranchResult& br, bool include_trace = false);
nlohmann::json to_json(const SolveResult& sr);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const SweepResult& sw);
nlohmann::json to_json(const ProjectionResult& pr);

/// Trace as JSON-lines text (one entry per line).
std::string trace_jsonl(const BranchResult& br, Branch branch);

}  // namespace nehari
