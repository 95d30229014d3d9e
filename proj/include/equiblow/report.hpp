#ifndef EQUIBLOW_REPORT_HPP
#define EQUIBLOW_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "equiblow/group.hpp"
#include "equiblow/monomial.hpp"

namespace equiblow {

// All documents this layer reads or writes keep their keys in insertion
// order, so a report is one specific byte sequence, not one of many
// equivalent ones.
using Json = nlohmann::ordered_json;

// A parsed problem file. Exponent vectors and permutations are 0-based in
// memory; the JSON on disk writes variable, ideal and coordinate indices
// 1-based (exponent vectors are positional and carry no indices).
struct ProblemFile {
  std::string mode;  // "simplify" or "resolve-map"
  std::vector<std::string> variables;
  std::vector<MonomialIdeal> ideals;          // simplify mode
  std::vector<Monomial> map_coordinates;      // resolve-map mode
  std::vector<GroupElement> generators;
  std::optional<int> max_steps;               // as written in the file
  std::string raw;                            // exact input bytes, for hashing
};

// Strict parser: unknown fields, wrong shapes and out-of-range indices are
// rejected with a ParseError carrying the JSON path (like "ideals[0][1]")
// and a stable diagnostic code.
ProblemFile parse_problem(const std::string& bytes);

// The problem as a document again; parse(render(emit_problem(p))) describes
// the same problem as p.
Json emit_problem(const ProblemFile& problem);

// "fnv1a64:" + 16 hex digits over the problem file's raw bytes. Reports
// carry it so verification can refuse a report whose problem file changed.
std::string input_hash(const std::string& raw_bytes);

// Step budget precedence: explicit override (command line), then the
// environment, then the problem file, then 50.
int effective_max_steps(std::optional<int> override_steps,
                        std::optional<int> env_steps,
                        const ProblemFile& problem);

// Run the problem and assemble the full report document. The report records
// results and enough provenance to re-derive them: the tower, per-stage
// conditions and transforms (simplify) or per-leaf reduced maps
// (resolve-map), the symmetry certificate, the selection trace and work
// counters. Engine errors propagate to the caller. When tower_dot is given
// it receives the finished tower's Graphviz rendering.
Json run(const ProblemFile& problem, int max_steps,
         std::string* tower_dot = nullptr);

// The one serialization this tool uses: two-space indentation, trailing
// newline. Identical documents are identical bytes.
std::string render(const Json& doc);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> witnesses;  // JSON paths with a short explanation
};

// Re-derive a report from its problem file: rebuild the tower from the
// recorded steps, recompute every semantic field (charts, stage conditions,
// transforms, leaf data, symmetry certificate, work counters) and compare.
// Provenance-only fields — the engine string, selection rationale in
// "rounds" and "defect_trace" — are not re-derived, so reports from other
// engine versions verify on content. Throws StaleReportError when the hash
// says the problem bytes are not the ones the report was computed from;
// every other defect becomes a witness.
VerifyResult verify_report(const ProblemFile& problem, const Json& report);

}  // namespace equiblow

#endif  // EQUIBLOW_REPORT_HPP
