#pragma once

#include "properpairs/cartan.hpp"
#include "properpairs/catalog.hpp"

#include <optional>
#include <string>
#include <vector>

namespace properpairs {

enum class Rule {
  TABLE_SL2,
  CHAMBER_GL2,
  SL_REDUCTION,
  RCI,
  COND_A,
  COND_B,
  COND_C,
  DB_PRIME,
  NONCOMPACT_INTERSECTION,
  NOT_CI,
  KOB_A21,
  COMPACT_FACTOR,
};

std::string ruleName(Rule r);

struct TraceStep {
  Rule rule;
  std::string detail;
  std::vector<std::string> specs;
};

struct Verdict {
  bool proper = false;
  Rule rule = Rule::TABLE_SL2;
  std::vector<TraceStep> trace;
  std::vector<std::string> citations;
};

struct CIConfig {
  int randomSamples = 200;
  uint64_t seed = 20250809;
  double svdTol = 1e-7;
  bool polish = true;
};

struct CIReport {
  bool isCI = true;
  int maxIntersectionDim = 0;
  std::optional<AffineElement> witnessG;
  std::optional<AffineLieElement> witnessDirection;
  int intersectionsSeen = 0;  // sampled g with nontrivial intersection
  int compactTypeSeen = 0;    // of those, how many were compact type
  int redraws = 0;            // ill-conditioned rank computations redrawn
};

/// Samples conjugators g (structured + random) and tests whether the
/// intersection of Lie(L) with Ad(g) Lie(H) contains a noncompact direction.
CIReport checkCI(const SubgroupSpec& l, const SubgroupSpec& h, const CIConfig& cfg = {});

struct ReducedPair {
  SubgroupSpec l;  // the side already inside the determinant-one subgroup
  SubgroupSpec h;  // the reduced partner, as an SL2xR2-catalog class
};

/// Reduction of a mixed pair to the determinant-one ambient. Empty when the
/// preconditions fail (both sides inside, or neither).
std::optional<ReducedPair> slReduction(const SubgroupSpec& l, const SubgroupSpec& h);

/// Sufficient criterion: (L, R^2) has compact twisted intersections and the
/// linear parts are a proper pair in the chamber geometry.
bool rciSufficient(const SubgroupSpec& l, const SubgroupSpec& h, const CIConfig& cfg = {});

struct DecideConfig {
  CIConfig ci;
};

/// Total decision over the catalog, with a rule trace.
Verdict decide(const SubgroupSpec& l, const SubgroupSpec& h, const DecideConfig& cfg = {});

// ---------------------------------------------------------------------------
// Built-in classification tables.
// ---------------------------------------------------------------------------

enum class TableId {
  T1, T2, T5,
  A1, A2, A3, A4, A5, A6, A7, A8, A9, A10, A11, A12, A13, A14,
};

std::optional<TableId> tableIdFromString(const std::string& s);
std::string tableIdName(TableId id);

struct CellEval {
  int row = 0, col = 0;
  std::string rowLabel, colLabel;
  double a = 0.0, b = 0.0;  // instantiated parameters
  bool hasA = false, hasB = false;
  bool expected = false;  // printed table entry / condition
  bool got = false;       // engine verdict
  std::string condition;
  std::string note;
};

struct TableResult {
  TableId id;
  std::string name;
  std::string caption;
  std::vector<std::string> rowLabels, colLabels;
  int cellsTotal = 0;       // table cells
  int evaluationsTotal = 0; // grid-instantiated checks
  std::vector<CellEval> evaluations;
  std::vector<CellEval> mismatches;  // disagreements not covered by the known list
  std::vector<CellEval> warns;       // known discrepancy cells, reported with both values
  bool pass = false;
};

/// Evaluates decide() over a table's rows/columns on the given parameter grid
/// and compares against the printed entries.
TableResult emitTable(TableId id, const std::vector<double>& grid, const DecideConfig& cfg = {});

std::string renderTableText(const TableResult& result);
std::string renderTableCsv(const TableResult& result);

}  // namespace properpairs
