//------------------------------------------------------------------------------
// flow.hpp
// Explicit/implicit flow extraction with cumulative guard predicates
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <string>
#include <vector>

#include "hyperflow/ast.hpp"
#include "hyperflow/elaborate.hpp"

namespace hyperflow {

enum class FlowKind { Explicit, Implicit };
enum class EdgeTiming { Continuous, Clocked };

// Conjunction of guard terms. An empty term list is the constant-true
// predicate. Terms are ordered outermost guard first; a case arm contributes
// the negations of every earlier arm followed by its own match term.
struct Predicate {
    std::vector<ExprPtr> terms;

    bool always_true() const { return terms.empty(); }
    // Display form: terms joined with &&, non-atomic terms parenthesized.
    std::string str() const;
};

// One potential flow, before graph construction. Tail and head are flat
// signal names; `site` anchors the assignment (or process, for clock
// sensitivity) that produced the record. bit_lo/bit_hi give the affected
// head bit range as written in source (full declared range when the target
// has no select).
struct FlowRecord {
    std::string tail;
    std::string head;
    FlowKind kind = FlowKind::Explicit;
    EdgeTiming timing = EdgeTiming::Continuous;
    bool clock_induced = false;  // sensitivity-list edge, not a data path
    std::string clock;           // Clocked edges only
    Predicate predicate;
    SourceSite site;
    uint32_t bit_lo = 0;
    uint32_t bit_hi = 0;
};

// Signal names an expression reads, in first-appearance order, deduplicated.
std::vector<std::string> expr_reads(const Expr& e);

// The vertex set: one entry per declared signal of the flattened design.
inline const std::vector<Signal>& extract_signals(const Design& design) {
    return design.signals;
}

// Extracts every potential flow of the flattened design, canonically ordered
// by (site, tail, head, kind).
std::vector<FlowRecord> extract_flows(const Design& design);

} // namespace hyperflow
