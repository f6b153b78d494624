//------------------------------------------------------------------------------
// annotate.hpp
// Mapping functional and taint traces onto the hyperflow graph
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <string>
#include <vector>

#include "hyperflow/graph.hpp"
#include "hyperflow/trace.hpp"

namespace hyperflow {

// Merges (t, value, taint) change points onto each vertex and derives maximal
// predicate-true activation windows on each edge. Values come from `func`,
// labels from `taint`; the two must agree on end time and timescale
// (TimebaseMismatch otherwise). Vertices absent from both traces are reported
// in the returned warning list and left unsampled. Re-annotating replaces all
// prior samples and windows.
std::vector<std::string> annotate_graph(HyperflowGraph& g, const Trace& func,
                                        const Trace& taint);

// Single-trace convenience for traces that carry both planes.
std::vector<std::string> annotate_graph(HyperflowGraph& g, const Trace& both);

} // namespace hyperflow
