//------------------------------------------------------------------------------
// serialize.hpp
// Graph persistence (versioned text format) and export views for
// visualization tools (dot, element-list JSON)
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <iosfwd>
#include <string>

#include "hyperflow/graph.hpp"

namespace hyperflow {

// Writes the graph, annotations included, as a line-based text document
// ("hfg 1" header). The writer is deterministic: saving a loaded graph
// reproduces the original file byte for byte.
void save_graph(const HyperflowGraph& g, std::ostream& os);
std::string save_graph_string(const HyperflowGraph& g);
void save_graph_file(const HyperflowGraph& g, const std::string& path);  // throws IoError

// Throws GraphFormatError citing `path` and the offending line.
HyperflowGraph load_graph(std::istream& is, const std::string& path = "<hfg>");
HyperflowGraph load_graph_string(const std::string& text);
HyperflowGraph load_graph_file(const std::string& path);  // throws IoError

enum class EdgeFilter { All, ExplicitOnly, ImplicitOnly };

struct ExportOptions {
    EdgeFilter filter = EdgeFilter::All;
    bool include_clock_induced = false;
    // When both are set, the view narrows to the vertices and edges lying on
    // activated paths from path_from to path_to (all structural paths when
    // the graph carries no trace).
    std::string path_from;
    std::string path_to;
};

// Graphviz view. Explicit edges render solid, implicit dashed; vertices the
// trace marked tainted render filled.
std::string export_dot(const HyperflowGraph& g, const ExportOptions& opts = {});

// Element-list JSON (nodes[] and edges[] with data attributes), the shape
// graph viewers such as Cytoscape consume directly.
std::string export_elements(const HyperflowGraph& g, const ExportOptions& opts = {});

} // namespace hyperflow
