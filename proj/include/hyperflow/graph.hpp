//------------------------------------------------------------------------------
// graph.hpp
// The hyperflow graph: signals as vertices, potential flows as edges,
// both carrying trace-derived metadata
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperflow/elaborate.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/trace.hpp"

namespace hyperflow {

struct Vertex {
    std::string name;
    uint32_t width = 1;
    uint32_t lsb = 0;
    Direction dir = Direction::Internal;
    bool is_clock = false;
    std::vector<VertexSample> samples;  // time-ascending, at most one per t
};

// Half-open activation interval [t_start, t_end); `open` means the edge was
// still active when the trace ended and t_end is meaningless.
struct Window {
    uint64_t t_start = 0;
    uint64_t t_end = 0;
    bool open = false;
};

struct Edge {
    uint32_t tail = 0;
    uint32_t head = 0;
    FlowKind kind = FlowKind::Explicit;
    EdgeTiming timing = EdgeTiming::Continuous;
    bool clock_induced = false;
    std::string clock;
    Predicate predicate;
    SourceSite site;
    uint32_t bit_lo = 0;  // affected head bits, declared indices
    uint32_t bit_hi = 0;
    std::vector<Window> windows;  // time-ascending, non-overlapping
};

struct HyperflowGraph {
    std::string design_name;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    uint64_t trace_end = 0;  // 0 until a trace is annotated in
    std::string trace_id;    // provenance of the annotated trace, may be empty
    std::unordered_map<std::string, uint32_t> vertex_index;
    std::vector<std::vector<uint32_t>> out_edges;  // vertex -> edge ids
    std::vector<std::vector<uint32_t>> in_edges;

    uint32_t vertex_id(const std::string& name) const;  // throws UnknownSignal
    const Vertex* find_vertex(const std::string& name) const;
    void rebuild_index();  // refreshes vertex_index and adjacency
};

// Assembles the graph from flat signals and their flow records. Records whose
// endpoints name no signal raise DanglingEndpoint.
HyperflowGraph build_graph(const std::vector<Signal>& signals,
                           const std::vector<FlowRecord>& flows,
                           const std::string& design_name = "");

HyperflowGraph build_graph(const Design& design, const std::vector<FlowRecord>& flows);

// Convenience: extract_flows + build_graph.
HyperflowGraph build_graph(const Design& design);

// Vertices reachable from `from` (which is itself included). Edges with
// clock_induced set participate only when include_clock_induced is true.
std::vector<bool> reachable(const HyperflowGraph& g, uint32_t from, bool include_clock_induced);

// Pairwise form; reachable(g, a, a) is true for every vertex a.
bool reachable(const HyperflowGraph& g, uint32_t from, uint32_t to, bool include_clock_induced);

struct PathSet {
    std::vector<std::vector<uint32_t>> paths;  // vertex id sequences, src..dst
    bool truncated = false;                    // hit max_paths or max_len
};

// Simple paths from src to dst over the vertex graph (parallel edges collapse
// into one step). max_len 0 means |V| vertices per path.
PathSet paths(const HyperflowGraph& g, uint32_t src, uint32_t dst, size_t max_paths = 10000,
              size_t max_len = 0, bool include_clock_induced = false);

} // namespace hyperflow
