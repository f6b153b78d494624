//------------------------------------------------------------------------------
// graph.cpp
// Graph assembly, reachability, and simple-path enumeration
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace hyperflow {

uint32_t HyperflowGraph::vertex_id(const std::string& name) const {
    auto it = vertex_index.find(name);
    if (it == vertex_index.end())
        throw UnknownSignal(name);
    return it->second;
}

const Vertex* HyperflowGraph::find_vertex(const std::string& name) const {
    auto it = vertex_index.find(name);
    return it == vertex_index.end() ? nullptr : &vertices[it->second];
}

void HyperflowGraph::rebuild_index() {
    vertex_index.clear();
    for (uint32_t i = 0; i < vertices.size(); ++i)
        vertex_index[vertices[i].name] = i;
    out_edges.assign(vertices.size(), {});
    in_edges.assign(vertices.size(), {});
    for (uint32_t e = 0; e < edges.size(); ++e) {
        out_edges[edges[e].tail].push_back(e);
        in_edges[edges[e].head].push_back(e);
    }
}

HyperflowGraph build_graph(const std::vector<Signal>& signals,
                           const std::vector<FlowRecord>& flows,
                           const std::string& design_name) {
    HyperflowGraph g;
    g.design_name = design_name;
    g.vertices.reserve(signals.size());
    for (const auto& s : signals) {
        Vertex v;
        v.name = s.name;
        v.width = s.width;
        v.lsb = s.lsb;
        v.dir = s.dir;
        v.is_clock = s.is_clock;
        g.vertices.push_back(std::move(v));
    }
    g.rebuild_index();

    g.edges.reserve(flows.size());
    for (const auto& f : flows) {
        auto tail = g.vertex_index.find(f.tail);
        auto head = g.vertex_index.find(f.head);
        if (tail == g.vertex_index.end())
            throw DanglingEndpoint("flow tail `" + f.tail + "` is not a vertex", f.site);
        if (head == g.vertex_index.end())
            throw DanglingEndpoint("flow head `" + f.head + "` is not a vertex", f.site);
        Edge e;
        e.tail = tail->second;
        e.head = head->second;
        e.kind = f.kind;
        e.timing = f.timing;
        e.clock_induced = f.clock_induced;
        e.clock = f.clock;
        e.predicate = f.predicate;
        e.site = f.site;
        e.bit_lo = f.bit_lo;
        e.bit_hi = f.bit_hi;
        g.edges.push_back(std::move(e));
    }
    g.rebuild_index();
    return g;
}

HyperflowGraph build_graph(const Design& design, const std::vector<FlowRecord>& flows) {
    return build_graph(design.signals, flows, design.top);
}

HyperflowGraph build_graph(const Design& design) {
    return build_graph(design, extract_flows(design));
}

std::vector<bool> reachable(const HyperflowGraph& g, uint32_t from, bool include_clock_induced) {
    std::vector<bool> seen(g.vertices.size(), false);
    std::deque<uint32_t> work{from};
    seen[from] = true;
    while (!work.empty()) {
        uint32_t v = work.front();
        work.pop_front();
        for (uint32_t e : g.out_edges[v]) {
            const Edge& edge = g.edges[e];
            if (edge.clock_induced && !include_clock_induced)
                continue;
            if (!seen[edge.head]) {
                seen[edge.head] = true;
                work.push_back(edge.head);
            }
        }
    }
    return seen;
}

bool reachable(const HyperflowGraph& g, uint32_t from, uint32_t to, bool include_clock_induced) {
    return reachable(g, from, include_clock_induced)[to];
}

PathSet paths(const HyperflowGraph& g, uint32_t src, uint32_t dst, size_t max_paths,
              size_t max_len, bool include_clock_induced) {
    if (max_len == 0)
        max_len = g.vertices.size();
    PathSet out;

    // Successor sets with parallel edges collapsed, sorted for determinism.
    auto successors = [&](uint32_t v) {
        std::set<uint32_t> next;
        for (uint32_t e : g.out_edges[v]) {
            const Edge& edge = g.edges[e];
            if (edge.clock_induced && !include_clock_induced)
                continue;
            next.insert(edge.head);
        }
        return next;
    };

    // Prune branches that cannot reach dst at all.
    std::vector<bool> to_dst(g.vertices.size(), false);
    {
        std::deque<uint32_t> work{dst};
        to_dst[dst] = true;
        while (!work.empty()) {
            uint32_t v = work.front();
            work.pop_front();
            for (uint32_t e : g.in_edges[v]) {
                const Edge& edge = g.edges[e];
                if (edge.clock_induced && !include_clock_induced)
                    continue;
                if (!to_dst[edge.tail]) {
                    to_dst[edge.tail] = true;
                    work.push_back(edge.tail);
                }
            }
        }
    }
    if (!to_dst[src])
        return out;

    std::vector<uint32_t> path{src};
    std::vector<bool> on_path(g.vertices.size(), false);
    on_path[src] = true;

    // Explicit DFS with per-vertex successor iterators.
    struct Frame {
        std::set<uint32_t> next;
        std::set<uint32_t>::iterator it;
    };
    std::vector<Frame> stack;
    stack.push_back({successors(src), {}});
    stack.back().it = stack.back().next.begin();

    if (src == dst)
        out.paths.push_back(path);  // zero-length path

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.it == f.next.end()) {
            on_path[path.back()] = false;
            path.pop_back();
            stack.pop_back();
            continue;
        }
        uint32_t v = *f.it++;
        if (on_path[v] || !to_dst[v])
            continue;
        if (path.size() + 1 > max_len) {
            out.truncated = true;
            continue;
        }
        path.push_back(v);
        if (v == dst) {
            if (out.paths.size() >= max_paths) {
                out.truncated = true;
                path.pop_back();
                return out;
            }
            out.paths.push_back(path);
            path.pop_back();
            continue;
        }
        on_path[v] = true;
        stack.push_back({successors(v), {}});
        stack.back().it = stack.back().next.begin();
    }
    return out;
}

} // namespace hyperflow
