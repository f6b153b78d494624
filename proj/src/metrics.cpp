//------------------------------------------------------------------------------
// metrics.cpp
// SCM, PAM, SPM, SLBT/LIFR, and GIFR
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <map>

namespace hyperflow {

namespace {

void require_annotated(const HyperflowGraph& g) {
    if (g.trace_end == 0)
        throw TimeOutOfRange("graph carries no annotated trace");
}

// Taint bits of vertex v at time t (last-known sample).
Bits taint_at(const HyperflowGraph& g, uint32_t v, uint64_t t) {
    const auto& samples = g.vertices[v].samples;
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](uint64_t q, const VertexSample& s) { return q < s.t; });
    if (it == samples.begin())
        return Bits(g.vertices[v].width);
    return std::prev(it)->val_taint;
}

// Times where any taint bit of v rises 0 -> 1; the initial sample's set bits
// count as rises at its time.
std::vector<uint64_t> taint_rise_times(const HyperflowGraph& g, uint32_t v) {
    std::vector<uint64_t> times;
    Bits prev(g.vertices[v].width);
    for (const auto& s : g.vertices[v].samples) {
        Bits rises = s.val_taint & ~prev;
        if (rises.any())
            times.push_back(s.t);
        prev = s.val_taint;
    }
    return times;
}

// Posedge times of a clock vertex's value plane; a high initial sample counts.
std::vector<uint64_t> posedge_times(const HyperflowGraph& g, uint32_t v) {
    std::vector<uint64_t> times;
    bool prev = false;
    for (const auto& s : g.vertices[v].samples) {
        bool cur = s.val.bit(0);
        if (cur && !prev)
            times.push_back(s.t);
        prev = cur;
    }
    return times;
}

bool window_covers(const Window& w, uint64_t t, uint64_t trace_end) {
    uint64_t end = w.open ? trace_end : w.t_end;
    return w.t_start <= t && t < end;
}

struct PathCredit {
    PathSet all;
    std::vector<bool> credited;  // parallel to all.paths
};

// The pam core: enumerate structural paths, then credit each one that can
// carry the flow in a single instant. A path is credited when some taint
// arrival time t at dst has every step covered by a parallel edge whose
// window contains t, whose tail is tainted at t, and (for clocked edges)
// whose window saw a clock posedge no later than t.
PathCredit credit_paths(const HyperflowGraph& g, uint32_t src, uint32_t dst,
                        const MetricsOptions& opts) {
    PathCredit pc;
    pc.all = paths(g, src, dst, opts.max_paths, opts.max_len, opts.include_clock_induced);
    pc.credited.assign(pc.all.paths.size(), false);
    if (pc.all.paths.empty())
        return pc;

    std::vector<uint64_t> arrivals = taint_rise_times(g, dst);
    if (arrivals.empty())
        return pc;

    // Per clock name, posedge times (cached across edges).
    std::map<std::string, std::vector<uint64_t>> posedges;
    auto clock_posedges = [&](const std::string& clk) -> const std::vector<uint64_t>& {
        auto it = posedges.find(clk);
        if (it == posedges.end()) {
            std::vector<uint64_t> times;
            const Vertex* cv = g.find_vertex(clk);
            if (cv)
                times = posedge_times(g, g.vertex_id(clk));
            it = posedges.emplace(clk, std::move(times)).first;
        }
        return it->second;
    };

    auto edge_fires = [&](const Edge& e, uint64_t t) {
        if (e.clock_induced && !opts.include_clock_induced)
            return false;
        if (!taint_at(g, e.tail, t).any())
            return false;
        for (const auto& w : e.windows) {
            if (!window_covers(w, t, g.trace_end))
                continue;
            if (e.timing == EdgeTiming::Clocked) {
                const auto& edges_of_clock = clock_posedges(e.clock);
                auto it = std::upper_bound(edges_of_clock.begin(), edges_of_clock.end(), t);
                if (it == edges_of_clock.begin() || *std::prev(it) < w.t_start)
                    continue;
            }
            return true;
        }
        return false;
    };

    // Step (u, v) of a forward path fires if any parallel edge u->v fires.
    auto step_fires = [&](uint32_t u, uint32_t v, uint64_t t) {
        for (uint32_t ei : g.out_edges[u])
            if (g.edges[ei].head == v && edge_fires(g.edges[ei], t))
                return true;
        return false;
    };

    for (size_t p = 0; p < pc.all.paths.size(); ++p) {
        const auto& path = pc.all.paths[p];
        for (uint64_t t : arrivals) {
            bool ok = true;
            for (size_t i = 0; i + 1 < path.size() && ok; ++i)
                ok = step_fires(path[i], path[i + 1], t);
            if (ok) {
                pc.credited[p] = true;
                break;
            }
        }
    }
    return pc;
}

} // namespace

bool scm(const HyperflowGraph& g, const std::string& a, const std::string& b,
         const MetricsOptions& opts) {
    return reachable(g, g.vertex_id(a), g.vertex_id(b), opts.include_clock_induced);
}

bool scm_observed(const HyperflowGraph& g, const std::string& b) {
    return !taint_rise_times(g, g.vertex_id(b)).empty();
}

PamResult pam(const HyperflowGraph& g, const std::string& a, const std::string& b,
              const MetricsOptions& opts) {
    require_annotated(g);
    PathCredit pc = credit_paths(g, g.vertex_id(a), g.vertex_id(b), opts);
    PamResult res;
    res.denominator = pc.all.paths.size();
    res.truncated = pc.all.truncated;
    for (bool c : pc.credited)
        if (c)
            ++res.activated;
    return res;
}

PathSet activated_paths(const HyperflowGraph& g, const std::string& a, const std::string& b,
                        const MetricsOptions& opts) {
    uint32_t src = g.vertex_id(a);
    uint32_t dst = g.vertex_id(b);
    if (g.trace_end == 0)
        return paths(g, src, dst, opts.max_paths, opts.max_len, opts.include_clock_induced);
    PathCredit pc = credit_paths(g, src, dst, opts);
    PathSet out;
    out.truncated = pc.all.truncated;
    for (size_t p = 0; p < pc.all.paths.size(); ++p)
        if (pc.credited[p])
            out.paths.push_back(pc.all.paths[p]);
    return out;
}

uint64_t spm(const HyperflowGraph& g, const std::string& a, const std::string& b, uint64_t t,
             const MetricsOptions& opts) {
    require_annotated(g);
    (void)a;  // the frontier is read off the single label plane
    uint32_t dst = g.vertex_id(b);
    if (t >= g.trace_end)
        throw TimeOutOfRange("query time " + std::to_string(t) +
                             " is past the annotated trace end " + std::to_string(g.trace_end));
    if (taint_at(g, dst, t).any())
        return 0;

    // Multi-source BFS from every tainted vertex.
    std::vector<uint64_t> dist(g.vertices.size(), spm_infinity);
    std::deque<uint32_t> work;
    for (uint32_t v = 0; v < g.vertices.size(); ++v) {
        if (taint_at(g, v, t).any()) {
            dist[v] = 0;
            work.push_back(v);
        }
    }
    while (!work.empty()) {
        uint32_t v = work.front();
        work.pop_front();
        if (v == dst)
            return dist[v];
        for (uint32_t ei : g.out_edges[v]) {
            const Edge& e = g.edges[ei];
            if (e.clock_induced && !opts.include_clock_induced)
                continue;
            if (dist[e.head] == spm_infinity) {
                dist[e.head] = dist[v] + 1;
                work.push_back(e.head);
            }
        }
    }
    return dist[dst];
}

uint64_t slbt(const HyperflowGraph& g, const std::string& b, uint64_t t1, uint64_t t2) {
    require_annotated(g);
    if (t1 > t2)
        throw TimeOutOfRange("window start " + std::to_string(t1) + " is past its end " +
                             std::to_string(t2));
    if (t2 > g.trace_end)
        throw TimeOutOfRange("window end " + std::to_string(t2) +
                             " is past the annotated trace end " + std::to_string(g.trace_end));
    uint32_t v = g.vertex_id(b);
    uint64_t count = 0;
    Bits prev(g.vertices[v].width);
    for (const auto& s : g.vertices[v].samples) {
        Bits rises = s.val_taint & ~prev;
        if (s.t >= t1 && s.t < t2)
            for (uint32_t i = 0; i < rises.width(); ++i)
                count += rises.bit(i) ? 1 : 0;
        prev = s.val_taint;
    }
    return count;
}

double lifr(const HyperflowGraph& g, const std::string& b, uint64_t t1, uint64_t t2) {
    if (t1 == t2)
        throw ZeroWindow("rate window [" + std::to_string(t1) + ", " + std::to_string(t2) +
                         ") has zero length");
    uint64_t n = slbt(g, b, t1, t2);
    return static_cast<double>(n) / static_cast<double>(t2 - t1);
}

uint64_t gifr_count(const HyperflowGraph& g, uint64_t t1, uint64_t t2) {
    require_annotated(g);
    uint64_t total = 0;
    for (const auto& v : g.vertices)
        total += slbt(g, v.name, t1, t2);
    return total;
}

double gifr(const HyperflowGraph& g, uint64_t t1, uint64_t t2) {
    if (t1 == t2)
        throw ZeroWindow("rate window [" + std::to_string(t1) + ", " + std::to_string(t2) +
                         ") has zero length");
    uint64_t n = gifr_count(g, t1, t2);
    return static_cast<double>(n) / static_cast<double>(t2 - t1);
}

MetricReport make_report(const HyperflowGraph& g, const std::string& asset,
                         const std::string& target, const MetricsOptions& opts) {
    require_annotated(g);
    MetricReport r;
    r.asset = asset;
    r.target = target;
    r.trace_id = g.trace_id;
    r.scm = scm(g, asset, target, opts);
    r.scm_observed = scm_observed(g, target);
    r.pam = pam(g, asset, target, opts);
    r.spm_time = g.trace_end - 1;
    r.spm = spm(g, asset, target, r.spm_time, opts);
    for (double f : opts.window_fractions) {
        uint64_t t2 = static_cast<uint64_t>(
            std::llround(f * static_cast<double>(g.trace_end)));
        t2 = std::max<uint64_t>(1, std::min(t2, g.trace_end));
        LifrEntry entry;
        entry.t1 = 0;
        entry.t2 = t2;
        entry.slbt = slbt(g, target, 0, t2);
        entry.rate = static_cast<double>(entry.slbt) / static_cast<double>(t2);
        r.lifr.push_back(entry);
    }
    r.gifr_slbt = gifr_count(g, 0, g.trace_end);
    r.gifr = static_cast<double>(r.gifr_slbt) / static_cast<double>(g.trace_end);
    return r;
}

std::vector<MetricReport> make_reports(const HyperflowGraph& g, const std::string& asset,
                                       const std::vector<std::string>& targets,
                                       const MetricsOptions& opts) {
    // Validate names up front so failures surface deterministically, then fan
    // the per-target work out; make_report only reads the graph.
    g.vertex_id(asset);
    for (const auto& t : targets)
        g.vertex_id(t);

    std::vector<MetricReport> out(targets.size());
    if (targets.size() <= 1) {
        for (size_t i = 0; i < targets.size(); ++i)
            out[i] = make_report(g, asset, targets[i], opts);
        return out;
    }
    std::vector<std::future<MetricReport>> jobs;
    jobs.reserve(targets.size());
    for (const auto& t : targets)
        jobs.push_back(std::async(std::launch::async,
                                  [&g, &asset, &t, &opts] { return make_report(g, asset, t, opts); }));
    for (size_t i = 0; i < jobs.size(); ++i)
        out[i] = jobs[i].get();
    return out;
}

} // namespace hyperflow
