//------------------------------------------------------------------------------
// metrics.hpp
// Information-flow coverage metrics over the annotated hyperflow graph
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperflow/graph.hpp"

namespace hyperflow {

// Sentinel distance for "no path".
inline constexpr uint64_t spm_infinity = UINT64_MAX;

struct MetricsOptions {
    bool include_clock_induced = false;  // count clock fan-in edges as flows
    size_t max_paths = 10000;            // path enumeration cap for pam
    size_t max_len = 0;                  // 0 means |V| vertices per path
    std::vector<double> window_fractions{0.25, 0.5, 0.75, 1.0};
};

struct PamResult {
    uint64_t denominator = 0;  // enumerated paths from a to b
    uint64_t activated = 0;    // paths credited by the reverse search
    bool truncated = false;    // enumeration hit a cap; value is a lower bound

    double value() const {
        return denominator ? static_cast<double>(activated) / static_cast<double>(denominator)
                           : 0.0;
    }
};

struct LifrEntry {
    uint64_t t1 = 0;
    uint64_t t2 = 0;
    uint64_t slbt = 0;  // raw label-bit transition count over [t1, t2)
    double rate = 0.0;  // slbt / (t2 - t1)
};

struct MetricReport {
    std::string asset;
    std::string target;
    bool scm = false;           // static: some path a -> b exists
    bool scm_observed = false;  // dynamic: target's label actually rose in the trace
    PamResult pam;
    uint64_t spm = spm_infinity;
    uint64_t spm_time = 0;  // query time the spm value refers to
    std::vector<LifrEntry> lifr;
    uint64_t gifr_slbt = 0;  // design-wide transition count over the full trace
    double gifr = 0.0;
    std::string trace_id;
};

// Static connectivity: does any flow path lead from a to b? Purely structural;
// needs no annotation.
bool scm(const HyperflowGraph& g, const std::string& a, const std::string& b,
         const MetricsOptions& opts = {});

// Did b's label plane ever rise during the annotated trace?
bool scm_observed(const HyperflowGraph& g, const std::string& b);

// Activated fraction of the enumerated a->b paths. A path is credited when, at
// some time b's taint rises, every step has an edge whose activation window
// covers that time, whose tail is tainted then, and (for clocked edges) whose
// clock shows a posedge inside the covering window up to that time.
PamResult pam(const HyperflowGraph& g, const std::string& a, const std::string& b,
              const MetricsOptions& opts = {});

// The pam numerator path by path: every credited a->b path, in enumeration
// order. An unannotated graph yields all structural paths instead, so the
// result is usable as a purely static view too.
PathSet activated_paths(const HyperflowGraph& g, const std::string& a, const std::string& b,
                        const MetricsOptions& opts = {});

// Minimum remaining edge count from the taint frontier at time t to b; 0 when
// b is already tainted, spm_infinity when no frontier vertex reaches b.
uint64_t spm(const HyperflowGraph& g, const std::string& a, const std::string& b, uint64_t t,
             const MetricsOptions& opts = {});

// Per-bit 0->1 label transitions of b inside [t1, t2). Initial taint at t=0
// counts as a transition at 0.
uint64_t slbt(const HyperflowGraph& g, const std::string& b, uint64_t t1, uint64_t t2);

// slbt over the window length, bits per timestep.
double lifr(const HyperflowGraph& g, const std::string& b, uint64_t t1, uint64_t t2);

// Design-wide slbt sum and its rate.
uint64_t gifr_count(const HyperflowGraph& g, uint64_t t1, uint64_t t2);
double gifr(const HyperflowGraph& g, uint64_t t1, uint64_t t2);

// Full per-target report; lifr entries are cumulative windows [0, f * end) for
// each configured fraction f.
MetricReport make_report(const HyperflowGraph& g, const std::string& asset,
                         const std::string& target, const MetricsOptions& opts = {});

std::vector<MetricReport> make_reports(const HyperflowGraph& g, const std::string& asset,
                                       const std::vector<std::string>& targets,
                                       const MetricsOptions& opts = {});

} // namespace hyperflow
