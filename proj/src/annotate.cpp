//------------------------------------------------------------------------------
// annotate.cpp
// Trace-to-graph mapping: vertex samples and edge activation windows
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/annotate.hpp"

#include <algorithm>
#include <set>

#include "hyperflow/expr_eval.hpp"
#include "hyperflow/flow.hpp"

namespace hyperflow {

namespace {

// Evaluation environment that reads vertex samples at a fixed query time,
// last-known-value between change points.
class SampleEnv final : public EvalEnv {
public:
    SampleEnv(const HyperflowGraph& g, const std::vector<Signal>& mirror)
        : g_(g), mirror_(mirror), cache_(g.vertices.size()) {}

    void set_time(uint64_t t) {
        t_ = t;
        for (auto& c : cache_)
            c.valid = false;
    }

    const Signal& signal(const std::string& name) const override {
        return mirror_[g_.vertex_id(name)];
    }

    const Bits& value_of(const Signal& s) const override { return lookup(index_of(s)).val; }
    const Bits& taint_of(const Signal& s) const override { return lookup(index_of(s)).taint; }

private:
    struct Cached {
        bool valid = false;
        Bits val{1};
        Bits taint{1};
    };

    const HyperflowGraph& g_;
    const std::vector<Signal>& mirror_;
    mutable std::vector<Cached> cache_;
    uint64_t t_ = 0;

    uint32_t index_of(const Signal& s) const {
        return static_cast<uint32_t>(&s - mirror_.data());
    }

    const Cached& lookup(uint32_t v) const {
        Cached& c = cache_[v];
        if (!c.valid) {
            const auto& samples = g_.vertices[v].samples;
            // Last sample with sample.t <= t_.
            auto it = std::upper_bound(samples.begin(), samples.end(), t_,
                                       [](uint64_t t, const VertexSample& s) { return t < s.t; });
            if (it == samples.begin()) {
                c.val = Bits(g_.vertices[v].width);
                c.taint = Bits(g_.vertices[v].width);
            } else {
                c.val = std::prev(it)->val;
                c.taint = std::prev(it)->val_taint;
            }
            c.valid = true;
        }
        return c;
    }
};

bool predicate_true(const Predicate& p, const EvalEnv& env) {
    for (const auto& term : p.terms)
        if (!eval_truth(*term, env))
            return false;
    return true;
}

} // namespace

std::vector<std::string> annotate_graph(HyperflowGraph& g, const Trace& func,
                                        const Trace& taint) {
    if (func.end_time != taint.end_time)
        throw TimebaseMismatch("functional trace ends at " + std::to_string(func.end_time) +
                               " but taint trace ends at " + std::to_string(taint.end_time));
    if (func.timescale != taint.timescale)
        throw TimebaseMismatch("functional trace timescale `" + func.timescale +
                               "` differs from taint trace timescale `" + taint.timescale + "`");

    std::vector<std::string> warnings;
    const bool same = &func == &taint;

    // Vertex samples: merged change points, value plane from func, label plane
    // from taint.
    for (auto& v : g.vertices) {
        v.samples.clear();
        const SignalTrace* fs = func.find(v.name);
        const SignalTrace* ts = same ? fs : taint.find(v.name);
        if (!fs && !ts) {
            warnings.push_back("signal `" + v.name + "` appears in no trace");
            continue;
        }
        if (fs && fs->width != v.width)
            throw WidthMismatch("trace carries `" + v.name + "` as " +
                                std::to_string(fs->width) + " bits but the vertex is " +
                                std::to_string(v.width));
        if (ts && ts->width != v.width)
            throw WidthMismatch("taint trace carries `" + v.name + "` as " +
                                std::to_string(ts->width) + " bits but the vertex is " +
                                std::to_string(v.width));
        if (!fs)
            warnings.push_back("signal `" + v.name + "` has no functional samples");
        if (!ts)
            warnings.push_back("signal `" + v.name + "` has no taint samples");

        size_t fi = 0, ti = 0;
        size_t fn = fs ? fs->samples.size() : 0;
        size_t tn = ts ? ts->samples.size() : 0;
        Bits cur_val(v.width);
        Bits cur_taint(v.width);
        while (fi < fn || ti < tn) {
            uint64_t ft = fi < fn ? fs->samples[fi].t : UINT64_MAX;
            uint64_t tt = ti < tn ? ts->samples[ti].t : UINT64_MAX;
            uint64_t t = std::min(ft, tt);
            if (ft == t) {
                cur_val = fs->samples[fi].val;
                ++fi;
            }
            if (tt == t) {
                cur_taint = ts->samples[ti].val_taint;
                ++ti;
            }
            if (v.samples.empty() || v.samples.back().val != cur_val ||
                v.samples.back().val_taint != cur_taint)
                v.samples.push_back({t, cur_val, cur_taint});
        }
        if (v.samples.empty())
            v.samples.push_back({0, cur_val, cur_taint});
    }

    // Edge windows: maximal predicate-true intervals over the union of change
    // points of the signals the predicate reads.
    std::vector<Signal> mirror;
    mirror.reserve(g.vertices.size());
    for (const auto& v : g.vertices) {
        Signal s;
        s.name = v.name;
        s.width = v.width;
        s.lsb = v.lsb;
        s.dir = v.dir;
        s.is_clock = v.is_clock;
        mirror.push_back(std::move(s));
    }
    SampleEnv env(g, mirror);

    for (auto& e : g.edges) {
        e.windows.clear();
        if (e.predicate.always_true()) {
            e.windows.push_back({0, func.end_time, true});
            continue;
        }

        // Change points of every signal the predicate reads, plus t=0.
        std::set<std::string> reads;
        for (const auto& term : e.predicate.terms)
            for (const auto& name : expr_reads(*term))
                reads.insert(name);
        bool missing = false;
        std::set<uint64_t> points{0};
        for (const auto& name : reads) {
            const Vertex* rv = g.find_vertex(name);
            if (!rv || rv->samples.empty()) {
                missing = true;
                break;
            }
            for (const auto& s : rv->samples)
                points.insert(s.t);
        }
        if (missing)
            continue;  // cannot certify any window; the warning is already out

        bool open = false;
        uint64_t start = 0;
        for (uint64_t t : points) {
            if (t >= func.end_time)
                break;
            env.set_time(t);
            bool truth = predicate_true(e.predicate, env);
            if (truth && !open) {
                open = true;
                start = t;
            } else if (!truth && open) {
                e.windows.push_back({start, t, false});
                open = false;
            }
        }
        if (open)
            e.windows.push_back({start, func.end_time, true});
    }

    g.trace_end = func.end_time;
    std::string base = func.design_name.empty() ? "trace" : func.design_name;
    g.trace_id = base + "@" + std::to_string(func.end_time);
    return warnings;
}

std::vector<std::string> annotate_graph(HyperflowGraph& g, const Trace& both) {
    return annotate_graph(g, both, both);
}

} // namespace hyperflow
