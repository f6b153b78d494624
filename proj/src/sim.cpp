//------------------------------------------------------------------------------
// sim.cpp
// Stimulus parsing, the reference simulator, and no-flow property checking
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/sim.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace hyperflow {

namespace {

//------------------------------------------------------------------------------
// Stimulus parsing
//------------------------------------------------------------------------------

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t)
        toks.push_back(t);
    return toks;
}

uint64_t parse_time(const std::string& tok, const SourceSite& site) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw SyntaxError("expected a decimal time, got `" + tok + "`", site);
    try {
        return std::stoull(tok);
    } catch (const std::exception&) {
        throw SyntaxError("time `" + tok + "` does not fit in 64 bits", site);
    }
}

uint32_t digit_value(char c) {
    if (c >= '0' && c <= '9')
        return static_cast<uint32_t>(c - '0');
    if (c >= 'a' && c <= 'f')
        return static_cast<uint32_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F')
        return static_cast<uint32_t>(c - 'A' + 10);
    return 0xFF;
}

uint32_t top_set_bit_plus_one(const Bits& b) {
    for (uint32_t i = b.width(); i > 0; --i)
        if (b.bit(i - 1))
            return i;
    return 0;
}

// Decimal or Verilog-style sized/based literal: 13, 8'hFF, 'b1010, 4'd12.
Bits parse_stim_value(const std::string& tok, const SourceSite& site, bool& sized) {
    sized = false;
    size_t tick = tok.find('\'');
    if (tick == std::string::npos) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw SyntaxError("expected a value, got `" + tok + "`", site);
        uint64_t v = 0;
        try {
            v = std::stoull(tok);
        } catch (const std::exception&) {
            throw SyntaxError("decimal value `" + tok + "` does not fit in 64 bits", site);
        }
        return Bits::from_uint(v, 64);
    }

    uint32_t size = 0;
    if (tick > 0) {
        std::string sz = tok.substr(0, tick);
        if (sz.find_first_not_of("0123456789") != std::string::npos)
            throw SyntaxError("bad literal size in `" + tok + "`", site);
        size = static_cast<uint32_t>(std::stoul(sz));
        if (size == 0 || size > 4096)
            throw SyntaxError("literal size out of range in `" + tok + "`", site);
        sized = true;
    }
    if (tick + 1 >= tok.size())
        throw SyntaxError("literal `" + tok + "` has no base", site);
    char base_ch = static_cast<char>(std::tolower(static_cast<unsigned char>(tok[tick + 1])));
    uint32_t base_bits = 0;
    uint32_t radix = 0;
    switch (base_ch) {
    case 'b': base_bits = 1; radix = 2; break;
    case 'o': base_bits = 3; radix = 8; break;
    case 'h': base_bits = 4; radix = 16; break;
    case 'd': base_bits = 0; radix = 10; break;
    default:
        throw SyntaxError("bad literal base in `" + tok + "`", site);
    }
    std::string digits = tok.substr(tick + 2);
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    if (digits.empty())
        throw SyntaxError("literal `" + tok + "` has no digits", site);

    if (radix == 10) {
        if (digits.find_first_not_of("0123456789") != std::string::npos)
            throw SyntaxError("bad decimal digits in `" + tok + "`", site);
        uint64_t v = 0;
        try {
            v = std::stoull(digits);
        } catch (const std::exception&) {
            throw SyntaxError("decimal value in `" + tok + "` does not fit in 64 bits", site);
        }
        return Bits::from_uint(v, sized ? size : 64).resized(sized ? size : 64);
    }

    uint32_t natural = static_cast<uint32_t>(digits.size()) * base_bits;
    uint32_t w = std::max(natural, sized ? size : natural);
    Bits v(w);
    for (char c : digits) {
        uint32_t dv = digit_value(c);
        if (dv >= radix)
            throw SyntaxError("bad digit `" + std::string(1, c) + "` in `" + tok + "`", site);
        v = v.shl(base_bits);
        v = v | Bits::from_uint(dv, w);
    }
    return sized ? v.resized(size) : v;
}

//------------------------------------------------------------------------------
// Engine
//------------------------------------------------------------------------------

struct WriteSpan {
    uint32_t sig = 0;
    uint32_t lo = 0;   // bit offset within the signal
    uint32_t width = 1;
};

void collect_write_spans(const Stmt& s, const Design& d, std::vector<WriteSpan>& out) {
    switch (s.kind) {
    case Stmt::Kind::Assign: {
        const Signal* sig = d.find(s.lhs.name);
        if (!sig)
            return;
        uint32_t idx = static_cast<uint32_t>(sig - d.signals.data());
        if (s.lhs.has_range)
            out.push_back({idx, s.lhs.lsb - sig->lsb, s.lhs.msb - s.lhs.lsb + 1});
        else
            out.push_back({idx, 0, sig->width});
        break;
    }
    case Stmt::Kind::If:
        for (const auto& st : s.then_body)
            collect_write_spans(*st, d, out);
        for (const auto& st : s.else_body)
            collect_write_spans(*st, d, out);
        break;
    case Stmt::Kind::Case:
        for (const auto& item : s.items)
            for (const auto& st : item.body)
                collect_write_spans(*st, d, out);
        break;
    }
}

class Engine {
public:
    Engine(const Design& d, const Stimulus& stim, const std::vector<TaintSeed>& seeds,
           const SimOptions& opts)
        : d_(d), stim_(stim), opts_(opts), env_(*this) {
        size_t n = d_.signals.size();
        val_.reserve(n);
        taint_.reserve(n);
        for (const auto& s : d_.signals) {
            val_.emplace_back(s.width);
            taint_.emplace_back(s.width);
        }
        seeded_.assign(n, false);
        seed_from_.assign(n, UINT64_MAX);
        for (const auto& seed : seeds) {
            const Signal* s = d_.find(seed.signal);
            if (!s)
                throw UnknownSignal(seed.signal);
            uint32_t i = index_of(*s);
            seed_from_[i] = std::min(seed_from_[i], seed.from_t);
        }

        for (const auto& p : d_.processes) {
            if (p.kind == ProcessDecl::Kind::Clocked) {
                clocked_.push_back(&p);
                std::vector<WriteSpan> spans;
                for (const auto& st : p.body)
                    collect_write_spans(*st, d_, spans);
                clocked_writes_.push_back(std::move(spans));
            } else {
                comb_.push_back(&p);
            }
        }
        clk_prev_.assign(clocked_.size(), 0);

        max_settle_ = opts_.max_settle ? opts_.max_settle
                                       : static_cast<uint64_t>(n) * static_cast<uint64_t>(n) + 4;
        validate();
        for (const auto& dr : stim_.drives)
            drives_by_t_[dr.t].push_back(&dr);
    }

    Trace run() {
        Trace trace;
        trace.design_name = d_.top;
        trace.end_time = stim_.duration;
        trace.signals.resize(d_.signals.size());
        for (size_t i = 0; i < d_.signals.size(); ++i) {
            trace.signals[i].name = d_.signals[i].name;
            trace.signals[i].width = d_.signals[i].width;
            trace.signals[i].lsb = d_.signals[i].lsb;
        }

        for (uint64_t t = 0; t < stim_.duration; ++t) {
            apply_clocks(t);
            apply_drives(t);
            activate_seeds(t);
            settle();
            clocked_phase(t);
            settle();
            record(t, trace);
            for (size_t p = 0; p < clocked_.size(); ++p)
                clk_prev_[p] = clock_bit(*clocked_[p]);
        }
        return trace;
    }

private:
    friend struct Env;
    struct Env final : EvalEnv {
        explicit Env(Engine& e) : e_(e) {}
        const Signal& signal(const std::string& name) const override {
            const Signal* s = e_.d_.find(name);
            if (!s)
                throw Error(ErrorCode::Internal, "signal `" + name + "` vanished at simulation");
            return *s;
        }
        const Bits& value_of(const Signal& s) const override { return e_.val_[e_.index_of(s)]; }
        const Bits& taint_of(const Signal& s) const override { return e_.taint_[e_.index_of(s)]; }
        Engine& e_;
    };

    const Design& d_;
    const Stimulus& stim_;
    SimOptions opts_;
    Env env_;

    std::vector<Bits> val_;
    std::vector<Bits> taint_;
    std::vector<bool> seeded_;
    std::vector<uint64_t> seed_from_;
    std::vector<const Process*> comb_;
    std::vector<const Process*> clocked_;
    std::vector<std::vector<WriteSpan>> clocked_writes_;
    std::vector<uint8_t> clk_prev_;
    std::map<uint64_t, std::vector<const Drive*>> drives_by_t_;
    uint64_t max_settle_ = 0;

    struct Nba {
        uint32_t sig = 0;
        uint32_t lo = 0;
        Bits value{1};
        Bits taint{1};
    };
    std::vector<Nba> nba_;
    bool in_clocked_ = false;

    uint32_t index_of(const Signal& s) const {
        return static_cast<uint32_t>(&s - d_.signals.data());
    }

    void validate() const {
        std::set<std::string> clock_names;
        for (const auto& c : stim_.clocks) {
            const Signal* s = d_.find(c.signal);
            if (!s)
                throw UnknownSignal("clock `" + c.signal + "` is not a design signal", c.site);
            if (s->width != 1)
                throw WidthMismatch("clock `" + c.signal + "` is not 1 bit wide", c.site);
            if (s->dir != Direction::Input)
                throw DriveConflict("clock `" + c.signal + "` is not a design input", c.site);
            if (!clock_names.insert(c.signal).second)
                throw DriveConflict("clock `" + c.signal + "` specified twice", c.site);
        }
        for (const auto& dr : stim_.drives) {
            const Signal* s = d_.find(dr.signal);
            if (!s)
                throw UnknownSignal("driven signal `" + dr.signal +
                                                 "` is not a design signal", dr.site);
            if (s->dir != Direction::Input)
                throw DriveConflict("`" + dr.signal + "` is not a design input", dr.site);
            if (clock_names.count(dr.signal))
                throw DriveConflict("`" + dr.signal + "` is already driven as a clock", dr.site);
            if (dr.t >= stim_.duration)
                throw TimeOutOfRange("drive time " + std::to_string(dr.t) +
                                                  " is past the run end " +
                                                  std::to_string(stim_.duration), dr.site);
            if (dr.sized && dr.value.width() != s->width)
                throw WidthMismatch("sized value is " +
                                                 std::to_string(dr.value.width()) +
                                                 " bits but `" + dr.signal + "` is " +
                                                 std::to_string(s->width), dr.site);
            if (!dr.sized && top_set_bit_plus_one(dr.value) > s->width)
                throw WidthMismatch("value does not fit in " +
                                                 std::to_string(s->width) + " bits of `" +
                                                 dr.signal + "`", dr.site);
        }
    }

    void store(uint32_t sig, uint32_t lo, const Bits& v, const Bits& t) {
        Bits nv = val_[sig];
        nv.deposit(lo, v);
        Bits nt = taint_[sig];
        nt.deposit(lo, t);
        if (seeded_[sig])
            nt = Bits::ones(nt.width());
        if (nv != val_[sig] || nt != taint_[sig]) {
            val_[sig] = std::move(nv);
            taint_[sig] = std::move(nt);
        }
    }

    void apply_clocks(uint64_t t) {
        for (const auto& c : stim_.clocks) {
            uint64_t half = c.period / 2;
            uint64_t bit = (t / half) % 2;
            const Signal& s = *d_.find(c.signal);
            store(index_of(s), 0, Bits::from_uint(bit, 1), Bits(1));
        }
    }

    void apply_drives(uint64_t t) {
        auto it = drives_by_t_.find(t);
        if (it == drives_by_t_.end())
            return;
        for (const Drive* dr : it->second) {
            const Signal& s = *d_.find(dr->signal);
            store(index_of(s), 0, dr->value.resized(s.width), Bits(s.width));
        }
    }

    void activate_seeds(uint64_t t) {
        for (size_t i = 0; i < seed_from_.size(); ++i) {
            if (t >= seed_from_[i] && !seeded_[i])
                seeded_[i] = true;
            if (seeded_[i])
                taint_[i] = Bits::ones(taint_[i].width());
        }
    }

    uint8_t clock_bit(const Process& p) const {
        const Signal* s = d_.find(p.clock);
        return s && val_[index_of(*s)].bit(0) ? 1 : 0;
    }

    void settle() {
        // Convergence compares end-of-sweep state, not individual writes: a
        // process may legitimately write a default and overwrite it within
        // one execution.
        uint64_t iter = 0;
        bool changed = true;
        while (changed) {
            std::vector<Bits> pre_val = val_;
            std::vector<Bits> pre_taint = taint_;
            for (const Process* p : comb_)
                for (const auto& st : p->body)
                    exec_stmt(*st, false);
            changed = val_ != pre_val || taint_ != pre_taint;
            if (++iter > max_settle_)
                throw NonConvergence("combinational settling did not converge after " +
                                     std::to_string(iter) + " sweeps");
        }
    }

    void clocked_phase(uint64_t) {
        nba_.clear();
        in_clocked_ = true;
        for (size_t p = 0; p < clocked_.size(); ++p) {
            uint8_t cur = clock_bit(*clocked_[p]);
            if (clk_prev_[p] == 0 && cur == 1)
                for (const auto& st : clocked_[p]->body)
                    exec_stmt(*st, false);
        }
        in_clocked_ = false;
        for (const auto& n : nba_)
            store(n.sig, n.lo, n.value, n.taint);

        // A tainted clock makes every write of its process secret-timed.
        for (size_t p = 0; p < clocked_.size(); ++p) {
            const Signal* clk = d_.find(clocked_[p]->clock);
            if (!clk || !taint_[index_of(*clk)].any())
                continue;
            for (const auto& span : clocked_writes_[p])
                store(span.sig, span.lo, val_[span.sig].slice(span.lo, span.lo + span.width - 1),
                      Bits::ones(span.width));
        }
    }

    void exec_stmt(const Stmt& s, bool guard_tainted) {
        switch (s.kind) {
        case Stmt::Kind::Assign: {
            const Signal& sig = env_.signal(s.lhs.name);
            uint32_t idx = index_of(sig);
            uint32_t lo = s.lhs.has_range ? s.lhs.lsb - sig.lsb : 0;
            uint32_t w = s.lhs.has_range ? s.lhs.msb - s.lhs.lsb + 1 : sig.width;
            EvalResult r = eval_expr(*s.rhs, w, env_, opts_.taint_mode);
            if (guard_tainted)
                r.taint = Bits::ones(w);
            if (s.nonblocking && in_clocked_)
                nba_.push_back({idx, lo, std::move(r.value), std::move(r.taint)});
            else
                store(idx, lo, r.value, r.taint);
            break;
        }
        case Stmt::Kind::If: {
            EvalResult c = eval_expr(*s.cond, 0, env_, opts_.taint_mode);
            bool gt = guard_tainted || c.taint.any();
            const auto& body = c.value.any() ? s.then_body : s.else_body;
            for (const auto& st : body)
                exec_stmt(*st, gt);
            break;
        }
        case Stmt::Kind::Case: {
            EvalResult sel = eval_expr(*s.sel, 0, env_, opts_.taint_mode);
            bool gt = guard_tainted || sel.taint.any();
            const CaseItem* hit = nullptr;
            const CaseItem* fallback = nullptr;
            for (const auto& item : s.items) {
                if (item.labels.empty()) {
                    fallback = &item;
                    continue;
                }
                for (const auto& lab : item.labels) {
                    EvalResult lv = eval_expr(*lab, 0, env_, opts_.taint_mode);
                    gt = gt || lv.taint.any();
                    if (sel.value.compare(lv.value) == 0) {
                        hit = &item;
                        break;
                    }
                }
                if (hit)
                    break;
            }
            const CaseItem* chosen = hit ? hit : fallback;
            if (chosen)
                for (const auto& st : chosen->body)
                    exec_stmt(*st, gt);
            break;
        }
        }
    }

    void record(uint64_t t, Trace& trace) {
        for (size_t i = 0; i < d_.signals.size(); ++i) {
            auto& samples = trace.signals[i].samples;
            if (samples.empty() || samples.back().val != val_[i] ||
                samples.back().val_taint != taint_[i])
                samples.push_back({t, val_[i], taint_[i]});
        }
    }
};

} // namespace

Stimulus parse_stimulus(const std::string& text, const std::string& path) {
    Stimulus stim;
    bool have_run = false;
    std::set<std::string> clock_names;

    std::istringstream in(text);
    std::string raw;
    uint32_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        SourceSite site{path, lineno, 1};
        size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        auto toks = split_tokens(raw);
        if (toks.empty())
            continue;

        if (toks[0] == "clock") {
            if (toks.size() != 4 || toks[2] != "period")
                throw SyntaxError("expected `clock <sig> period <n>`", site);
            ClockSpec c;
            c.signal = toks[1];
            c.period = parse_time(toks[3], site);
            c.site = site;
            if (c.period < 2 || c.period % 2 != 0)
                throw SyntaxError("clock period must be even and at least 2", site);
            if (!clock_names.insert(c.signal).second)
                throw SyntaxError("clock `" + c.signal + "` specified twice", site);
            stim.clocks.push_back(std::move(c));
        } else if (toks[0] == "at") {
            if (toks.size() != 6 || toks[2] != "drive" || toks[4] != "=")
                throw SyntaxError("expected `at <t> drive <sig> = <value>`", site);
            Drive dr;
            dr.t = parse_time(toks[1], site);
            dr.signal = toks[3];
            dr.value = parse_stim_value(toks[5], site, dr.sized);
            dr.site = site;
            stim.drives.push_back(std::move(dr));
        } else if (toks[0] == "run") {
            if (toks.size() != 2)
                throw SyntaxError("expected `run <n>`", site);
            if (have_run)
                throw SyntaxError("duplicate run directive", site);
            stim.duration = parse_time(toks[1], site);
            if (stim.duration == 0)
                throw SyntaxError("run length must be positive", site);
            have_run = true;
        } else {
            throw SyntaxError("unknown directive `" + toks[0] + "`", site);
        }
    }
    if (!have_run)
        throw SyntaxError("stimulus has no run directive", SourceSite{path, lineno ? lineno : 1, 1});
    return stim;
}

Trace simulate(const Design& design, const Stimulus& stim, const std::vector<TaintSeed>& seeds,
               const SimOptions& opts) {
    return Engine(design, stim, seeds, opts).run();
}

Trace simulate(const Design& design, const IftProperty& prop, const Stimulus& stim,
               const SimOptions& opts) {
    std::vector<TaintSeed> seeds;
    for (const auto& src : prop.sources) {
        const Signal* s = design.find(src);
        if (!s)
            throw UnknownSignal(src);
        uint64_t from_t = 0;
        if (s->dir == Direction::Input) {
            uint64_t first = UINT64_MAX;
            for (const auto& dr : stim.drives)
                if (dr.signal == src)
                    first = std::min(first, dr.t);
            if (first != UINT64_MAX)
                from_t = first;
        }
        seeds.push_back({src, from_t});
    }
    return simulate(design, stim, seeds, opts);
}

std::vector<Violation> check_property(const Trace& trace, const IftProperty& prop) {
    std::vector<Violation> out;
    for (const auto& sink : prop.sinks) {
        const SignalTrace* st = trace.find(sink);
        if (!st)
            throw UnknownSignal(sink);
        for (uint32_t b = 0; b < st->width; ++b) {
            bool prev = false;
            for (const auto& s : st->samples) {
                bool cur = s.val_taint.bit(b);
                if (cur && !prev) {
                    out.push_back({s.t, sink, st->lsb + b});
                    break;
                }
                prev = cur;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        if (a.t != b.t)
            return a.t < b.t;
        if (a.signal != b.signal)
            return a.signal < b.signal;
        return a.bit < b.bit;
    });
    return out;
}

} // namespace hyperflow
