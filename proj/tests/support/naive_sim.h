//------------------------------------------------------------------------------
// naive_sim.h
// Independent values-only cycle interpreter used as a simulation oracle.
// Evaluation and scheduling are reimplemented from scratch over plain
// uint64_t state; only the parsed design and stimulus structures are shared
// with the library.  Total widths must stay below 64 bits.
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperflow/ast.hpp"
#include "hyperflow/elaborate.hpp"
#include "hyperflow/sim.hpp"
#include "hyperflow/trace.hpp"

namespace testsupport {

namespace naive {

inline uint64_t mask_of(uint32_t w) {
    if (w >= 64)
        return ~uint64_t(0);
    return (uint64_t(1) << w) - 1;
}

class Machine {
  public:
    Machine(const hyperflow::Design& d, const hyperflow::Stimulus& stim) : d_(d), stim_(stim) {
        val_.assign(d_.signals.size(), 0);
        for (const auto& p : d_.processes) {
            if (p.kind == hyperflow::ProcessDecl::Kind::Clocked)
                clocked_.push_back(&p);
            else
                comb_.push_back(&p);
        }
        clk_prev_.assign(clocked_.size(), 0);
        for (const auto& dr : stim_.drives)
            drives_by_t_[dr.t].push_back(&dr);
    }

    // values[signal][t] over t in [0, duration)
    std::vector<std::vector<uint64_t>> run() {
        std::vector<std::vector<uint64_t>> out(d_.signals.size());
        for (uint64_t t = 0; t < stim_.duration; ++t) {
            for (const auto& c : stim_.clocks)
                set_full(id(c.signal), (t / (c.period / 2)) % 2);
            auto it = drives_by_t_.find(t);
            if (it != drives_by_t_.end())
                for (const auto* dr : it->second)
                    set_full(id(dr->signal), dr->value.resized(64).low64());
            settle();
            clocked_round();
            settle();
            for (size_t i = 0; i < val_.size(); ++i)
                out[i].push_back(val_[i]);
            for (size_t p = 0; p < clocked_.size(); ++p)
                clk_prev_[p] = clock_now(p);
        }
        return out;
    }

  private:
    const hyperflow::Design& d_;
    const hyperflow::Stimulus& stim_;
    std::vector<uint64_t> val_;
    std::vector<const hyperflow::Process*> comb_;
    std::vector<const hyperflow::Process*> clocked_;
    std::vector<uint8_t> clk_prev_;
    std::unordered_map<uint64_t, std::vector<const hyperflow::Drive*>> drives_by_t_;
    bool changed_ = false;

    struct Nba {
        size_t sig;
        uint32_t lo;
        uint32_t width;
        uint64_t value;
    };

    size_t id(const std::string& name) const {
        auto it = d_.index.find(name);
        if (it == d_.index.end())
            throw std::runtime_error("naive: unknown signal " + name);
        return it->second;
    }

    uint8_t clock_now(size_t p) const {
        return static_cast<uint8_t>(val_[id(clocked_[p]->clock)] & 1);
    }

    void set_full(size_t i, uint64_t v) {
        uint64_t nv = v & mask_of(d_.signals[i].width);
        if (nv != val_[i]) {
            val_[i] = nv;
            changed_ = true;
        }
    }

    void set_slice(size_t i, uint32_t lo, uint32_t w, uint64_t v) {
        uint64_t m = mask_of(w) << lo;
        uint64_t nv = (val_[i] & ~m) | ((v << lo) & m);
        if (nv != val_[i]) {
            val_[i] = nv;
            changed_ = true;
        }
    }

    uint32_t self_w(const hyperflow::Expr& e) const {
        using K = hyperflow::Expr::Kind;
        using U = hyperflow::UnaryOp;
        using B = hyperflow::BinaryOp;
        switch (e.kind) {
        case K::Ident:
            return d_.signals[id(e.ident)].width;
        case K::Literal:
            return e.literal.width();
        case K::Select:
            return e.sel_is_range ? e.sel_msb - e.sel_lsb + 1 : 1;
        case K::Concat: {
            uint32_t w = 0;
            for (const auto& p : e.ops)
                w += self_w(*p);
            return w;
        }
        case K::Unary:
            return (e.uop == U::BitNot || e.uop == U::Negate) ? self_w(*e.ops[0]) : 1;
        case K::Binary:
            switch (e.bop) {
            case B::And:
            case B::Or:
            case B::Xor:
            case B::Add:
            case B::Sub:
                return std::max(self_w(*e.ops[0]), self_w(*e.ops[1]));
            case B::Shl:
            case B::Shr:
                return self_w(*e.ops[0]);
            default:
                return 1;
            }
        case K::Ternary:
            return std::max(self_w(*e.ops[1]), self_w(*e.ops[2]));
        }
        return 1;
    }

    // Value of e computed at exactly width w.
    uint64_t at(const hyperflow::Expr& e, uint32_t w) const {
        using K = hyperflow::Expr::Kind;
        using U = hyperflow::UnaryOp;
        using B = hyperflow::BinaryOp;
        if (w > 63)
            throw std::runtime_error("naive: width over 63");
        uint64_t m = mask_of(w);
        switch (e.kind) {
        case K::Ident:
            return val_[id(e.ident)] & m;
        case K::Literal:
            return e.literal.resized(64).low64() & m;
        case K::Select: {
            const auto& s = d_.signals[id(e.ident)];
            uint32_t lo = (e.sel_is_range ? e.sel_lsb : e.sel_msb) - s.lsb;
            uint32_t hi = e.sel_msb - s.lsb;
            uint64_t v = (val_[id(e.ident)] >> lo) & mask_of(hi - lo + 1);
            return v & m;
        }
        case K::Concat: {
            uint64_t acc = 0;
            for (const auto& p : e.ops) {
                uint32_t pw = self_w(*p);
                acc = (acc << pw) | at(*p, pw);
            }
            return acc & m;
        }
        case K::Unary:
            switch (e.uop) {
            case U::BitNot:
                return ~at(*e.ops[0], w) & m;
            case U::Negate:
                return (~at(*e.ops[0], w) + 1) & m;
            case U::LogicNot:
                return (at(*e.ops[0], self_w(*e.ops[0])) == 0 ? 1u : 0u) & m;
            case U::ReduceAnd: {
                uint32_t ow = self_w(*e.ops[0]);
                return (at(*e.ops[0], ow) == mask_of(ow) ? 1u : 0u) & m;
            }
            case U::ReduceOr:
                return (at(*e.ops[0], self_w(*e.ops[0])) != 0 ? 1u : 0u) & m;
            case U::ReduceXor: {
                uint64_t v = at(*e.ops[0], self_w(*e.ops[0]));
                return static_cast<uint64_t>(__builtin_parityll(v)) & m;
            }
            }
            return 0;
        case K::Binary: {
            switch (e.bop) {
            case B::And:
                return (at(*e.ops[0], w) & at(*e.ops[1], w)) & m;
            case B::Or:
                return (at(*e.ops[0], w) | at(*e.ops[1], w)) & m;
            case B::Xor:
                return (at(*e.ops[0], w) ^ at(*e.ops[1], w)) & m;
            case B::Add:
                return (at(*e.ops[0], w) + at(*e.ops[1], w)) & m;
            case B::Sub:
                return (at(*e.ops[0], w) - at(*e.ops[1], w)) & m;
            case B::Eq:
            case B::Ne:
            case B::Lt:
            case B::Le:
            case B::Gt:
            case B::Ge: {
                uint32_t ow = std::max(self_w(*e.ops[0]), self_w(*e.ops[1]));
                uint64_t a = at(*e.ops[0], ow), b = at(*e.ops[1], ow);
                bool v = false;
                switch (e.bop) {
                case B::Eq: v = a == b; break;
                case B::Ne: v = a != b; break;
                case B::Lt: v = a < b; break;
                case B::Le: v = a <= b; break;
                case B::Gt: v = a > b; break;
                default: v = a >= b; break;
                }
                return (v ? 1u : 0u) & m;
            }
            case B::Shl:
            case B::Shr: {
                uint64_t a = at(*e.ops[0], w);
                uint64_t amt = at(*e.ops[1], self_w(*e.ops[1]));
                if (amt >= 64)
                    return 0;
                return (e.bop == B::Shl ? (a << amt) : (a >> amt)) & m;
            }
            case B::LogicAnd:
                return ((at(*e.ops[0], self_w(*e.ops[0])) != 0 &&
                         at(*e.ops[1], self_w(*e.ops[1])) != 0)
                            ? 1u
                            : 0u) &
                       m;
            case B::LogicOr:
                return ((at(*e.ops[0], self_w(*e.ops[0])) != 0 ||
                         at(*e.ops[1], self_w(*e.ops[1])) != 0)
                            ? 1u
                            : 0u) &
                       m;
            }
            return 0;
        }
        case K::Ternary:
            return at(*(at(*e.ops[0], self_w(*e.ops[0])) != 0 ? e.ops[1] : e.ops[2]), w);
        }
        return 0;
    }

    // Assignment-context evaluation: compute at max(ctx, self) then truncate.
    uint64_t eval_ctx(const hyperflow::Expr& e, uint32_t ctx) const {
        uint32_t w = std::max(ctx, self_w(e));
        return at(e, w) & mask_of(ctx);
    }

    void exec(const hyperflow::Stmt& s, std::vector<Nba>* nba) {
        using K = hyperflow::Stmt::Kind;
        switch (s.kind) {
        case K::Assign: {
            size_t i = id(s.lhs.name);
            const auto& sig = d_.signals[i];
            uint32_t lo = 0, tw = sig.width;
            if (s.lhs.has_range) {
                lo = s.lhs.lsb - sig.lsb;
                tw = s.lhs.msb - s.lhs.lsb + 1;
            }
            uint64_t v = eval_ctx(*s.rhs, tw);
            if (s.nonblocking && nba)
                nba->push_back({i, lo, tw, v});
            else
                set_slice(i, lo, tw, v);
            break;
        }
        case K::If: {
            bool c = at(*s.cond, self_w(*s.cond)) != 0;
            for (const auto& st : c ? s.then_body : s.else_body)
                exec(*st, nba);
            break;
        }
        case K::Case: {
            uint64_t sv = at(*s.sel, self_w(*s.sel));
            const hyperflow::CaseItem* hit = nullptr;
            const hyperflow::CaseItem* fallback = nullptr;
            for (const auto& item : s.items) {
                if (item.labels.empty()) {
                    fallback = &item;
                    continue;
                }
                for (const auto& lab : item.labels) {
                    uint32_t ow = std::max(self_w(*s.sel), self_w(*lab));
                    if ((sv & mask_of(ow)) == at(*lab, ow)) {
                        hit = &item;
                        break;
                    }
                }
                if (hit)
                    break;
            }
            const hyperflow::CaseItem* chosen = hit ? hit : fallback;
            if (chosen)
                for (const auto& st : chosen->body)
                    exec(*st, nba);
            break;
        }
        }
    }

    void settle() {
        // Fixpoint means the state at the end of a sweep stopped changing;
        // intermediate default-then-overwrite writes do not count.
        size_t n = d_.signals.size();
        uint64_t bound = static_cast<uint64_t>(n) * n + 8;
        for (uint64_t sweep = 0; sweep < bound; ++sweep) {
            std::vector<uint64_t> pre = val_;
            for (const auto* p : comb_)
                for (const auto& st : p->body)
                    exec(*st, nullptr);
            if (val_ == pre)
                return;
        }
        throw std::runtime_error("naive: no combinational fixpoint");
    }

    void clocked_round() {
        std::vector<Nba> nba;
        for (size_t p = 0; p < clocked_.size(); ++p) {
            if (clk_prev_[p] == 0 && clock_now(p) == 1)
                for (const auto& st : clocked_[p]->body)
                    exec(*st, &nba);
        }
        for (const auto& w : nba)
            set_slice(w.sig, w.lo, w.width, w.value);
    }
};

} // namespace naive

inline std::vector<std::vector<uint64_t>> naive_values(const hyperflow::Design& d,
                                                       const hyperflow::Stimulus& stim) {
    return naive::Machine(d, stim).run();
}

// Expands a change-list trace into dense per-timestep values, signal order as
// in the trace.  Widths must fit in 64 bits.
inline std::vector<std::vector<uint64_t>> dense_values(const hyperflow::Trace& tr) {
    std::vector<std::vector<uint64_t>> out(tr.signals.size());
    for (size_t i = 0; i < tr.signals.size(); ++i) {
        const auto& st = tr.signals[i];
        uint64_t cur = 0;
        size_t k = 0;
        for (uint64_t t = 0; t < tr.end_time; ++t) {
            while (k < st.samples.size() && st.samples[k].t == t) {
                cur = st.samples[k].val.resized(64).low64();
                ++k;
            }
            out[i].push_back(cur);
        }
    }
    return out;
}

} // namespace testsupport
