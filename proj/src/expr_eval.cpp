//------------------------------------------------------------------------------
// expr_eval.cpp
// Width resolution and joint value/label evaluation
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/expr_eval.hpp"

#include <algorithm>

namespace hyperflow {

uint32_t self_width(const Expr& e, const std::function<uint32_t(const std::string&)>& width_of) {
    switch (e.kind) {
    case Expr::Kind::Ident:
        return width_of(e.ident);
    case Expr::Kind::Literal:
        return e.literal.width();
    case Expr::Kind::Select:
        return e.sel_is_range ? e.sel_msb - e.sel_lsb + 1 : 1;
    case Expr::Kind::Concat: {
        uint32_t w = 0;
        for (const auto& p : e.ops)
            w += self_width(*p, width_of);
        return w;
    }
    case Expr::Kind::Unary:
        switch (e.uop) {
        case UnaryOp::BitNot:
        case UnaryOp::Negate:
            return self_width(*e.ops[0], width_of);
        default:
            return 1;
        }
    case Expr::Kind::Binary:
        switch (e.bop) {
        case BinaryOp::And:
        case BinaryOp::Or:
        case BinaryOp::Xor:
        case BinaryOp::Add:
        case BinaryOp::Sub:
            return std::max(self_width(*e.ops[0], width_of), self_width(*e.ops[1], width_of));
        case BinaryOp::Shl:
        case BinaryOp::Shr:
            return self_width(*e.ops[0], width_of);
        default:
            return 1;  // comparisons and logical connectives
        }
    case Expr::Kind::Ternary:
        return std::max(self_width(*e.ops[1], width_of), self_width(*e.ops[2], width_of));
    }
    return 1;
}

namespace {

// Saturating shift amount: anything with a bit at position >= 64 shifts
// everything out of any practical width.
uint64_t shift_amount(const Bits& v) {
    for (uint32_t i = 64; i < v.width(); ++i)
        if (v.bit(i))
            return ~uint64_t(0);
    return v.low64();
}

class Evaluator {
public:
    Evaluator(const EvalEnv& env, TaintMode mode) : env_(env), mode_(mode) {}

    uint32_t sw(const Expr& e) const {
        return self_width(e, [this](const std::string& n) { return env_.signal(n).width; });
    }

    // Full result at exactly width w.
    EvalResult at(const Expr& e, uint32_t w) {
        switch (e.kind) {
        case Expr::Kind::Ident: {
            const Signal& s = env_.signal(e.ident);
            return {env_.value_of(s).resized(w), env_.taint_of(s).resized(w)};
        }
        case Expr::Kind::Literal:
            return {e.literal.resized(w), Bits(w)};
        case Expr::Kind::Select: {
            const Signal& s = env_.signal(e.ident);
            uint32_t lo = (e.sel_is_range ? e.sel_lsb : e.sel_msb) - s.lsb;
            uint32_t hi = e.sel_msb - s.lsb;
            if (hi >= s.width)
                throw Error(ErrorCode::Internal,
                            "select outside '" + s.name + "' after validation", e.site);
            return {env_.value_of(s).slice(lo, hi).resized(w),
                    env_.taint_of(s).slice(lo, hi).resized(w)};
        }
        case Expr::Kind::Concat: {
            EvalResult acc = at(*e.ops[0], sw(*e.ops[0]));
            for (size_t i = 1; i < e.ops.size(); ++i) {
                EvalResult part = at(*e.ops[i], sw(*e.ops[i]));
                acc.value = Bits::concat(acc.value, part.value);
                acc.taint = Bits::concat(acc.taint, part.taint);
            }
            return {acc.value.resized(w), acc.taint.resized(w)};
        }
        case Expr::Kind::Unary:
            return unary(e, w);
        case Expr::Kind::Binary:
            return binary(e, w);
        case Expr::Kind::Ternary:
            return ternary(e, w);
        }
        throw Error(ErrorCode::Internal, "unreachable expression kind", e.site);
    }

private:
    const EvalEnv& env_;
    TaintMode mode_;

    static EvalResult bool_result(bool v, bool tainted, uint32_t w) {
        EvalResult r{Bits::from_uint(v ? 1 : 0, 1), tainted ? Bits::ones(1) : Bits(1)};
        return {r.value.resized(w), r.taint.resized(w)};
    }

    EvalResult unary(const Expr& e, uint32_t w) {
        switch (e.uop) {
        case UnaryOp::BitNot: {
            EvalResult x = at(*e.ops[0], w);
            return {~x.value, x.taint};
        }
        case UnaryOp::Negate: {
            EvalResult x = at(*e.ops[0], w);
            return {x.value.negate(), x.taint.any() ? Bits::ones(w) : Bits(w)};
        }
        case UnaryOp::LogicNot: {
            EvalResult x = at(*e.ops[0], sw(*e.ops[0]));
            return bool_result(!x.value.any(), x.taint.any(), w);
        }
        case UnaryOp::ReduceAnd: {
            EvalResult x = at(*e.ops[0], sw(*e.ops[0]));
            return bool_result(x.value.all_ones(), x.taint.any(), w);
        }
        case UnaryOp::ReduceOr: {
            EvalResult x = at(*e.ops[0], sw(*e.ops[0]));
            return bool_result(x.value.any(), x.taint.any(), w);
        }
        case UnaryOp::ReduceXor: {
            EvalResult x = at(*e.ops[0], sw(*e.ops[0]));
            bool parity = false;
            for (uint32_t i = 0; i < x.value.width(); ++i)
                parity ^= x.value.bit(i);
            return bool_result(parity, x.taint.any(), w);
        }
        }
        throw Error(ErrorCode::Internal, "unreachable unary op", e.site);
    }

    EvalResult binary(const Expr& e, uint32_t w) {
        switch (e.bop) {
        case BinaryOp::And: {
            EvalResult a = at(*e.ops[0], w), b = at(*e.ops[1], w);
            return {a.value & b.value, a.taint | b.taint};
        }
        case BinaryOp::Or: {
            EvalResult a = at(*e.ops[0], w), b = at(*e.ops[1], w);
            return {a.value | b.value, a.taint | b.taint};
        }
        case BinaryOp::Xor: {
            EvalResult a = at(*e.ops[0], w), b = at(*e.ops[1], w);
            return {a.value ^ b.value, a.taint | b.taint};
        }
        case BinaryOp::Add: {
            EvalResult a = at(*e.ops[0], w), b = at(*e.ops[1], w);
            bool t = a.taint.any() || b.taint.any();
            return {a.value.add(b.value), t ? Bits::ones(w) : Bits(w)};
        }
        case BinaryOp::Sub: {
            EvalResult a = at(*e.ops[0], w), b = at(*e.ops[1], w);
            bool t = a.taint.any() || b.taint.any();
            return {a.value.sub(b.value), t ? Bits::ones(w) : Bits(w)};
        }
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: {
            uint32_t ow = std::max(sw(*e.ops[0]), sw(*e.ops[1]));
            EvalResult a = at(*e.ops[0], ow), b = at(*e.ops[1], ow);
            int c = a.value.compare(b.value);
            bool v = false;
            switch (e.bop) {
            case BinaryOp::Eq: v = c == 0; break;
            case BinaryOp::Ne: v = c != 0; break;
            case BinaryOp::Lt: v = c < 0; break;
            case BinaryOp::Le: v = c <= 0; break;
            case BinaryOp::Gt: v = c > 0; break;
            default: v = c >= 0; break;
            }
            return bool_result(v, a.taint.any() || b.taint.any(), w);
        }
        case BinaryOp::Shl:
        case BinaryOp::Shr: {
            EvalResult a = at(*e.ops[0], w);
            EvalResult n = at(*e.ops[1], sw(*e.ops[1]));
            uint64_t amt = shift_amount(n.value);
            Bits value = e.bop == BinaryOp::Shl ? a.value.shl(amt) : a.value.shr(amt);
            if (n.taint.any())
                return {std::move(value), Bits::ones(w)};
            Bits taint = e.bop == BinaryOp::Shl ? a.taint.shl(amt) : a.taint.shr(amt);
            return {std::move(value), std::move(taint)};
        }
        case BinaryOp::LogicAnd:
        case BinaryOp::LogicOr: {
            EvalResult a = at(*e.ops[0], sw(*e.ops[0]));
            EvalResult b = at(*e.ops[1], sw(*e.ops[1]));
            bool v = e.bop == BinaryOp::LogicAnd ? (a.value.any() && b.value.any())
                                                 : (a.value.any() || b.value.any());
            return bool_result(v, a.taint.any() || b.taint.any(), w);
        }
        }
        throw Error(ErrorCode::Internal, "unreachable binary op", e.site);
    }

    EvalResult ternary(const Expr& e, uint32_t w) {
        EvalResult c = at(*e.ops[0], sw(*e.ops[0]));
        EvalResult t = at(*e.ops[1], w);
        EvalResult f = at(*e.ops[2], w);
        EvalResult& sel = c.value.any() ? t : f;
        if (!c.taint.any())
            return sel;
        if (mode_ == TaintMode::Conservative)
            return {sel.value, Bits::ones(w)};
        // A bit stays clean only when both branches agree in value and
        // neither branch labels it.
        return {sel.value, t.taint | f.taint | (t.value ^ f.value)};
    }
};

} // namespace

EvalResult eval_expr(const Expr& e, uint32_t ctx_width, const EvalEnv& env, TaintMode mode) {
    Evaluator ev(env, mode);
    uint32_t sw = ev.sw(e);
    uint32_t w = ctx_width == 0 ? sw : std::max(ctx_width, sw);
    EvalResult r = ev.at(e, w);
    if (ctx_width != 0 && w != ctx_width) {
        r.value = r.value.resized(ctx_width);
        r.taint = r.taint.resized(ctx_width);
    }
    return r;
}

Bits eval_value(const Expr& e, uint32_t ctx_width, const EvalEnv& env) {
    return eval_expr(e, ctx_width, env, TaintMode::Conservative).value;
}

bool eval_truth(const Expr& e, const EvalEnv& env) {
    return eval_expr(e, 0, env, TaintMode::Conservative).value.any();
}

} // namespace hyperflow
