//------------------------------------------------------------------------------
// flow.cpp
// Statement walk that turns guarded assignments into flow records
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/flow.hpp"

#include <algorithm>
#include <set>

namespace hyperflow {

namespace {

bool predicate_atom(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Ident:
    case Expr::Kind::Literal:
    case Expr::Kind::Select:
    case Expr::Kind::Concat:
        return true;
    default:
        return false;
    }
}

} // namespace

std::string Predicate::str() const {
    if (terms.empty())
        return "1";
    std::string s;
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i)
            s += " && ";
        if (predicate_atom(*terms[i]))
            s += print_expr(*terms[i]);
        else
            s += "(" + print_expr(*terms[i]) + ")";
    }
    return s;
}

std::vector<std::string> expr_reads(const Expr& e) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::vector<const Expr*> work{&e};
    // Depth-first, left to right, keeping first-appearance order.
    while (!work.empty()) {
        const Expr* cur = work.back();
        work.pop_back();
        switch (cur->kind) {
        case Expr::Kind::Ident:
        case Expr::Kind::Select:
            if (seen.insert(cur->ident).second)
                out.push_back(cur->ident);
            break;
        default:
            for (auto it = cur->ops.rbegin(); it != cur->ops.rend(); ++it)
                work.push_back(it->get());
            break;
        }
    }
    return out;
}

namespace {

class FlowWalker {
public:
    FlowWalker(const Design& design, const Process& proc, std::vector<FlowRecord>& out)
        : design_(design), proc_(proc), out_(out) {}

    void run() {
        for (const auto& st : proc_.body)
            walk(*st);
        if (proc_.kind == ProcessDecl::Kind::Clocked)
            emit_sensitivity();
    }

private:
    const Design& design_;
    const Process& proc_;
    std::vector<FlowRecord>& out_;
    std::vector<ExprPtr> guards_;
    std::set<std::string> written_;

    EdgeTiming timing() const {
        return proc_.kind == ProcessDecl::Kind::Clocked ? EdgeTiming::Clocked
                                                        : EdgeTiming::Continuous;
    }

    std::pair<uint32_t, uint32_t> target_range(const LValue& lv) const {
        if (lv.has_range)
            return {lv.lsb, lv.msb};
        const Signal* s = design_.find(lv.name);
        uint32_t lsb = s ? s->lsb : 0;
        uint32_t width = s ? s->width : 1;
        return {lsb, lsb + width - 1};
    }

    void emit(const std::string& tail, const std::string& head, FlowKind kind,
              const SourceSite& site, uint32_t bit_lo, uint32_t bit_hi) {
        FlowRecord r;
        r.tail = tail;
        r.head = head;
        r.kind = kind;
        r.timing = timing();
        r.clock = proc_.kind == ProcessDecl::Kind::Clocked ? proc_.clock : std::string();
        r.predicate.terms = guards_;
        r.site = site;
        r.bit_lo = bit_lo;
        r.bit_hi = bit_hi;
        out_.push_back(std::move(r));
    }

    void walk(const Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::Assign: {
            written_.insert(s.lhs.name);
            auto [lo, hi] = target_range(s.lhs);
            for (const auto& tail : expr_reads(*s.rhs))
                emit(tail, s.lhs.name, FlowKind::Explicit, s.site, lo, hi);
            // Every signal any enclosing guard reads leaks into the target
            // through the decision to execute this assignment.
            std::vector<std::string> guard_tails;
            std::set<std::string> seen;
            for (const auto& term : guards_)
                for (const auto& name : expr_reads(*term))
                    if (seen.insert(name).second)
                        guard_tails.push_back(name);
            for (const auto& tail : guard_tails)
                emit(tail, s.lhs.name, FlowKind::Implicit, s.site, lo, hi);
            break;
        }
        case Stmt::Kind::If: {
            guards_.push_back(s.cond);
            for (const auto& st : s.then_body)
                walk(*st);
            guards_.pop_back();
            if (!s.else_body.empty()) {
                guards_.push_back(Expr::make_unary(UnaryOp::LogicNot, s.cond, s.cond->site));
                for (const auto& st : s.else_body)
                    walk(*st);
                guards_.pop_back();
            }
            break;
        }
        case Stmt::Kind::Case: {
            // Arm k executes when its own labels match and no earlier arm
            // matched; the accumulated negations encode case priority.
            std::vector<ExprPtr> prior;
            for (const auto& item : s.items) {
                ExprPtr match;
                if (!item.labels.empty()) {
                    for (const auto& label : item.labels) {
                        ExprPtr eq = Expr::make_binary(BinaryOp::Eq, s.sel, label, item.site);
                        match = match ? Expr::make_binary(BinaryOp::LogicOr, match, eq, item.site)
                                      : eq;
                    }
                }
                size_t pushed = 0;
                for (const auto& p : prior) {
                    guards_.push_back(Expr::make_unary(UnaryOp::LogicNot, p, item.site));
                    ++pushed;
                }
                if (match) {
                    guards_.push_back(match);
                    ++pushed;
                    prior.push_back(match);
                }
                for (const auto& st : item.body)
                    walk(*st);
                while (pushed--)
                    guards_.pop_back();
            }
            break;
        }
        }
    }

    void emit_sensitivity() {
        for (const auto& head : written_) {
            FlowRecord r;
            r.tail = proc_.clock;
            r.head = head;
            r.kind = FlowKind::Implicit;
            r.timing = EdgeTiming::Clocked;
            r.clock_induced = true;
            r.clock = proc_.clock;
            r.site = proc_.site;
            const Signal* s = design_.find(head);
            r.bit_lo = s ? s->lsb : 0;
            r.bit_hi = s ? s->lsb + s->width - 1 : 0;
            out_.push_back(std::move(r));
        }
    }
};

int site_order(const SourceSite& a, const SourceSite& b) {
    if (a.file != b.file)
        return a.file < b.file ? -1 : 1;
    if (a.line != b.line)
        return a.line < b.line ? -1 : 1;
    if (a.col != b.col)
        return a.col < b.col ? -1 : 1;
    return 0;
}

} // namespace

std::vector<FlowRecord> extract_flows(const Design& design) {
    std::vector<FlowRecord> out;
    for (const auto& proc : design.processes)
        FlowWalker(design, proc, out).run();

    std::stable_sort(out.begin(), out.end(), [](const FlowRecord& a, const FlowRecord& b) {
        int s = site_order(a.site, b.site);
        if (s != 0)
            return s < 0;
        if (a.tail != b.tail)
            return a.tail < b.tail;
        if (a.head != b.head)
            return a.head < b.head;
        return a.kind == FlowKind::Explicit && b.kind == FlowKind::Implicit;
    });
    return out;
}

} // namespace hyperflow
