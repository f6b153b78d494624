//------------------------------------------------------------------------------
// elaborate.cpp
// Recursive hierarchy flattening with hierarchical renaming
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/elaborate.hpp"

#include <map>
#include <set>
#include <unordered_set>

#include "hyperflow/expr_eval.hpp"

namespace hyperflow {
namespace {

ExprPtr rewrite_expr(const ExprPtr& e, const std::string& prefix) {
    switch (e->kind) {
    case Expr::Kind::Ident:
        return Expr::make_ident(prefix + "/" + e->ident, e->site);
    case Expr::Kind::Select:
        return Expr::make_select(prefix + "/" + e->ident, e->sel_msb, e->sel_lsb, e->sel_is_range,
                                 e->site);
    case Expr::Kind::Literal:
        return e;
    default: {
        auto copy = std::make_shared<Expr>(*e);
        for (auto& op : copy->ops)
            op = rewrite_expr(op, prefix);
        return copy;
    }
    }
}

StmtPtr rewrite_stmt(const StmtPtr& s, const std::string& prefix) {
    auto copy = std::make_shared<Stmt>(*s);
    switch (copy->kind) {
    case Stmt::Kind::Assign:
        copy->lhs.name = prefix + "/" + copy->lhs.name;
        copy->rhs = rewrite_expr(copy->rhs, prefix);
        break;
    case Stmt::Kind::If:
        copy->cond = rewrite_expr(copy->cond, prefix);
        for (auto& st : copy->then_body)
            st = rewrite_stmt(st, prefix);
        for (auto& st : copy->else_body)
            st = rewrite_stmt(st, prefix);
        break;
    case Stmt::Kind::Case:
        copy->sel = rewrite_expr(copy->sel, prefix);
        for (auto& item : copy->items) {
            for (auto& l : item.labels)
                l = rewrite_expr(l, prefix);
            for (auto& st : item.body)
                st = rewrite_stmt(st, prefix);
        }
        break;
    }
    return copy;
}

class Flattener {
public:
    Flattener(const Ast& ast, Design& design) : ast_(ast), design_(design) {}

    void flatten(const ModuleDecl& m, const std::string& prefix, bool is_top) {
        if (!is_top && !m.instances.empty())
            throw UnsupportedConstruct("hierarchical instantiation beyond one level (module '" +
                                           m.name + "' contains instances)",
                                       m.instances[0].site);
        if (!stack_.insert(m.name).second)
            throw ElaborationError("recursive instantiation of module '" + m.name + "'", m.site);

        for (const auto& p : m.ports) {
            Signal s;
            s.name = prefix + "/" + p.name;
            s.width = p.width();
            s.lsb = p.has_range ? p.lsb : 0;
            s.dir = is_top ? p.dir : Direction::Internal;
            s.kind = p.kind;
            s.site = p.site;
            add_signal(std::move(s));
        }
        for (const auto& d : m.decls) {
            Signal s;
            s.name = prefix + "/" + d.name;
            s.width = d.width();
            s.lsb = d.has_range ? d.lsb : 0;
            s.dir = Direction::Internal;
            s.kind = d.kind;
            s.site = d.site;
            add_signal(std::move(s));
        }

        for (const auto& d : m.decls) {
            if (!d.init)
                continue;
            auto stmt = std::make_shared<Stmt>();
            stmt->kind = Stmt::Kind::Assign;
            stmt->site = d.site;
            stmt->lhs.name = prefix + "/" + d.name;
            stmt->lhs.site = d.site;
            stmt->rhs = rewrite_expr(d.init, prefix);
            Process proc;
            proc.kind = ProcessDecl::Kind::Continuous;
            proc.site = d.site;
            proc.body.push_back(std::move(stmt));
            design_.processes.push_back(std::move(proc));
        }

        for (const auto& src : m.processes) {
            Process proc;
            proc.kind = src.kind;
            proc.site = src.site;
            if (src.kind == ProcessDecl::Kind::Clocked)
                proc.clock = prefix + "/" + src.clock;
            for (const auto& st : src.body)
                proc.body.push_back(rewrite_stmt(st, prefix));
            design_.processes.push_back(std::move(proc));
        }

        for (const auto& inst : m.instances)
            flatten_instance(m, inst, prefix);

        stack_.erase(m.name);
    }

private:
    const Ast& ast_;
    Design& design_;
    std::unordered_set<std::string> stack_;

    void add_signal(Signal s) {
        if (design_.index.count(s.name))
            throw ElaborationError("name collision after flattening: '" + s.name + "'", s.site);
        design_.index[s.name] = uint32_t(design_.signals.size());
        design_.signals.push_back(std::move(s));
    }

    uint32_t width_of(const std::string& name, const SourceSite& site) const {
        const Signal* s = design_.find(name);
        if (!s)
            throw ElaborationError("unknown signal '" + name + "'", site);
        return s->width;
    }

    void flatten_instance(const ModuleDecl& parent, const Instance& inst,
                          const std::string& prefix) {
        const ModuleDecl* target = ast_.find_module(inst.module_name);
        // Parse-time validation guarantees the module exists and arity fits.
        const std::string child_prefix = prefix + "/" + inst.inst_name;

        // Pair ports with connection expressions (parent scope).
        std::map<std::string, const Connection*> by_port;
        bool named = !inst.conns.empty() && !inst.conns[0].port.empty();
        if (named) {
            for (const auto& c : inst.conns)
                by_port[c.port] = &c;
        } else {
            for (size_t i = 0; i < inst.conns.size(); ++i)
                by_port[target->ports[i].name] = &inst.conns[i];
        }

        flatten(*target, child_prefix, false);

        auto widther = [&](const std::string& n) { return width_of(n, inst.site); };

        for (const auto& p : target->ports) {
            auto it = by_port.find(p.name);
            const Connection* conn = it == by_port.end() ? nullptr : it->second;
            if (!conn || !conn->expr) {
                if (p.dir == Direction::Input)
                    throw ElaborationError("input port '" + p.name + "' of instance '" +
                                               inst.inst_name + "' is unconnected",
                                           conn ? conn->site : inst.site);
                continue;  // floating output
            }

            ExprPtr actual = rewrite_expr(conn->expr, prefix);
            uint32_t aw = self_width(*actual, widther);
            if (aw != p.width())
                throw ElaborationError("port '" + p.name + "' of instance '" + inst.inst_name +
                                           "' is " + std::to_string(p.width()) +
                                           " bits but the connection is " + std::to_string(aw) +
                                           " bits",
                                       conn->site);

            auto stmt = std::make_shared<Stmt>();
            stmt->kind = Stmt::Kind::Assign;
            stmt->site = conn->site;
            if (p.dir == Direction::Input) {
                stmt->lhs.name = child_prefix + "/" + p.name;
                stmt->lhs.site = conn->site;
                stmt->rhs = actual;
            } else {
                if (actual->kind == Expr::Kind::Ident) {
                    stmt->lhs.name = actual->ident;
                } else if (actual->kind == Expr::Kind::Select) {
                    stmt->lhs.name = actual->ident;
                    stmt->lhs.has_range = true;
                    stmt->lhs.msb = actual->sel_msb;
                    stmt->lhs.lsb = actual->sel_is_range ? actual->sel_lsb : actual->sel_msb;
                } else {
                    throw ElaborationError("output port '" + p.name +
                                               "' must connect to a signal or bit-select",
                                           conn->site);
                }
                stmt->lhs.site = conn->site;
                stmt->rhs = Expr::make_ident(child_prefix + "/" + p.name, conn->site);
            }
            Process proc;
            proc.kind = ProcessDecl::Kind::Continuous;
            proc.site = conn->site;
            proc.body.push_back(std::move(stmt));
            design_.processes.push_back(std::move(proc));
        }
    }
};

void collect_reads(const Expr& e, std::set<std::string>& out) {
    switch (e.kind) {
    case Expr::Kind::Ident:
    case Expr::Kind::Select:
        out.insert(e.ident);
        break;
    default:
        for (const auto& op : e.ops)
            collect_reads(*op, out);
        break;
    }
}

void collect_stmt(const Stmt& s, std::set<std::string>& reads, std::set<std::string>& writes) {
    switch (s.kind) {
    case Stmt::Kind::Assign:
        collect_reads(*s.rhs, reads);
        writes.insert(s.lhs.name);
        break;
    case Stmt::Kind::If:
        collect_reads(*s.cond, reads);
        for (const auto& st : s.then_body)
            collect_stmt(*st, reads, writes);
        for (const auto& st : s.else_body)
            collect_stmt(*st, reads, writes);
        break;
    case Stmt::Kind::Case:
        collect_reads(*s.sel, reads);
        for (const auto& item : s.items) {
            for (const auto& l : item.labels)
                collect_reads(*l, reads);
            for (const auto& st : item.body)
                collect_stmt(*st, reads, writes);
        }
        break;
    }
}

// Cycle check over the combinational dependency graph (read -> write edges
// from continuous and combinational processes only).
void check_comb_loops(const Design& design) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& proc : design.processes) {
        if (proc.kind == ProcessDecl::Kind::Clocked)
            continue;
        std::set<std::string> reads, writes;
        for (const auto& st : proc.body)
            collect_stmt(*st, reads, writes);
        for (const auto& r : reads)
            for (const auto& w : writes)
                adj[r].insert(w);
    }

    // Iterative DFS; color 1 marks the current path, so an edge into a
    // color-1 node is a back edge.
    std::map<std::string, int> color;
    for (const auto& [start, _] : adj) {
        if (color[start])
            continue;
        std::vector<std::pair<std::string, bool>> stack{{start, false}};
        while (!stack.empty()) {
            auto [node, leaving] = stack.back();
            stack.pop_back();
            if (leaving) {
                color[node] = 2;
                continue;
            }
            if (color[node])
                continue;
            color[node] = 1;
            stack.push_back({node, true});
            auto it = adj.find(node);
            if (it == adj.end())
                continue;
            for (const auto& next : it->second) {
                if (color[next] == 1)
                    throw ElaborationError("combinational loop through signal '" + next + "'",
                                           SourceSite{});
                if (color[next] == 0)
                    stack.push_back({next, false});
            }
        }
    }
}

void check_flat_drivers(const Design& design) {
    // owner -> signal -> driven [lo, hi] spans (absolute bit positions)
    std::map<std::string, std::vector<std::pair<size_t, std::pair<uint32_t, uint32_t>>>> driven;
    for (size_t pi = 0; pi < design.processes.size(); ++pi) {
        std::vector<const Stmt*> work;
        for (const auto& st : design.processes[pi].body)
            work.push_back(st.get());
        while (!work.empty()) {
            const Stmt* s = work.back();
            work.pop_back();
            switch (s->kind) {
            case Stmt::Kind::Assign: {
                const Signal* sig = design.find(s->lhs.name);
                uint32_t lo = 0, hi = sig->width - 1;
                if (s->lhs.has_range) {
                    lo = s->lhs.lsb - sig->lsb;
                    hi = s->lhs.msb - sig->lsb;
                }
                driven[s->lhs.name].push_back({pi, {lo, hi}});
                break;
            }
            case Stmt::Kind::If:
                for (const auto& st : s->then_body)
                    work.push_back(st.get());
                for (const auto& st : s->else_body)
                    work.push_back(st.get());
                break;
            case Stmt::Kind::Case:
                for (const auto& item : s->items)
                    for (const auto& st : item.body)
                        work.push_back(st.get());
                break;
            }
        }
    }
    for (const auto& [name, spans] : driven) {
        for (size_t i = 0; i < spans.size(); ++i) {
            for (size_t j = i + 1; j < spans.size(); ++j) {
                if (spans[i].first == spans[j].first)
                    continue;
                auto [alo, ahi] = spans[i].second;
                auto [blo, bhi] = spans[j].second;
                if (alo <= bhi && blo <= ahi)
                    throw DriveConflict("signal '" + name + "' is driven by multiple processes",
                                        design.find(name)->site);
            }
        }
    }
}

} // namespace

Design elaborate(const Ast& ast, const std::string& top) {
    const ModuleDecl* root = ast.find_module(top);
    if (!root)
        throw ElaborationError("top module '" + top + "' not found", SourceSite{});

    Design design;
    design.top = top;
    Flattener(ast, design).flatten(*root, top, true);

    for (auto& proc : design.processes) {
        if (proc.kind != ProcessDecl::Kind::Clocked)
            continue;
        auto it = design.index.find(proc.clock);
        if (it == design.index.end())
            throw ElaborationError("unknown clock '" + proc.clock + "'", proc.site);
        design.signals[it->second].is_clock = true;
    }

    check_flat_drivers(design);
    check_comb_loops(design);
    return design;
}

} // namespace hyperflow
