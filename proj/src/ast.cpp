//------------------------------------------------------------------------------
// ast.cpp
// Expression factories, canonical printing, structural dumps
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/ast.hpp"

#include <sstream>

namespace hyperflow {

ExprPtr Expr::make_ident(std::string name, SourceSite site) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Ident;
    e->ident = std::move(name);
    e->site = std::move(site);
    return e;
}

ExprPtr Expr::make_literal(Bits value, bool sized, SourceSite site) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Literal;
    e->literal = std::move(value);
    e->literal_sized = sized;
    e->site = std::move(site);
    return e;
}

ExprPtr Expr::make_unary(UnaryOp op, ExprPtr x, SourceSite site) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->uop = op;
    e->ops = {std::move(x)};
    e->site = std::move(site);
    return e;
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr a, ExprPtr b, SourceSite site) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->bop = op;
    e->ops = {std::move(a), std::move(b)};
    e->site = std::move(site);
    return e;
}

ExprPtr Expr::make_ternary(ExprPtr c, ExprPtr t, ExprPtr f, SourceSite site) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Ternary;
    e->ops = {std::move(c), std::move(t), std::move(f)};
    e->site = std::move(site);
    return e;
}

ExprPtr Expr::make_select(std::string base, uint32_t msb, uint32_t lsb, bool is_range,
                          SourceSite site) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Select;
    e->ident = std::move(base);
    e->sel_msb = msb;
    e->sel_lsb = lsb;
    e->sel_is_range = is_range;
    e->site = std::move(site);
    return e;
}

ExprPtr Expr::make_concat(std::vector<ExprPtr> parts, SourceSite site) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Concat;
    e->ops = std::move(parts);
    e->site = std::move(site);
    return e;
}

const ModuleDecl* Ast::find_module(const std::string& name) const {
    for (const auto& m : modules)
        if (m.name == name)
            return &m;
    return nullptr;
}

namespace {

const char* unary_text(UnaryOp op) {
    switch (op) {
    case UnaryOp::BitNot: return "~";
    case UnaryOp::LogicNot: return "!";
    case UnaryOp::Negate: return "-";
    case UnaryOp::ReduceAnd: return "&";
    case UnaryOp::ReduceOr: return "|";
    case UnaryOp::ReduceXor: return "^";
    }
    return "?";
}

const char* binary_text(BinaryOp op) {
    switch (op) {
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
    case BinaryOp::Xor: return "^";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::LogicAnd: return "&&";
    case BinaryOp::LogicOr: return "||";
    }
    return "?";
}

bool atomic(const Expr& e) {
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

std::string wrapped(const Expr& e) {
    if (atomic(e))
        return print_expr(e);
    return "(" + print_expr(e) + ")";
}

std::string literal_text(const Expr& e) {
    if (e.literal_sized)
        return std::to_string(e.literal.width()) + "'b" + e.literal.to_binary();
    return std::to_string(e.literal.low64());
}

} // namespace

std::string print_expr(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Ident:
        return e.ident;
    case Expr::Kind::Literal:
        return literal_text(e);
    case Expr::Kind::Unary:
        return std::string(unary_text(e.uop)) + wrapped(*e.ops[0]);
    case Expr::Kind::Binary:
        return wrapped(*e.ops[0]) + " " + binary_text(e.bop) + " " + wrapped(*e.ops[1]);
    case Expr::Kind::Ternary:
        return wrapped(*e.ops[0]) + " ? " + wrapped(*e.ops[1]) + " : " + wrapped(*e.ops[2]);
    case Expr::Kind::Select:
        if (e.sel_is_range)
            return e.ident + "[" + std::to_string(e.sel_msb) + ":" + std::to_string(e.sel_lsb) + "]";
        return e.ident + "[" + std::to_string(e.sel_msb) + "]";
    case Expr::Kind::Concat: {
        std::string s = "{";
        for (size_t i = 0; i < e.ops.size(); ++i) {
            if (i)
                s += ", ";
            s += print_expr(*e.ops[i]);
        }
        return s + "}";
    }
    }
    return "?";
}

namespace {

struct Printer {
    std::ostringstream out;
    int indent = 0;

    void line(const std::string& s) {
        for (int i = 0; i < indent; ++i)
            out << "  ";
        out << s << "\n";
    }

    static std::string lvalue_text(const LValue& lv) {
        if (!lv.has_range)
            return lv.name;
        if (lv.msb == lv.lsb)
            return lv.name + "[" + std::to_string(lv.msb) + "]";
        return lv.name + "[" + std::to_string(lv.msb) + ":" + std::to_string(lv.lsb) + "]";
    }

    static std::string range_text(bool has_range, uint32_t msb, uint32_t lsb) {
        if (!has_range)
            return "";
        return "[" + std::to_string(msb) + ":" + std::to_string(lsb) + "] ";
    }

    static const char* net_text(NetKind k) {
        switch (k) {
        case NetKind::Wire: return "wire";
        case NetKind::Reg: return "reg";
        case NetKind::Logic: return "logic";
        }
        return "wire";
    }

    void print_stmt(const Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::Assign:
            line(lvalue_text(s.lhs) + (s.nonblocking ? " <= " : " = ") + print_expr(*s.rhs) + ";");
            break;
        case Stmt::Kind::If:
            line("if (" + print_expr(*s.cond) + ") begin");
            ++indent;
            for (const auto& st : s.then_body)
                print_stmt(*st);
            --indent;
            if (!s.else_body.empty()) {
                line("end else begin");
                ++indent;
                for (const auto& st : s.else_body)
                    print_stmt(*st);
                --indent;
            }
            line("end");
            break;
        case Stmt::Kind::Case:
            line("case (" + print_expr(*s.sel) + ")");
            ++indent;
            for (const auto& item : s.items) {
                std::string head;
                if (item.labels.empty()) {
                    head = "default: begin";
                } else {
                    for (size_t i = 0; i < item.labels.size(); ++i) {
                        if (i)
                            head += ", ";
                        head += print_expr(*item.labels[i]);
                    }
                    head += ": begin";
                }
                line(head);
                ++indent;
                for (const auto& st : item.body)
                    print_stmt(*st);
                --indent;
                line("end");
            }
            --indent;
            line("endcase");
            break;
        }
    }

    void print_module(const ModuleDecl& m) {
        std::string header = "module " + m.name;
        if (!m.ports.empty()) {
            header += "(";
            for (size_t i = 0; i < m.ports.size(); ++i) {
                const auto& p = m.ports[i];
                if (i)
                    header += ", ";
                header += (p.dir == Direction::Input ? "input " : "output ");
                header += std::string(net_text(p.kind)) + " ";
                header += range_text(p.has_range, p.msb, p.lsb);
                header += p.name;
            }
            header += ")";
        }
        line(header + ";");
        ++indent;
        for (const auto& p : m.params)
            line("parameter " + p.name + " = " + std::to_string(p.value) + ";");
        for (const auto& d : m.decls) {
            std::string s = std::string(net_text(d.kind)) + " " + range_text(d.has_range, d.msb, d.lsb) + d.name;
            if (d.init)
                s += " = " + print_expr(*d.init);
            line(s + ";");
        }
        for (const auto& inst : m.instances) {
            std::string s = inst.module_name + " " + inst.inst_name + "(";
            for (size_t i = 0; i < inst.conns.size(); ++i) {
                if (i)
                    s += ", ";
                const auto& c = inst.conns[i];
                std::string actual = c.expr ? print_expr(*c.expr) : std::string();
                if (c.port.empty())
                    s += actual;
                else
                    s += "." + c.port + "(" + actual + ")";
            }
            line(s + ");");
        }
        for (const auto& proc : m.processes) {
            switch (proc.kind) {
            case ProcessDecl::Kind::Continuous:
                line("assign " + lvalue_text(proc.body[0]->lhs) + " = " + print_expr(*proc.body[0]->rhs) + ";");
                break;
            case ProcessDecl::Kind::Combinational:
                line("always @(*) begin");
                ++indent;
                for (const auto& st : proc.body)
                    print_stmt(*st);
                --indent;
                line("end");
                break;
            case ProcessDecl::Kind::Clocked:
                line("always @(posedge " + proc.clock + ") begin");
                ++indent;
                for (const auto& st : proc.body)
                    print_stmt(*st);
                --indent;
                line("end");
                break;
            }
        }
        --indent;
        line("endmodule");
    }
};

struct Dumper {
    std::ostringstream out;
    bool with_sites;

    explicit Dumper(bool sites) : with_sites(sites) {}

    void site(const SourceSite& s) {
        if (with_sites)
            out << "@" << s.str();
    }

    void expr(const Expr& e) {
        out << "(";
        switch (e.kind) {
        case Expr::Kind::Ident:
            out << "id " << e.ident;
            break;
        case Expr::Kind::Literal:
            out << "lit " << (e.literal_sized ? "s" : "u") << e.literal.width() << "'"
                << e.literal.to_binary();
            break;
        case Expr::Kind::Unary:
            out << "u" << unary_text(e.uop) << " ";
            expr(*e.ops[0]);
            break;
        case Expr::Kind::Binary:
            out << "b" << binary_text(e.bop) << " ";
            expr(*e.ops[0]);
            out << " ";
            expr(*e.ops[1]);
            break;
        case Expr::Kind::Ternary:
            out << "cond ";
            expr(*e.ops[0]);
            out << " ";
            expr(*e.ops[1]);
            out << " ";
            expr(*e.ops[2]);
            break;
        case Expr::Kind::Select:
            out << "sel " << e.ident << " " << e.sel_msb << " " << e.sel_lsb << " "
                << (e.sel_is_range ? "r" : "b");
            break;
        case Expr::Kind::Concat:
            out << "cat";
            for (const auto& p : e.ops) {
                out << " ";
                expr(*p);
            }
            break;
        }
        site(e.site);
        out << ")";
    }

    void stmt(const Stmt& s) {
        out << "(";
        switch (s.kind) {
        case Stmt::Kind::Assign:
            out << (s.nonblocking ? "nba " : "ba ") << s.lhs.name;
            if (s.lhs.has_range)
                out << "[" << s.lhs.msb << ":" << s.lhs.lsb << "]";
            out << " ";
            expr(*s.rhs);
            break;
        case Stmt::Kind::If:
            out << "if ";
            expr(*s.cond);
            out << " (";
            for (const auto& st : s.then_body)
                stmt(*st);
            out << ") (";
            for (const auto& st : s.else_body)
                stmt(*st);
            out << ")";
            break;
        case Stmt::Kind::Case:
            out << "case ";
            expr(*s.sel);
            for (const auto& item : s.items) {
                out << " (item (";
                for (const auto& l : item.labels)
                    expr(*l);
                out << ") (";
                for (const auto& st : item.body)
                    stmt(*st);
                out << "))";
            }
            break;
        }
        site(s.site);
        out << ")";
    }

    void module(const ModuleDecl& m) {
        out << "(module " << m.name;
        site(m.site);
        out << "\n";
        for (const auto& p : m.ports) {
            out << " (port " << (p.dir == Direction::Input ? "in" : "out") << " "
                << Printer::net_text(p.kind) << " " << p.name << " " << p.width() << " "
                << (p.has_range ? p.lsb : 0);
            site(p.site);
            out << ")\n";
        }
        for (const auto& p : m.params) {
            out << " (param " << p.name << " " << p.value;
            site(p.site);
            out << ")\n";
        }
        for (const auto& d : m.decls) {
            out << " (decl " << Printer::net_text(d.kind) << " " << d.name << " " << d.width()
                << " " << (d.has_range ? d.lsb : 0);
            if (d.init) {
                out << " ";
                expr(*d.init);
            }
            site(d.site);
            out << ")\n";
        }
        for (const auto& inst : m.instances) {
            out << " (inst " << inst.module_name << " " << inst.inst_name;
            for (const auto& c : inst.conns) {
                out << " (" << (c.port.empty() ? "<pos>" : c.port);
                if (c.expr) {
                    out << " ";
                    expr(*c.expr);
                }
                out << ")";
            }
            site(inst.site);
            out << ")\n";
        }
        for (const auto& proc : m.processes) {
            out << " (proc ";
            switch (proc.kind) {
            case ProcessDecl::Kind::Continuous: out << "cont"; break;
            case ProcessDecl::Kind::Combinational: out << "comb"; break;
            case ProcessDecl::Kind::Clocked: out << "ff " << proc.clock; break;
            }
            for (const auto& st : proc.body) {
                out << " ";
                stmt(*st);
            }
            site(proc.site);
            out << ")\n";
        }
        out << ")\n";
    }
};

} // namespace

std::string print_ast(const Ast& ast) {
    Printer p;
    for (const auto& m : ast.modules)
        p.print_module(m);
    return p.out.str();
}

std::string dump_ast(const Ast& ast, bool with_sites) {
    Dumper d(with_sites);
    for (const auto& m : ast.modules)
        d.module(m);
    return d.out.str();
}

} // namespace hyperflow
