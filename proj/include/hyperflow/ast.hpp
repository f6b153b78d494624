//------------------------------------------------------------------------------
// ast.hpp
// Abstract syntax tree for the synthesizable SystemVerilog subset
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hyperflow/bits.hpp"
#include "hyperflow/errors.hpp"

namespace hyperflow {

enum class UnaryOp { BitNot, LogicNot, Negate, ReduceAnd, ReduceOr, ReduceXor };
enum class BinaryOp {
    And, Or, Xor,
    Add, Sub,
    Eq, Ne, Lt, Le, Gt, Ge,
    Shl, Shr,
    LogicAnd, LogicOr,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Ident, Literal, Unary, Binary, Ternary, Select, Concat };

    Kind kind;
    SourceSite site;

    std::string ident;           // Ident and Select (base signal name)
    Bits literal{1};             // Literal
    bool literal_sized = false;  // true when the source gave an explicit size
    UnaryOp uop{};
    BinaryOp bop{};
    // Operand order: Unary [x]; Binary [lhs, rhs]; Ternary [cond, then, else];
    // Concat [parts...] MSB first; Ident/Literal/Select none.
    std::vector<ExprPtr> ops;
    uint32_t sel_msb = 0, sel_lsb = 0;  // Select, indices as written in source
    bool sel_is_range = false;          // x[msb:lsb] vs x[bit]

    static ExprPtr make_ident(std::string name, SourceSite site);
    static ExprPtr make_literal(Bits value, bool sized, SourceSite site);
    static ExprPtr make_unary(UnaryOp op, ExprPtr x, SourceSite site);
    static ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b, SourceSite site);
    static ExprPtr make_ternary(ExprPtr c, ExprPtr t, ExprPtr e, SourceSite site);
    static ExprPtr make_select(std::string base, uint32_t msb, uint32_t lsb, bool is_range,
                               SourceSite site);
    static ExprPtr make_concat(std::vector<ExprPtr> parts, SourceSite site);
};

struct LValue {
    std::string name;
    bool has_range = false;
    uint32_t msb = 0, lsb = 0;  // as written
    SourceSite site;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct CaseItem {
    std::vector<ExprPtr> labels;  // empty means `default`
    std::vector<StmtPtr> body;
    SourceSite site;
};

struct Stmt {
    enum class Kind { Assign, If, Case };

    Kind kind;
    SourceSite site;

    // Assign
    LValue lhs;
    ExprPtr rhs;
    bool nonblocking = false;

    // If
    ExprPtr cond;
    std::vector<StmtPtr> then_body;
    std::vector<StmtPtr> else_body;

    // Case
    ExprPtr sel;
    std::vector<CaseItem> items;
};

enum class Direction { Input, Output, Internal };
enum class NetKind { Wire, Reg, Logic };

struct Port {
    std::string name;
    Direction dir = Direction::Input;
    NetKind kind = NetKind::Wire;
    bool has_range = false;
    uint32_t msb = 0, lsb = 0;
    SourceSite site;

    uint32_t width() const { return has_range ? msb - lsb + 1 : 1; }
};

struct Decl {
    std::string name;
    NetKind kind = NetKind::Wire;
    bool has_range = false;
    uint32_t msb = 0, lsb = 0;
    ExprPtr init;  // optional `wire x = expr;` shorthand
    SourceSite site;

    uint32_t width() const { return has_range ? msb - lsb + 1 : 1; }
};

struct Param {
    std::string name;
    int64_t value = 0;
    SourceSite site;
};

struct Connection {
    std::string port;  // empty for positional
    ExprPtr expr;
    SourceSite site;
};

struct Instance {
    std::string module_name;
    std::string inst_name;
    std::vector<Connection> conns;
    SourceSite site;
};

struct ProcessDecl {
    enum class Kind { Continuous, Combinational, Clocked };

    Kind kind = Kind::Continuous;
    SourceSite site;
    std::string clock;          // Clocked only
    std::vector<StmtPtr> body;  // Continuous: exactly one Assign
};

struct ModuleDecl {
    std::string name;
    SourceSite site;
    std::vector<Port> ports;
    std::vector<Param> params;
    std::vector<Decl> decls;
    std::vector<ProcessDecl> processes;
    std::vector<Instance> instances;
};

struct Ast {
    std::vector<ModuleDecl> modules;

    const ModuleDecl* find_module(const std::string& name) const;
};

struct SourceUnit {
    std::vector<std::pair<std::string, std::string>> files;  // (path, text)
    std::string top_module;
};

// Canonical expression text. Non-atomic operands are parenthesized so the
// printed form reparses to an identical tree.
std::string print_expr(const Expr& e);

// Pretty-prints a whole AST back to source text.
std::string print_ast(const Ast& ast);

// Canonical structural dump; with_sites=false ignores source locations.
std::string dump_ast(const Ast& ast, bool with_sites);

} // namespace hyperflow
