//------------------------------------------------------------------------------
// test_parse.cpp
// Lexing and parsing the language subset: accepted shapes, rejected
// constructs, source sites, literal bases, and expression round-trips
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyperflow/ast.hpp"
#include "hyperflow/errors.hpp"
#include "hyperflow/parse.hpp"

using namespace hyperflow;

namespace {

Ast parse_test(const std::string& text) {
    return parse_text(text, "<test>");
}

} // namespace

TEST_CASE("a small module parses into the expected shape") {
    auto ast = parse_test("module m(input logic a, output logic [3:0] y);\n"
                          "  logic [3:0] t;\n"
                          "  assign t = {a, a, a, a};\n"
                          "  always @(*) y = t;\n"
                          "endmodule\n");
    REQUIRE(ast.modules.size() == 1);
    const auto& m = ast.modules[0];
    CHECK(m.name == "m");
    REQUIRE(m.ports.size() == 2);
    CHECK(m.ports[0].name == "a");
    CHECK(m.ports[0].dir == Direction::Input);
    CHECK(m.ports[0].width() == 1);
    CHECK(m.ports[1].name == "y");
    CHECK(m.ports[1].dir == Direction::Output);
    CHECK(m.ports[1].width() == 4);
    REQUIRE(m.decls.size() == 1);
    CHECK(m.decls[0].name == "t");
    REQUIRE(m.processes.size() == 2);
    CHECK(m.processes[0].kind == ProcessDecl::Kind::Continuous);
    CHECK(m.processes[1].kind == ProcessDecl::Kind::Combinational);
}

TEST_CASE("posedge processes record their clock") {
    auto ast = parse_test("module m(input logic clk, input logic d, output logic q);\n"
                          "  always @(posedge clk) q <= d;\n"
                          "endmodule\n");
    REQUIRE(ast.modules[0].processes.size() == 1);
    const auto& p = ast.modules[0].processes[0];
    CHECK(p.kind == ProcessDecl::Kind::Clocked);
    CHECK(p.clock == "clk");
    REQUIRE(p.body.size() == 1);
    CHECK(p.body[0]->kind == Stmt::Kind::Assign);
    CHECK(p.body[0]->nonblocking);
}

TEST_CASE("instances capture named connections") {
    auto ast = parse_test("module c(input logic i, output logic o);\n"
                          "  assign o = i;\n"
                          "endmodule\n"
                          "module m(input logic a, output logic y);\n"
                          "  c u0(.i(a), .o(y));\n"
                          "endmodule\n");
    REQUIRE(ast.modules.size() == 2);
    const auto& m = ast.modules[1];
    REQUIRE(m.instances.size() == 1);
    CHECK(m.instances[0].module_name == "c");
    CHECK(m.instances[0].inst_name == "u0");
    REQUIRE(m.instances[0].conns.size() == 2);
    CHECK(m.instances[0].conns[0].port == "i");
    CHECK(m.instances[0].conns[1].port == "o");
}

TEST_CASE("all literal bases decode to the same value") {
    auto ast = parse_test("module m(output logic [7:0] y);\n"
                          "  assign y = 8'b00101010;\n"
                          "endmodule\n"
                          "module n(output logic [7:0] y);\n"
                          "  assign y = 8'h2A;\n"
                          "endmodule\n"
                          "module o(output logic [7:0] y);\n"
                          "  assign y = 8'o52;\n"
                          "endmodule\n"
                          "module p(output logic [7:0] y);\n"
                          "  assign y = 8'd42;\n"
                          "endmodule\n");
    for (const auto& m : ast.modules) {
        const auto& e = *m.processes[0].body[0]->rhs;
        REQUIRE(e.kind == Expr::Kind::Literal);
        CHECK(e.literal.low64() == 42);
        CHECK(e.literal.width() == 8);
    }
}

TEST_CASE("underscores in literals are ignored") {
    auto ast = parse_test("module m(output logic [7:0] y);\n"
                          "  assign y = 8'b0010_1010;\n"
                          "endmodule\n");
    CHECK(ast.modules[0].processes[0].body[0]->rhs->literal.low64() == 42);
}

TEST_CASE("comments and whitespace are skipped") {
    auto ast = parse_test("// leading\nmodule m(input logic a, /* mid */ output logic y);\n"
                          "  /* multi\n     line */\n"
                          "  assign y = a; // trailing\n"
                          "endmodule\n");
    CHECK(ast.modules.size() == 1);
    CHECK(ast.modules[0].processes.size() == 1);
}

TEST_CASE("sites point at the defining token") {
    auto ast = parse_test("module m(input logic a, output logic y);\n"
                          "  assign y = a;\n"
                          "endmodule\n");
    CHECK(ast.modules[0].site.line == 1);
    CHECK(ast.modules[0].processes[0].site.line == 2);
    CHECK(ast.modules[0].processes[0].site.col == 3);
}

TEST_CASE("operator precedence binds as expected") {
    auto ast = parse_test("module m(input logic [3:0] a, input logic [3:0] b,\n"
                          "         input logic [3:0] c, output logic [3:0] y);\n"
                          "  assign y = a & b | c;\n"
                          "endmodule\n");
    const auto& e = *ast.modules[0].processes[0].body[0]->rhs;
    REQUIRE(e.kind == Expr::Kind::Binary);
    CHECK(e.bop == BinaryOp::Or);
    CHECK(e.ops[0]->kind == Expr::Kind::Binary);
    CHECK(e.ops[0]->bop == BinaryOp::And);
}

TEST_CASE("printed expressions reparse to identical text") {
    const char* exprs[] = {
        "a + b",
        "(a + b) ^ {c, d[3:0]}",
        "a ? b : c",
        "!(a == b) && (c < d)",
        "~a - 4'b0001",
        "{a, b, c}",
        "(^a) & (|b)",
        "a << 2",
        "a >> (b + 1)",
    };
    for (const char* s : exprs) {
        CAPTURE(s);
        auto e1 = parse_expression(s);
        std::string p1 = print_expr(*e1);
        auto e2 = parse_expression(p1);
        CHECK(print_expr(*e2) == p1);
    }
}

TEST_CASE("flat hierarchical names parse as single identifiers") {
    auto e = parse_expression("top/u1/sig && other");
    REQUIRE(e->kind == Expr::Kind::Binary);
    CHECK(e->ops[0]->ident == "top/u1/sig");
    CHECK(e->ops[1]->ident == "other");
}

TEST_CASE("unsupported constructs raise UnsupportedConstruct") {
    const char* bad[] = {
        "module m(output logic y);\n  always_comb y = 1'b0;\nendmodule\n",
        "module m(input logic c, output logic y);\n  always_ff @(posedge c) y <= 1'b0;\nendmodule\n",
        "module m(input logic c, output logic y);\n  always @(negedge c) y <= 1'b0;\nendmodule\n",
        "module m(input logic a, input logic b, output logic y);\n"
        "  always @(a or b) y = a;\nendmodule\n",
        "module m(output logic y);\n  initial y = 1'b0;\nendmodule\n",
        "module m(output logic y);\n  assign y = 1'bx;\nendmodule\n",
        "module m(output logic [7:0] y);\n  assign y = 8'sd4;\nendmodule\n",
        "module m(input logic c, output logic y);\n"
        "  always @(posedge c) begin : blk\n    y <= 1'b0;\n  end\nendmodule\n",
        "module m(output logic y);\n  reg arr [3:0];\n  assign y = 1'b0;\nendmodule\n",
        "module m(output logic [3:0] y);\n  assign y = $random;\nendmodule\n",
        "module m(input logic a, output logic y);\n"
        "  always @(*) {y} = a;\nendmodule\n",
        "module m(output logic [0:3] y);\n  assign y = 4'd0;\nendmodule\n",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_test(text), UnsupportedConstruct);
    }
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_test("module m(input logic a output logic y);\nendmodule\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        REQUIRE(e.site().has_value());
        CHECK(e.site()->line == 1);
        CHECK(std::string(e.what()).find("<test>") != std::string::npos);
    }
}

TEST_CASE("malformed inputs raise SyntaxError") {
    const char* bad[] = {
        "module m(input logic a, output logic y);\n  assign y = a\nendmodule\n",
        "module m(input logic a, output logic y);\n  assign y = ;\nendmodule\n",
        "module m(input logic a, output logic y);\n  assign y = (a;\nendmodule\n",
        "module m(input logic a, output logic y);\n  assign y = a;\n",
        "module m(input logic a, output logic y);\n  assign y = 4'b012;\nendmodule\n",
        "module m(input logic a, output logic y);\n  assign {y} = a;\nendmodule\n",
        "garbage\n",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_test(text), SyntaxError);
    }
}

TEST_CASE("parse_expression rejects trailing tokens") {
    CHECK_THROWS_AS(parse_expression("a b"), SyntaxError);
    CHECK_THROWS_AS(parse_expression(""), SyntaxError);
}

TEST_CASE("case statements keep label and default structure") {
    auto ast = parse_test("module m(input logic [1:0] s, input logic [1:0] a,\n"
                          "         output logic [1:0] y);\n"
                          "  always @(*) begin\n"
                          "    case (s)\n"
                          "      2'd0, 2'd1: y = a;\n"
                          "      default: y = 2'd3;\n"
                          "    endcase\n"
                          "  end\nendmodule\n");
    const auto& body = ast.modules[0].processes[0].body;
    REQUIRE(body.size() == 1);
    REQUIRE(body[0]->kind == Stmt::Kind::Case);
    REQUIRE(body[0]->items.size() == 2);
    CHECK(body[0]->items[0].labels.size() == 2);
    CHECK(body[0]->items[1].labels.empty());
}

TEST_CASE("else-if chains nest in the else body") {
    auto ast = parse_test("module m(input logic a, input logic b, output logic y);\n"
                          "  always @(*) begin\n"
                          "    if (a) y = 1'b0;\n"
                          "    else if (b) y = 1'b1;\n"
                          "    else y = a;\n"
                          "  end\nendmodule\n");
    const auto& s = *ast.modules[0].processes[0].body[0];
    REQUIRE(s.kind == Stmt::Kind::If);
    REQUIRE(s.else_body.size() == 1);
    CHECK(s.else_body[0]->kind == Stmt::Kind::If);
    CHECK(s.else_body[0]->else_body.size() == 1);
}
