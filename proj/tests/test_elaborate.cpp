//------------------------------------------------------------------------------
// test_elaborate.cpp
// Hierarchy flattening: naming, port hookups, front-end validation
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "hyperflow/elaborate.hpp"
#include "hyperflow/errors.hpp"

#include "support/build.h"

using namespace hyperflow;
using testsupport::corpus_design;
using testsupport::design_from_text;

namespace {

// Returns the connection process that assigns `lhs` from a bare identifier.
const Stmt* hookup(const Design& d, const std::string& lhs) {
    for (const auto& p : d.processes) {
        if (p.kind != ProcessDecl::Kind::Continuous || p.body.size() != 1)
            continue;
        const Stmt& s = *p.body[0];
        if (s.kind == Stmt::Kind::Assign && s.lhs.name == lhs &&
            s.rhs->kind == Expr::Kind::Ident)
            return &s;
    }
    return nullptr;
}

template <class E>
std::string message_of(const std::string& text, const std::string& top) {
    try {
        design_from_text(text, top);
    } catch (const E& e) {
        return e.what();
    }
    FAIL("expected exception was not thrown");
    return {};
}

} // namespace

TEST_CASE("flattening produces hierarchical names with slash separators") {
    Design d = corpus_design("hier");
    REQUIRE(d.top == "hier");
    for (const char* name : {"hier/x", "hier/m", "hier/out", "hier/mixed", "hier/u1/a",
                             "hier/u1/b", "hier/u1/o"})
        CHECK(d.find(name) != nullptr);
    CHECK(d.signals.size() == 7);
    CHECK(d.find("hier/u1/nope") == nullptr);
    CHECK(d.find("mixed") == nullptr);
}

TEST_CASE("only top-level ports keep their direction") {
    Design d = corpus_design("hier");
    CHECK(d.find("hier/x")->dir == Direction::Input);
    CHECK(d.find("hier/m")->dir == Direction::Input);
    CHECK(d.find("hier/out")->dir == Direction::Output);
    CHECK(d.find("hier/mixed")->dir == Direction::Internal);
    // Child ports are interior nodes of the flat design.
    CHECK(d.find("hier/u1/a")->dir == Direction::Internal);
    CHECK(d.find("hier/u1/o")->dir == Direction::Internal);
}

TEST_CASE("declared ranges survive flattening") {
    Design d = corpus_design("ops");
    const Signal* hi = d.find("ops/hi");
    REQUIRE(hi != nullptr);
    CHECK(hi->width == 4);
    CHECK(hi->lsb == 4);
    const Signal* a = d.find("ops/a");
    REQUIRE(a != nullptr);
    CHECK(a->width == 8);
    CHECK(a->lsb == 0);
    CHECK(d.find("ops/b")->width == 4);
}

TEST_CASE("port connections become continuous assignments") {
    Design d = corpus_design("hier");
    const Stmt* in_a = hookup(d, "hier/u1/a");
    REQUIRE(in_a != nullptr);
    REQUIRE(in_a->rhs->kind == Expr::Kind::Ident);
    CHECK(in_a->rhs->ident == "hier/x");

    const Stmt* in_b = hookup(d, "hier/u1/b");
    REQUIRE(in_b != nullptr);
    CHECK(in_b->rhs->ident == "hier/m");

    // Output ports assign outward: parent signal on the left.
    const Stmt* out = hookup(d, "hier/mixed");
    REQUIRE(out != nullptr);
    REQUIRE(out->rhs->kind == Expr::Kind::Ident);
    CHECK(out->rhs->ident == "hier/u1/o");

    // One process per module body plus one per connected port.
    CHECK(d.processes.size() == 5);
}

TEST_CASE("positional connections follow port declaration order") {
    const char* text = R"(
module mixer(input logic [1:0] a, input logic [1:0] b, output logic [1:0] o);
  assign o = a ^ b;
endmodule
module top(input logic [1:0] x, input logic [1:0] m, output logic [1:0] out);
  logic [1:0] mixed;
  mixer u1(x, m, mixed);
  assign out = mixed ^ x;
endmodule
)";
    Design d = design_from_text(text, "top");
    CHECK(hookup(d, "top/u1/a")->rhs->ident == "top/x");
    CHECK(hookup(d, "top/u1/b")->rhs->ident == "top/m");
    CHECK(hookup(d, "top/mixed")->rhs->ident == "top/u1/o");
}

TEST_CASE("input connections accept expressions") {
    const char* text = R"(
module inv(input logic [1:0] a, output logic [1:0] o);
  assign o = ~a;
endmodule
module top(input logic [1:0] x, input logic [1:0] m, output logic [1:0] out);
  inv u1(.a(x ^ m), .o(out));
endmodule
)";
    Design d = design_from_text(text, "top");
    const Stmt* in_a = hookup(d, "top/out");
    REQUIRE(in_a != nullptr);
    CHECK(in_a->rhs->ident == "top/u1/o");
    bool found = false;
    for (const auto& p : d.processes) {
        const Stmt& s = *p.body[0];
        if (s.kind == Stmt::Kind::Assign && s.lhs.name == "top/u1/a") {
            CHECK(s.rhs->kind == Expr::Kind::Binary);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("output connections accept bit and range selects") {
    const char* text = R"(
module bitsrc(output logic o);
  assign o = 1'b1;
endmodule
module top(input logic unused, output logic [3:0] y);
  bitsrc u1(.o(y[2]));
  assign y[3] = unused;
  assign y[1:0] = 2'b00;
endmodule
)";
    Design d = design_from_text(text, "top");
    bool found = false;
    for (const auto& p : d.processes) {
        const Stmt& s = *p.body[0];
        if (s.kind == Stmt::Kind::Assign && s.rhs->kind == Expr::Kind::Ident &&
            s.rhs->ident == "top/u1/o") {
            CHECK(s.lhs.name == "top/y");
            CHECK(s.lhs.has_range);
            CHECK(s.lhs.msb == 2);
            CHECK(s.lhs.lsb == 2);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("output connections reject general expressions") {
    const char* text = R"(
module bitsrc(output logic o);
  assign o = 1'b1;
endmodule
module top(input logic a, output logic y);
  bitsrc u1(.o(y & a));
endmodule
)";
    auto msg = message_of<ElaborationError>(text, "top");
    CHECK(msg.find("must connect to a signal or bit-select") != std::string::npos);
}

TEST_CASE("unconnected inputs are rejected, floating outputs are not") {
    const char* mixer = R"(
module mixer(input logic a, input logic b, output logic o);
  assign o = a ^ b;
endmodule
)";
    std::string omitted = std::string(mixer) + R"(
module top(input logic x, output logic y);
  mixer u1(.a(x), .o(y));
endmodule
)";
    auto msg = message_of<ElaborationError>(omitted, "top");
    CHECK(msg.find("'b'") != std::string::npos);
    CHECK(msg.find("unconnected") != std::string::npos);

    std::string empty = std::string(mixer) + R"(
module top(input logic x, output logic y);
  mixer u1(.a(x), .b(), .o(y));
  assign y = x;
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(empty, "top"), ElaborationError);

    std::string floating = std::string(mixer) + R"(
module top(input logic x, output logic y);
  mixer u1(.a(x), .b(x));
  assign y = x;
endmodule
)";
    Design d = design_from_text(floating, "top");
    CHECK(d.find("top/u1/o") != nullptr);
    CHECK(hookup(d, "top/u1/o") == nullptr);
}

TEST_CASE("connection widths must match the port exactly") {
    const char* text = R"(
module wide(input logic [1:0] a, output logic [1:0] o);
  assign o = a;
endmodule
module top(input logic x, output logic [1:0] y);
  wide u1(.a(x), .o(y));
endmodule
)";
    auto msg = message_of<ElaborationError>(text, "top");
    CHECK(msg.find("2 bits") != std::string::npos);
    CHECK(msg.find("1 bit") != std::string::npos);
}

TEST_CASE("hierarchy deeper than one level is unsupported") {
    const char* text = R"(
module leaf(input logic a, output logic o);
  assign o = ~a;
endmodule
module mid(input logic a, output logic o);
  leaf u0(.a(a), .o(o));
endmodule
module top(input logic x, output logic y);
  mid u1(.a(x), .o(y));
endmodule
)";
    auto msg = message_of<UnsupportedConstruct>(text, "top");
    CHECK(msg.find("beyond one level") != std::string::npos);
}

TEST_CASE("duplicate instance names are rejected") {
    const char* text = R"(
module inv(input logic a, output logic o);
  assign o = ~a;
endmodule
module top(input logic x, output logic y, output logic z);
  inv u1(.a(x), .o(y));
  inv u1(.a(x), .o(z));
endmodule
)";
    auto msg = message_of<ElaborationError>(text, "top");
    CHECK(msg.find("'u1'") != std::string::npos);
    CHECK(msg.find("collides") != std::string::npos);

    // An instance also cannot reuse a signal name.
    const char* shadow = R"(
module inv(input logic a, output logic o);
  assign o = ~a;
endmodule
module top(input logic x, output logic y);
  logic u1;
  inv u1(.a(x), .o(y));
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(shadow, "top"), ElaborationError);
}

TEST_CASE("a connected output conflicts with a parent driver") {
    const char* text = R"(
module inv(input logic a, output logic o);
  assign o = ~a;
endmodule
module top(input logic x, output logic y);
  inv u1(.a(x), .o(y));
  assign y = x;
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(text, "top"), DriveConflict);
}

TEST_CASE("combinational loops are rejected") {
    const char* direct = R"(
module top(input logic i, output logic y);
  logic a;
  logic b;
  assign a = b ^ i;
  assign b = a;
  assign y = a;
endmodule
)";
    auto msg = message_of<ElaborationError>(direct, "top");
    CHECK(msg.find("combinational loop") != std::string::npos);

    const char* self = R"(
module top(input logic i, output logic y);
  assign y = y ^ i;
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(self, "top"), ElaborationError);

    // A loop that crosses a module boundary is still a loop.
    const char* cross = R"(
module inv(input logic a, output logic o);
  assign o = ~a;
endmodule
module top(input logic i, output logic y);
  logic fb;
  inv u1(.a(fb), .o(fb));
  assign y = fb ^ i;
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(cross, "top"), ElaborationError);
}

TEST_CASE("a register breaks a feedback cycle") {
    const char* text = R"(
module top(input logic clk, input logic d, output logic q);
  logic n;
  assign n = q ^ d;
  always @(posedge clk) begin
    q <= n;
  end
endmodule
)";
    Design d = design_from_text(text, "top");
    CHECK(d.find("top/q") != nullptr);
}

TEST_CASE("clock signals are marked during elaboration") {
    Design d = corpus_design("counter");
    CHECK(d.find("counter/clk")->is_clock);
    CHECK_FALSE(d.find("counter/rst")->is_clock);
    CHECK_FALSE(d.find("counter/cnt")->is_clock);

    Design comb = corpus_design("diamond");
    for (const auto& s : comb.signals)
        CHECK_FALSE(s.is_clock);
}

TEST_CASE("missing top module is reported by name") {
    const char* text = R"(
module top(input logic a, output logic y);
  assign y = a;
endmodule
)";
    auto msg = message_of<ElaborationError>(text, "nope");
    CHECK(msg.find("'nope'") != std::string::npos);
}

TEST_CASE("declaration initializers become continuous processes") {
    const char* text = R"(
module top(input logic [1:0] a, output logic [1:0] y);
  logic [1:0] t = a ^ 2'b01;
  assign y = t;
endmodule
)";
    Design d = design_from_text(text, "top");
    bool found = false;
    for (const auto& p : d.processes) {
        const Stmt& s = *p.body[0];
        if (s.kind == Stmt::Kind::Assign && s.lhs.name == "top/t" &&
            s.rhs->kind == Expr::Kind::Binary) {
            CHECK(p.kind == ProcessDecl::Kind::Continuous);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("identifiers must resolve in their module scope") {
    const char* rhs = R"(
module top(input logic a, output logic y);
  assign y = a ^ ghost;
endmodule
)";
    auto msg = message_of<UnresolvedIdentifier>(rhs, "top");
    CHECK(msg.find("'ghost'") != std::string::npos);

    const char* clk = R"(
module top(input logic d, output logic q);
  always @(posedge clk) begin
    q <= d;
  end
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(clk, "top"), UnresolvedIdentifier);

    // Sibling module names do not leak into the current scope.
    const char* sibling = R"(
module other(input logic p, output logic o);
  assign o = p;
endmodule
module top(input logic a, output logic y);
  assign y = p;
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(sibling, "top"), UnresolvedIdentifier);
}

TEST_CASE("duplicate and clashing declarations are rejected") {
    const char* dup = R"(
module top(input logic a, output logic y);
  logic t;
  logic t;
  assign y = a;
endmodule
)";
    auto msg = message_of<ElaborationError>(dup, "top");
    CHECK(msg.find("duplicate declaration") != std::string::npos);

    const char* port_dup = R"(
module top(input logic a, output logic y);
  logic a;
  assign y = a;
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(port_dup, "top"), ElaborationError);

    const char* param_clash = R"(
module top(input logic a, output logic y);
  parameter W = 3;
  logic W;
  assign y = a;
endmodule
)";
    auto pmsg = message_of<ElaborationError>(param_clash, "top");
    CHECK(pmsg.find("both parameter and signal") != std::string::npos);
}

TEST_CASE("assignment target rules") {
    const char* to_input = R"(
module top(input logic a, output logic y);
  assign a = 1'b0;
  assign y = a;
endmodule
)";
    auto msg = message_of<ElaborationError>(to_input, "top");
    CHECK(msg.find("input port") != std::string::npos);

    const char* proc_wire = R"(
module top(input logic a, output wire y);
  always @(*) begin
    y = a;
  end
endmodule
)";
    auto wmsg = message_of<ElaborationError>(proc_wire, "top");
    CHECK(wmsg.find("procedural assignment to wire") != std::string::npos);

    const char* cont_reg = R"(
module top(input logic a, output reg y);
  assign y = a;
endmodule
)";
    auto rmsg = message_of<ElaborationError>(cont_reg, "top");
    CHECK(rmsg.find("continuous assignment to reg") != std::string::npos);

    // logic works on either side of the divide.
    const char* dual = R"(
module top(input logic a, output logic y);
  logic t;
  assign t = a;
  always @(*) begin
    y = t;
  end
endmodule
)";
    CHECK_NOTHROW((void)design_from_text(dual, "top"));
}

TEST_CASE("selects are checked against declared ranges") {
    const char* oob = R"(
module top(input logic [3:0] a, output logic y);
  assign y = a[4];
endmodule
)";
    auto msg = message_of<ElaborationError>(oob, "top");
    CHECK(msg.find("outside") != std::string::npos);

    const char* low = R"(
module top(input logic [7:4] a, output logic y);
  assign y = a[3];
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(low, "top"), ElaborationError);

    const char* scalar = R"(
module top(input logic a, output logic y);
  assign y = a[0];
endmodule
)";
    auto smsg = message_of<ElaborationError>(scalar, "top");
    CHECK(smsg.find("1-bit") != std::string::npos);

    const char* in_range = R"(
module top(input logic [7:4] a, output logic y);
  assign y = a[7] ^ a[4];
endmodule
)";
    CHECK_NOTHROW((void)design_from_text(in_range, "top"));
}

TEST_CASE("width and clock limits") {
    const char* wide = R"(
module top(input logic a, output logic y);
  logic [4096:0] big;
  assign y = a;
endmodule
)";
    auto msg = message_of<ElaborationError>(wide, "top");
    CHECK(msg.find("4096") != std::string::npos);

    const char* wide_clock = R"(
module top(input logic [1:0] clk, input logic d, output logic q);
  always @(posedge clk) begin
    q <= d;
  end
endmodule
)";
    auto cmsg = message_of<ElaborationError>(wide_clock, "top");
    CHECK(cmsg.find("1 bit") != std::string::npos);
}

TEST_CASE("instance connection validation") {
    const char* mixer = R"(
module mixer(input logic a, input logic b, output logic o);
  assign o = a ^ b;
endmodule
)";
    std::string unknown_module = R"(
module top(input logic x, output logic y);
  ghost u1(.a(x), .o(y));
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(unknown_module, "top"), UnresolvedIdentifier);

    std::string bad_port = std::string(mixer) + R"(
module top(input logic x, output logic y);
  mixer u1(.a(x), .b(x), .zz(y));
endmodule
)";
    auto msg = message_of<UnresolvedIdentifier>(bad_port, "top");
    CHECK(msg.find("'zz'") != std::string::npos);

    std::string twice = std::string(mixer) + R"(
module top(input logic x, output logic y);
  mixer u1(.a(x), .a(x), .o(y));
endmodule
)";
    auto tmsg = message_of<ElaborationError>(twice, "top");
    CHECK(tmsg.find("connected twice") != std::string::npos);

    std::string arity = std::string(mixer) + R"(
module top(input logic x, output logic y);
  mixer u1(x, y);
endmodule
)";
    auto amsg = message_of<ElaborationError>(arity, "top");
    CHECK(amsg.find("2 connections") != std::string::npos);
    CHECK(amsg.find("3 ports") != std::string::npos);
}

TEST_CASE("bit-level drive conflicts within a module") {
    const char* overlap = R"(
module top(input logic [3:0] a, output logic [3:0] y);
  assign y[2:0] = a[2:0];
  assign y[3:2] = a[3:2];
endmodule
)";
    CHECK_THROWS_AS((void)design_from_text(overlap, "top"), DriveConflict);

    const char* whole = R"(
module top(input logic a, output logic y);
  assign y = a;
  assign y = ~a;
endmodule
)";
    auto msg = message_of<DriveConflict>(whole, "top");
    CHECK(msg.find("'y'") != std::string::npos);

    // Disjoint spans from different processes are legal.
    const char* disjoint = R"(
module top(input logic [3:0] a, output logic [3:0] y);
  assign y[1:0] = a[1:0];
  assign y[3:2] = a[3:2];
endmodule
)";
    CHECK_NOTHROW((void)design_from_text(disjoint, "top"));

    // One process may rewrite its own bits.
    const char* same_proc = R"(
module top(input logic a, output logic y);
  always @(*) begin
    y = 1'b0;
    if (a) begin
      y = 1'b1;
    end
  end
endmodule
)";
    CHECK_NOTHROW((void)design_from_text(same_proc, "top"));
}

TEST_CASE("parameters substitute as literals") {
    const char* text = R"(
module top(input logic [3:0] a, output logic y);
  parameter THRESH = 9;
  assign y = a > THRESH;
endmodule
)";
    Design d = design_from_text(text, "top");
    bool found = false;
    for (const auto& p : d.processes) {
        const Stmt& s = *p.body[0];
        if (s.kind != Stmt::Kind::Assign || s.lhs.name != "top/y")
            continue;
        REQUIRE(s.rhs->kind == Expr::Kind::Binary);
        CHECK(s.rhs->ops[1]->kind == Expr::Kind::Literal);
        CHECK(s.rhs->ops[1]->literal.low64() == 9);
        found = true;
    }
    CHECK(found);
}
