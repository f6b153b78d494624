//------------------------------------------------------------------------------
// test_sim.cpp
// Simulator semantics: corpus designs against the naive interpreter, posedge
// and nonblocking ordering, taint propagation modes, stimulus validation
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyperflow/errors.hpp"
#include "hyperflow/sim.hpp"

#include "support/build.h"
#include "support/files.h"
#include "support/naive_sim.h"

using namespace hyperflow;
using namespace testsupport;

namespace {

Trace sim_corpus(const std::string& name, const std::vector<TaintSeed>& seeds = {},
                 TaintMode mode = TaintMode::Conservative) {
    auto d = corpus_design(name);
    auto stim = parse_stimulus(read_file(corpus_path(name + ".stim")));
    SimOptions opts;
    opts.taint_mode = mode;
    return simulate(d, stim, seeds, opts);
}

uint64_t value_at(const Trace& tr, const std::string& name, uint64_t t) {
    const SignalTrace* st = tr.find(name);
    REQUIRE(st != nullptr);
    uint64_t cur = 0;
    for (const auto& s : st->samples) {
        if (s.t > t)
            break;
        cur = s.val.resized(64).low64();
    }
    return cur;
}

uint64_t taint_at(const Trace& tr, const std::string& name, uint64_t t) {
    const SignalTrace* st = tr.find(name);
    REQUIRE(st != nullptr);
    uint64_t cur = 0;
    for (const auto& s : st->samples) {
        if (s.t > t)
            break;
        cur = s.val_taint.resized(64).low64();
    }
    return cur;
}

} // namespace

TEST_CASE("corpus simulations match the naive interpreter everywhere") {
    const char* names[] = {"min_assign", "diamond", "diamond_gated", "counter", "mux_case",
                           "pipeline",   "leak_xor", "hier",          "ops",     "composite"};
    for (const char* name : names) {
        CAPTURE(name);
        auto d = corpus_design(name);
        auto stim = parse_stimulus(read_file(corpus_path(std::string(name) + ".stim")));
        auto tr = simulate(d, stim, {});
        auto expect = naive_values(d, stim);
        auto got = dense_values(tr);
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CAPTURE(d.signals[i].name);
            CHECK(got[i] == expect[i]);
        }
    }
}

TEST_CASE("registers capture on the posedge only") {
    auto tr = sim_corpus("pipeline");
    // clock period 2: posedges at t=1,3,5,...  k=1010 from t=0.
    CHECK(value_at(tr, "pipeline/s1", 0) == 0);
    CHECK(value_at(tr, "pipeline/s1", 1) == 0b1010);
    CHECK(value_at(tr, "pipeline/s2", 2) == 0);
    CHECK(value_at(tr, "pipeline/s2", 3) == 0b1010);
    CHECK(value_at(tr, "pipeline/out", 4) == 0);
    CHECK(value_at(tr, "pipeline/out", 5) == 0b1010);
}

TEST_CASE("nonblocking assignments read pre-edge values within one process") {
    auto d = design_from_text("module t(input logic clk, input logic k, output logic b);\n"
                              "  logic a;\n"
                              "  always @(posedge clk) begin\n"
                              "    a <= k;\n"
                              "    b <= a;\n"
                              "  end\nendmodule\n",
                              "t");
    auto stim = parse_stimulus("clock t/clk period 2\nat 0 drive t/k = 1\nrun 6\n");
    auto tr = simulate(d, stim, {});
    // First edge at t=1 moves k into a; b still sees the old a.
    CHECK(value_at(tr, "t/a", 1) == 1);
    CHECK(value_at(tr, "t/b", 1) == 0);
    CHECK(value_at(tr, "t/b", 3) == 1);
}

TEST_CASE("blocking assignments inside a clocked process forward immediately") {
    auto d = design_from_text("module t(input logic clk, input logic k, output logic b);\n"
                              "  logic a;\n"
                              "  always @(posedge clk) begin\n"
                              "    a = k;\n"
                              "    b <= a;\n"
                              "  end\nendmodule\n",
                              "t");
    auto stim = parse_stimulus("clock t/clk period 2\nat 0 drive t/k = 1\nrun 4\n");
    auto tr = simulate(d, stim, {});
    CHECK(value_at(tr, "t/b", 1) == 1);
}

TEST_CASE("taint floods combinational fanout in the same timestep") {
    auto tr = sim_corpus("diamond", {{"diamond/a", 0}});
    CHECK(taint_at(tr, "diamond/m1", 0) == 1);
    CHECK(taint_at(tr, "diamond/m2", 0) == 1);
    CHECK(taint_at(tr, "diamond/y", 0) == 1);
}

TEST_CASE("taint seeded later leaves earlier samples clean") {
    auto tr = sim_corpus("diamond", {{"diamond/a", 6}});
    CHECK(taint_at(tr, "diamond/y", 5) == 0);
    CHECK(taint_at(tr, "diamond/y", 6) == 1);
}

TEST_CASE("a gated register never picks up taint while the gate stays low") {
    auto tr = sim_corpus("diamond_gated", {{"diamond_gated/k", 0}});
    for (uint64_t t = 0; t < 16; ++t) {
        CHECK(taint_at(tr, "diamond_gated/m2", t) == 0);
        CHECK(taint_at(tr, "diamond_gated/m1", t) == (t >= 1 ? 1 : 0));
    }
}

TEST_CASE("executed writes under a tainted guard are flooded") {
    auto d = design_from_text("module t(input logic sec, input logic k, output logic y);\n"
                              "  always @(*) begin\n"
                              "    y = 1'b0;\n"
                              "    if (sec) y = 1'b1;\n"
                              "  end\nendmodule\n",
                              "t");
    auto stim = parse_stimulus("at 0 drive t/sec = 1\nat 0 drive t/k = 0\nrun 2\n");
    auto tr = simulate(d, stim, {{"t/sec", 0}});
    CHECK(value_at(tr, "t/y", 0) == 1);
    CHECK(taint_at(tr, "t/y", 0) == 1);
}

TEST_CASE("conservative mode taints a mux result even when branches agree") {
    auto d = design_from_text("module t(input logic sel, input logic [1:0] k,\n"
                              "         output logic [1:0] y);\n"
                              "  assign y = sel ? k : k;\n"
                              "endmodule\n",
                              "t");
    auto stim = parse_stimulus("at 0 drive t/sel = 0\nat 0 drive t/k = 2\nrun 2\n");
    SimOptions cons;
    cons.taint_mode = TaintMode::Conservative;
    auto tr1 = simulate(d, stim, {{"t/sel", 0}}, cons);
    CHECK(taint_at(tr1, "t/y", 0) == 0b11);

    SimOptions prec;
    prec.taint_mode = TaintMode::Precise;
    auto tr2 = simulate(d, stim, {{"t/sel", 0}}, prec);
    CHECK(taint_at(tr2, "t/y", 0) == 0);
}

TEST_CASE("precise mode keeps bits whose branch values differ") {
    auto d = design_from_text("module t(input logic sel, input logic [1:0] a,\n"
                              "         input logic [1:0] b, output logic [1:0] y);\n"
                              "  assign y = sel ? a : b;\n"
                              "endmodule\n",
                              "t");
    auto stim = parse_stimulus(
        "at 0 drive t/sel = 0\nat 0 drive t/a = 2\nat 0 drive t/b = 3\nrun 2\n");
    SimOptions prec;
    prec.taint_mode = TaintMode::Precise;
    auto tr = simulate(d, stim, {{"t/sel", 0}}, prec);
    // Branches differ in bit 0 only.
    CHECK(taint_at(tr, "t/y", 0) == 0b01);
}

TEST_CASE("a tainted clock floods every register it times") {
    auto d = design_from_text("module t(input logic clk, input logic k, output logic q);\n"
                              "  always @(posedge clk) q <= k;\n"
                              "endmodule\n",
                              "t");
    auto stim = parse_stimulus("clock t/clk period 2\nat 0 drive t/k = 0\nrun 4\n");
    auto tr = simulate(d, stim, {{"t/clk", 0}});
    CHECK(taint_at(tr, "t/q", 0) == 1);
}

TEST_CASE("change lists start at t=0 and only record changes") {
    auto tr = sim_corpus("counter");
    for (const auto& st : tr.signals) {
        REQUIRE(!st.samples.empty());
        CHECK(st.samples.front().t == 0);
        for (size_t i = 1; i < st.samples.size(); ++i) {
            CHECK(st.samples[i].t > st.samples[i - 1].t);
            bool differs = st.samples[i].val != st.samples[i - 1].val ||
                           st.samples[i].val_taint != st.samples[i - 1].val_taint;
            CHECK(differs);
        }
    }
}

TEST_CASE("counter counts and wraps") {
    auto tr = sim_corpus("counter");
    // Reset until t=4; posedges at 5,7,9,... increment.
    CHECK(value_at(tr, "counter/cnt", 4) == 0);
    CHECK(value_at(tr, "counter/cnt", 5) == 1);
    CHECK(value_at(tr, "counter/cnt", 7) == 2);
    CHECK(value_at(tr, "counter/cnt", 19) == 8);
    CHECK(value_at(tr, "counter/cnt", 21) == 0);  // reset pulse at t=20
}

TEST_CASE("stimulus errors are rejected with precise codes") {
    auto d = corpus_design("diamond");
    CHECK_THROWS_AS(simulate(d, parse_stimulus("at 0 drive diamond/zzz = 1\nrun 4\n"), {}),
                    UnknownSignal);
    CHECK_THROWS_AS(simulate(d, parse_stimulus("at 0 drive diamond/m1 = 1\nrun 4\n"), {}),
                    DriveConflict);
    CHECK_THROWS_AS(simulate(d, parse_stimulus("at 9 drive diamond/a = 1\nrun 4\n"), {}),
                    TimeOutOfRange);
    CHECK_THROWS_AS(simulate(d, parse_stimulus("clock diamond/m1 period 2\nrun 4\n"), {}),
                    DriveConflict);
    CHECK_THROWS_AS(simulate(d, parse_stimulus("at 0 drive diamond/a = 2'b11\nrun 4\n"), {}),
                    WidthMismatch);
}

TEST_CASE("stimulus parser rejects malformed directives") {
    CHECK_THROWS_AS(parse_stimulus("at 0 drive a\nrun 4\n"), SyntaxError);
    CHECK_THROWS_AS(parse_stimulus("clock c period 3\nrun 4\n"), SyntaxError);
    CHECK_THROWS_AS(parse_stimulus("clock c period 2\n"), SyntaxError);
    CHECK_THROWS_AS(parse_stimulus("run 0\n"), SyntaxError);
    CHECK_THROWS_AS(parse_stimulus("run 4\nrun 4\n"), SyntaxError);
    CHECK_THROWS_AS(parse_stimulus("bogus\nrun 4\n"), SyntaxError);
}

TEST_CASE("seeding an unknown signal is an error") {
    auto d = corpus_design("diamond");
    auto stim = parse_stimulus("at 0 drive diamond/a = 1\nrun 4\n");
    CHECK_THROWS_AS(simulate(d, stim, {{"diamond/nope", 0}}), UnknownSignal);
}

TEST_CASE("property simulation seeds the asset and reports sink arrivals") {
    auto d = corpus_design("composite");
    auto cfg = parse_asset_config(read_file(corpus_path("composite.cfg")));
    auto props = generate_ift_properties(cfg.at(0), d.signals);
    REQUIRE(!props.empty());
    auto stim = parse_stimulus(read_file(corpus_path("composite.stim")));
    auto tr = simulate(d, props[0], stim);
    auto viols = check_property(tr, props[0]);
    REQUIRE(!viols.empty());
    // First arrival outside the boundary is out_c at the enabled posedge t=33.
    CHECK(viols.front().t == 33);
    CHECK(viols.front().signal == "composite/out_c");
    for (size_t i = 1; i < viols.size(); ++i) {
        auto ka = std::tuple(viols[i - 1].t, viols[i - 1].signal, viols[i - 1].bit);
        auto kb = std::tuple(viols[i].t, viols[i].signal, viols[i].bit);
        CHECK(ka < kb);
    }
}
