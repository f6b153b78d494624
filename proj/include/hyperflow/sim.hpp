//------------------------------------------------------------------------------
// sim.hpp
// Reference event-driven two-state simulator with per-bit taint co-simulation
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperflow/elaborate.hpp"
#include "hyperflow/expr_eval.hpp"
#include "hyperflow/property.hpp"
#include "hyperflow/trace.hpp"

namespace hyperflow {

struct ClockSpec {
    std::string signal;
    uint64_t period = 2;  // even, >= 2; high during the second half-period
    SourceSite site;
};

struct Drive {
    uint64_t t = 0;
    std::string signal;
    Bits value{1};
    bool sized = false;  // sized literals must match the input width exactly
    SourceSite site;
};

struct Stimulus {
    std::vector<ClockSpec> clocks;
    std::vector<Drive> drives;
    uint64_t duration = 0;  // timesteps simulated: t in [0, duration)
};

// Parses the stimulus format, one directive per line:
//
//   clock <sig> period <n>
//   at <t> drive <sig> = <value>
//   run <n>
//
// Values are decimal or sized/based literals (8'hFF). `#` starts a comment.
Stimulus parse_stimulus(const std::string& text, const std::string& path = "<stim>");

// Forces a signal's taint to all-ones from time from_t onward.
struct TaintSeed {
    std::string signal;
    uint64_t from_t = 0;
};

struct SimOptions {
    TaintMode taint_mode = TaintMode::Conservative;
    uint64_t max_settle = 0;  // 0 means |signals|^2 sweeps
};

// Runs the design under the stimulus with the given taint seeds. Per timestep:
// clock/drive application, combinational settle to fixpoint, posedge-triggered
// processes in declaration order (blocking immediate, nonblocking committed
// after all fire), re-settle, then change recording.
Trace simulate(const Design& design, const Stimulus& stim, const std::vector<TaintSeed>& seeds,
               const SimOptions& opts = {});

// Property wrapper: seeds every property source, inputs from their first drive
// time and all other signals from t=0.
Trace simulate(const Design& design, const IftProperty& prop, const Stimulus& stim,
               const SimOptions& opts = {});

struct Violation {
    uint64_t t = 0;
    std::string signal;
    uint32_t bit = 0;  // declared bit index
};

// First taint arrival per sink bit, sorted by (t, signal, bit). Empty means
// the no-flow property held over the trace.
std::vector<Violation> check_property(const Trace& trace, const IftProperty& prop);

} // namespace hyperflow
