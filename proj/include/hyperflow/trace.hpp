//------------------------------------------------------------------------------
// trace.hpp
// Change-list traces: per-signal (time, value, taint) samples
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperflow/bits.hpp"

namespace hyperflow {

// One sample: value and label plane at time t.
struct VertexSample {
    uint64_t t = 0;
    Bits val{1};
    Bits val_taint{1};
};

// Change list for one signal. First entry at t=0; consecutive entries differ
// in value or taint; taint width always equals value width.
struct SignalTrace {
    std::string name;
    uint32_t width = 1;
    uint32_t lsb = 0;
    std::vector<VertexSample> samples;
};

struct Trace {
    std::string design_name;
    uint64_t end_time = 0;        // trace covers t in [0, end_time)
    std::string timescale = "1ns";
    std::vector<SignalTrace> signals;

    const SignalTrace* find(const std::string& name) const {
        for (const auto& s : signals)
            if (s.name == name)
                return &s;
        return nullptr;
    }
};

} // namespace hyperflow
