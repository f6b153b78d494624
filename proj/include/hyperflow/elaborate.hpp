//------------------------------------------------------------------------------
// elaborate.hpp
// Hierarchy flattening: modules + instances -> flat signals + processes
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hyperflow/ast.hpp"

namespace hyperflow {

// A signal in the flattened design. Names are hierarchical paths joined with
// '/': "top/x", "top/u1/q".
struct Signal {
    std::string name;
    uint32_t width = 1;
    uint32_t lsb = 0;  // declared low index; selects use as-written indices
    Direction dir = Direction::Internal;
    NetKind kind = NetKind::Wire;
    bool is_clock = false;
    SourceSite site;
};

// A flattened process. Statement trees are rewritten so every identifier is a
// full hierarchical signal name. Port connections become Continuous assigns.
struct Process {
    ProcessDecl::Kind kind = ProcessDecl::Kind::Continuous;
    std::string clock;  // Clocked only, hierarchical name
    std::vector<StmtPtr> body;
    SourceSite site;
};

struct Design {
    std::string top;
    std::vector<Signal> signals;
    std::vector<Process> processes;
    std::unordered_map<std::string, uint32_t> index;  // name -> signals position

    const Signal* find(const std::string& name) const {
        auto it = index.find(name);
        return it == index.end() ? nullptr : &signals[it->second];
    }
};

// Flattens `top` and everything below it. Throws ElaborationError for width
// mismatches at port boundaries, unconnected inputs, instantiation cycles,
// and combinational loops; DriveConflict when two processes drive one bit.
Design elaborate(const Ast& ast, const std::string& top);

} // namespace hyperflow
