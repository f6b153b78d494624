//------------------------------------------------------------------------------
// vcd.hpp
// VCD change-dump writing and parsing, with a parallel label plane carried
// in `__taint`-suffixed variables
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <iosfwd>
#include <string>

#include "hyperflow/trace.hpp"

namespace hyperflow {

// Which plane(s) of the trace a dump carries.
enum class VcdPlane {
    Values,  // functional values only
    Taints,  // `<sig>__taint` variables only
    Both,
};

// Deterministic dump: nested scopes from '/'-separated names, base-94 ids,
// explicit [msb:lsb] on every variable, change-only emission, and a trailing
// `#end_time` marker.
void write_vcd(const Trace& trace, std::ostream& out, VcdPlane plane = VcdPlane::Both);

std::string write_vcd_string(const Trace& trace, VcdPlane plane = VcdPlane::Both);

// Parses a two-state VCD. `x__taint` variables feed x's taint plane; x/z
// values raise VcdSyntaxError; a timescale magnitude other than 1 raises
// TimebaseMismatch.
Trace read_vcd(std::istream& in, const std::string& path = "<vcd>");

Trace read_vcd_string(const std::string& text, const std::string& path = "<vcd>");

} // namespace hyperflow
