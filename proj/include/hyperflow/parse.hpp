//------------------------------------------------------------------------------
// parse.hpp
// Lexer and recursive-descent parser for the synthesizable subset
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <string>

#include "hyperflow/ast.hpp"

namespace hyperflow {

// Parses every file in the unit and validates the result: identifier
// resolution, select bounds, assignment-target legality, per-module driver
// overlap, and instance arity. Throws SyntaxError, UnsupportedConstruct,
// UnresolvedIdentifier, ElaborationError, or DriveConflict.
Ast parse_rtl(const SourceUnit& unit);

// Single-buffer convenience wrapper used heavily by tests.
Ast parse_text(const std::string& text, const std::string& path = "<mem>");

// Parses one bare expression (no module wrapper). Identifiers are not
// resolved against any design; callers validate names themselves. Throws
// SyntaxError on trailing tokens.
ExprPtr parse_expression(const std::string& text, const std::string& path = "<expr>");

} // namespace hyperflow
