//------------------------------------------------------------------------------
// expr_eval.hpp
// Combined two-state value and per-bit label evaluation for expressions
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <functional>
#include <string>

#include "hyperflow/ast.hpp"
#include "hyperflow/elaborate.hpp"

namespace hyperflow {

// How labels cross a multiplexer with a tainted select.
enum class TaintMode {
    Conservative,  // tainted select taints every result bit
    Precise,       // result bit tainted only if labels or branch values differ
};

// Read access the evaluator pulls signal state through.
class EvalEnv {
public:
    virtual ~EvalEnv() = default;
    virtual const Signal& signal(const std::string& name) const = 0;
    virtual const Bits& value_of(const Signal& s) const = 0;
    virtual const Bits& taint_of(const Signal& s) const = 0;
};

struct EvalResult {
    Bits value{1};
    Bits taint{1};
};

// Width an expression takes with no assignment context.
uint32_t self_width(const Expr& e, const std::function<uint32_t(const std::string&)>& width_of);

// Evaluates `e` in an assignment context of width ctx_width: the computation
// runs at max(ctx_width, self width) and the result is resized to ctx_width.
// ctx_width 0 means fully self-determined (predicates, conditions).
EvalResult eval_expr(const Expr& e, uint32_t ctx_width, const EvalEnv& env, TaintMode mode);

// Value-only convenience; label inputs are ignored.
Bits eval_value(const Expr& e, uint32_t ctx_width, const EvalEnv& env);

// Nonzero test used for conditions and predicate terms.
bool eval_truth(const Expr& e, const EvalEnv& env);

} // namespace hyperflow
