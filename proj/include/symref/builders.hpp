// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-constraint graph builders.  Every builder anchors its subgraph at one
// constraint node; the whole-problem graph is the union of the per-constraint
// graphs over shared variable nodes.

#ifndef SYMREF_BUILDERS_HPP
#define SYMREF_BUILDERS_HPP

#include <string>

#include "symref/model.hpp"
#include "symref/sdg.hpp"

namespace symref {

inline constexpr int kHandlerExpr = 1;
inline constexpr int kHandlerExprEnhanced = 2;
inline constexpr int kHandlerStableSet = 3;

struct BuildResult {
  bool success = true;
  std::string message;
};

// Plain copy of the (center-shifted, coefficient-hoisted) expression tree.
BuildResult build_expression_constraint(const Minlp& p, const Centers& c,
                                        int cons_index, Sdg& g);

// Pattern-aware encoding: affine sums, even-op-over-difference and bilinear
// gadgets, even-function edges.
BuildResult build_enhanced_constraint(const Minlp& p, const Centers& c,
                                      int cons_index, Sdg& g);

// Conflict-graph encoding; association edges carry the node weights.
BuildResult build_stable_set_constraint(const Minlp& p, const Centers& c,
                                        int cons_index, Sdg& g);

// Dispatches on each constraint's tag (Expr upgraded to the enhanced builder
// when enhance_expr is set), then computes colors.  Returns the error text of
// the first failing builder instead of a graph.
struct ProblemSdg {
  Sdg graph;
  std::string error;
  bool success = false;
};
ProblemSdg build_problem_sdg(const Minlp& p, SymMode mode, bool enhance_expr);

}  // namespace symref

#endif
