// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Symmetry handling: lexicographic reduction for signed permutations, static
// row sorting, reflection domain restrictions, ordering inequalities, and
// plan construction per handling setting.

#ifndef SYMREF_HANDLE_HPP
#define SYMREF_HANDLE_HPP

#include <string>
#include <vector>

#include "symref/groups.hpp"
#include "symref/model.hpp"

namespace symref {

struct BoundsBox {
  std::vector<double> lb;
  std::vector<double> ub;

  static BoundsBox of(const Minlp& p);
  int n() const { return static_cast<int>(lb.size()); }
  bool empty_at(int i, double tol = 1e-9) const { return lb[i] > ub[i] + tol; }
};

// Propagates x >=_lex reflected(x) through the box.  Returns false when the
// box proves infeasible.  Positions are visited in index order.
bool lex_reduce(const SignedPermutation& g, const std::vector<double>& centers,
                const std::vector<bool>& integral, BoundsBox& box,
                double tol = 1e-9);

// Fixpoint of lex_reduce over all adjacent-row swaps of the matrix
// (round cap rows*cols).  Matrix cells are variable indices.
bool sort_rows_static(const std::vector<std::vector<int>>& matrix,
                      const std::vector<double>& centers,
                      const std::vector<bool>& integral, BoundsBox& box,
                      double tol = 1e-9);

enum class ActionKind { LexReduce, SortRows, RestrictDomain, StaticInequality };

struct LinearInequality {          // sum coef_i * x_i >= rhs
  std::vector<int> vars;
  std::vector<double> coefs;
  double rhs = 0.0;
};

struct PlanAction {
  ActionKind kind = ActionKind::LexReduce;
  SignedPermutation gamma;                 // LexReduce
  std::vector<std::vector<int>> rows;      // SortRows
  int var = 0;                             // RestrictDomain, 1-based
  double new_lb = 0.0;                     // RestrictDomain
  LinearInequality ineq;                   // StaticInequality
  std::string note;
};

struct HandlerPlan {
  std::vector<PlanAction> actions;
  std::vector<std::string> notes;
};

// Halving recursion: n_0 = rows, n_j = ceil(n_{j-1}/2).  Restricts cell
// (i, j) to [xi_j, ub] for i <= n_j, and sorts the row blocks
// [1, n_q], [n_q+1, n_{q-1}], ..., [n_1+1, n_0].
HandlerPlan plan_reflection_restrictions(const std::vector<std::vector<int>>& matrix,
                                         const std::vector<double>& centers);

// Sorts rows and columns simultaneously plus first-column/first-row ordering
// inequalities.
HandlerPlan plan_row_column_sorting(const std::vector<std::vector<int>>& matrix);

// sum_{i in support} x_i >= sum of their centers.
PlanAction emit_simple_reflection_cut(const std::vector<int>& support,
                                      const std::vector<double>& centers);

enum class Setting { Sym0, Sym1, Sym2, Sym3, Sym4, Sym5, Sym6, Automatic };

const char* setting_name(Setting s);
bool parse_setting(const std::string& text, Setting* out);

HandlerPlan build_plan(const GroupReport& report, Setting setting);

// Deterministic one-action-per-line listing for the CLI.
std::string to_text(const HandlerPlan& plan);

}  // namespace symref

#endif
