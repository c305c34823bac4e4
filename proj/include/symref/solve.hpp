// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal interval-based spatial branch-and-bound with plan propagation.
// Bounding is pure interval arithmetic; progress is measured in node counts.

#ifndef SYMREF_SOLVE_HPP
#define SYMREF_SOLVE_HPP

#include <string>
#include <vector>

#include "symref/handle.hpp"
#include "symref/model.hpp"

namespace symref {

struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool empty() const { return lo > hi; }
  double width() const { return hi - lo; }
};

Interval interval_eval(const ExprTree& t, const BoundsBox& box);

enum class SolveStatus { Optimal, Infeasible, Limit };

struct SolveParams {
  double gap_tol = 1e-4;     // relative
  double feas_tol = 1e-6;
  long node_limit = 100000;
  double time_limit_sec = 120.0;
  int fbbt_rounds = 10;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Limit;
  bool has_incumbent = false;
  double primal = kInf;
  double dual_bound = -kInf;
  std::vector<double> x;
  long nodes = 0;
  double pd_integral = 0.0;  // sum over nodes of the clipped relative gap
  std::string message;
};

SolveResult solve(const Minlp& p, const HandlerPlan& plan, const SolveParams& params = {});

}  // namespace symref

#endif
