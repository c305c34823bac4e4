// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "symref/groups.hpp"
#include "symref/handle.hpp"
#include "symref/instances.hpp"
#include "symref/solve.hpp"

using namespace symref;
using testfix::demo_linear;

namespace {

BoundsBox box1(double lo, double hi) {
  BoundsBox b;
  b.lb = {lo};
  b.ub = {hi};
  return b;
}

double cons_value(const Constraint& c, const std::vector<double>& x) {
  if (c.tag != ConsTag::StableSet) return evaluate(c.tree, x);
  double worst = -kInf;
  for (auto [a, b] : c.stable.edges) {
    double load = c.stable.weights[a] * x[c.stable.vars[a] - 1] +
                  c.stable.weights[b] * x[c.stable.vars[b] - 1];
    worst = std::max(worst, load);
  }
  return worst;
}

bool feasible(const Minlp& p, const std::vector<double>& x, double tol) {
  for (const auto& c : p.cons) {
    double v = cons_value(c, x);
    if (c.rel == Rel::Le && v > c.rhs + tol) return false;
    if (c.rel == Rel::Ge && v < c.rhs - tol) return false;
    if (c.rel == Rel::Eq && std::fabs(v - c.rhs) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("interval evaluation of powers and abs") {
  ExprTree sq;
  sq.set_root(sq.add_op(Op::Power, {sq.add_var(1)}, 2));
  Interval a = interval_eval(sq, box1(1.0, 2.0));
  CHECK(a.lo == doctest::Approx(1.0));
  CHECK(a.hi == doctest::Approx(4.0));
  Interval b = interval_eval(sq, box1(-1.0, 2.0));
  CHECK(b.lo == doctest::Approx(0.0));  // even powers clamp at zero
  CHECK(b.hi == doctest::Approx(4.0));

  ExprTree ab;
  ab.set_root(ab.add_op(Op::Abs, {ab.add_var(1)}));
  Interval c = interval_eval(ab, box1(-3.0, 1.0));
  CHECK(c.lo == doctest::Approx(0.0));
  CHECK(c.hi == doctest::Approx(3.0));
}

TEST_CASE("interval reciprocals split at zero") {
  ExprTree rc;
  rc.set_root(rc.add_op(Op::Power, {rc.add_var(1)}, -1));

  Interval pos = interval_eval(rc, box1(0.5, 2.0));
  CHECK(pos.lo == doctest::Approx(0.5));
  CHECK(pos.hi == doctest::Approx(2.0));

  // Zero endpoint: a sharp half-line.
  Interval half = interval_eval(rc, box1(0.0, 2.0));
  CHECK(half.lo == doctest::Approx(0.5));
  CHECK(half.hi == kInf);

  // Interior zero: no better than the whole line.
  Interval whole = interval_eval(rc, box1(-2.0, 2.0));
  CHECK(whole.lo == -kInf);
  CHECK(whole.hi == kInf);
}

TEST_CASE("interval evaluation over sums and products") {
  Minlp p = demo_linear();
  BoundsBox b = BoundsBox::of(p);
  Interval r = interval_eval(p.cons[0].tree, b);
  CHECK(r.lo == doctest::Approx(-7.0));
  CHECK(r.hi == doctest::Approx(13.0));

  ExprTree pr;
  int x = pr.add_var(1), y = pr.add_var(2);
  pr.set_root(pr.add_op(Op::Product, {x, y}));
  BoundsBox bb;
  bb.lb = {-1.0, 2.0};
  bb.ub = {3.0, 4.0};
  Interval m = interval_eval(pr, bb);
  CHECK(m.lo == doctest::Approx(-4.0));
  CHECK(m.hi == doctest::Approx(12.0));
}

TEST_CASE("interval evaluation rejects empty trees") {
  ExprTree t;
  CHECK_THROWS_AS(interval_eval(t, box1(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("the demo feasibility problem solves to zero") {
  Minlp p = demo_linear();
  SolveResult r = solve(p, HandlerPlan{});
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.has_incumbent);
  CHECK(r.primal == doctest::Approx(0.0));
  CHECK(r.dual_bound == doctest::Approx(0.0));
  REQUIRE(r.x.size() == 4);
  CHECK(feasible(p, r.x, 1e-6));
}

TEST_CASE("two segments in the interval reach radius one half") {
  Minlp p = gen_packing(2, 1);
  SolveResult r = solve(p, HandlerPlan{});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.primal == doctest::Approx(-0.5).epsilon(0.001));
  CHECK(feasible(p, r.x, 1e-5));
}

TEST_CASE("triangle max cut is two") {
  Minlp p = gen_maxcut(3, complete_graph(3));
  SolveResult r = solve(p, HandlerPlan{});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.primal == doctest::Approx(-2.0));
  CHECK(feasible(p, r.x, 1e-6));
  for (std::size_t i = 0; i < r.x.size(); ++i)
    CHECK(std::fabs(r.x[i] - std::round(r.x[i])) < 1e-6);
}

TEST_CASE("infeasible boxes are recognized") {
  Minlp p;
  p.vars.push_back({"x", 0.0, 1.0, false, 1.0});
  Constraint c;
  c.name = "c";
  c.tag = ConsTag::Expr;
  c.tree = make_var(1);
  c.rel = Rel::Ge;
  c.rhs = 2.0;
  p.cons.push_back(c);
  SolveResult r = solve(p, HandlerPlan{});
  CHECK(r.status == SolveStatus::Infeasible);
  CHECK_FALSE(r.has_incumbent);
}

TEST_CASE("node and time limits stop the search") {
  Minlp p = gen_packing(3, 2);
  SolveParams np;
  np.node_limit = 1;
  SolveResult rn = solve(p, HandlerPlan{}, np);
  CHECK(rn.status == SolveStatus::Limit);
  CHECK(rn.message.find("node limit") != std::string::npos);
  CHECK(rn.nodes <= 2);

  SolveParams tp;
  tp.time_limit_sec = 0.0;
  SolveResult rt = solve(p, HandlerPlan{}, tp);
  CHECK(rt.status == SolveStatus::Limit);
  CHECK(rt.message.find("time limit") != std::string::npos);
}

TEST_CASE("stable set constraints solve directly") {
  Minlp p;
  for (int i = 0; i < 3; ++i)
    p.vars.push_back({"b" + std::to_string(i + 1), 0.0, 1.0, true, -1.0});
  Constraint c;
  c.name = "pack";
  c.tag = ConsTag::StableSet;
  c.rel = Rel::Le;
  c.rhs = 1.0;
  c.stable.vars = {1, 2, 3};
  c.stable.weights = {1.0, 1.0, 1.0};
  c.stable.edges = {{0, 1}, {1, 2}, {0, 2}};
  p.cons.push_back(c);
  SolveResult r = solve(p, HandlerPlan{});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.primal == doctest::Approx(-1.0));  // at most one node of a triangle
}

TEST_CASE("plans leave the optimal value unchanged") {
  Minlp p = gen_packing(2, 2);
  SolveResult plain = solve(p, HandlerPlan{});
  GroupReport rep = analyze(p, SymMode::Reflection, true);
  SolveResult reduced = solve(p, build_plan(rep, Setting::Automatic));
  REQUIRE(plain.status == SolveStatus::Optimal);
  REQUIRE(reduced.status == SolveStatus::Optimal);
  CHECK(plain.primal == doctest::Approx(reduced.primal).epsilon(1e-4));
}

TEST_CASE("progress metrics are recorded") {
  Minlp p = gen_packing(2, 2);
  SolveResult r = solve(p, HandlerPlan{});
  CHECK(r.nodes > 0);
  CHECK(r.pd_integral >= 0.0);
  CHECK(r.dual_bound <= r.primal + 1e-9);
}
