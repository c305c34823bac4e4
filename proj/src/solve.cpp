// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Interval spatial branch-and-bound.  Each node runs the handler plan's
// domain reductions plus constraint-wise forward/backward interval revision
// to a fixpoint, bounds the linear objective by interval evaluation, probes
// for incumbents with a deterministic repair/polish heuristic, and branches
// on the widest relative-width variable at the midpoint.

#include "symref/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symref/expr.hpp"

namespace symref {

namespace {

constexpr double kWidthTol = 1e-6;   // boxes below this width are leaves
constexpr double kDust = 1e-12;      // improvement / emptiness slack

Interval whole() { return Interval{-kInf, kInf}; }

Interval point(double v) { return Interval{v, v}; }

// 0 * inf must act as 0 for interval corners.
double corner(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

Interval iv_make(double a, double b) { return Interval{a, b}; }

Interval iv_add(const Interval& a, const Interval& b) {
  return iv_make(a.lo + b.lo, a.hi + b.hi);
}

Interval iv_sub(const Interval& a, const Interval& b) {
  return iv_make(a.lo - b.hi, a.hi - b.lo);
}

Interval iv_neg(const Interval& a) { return iv_make(-a.hi, -a.lo); }

Interval iv_mul(const Interval& a, const Interval& b) {
  double c0 = corner(a.lo, b.lo), c1 = corner(a.lo, b.hi);
  double c2 = corner(a.hi, b.lo), c3 = corner(a.hi, b.hi);
  return iv_make(std::min({c0, c1, c2, c3}), std::max({c0, c1, c2, c3}));
}

Interval iv_scale(const Interval& a, double c) {
  if (c >= 0.0) return iv_make(corner(c, a.lo), corner(c, a.hi));
  return iv_make(corner(c, a.hi), corner(c, a.lo));
}

Interval iv_abs(const Interval& a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return iv_make(-a.hi, -a.lo);
  return iv_make(0.0, std::max(-a.lo, a.hi));
}

Interval iv_intersect(const Interval& a, const Interval& b) {
  return iv_make(std::max(a.lo, b.lo), std::min(a.hi, b.hi));
}

bool iv_has_zero(const Interval& a) { return a.lo <= 0.0 && a.hi >= 0.0; }

// Reciprocal; unbounded once the interval touches 0, but keeps the sharp
// half-line when 0 is only an endpoint.
Interval iv_recip(const Interval& a) {
  if (a.lo > 0.0 || a.hi < 0.0) return iv_make(1.0 / a.hi, 1.0 / a.lo);
  if (a.lo == 0.0 && a.hi > 0.0) return iv_make(1.0 / a.hi, kInf);
  if (a.hi == 0.0 && a.lo < 0.0) return iv_make(-kInf, 1.0 / a.lo);
  return whole();
}

double ipow(double x, int k) { return std::pow(x, static_cast<double>(k)); }

Interval iv_pow(const Interval& a, int k) {
  if (k == 0) return point(1.0);
  if (k < 0) return iv_recip(iv_pow(a, -k));
  if (k % 2 == 1) return iv_make(ipow(a.lo, k), ipow(a.hi, k));
  double big = std::max(std::fabs(a.lo), std::fabs(a.hi));
  double small = iv_has_zero(a) ? 0.0 : std::min(std::fabs(a.lo), std::fabs(a.hi));
  return iv_make(ipow(small, k), ipow(big, k));
}

// Tiny outward inflation so roundoff in roots never cuts a feasible point.
Interval iv_widen(Interval a) {
  a.lo -= kDust * std::max(1.0, std::fabs(a.lo));
  a.hi += kDust * std::max(1.0, std::fabs(a.hi));
  return a;
}

double root_pos(double v, int k) {  // v >= 0
  if (std::isinf(v)) return v;
  return std::pow(v, 1.0 / k);
}

double root_odd(double v, int k) {
  if (v >= 0.0) return root_pos(v, k);
  return -root_pos(-v, k);
}

Interval var_range(const BoundsBox& box, int var) {
  return iv_make(box.lb[var - 1], box.ub[var - 1]);
}

// Forward/backward interval revision of one expression-tree constraint.
// The per-node interval store is caller-provided scratch to keep the hot
// path allocation free.
struct Hc4 {
  const ExprTree& t;
  BoundsBox& box;
  const std::vector<bool>& integral;
  double tol;
  std::vector<Interval>& range;  // per node, tightened by the downward pass
  bool bad = false;

  Hc4(const ExprTree& tree, BoundsBox& b, const std::vector<bool>& ints, double tl,
      std::vector<Interval>& scratch)
      : t(tree), box(b), integral(ints), tol(tl), range(scratch) {
    range.assign(tree.size(), Interval{});
  }

  Interval up(int id) {
    const ExprNode& n = t.node(id);
    Interval out;
    switch (n.kind) {
      case ExprNode::Kind::Value:
        out = point(n.value);
        break;
      case ExprNode::Kind::Var:
        out = var_range(box, n.var);
        break;
      case ExprNode::Kind::Operator: {
        switch (n.op) {
          case Op::Sum: {
            out = point(0.0);
            for (std::size_t i = 0; i < n.children.size(); ++i)
              out = iv_add(out, iv_scale(up(n.children[i]), n.coefs[i]));
            break;
          }
          case Op::Product: {
            out = point(1.0);
            for (std::size_t i = 0; i < n.children.size(); ++i)
              out = iv_mul(out, iv_scale(up(n.children[i]), n.coefs[i]));
            break;
          }
          case Op::Power:
            out = iv_pow(iv_scale(up(n.children[0]), n.coefs[0]), n.exponent);
            break;
          case Op::Abs:
            out = iv_abs(iv_scale(up(n.children[0]), n.coefs[0]));
            break;
          case Op::Negate:
            out = iv_neg(iv_scale(up(n.children[0]), n.coefs[0]));
            break;
        }
        break;
      }
    }
    range[id] = out;
    return out;
  }

  void tighten_var(int var, const Interval& r) {
    int i = var - 1;
    double lo = r.lo, hi = r.hi;
    if (integral[i]) {
      lo = std::ceil(lo - tol);
      hi = std::floor(hi + tol);
    }
    if (lo > box.lb[i] + kDust * std::max(1.0, std::fabs(lo))) box.lb[i] = lo;
    if (hi < box.ub[i] - kDust * std::max(1.0, std::fabs(hi))) box.ub[i] = hi;
    if (box.empty_at(i, tol)) bad = true;
  }

  // Child requirement for an even-power/abs image in [rl, rh].
  Interval mirror_preimage(const Interval& cur, double rl, double rh) {
    rl = std::max(rl, 0.0);
    Interval pos = iv_intersect(cur, iv_make(rl, rh));
    Interval neg = iv_intersect(cur, iv_make(-rh, -rl));
    bool pe = pos.empty(), ne = neg.empty();
    if (pe && ne) {
      bad = true;
      return cur;
    }
    if (pe) return neg;
    if (ne) return pos;
    return iv_make(neg.lo, pos.hi);
  }

  void down(int id, Interval req) {
    if (bad) return;
    Interval r = iv_intersect(range[id], req);
    if (r.empty()) {
      double slack = kDust * std::max({1.0, std::fabs(r.lo), std::fabs(r.hi)});
      if (r.lo > r.hi + slack) {
        bad = true;
        return;
      }
      double mid = 0.5 * (r.lo + r.hi);
      r = point(mid);
    }
    range[id] = r;
    const ExprNode& n = t.node(id);
    switch (n.kind) {
      case ExprNode::Kind::Value:
        return;  // emptiness already checked
      case ExprNode::Kind::Var:
        tighten_var(n.var, r);
        return;
      case ExprNode::Kind::Operator:
        break;
    }
    std::size_t m = n.children.size();
    auto kid = [&](std::size_t i) {
      return iv_scale(range[n.children[i]], n.coefs[i]);
    };
    auto push = [&](std::size_t i, Interval want) {
      double c = n.coefs[i];
      if (c == 0.0) return;
      down(n.children[i], iv_widen(iv_scale(want, 1.0 / c)));
    };
    switch (n.op) {
      case Op::Sum: {
        for (std::size_t i = 0; i < m && !bad; ++i) {
          Interval rest = point(0.0);
          for (std::size_t k = 0; k < m; ++k)
            if (k != i) rest = iv_add(rest, kid(k));
          push(i, iv_sub(r, rest));
        }
        break;
      }
      case Op::Product: {
        for (std::size_t i = 0; i < m && !bad; ++i) {
          Interval rest = point(1.0);
          for (std::size_t k = 0; k < m; ++k)
            if (k != i) rest = iv_mul(rest, kid(k));
          if (iv_has_zero(rest)) continue;  // no usable quotient
          push(i, iv_mul(r, iv_recip(rest)));
        }
        break;
      }
      case Op::Negate:
        push(0, iv_neg(r));
        break;
      case Op::Abs:
        push(0, mirror_preimage(kid(0), r.lo, r.hi));
        break;
      case Op::Power: {
        int k = n.exponent;
        Interval img = r;
        if (k == 0) break;
        if (k < 0) {
          img = iv_recip(img);
          if (img.lo == -kInf && img.hi == kInf) break;  // no usable preimage
          k = -k;
        }
        if (k % 2 == 1) {
          push(0, iv_make(root_odd(img.lo, k), root_odd(img.hi, k)));
        } else {
          if (img.hi < 0.0) {
            bad = true;
            break;
          }
          double rl = img.lo <= 0.0 ? 0.0 : root_pos(img.lo, k);
          double rh = root_pos(img.hi, k);
          push(0, mirror_preimage(kid(0), rl, rh));
        }
        break;
      }
    }
  }
};

Interval rel_requirement(Rel rel, double rhs) {
  double s = 1e-9 * std::max(1.0, std::fabs(rhs));
  switch (rel) {
    case Rel::Le:
      return iv_make(-kInf, rhs + s);
    case Rel::Ge:
      return iv_make(rhs - s, kInf);
    case Rel::Eq:
      return iv_make(rhs - s, rhs + s);
  }
  return whole();
}

// One forward/backward sweep; false when the box proves infeasible.
bool revise_constraint(const ExprTree& t, Rel rel, double rhs, BoundsBox& box,
                       const std::vector<bool>& integral, double tol) {
  if (t.empty()) return true;
  static thread_local std::vector<Interval> scratch;
  Hc4 h(t, box, integral, tol, scratch);
  h.up(t.root());
  h.down(t.root(), rel_requirement(rel, rhs));
  return !h.bad;
}

// sum coef_i * x_i >= rhs: activity check plus per-variable tightening.
bool propagate_linear_ge(const std::vector<int>& vars, const std::vector<double>& coefs,
                         double rhs, BoundsBox& box, const std::vector<bool>& integral,
                         double tol) {
  std::size_t m = vars.size();
  static thread_local std::vector<Interval> c;
  c.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    c[i] = iv_scale(var_range(box, vars[i]), coefs[i]);
  double slack = 1e-9 * std::max(1.0, std::fabs(rhs));
  double total_hi = 0.0;
  for (const Interval& k : c) total_hi += k.hi;
  if (total_hi < rhs - slack) return false;
  for (std::size_t i = 0; i < m; ++i) {
    double rest_hi = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      if (k != i) rest_hi += c[k].hi;
    if (std::isinf(rest_hi)) continue;
    double need = rhs - slack - rest_hi;  // coef_i * x_i >= need
    if (need <= c[i].lo) continue;
    int v = vars[i] - 1;
    double a = coefs[i];
    if (a > 0.0) {
      double lo = need / a;
      if (integral[v]) lo = std::ceil(lo - tol);
      if (lo > box.lb[v]) box.lb[v] = lo;
    } else if (a < 0.0) {
      double hi = need / a;
      if (integral[v]) hi = std::floor(hi + tol);
      if (hi < box.ub[v]) box.ub[v] = hi;
    }
    if (box.empty_at(v, tol)) return false;
  }
  return true;
}

// Worst conflict-edge load x_u + x_v compared against rhs.
bool propagate_stable(const Constraint& cons, BoundsBox& box,
                      const std::vector<bool>& integral, double tol) {
  const StableSetData& s = cons.stable;
  double slack = 1e-9 * std::max(1.0, std::fabs(cons.rhs));
  if (s.edges.empty()) {
    switch (cons.rel) {
      case Rel::Le:
        return 0.0 <= cons.rhs + slack;
      case Rel::Ge:
        return 0.0 >= cons.rhs - slack;
      case Rel::Eq:
        return std::fabs(cons.rhs) <= slack;
    }
  }
  if (cons.rel == Rel::Le || cons.rel == Rel::Eq) {
    for (auto [a, b] : s.edges) {
      int u = s.vars[a] - 1, v = s.vars[b] - 1;
      double cap_u = cons.rhs + slack - box.lb[v];
      double cap_v = cons.rhs + slack - box.lb[u];
      if (integral[u]) cap_u = std::floor(cap_u + tol);
      if (integral[v]) cap_v = std::floor(cap_v + tol);
      if (cap_u < box.ub[u]) box.ub[u] = cap_u;
      if (cap_v < box.ub[v]) box.ub[v] = cap_v;
      if (box.empty_at(u, tol) || box.empty_at(v, tol)) return false;
    }
  }
  if (cons.rel == Rel::Ge || cons.rel == Rel::Eq) {
    double best = -kInf;
    for (auto [a, b] : s.edges)
      best = std::max(best, box.ub[s.vars[a] - 1] + box.ub[s.vars[b] - 1]);
    if (best < cons.rhs - slack) return false;
  }
  return true;
}

struct PropagateEnv {
  const Minlp& p;
  const HandlerPlan& plan;
  std::vector<double> centers;
  std::vector<bool> integral;
  std::vector<int> obj_vars;      // objective cutoff as -obj . x >= -(cutoff)
  std::vector<double> obj_ncoef;
  SolveParams prm;
};

// Plan actions + constraint revision to a fixpoint.  False = infeasible.
bool propagate(const PropagateEnv& env, bool have_inc, double primal, BoundsBox& box) {
  double tol = 1e-9;
  static thread_local std::vector<double> snap_lb, snap_ub;
  for (int round = 0; round < std::max(1, env.prm.fbbt_rounds); ++round) {
    snap_lb = box.lb;
    snap_ub = box.ub;
    for (const PlanAction& a : env.plan.actions) {
      switch (a.kind) {
        case ActionKind::LexReduce:
          if (!lex_reduce(a.gamma, env.centers, env.integral, box, tol)) return false;
          break;
        case ActionKind::SortRows:
          if (!sort_rows_static(a.rows, env.centers, env.integral, box, tol)) return false;
          break;
        case ActionKind::RestrictDomain: {
          int v = a.var - 1;
          double lo = a.new_lb;
          if (env.integral[v]) lo = std::ceil(lo - tol);
          if (lo > box.lb[v]) box.lb[v] = lo;
          if (box.empty_at(v, tol)) return false;
          break;
        }
        case ActionKind::StaticInequality:
          if (!propagate_linear_ge(a.ineq.vars, a.ineq.coefs, a.ineq.rhs, box,
                                   env.integral, tol))
            return false;
          break;
      }
    }
    if (have_inc && !env.obj_vars.empty()) {
      double cutoff =
          primal - 0.999 * env.prm.gap_tol * std::max(1.0, std::fabs(primal));
      if (!propagate_linear_ge(env.obj_vars, env.obj_ncoef, -cutoff, box,
                               env.integral, tol))
        return false;
    }
    for (const Constraint& c : env.p.cons) {
      bool ok = c.tag == ConsTag::StableSet
                    ? propagate_stable(c, box, env.integral, tol)
                    : revise_constraint(c.tree, c.rel, c.rhs, box, env.integral, tol);
      if (!ok) return false;
    }
    bool changed = false;
    for (int i = 0; i < box.n() && !changed; ++i) {
      double s = 1e-9 * std::max({1.0, std::fabs(box.lb[i]), std::fabs(box.ub[i])});
      changed = box.lb[i] > snap_lb[i] + s || box.ub[i] < snap_ub[i] - s;
    }
    if (!changed) break;
  }
  return true;
}

double objective_lb(const Minlp& p, const BoundsBox& box) {
  Interval total = point(0.0);
  for (int i = 0; i < p.nvars(); ++i)
    total = iv_add(total, iv_scale(var_range(box, i + 1), p.vars[i].obj));
  return total.lo;
}

double objective_value(const Minlp& p, const std::vector<double>& x) {
  double v = 0.0;
  for (int i = 0; i < p.nvars(); ++i) v += p.vars[i].obj * x[i];
  return v;
}

double stable_worst_load(const Constraint& cons, const std::vector<double>& x) {
  double worst = -kInf;
  for (auto [a, b] : cons.stable.edges)
    worst = std::max(worst, x[cons.stable.vars[a] - 1] + x[cons.stable.vars[b] - 1]);
  if (cons.stable.edges.empty()) worst = 0.0;
  return worst;
}

// Feasibility of a point for the original model (bounds, integrality,
// constraints) within a relative tolerance.
bool point_feasible(const Minlp& p, const std::vector<double>& x, double tol) {
  for (int i = 0; i < p.nvars(); ++i) {
    const Variable& v = p.vars[i];
    double s = tol * std::max({1.0, std::fabs(v.lb), std::fabs(v.ub)});
    if (x[i] < v.lb - s || x[i] > v.ub + s) return false;
    if (v.integral && std::fabs(x[i] - std::nearbyint(x[i])) > tol) return false;
  }
  for (const Constraint& c : p.cons) {
    double val;
    if (c.tag == ConsTag::StableSet) {
      val = stable_worst_load(c, x);
    } else {
      if (c.tree.empty()) continue;
      val = evaluate(c.tree, x);
    }
    double s = tol * std::max(1.0, std::fabs(c.rhs));
    switch (c.rel) {
      case Rel::Le:
        if (val > c.rhs + s) return false;
        break;
      case Rel::Ge:
        if (val < c.rhs - s) return false;
        break;
      case Rel::Eq:
        if (std::fabs(val - c.rhs) > s) return false;
        break;
    }
  }
  return true;
}

struct SplitMix {
  std::uint64_t s;
  explicit SplitMix(std::uint64_t seed) : s(seed) {}
  double next() {  // uniform in [0, 1)
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

double squared_violation(const Minlp& p, const std::vector<double>& x) {
  double total = 0.0;
  for (const Constraint& c : p.cons) {
    double val;
    if (c.tag == ConsTag::StableSet)
      val = stable_worst_load(c, x);
    else if (c.tree.empty())
      continue;
    else
      val = evaluate(c.tree, x);
    double v = 0.0;
    switch (c.rel) {
      case Rel::Le:
        v = std::max(0.0, val - c.rhs);
        break;
      case Rel::Ge:
        v = std::max(0.0, c.rhs - val);
        break;
      case Rel::Eq:
        v = val - c.rhs;
        break;
    }
    total += v * v;
  }
  return total;
}

void clamp_point(const BoundsBox& box, const std::vector<bool>& integral,
                 std::vector<double>* x) {
  for (int i = 0; i < box.n(); ++i) {
    double v = std::min(std::max((*x)[i], box.lb[i]), box.ub[i]);
    if (integral[i]) {
      v = std::nearbyint(v);
      v = std::min(std::max(v, std::ceil(box.lb[i] - 1e-9)), std::floor(box.ub[i] + 1e-9));
    }
    (*x)[i] = v;
  }
}

// Gradient descent on the squared constraint violation (continuous
// coordinates only), with a Cauchy-style initial step and backtracking.
void repair_point(const Minlp& p, const BoundsBox& box, const std::vector<bool>& integral,
                  double tol, std::vector<double>* x) {
  int n = box.n();
  double v = squared_violation(p, *x);
  double target = 0.25 * tol * tol;
  std::vector<double> grad(n, 0.0), trial(n);
  for (int iter = 0; iter < 40 && v > target; ++iter) {
    double gnorm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      grad[i] = 0.0;
      if (integral[i] || box.ub[i] - box.lb[i] <= kDust) continue;
      double h = 1e-7 * std::max(1.0, std::fabs((*x)[i]));
      double keep = (*x)[i];
      (*x)[i] = keep + h;
      double fp = squared_violation(p, *x);
      (*x)[i] = keep;
      grad[i] = (fp - v) / h;
      gnorm2 += grad[i] * grad[i];
    }
    if (gnorm2 <= 1e-30) break;
    double step = v / gnorm2;
    bool improved = false;
    for (int bt = 0; bt < 10; ++bt, step *= 0.5) {
      for (int i = 0; i < n; ++i) trial[i] = (*x)[i] - step * grad[i];
      clamp_point(box, integral, &trial);
      double tv = squared_violation(p, trial);
      if (tv < v * (1.0 - 1e-9)) {
        *x = trial;
        v = tv;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
}

// One-dimensional improvement of objective-carrying coordinates: grid scan
// for the best feasible value, then bisection toward the improving bound.
void axis_polish(const Minlp& p, const BoundsBox& box, const std::vector<bool>& integral,
                 double tol, std::vector<double>* x) {
  std::vector<int> order;
  for (int i = 0; i < p.nvars(); ++i)
    if (p.vars[i].obj != 0.0) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double fa = std::fabs(p.vars[a].obj), fb = std::fabs(p.vars[b].obj);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  for (int idx : order) {
    double lo = box.lb[idx], hi = box.ub[idx];
    if (hi - lo <= kDust) continue;
    double keep = (*x)[idx];
    bool better_high = p.vars[idx].obj < 0.0;
    double best = std::numeric_limits<double>::quiet_NaN();
    auto try_value = [&](double t) {
      (*x)[idx] = t;
      if (!point_feasible(p, *x, tol)) return;
      if (std::isnan(best) || (better_high ? t > best : t < best)) best = t;
    };
    if (integral[idx] && hi - lo <= 64.0) {
      for (double t = std::ceil(lo - 1e-9); t <= hi + 1e-9; t += 1.0) try_value(t);
    } else {
      for (int k = 0; k <= 32; ++k) {
        double t = lo + (hi - lo) * k / 32.0;
        if (integral[idx]) t = std::nearbyint(t);
        try_value(t);
      }
    }
    if (std::isnan(best)) {
      (*x)[idx] = keep;
      continue;
    }
    if (!integral[idx]) {
      double a = best, b = better_high ? hi : lo;  // a feasible, move toward b
      for (int it = 0; it < 40 && std::fabs(b - a) > 1e-12; ++it) {
        double m = 0.5 * (a + b);
        (*x)[idx] = m;
        if (point_feasible(p, *x, tol))
          a = m;
        else
          b = m;
      }
      best = a;
    }
    (*x)[idx] = best;
  }
}

// Joint line search along the ray from the reflection centers through the
// point, re-polishing the objective coordinates at each step.  Coupled
// constraints often pin every single coordinate (so per-axis moves stall)
// while a joint rescaling still improves; the ray through the centers is the
// natural one-parameter family for box-symmetric layouts.  Works against the
// original variable bounds: an incumbent does not have to stay inside the
// node box.
bool center_ray_polish(const Minlp& p, const std::vector<double>& xi,
                       const std::vector<bool>& integral, double tol,
                       std::vector<double>* x) {
  int n = p.nvars();
  BoundsBox full = BoundsBox::of(p);
  std::vector<double> probe(n), best_vec;
  double best_val = kInf;

  auto run_dir = [&](const std::vector<double>& dir) {
    double span = 0.0;
    double lam_hi = 8.0;
    for (int i = 0; i < n; ++i) {
      if (dir[i] == 0.0) continue;
      span = std::max(span, std::fabs(dir[i]));
      double room = dir[i] > 0 ? p.vars[i].ub - xi[i] : xi[i] - p.vars[i].lb;
      if (!std::isinf(room)) lam_hi = std::min(lam_hi, room / std::fabs(dir[i]));
    }
    if (span <= kDust || lam_hi <= kDust) return;
    auto at = [&](double lam) {
      probe = *x;
      for (int i = 0; i < n; ++i) {
        if (dir[i] == 0.0) continue;
        double v = xi[i] + lam * dir[i];
        probe[i] = std::min(std::max(v, p.vars[i].lb), p.vars[i].ub);
      }
    };
    auto score = [&](double lam) {
      at(lam);
      if (!point_feasible(p, probe, tol)) return kInf;
      axis_polish(p, full, integral, tol, &probe);
      if (!point_feasible(p, probe, tol)) return kInf;
      double v = objective_value(p, probe);
      if (v < best_val) {
        best_val = v;
        best_vec = probe;
      }
      return v;
    };

    const int kGrid = 16;
    int best_k = -1;
    double best_grid = kInf;
    for (int k = 0; k <= kGrid; ++k) {
      double v = score(lam_hi * k / kGrid);
      if (v < best_grid) {
        best_grid = v;
        best_k = k;
      }
    }
    const double gr = 0.6180339887498949;
    if (best_k < 0) {
      // No feasible sample: walk toward the violation minimum, then repair.
      double a = 0.0, b = lam_hi;
      auto viol = [&](double lam) {
        at(lam);
        return squared_violation(p, probe);
      };
      double u = b - gr * (b - a), w = a + gr * (b - a);
      double fu = viol(u), fw = viol(w);
      for (int it = 0; it < 24; ++it) {
        if (fu <= fw) {
          b = w;
          w = u;
          fw = fu;
          u = b - gr * (b - a);
          fu = viol(u);
        } else {
          a = u;
          u = w;
          fu = fw;
          w = a + gr * (b - a);
          fw = viol(w);
        }
      }
      at(fu <= fw ? u : w);
      std::vector<double> cand = probe;
      repair_point(p, full, integral, tol, &cand);
      if (!point_feasible(p, cand, tol)) return;
      axis_polish(p, full, integral, tol, &cand);
      if (!point_feasible(p, cand, tol)) return;
      double v = objective_value(p, cand);
      if (v < best_val) {
        best_val = v;
        best_vec = cand;
      }
    } else {
      // Golden-section refinement of the objective around the best cell.
      double a = lam_hi * std::max(0, best_k - 1) / kGrid;
      double b = lam_hi * std::min(kGrid, best_k + 1) / kGrid;
      double u = b - gr * (b - a), w = a + gr * (b - a);
      double fu = score(u), fw = score(w);
      for (int it = 0; it < 28; ++it) {
        if (fu <= fw) {
          b = w;
          w = u;
          fw = fu;
          u = b - gr * (b - a);
          fu = score(u);
        } else {
          a = u;
          u = w;
          fu = fw;
          w = a + gr * (b - a);
          fw = score(w);
        }
      }
    }
  };

  // Two ray directions: through the point itself, and through its sign
  // pattern (unit magnitudes).  The latter reaches equal-magnitude corner
  // layouts from any node whose midpoint merely has the right signs.
  std::vector<double> dir(n, 0.0), sgn(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (integral[i] || p.vars[i].obj != 0.0) continue;
    double d = (*x)[i] - xi[i];
    if (std::fabs(d) <= kDust) continue;
    dir[i] = d;
    sgn[i] = d > 0 ? 1.0 : -1.0;
  }
  run_dir(dir);
  run_dir(sgn);
  if (best_vec.empty()) return false;
  *x = best_vec;
  return true;
}

struct Node {
  BoundsBox box;
  double bound = -kInf;
  long id = 0;
  double primal_mark = kInf;  // incumbent value when the box was propagated
};

struct NodeWorse {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

Interval interval_eval(const ExprTree& t, const BoundsBox& box) {
  if (t.empty()) throw std::invalid_argument("expr: empty tree");
  std::vector<bool> ints(box.n(), false);
  std::vector<Interval> scratch;
  // The upward pass only reads the box.
  Hc4 h(t, const_cast<BoundsBox&>(box), ints, 1e-9, scratch);
  return h.up(t.root());
}

SolveResult solve(const Minlp& p, const HandlerPlan& plan, const SolveParams& params) {
  SolveResult res;
  int n = p.nvars();
  PropagateEnv env{p, plan, compute_centers(p).xi, std::vector<bool>(n, false), {}, {}, params};
  for (int i = 0; i < n; ++i) {
    env.integral[i] = p.vars[i].integral;
    if (p.vars[i].obj != 0.0) {
      env.obj_vars.push_back(i + 1);
      env.obj_ncoef.push_back(-p.vars[i].obj);
    }
  }

  auto deadline_passed = [start = std::chrono::steady_clock::now(), &params]() {
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    return dt.count() > params.time_limit_sec;
  };

  double closed_min = kInf;  // least bound among boxes closed without proof
  bool closed_unproven = false;
  long next_id = 0;
  long stale_pops = 0;   // pops since the last full incumbent probe
  long next_full = 100;  // full-probe backoff threshold
  std::priority_queue<Node, std::vector<Node>, NodeWorse> open;

  auto try_incumbent = [&](const BoundsBox& box, long seed, bool full) {
    std::vector<double> base(n);
    for (int i = 0; i < n; ++i) {
      double lo = box.lb[i], hi = box.ub[i];
      double mid;
      if (std::isinf(lo) && std::isinf(hi))
        mid = 0.0;
      else if (std::isinf(lo))
        mid = hi - std::max(1.0, std::fabs(hi));
      else if (std::isinf(hi))
        mid = lo + std::max(1.0, std::fabs(lo));
      else
        mid = 0.5 * (lo + hi);
      base[i] = mid;
    }
    clamp_point(box, env.integral, &base);
    SplitMix rng(0x5DEECE66DULL ^ (static_cast<std::uint64_t>(seed) * 2654435761ULL));
    bool updated = false;
    auto accept = [&](const std::vector<double>& x) {
      double v = objective_value(p, x);
      if (!res.has_incumbent ||
          v < res.primal - kDust * std::max(1.0, std::fabs(res.primal))) {
        res.primal = v;
        res.x = x;
        res.has_incumbent = true;
        updated = true;
      }
    };
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::vector<double> x = base;
      if (attempt > 0) {
        for (int i = 0; i < n; ++i) {
          double lo = box.lb[i], hi = box.ub[i];
          if (std::isinf(lo) || std::isinf(hi)) continue;
          x[i] = lo + (0.15 + 0.7 * rng.next()) * (hi - lo);
        }
        clamp_point(box, env.integral, &x);
      }
      std::vector<double> start = x;
      bool ok = point_feasible(p, x, params.feas_tol);
      if (!ok && (full || !res.has_incumbent || seed % 16 == 0)) {
        // The descent repair is the expensive path; outside full probes,
        // once an incumbent exists, spend it only on a sparse node subset.
        repair_point(p, box, env.integral, params.feas_tol, &x);
        ok = point_feasible(p, x, params.feas_tol);
      }
      if (ok) {
        axis_polish(p, box, env.integral, params.feas_tol, &x);
        if (point_feasible(p, x, params.feas_tol)) accept(x);
      }
      if (full) {
        std::vector<double> rx = start;
        if (center_ray_polish(p, env.centers, env.integral, params.feas_tol, &rx) &&
            point_feasible(p, rx, params.feas_tol))
          accept(rx);
      }
      // Jitters are fallback for cheap probes; full probes always spend them
      // (jittered sign patterns reach layouts the heap order hides).
      if (attempt == 0 && res.has_incumbent && !full) break;
    }
    return updated;
  };

  auto finish_exhausted = [&]() {
    if (res.has_incumbent) {
      double dual = std::min(closed_min, res.primal);
      res.dual_bound = std::max(res.dual_bound, dual);
      double gap = (res.primal - res.dual_bound) / std::max(1.0, std::fabs(res.primal));
      if (gap <= params.gap_tol + kDust) {
        res.status = SolveStatus::Optimal;
        res.message = "optimal within gap tolerance";
      } else {
        res.status = SolveStatus::Limit;
        res.message = "search exhausted at box resolution limit";
      }
    } else if (!closed_unproven) {
      res.status = SolveStatus::Infeasible;
      res.dual_bound = kInf;
      res.message = "proven infeasible";
    } else {
      res.status = SolveStatus::Limit;
      res.message = "no feasible point found at resolution limit";
    }
  };

  BoundsBox root = BoundsBox::of(p);
  for (int i = 0; i < n; ++i) {
    if (!env.integral[i]) continue;
    root.lb[i] = std::ceil(root.lb[i] - 1e-9);
    root.ub[i] = std::floor(root.ub[i] + 1e-9);
    if (root.empty_at(i)) {
      res.status = SolveStatus::Infeasible;
      res.dual_bound = kInf;
      res.message = "proven infeasible";
      return res;
    }
  }
  // Prune once a box provably cannot improve the incumbent by more than the
  // remaining gap tolerance; keeps the final gap within params.gap_tol.
  auto prune_at = [&]() {
    return res.primal - 0.999 * params.gap_tol * std::max(1.0, std::fabs(res.primal));
  };

  if (propagate(env, res.has_incumbent, res.primal, root)) {
    try_incumbent(root, next_id, true);
    open.push(Node{root, objective_lb(p, root), next_id++, res.primal});
  }

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (res.nodes >= params.node_limit) {
      res.dual_bound = std::max(res.dual_bound, std::min(node.bound, closed_min));
      res.status = SolveStatus::Limit;
      res.message = "node limit reached";
      return res;
    }
    if (deadline_passed()) {
      res.dual_bound = std::max(res.dual_bound, std::min(node.bound, closed_min));
      res.status = SolveStatus::Limit;
      res.message = "time limit reached";
      return res;
    }
    res.nodes++;
    double dual = std::min(node.bound, closed_min);
    res.dual_bound = std::max(res.dual_bound, dual);
    double gap = 1.0;
    if (res.has_incumbent) {
      gap = (res.primal - res.dual_bound) / std::max(1.0, std::fabs(res.primal));
      gap = std::min(std::max(gap, 0.0), 1.0);
      if (gap <= params.gap_tol) {
        res.status = SolveStatus::Optimal;
        res.message = "optimal within gap tolerance";
        // Node bounds include the incumbent cutoff, so the heap bound can
        // exceed the primal; never certify beyond the incumbent.
        res.dual_bound = std::min(res.dual_bound, res.primal);
        return res;
      }
    }
    res.pd_integral += gap;

    // Re-propagate only when the incumbent changed since the box was pushed.
    if (node.primal_mark != res.primal) {
      if (!propagate(env, res.has_incumbent, res.primal, node.box)) continue;
    }
    double bound = std::max(node.bound, objective_lb(p, node.box));
    if (res.has_incumbent && bound >= prune_at()) {
      closed_min = std::min(closed_min, bound);
      continue;
    }
    // Cheap probes while the box promises a real improvement; full probes
    // (unthrottled repair + center-ray search) on a backoff schedule so a
    // stalled primal keeps getting attention while the gap stays open.
    if (stale_pops++ >= next_full) {
      double before = res.primal;
      try_incumbent(node.box, node.id, true);
      stale_pops = 0;
      // Only a material improvement re-arms the fast schedule; micro steps
      // must not keep the expensive probes hot.
      bool moved = res.primal <
                   before - 0.1 * params.gap_tol * std::max(1.0, std::fabs(res.primal));
      next_full = moved ? 100 : std::min(next_full * 2, 12800L);
    } else if (!res.has_incumbent ||
               bound < res.primal -
                           10.0 * params.gap_tol * std::max(1.0, std::fabs(res.primal))) {
      try_incumbent(node.box, node.id, false);
    }

    // Widest relative width; ties to the lowest index.
    int pick = -1;
    double pick_w = 0.0;
    for (int i = 0; i < n; ++i) {
      double w = node.box.ub[i] - node.box.lb[i];
      if (env.integral[i] ? w < 1.0 : w <= kWidthTol) continue;
      double rel = w / std::max({1.0, std::fabs(node.box.lb[i]), std::fabs(node.box.ub[i])});
      if (pick < 0 || rel > pick_w) {
        pick = i;
        pick_w = rel;
      }
    }
    if (pick < 0) {
      closed_min = std::min(closed_min, bound);
      closed_unproven = true;
      continue;
    }
    double lo = node.box.lb[pick], hi = node.box.ub[pick];
    double mid;
    if (std::isinf(lo) && std::isinf(hi))
      mid = 0.0;
    else if (std::isinf(lo))
      mid = hi - std::max(1.0, std::fabs(hi));
    else if (std::isinf(hi))
      mid = lo + std::max(1.0, std::fabs(lo));
    else
      mid = 0.5 * (lo + hi);
    BoundsBox left = node.box, right = node.box;
    if (env.integral[pick]) {
      left.ub[pick] = std::floor(mid);
      right.lb[pick] = std::floor(mid) + 1.0;
      if (left.ub[pick] < lo) left.ub[pick] = lo;  // defensive; mid >= lo
      if (right.lb[pick] > hi) right.lb[pick] = hi;
    } else {
      left.ub[pick] = mid;
      right.lb[pick] = mid;
    }
    for (BoundsBox* child : {&left, &right}) {
      if (child->empty_at(pick)) continue;
      if (!propagate(env, res.has_incumbent, res.primal, *child)) continue;
      double cb = std::max(bound, objective_lb(p, *child));
      if (res.has_incumbent && cb >= prune_at()) {
        closed_min = std::min(closed_min, cb);
        continue;
      }
      open.push(Node{*child, cb, next_id++, res.primal});
    }
  }

  finish_exhausted();
  return res;
}

}  // namespace symref
