// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/builders.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace symref {

namespace {

// Operator ids are namespaced per handler; gadget nodes get dedicated local
// ids so they can never collide with plain tree copies.
int plain_local(const ExprNode& n) {
  switch (n.op) {
    case Op::Sum: return 1;
    case Op::Product: return 2;
    case Op::Abs: return 3;
    case Op::Negate: return 4;
    case Op::Power: return 1000 + n.exponent;
  }
  return 0;
}

int plain_op_id(int handler, const ExprNode& n) {
  return handler * 10000 + plain_local(n);
}

int sum_gadget_op_id() { return kHandlerExprEnhanced * 10000 + 1; }

int difference_op_id(Op op, int exponent) {
  int local = op == Op::Abs ? 2500 : 2000 + exponent;
  return kHandlerExprEnhanced * 10000 + local;
}

int even_op_id(Op op, int exponent) {
  int local = op == Op::Abs ? 3500 : 3000 + exponent;
  return kHandlerExprEnhanced * 10000 + local;
}

int bilinear_op_id() { return kHandlerExprEnhanced * 10000 + 4000; }

int stable_member_op_id() { return kHandlerStableSet * 10000 + 1; }

std::pair<double, double> sides(const Constraint& c) {
  switch (c.rel) {
    case Rel::Le: return {-kInf, c.rhs};
    case Rel::Ge: return {c.rhs, kInf};
    case Rel::Eq: return {c.rhs, c.rhs};
  }
  return {-kInf, kInf};
}

// One variable occurrence with coefficient alpha: a valued edge to v_i, plus
// the mirrored -alpha edge to v_{-i} in reflection mode.
void link_var(Sdg& g, int from, int var, double alpha) {
  g.add_edge(from, g.var_node(var), alpha);
  if (g.mode() == SymMode::Reflection) g.add_edge(from, g.var_node(-var), -alpha);
}

void attach(Sdg& g, int parent, int child, double arc) {
  if (arc == 1.0)
    g.add_edge(parent, child);
  else
    g.add_edge(parent, child, arc);
}

void copy_plain(Sdg& g, const ExprTree& t, int id, int parent, double arc,
                int handler) {
  const ExprNode& n = t.node(id);
  switch (n.kind) {
    case ExprNode::Kind::Value: {
      attach(g, parent, g.add_value_node(n.value), arc);
      return;
    }
    case ExprNode::Kind::Var:
      link_var(g, parent, n.var, arc);
      return;
    case ExprNode::Kind::Operator: {
      int v = g.add_operator_node(plain_op_id(handler, n));
      attach(g, parent, v, arc);
      for (std::size_t i = 0; i < n.children.size(); ++i)
        copy_plain(g, t, n.children[i], v, n.coefs[i], handler);
      return;
    }
  }
}

using MatchMap = std::map<int, const PatternMatch*>;

void copy_enhanced(Sdg& g, const ExprTree& t, int id, int parent, double arc,
                   const MatchMap& matches);

// Sum gadget: +-alpha edge pairs per variable plus one constant Value node.
// folded == true moves the constant into the anchor sides, leaving Value(0).
void emit_sum_gadget(Sdg& g, const ExprTree& t, const PatternMatch& m,
                     int parent, double arc, bool folded, const MatchMap& matches) {
  int s = g.add_operator_node(sum_gadget_op_id());
  attach(g, parent, s, arc);
  g.add_edge(s, g.add_value_node(folded ? 0.0 : m.constant));
  for (const LinearTerm& term : m.terms) {
    if (term.coef == 0.0) continue;
    link_var(g, s, term.var, term.coef);
  }
  for (int child : m.plain_children) copy_enhanced(g, t, child, s, 1.0, matches);
}

// Two auxiliary nodes carry the positive and the negated reading of the pair.
void emit_pair_gadget(Sdg& g, int op_id, double aux_value, int u, int v,
                      int parent, double arc) {
  int d = g.add_operator_node(op_id);
  attach(g, parent, d, arc);
  int a1 = g.add_value_node(aux_value);
  g.add_edge(d, a1);
  g.add_edge(a1, g.var_node(u));
  g.add_edge(a1, g.var_node(v));
  if (g.mode() == SymMode::Reflection) {
    int a2 = g.add_value_node(aux_value);
    g.add_edge(d, a2);
    g.add_edge(a2, g.var_node(-u));
    g.add_edge(a2, g.var_node(-v));
  }
}

void emit_even_gadget(Sdg& g, const PatternMatch& m, int parent, double arc) {
  int e = g.add_operator_node(even_op_id(m.even_op, m.even_exponent));
  attach(g, parent, e, arc);
  g.add_edge(e, g.var_node(m.terms[0].var), m.scale);
  if (g.mode() == SymMode::Reflection)
    g.add_edge(e, g.var_node(-m.terms[0].var), m.scale);
}

void copy_enhanced(Sdg& g, const ExprTree& t, int id, int parent, double arc,
                   const MatchMap& matches) {
  auto it = matches.find(id);
  if (it != matches.end()) {
    const PatternMatch& m = *it->second;
    switch (m.kind) {
      case PatternKind::AffineSum:
        emit_sum_gadget(g, t, m, parent, arc, false, matches);
        return;
      case PatternKind::SquaredDifference:
        emit_pair_gadget(g, difference_op_id(m.even_op, m.even_exponent), m.scale,
                         m.terms[0].var, m.terms[1].var, parent, arc);
        return;
      case PatternKind::Bilinear:
        emit_pair_gadget(g, bilinear_op_id(), m.scale, m.terms[0].var,
                         m.terms[1].var, parent, arc);
        return;
      case PatternKind::EvenFunction:
        emit_even_gadget(g, m, parent, arc);
        return;
    }
  }
  const ExprNode& n = t.node(id);
  if (n.kind != ExprNode::Kind::Operator) {
    copy_plain(g, t, id, parent, arc, kHandlerExprEnhanced);
    return;
  }
  int v = g.add_operator_node(plain_op_id(kHandlerExprEnhanced, n));
  attach(g, parent, v, arc);
  for (std::size_t i = 0; i < n.children.size(); ++i)
    copy_enhanced(g, t, n.children[i], v, n.coefs[i], matches);
}

}  // namespace

BuildResult build_expression_constraint(const Minlp& p, const Centers& c,
                                        int cons_index, Sdg& g) {
  const Constraint& cons = p.cons.at(cons_index);
  if (cons.tree.empty()) return {false, "empty expression"};
  ExprTree t = hoist_coefficients(shift_to_centers(cons.tree, c.xi));
  auto [lhs, rhs] = sides(cons);
  int anchor = g.add_constraint_node(kHandlerExpr, lhs, rhs);
  copy_plain(g, t, t.root(), anchor, 1.0, kHandlerExpr);
  return {};
}

BuildResult build_enhanced_constraint(const Minlp& p, const Centers& c,
                                      int cons_index, Sdg& g) {
  const Constraint& cons = p.cons.at(cons_index);
  if (cons.tree.empty()) return {false, "empty expression"};
  ExprTree t = hoist_coefficients(shift_to_centers(cons.tree, c.xi));
  auto [lhs, rhs] = sides(cons);
  int root = t.root();

  // Entirely affine constraints collapse to one sum gadget regardless of the
  // root operator.
  if (is_affine_subtree(t, root)) {
    PatternMatch m;
    m.kind = PatternKind::AffineSum;
    m.root = root;
    if (!flatten_affine(t, root, 1.0, &m.terms, &m.constant))
      return {false, "affine flattening failed"};
    int anchor = g.add_constraint_node(
        kHandlerExprEnhanced, lhs == -kInf ? lhs : lhs - m.constant,
        rhs == kInf ? rhs : rhs - m.constant);
    emit_sum_gadget(g, t, m, anchor, 1.0, true, {});
    return {};
  }

  std::vector<PatternMatch> patterns = find_patterns(t);
  MatchMap matches;
  for (const PatternMatch& m : patterns) matches[m.root] = &m;

  // A sum at the root folds its constant into the anchor sides so that
  // constraints differing only by shifts stay comparable.
  auto it = matches.find(root);
  if (it != matches.end() && it->second->kind == PatternKind::AffineSum) {
    const PatternMatch& m = *it->second;
    int anchor = g.add_constraint_node(
        kHandlerExprEnhanced, lhs == -kInf ? lhs : lhs - m.constant,
        rhs == kInf ? rhs : rhs - m.constant);
    emit_sum_gadget(g, t, m, anchor, 1.0, true, matches);
    return {};
  }

  int anchor = g.add_constraint_node(kHandlerExprEnhanced, lhs, rhs);
  copy_enhanced(g, t, root, anchor, 1.0, matches);
  return {};
}

BuildResult build_stable_set_constraint(const Minlp& p, const Centers& c,
                                        int cons_index, Sdg& g) {
  (void)c;
  const Constraint& cons = p.cons.at(cons_index);
  const StableSetData& s = cons.stable;
  if (s.vars.size() != s.weights.size())
    return {false, "weight list does not match member list"};
  int nmembers = static_cast<int>(s.vars.size());
  for (auto [a, b] : s.edges)
    if (a < 0 || b < 0 || a >= nmembers || b >= nmembers || a == b)
      return {false, "conflict edge out of range"};
  for (int v : s.vars)
    if (v < 1 || v > p.nvars()) return {false, "member variable out of range"};

  auto [lhs, rhs] = sides(cons);
  int anchor = g.add_constraint_node(kHandlerStableSet, lhs, rhs);
  std::vector<int> member(nmembers);
  for (int k = 0; k < nmembers; ++k) {
    member[k] = g.add_operator_node(stable_member_op_id());
    g.add_edge(anchor, member[k]);
  }
  for (auto [a, b] : s.edges) g.add_edge(member[a], member[b]);
  for (int k = 0; k < nmembers; ++k)
    g.add_edge(member[k], g.var_node(s.vars[k]), s.weights[k]);
  return {};
}

ProblemSdg build_problem_sdg(const Minlp& p, SymMode mode, bool enhance_expr) {
  Centers c = compute_centers(p);
  std::vector<VariableType> types;
  types.reserve(p.vars.size());
  for (int i = 1; i <= p.nvars(); ++i) types.push_back(variable_type(p, c, i));
  ProblemSdg out{Sdg(mode, std::move(types)), "", false};
  for (std::size_t k = 0; k < p.cons.size(); ++k) {
    BuildResult r;
    switch (p.cons[k].tag) {
      case ConsTag::Expr:
        r = enhance_expr
                ? build_enhanced_constraint(p, c, static_cast<int>(k), out.graph)
                : build_expression_constraint(p, c, static_cast<int>(k), out.graph);
        break;
      case ConsTag::ExprEnhanced:
        r = build_enhanced_constraint(p, c, static_cast<int>(k), out.graph);
        break;
      case ConsTag::StableSet:
        r = build_stable_set_constraint(p, c, static_cast<int>(k), out.graph);
        break;
    }
    if (!r.success) {
      out.error = p.cons[k].name + ": " + r.message;
      return out;
    }
  }
  out.graph.compute_colors();
  out.success = true;
  return out;
}

}  // namespace symref
