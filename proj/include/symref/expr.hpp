// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Expression trees for algebraic constraints. Nodes are values, variable
// leaves, or operators; arcs into variable leaves may carry a coefficient.

#ifndef SYMREF_EXPR_HPP
#define SYMREF_EXPR_HPP

#include <string>
#include <vector>

namespace symref {

enum class Op { Sum, Product, Power, Abs, Negate };

struct ExprNode {
  enum class Kind { Value, Var, Operator };
  Kind kind = Kind::Value;
  double value = 0.0;            // Kind::Value
  int var = 0;                   // Kind::Var, 1-based variable index
  Op op = Op::Sum;               // Kind::Operator
  int exponent = 0;              // Op::Power only
  std::vector<int> children;
  std::vector<double> coefs;     // arc labels, parallel to children
};

// Exponents are kept small so operator ids stay collision free.
inline constexpr int kMaxExponent = 400;

class ExprTree {
 public:
  int add_value(double v);
  int add_var(int index);
  int add_op(Op op, std::vector<int> children, int exponent = 0);
  void set_root(int id);
  void set_arc_coef(int parent, int child_pos, double coef);

  int root() const { return root_; }
  bool empty() const { return root_ < 0; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const ExprNode& node(int id) const { return nodes_.at(id); }
  ExprNode& node(int id) { return nodes_.at(id); }

  // Largest variable index referenced, 0 if none.
  int max_var() const;

 private:
  std::vector<ExprNode> nodes_;
  int root_ = -1;
};

// Convenience constructors for whole trees.
ExprTree make_value(double v);
ExprTree make_var(int index);

double evaluate(const ExprTree& t, const std::vector<double>& x);

// Replaces every maximal linear occurrence a*x_i (a product with a value
// factor, or a plain leaf) whose variable has a nonzero center by the sum
// a*x_i + a*xi_i.  The resulting tree is over variables shifted to their
// centers: evaluate(shifted, x - xi) == evaluate(original, x).
ExprTree shift_to_centers(const ExprTree& t, const std::vector<double>& centers);

// Collapses binary products of a value and a variable leaf into an arc
// coefficient and splices the product node.  A product at the root is kept.
ExprTree hoist_coefficients(const ExprTree& t);

enum class PatternKind { AffineSum, SquaredDifference, Bilinear, EvenFunction };

struct LinearTerm {
  int var = 0;
  double coef = 1.0;
};

struct PatternMatch {
  PatternKind kind = PatternKind::AffineSum;
  int root = -1;                     // matched tree node
  std::vector<LinearTerm> terms;     // affine part / gadget variables
  double constant = 0.0;             // affine constant
  double scale = 1.0;                // gadget payload value
  Op even_op = Op::Abs;              // SquaredDifference / EvenFunction flavor
  int even_exponent = 0;             // exponent when even_op == Op::Power
  std::vector<int> plain_children;   // non-affine children of an affine sum
};

// Greedy top-down, non-overlapping.  At a node the first applicable of
// affine sum, even-op-over-difference, bilinear product, even-op-over-variable
// wins.  Affine subtrees are flattened through nested sums and negations.
std::vector<PatternMatch> find_patterns(const ExprTree& t, double tol = 1e-9);

// Match classification helpers shared with the graph builders.
bool is_affine_subtree(const ExprTree& t, int id);
bool flatten_affine(const ExprTree& t, int id, double outer_coef,
                    std::vector<LinearTerm>* terms, double* constant);

std::string to_text(const ExprTree& t);  // s-expression rendering

std::string format_number(double v);  // shortest round-trip decimal

}  // namespace symref

#endif
