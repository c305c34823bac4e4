// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/expr.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace symref {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

int ExprTree::add_value(double v) {
  require(std::isfinite(v), "expr: value must be finite");
  ExprNode n;
  n.kind = ExprNode::Kind::Value;
  n.value = v;
  nodes_.push_back(std::move(n));
  return size() - 1;
}

int ExprTree::add_var(int index) {
  require(index >= 1, "expr: variable index must be positive");
  ExprNode n;
  n.kind = ExprNode::Kind::Var;
  n.var = index;
  nodes_.push_back(std::move(n));
  return size() - 1;
}

int ExprTree::add_op(Op op, std::vector<int> children, int exponent) {
  if (op == Op::Sum || op == Op::Product)
    require(children.size() >= 2, "expr: sum/product need at least two children");
  else
    require(children.size() == 1, "expr: unary operator needs one child");
  if (op == Op::Power)
    require(std::abs(exponent) <= kMaxExponent, "expr: exponent out of range");
  for (int c : children) require(c >= 0 && c < size(), "expr: bad child id");
  ExprNode n;
  n.kind = ExprNode::Kind::Operator;
  n.op = op;
  n.exponent = (op == Op::Power) ? exponent : 0;
  n.coefs.assign(children.size(), 1.0);
  n.children = std::move(children);
  nodes_.push_back(std::move(n));
  return size() - 1;
}

void ExprTree::set_root(int id) {
  require(id >= 0 && id < size(), "expr: bad root id");
  root_ = id;
}

void ExprTree::set_arc_coef(int parent, int child_pos, double coef) {
  require(parent >= 0 && parent < size(), "expr: bad node id");
  ExprNode& n = nodes_[parent];
  require(child_pos >= 0 && child_pos < static_cast<int>(n.children.size()),
          "expr: bad child position");
  require(std::isfinite(coef), "expr: arc coefficient must be finite");
  n.coefs[child_pos] = coef;
}

int ExprTree::max_var() const {
  int m = 0;
  for (const ExprNode& n : nodes_)
    if (n.kind == ExprNode::Kind::Var && n.var > m) m = n.var;
  return m;
}

ExprTree make_value(double v) {
  ExprTree t;
  t.set_root(t.add_value(v));
  return t;
}

ExprTree make_var(int index) {
  ExprTree t;
  t.set_root(t.add_var(index));
  return t;
}

namespace {

double eval_node(const ExprTree& t, int id, const std::vector<double>& x) {
  const ExprNode& n = t.node(id);
  switch (n.kind) {
    case ExprNode::Kind::Value:
      return n.value;
    case ExprNode::Kind::Var:
      if (n.var < 1 || n.var > static_cast<int>(x.size()))
        throw std::invalid_argument("expr: assignment too short");
      return x[n.var - 1];
    case ExprNode::Kind::Operator: {
      std::vector<double> vals(n.children.size());
      for (std::size_t i = 0; i < n.children.size(); ++i)
        vals[i] = n.coefs[i] * eval_node(t, n.children[i], x);
      switch (n.op) {
        case Op::Sum: {
          double s = 0.0;
          for (double v : vals) s += v;
          return s;
        }
        case Op::Product: {
          double s = 1.0;
          for (double v : vals) s *= v;
          return s;
        }
        case Op::Power:
          return std::pow(vals[0], n.exponent);
        case Op::Abs:
          return std::fabs(vals[0]);
        case Op::Negate:
          return -vals[0];
      }
      break;
    }
  }
  throw std::logic_error("expr: corrupt node");
}

}  // namespace

double evaluate(const ExprTree& t, const std::vector<double>& x) {
  if (t.empty()) throw std::invalid_argument("expr: empty tree");
  return eval_node(t, t.root(), x);
}

namespace {

// Copies the subtree while wrapping each maximal linear occurrence a*x_i
// with its shift constant a*xi_i.
int shift_copy(const ExprTree& src, int id, const std::vector<double>& xi,
               ExprTree& dst) {
  const ExprNode& n = src.node(id);
  switch (n.kind) {
    case ExprNode::Kind::Value:
      return dst.add_value(n.value);
    case ExprNode::Kind::Var: {
      double c = (n.var <= static_cast<int>(xi.size())) ? xi[n.var - 1] : 0.0;
      int leaf = dst.add_var(n.var);
      if (c == 0.0) return leaf;
      int cst = dst.add_value(c);
      return dst.add_op(Op::Sum, {cst, leaf});
    }
    case ExprNode::Kind::Operator: {
      // A binary product of a value and a variable is one linear occurrence.
      if (n.op == Op::Product && n.children.size() == 2) {
        const ExprNode& a = src.node(n.children[0]);
        const ExprNode& b = src.node(n.children[1]);
        const ExprNode* val = nullptr;
        const ExprNode* var = nullptr;
        int val_pos = -1, var_pos = -1;
        if (a.kind == ExprNode::Kind::Value && b.kind == ExprNode::Kind::Var) {
          val = &a; var = &b; val_pos = 0; var_pos = 1;
        } else if (b.kind == ExprNode::Kind::Value && a.kind == ExprNode::Kind::Var) {
          val = &b; var = &a; val_pos = 1; var_pos = 0;
        }
        if (val && var) {
          double alpha = val->value * n.coefs[val_pos] * n.coefs[var_pos];
          double c = (var->var <= static_cast<int>(xi.size())) ? xi[var->var - 1] : 0.0;
          int v = dst.add_value(val->value);
          int x = dst.add_var(var->var);
          int prod = dst.add_op(Op::Product, {v, x});
          dst.set_arc_coef(prod, 0, n.coefs[val_pos]);
          dst.set_arc_coef(prod, 1, n.coefs[var_pos]);
          if (c == 0.0) return prod;
          int cst = dst.add_value(alpha * c);
          return dst.add_op(Op::Sum, {cst, prod});
        }
      }
      std::vector<int> kids(n.children.size());
      std::vector<double> coefs(n.coefs);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        const ExprNode& c = src.node(n.children[i]);
        if (c.kind == ExprNode::Kind::Var && coefs[i] != 1.0) {
          // Labeled arc: the label is part of the linear occurrence.
          double ctr = (c.var <= static_cast<int>(xi.size())) ? xi[c.var - 1] : 0.0;
          int leaf = dst.add_var(c.var);
          if (ctr == 0.0) {
            kids[i] = leaf;
            continue;
          }
          int cst = dst.add_value(coefs[i] * ctr);
          int wrap = dst.add_op(Op::Sum, {cst, leaf});
          dst.set_arc_coef(wrap, 1, coefs[i]);
          kids[i] = wrap;
          coefs[i] = 1.0;
          continue;
        }
        kids[i] = shift_copy(src, n.children[i], xi, dst);
      }
      int node = dst.add_op(n.op, std::move(kids), n.exponent);
      for (std::size_t i = 0; i < coefs.size(); ++i)
        dst.set_arc_coef(node, static_cast<int>(i), coefs[i]);
      return node;
    }
  }
  throw std::logic_error("expr: corrupt node");
}

}  // namespace

ExprTree shift_to_centers(const ExprTree& t, const std::vector<double>& centers) {
  if (t.empty()) throw std::invalid_argument("expr: empty tree");
  ExprTree out;
  out.set_root(shift_copy(t, t.root(), centers, out));
  return out;
}

namespace {

// Rebuilds the subtree, returning the new id.  Hoistable products hand their
// scalar to the parent through *lift and return the bare variable leaf.
int hoist_copy(const ExprTree& src, int id, ExprTree& dst, double* lift) {
  const ExprNode& n = src.node(id);
  *lift = 1.0;
  switch (n.kind) {
    case ExprNode::Kind::Value:
      return dst.add_value(n.value);
    case ExprNode::Kind::Var:
      return dst.add_var(n.var);
    case ExprNode::Kind::Operator: {
      std::vector<int> kids;
      std::vector<double> coefs;
      kids.reserve(n.children.size());
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        double sub = 1.0;
        int kid = hoist_copy(src, n.children[i], dst, &sub);
        kids.push_back(kid);
        coefs.push_back(n.coefs[i] * sub);
      }
      if (n.op == Op::Product && kids.size() == 2) {
        const ExprNode& a = dst.node(kids[0]);
        const ExprNode& b = dst.node(kids[1]);
        int var_pos = -1;
        if (a.kind == ExprNode::Kind::Value && b.kind == ExprNode::Kind::Var)
          var_pos = 1;
        else if (b.kind == ExprNode::Kind::Value && a.kind == ExprNode::Kind::Var)
          var_pos = 0;
        if (var_pos >= 0) {
          const ExprNode& val = dst.node(kids[1 - var_pos]);
          *lift = val.value * coefs[0] * coefs[1];
          return kids[var_pos];
        }
      }
      int node = dst.add_op(n.op, std::move(kids), n.exponent);
      for (std::size_t i = 0; i < coefs.size(); ++i)
        dst.set_arc_coef(node, static_cast<int>(i), coefs[i]);
      return node;
    }
  }
  throw std::logic_error("expr: corrupt node");
}

}  // namespace

ExprTree hoist_coefficients(const ExprTree& t) {
  if (t.empty()) throw std::invalid_argument("expr: empty tree");
  ExprTree out;
  double lift = 1.0;
  int root = hoist_copy(t, t.root(), out, &lift);
  if (lift != 1.0) {
    // Hoisting must not detach the root; rebuild the binary product.
    int v = out.add_value(lift);
    root = out.add_op(Op::Product, {v, root});
  }
  out.set_root(root);
  return out;
}

bool is_affine_subtree(const ExprTree& t, int id) {
  const ExprNode& n = t.node(id);
  switch (n.kind) {
    case ExprNode::Kind::Value:
    case ExprNode::Kind::Var:
      return true;
    case ExprNode::Kind::Operator:
      if (n.op == Op::Negate) return is_affine_subtree(t, n.children[0]);
      if (n.op != Op::Sum) return false;
      for (int c : n.children)
        if (!is_affine_subtree(t, c)) return false;
      return true;
  }
  return false;
}

bool flatten_affine(const ExprTree& t, int id, double outer_coef,
                    std::vector<LinearTerm>* terms, double* constant) {
  const ExprNode& n = t.node(id);
  switch (n.kind) {
    case ExprNode::Kind::Value:
      *constant += outer_coef * n.value;
      return true;
    case ExprNode::Kind::Var: {
      for (LinearTerm& lt : *terms) {
        if (lt.var == n.var) {
          lt.coef += outer_coef;
          return true;
        }
      }
      terms->push_back({n.var, outer_coef});
      return true;
    }
    case ExprNode::Kind::Operator:
      if (n.op == Op::Negate)
        return flatten_affine(t, n.children[0], -outer_coef * n.coefs[0], terms,
                              constant);
      if (n.op != Op::Sum) return false;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        if (!flatten_affine(t, n.children[i], outer_coef * n.coefs[i], terms,
                            constant))
          return false;
      return true;
  }
  return false;
}

namespace {

bool even_operator(const ExprNode& n) {
  if (n.kind != ExprNode::Kind::Operator) return false;
  if (n.op == Op::Abs) return true;
  return n.op == Op::Power && n.exponent != 0 && n.exponent % 2 == 0;
}

// Even operator over a clean two-term signed difference.
bool match_difference(const ExprTree& t, int id, double tol, PatternMatch* m) {
  const ExprNode& n = t.node(id);
  if (!even_operator(n)) return false;
  int child = n.children[0];
  if (!is_affine_subtree(t, child)) return false;
  std::vector<LinearTerm> terms;
  double constant = 0.0;
  if (!flatten_affine(t, child, n.coefs[0], &terms, &constant)) return false;
  if (terms.size() != 2 || std::fabs(constant) > tol) return false;
  if (terms[0].var == terms[1].var) return false;
  if (std::fabs(terms[0].coef + terms[1].coef) > tol) return false;
  if (std::fabs(terms[0].coef) <= tol) return false;
  m->kind = PatternKind::SquaredDifference;
  m->root = id;
  m->terms = {{terms[0].var, terms[0].coef}, {terms[1].var, terms[1].coef}};
  m->scale = std::fabs(terms[0].coef);
  m->even_op = n.op;
  m->even_exponent = n.exponent;
  return true;
}

bool match_bilinear(const ExprTree& t, int id, double /*tol*/, PatternMatch* m) {
  const ExprNode& n = t.node(id);
  if (n.kind != ExprNode::Kind::Operator || n.op != Op::Product) return false;
  std::vector<LinearTerm> vars;
  double scalar = 1.0;
  int value_children = 0;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    const ExprNode& c = t.node(n.children[i]);
    if (c.kind == ExprNode::Kind::Var) {
      vars.push_back({c.var, n.coefs[i]});
    } else if (c.kind == ExprNode::Kind::Value) {
      scalar *= c.value * n.coefs[i];
      ++value_children;
    } else {
      return false;
    }
  }
  if (vars.size() != 2 || value_children > 1) return false;
  if (vars[0].var == vars[1].var) return false;
  m->kind = PatternKind::Bilinear;
  m->root = id;
  m->terms = vars;
  m->scale = scalar * vars[0].coef * vars[1].coef;
  return true;
}

bool match_even(const ExprTree& t, int id, double /*tol*/, PatternMatch* m) {
  const ExprNode& n = t.node(id);
  if (!even_operator(n)) return false;
  const ExprNode& c = t.node(n.children[0]);
  if (c.kind != ExprNode::Kind::Var) return false;
  m->kind = PatternKind::EvenFunction;
  m->root = id;
  m->terms = {{c.var, n.coefs[0]}};
  m->scale = std::fabs(n.coefs[0]);
  m->even_op = n.op;
  m->even_exponent = n.exponent;
  return true;
}

bool match_affine_sum(const ExprTree& t, int id, double tol, PatternMatch* m) {
  const ExprNode& n = t.node(id);
  if (n.kind != ExprNode::Kind::Operator || n.op != Op::Sum) return false;
  std::vector<LinearTerm> terms;
  double constant = 0.0;
  std::vector<int> plain;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    int c = n.children[i];
    if (is_affine_subtree(t, c)) {
      if (!flatten_affine(t, c, n.coefs[i], &terms, &constant)) return false;
    } else {
      plain.push_back(c);
    }
  }
  (void)tol;
  m->kind = PatternKind::AffineSum;
  m->root = id;
  m->terms = std::move(terms);
  m->constant = constant;
  m->plain_children = std::move(plain);
  return true;
}

void walk_patterns(const ExprTree& t, int id, double tol,
                   std::vector<PatternMatch>* out) {
  PatternMatch m;
  if (match_affine_sum(t, id, tol, &m)) {
    std::vector<int> plain = m.plain_children;
    out->push_back(std::move(m));
    for (int c : plain) walk_patterns(t, c, tol, out);
    return;
  }
  if (match_difference(t, id, tol, &m) || match_bilinear(t, id, tol, &m) ||
      match_even(t, id, tol, &m)) {
    out->push_back(std::move(m));
    return;
  }
  const ExprNode& n = t.node(id);
  if (n.kind == ExprNode::Kind::Operator)
    for (int c : n.children) walk_patterns(t, c, tol, out);
}

}  // namespace

std::vector<PatternMatch> find_patterns(const ExprTree& t, double tol) {
  if (t.empty()) throw std::invalid_argument("expr: empty tree");
  std::vector<PatternMatch> out;
  walk_patterns(t, t.root(), tol, &out);
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  for (int prec = 1; prec <= 16; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(shorter, "%lg", &back);
    if (back == v) return shorter;
  }
  return buf;
}

namespace {

void print_node(const ExprTree& t, int id, double coef, std::string* out) {
  bool scaled = coef != 1.0;
  if (scaled) {
    out->append("(* ");
    out->append(format_number(coef));
    out->push_back(' ');
  }
  const ExprNode& n = t.node(id);
  switch (n.kind) {
    case ExprNode::Kind::Value:
      out->append(format_number(n.value));
      break;
    case ExprNode::Kind::Var:
      out->push_back('x');
      out->append(std::to_string(n.var));
      break;
    case ExprNode::Kind::Operator: {
      const char* head = nullptr;
      switch (n.op) {
        case Op::Sum: head = "+"; break;
        case Op::Product: head = "*"; break;
        case Op::Power: head = "pow"; break;
        case Op::Abs: head = "abs"; break;
        case Op::Negate: head = "neg"; break;
      }
      out->push_back('(');
      out->append(head);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        out->push_back(' ');
        print_node(t, n.children[i], n.coefs[i], out);
      }
      if (n.op == Op::Power) {
        out->push_back(' ');
        out->append(std::to_string(n.exponent));
      }
      out->push_back(')');
      break;
    }
  }
  if (scaled) out->push_back(')');
}

}  // namespace

std::string to_text(const ExprTree& t) {
  if (t.empty()) return "()";
  std::string out;
  print_node(t, t.root(), 1.0, &out);
  return out;
}

}  // namespace symref
