// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/handle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace symref {

BoundsBox BoundsBox::of(const Minlp& p) {
  BoundsBox b;
  for (const Variable& v : p.vars) {
    b.lb.push_back(v.lb);
    b.ub.push_back(v.ub);
  }
  return b;
}

namespace {

double lb_int(double v, bool integral, double tol) {
  return integral ? std::ceil(v - tol) : v;
}

double ub_int(double v, bool integral, double tol) {
  return integral ? std::floor(v + tol) : v;
}

}  // namespace

bool lex_reduce(const SignedPermutation& g, const std::vector<double>& centers,
                const std::vector<bool>& integral, BoundsBox& box, double tol) {
  const int n = g.n();
  const SignedPermutation inv = g.inverse();
  for (int i = 1; i <= n; ++i) {
    const int k = inv(i);
    if (k == i) continue;  // identical position, equality always holds
    const int m = std::abs(k);
    const double xi_i = centers[i - 1], xi_m = centers[m - 1];
    auto rho_lb = [&] {
      return k > 0 ? xi_i + (box.lb[m - 1] - xi_m) : xi_i - (box.ub[m - 1] - xi_m);
    };
    auto rho_ub = [&] {
      return k > 0 ? xi_i + (box.ub[m - 1] - xi_m) : xi_i - (box.lb[m - 1] - xi_m);
    };
    if (box.ub[i - 1] < rho_lb() - tol) return false;  // x_i < rho_i everywhere
    if (box.lb[i - 1] > rho_ub()) break;               // x_i > rho_i everywhere
    if (m == i && k < 0) {
      // x_i >= 2 xi_i - x_i collapses to x_i >= xi_i.
      box.lb[i - 1] =
          std::max(box.lb[i - 1], lb_int(xi_i, integral[i - 1], tol));
    } else {
      box.lb[i - 1] =
          std::max(box.lb[i - 1], lb_int(rho_lb(), integral[i - 1], tol));
      // rho_i <= ub(x_i) rewritten as a bound on the source variable.
      if (k > 0) {
        double nu = box.ub[i - 1] - xi_i + xi_m;
        box.ub[m - 1] = std::min(box.ub[m - 1], ub_int(nu, integral[m - 1], tol));
      } else {
        double nl = xi_i + xi_m - box.ub[i - 1];
        box.lb[m - 1] = std::max(box.lb[m - 1], lb_int(nl, integral[m - 1], tol));
      }
    }
    if (box.empty_at(i - 1, tol) || box.empty_at(m - 1, tol)) return false;
    const bool forced_equal =
        box.ub[i - 1] <= rho_lb() && rho_ub() <= box.lb[i - 1];
    if (!forced_equal) break;
  }
  return true;
}

bool sort_rows_static(const std::vector<std::vector<int>>& matrix,
                      const std::vector<double>& centers,
                      const std::vector<bool>& integral, BoundsBox& box,
                      double tol) {
  const int p = static_cast<int>(matrix.size());
  if (p < 2) return true;
  const int q = static_cast<int>(matrix.front().size());
  std::vector<SignedPermutation> swaps;
  for (int i = 0; i + 1 < p; ++i) {
    SignedPermutation id = SignedPermutation::identity(box.n());
    std::vector<int> img = id.images();
    for (int c = 0; c < q; ++c) {
      img[matrix[i][c] - 1] = matrix[i + 1][c];
      img[matrix[i + 1][c] - 1] = matrix[i][c];
    }
    swaps.emplace_back(img);
  }
  const int cap = std::max(1, p * q);
  for (int round = 0; round < cap; ++round) {
    const std::vector<double> lb0 = box.lb, ub0 = box.ub;
    for (const auto& s : swaps)
      if (!lex_reduce(s, centers, integral, box, tol)) return false;
    if (box.lb == lb0 && box.ub == ub0) break;
  }
  return true;
}

namespace {

// Halving schedule n_0 = p, n_j = ceil(n_{j-1}/2) and the row blocks
// (n_1, n_0], (n_2, n_1], ..., (n_q, n_{q-1}], [1, n_q] (1-based, inclusive).
std::vector<int> halving_counts(int p, int q) {
  std::vector<int> n(q + 1);
  n[0] = p;
  for (int j = 1; j <= q; ++j) n[j] = (n[j - 1] + 1) / 2;
  return n;
}

std::vector<std::pair<int, int>> halving_blocks(const std::vector<int>& n) {
  std::vector<std::pair<int, int>> blocks;
  const int q = static_cast<int>(n.size()) - 1;
  for (int j = 1; j <= q; ++j) blocks.emplace_back(n[j] + 1, n[j - 1]);
  blocks.emplace_back(1, n[q]);
  return blocks;
}

PlanAction restrict_action(int var, double new_lb) {
  PlanAction a;
  a.kind = ActionKind::RestrictDomain;
  a.var = var;
  a.new_lb = new_lb;
  return a;
}

PlanAction ordering_action(int hi, int lo) {  // x_hi - x_lo >= 0
  PlanAction a;
  a.kind = ActionKind::StaticInequality;
  a.ineq.vars = {hi, lo};
  a.ineq.coefs = {1.0, -1.0};
  a.ineq.rhs = 0.0;
  return a;
}

PlanAction sort_action(std::vector<std::vector<int>> rows) {
  PlanAction a;
  a.kind = ActionKind::SortRows;
  a.rows = std::move(rows);
  return a;
}

PlanAction lexreduce_action(SignedPermutation g) {
  PlanAction a;
  a.kind = ActionKind::LexReduce;
  a.gamma = std::move(g);
  return a;
}

std::vector<std::vector<int>> transpose(const std::vector<std::vector<int>>& m) {
  std::vector<std::vector<int>> t(m.front().size(), std::vector<int>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

// Ordering inequalities on the first column within each halving block.
void append_block_orderings(const std::vector<std::vector<int>>& m,
                            const std::vector<int>& counts, HandlerPlan& plan) {
  for (const auto& [a, b] : halving_blocks(counts))
    for (int i = a; i < b; ++i)
      plan.actions.push_back(ordering_action(m[i - 1][0], m[i][0]));
}

}  // namespace

HandlerPlan plan_reflection_restrictions(const std::vector<std::vector<int>>& matrix,
                                         const std::vector<double>& centers) {
  const int p = static_cast<int>(matrix.size());
  const int q = static_cast<int>(matrix.front().size());
  for (int j = 0; j < q; ++j) {
    const double xi = centers[matrix[0][j] - 1];
    for (int i = 1; i < p; ++i)
      if (centers[matrix[i][j] - 1] != xi)
        throw std::invalid_argument("non-uniform column centers");
  }
  HandlerPlan plan;
  const std::vector<int> n = halving_counts(p, q);
  for (int j = 1; j <= q; ++j) {
    const double xi = centers[matrix[0][j - 1] - 1];
    for (int i = 1; i <= n[j]; ++i)
      plan.actions.push_back(restrict_action(matrix[i - 1][j - 1], xi));
  }
  for (const auto& [a, b] : halving_blocks(n)) {
    if (b - a + 1 < 2) continue;
    std::vector<std::vector<int>> rows(matrix.begin() + (a - 1),
                                       matrix.begin() + b);
    plan.actions.push_back(sort_action(std::move(rows)));
  }
  return plan;
}

HandlerPlan plan_row_column_sorting(const std::vector<std::vector<int>>& matrix) {
  HandlerPlan plan;
  const int p = static_cast<int>(matrix.size());
  const int q = static_cast<int>(matrix.front().size());
  plan.actions.push_back(sort_action(matrix));
  plan.actions.push_back(sort_action(transpose(matrix)));
  for (int i = 0; i + 1 < p; ++i)
    plan.actions.push_back(ordering_action(matrix[i][0], matrix[i + 1][0]));
  for (int j = 0; j + 1 < q; ++j)
    plan.actions.push_back(ordering_action(matrix[0][j], matrix[0][j + 1]));
  return plan;
}

PlanAction emit_simple_reflection_cut(const std::vector<int>& support,
                                      const std::vector<double>& centers) {
  PlanAction a;
  a.kind = ActionKind::StaticInequality;
  double rhs = 0.0;
  for (int v : support) {
    a.ineq.vars.push_back(v);
    a.ineq.coefs.push_back(1.0);
    rhs += centers[v - 1];
  }
  a.ineq.rhs = rhs;
  a.note = "aggregated reflection inequality";
  return a;
}

const char* setting_name(Setting s) {
  switch (s) {
    case Setting::Sym0: return "sym0";
    case Setting::Sym1: return "sym1";
    case Setting::Sym2: return "sym2";
    case Setting::Sym3: return "sym3";
    case Setting::Sym4: return "sym4";
    case Setting::Sym5: return "sym5";
    case Setting::Sym6: return "sym6";
    default: return "auto";
  }
}

bool parse_setting(const std::string& text, Setting* out) {
  static const std::pair<const char*, Setting> table[] = {
      {"sym0", Setting::Sym0}, {"sym1", Setting::Sym1}, {"sym2", Setting::Sym2},
      {"sym3", Setting::Sym3}, {"sym4", Setting::Sym4}, {"sym5", Setting::Sym5},
      {"sym6", Setting::Sym6}, {"auto", Setting::Automatic},
      {"automatic", Setting::Automatic}};
  for (const auto& [name, value] : table)
    if (text == name) {
      *out = value;
      return true;
    }
  return false;
}

namespace {

SignedPermutation row_swap_perm(const std::vector<std::vector<int>>& m, int i,
                                int nvars) {
  std::vector<int> img = SignedPermutation::identity(nvars).images();
  for (std::size_t c = 0; c < m[i].size(); ++c) {
    img[m[i][c] - 1] = m[i + 1][c];
    img[m[i + 1][c] - 1] = m[i][c];
  }
  return SignedPermutation(img);
}

// Restrictions plus block-limited sorting and orderings; the scheme for a
// matrix with confirmed column reflections.
void append_reflection_scheme(const std::vector<std::vector<int>>& m,
                              const GroupReport& report, HandlerPlan& plan) {
  HandlerPlan sub = plan_reflection_restrictions(m, report.centers.xi);
  for (auto& a : sub.actions) plan.actions.push_back(std::move(a));
  append_block_orderings(
      m, halving_counts(static_cast<int>(m.size()),
                        static_cast<int>(m.front().size())),
      plan);
}

// True when the factor's whole group is {identity, pure reflection on core}.
bool reflection_only_group(const Factor& f, const std::vector<int>& core, int n) {
  if (core.empty()) return false;
  auto cl = closure(f.gens, 2);
  if (!cl || cl->size() > 2) return false;
  return detect_full_reflection(f.gens, core, n, 2);
}

void append_automatic(const FactorReport& fr, const GroupReport& report,
                      HandlerPlan& plan) {
  const Factor& f = fr.factor;
  const MatrixSymmetry& ms = fr.matrix;
  const int n = report.nvars;
  if (ms.cls == MatrixClass::RowColumn) {
    if (ms.column_reflections) {
      append_reflection_scheme(ms.matrix, report, plan);
    } else if (ms.row_reflections) {
      append_reflection_scheme(transpose(ms.matrix), report, plan);
    } else {
      HandlerPlan sub = plan_row_column_sorting(ms.matrix);
      for (auto& a : sub.actions) plan.actions.push_back(std::move(a));
    }
    return;
  }
  if (ms.cls == MatrixClass::Row) {
    const int p = static_cast<int>(ms.matrix.size());
    const int q = static_cast<int>(ms.matrix.front().size());
    if (ms.column_reflections) {
      append_reflection_scheme(ms.matrix, report, plan);
      return;
    }
    if (fr.unsigned_fraction > 0.8) {
      if (q == 1) {  // the ordering chain alone handles the whole group
        for (int i = 0; i + 1 < p; ++i)
          plan.actions.push_back(
              ordering_action(ms.matrix[i][0], ms.matrix[i + 1][0]));
      } else if (p == 2) {
        plan.actions.push_back(
            lexreduce_action(row_swap_perm(ms.matrix, 0, n)));
      } else {
        plan.actions.push_back(sort_action(ms.matrix));
        for (int i = 0; i + 1 < p; ++i)
          plan.actions.push_back(
              ordering_action(ms.matrix[i][0], ms.matrix[i + 1][0]));
      }
      return;
    }
  }
  // Unclassified factor: the aggregated inequality exclusively for a pure
  // two-element reflection group, otherwise per-generator lex reduction.
  if (reflection_only_group(f, fr.reflection_core, n)) {
    plan.actions.push_back(
        emit_simple_reflection_cut(fr.reflection_core, report.centers.xi));
    return;
  }
  for (const auto& g : f.gens) plan.actions.push_back(lexreduce_action(g));
}

}  // namespace

HandlerPlan build_plan(const GroupReport& report, Setting setting) {
  HandlerPlan plan;
  if (setting == Setting::Sym0) return plan;
  if (setting == Setting::Automatic) {
    for (const FactorReport& fr : report.factors)
      append_automatic(fr, report, plan);
    return plan;
  }
  const bool s1 = setting == Setting::Sym1 || setting == Setting::Sym2 ||
                  setting == Setting::Sym3 || setting == Setting::Sym6;
  const bool s2 = setting == Setting::Sym2 || setting == Setting::Sym3;
  const bool s3 = setting == Setting::Sym3;
  const bool s45 = setting == Setting::Sym4 || setting == Setting::Sym5 ||
                   setting == Setting::Sym6;
  const bool s5 = setting == Setting::Sym5 || setting == Setting::Sym6;
  for (const FactorReport& fr : report.factors) {
    if (fr.matrix.cls == MatrixClass::Unstructured) continue;
    const auto& m = fr.matrix.matrix;
    const int p = static_cast<int>(m.size());
    const int q = static_cast<int>(m.front().size());
    const std::vector<int> counts = halving_counts(p, q);
    if (s1)
      for (int j = 0; j + 1 < q; ++j)
        plan.actions.push_back(ordering_action(m[0][j], m[0][j + 1]));
    if (s2)
      for (int j = 0; j < q; ++j)
        plan.actions.push_back(
            restrict_action(m[0][j], report.centers.xi[m[0][j] - 1]));
    if (s3)
      for (int i = 0; i + 1 < p; ++i)
        plan.actions.push_back(ordering_action(m[i][0], m[i + 1][0]));
    if (s45)
      for (int j = 1; j <= q; ++j)
        for (int i = 1; i <= counts[j]; ++i)
          plan.actions.push_back(restrict_action(
              m[i - 1][j - 1], report.centers.xi[m[i - 1][j - 1] - 1]));
    if (s5) append_block_orderings(m, counts, plan);
  }
  return plan;
}

std::string to_text(const HandlerPlan& plan) {
  std::ostringstream os;
  for (const PlanAction& a : plan.actions) {
    switch (a.kind) {
      case ActionKind::LexReduce:
        os << "lexreduce " << a.gamma.cycles();
        break;
      case ActionKind::SortRows: {
        os << "sortrows";
        for (const auto& row : a.rows) {
          os << " [";
          for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << row[c];
          os << "]";
        }
        break;
      }
      case ActionKind::RestrictDomain:
        os << "restrict x" << a.var << " >= " << format_number(a.new_lb);
        break;
      case ActionKind::StaticInequality: {
        os << "ineq";
        for (std::size_t t = 0; t < a.ineq.vars.size(); ++t)
          os << " " << (a.ineq.coefs[t] >= 0 ? "+" : "")
             << format_number(a.ineq.coefs[t]) << "*x" << a.ineq.vars[t];
        os << " >= " << format_number(a.ineq.rhs);
        break;
      }
    }
    if (!a.note.empty()) os << "  # " << a.note;
    os << "\n";
  }
  return os.str();
}

}  // namespace symref
