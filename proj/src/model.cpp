// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

namespace symref {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

SignedPermutation::SignedPermutation(std::vector<int> images) : img_(std::move(images)) {
  int n = static_cast<int>(img_.size());
  std::vector<bool> seen(n, false);
  for (int v : img_) {
    int a = std::abs(v);
    require(a >= 1 && a <= n, "signed permutation: image out of range");
    require(!seen[a - 1], "signed permutation: not a bijection");
    seen[a - 1] = true;
  }
}

SignedPermutation SignedPermutation::identity(int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = i + 1;
  return SignedPermutation(std::move(img));
}

int SignedPermutation::operator()(int i) const {
  int a = std::abs(i);
  require(a >= 1 && a <= n(), "signed permutation: index out of range");
  int v = img_[a - 1];
  return i > 0 ? v : -v;
}

SignedPermutation SignedPermutation::inverse() const {
  std::vector<int> inv(img_.size());
  for (int i = 1; i <= n(); ++i) {
    int v = img_[i - 1];
    inv[std::abs(v) - 1] = v > 0 ? i : -i;
  }
  return SignedPermutation(std::move(inv));
}

bool SignedPermutation::is_identity() const {
  for (int i = 1; i <= n(); ++i)
    if (img_[i - 1] != i) return false;
  return true;
}

bool SignedPermutation::is_involution() const {
  for (int i = 1; i <= n(); ++i) {
    int v = img_[i - 1];
    if ((*this)(v) != i) return false;
  }
  return true;
}

bool SignedPermutation::is_unsigned() const {
  for (int v : img_)
    if (v < 0) return false;
  return true;
}

std::vector<int> SignedPermutation::support() const {
  std::vector<int> s;
  for (int i = 1; i <= n(); ++i)
    if (img_[i - 1] != i) s.push_back(i);
  return s;
}

std::optional<std::vector<std::pair<int, int>>> SignedPermutation::two_cycles() const {
  if (!is_unsigned()) return std::nullopt;
  std::vector<std::pair<int, int>> cyc;
  for (int i = 1; i <= n(); ++i) {
    int v = img_[i - 1];
    if (v == i) continue;
    if (img_[v - 1] != i) return std::nullopt;
    if (i < v) cyc.push_back({i, v});
  }
  return cyc;
}

std::string SignedPermutation::cycles() const {
  std::vector<int> starts;
  for (int i = 1; i <= n(); ++i) starts.push_back(i);
  for (int i = 1; i <= n(); ++i) starts.push_back(-i);
  std::set<int> done;
  std::string out;
  for (int s : starts) {
    if (done.count(s) || (*this)(s) == s) continue;
    out.push_back('(');
    int cur = s;
    bool first = true;
    do {
      if (!first) out.push_back(',');
      first = false;
      out.append(std::to_string(cur));
      done.insert(cur);
      cur = (*this)(cur);
    } while (cur != s);
    out.push_back(')');
  }
  if (out.empty()) out = "()";
  return out;
}

SignedPermutation compose(const SignedPermutation& g2, const SignedPermutation& g1) {
  require(g1.n() == g2.n(), "signed permutation: size mismatch");
  std::vector<int> img(g1.n());
  for (int i = 1; i <= g1.n(); ++i) img[i - 1] = g2(g1(i));
  return SignedPermutation(std::move(img));
}

Centers compute_centers(const Minlp& p) {
  Centers c;
  c.xi.resize(p.vars.size(), 0.0);
  c.reflectable.resize(p.vars.size(), false);
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    const Variable& v = p.vars[i];
    bool free_var = v.lb == -kInf && v.ub == kInf;
    bool finite = std::isfinite(v.lb) && std::isfinite(v.ub);
    if (free_var) {
      c.xi[i] = 0.0;  // -inf + inf reads as 0 here only
      c.reflectable[i] = true;
    } else if (finite) {
      c.xi[i] = 0.5 * (v.lb + v.ub);
      c.reflectable[i] = true;
    } else {
      c.xi[i] = 0.0;
      c.reflectable[i] = false;
    }
  }
  return c;
}

VariableType variable_type(const Minlp& p, const Centers& c, int signed_index) {
  int a = std::abs(signed_index);
  require(a >= 1 && a <= p.nvars(), "variable_type: index out of range");
  const Variable& v = p.vars[a - 1];
  double xi = c.xi[a - 1];
  VariableType t;
  t.rel_lb = v.lb == -kInf ? -kInf : v.lb - xi;
  t.rel_ub = v.ub == kInf ? kInf : v.ub - xi;
  t.obj = v.obj;
  t.integral = v.integral;
  return signed_index > 0 ? t : t.negated();
}

std::vector<double> apply_reflection(const std::vector<double>& x,
                                     const SignedPermutation& g,
                                     const std::vector<double>& centers) {
  require(static_cast<int>(x.size()) == g.n(), "apply_reflection: size mismatch");
  require(centers.size() == x.size(), "apply_reflection: centers mismatch");
  SignedPermutation inv = g.inverse();
  std::vector<double> out(x.size());
  for (int i = 1; i <= g.n(); ++i) {
    int j = inv(i);
    int a = std::abs(j);
    double s = j > 0 ? 1.0 : -1.0;
    out[i - 1] = centers[i - 1] + s * (x[a - 1] - centers[a - 1]);
  }
  return out;
}

namespace {

// Deterministic xorshift; enough for sampling boxes.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform on [lo, hi] with infinite ends clamped to +-R.
  double in(double lo, double hi, double R = 10.0) {
    double a = std::max(lo, -R), b = std::min(hi, R);
    if (a > b) a = b = std::min(std::max(0.0, lo), hi);
    return a + (b - a) * uniform();
  }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

bool close(double a, double b, double tol) {
  if (a == b) return true;  // covers equal infinities
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::fabs(a - b) <= tol;
}

// Exact domain compatibility: the reflected domain of x_|g(i)| must be the
// domain of x_i for every i.
bool domains_map(const Minlp& p, const SignedPermutation& g, const Centers& c,
                 double tol) {
  for (int i = 1; i <= p.nvars(); ++i) {
    VariableType ti = variable_type(p, c, i);
    VariableType tg = variable_type(p, c, g(i));
    if (ti.integral != tg.integral) return false;
    if (!close(ti.rel_lb, tg.rel_lb, tol) || !close(ti.rel_ub, tg.rel_ub, tol) ||
        !close(ti.obj, tg.obj, tol))
      return false;
    // Centers must translate consistently for integral variables.
    const Variable& vi = p.vars[i - 1];
    if (vi.integral) {
      double direct = c.xi[std::abs(g(i)) - 1];
      double twice = 2.0 * direct;
      if (std::fabs(twice - std::round(twice)) > tol) return false;
    }
  }
  return true;
}

// The objective composed with the reflection must be the objective.
bool objective_invariant(const Minlp& p, const SignedPermutation& g,
                         const Centers& c, double tol) {
  int n = p.nvars();
  std::vector<double> comp(n, 0.0);
  double constant = 0.0;
  SignedPermutation inv = g.inverse();
  for (int i = 1; i <= n; ++i) {
    double ci = p.vars[i - 1].obj;
    if (ci == 0.0) continue;
    int j = inv(i);
    int a = std::abs(j);
    double s = j > 0 ? 1.0 : -1.0;
    comp[a - 1] += s * ci;
    constant += ci * (c.xi[i - 1] - s * c.xi[a - 1]);
  }
  if (std::fabs(constant) > tol) return false;
  for (int i = 0; i < n; ++i)
    if (std::fabs(comp[i] - p.vars[i].obj) > tol) return false;
  return true;
}

struct LinearForm {
  bool linear = false;
  std::vector<double> coef;
  double constant = 0.0;
};

LinearForm linear_form(const ExprTree& t, int id, double outer, int n);

LinearForm linear_form(const ExprTree& t, int n) {
  return linear_form(t, t.root(), 1.0, n);
}

LinearForm linear_form(const ExprTree& t, int id, double outer, int n) {
  LinearForm lf;
  lf.coef.assign(n, 0.0);
  const ExprNode& node = t.node(id);
  switch (node.kind) {
    case ExprNode::Kind::Value:
      lf.linear = true;
      lf.constant = outer * node.value;
      return lf;
    case ExprNode::Kind::Var:
      lf.linear = true;
      lf.coef[node.var - 1] = outer;
      return lf;
    case ExprNode::Kind::Operator: {
      if (node.op == Op::Negate) {
        return linear_form(t, node.children[0], -outer * node.coefs[0], n);
      }
      if (node.op == Op::Sum) {
        lf.linear = true;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          LinearForm sub = linear_form(t, node.children[i], outer * node.coefs[i], n);
          if (!sub.linear) return {};
          lf.constant += sub.constant;
          for (int k = 0; k < n; ++k) lf.coef[k] += sub.coef[k];
        }
        return lf;
      }
      if (node.op == Op::Product) {
        // Products of values and exactly one variable stay linear.
        double scalar = outer;
        int var = 0;
        double var_coef = 1.0;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
          const ExprNode& c = t.node(node.children[i]);
          if (c.kind == ExprNode::Kind::Value) {
            scalar *= c.value * node.coefs[i];
          } else if (c.kind == ExprNode::Kind::Var && var == 0) {
            var = c.var;
            var_coef = node.coefs[i];
          } else {
            return {};
          }
        }
        lf.linear = true;
        if (var != 0)
          lf.coef[var - 1] = scalar * var_coef;
        else
          lf.constant = scalar;
        return lf;
      }
      return {};
    }
  }
  return {};
}

struct ConsSignature {
  Rel rel = Rel::Le;
  double rhs = 0.0;
  bool linear = false;
  std::vector<double> coef;   // linear coeffs / stable-set weight map
  std::vector<double> samples;  // nonlinear: values at the sample points
  bool stable = false;
  std::vector<std::pair<int, int>> edge_set;  // stable: sorted variable pairs

  bool matches(const ConsSignature& o, double tol) const {
    if (rel != o.rel || linear != o.linear || stable != o.stable) return false;
    if (!close(rhs, o.rhs, tol)) return false;
    if (coef.size() != o.coef.size() || samples.size() != o.samples.size())
      return false;
    if (edge_set != o.edge_set) return false;
    for (std::size_t i = 0; i < coef.size(); ++i)
      if (!close(coef[i], o.coef[i], tol)) return false;
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (!close(samples[i], o.samples[i], std::max(tol, 1e-7 * (1 + std::fabs(samples[i])))))
        return false;
    return true;
  }
};

double eval_stable(const Constraint& cons, const std::vector<double>& x) {
  // Worst edge load; the constraint itself is x_u + x_v <= 1 per edge.
  double worst = -kInf;
  for (auto [a, b] : cons.stable.edges) {
    double v = x[cons.stable.vars[a] - 1] + x[cons.stable.vars[b] - 1];
    worst = std::max(worst, v);
  }
  if (cons.stable.edges.empty()) worst = 0.0;
  return worst;
}

// Signature of constraint k composed with the reflection of g (id for the
// original signature).
ConsSignature cons_signature(const Minlp& p, const Constraint& cons,
                             const SignedPermutation* g, const Centers& c,
                             const std::vector<std::vector<double>>& pts) {
  ConsSignature sig;
  sig.rel = cons.rel;
  sig.rhs = cons.rhs;
  int n = p.nvars();
  if (cons.tag == ConsTag::StableSet) {
    sig.stable = true;
    // Exact structural map: weights by variable and the relabelled edge set.
    // Negating an associated variable never preserves the encoding.
    sig.coef.assign(n, 0.0);
    SignedPermutation inv = g ? g->inverse() : SignedPermutation::identity(n);
    bool bad = false;
    auto map_var = [&](int v) {
      int j = inv(v);
      if (j < 0) bad = true;
      return std::abs(j);
    };
    for (std::size_t k = 0; k < cons.stable.vars.size(); ++k)
      sig.coef[map_var(cons.stable.vars[k]) - 1] = cons.stable.weights[k];
    for (auto [a, b] : cons.stable.edges) {
      int u = map_var(cons.stable.vars[a]);
      int v = map_var(cons.stable.vars[b]);
      sig.edge_set.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(sig.edge_set.begin(), sig.edge_set.end());
    if (bad) sig.coef.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (const auto& pt : pts) {
      std::vector<double> x = g ? apply_reflection(pt, *g, c.xi) : pt;
      sig.samples.push_back(eval_stable(cons, x));
    }
    return sig;
  }
  LinearForm lf = linear_form(cons.tree, n);
  if (lf.linear && !g) {
    sig.linear = true;
    sig.coef = lf.coef;
    sig.rhs = cons.rhs - lf.constant;
    return sig;
  }
  if (lf.linear && g) {
    // Compose the affine form with the reflection exactly.
    sig.linear = true;
    sig.coef.assign(n, 0.0);
    double constant = lf.constant;
    SignedPermutation inv = g->inverse();
    for (int i = 1; i <= n; ++i) {
      double ci = lf.coef[i - 1];
      if (ci == 0.0) continue;
      int j = inv(i);
      int a = std::abs(j);
      double s = j > 0 ? 1.0 : -1.0;
      sig.coef[a - 1] += s * ci;
      constant += ci * (c.xi[i - 1] - s * c.xi[a - 1]);
    }
    sig.rhs = cons.rhs - constant;
    return sig;
  }
  for (const auto& pt : pts) {
    std::vector<double> x = g ? apply_reflection(pt, *g, c.xi) : pt;
    sig.samples.push_back(evaluate(cons.tree, x));
  }
  return sig;
}

std::vector<std::vector<double>> sample_points(const Minlp& p, int nsamples,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts;
  int n = p.nvars();
  for (int s = 0; s < nsamples; ++s) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.in(p.vars[i].lb, p.vars[i].ub);
    pts.push_back(std::move(x));
  }
  return pts;
}

bool constraints_map(const Minlp& p, const SignedPermutation& g, const Centers& c,
                     const std::vector<std::vector<double>>& pts, double tol) {
  int m = static_cast<int>(p.cons.size());
  std::vector<ConsSignature> orig(m), comp(m);
  for (int k = 0; k < m; ++k) {
    orig[k] = cons_signature(p, p.cons[k], nullptr, c, pts);
    comp[k] = cons_signature(p, p.cons[k], &g, c, pts);
  }
  // Greedy matching; signatures are near-exact so ambiguity means equality.
  std::vector<bool> used(m, false);
  for (int k = 0; k < m; ++k) {
    bool found = false;
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      if (comp[k].matches(orig[j], tol)) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool is_symmetry_oracle(const Minlp& p, const SignedPermutation& g, int nsamples,
                        std::uint64_t seed) {
  require(g.n() == p.nvars(), "oracle: permutation size mismatch");
  const double tol = 1e-9;
  Centers c = compute_centers(p);
  // Reflected variables need a reflectable domain.
  for (int i = 1; i <= p.nvars(); ++i)
    if (g(i) < 0 && !c.reflectable[std::abs(g(i)) - 1]) return false;
  if (!domains_map(p, g, c, tol)) return false;
  if (!objective_invariant(p, g, c, tol)) return false;
  auto pts = sample_points(p, nsamples, seed);
  return constraints_map(p, g, c, pts, tol);
}

std::vector<SignedPermutation> enumerate_symmetries_bruteforce(const Minlp& p,
                                                               int max_n) {
  int n = p.nvars();
  if (n > max_n)
    throw std::invalid_argument("enumerate_symmetries_bruteforce: problem too large");
  Centers c = compute_centers(p);
  const double tol = 1e-9;
  auto pts = sample_points(p, 64, 1);

  // Candidate signed images per index, filtered by type compatibility.
  std::vector<std::vector<int>> cand(n);
  for (int i = 1; i <= n; ++i) {
    VariableType ti = variable_type(p, c, i);
    for (int j = 1; j <= n; ++j) {
      for (int sj : {j, -j}) {
        if (sj < 0 && !c.reflectable[j - 1]) continue;
        VariableType tj = variable_type(p, c, sj);
        if (ti.integral == tj.integral && close(ti.rel_lb, tj.rel_lb, tol) &&
            close(ti.rel_ub, tj.rel_ub, tol) && close(ti.obj, tj.obj, tol))
          cand[i - 1].push_back(sj);
      }
    }
  }

  std::vector<SignedPermutation> found;
  std::vector<int> img(n, 0);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, int i) -> void {
    if (i > n) {
      SignedPermutation g(img);
      if (is_symmetry_oracle(p, g, 64, 1)) found.push_back(g);
      return;
    }
    for (int sj : cand[i - 1]) {
      int a = std::abs(sj);
      if (used[a - 1]) continue;
      used[a - 1] = true;
      img[i - 1] = sj;
      self(self, i + 1);
      used[a - 1] = false;
    }
  };
  rec(rec, 1);
  std::sort(found.begin(), found.end());
  return found;
}

std::optional<std::vector<SignedPermutation>> closure(
    const std::vector<SignedPermutation>& gens, std::size_t cap) {
  if (gens.empty()) return std::vector<SignedPermutation>{};
  int n = gens.front().n();
  std::set<std::vector<int>> seen;
  std::vector<SignedPermutation> todo;
  SignedPermutation id = SignedPermutation::identity(n);
  seen.insert(id.images());
  todo.push_back(id);
  std::vector<SignedPermutation> all{id};
  while (!todo.empty()) {
    SignedPermutation cur = todo.back();
    todo.pop_back();
    for (const SignedPermutation& g : gens) {
      SignedPermutation next = compose(g, cur);
      if (seen.insert(next.images()).second) {
        if (seen.size() > cap) return std::nullopt;
        all.push_back(next);
        todo.push_back(next);
      }
    }
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace symref
