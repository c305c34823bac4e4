// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one PASS/FAIL line per criterion.  Each check is
// self-contained and prints enough context to localize a failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "symref/autom.hpp"
#include "symref/builders.hpp"
#include "symref/expr.hpp"
#include "symref/groups.hpp"
#include "symref/handle.hpp"
#include "symref/instances.hpp"
#include "symref/model.hpp"
#include "symref/sdg.hpp"
#include "symref/solve.hpp"

using namespace symref;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return s * 0x2545f4914f6cdd1dULL;
  }
  int uniform(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  double real(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) / 9007199254740992.0);
  }
  bool coin() { return (next() & 1) != 0; }
};

SignedPermutation random_signed_perm(Rng& rng, int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = i + 1;
  for (int i = n - 1; i > 0; --i) std::swap(img[i], img[rng.uniform(i + 1)]);
  for (int i = 0; i < n; ++i)
    if (rng.coin()) img[i] = -img[i];
  return SignedPermutation(img);
}

std::set<std::vector<int>> perm_set(const std::vector<SignedPermutation>& v) {
  std::set<std::vector<int>> out;
  for (const auto& g : v) out.insert(g.images());
  return out;
}

// 4 x1 - 4 x2 + x3 - x4 <= 0 over [-1,1]^2 x [1,3] x [-2,0].
Minlp demo_linear() {
  Minlp p;
  p.name = "demo";
  p.vars.push_back({"x1", -1.0, 1.0, false, 0.0});
  p.vars.push_back({"x2", -1.0, 1.0, false, 0.0});
  p.vars.push_back({"x3", 1.0, 3.0, false, 0.0});
  p.vars.push_back({"x4", -2.0, 0.0, false, 0.0});
  ExprTree t;
  int v1 = t.add_var(1), v2 = t.add_var(2), v3 = t.add_var(3), v4 = t.add_var(4);
  int s = t.add_op(Op::Sum, {v1, v2, v3, v4});
  t.set_arc_coef(s, 0, 4.0);
  t.set_arc_coef(s, 1, -4.0);
  t.set_arc_coef(s, 2, 1.0);
  t.set_arc_coef(s, 3, -1.0);
  t.set_root(s);
  Constraint c;
  c.name = "c1";
  c.tag = ConsTag::Expr;
  c.tree = t;
  c.rel = Rel::Le;
  c.rhs = 0.0;
  p.cons.push_back(c);
  return p;
}

int max_cut_bruteforce(int nnodes, const std::vector<std::pair<int, int>>& edges) {
  int best = 0;
  for (int mask = 0; mask < (1 << nnodes); ++mask) {
    int cut = 0;
    for (auto [u, v] : edges)
      if (((mask >> u) & 1) != ((mask >> v) & 1)) ++cut;
    best = std::max(best, cut);
  }
  return best;
}

bool g_all_pass = true;

void report(int num, bool pass, const std::string& detail) {
  std::printf("ACCEPTANCE %02d %s%s%s\n", num, pass ? "PASS" : "FAIL",
              detail.empty() ? "" : " - ", detail.c_str());
  std::fflush(stdout);
  if (!pass) g_all_pass = false;
}

// ---------------------------------------------------------------------------
// 1. Worked-example fidelity on the shipped linear demo.

void criterion_1() {
  auto t0 = Clock::now();
  Minlp p = demo_linear();
  bool ok = true;
  std::ostringstream note;

  GroupReport basic = analyze(p, SymMode::Reflection, false);
  auto cb = closure(basic.generators);
  ok = ok && cb.has_value() && cb->size() == 2;
  ok = ok && perm_set(*cb).count({-2, -1, 3, 4}) == 1;

  GroupReport enh = analyze(p, SymMode::Reflection, true);
  auto ce = closure(enh.generators);
  ok = ok && ce.has_value() && ce->size() == 4;
  ok = ok && perm_set(*ce).count({-2, -1, 3, 4}) == 1;
  ok = ok && perm_set(*ce).count({1, 2, -4, -3}) == 1;

  double el = seconds_since(t0);
  ok = ok && el < 1.0;
  note << "basic order " << (cb ? cb->size() : 0) << ", enhanced order "
       << (ce ? ce->size() : 0) << ", " << el << " s";
  report(1, ok, note.str());
}

// ---------------------------------------------------------------------------
// 2. Group-action axioms on 1000 random configurations.

void criterion_2() {
  Rng rng(101);
  int bad = 0;
  for (int it = 0; it < 1000; ++it) {
    int n = 2 + rng.uniform(5);
    SignedPermutation g1 = random_signed_perm(rng, n);
    SignedPermutation g2 = random_signed_perm(rng, n);
    std::vector<double> x(n), xi(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.real(-3.0, 3.0);
      xi[i] = rng.real(-1.0, 1.0);
    }
    std::vector<double> lhs = apply_reflection(x, compose(g2, g1), xi);
    std::vector<double> rhs = apply_reflection(apply_reflection(x, g1, xi), g2, xi);
    std::vector<double> idx = apply_reflection(x, SignedPermutation::identity(n), xi);
    for (int i = 0; i < n; ++i) {
      if (std::fabs(lhs[i] - rhs[i]) > 1e-12) ++bad;
      if (std::fabs(idx[i] - x[i]) > 1e-12) ++bad;
    }
  }
  std::ostringstream note;
  note << bad << " coordinate violations over 1000 samples";
  report(2, bad == 0, note.str());
}

// ---------------------------------------------------------------------------
// 3. Detected groups equal the brute-force formulation groups (linear, n<=3).

Minlp random_linear_minlp(Rng& rng) {
  static const double kBounds[][2] = {{0, 1}, {-1, 1}, {-2, 0}, {1, 3}, {-1, 2}};
  static const double kObj[] = {0.0, 0.0, 1.0, -1.0};
  Minlp p;
  p.name = "rand";
  int n = 2 + rng.uniform(2);
  for (int i = 0; i < n; ++i) {
    const double* b = kBounds[rng.uniform(5)];
    p.vars.push_back({"x" + std::to_string(i + 1), b[0], b[1], false,
                      kObj[rng.uniform(4)]});
  }
  int m = 1 + rng.uniform(2);
  for (int k = 0; k < m; ++k) {
    ExprTree t;
    std::vector<int> kids;
    std::vector<double> coefs;
    for (int i = 0; i < n; ++i) {
      double c = static_cast<double>(rng.uniform(5) - 2);
      if (c == 0.0) continue;
      kids.push_back(t.add_var(i + 1));
      coefs.push_back(c);
    }
    if (kids.empty()) {
      kids.push_back(t.add_var(1 + rng.uniform(n)));
      coefs.push_back(1.0);
    }
    int s = t.add_op(Op::Sum, kids);
    for (std::size_t j = 0; j < coefs.size(); ++j)
      t.set_arc_coef(s, static_cast<int>(j), coefs[j]);
    t.set_root(s);
    Constraint c;
    c.name = "c" + std::to_string(k + 1);
    c.tag = ConsTag::Expr;
    c.tree = t;
    c.rel = static_cast<Rel>(rng.uniform(3));
    c.rhs = static_cast<double>(rng.uniform(5) - 2);
    p.cons.push_back(c);
  }
  return p;
}

void criterion_3() {
  Rng rng(202);
  int mismatches = 0;
  std::string first;
  for (int it = 0; it < 50; ++it) {
    Minlp p = random_linear_minlp(rng);
    GroupReport rep = analyze(p, SymMode::Reflection, true);
    auto cl = closure(rep.generators);
    std::vector<SignedPermutation> brute = enumerate_symmetries_bruteforce(p);
    bool same = cl.has_value() && perm_set(*cl) == perm_set(brute);
    if (!same) {
      ++mismatches;
      if (first.empty()) {
        std::ostringstream os;
        os << "instance " << it << ": detected "
           << (cl ? std::to_string(cl->size()) : std::string("overflow"))
           << " vs brute " << brute.size();
        first = os.str();
      }
    }
  }
  std::ostringstream note;
  note << mismatches << "/50 mismatches";
  if (!first.empty()) note << " (" << first << ")";
  report(3, mismatches == 0, note.str());
}

// ---------------------------------------------------------------------------
// 4. Automorphism engine equals brute force on random colored graphs.

void criterion_4() {
  auto t0 = Clock::now();
  Rng rng(303);
  int mismatches = 0;
  for (int it = 0; it < 200; ++it) {
    ColoredGraph g;
    g.n = 1 + rng.uniform(10);
    g.color.resize(g.n);
    int ncolors = 1 + rng.uniform(3);
    for (int i = 0; i < g.n; ++i) g.color[i] = rng.uniform(ncolors);
    g.adj.resize(g.n);
    int density = 2 + rng.uniform(6);
    for (int u = 0; u < g.n; ++u)
      for (int v = u + 1; v < g.n; ++v)
        if (rng.uniform(10) < density) g.add_edge(u, v);
    auto gens = find_automorphism_generators(g);
    auto cl = permutation_closure(gens, g.n);
    auto brute = automorphisms_bruteforce(g);
    std::set<std::vector<int>> a(cl.begin(), cl.end());
    std::set<std::vector<int>> b(brute.begin(), brute.end());
    if (a != b) ++mismatches;
  }
  double el = seconds_since(t0);
  std::ostringstream note;
  note << mismatches << "/200 mismatches, " << el << " s";
  report(4, mismatches == 0 && el < 10.0, note.str());
}

// ---------------------------------------------------------------------------
// 5. The squared-difference gadget group is generated by pi1 and pi2.

void criterion_5() {
  Minlp p;
  p.vars.push_back({"x1", -1.0, 1.0, false, 0.0});
  p.vars.push_back({"x2", -1.0, 1.0, false, 0.0});
  ExprTree t;
  int a = t.add_var(1), b = t.add_var(2);
  int d = t.add_op(Op::Sum, {a, b});
  t.set_arc_coef(d, 1, -1.0);
  t.set_root(t.add_op(Op::Power, {d}, 2));
  Constraint c;
  c.name = "c";
  c.tag = ConsTag::Expr;
  c.tree = t;
  c.rel = Rel::Le;
  c.rhs = 1.0;
  p.cons.push_back(c);

  ProblemSdg ps = build_problem_sdg(p, SymMode::Reflection, true);
  if (!ps.success) {
    report(5, false, "builder failed: " + ps.error);
    return;
  }
  const Sdg& g = ps.graph;
  QuotientGraph q = eliminate_edge_colors(g);

  // Tracked nodes: v1, v2, v-1, v-2 and the two gadget value nodes, where a1
  // is the value node adjacent to the positive pair.
  std::vector<int> value_nodes;
  for (int v = 0; v < g.nnodes(); ++v)
    if (g.kind(v) == NodeKind::Value) value_nodes.push_back(v);
  if (value_nodes.size() != 2) {
    report(5, false, "expected 2 gadget value nodes, got " +
                         std::to_string(value_nodes.size()));
    return;
  }
  auto adjacent = [&](int u, int v) {
    for (const SdgEdge& e : g.edges())
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return true;
    return false;
  };
  int a1 = value_nodes[0], a2 = value_nodes[1];
  if (!adjacent(a1, g.var_node(1))) std::swap(a1, a2);
  bool wiring = adjacent(a1, g.var_node(1)) && adjacent(a1, g.var_node(2)) &&
                adjacent(a2, g.var_node(-1)) && adjacent(a2, g.var_node(-2));

  std::vector<int> tracked{g.var_node(1),  g.var_node(2), g.var_node(-1),
                           g.var_node(-2), a1,            a2};
  std::map<int, int> pos;
  for (std::size_t i = 0; i < tracked.size(); ++i) pos[tracked[i]] = static_cast<int>(i);

  // Project every brute-force automorphism of the quotient onto the six
  // tracked nodes (ids are preserved: the gadget has no valued edges).
  std::set<std::vector<int>> seen;
  bool closed = true;
  for (const auto& sigma : automorphisms_bruteforce(q.graph)) {
    std::vector<int> proj(6, -1);
    for (int node : tracked) {
      int img = sigma[node];
      if (!pos.count(img)) {
        closed = false;
        break;
      }
      proj[pos[node]] = pos[img];
    }
    if (closed) seen.insert(proj);
  }

  std::vector<int> pi1{1, 0, 3, 2, 4, 5};  // (v1,v2)(v-1,v-2)
  std::vector<int> pi2{2, 3, 0, 1, 5, 4};  // (a1,a2)(v1,v-1)(v2,v-2)
  auto want_cl = permutation_closure({pi1, pi2}, 6);
  std::set<std::vector<int>> want(want_cl.begin(), want_cl.end());

  bool ok = wiring && closed && seen == want && seen.count(pi1) == 1 &&
            seen.count(pi2) == 1;
  std::ostringstream note;
  note << "gadget group order " << seen.size() << " vs generated " << want.size();
  report(5, ok, note.str());
}

// ---------------------------------------------------------------------------
// 6. Lex reduction never removes the lex-maximal orbit representative.

void criterion_6() {
  Rng rng(404);
  long violations = 0;
  long checked = 0;
  for (int it = 0; it < 100; ++it) {
    int k = 2 + rng.uniform(5);
    SignedPermutation g = random_signed_perm(rng, k);
    auto cl = closure({g});
    if (!cl) continue;
    std::vector<double> xi(k, 0.5);
    std::vector<bool> integral(k, true);

    // Orbit-maximal representative of every 0/1 point, as bit masks
    // (bit i = x_{i+1}; lexicographic order compares x_1 first).
    auto as_mask = [&](const std::vector<double>& x) {
      int m = 0;
      for (int i = 0; i < k; ++i)
        if (x[i] > 0.5) m |= 1 << i;
      return m;
    };
    auto lex_less = [&](int lhs, int rhs) {
      for (int i = 0; i < k; ++i) {
        int a = (lhs >> i) & 1, b = (rhs >> i) & 1;
        if (a != b) return a < b;
      }
      return false;
    };
    std::vector<int> rep(1 << k);
    for (int z = 0; z < (1 << k); ++z) {
      std::vector<double> x(k);
      for (int i = 0; i < k; ++i) x[i] = (z >> i) & 1;
      int best = z;
      for (const auto& e : *cl) {
        int img = as_mask(apply_reflection(x, e, xi));
        if (lex_less(best, img)) best = img;
      }
      rep[z] = best;
    }

    // All 2^k partial-fixing boxes: mask bit set -> coordinate fixed (to a
    // per-box deterministic value), else free [0,1].
    for (int mask = 0; mask < (1 << k); ++mask) {
      int values = static_cast<int>(rng.next() & ((1u << k) - 1));
      BoundsBox box;
      for (int i = 0; i < k; ++i) {
        bool fixed = (mask >> i) & 1;
        double v = (values >> i) & 1;
        box.lb.push_back(fixed ? v : 0.0);
        box.ub.push_back(fixed ? v : 1.0);
      }
      auto in_box = [&](int z) {
        for (int i = 0; i < k; ++i) {
          double v = (z >> i) & 1;
          if (v < box.lb[i] - 1e-9 || v > box.ub[i] + 1e-9) return false;
        }
        return true;
      };
      BoundsBox tight = box;
      bool feasible = lex_reduce(g, xi, integral, tight);
      for (int z = 0; z < (1 << k); ++z) {
        if (!in_box(z) || rep[z] != z || !in_box(rep[z])) continue;
        // z is its own orbit maximum and lies in the box: it must survive.
        ++checked;
        bool survives = feasible;
        for (int i = 0; i < k && survives; ++i) {
          double v = (z >> i) & 1;
          survives = v >= tight.lb[i] - 1e-9 && v <= tight.ub[i] + 1e-9;
        }
        if (!survives) ++violations;
      }
    }
  }
  std::ostringstream note;
  note << violations << " violations over " << checked << " representatives";
  report(6, violations == 0 && checked > 0, note.str());
}

// ---------------------------------------------------------------------------
// 7. Restriction plans keep a representative of every grid orbit.

bool grid_orbits_covered(int p, int q, std::string* note) {
  std::vector<std::vector<int>> m;
  for (int i = 0; i < p; ++i) {
    std::vector<int> row;
    for (int j = 0; j < q; ++j) row.push_back(i * q + j + 1);
    m.push_back(row);
  }
  int cells = p * q;
  std::vector<double> xi(cells, 0.5);
  std::vector<bool> integral(cells, true);
  HandlerPlan plan = plan_reflection_restrictions(m, xi);

  auto survives = [&](int point) {
    BoundsBox box;
    for (int i = 0; i < cells; ++i) {
      double v = (point >> i) & 1;
      box.lb.push_back(v);
      box.ub.push_back(v);
    }
    for (const auto& a : plan.actions) {
      if (a.kind == ActionKind::RestrictDomain) {
        if (box.ub[a.var - 1] < a.new_lb - 1e-9) return false;
      } else if (a.kind == ActionKind::SortRows) {
        if (!sort_rows_static(a.rows, xi, integral, box)) return false;
      }
    }
    return true;
  };

  // Row permutations (next_permutation) x independent column flips.
  std::vector<int> order(p);
  std::vector<std::vector<int>> row_orders;
  for (int i = 0; i < p; ++i) order[i] = i;
  do {
    row_orders.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));

  auto act = [&](int point, const std::vector<int>& rows, int flips) {
    int img = 0;
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < q; ++c) {
        int bit = (point >> (rows[r] * q + c)) & 1;
        if ((flips >> c) & 1) bit ^= 1;
        img |= bit << (r * q + c);
      }
    return img;
  };

  int orbit_count = 0, covered = 0;
  std::vector<bool> seen(1 << cells, false);
  for (int point = 0; point < (1 << cells); ++point) {
    if (seen[point]) continue;
    ++orbit_count;
    bool any = false;
    for (const auto& rows : row_orders)
      for (int flips = 0; flips < (1 << q); ++flips) {
        int img = act(point, rows, flips);
        if (!seen[img]) {
          seen[img] = true;
          if (survives(img)) any = true;
        } else if (survives(img)) {
          any = true;
        }
      }
    if (any) ++covered;
  }
  std::ostringstream os;
  os << p << "x" << q << ": " << covered << "/" << orbit_count << " orbits covered";
  *note = os.str();
  return covered == orbit_count;
}

void criterion_7() {
  std::string n32, n42;
  bool ok32 = grid_orbits_covered(3, 2, &n32);
  bool ok42 = grid_orbits_covered(4, 2, &n42);

  // Halving schedule for 10x2: five cells restricted in column 1, three in 2.
  std::vector<std::vector<int>> m;
  for (int i = 0; i < 10; ++i) m.push_back({2 * i + 1, 2 * i + 2});
  HandlerPlan plan = plan_reflection_restrictions(m, std::vector<double>(20, 0.0));
  int col1 = 0, col2 = 0;
  for (const auto& a : plan.actions)
    if (a.kind == ActionKind::RestrictDomain) {
      if (a.var % 2 == 1) ++col1;
      if (a.var % 2 == 0) ++col2;
    }
  bool sched = col1 == 5 && col2 == 3;

  std::ostringstream note;
  note << n32 << "; " << n42 << "; schedule (" << col1 << "," << col2 << ")";
  report(7, ok32 && ok42 && sched, note.str());
}

// ---------------------------------------------------------------------------
// 8. Setting-invariant optima across the generated families.

struct Cell {
  SolveStatus status = SolveStatus::Limit;
  bool has_inc = false;
  double primal = kInf;
  long nodes = 0;
};

Cell solve_cell(const Minlp& p, Setting s) {
  HandlerPlan plan;
  if (s != Setting::Sym0) plan = build_plan(analyze(p, SymMode::Reflection, true), s);
  SolveParams params;
  params.node_limit = 600000;
  params.time_limit_sec = 60.0;
  SolveResult r = solve(p, plan, params);
  return {r.status, r.has_incumbent, r.primal, r.nodes};
}

std::map<std::string, std::map<std::string, Cell>> g_matrix;

void criterion_8() {
  auto t0 = Clock::now();
  std::vector<std::pair<std::string, Minlp>> instances;
  instances.emplace_back("packing22", gen_packing(2, 2));
  instances.emplace_back("packing32", gen_packing(3, 2));
  instances.emplace_back("packing42", gen_packing(4, 2));
  instances.emplace_back("kissing22", gen_kissing(2, 2));
  instances.emplace_back("kissing32", gen_kissing(3, 2));
  instances.emplace_back("energy22", gen_energy(2, 2));
  instances.emplace_back("maxcutK3", gen_maxcut(3, complete_graph(3)));
  instances.emplace_back("maxcutC5", gen_maxcut(5, cycle_graph(5)));
  instances.emplace_back("maxcutPet", gen_maxcut(10, petersen_graph()));

  const std::vector<std::pair<std::string, Setting>> settings{
      {"sym0", Setting::Sym0},
      {"sym3", Setting::Sym3},
      {"sym6", Setting::Sym6},
      {"auto", Setting::Automatic}};

  bool ok = true;
  std::ostringstream bad;
  for (const auto& [name, p] : instances) {
    double lo = kInf, hi = -kInf;
    for (const auto& [sname, s] : settings) {
      Cell cell = solve_cell(p, s);
      g_matrix[name][sname] = cell;
      if (cell.status != SolveStatus::Optimal || !cell.has_inc) {
        ok = false;
        bad << " " << name << "/" << sname << ":not-optimal";
      }
      lo = std::min(lo, cell.primal);
      hi = std::max(hi, cell.primal);
    }
    if (hi - lo > 1e-4) {
      ok = false;
      bad << " " << name << ":spread=" << (hi - lo);
    }
  }

  int k3 = max_cut_bruteforce(3, complete_graph(3));
  int pet = max_cut_bruteforce(10, petersen_graph());
  double k3_val = -g_matrix["maxcutK3"]["auto"].primal;
  double pet_val = -g_matrix["maxcutPet"]["auto"].primal;
  if (k3 != 2 || std::fabs(k3_val - k3) > 1e-4) {
    ok = false;
    bad << " K3:" << k3_val << "-vs-" << k3;
  }
  if (pet != 12 || std::fabs(pet_val - pet) > 1e-4) {
    ok = false;
    bad << " Petersen:" << pet_val << "-vs-" << pet;
  }

  double el = seconds_since(t0);
  if (el >= 300.0) {
    ok = false;
    bad << " runtime " << el << " s";
  }
  std::ostringstream note;
  note << "36 cells, K3 cut " << k3_val << ", Petersen cut " << pet_val << ", "
       << el << " s";
  if (!ok) note << "; problems:" << bad.str();
  report(8, ok, note.str());
}

// ---------------------------------------------------------------------------
// 9. Node-count trend, warning only.

void criterion_9() {
  long p0 = g_matrix["packing32"]["sym0"].nodes;
  long pa = g_matrix["packing32"]["auto"].nodes;
  long k0 = g_matrix["kissing32"]["sym0"].nodes;
  long ka = g_matrix["kissing32"]["auto"].nodes;
  std::ostringstream note;
  note << "packing32 auto/sym0 " << pa << "/" << p0 << ", kissing32 auto/sym0 "
       << ka << "/" << k0;
  if (pa > p0 || ka > k0) note << " (warning: auto exceeded sym0 node count)";
  report(9, true, note.str());
}

// ---------------------------------------------------------------------------
// 10. Lex reduction and the aggregated inequality never act on one factor.

void criterion_10() {
  bool ok = true;
  std::ostringstream note;

  // Fixture: three binaries, group {id, gstar}, gstar the full sign flip.
  Minlp p;
  for (int i = 0; i < 3; ++i)
    p.vars.push_back({"b" + std::to_string(i + 1), 0.0, 1.0, true, 0.0});
  SignedPermutation gstar({-1, -2, -3});
  GroupReport rep;
  rep.nvars = 3;
  rep.centers = compute_centers(p);
  rep.generators = {gstar};
  FactorReport fr;
  fr.factor.support = {1, 2, 3};
  fr.factor.gens = {gstar};
  fr.matrix.cls = MatrixClass::Unstructured;
  fr.reflection_core = {1, 2, 3};
  fr.has_full_reflection = true;
  rep.factors = {fr};

  auto exclusive = [](const HandlerPlan& plan) {
    bool lex = false, cut = false;
    for (const auto& a : plan.actions) {
      if (a.kind == ActionKind::LexReduce) lex = true;
      if (a.kind == ActionKind::StaticInequality && a.ineq.rhs > 0.25 &&
          std::all_of(a.ineq.coefs.begin(), a.ineq.coefs.end(),
                      [](double c) { return c == 1.0; }))
        cut = true;
    }
    return !(lex && cut);
  };

  for (Setting s : {Setting::Sym0, Setting::Sym1, Setting::Sym2, Setting::Sym3,
                    Setting::Sym4, Setting::Sym5, Setting::Sym6, Setting::Automatic})
    if (!exclusive(build_plan(rep, s))) {
      ok = false;
      note << "both active under " << setting_name(s) << "; ";
    }

  HandlerPlan aut = build_plan(rep, Setting::Automatic);
  bool cut_only = aut.actions.size() == 1 &&
                  aut.actions[0].kind == ActionKind::StaticInequality;
  if (!cut_only) {
    ok = false;
    note << "automatic plan is not the single aggregated inequality; ";
  }

  // Real reports with gstar present keep the exclusivity too.
  for (const auto& inst : {gen_maxcut(3, complete_graph(3)), gen_packing(2, 2)}) {
    GroupReport r2 = analyze(inst, SymMode::Reflection, true);
    for (Setting s : {Setting::Sym1, Setting::Sym3, Setting::Sym6, Setting::Automatic})
      if (!exclusive(build_plan(r2, s))) {
        ok = false;
        note << inst.name << " violates exclusivity; ";
      }
  }

  // Why they exclude each other: with xi = 0.5 and the full flip, the unit
  // vector e1 survives lex reduction yet violates the aggregated inequality,
  // while its reflection does the opposite.  Enforcing both removes the
  // whole orbit {e1, (0,1,1)}.
  std::vector<double> e1{1.0, 0.0, 0.0};
  std::vector<double> mirror = apply_reflection(e1, gstar, rep.centers.xi);
  bool mirror_ok = mirror == std::vector<double>{0.0, 1.0, 1.0};

  std::vector<bool> integral(3, true);
  auto point_box = [](const std::vector<double>& x) {
    BoundsBox b;
    b.lb = x;
    b.ub = x;
    return b;
  };
  BoundsBox b1 = point_box(e1);
  bool e1_lex = lex_reduce(gstar, rep.centers.xi, integral, b1);
  BoundsBox b2 = point_box(mirror);
  bool mirror_lex = lex_reduce(gstar, rep.centers.xi, integral, b2);

  PlanAction cut = emit_simple_reflection_cut({1, 2, 3}, rep.centers.xi);
  auto cut_holds = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < cut.ineq.vars.size(); ++i)
      s += cut.ineq.coefs[i] * x[cut.ineq.vars[i] - 1];
    return s >= cut.ineq.rhs - 1e-9;
  };

  bool demo = mirror_ok && e1_lex && !cut_holds(e1) && !mirror_lex && cut_holds(mirror);
  if (!demo) {
    ok = false;
    note << "counterexample behavior unexpected (lex(e1)=" << e1_lex
         << " cut(e1)=" << cut_holds(e1) << " lex(refl)=" << mirror_lex
         << " cut(refl)=" << cut_holds(mirror) << "); ";
  }

  std::string text = note.str();
  if (ok) text = "each method keeps a different orbit representative; combined they lose both";
  report(10, ok, text);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("ACCEPTANCE SUMMARY %s\n", g_all_pass ? "ALL PASS" : "FAILURES");
  return g_all_pass ? 0 : 1;
}
