// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/autom.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace symref {

void ColoredGraph::add_edge(int u, int v) {
  auto insert_sorted = [](std::vector<int>& list, int value) {
    auto it = std::lower_bound(list.begin(), list.end(), value);
    if (it == list.end() || *it != value) list.insert(it, value);
  };
  insert_sorted(adj[u], v);
  insert_sorted(adj[v], u);
}

bool ColoredGraph::has_edge(int u, int v) const {
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

QuotientGraph eliminate_edge_colors(const Sdg& g) {
  if (!g.locked()) throw std::logic_error("quotient: graph not locked");
  QuotientGraph q;
  q.original_nodes = g.nnodes();
  q.graph.n = g.nnodes();
  q.graph.color.resize(g.nnodes());
  q.graph.adj.resize(g.nnodes());
  for (int v = 0; v < g.nnodes(); ++v) q.graph.color[v] = g.node_color(v);

  int ncons = 0, nvar = 0;
  for (int v = 0; v < g.nnodes(); ++v) {
    if (g.kind(v) == NodeKind::Constraint) ++ncons;
    if (g.kind(v) == NodeKind::Var) ++nvar;
  }
  bool hub_is_nonvar = ncons < nvar;  // grouping by constraints

  auto new_aux = [&](int color) {
    q.graph.color.push_back(color);
    q.graph.adj.emplace_back();
    return q.graph.n++;
  };

  std::map<std::pair<int, int>, int> merged;  // (hub, color) -> aux node
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const SdgEdge& edge = g.edges()[e];
    if (!edge.value) {
      q.graph.add_edge(edge.u, edge.v);
      continue;
    }
    int color = g.edge_color(static_cast<int>(e));
    bool u_var = g.kind(edge.u) == NodeKind::Var;
    bool v_var = g.kind(edge.v) == NodeKind::Var;
    int hub = -1;
    if (u_var != v_var) {
      bool hub_is_u = hub_is_nonvar ? !u_var : u_var;
      hub = hub_is_u ? edge.u : edge.v;
    }
    int aux;
    if (hub < 0) {
      aux = new_aux(color);
    } else {
      auto [it, fresh] = merged.try_emplace({hub, color}, -1);
      if (fresh) {
        it->second = new_aux(color);
        q.graph.add_edge(hub, it->second);
      }
      aux = it->second;
      q.graph.add_edge(aux, hub == edge.u ? edge.v : edge.u);
      continue;
    }
    q.graph.add_edge(aux, edge.u);
    q.graph.add_edge(aux, edge.v);
  }
  return q;
}

namespace {

// Canonical 1-WL refinement: cells split by (cell, sorted neighbor cells)
// until stable; resulting ids are invariant under color-preserving
// isomorphism.
std::vector<int> refine(const ColoredGraph& g, std::vector<int> colors) {
  for (;;) {
    std::vector<std::pair<std::vector<int>, int>> sig(g.n);
    for (int v = 0; v < g.n; ++v) {
      std::vector<int> s;
      s.reserve(g.adj[v].size() + 1);
      s.push_back(colors[v]);
      for (int w : g.adj[v]) s.push_back(colors[w]);
      std::sort(s.begin() + 1, s.end());
      sig[v] = {std::move(s), v};
    }
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return sig[a].first < sig[b].first; });
    std::vector<int> next(g.n, 0);
    int id = -1;
    const std::vector<int>* prev = nullptr;
    for (int v : order) {
      if (!prev || sig[v].first != *prev) {
        ++id;
        prev = &sig[v].first;
      }
      next[v] = id;
    }
    if (next == colors) return colors;
    colors = std::move(next);
  }
}

bool is_discrete(const std::vector<int>& colors) {
  std::vector<bool> seen(colors.size(), false);
  for (int c : colors) {
    if (seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

bool is_automorphism(const ColoredGraph& g, const std::vector<int>& perm) {
  for (int v = 0; v < g.n; ++v) {
    if (g.color[perm[v]] != g.color[v]) return false;
    if (g.adj[perm[v]].size() != g.adj[v].size()) return false;
    for (int w : g.adj[v])
      if (!g.has_edge(perm[v], perm[w])) return false;
  }
  return true;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct IrSearch {
  const ColoredGraph& g;
  int budget;
  int visited = 0;
  bool have_first = false;
  std::vector<int> path;
  std::vector<int> first_path;
  std::vector<int> first_label;
  std::vector<std::vector<int>> gens;

  IrSearch(const ColoredGraph& graph, int node_budget)
      : g(graph), budget(node_budget) {}

  static constexpr int kNoJump = INT_MAX;

  int target_cell(const std::vector<int>& colors, std::vector<int>* members) const {
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < g.n; ++v) cells[colors[v]].push_back(v);
    int best = -1;
    std::size_t best_size = 0;
    for (auto& [c, vs] : cells) {
      if (vs.size() < 2) continue;
      if (best < 0 || vs.size() < best_size) {
        best = c;
        best_size = vs.size();
      }
    }
    if (best >= 0) *members = cells[best];
    return best;
  }

  // Orbit of already-tried candidates under generators fixing the path.
  bool pruned(int u, const std::vector<int>& tried) const {
    if (tried.empty()) return false;
    UnionFind uf(g.n);
    for (const std::vector<int>& perm : gens) {
      bool fixes = true;
      for (int p : path)
        if (perm[p] != p) {
          fixes = false;
          break;
        }
      if (!fixes) continue;
      for (int v = 0; v < g.n; ++v) uf.unite(v, perm[v]);
    }
    for (int t : tried)
      if (uf.find(t) == uf.find(u)) return true;
    return false;
  }

  int search(std::vector<int> colors, int depth) {
    if (++visited > budget)
      throw std::runtime_error("automorphism search: node budget exceeded");
    colors = refine(g, colors);
    if (is_discrete(colors)) {
      if (!have_first) {
        have_first = true;
        first_path = path;
        first_label = colors;
        return kNoJump;
      }
      // Map the first leaf onto this one via equal labels.
      std::vector<int> by_label(g.n), perm(g.n);
      for (int v = 0; v < g.n; ++v) by_label[colors[v]] = v;
      bool identity = true;
      for (int v = 0; v < g.n; ++v) {
        perm[v] = by_label[first_label[v]];
        if (perm[v] != v) identity = false;
      }
      if (identity || !is_automorphism(g, perm)) return kNoJump;
      gens.push_back(std::move(perm));
      // Backjump to the deepest ancestor on the leftmost path.
      int common = 0;
      while (common < static_cast<int>(path.size()) &&
             common < static_cast<int>(first_path.size()) &&
             path[common] == first_path[common])
        ++common;
      return common;
    }

    std::vector<int> members;
    int cell = target_cell(colors, &members);
    if (cell < 0) return kNoJump;  // unreachable: non-discrete has a cell
    std::vector<int> tried;
    for (int u : members) {
      if (pruned(u, tried)) continue;
      tried.push_back(u);
      std::vector<int> child = colors;
      // Individualize: u precedes the remainder of its cell.
      for (int v = 0; v < g.n; ++v)
        if (child[v] >= child[u] && v != u) ++child[v];
      path.push_back(u);
      int jump = search(std::move(child), depth + 1);
      path.pop_back();
      if (jump != kNoJump && jump < depth) return jump;
    }
    return kNoJump;
  }
};

}  // namespace

std::vector<std::vector<int>> find_automorphism_generators(const ColoredGraph& g,
                                                           int node_budget) {
  if (g.n == 0) return {};
  IrSearch s(g, node_budget);
  std::vector<int> colors = g.color;
  s.search(std::move(colors), 0);
  return s.gens;
}

std::vector<std::vector<int>> automorphisms_bruteforce(const ColoredGraph& g) {
  std::vector<std::vector<int>> out;
  std::vector<int> perm(g.n, -1);
  std::vector<bool> used(g.n, false);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == g.n) {
      if (is_automorphism(g, perm)) out.push_back(perm);
      return;
    }
    for (int w = 0; w < g.n; ++w) {
      if (used[w] || g.color[w] != g.color[v]) continue;
      if (g.adj[w].size() != g.adj[v].size()) continue;
      bool ok = true;
      for (int u : g.adj[v]) {
        if (perm[u] >= 0 && !g.has_edge(w, perm[u])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      perm[v] = w;
      used[w] = true;
      self(self, v + 1);
      used[w] = false;
      perm[v] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<std::vector<int>> permutation_closure(
    const std::vector<std::vector<int>>& gens, int n, std::size_t cap) {
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> todo{id}, all{id};
  while (!todo.empty()) {
    std::vector<int> cur = std::move(todo.back());
    todo.pop_back();
    for (const std::vector<int>& gperm : gens) {
      std::vector<int> next(n);
      for (int i = 0; i < n; ++i) next[i] = gperm[cur[i]];
      if (seen.insert(next).second) {
        if (seen.size() > cap) return {};
        all.push_back(next);
        todo.push_back(next);
      }
    }
  }
  std::sort(all.begin(), all.end());
  return all;
}

ExtractResult extract_signed_permutations(const std::vector<std::vector<int>>& gens,
                                          const Sdg& g, std::size_t prune_cap) {
  ExtractResult out;
  int n = g.nvars();
  std::set<std::vector<int>> kept_images;
  std::vector<SignedPermutation> kept;
  bool prune = true;
  std::set<std::vector<int>> known;
  if (prune) {
    SignedPermutation id = SignedPermutation::identity(n);
    known.insert(id.images());
  }

  for (const std::vector<int>& perm : gens) {
    std::vector<int> img(n, 0);
    bool ok = true;
    for (int i = 1; i <= n && ok; ++i) {
      int node = g.var_node(i);
      int image = perm[node];
      int s = g.signed_index_of(image);
      if (s == 0) {
        ok = false;
        break;
      }
      img[i - 1] = s;
      if (g.mode() == SymMode::Reflection &&
          perm[g.var_node(-i)] != g.var_node(-s))
        ok = false;
    }
    if (!ok) {
      out.success = false;
      out.message = "variable pairing violated by an automorphism";
      return out;
    }
    SignedPermutation sp(img);
    if (sp.is_identity()) continue;
    if (kept_images.count(sp.images())) continue;
    if (prune && known.count(sp.images())) continue;
    kept.push_back(sp);
    kept_images.insert(sp.images());
    if (prune) {
      auto closed = closure(kept, prune_cap);
      if (closed) {
        known.clear();
        for (const SignedPermutation& c : *closed) known.insert(c.images());
      } else {
        prune = false;
        known.clear();
      }
    }
  }
  out.generators = std::move(kept);
  return out;
}

}  // namespace symref
