// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/groups.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "symref/autom.hpp"
#include "symref/builders.hpp"

namespace symref {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> sorted_intersection(const std::vector<int>& a,
                                     const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

using Cycles = std::vector<std::pair<int, int>>;

// Groups the cells paired by the given 2-cycles; returns the classes sorted by
// smallest member.
std::vector<std::vector<int>> glue(const std::vector<const Cycles*>& cycles,
                                   const std::vector<int>& support) {
  std::map<int, int> pos;
  for (int i = 0; i < static_cast<int>(support.size()); ++i) pos[support[i]] = i;
  UnionFind uf(static_cast<int>(support.size()));
  for (const Cycles* cs : cycles)
    for (const auto& [a, b] : *cs) uf.unite(pos.at(a), pos.at(b));
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < static_cast<int>(support.size()); ++i)
    comps[uf.find(i)].push_back(support[i]);
  std::vector<std::vector<int>> out;
  for (auto& [root, cells] : comps) out.push_back(std::move(cells));
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return out;
}

// Orders the classes so that every edge joins consecutive classes; the walk
// starts at the endpoint holding the smallest cell.  Empty on failure.
std::vector<int> path_order(int nclasses, const std::set<std::pair<int, int>>& edges,
                            const std::vector<std::vector<int>>& classes) {
  if (nclasses == 1 && edges.empty()) return {0};
  if (static_cast<int>(edges.size()) != nclasses - 1) return {};
  std::vector<std::vector<int>> adj(nclasses);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> ends;
  for (int i = 0; i < nclasses; ++i) {
    if (adj[i].size() > 2) return {};
    if (adj[i].size() <= 1) ends.push_back(i);
  }
  if (static_cast<int>(ends.size()) != 2) return {};
  int start = ends[0];
  if (classes[ends[1]].front() < classes[ends[0]].front()) start = ends[1];
  std::vector<int> order{start};
  int prev = -1, cur = start;
  while (static_cast<int>(order.size()) < nclasses) {
    int next = -1;
    for (int nb : adj[cur])
      if (nb != prev) next = nb;
    if (next < 0) return {};
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  return order;
}

// The index pair of the two classes a generator's support touches, or nullopt
// when it does not exchange exactly two whole classes cell-by-cell.
std::optional<std::pair<int, int>> swapped_pair(const Cycles& cycles,
                                                const std::map<int, int>& class_of) {
  std::set<int> touched;
  for (const auto& [a, b] : cycles) {
    int ca = class_of.at(a), cb = class_of.at(b);
    if (ca == cb) return std::nullopt;
    touched.insert(ca);
    touched.insert(cb);
  }
  if (touched.size() != 2) return std::nullopt;
  auto it = touched.begin();
  int first = *it++;
  return std::make_pair(first, *it);
}

// Verifies that a generator is exactly the exchange of two adjacent rows (or
// columns) of the grid.
bool is_adjacent_exchange(const SignedPermutation& g,
                          const std::vector<std::vector<int>>& m) {
  int p = static_cast<int>(m.size());
  int q = static_cast<int>(m.front().size());
  auto matches = [&](const std::vector<std::vector<int>>& grid) {
    int rows = static_cast<int>(grid.size());
    for (int i = 0; i + 1 < rows; ++i) {
      SignedPermutation s = SignedPermutation::identity(g.n());
      std::vector<int> img = s.images();
      for (int j = 0; j < static_cast<int>(grid[i].size()); ++j) {
        img[grid[i][j] - 1] = grid[i + 1][j];
        img[grid[i + 1][j] - 1] = grid[i][j];
      }
      if (g == SignedPermutation(img)) return true;
    }
    return false;
  };
  if (matches(m)) return true;
  std::vector<std::vector<int>> t(q, std::vector<int>(p));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) t[j][i] = m[i][j];
  return matches(t);
}

// Pure reflection of a single class of cells: g(i) = -i on the class and
// g(i) = i elsewhere.
bool reflects_exactly(const SignedPermutation& g, const std::vector<int>& cells) {
  std::set<int> in(cells.begin(), cells.end());
  for (int i = 1; i <= g.n(); ++i) {
    int want = in.count(i) ? -i : i;
    if (g(i) != want) return false;
  }
  return true;
}

struct StitchResult {
  bool ok = false;
  std::vector<std::vector<int>> rows;  // path-ordered, cells column-aligned
};

// Reconstructs the classes exchanged by a family of disjoint-2-cycle swaps
// together with a path order, given the aligned-cell partition (the classes
// the 2-cycles glue).  `aligned` plays the column role when the swaps are row
// swaps.
StitchResult stitch(const std::vector<const Cycles*>& swaps,
                    const std::vector<std::vector<int>>& aligned,
                    const std::vector<int>& support) {
  StitchResult out;
  const int q = static_cast<int>(aligned.size());
  if (q == 0 || support.empty() || static_cast<int>(support.size()) % q != 0)
    return out;
  const int p = static_cast<int>(support.size()) / q;
  std::map<int, int> aligned_of;
  for (int j = 0; j < q; ++j)
    for (int cell : aligned[j]) aligned_of[cell] = j;

  // Every swap must pair cells of q distinct aligned classes.
  std::vector<std::vector<int>> supports;
  for (const Cycles* cs : swaps) {
    if (static_cast<int>(cs->size()) != q) return out;
    std::set<int> seen;
    std::vector<int> sup;
    for (const auto& [a, b] : *cs) {
      if (aligned_of.at(a) != aligned_of.at(b)) return out;
      if (!seen.insert(aligned_of.at(a)).second) return out;
      sup.push_back(a);
      sup.push_back(b);
    }
    std::sort(sup.begin(), sup.end());
    supports.push_back(std::move(sup));
  }

  // Shared rows show up as q-sized support intersections; remaining rows are
  // complements within a swap once its partner row is known.
  std::map<int, int> pos;
  for (int i = 0; i < static_cast<int>(support.size()); ++i) pos[support[i]] = i;
  UnionFind uf(static_cast<int>(support.size()));
  auto unite_all = [&](const std::vector<int>& cells) {
    bool merged = false;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (uf.find(pos.at(cells[0])) != uf.find(pos.at(cells[k]))) {
        uf.unite(pos.at(cells[0]), pos.at(cells[k]));
        merged = true;
      }
    }
    return merged;
  };
  for (std::size_t i = 0; i < supports.size(); ++i)
    for (std::size_t j = i + 1; j < supports.size(); ++j) {
      std::vector<int> inter = sorted_intersection(supports[i], supports[j]);
      if (inter.empty()) continue;
      if (static_cast<int>(inter.size()) != q) return out;
      unite_all(inter);
    }
  auto complete_rows = [&]() {
    std::map<int, std::vector<int>> comps;
    for (int i = 0; i < static_cast<int>(support.size()); ++i)
      comps[uf.find(i)].push_back(support[i]);
    std::set<int> cells;
    for (const auto& [root, members] : comps)
      if (static_cast<int>(members.size()) == q)
        cells.insert(members.begin(), members.end());
    return cells;
  };
  for (bool changed = true; changed;) {
    changed = false;
    std::set<int> done = complete_rows();
    for (const auto& sup : supports) {
      std::vector<int> known, rest;
      for (int cell : sup) (done.count(cell) ? known : rest).push_back(cell);
      if (static_cast<int>(known.size()) == q && static_cast<int>(rest.size()) == q)
        changed |= unite_all(rest);
    }
    if (!changed) {
      // Isolated two-row components: orient by the smaller cell of each cycle.
      for (std::size_t gi = 0; gi < swaps.size(); ++gi) {
        bool untouched = std::none_of(supports[gi].begin(), supports[gi].end(),
                                      [&](int c) { return done.count(c); });
        if (!untouched) continue;
        std::vector<int> low, high;
        for (const auto& [a, b] : *swaps[gi]) {
          low.push_back(std::min(a, b));
          high.push_back(std::max(a, b));
        }
        changed |= unite_all(low);
        changed |= unite_all(high);
        if (changed) break;
      }
    }
  }

  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < static_cast<int>(support.size()); ++i)
    comps[uf.find(i)].push_back(support[i]);
  if (static_cast<int>(comps.size()) != p) return out;
  std::vector<std::vector<int>> rows;
  for (auto& [root, members] : comps) {
    if (static_cast<int>(members.size()) != q) return out;
    std::set<int> cols;
    for (int cell : members) cols.insert(aligned_of.at(cell));
    if (static_cast<int>(cols.size()) != q) return out;
    rows.push_back(std::move(members));
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });

  std::map<int, int> row_of;
  for (int i = 0; i < p; ++i)
    for (int cell : rows[i]) row_of[cell] = i;
  std::set<std::pair<int, int>> edges;
  for (const Cycles* cs : swaps) {
    auto pair = swapped_pair(*cs, row_of);
    if (!pair) return out;
    edges.insert(*pair);
  }
  std::vector<int> order = path_order(p, edges, rows);
  if (order.empty()) return out;
  out.rows.reserve(p);
  for (int idx : order) out.rows.push_back(rows[idx]);
  out.ok = true;
  return out;
}

// Lays out path-ordered rows against ordered columns; empty on any mismatch.
std::vector<std::vector<int>> assemble(const std::vector<std::vector<int>>& rows,
                                       const std::vector<std::vector<int>>& cols) {
  std::map<int, int> col_of;
  for (int j = 0; j < static_cast<int>(cols.size()); ++j)
    for (int cell : cols[j]) col_of[cell] = j;
  std::vector<std::vector<int>> m(rows.size(), std::vector<int>(cols.size(), 0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int cell : rows[i]) {
      auto it = col_of.find(cell);
      if (it == col_of.end() || m[i][it->second] != 0) return {};
      m[i][it->second] = cell;
    }
  for (const auto& row : m)
    for (int cell : row)
      if (cell == 0) return {};
  return m;
}

std::vector<int> column_cells(const std::vector<std::vector<int>>& m, int j) {
  std::vector<int> out;
  for (const auto& row : m) out.push_back(row[j]);
  return out;
}

}  // namespace

std::vector<Factor> split_components(const std::vector<SignedPermutation>& gens) {
  if (gens.empty()) return {};
  int n = gens.front().n();
  UnionFind uf(n + 1);
  for (const auto& g : gens) {
    std::vector<int> sup = g.support();
    for (std::size_t k = 1; k < sup.size(); ++k) uf.unite(sup[0], sup[k]);
  }
  std::map<int, Factor> by_root;  // keyed by smallest support index
  for (const auto& g : gens) {
    std::vector<int> sup = g.support();
    if (sup.empty()) continue;
    Factor& f = by_root[uf.find(sup[0])];
    f.support = sorted_union(f.support, sup);
    f.gens.push_back(g);
  }
  std::vector<Factor> out;
  for (auto& [root, f] : by_root) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    return a.support.front() < b.support.front();
  });
  return out;
}

MatrixSymmetry detect_matrix_symmetry(const Factor& f, std::size_t closure_cap) {
  MatrixSymmetry out;
  std::vector<SignedPermutation> swaps;
  for (const auto& g : f.gens) {
    if (!g.is_unsigned()) continue;
    if (std::find(swaps.begin(), swaps.end(), g) == swaps.end()) swaps.push_back(g);
  }
  if (swaps.empty()) return out;
  std::vector<Cycles> cycles;
  for (const auto& g : swaps) {
    auto tc = g.two_cycles();
    if (!tc) return out;
    cycles.push_back(*tc);
  }
  std::map<std::size_t, std::vector<int>> classes;  // 2-cycle count -> gen indices
  for (int i = 0; i < static_cast<int>(cycles.size()); ++i)
    classes[cycles[i].size()].push_back(i);

  auto collect = [&](const std::vector<int>& idx) {
    std::vector<const Cycles*> out_c;
    for (int i : idx) out_c.push_back(&cycles[i]);
    return out_c;
  };

  std::vector<std::vector<int>> matrix;
  if (classes.size() == 2) {
    // The longer swaps pair cells within a row, so they glue the rows; the
    // shorter ones are the row exchanges and glue the columns.
    const auto& col_swaps = collect(classes.rbegin()->second);
    const auto& row_swaps = collect(classes.begin()->second);
    std::vector<std::vector<int>> rows_glued = glue(col_swaps, f.support);
    std::vector<std::vector<int>> cols_glued = glue(row_swaps, f.support);
    StitchResult rs = stitch(row_swaps, cols_glued, f.support);
    StitchResult cs = stitch(col_swaps, rows_glued, f.support);
    if (!rs.ok || !cs.ok) return out;
    matrix = assemble(rs.rows, cs.rows);
    if (matrix.empty()) return out;
    out.cls = MatrixClass::RowColumn;
  } else if (classes.size() == 1) {
    const auto& row_swaps = collect(classes.begin()->second);
    std::vector<std::vector<int>> cols_glued = glue(row_swaps, f.support);
    if (cols_glued.size() != classes.begin()->first) return out;
    StitchResult rs = stitch(row_swaps, cols_glued, f.support);
    if (!rs.ok) return out;
    std::sort(cols_glued.begin(), cols_glued.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    matrix = assemble(rs.rows, cols_glued);
    if (matrix.empty()) return out;
    out.cls = MatrixClass::Row;
  } else {
    return out;
  }

  for (const auto& g : swaps)
    if (!is_adjacent_exchange(g, matrix)) {
      out.cls = MatrixClass::Unstructured;
      return out;
    }
  out.matrix = matrix;

  const int p = static_cast<int>(matrix.size());
  const int q = static_cast<int>(matrix.front().size());
  auto scan = [&](const SignedPermutation& g) {
    for (int j = 0; j < q && !out.column_reflections; ++j)
      if (reflects_exactly(g, column_cells(matrix, j))) out.column_reflections = true;
    for (int i = 0; i < p && !out.row_reflections; ++i)
      if (reflects_exactly(g, matrix[i])) out.row_reflections = true;
  };
  for (const auto& g : f.gens)
    if (!g.is_unsigned()) scan(g);
  if (!out.column_reflections || !out.row_reflections) {
    auto cl = closure(f.gens, closure_cap);
    if (cl)
      for (const auto& g : *cl) scan(g);
  }
  return out;
}

bool detect_full_reflection(const std::vector<SignedPermutation>& gens,
                            const std::vector<int>& core, int n,
                            std::size_t closure_cap) {
  if (core.empty()) return false;
  std::vector<int> img(n);
  for (int i = 1; i <= n; ++i) img[i - 1] = i;
  for (int i : core) img[i - 1] = -i;
  SignedPermutation star{img};
  for (const auto& g : gens)
    if (g == star) return true;
  auto cl = closure(gens, closure_cap);
  if (!cl) return false;
  return std::find(cl->begin(), cl->end(), star) != cl->end();
}

std::vector<std::vector<int>> orbits(const std::vector<SignedPermutation>& gens, int n) {
  auto slot = [n](int i) { return i > 0 ? i - 1 : n - i - 1; };
  UnionFind uf(2 * n);
  for (const auto& g : gens)
    for (int i = 1; i <= n; ++i) {
      uf.unite(slot(i), slot(g(i)));
      uf.unite(slot(-i), slot(g(-i)));
    }
  std::map<int, std::vector<int>> comps;
  for (int i = 1; i <= n; ++i) {
    comps[uf.find(slot(i))].push_back(i);
    comps[uf.find(slot(-i))].push_back(-i);
  }
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : comps) {
    std::sort(members.begin(), members.end(), [](int a, int b) {
      return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b;
    });
    // Keep the orbit that holds its smallest variable positively; the mirror
    // orbit (all signs flipped) carries no extra information.
    if (members.front() > 0) out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.front() < y.front();
  });
  return out;
}

namespace {

std::vector<int> sign_touched(const Factor& f, int n) {
  auto slot = [n](int i) { return i > 0 ? i - 1 : n - i - 1; };
  UnionFind uf(2 * n);
  for (const auto& g : f.gens)
    for (int i = 1; i <= n; ++i) {
      uf.unite(slot(i), slot(g(i)));
      uf.unite(slot(-i), slot(g(-i)));
    }
  std::vector<int> core;
  for (int i : f.support) {
    int root = uf.find(slot(i));
    bool negated = false;
    for (int j = 1; j <= n && !negated; ++j)
      if (uf.find(slot(-j)) == root) negated = true;
    if (negated) core.push_back(i);
  }
  return core;
}

const char* class_name(MatrixClass c) {
  switch (c) {
    case MatrixClass::RowColumn: return "row-column";
    case MatrixClass::Row: return "row";
    default: return "unstructured";
  }
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

}  // namespace

std::string GroupReport::to_text() const {
  std::ostringstream os;
  os << "variables: " << nvars << "\n";
  os << "mode: " << (mode == SymMode::Reflection ? "reflection" : "permutation")
     << "\n";
  os << "enhanced: " << (enhanced ? "yes" : "no") << "\n";
  os << "sdg nodes: " << sdg_nodes << "\n";
  os << "quotient nodes: " << quotient_nodes << "\n";
  os << "generators: " << generators.size() << "\n";
  for (const auto& g : generators) os << "  " << g.cycles() << "\n";
  os << "factors: " << factors.size() << "\n";
  int k = 0;
  for (const auto& fr : factors) {
    os << "  factor " << ++k << ": support {" << join_ints(fr.factor.support)
       << "} class " << class_name(fr.matrix.cls);
    if (fr.matrix.cls != MatrixClass::Unstructured) {
      os << " " << fr.matrix.matrix.size() << "x" << fr.matrix.matrix.front().size();
      os << (fr.matrix.column_reflections ? " column-reflections" : "");
      os << (fr.matrix.row_reflections ? " row-reflections" : "");
    }
    if (fr.has_full_reflection) os << " full-reflection";
    os << " unsigned " << fr.unsigned_fraction << "\n";
    for (const auto& row : fr.matrix.matrix)
      os << "    [" << join_ints(row) << "]\n";
  }
  os << "orbits:";
  for (const auto& orb : orbit_partition) os << " {" << join_ints(orb) << "}";
  os << "\n";
  return os.str();
}

std::string GroupReport::to_json() const {
  nlohmann::json j;
  j["variables"] = nvars;
  j["mode"] = mode == SymMode::Reflection ? "reflection" : "permutation";
  j["enhanced"] = enhanced;
  j["sdg_nodes"] = sdg_nodes;
  j["quotient_nodes"] = quotient_nodes;
  j["centers"] = centers.xi;
  j["reflectable"] = centers.reflectable;
  j["generators"] = nlohmann::json::array();
  for (const auto& g : generators) j["generators"].push_back(g.cycles());
  j["factors"] = nlohmann::json::array();
  for (const auto& fr : factors) {
    nlohmann::json jf;
    jf["support"] = fr.factor.support;
    jf["class"] = class_name(fr.matrix.cls);
    jf["matrix"] = fr.matrix.matrix;
    jf["column_reflections"] = fr.matrix.column_reflections;
    jf["row_reflections"] = fr.matrix.row_reflections;
    jf["reflection_core"] = fr.reflection_core;
    jf["full_reflection"] = fr.has_full_reflection;
    jf["unsigned_fraction"] = fr.unsigned_fraction;
    jf["signed_fraction"] = 1.0 - fr.unsigned_fraction;
    j["factors"].push_back(std::move(jf));
  }
  j["orbits"] = orbit_partition;
  return j.dump(2);
}

GroupReport analyze(const Minlp& p, SymMode mode, bool enhanced, int node_budget) {
  GroupReport r;
  r.nvars = p.nvars();
  r.mode = mode;
  r.enhanced = enhanced;
  r.centers = compute_centers(p);

  ProblemSdg built = build_problem_sdg(p, mode, enhanced);
  if (!built.success) throw std::runtime_error(built.error);
  r.sdg_nodes = built.graph.nnodes();

  QuotientGraph quotient = eliminate_edge_colors(built.graph);
  r.quotient_nodes = quotient.graph.n;

  std::vector<std::vector<int>> raw =
      find_automorphism_generators(quotient.graph, node_budget);
  ExtractResult ext = extract_signed_permutations(raw, built.graph);
  if (!ext.success) throw std::runtime_error(ext.message);
  r.generators = ext.generators;

  for (const Factor& f : split_components(r.generators)) {
    FactorReport fr;
    fr.factor = f;
    fr.matrix = detect_matrix_symmetry(f);
    fr.reflection_core = sign_touched(f, r.nvars);
    fr.has_full_reflection =
        detect_full_reflection(f.gens, fr.reflection_core, r.nvars);
    int nuns = static_cast<int>(
        std::count_if(f.gens.begin(), f.gens.end(),
                      [](const SignedPermutation& g) { return g.is_unsigned(); }));
    fr.unsigned_fraction =
        f.gens.empty() ? 0.0 : static_cast<double>(nuns) / f.gens.size();
    r.factors.push_back(std::move(fr));
  }
  r.orbit_partition = orbits(r.generators, r.nvars);
  return r;
}

}  // namespace symref
