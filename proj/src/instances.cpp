// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Instance generators for the four geometric/combinatorial families, the
// line-oriented text format, and the command line driver.

#include "symref/instances.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "symref/expr.hpp"
#include "symref/groups.hpp"
#include "symref/handle.hpp"
#include "symref/model.hpp"
#include "symref/solve.hpp"

namespace symref {

namespace {

std::string num(double v) { return format_number(v); }

// ---------------------------------------------------------------------------
// Generators assemble canonical instance text and parse it; this keeps the
// generators, the parser, and the writer mutually consistent by construction.

std::string coord(int s, int i) {
  return "x" + std::to_string(s) + "_" + std::to_string(i);
}

Minlp finish(const std::string& name, std::string text) {
  Minlp p = parse_instance(text);
  p.name = name;
  return p;
}

}  // namespace

Minlp gen_packing(int n, int d) {
  std::ostringstream out;
  for (int s = 1; s <= n; ++s)
    for (int i = 1; i <= d; ++i)
      out << "var " << coord(s, i) << " -1 1 cont 0\n";
  out << "var r 0 1 cont -1\n";
  for (int s = 1; s <= n; ++s)
    for (int t = s + 1; t <= n; ++t) {
      out << "con expr (+";
      for (int i = 1; i <= d; ++i)
        out << " (abs (+ " << coord(s, i) << " (neg " << coord(t, i) << ")))";
      out << " (* -2 r)) ge 0\n";
    }
  // The +-(1 - r) coordinate limits as explicit rows so the plain variable
  // bounds (and with them the reflection centers) stay constant.
  for (int s = 1; s <= n; ++s)
    for (int i = 1; i <= d; ++i) {
      out << "con expr (+ " << coord(s, i) << " r) le 1\n";
      out << "con expr (+ (neg " << coord(s, i) << ") r) le 1\n";
    }
  return finish("packing_" + std::to_string(n) + "_" + std::to_string(d), out.str());
}

Minlp gen_kissing(int n, int d) {
  std::ostringstream out;
  for (int s = 1; s <= n; ++s)
    for (int i = 1; i <= d; ++i)
      out << "var " << coord(s, i) << " -2 2 cont 0\n";
  out << "var alpha 0 1 cont -1\n";
  for (int s = 1; s <= n; ++s) {
    out << "con expr (+";
    for (int i = 1; i <= d; ++i) out << " (pow " << coord(s, i) << " 2)";
    out << ") eq 4\n";
  }
  for (int s = 1; s <= n; ++s)
    for (int t = s + 1; t <= n; ++t) {
      out << "con expr (+ 8";
      for (int i = 1; i <= d; ++i)
        out << " (* -2 " << coord(s, i) << " " << coord(t, i) << ")";
      out << " (* -4 alpha)) ge 0\n";
    }
  return finish("kissing_" + std::to_string(n) + "_" + std::to_string(d), out.str());
}

Minlp gen_energy(int n, int d) {
  std::ostringstream out;
  for (int s = 1; s <= n; ++s)
    for (int i = 1; i <= d; ++i)
      out << "var " << coord(s, i) << " -1 1 cont 0\n";
  out << "var alpha 0 100 cont 1\n";
  for (int s = 1; s <= n; ++s) {
    out << "con expr (+";
    for (int i = 1; i <= d; ++i) out << " (pow " << coord(s, i) << " 2)";
    out << ") eq 1\n";
  }
  // Total inverse-square energy lifted to the objective variable.
  out << "con expr (+";
  for (int s = 1; s <= n; ++s)
    for (int t = s + 1; t <= n; ++t) {
      out << " (pow (+";
      for (int i = 1; i <= d; ++i)
        out << " (pow (+ " << coord(s, i) << " (neg " << coord(t, i) << ")) 2)";
      out << ") -1)";
    }
  out << " (neg alpha)) le 0\n";
  return finish("energy_" + std::to_string(n) + "_" + std::to_string(d), out.str());
}

Minlp gen_maxcut(int nnodes, const std::vector<std::pair<int, int>>& edges) {
  std::ostringstream out;
  for (int v = 1; v <= nnodes; ++v) out << "var x" << v << " 0 1 bin 0\n";
  for (auto [u, v] : edges)
    out << "var y" << u << "_" << v << " 0 1 bin -1\n";
  for (auto [u, v] : edges) {
    std::string y = "y" + std::to_string(u) + "_" + std::to_string(v);
    out << "con expr (+ x" << u << " x" << v << " " << y << ") le 2\n";
    out << "con expr (+ (neg x" << u << ") (neg x" << v << ") " << y << ") le 0\n";
  }
  return finish("maxcut_" + std::to_string(nnodes) + "_" + std::to_string(edges.size()),
                out.str());
}

std::vector<std::pair<int, int>> complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) edges.push_back({u, v});
  return edges;
}

std::vector<std::pair<int, int>> cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  if (n == 2) return {{1, 2}};
  for (int u = 1; u <= n; ++u) {
    int v = u % n + 1;
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  return edges;
}

std::vector<std::pair<int, int>> petersen_graph() {
  std::vector<std::pair<int, int>> edges;
  for (int u = 1; u <= 5; ++u) edges.push_back({std::min(u, u % 5 + 1), std::max(u, u % 5 + 1)});
  for (int u = 1; u <= 5; ++u) edges.push_back({u, u + 5});
  int star[5] = {6, 8, 10, 7, 9};
  for (int k = 0; k < 5; ++k) {
    int u = star[k], v = star[(k + 1) % 5];
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  return edges;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string padded;
  for (char c : line) {
    if (c == '#') break;  // comment to end of line
    if (c == '(' || c == ')') {
      padded.push_back(' ');
      padded.push_back(c);
      padded.push_back(' ');
    } else {
      padded.push_back(c);
    }
  }
  std::vector<std::string> toks;
  std::istringstream in(padded);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

double parse_num(const std::string& tok, int line) {
  if (tok == "inf" || tok == "+inf") return kInf;
  if (tok == "-inf") return -kInf;
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw ParseError(line, "bad number '" + tok + "'");
  return v;
}

long parse_int(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0')
    throw ParseError(line, "bad integer '" + tok + "'");
  return v;
}

struct SexprParser {
  const std::vector<std::string>& toks;
  std::size_t pos;
  const std::map<std::string, int>& vars;  // name -> 1-based index
  int line;

  const std::string& peek() const {
    if (pos >= toks.size()) throw ParseError(line, "unterminated s-expression");
    return toks[pos];
  }
  std::string take() {
    std::string t = peek();
    ++pos;
    return t;
  }

  int parse(ExprTree* t) {
    std::string tok = take();
    if (tok == ")") throw ParseError(line, "unexpected ')'");
    if (tok != "(") {
      auto it = vars.find(tok);
      if (it != vars.end()) return t->add_var(it->second);
      if (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-' ||
          tok[0] == '+' || tok[0] == '.')
        return t->add_value(parse_num(tok, line));
      throw ParseError(line, "unknown variable '" + tok + "'");
    }
    std::string head = take();
    Op op;
    if (head == "+")
      op = Op::Sum;
    else if (head == "*")
      op = Op::Product;
    else if (head == "pow")
      op = Op::Power;
    else if (head == "abs")
      op = Op::Abs;
    else if (head == "neg")
      op = Op::Negate;
    else
      throw ParseError(line, "unknown operator '" + head + "'");
    std::vector<int> children;
    int exponent = 0;
    if (op == Op::Power) {
      children.push_back(parse(t));
      long k = parse_int(take(), line);
      if (k < -kMaxExponent || k > kMaxExponent)
        throw ParseError(line, "exponent out of range");
      exponent = static_cast<int>(k);
    } else {
      while (peek() != ")") children.push_back(parse(t));
    }
    if (take() != ")") throw ParseError(line, "expected ')'");
    if (children.empty()) throw ParseError(line, "empty operator");
    if ((op == Op::Abs || op == Op::Negate) && children.size() != 1)
      throw ParseError(line, "operator takes one argument");
    return t->add_op(op, std::move(children), exponent);
  }
};

StableSetData parse_graph(const std::vector<std::string>& toks, std::size_t* pos,
                          const std::map<std::string, int>& vars, int line) {
  StableSetData data;
  std::map<int, int> position;  // variable index -> slot in data.vars
  auto expect = [&](const std::string& want) {
    if (*pos >= toks.size() || toks[*pos] != want)
      throw ParseError(line, "malformed graph payload, expected '" + want + "'");
    ++*pos;
  };
  auto word = [&]() {
    if (*pos >= toks.size()) throw ParseError(line, "malformed graph payload");
    return toks[(*pos)++];
  };
  expect("(");
  expect("graph");
  while (*pos < toks.size() && toks[*pos] == "(") {
    ++*pos;
    std::string kind = word();
    if (kind == "node") {
      std::string name = word();
      auto it = vars.find(name);
      if (it == vars.end()) throw ParseError(line, "unknown variable '" + name + "'");
      if (position.count(it->second)) throw ParseError(line, "duplicate node '" + name + "'");
      position[it->second] = static_cast<int>(data.vars.size());
      data.vars.push_back(it->second);
      data.weights.push_back(parse_num(word(), line));
    } else if (kind == "edge") {
      int slot[2];
      for (int k = 0; k < 2; ++k) {
        std::string name = word();
        auto it = vars.find(name);
        if (it == vars.end() || !position.count(it->second))
          throw ParseError(line, "edge endpoint '" + name + "' is not a node");
        slot[k] = position[it->second];
      }
      if (slot[0] == slot[1]) throw ParseError(line, "self-loop edge");
      data.edges.push_back({slot[0], slot[1]});
    } else {
      throw ParseError(line, "malformed graph payload, got '" + kind + "'");
    }
    expect(")");
  }
  expect(")");
  return data;
}

Rel parse_rel(const std::string& tok, int line) {
  if (tok == "le") return Rel::Le;
  if (tok == "ge") return Rel::Ge;
  if (tok == "eq") return Rel::Eq;
  throw ParseError(line, "expected relation le|ge|eq, got '" + tok + "'");
}

// S-expression printer using the declared variable names.
void print_sexpr(const Minlp& p, const ExprTree& t, int id, std::string* out) {
  const ExprNode& n = t.node(id);
  switch (n.kind) {
    case ExprNode::Kind::Value:
      out->append(num(n.value));
      return;
    case ExprNode::Kind::Var:
      out->append(p.vars[n.var - 1].name);
      return;
    case ExprNode::Kind::Operator:
      break;
  }
  const char* head = nullptr;
  switch (n.op) {
    case Op::Sum: head = "(+"; break;
    case Op::Product: head = "(*"; break;
    case Op::Power: head = "(pow"; break;
    case Op::Abs: head = "(abs"; break;
    case Op::Negate: head = "(neg"; break;
  }
  out->append(head);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    out->push_back(' ');
    if (n.coefs[i] != 1.0) {
      out->append("(* ");
      out->append(num(n.coefs[i]));
      out->push_back(' ');
      print_sexpr(p, t, n.children[i], out);
      out->push_back(')');
    } else {
      print_sexpr(p, t, n.children[i], out);
    }
  }
  if (n.op == Op::Power) {
    out->push_back(' ');
    out->append(std::to_string(n.exponent));
  }
  out->push_back(')');
}

}  // namespace

Minlp parse_instance(const std::string& text) {
  Minlp p;
  std::map<std::string, int> vars;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::vector<std::string> toks = tokenize(raw);
    if (toks.empty()) continue;
    if (toks[0] == "var") {
      if (toks.size() != 6) throw ParseError(line, "var takes name lb ub kind objcoef");
      Variable v;
      v.name = toks[1];
      if (vars.count(v.name)) throw ParseError(line, "duplicate variable '" + v.name + "'");
      v.lb = parse_num(toks[2], line);
      v.ub = parse_num(toks[3], line);
      if (toks[4] == "cont")
        v.integral = false;
      else if (toks[4] == "int" || toks[4] == "bin")
        v.integral = true;
      else
        throw ParseError(line, "variable kind must be cont|int|bin");
      v.obj = parse_num(toks[5], line);
      p.vars.push_back(v);
      vars[v.name] = static_cast<int>(p.vars.size());
    } else if (toks[0] == "con") {
      if (toks.size() < 4) throw ParseError(line, "con takes tag sexpr rel rhs");
      Constraint c;
      c.name = "c" + std::to_string(p.cons.size() + 1);
      std::size_t pos = 2;
      if (toks[1] == "expr" || toks[1] == "expr-enhanced") {
        c.tag = toks[1] == "expr" ? ConsTag::Expr : ConsTag::ExprEnhanced;
        ExprTree t;
        SexprParser sp{toks, pos, vars, line};
        int root = sp.parse(&t);
        t.set_root(root);
        c.tree = std::move(t);
        pos = sp.pos;
      } else if (toks[1] == "stableset") {
        c.tag = ConsTag::StableSet;
        c.stable = parse_graph(toks, &pos, vars, line);
      } else {
        throw ParseError(line, "unknown constraint tag '" + toks[1] + "'");
      }
      if (pos + 2 != toks.size()) throw ParseError(line, "expected '<rel> <rhs>' after body");
      c.rel = parse_rel(toks[pos], line);
      c.rhs = parse_num(toks[pos + 1], line);
      p.cons.push_back(std::move(c));
    } else {
      throw ParseError(line, "unknown record '" + toks[0] + "'");
    }
  }
  return p;
}

Minlp read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string write_instance(const Minlp& p) {
  std::string out;
  for (const Variable& v : p.vars) {
    out += "var " + v.name + " " + num(v.lb) + " " + num(v.ub) + " ";
    out += v.integral ? (v.lb == 0.0 && v.ub == 1.0 ? "bin" : "int") : "cont";
    out += " " + num(v.obj) + "\n";
  }
  for (const Constraint& c : p.cons) {
    out += "con ";
    if (c.tag == ConsTag::StableSet) {
      out += "stableset (graph";
      for (std::size_t k = 0; k < c.stable.vars.size(); ++k)
        out += " (node " + p.vars[c.stable.vars[k] - 1].name + " " +
               num(c.stable.weights[k]) + ")";
      for (auto [a, b] : c.stable.edges)
        out += " (edge " + p.vars[c.stable.vars[a] - 1].name + " " +
               p.vars[c.stable.vars[b] - 1].name + ")";
      out += ")";
    } else {
      out += c.tag == ConsTag::Expr ? "expr " : "expr-enhanced ";
      print_sexpr(p, c.tree, c.tree.root(), &out);
    }
    switch (c.rel) {
      case Rel::Le: out += " le "; break;
      case Rel::Ge: out += " ge "; break;
      case Rel::Eq: out += " eq "; break;
    }
    out += num(c.rhs) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// CLI

namespace {

int detect_command(const std::string& file, const std::string& mode, bool enhanced,
                   bool json, bool plan, const std::string& setting) {
  Minlp p;
  try {
    p = read_instance_file(file);
  } catch (const ParseError& e) {
    std::cerr << "parse error line " << e.line << ": " << e.what() << "\n";
    return 2;
  }
  SymMode m = mode == "perm" ? SymMode::Permutation : SymMode::Reflection;
  GroupReport report;
  try {
    report = analyze(p, m, enhanced);
  } catch (const std::runtime_error& e) {
    std::cerr << "detection failed: " << e.what() << "\n";
    return std::string(e.what()).find("budget") != std::string::npos ? 3 : 2;
  }
  if (json) {
    std::cout << report.to_json() << "\n";
  } else {
    std::cout << report.to_text();
    if (plan) {
      Setting s = Setting::Automatic;
      parse_setting(setting, &s);
      HandlerPlan hp = build_plan(report, s);
      std::cout << "plan (" << setting_name(s) << "):\n" << to_text(hp);
    }
  }
  return 0;
}

int solve_command(const std::string& file, const std::string& setting, long nodes,
                  double gap, double time_limit) {
  Minlp p;
  try {
    p = read_instance_file(file);
  } catch (const ParseError& e) {
    std::cerr << "parse error line " << e.line << ": " << e.what() << "\n";
    return 2;
  }
  Setting s = Setting::Automatic;
  if (!parse_setting(setting, &s)) {
    std::cerr << "unknown setting '" << setting << "'\n";
    return 2;
  }
  HandlerPlan plan;
  if (s != Setting::Sym0) {
    try {
      GroupReport report = analyze(p, SymMode::Reflection, true);
      plan = build_plan(report, s);
    } catch (const std::runtime_error& e) {
      std::cerr << "detection failed: " << e.what() << "\n";
      return std::string(e.what()).find("budget") != std::string::npos ? 3 : 2;
    }
  }
  SolveParams prm;
  prm.node_limit = nodes;
  prm.gap_tol = gap;
  prm.time_limit_sec = time_limit;
  SolveResult r = solve(p, plan, prm);
  const char* status = r.status == SolveStatus::Optimal
                           ? "optimal"
                           : r.status == SolveStatus::Infeasible ? "infeasible" : "limit";
  std::cout << "status: " << status << " (" << r.message << ")\n";
  if (r.has_incumbent) std::cout << "objective: " << num(r.primal) << "\n";
  std::cout << "bound: " << num(r.dual_bound) << "\n";
  std::cout << "nodes: " << r.nodes << "\n";
  std::cout << "pd-integral: " << num(r.pd_integral) << "\n";
  if (r.has_incumbent)
    for (int i = 0; i < p.nvars(); ++i)
      std::cout << p.vars[i].name << " = " << num(r.x[i]) << "\n";
  switch (r.status) {
    case SolveStatus::Optimal:
      return 0;
    case SolveStatus::Infeasible:
      return 1;
    case SolveStatus::Limit:
      return 3;
  }
  return 3;
}

int gen_command(const std::string& family, int n, int d, const std::string& graph,
                const std::string& out_path) {
  Minlp p;
  if (family == "packing") {
    p = gen_packing(n, d);
  } else if (family == "kissing") {
    p = gen_kissing(n, d);
  } else if (family == "energy") {
    p = gen_energy(n, d);
  } else if (family == "maxcut") {
    std::vector<std::pair<int, int>> edges;
    int nn = 0;
    if (graph == "petersen") {
      nn = 10;
      edges = petersen_graph();
    } else if (graph.size() > 1 && (graph[0] == 'k' || graph[0] == 'c')) {
      nn = static_cast<int>(parse_int(graph.substr(1), 0));
      edges = graph[0] == 'k' ? complete_graph(nn) : cycle_graph(nn);
    } else {
      std::cerr << "unknown graph '" << graph << "' (use kN, cN, or petersen)\n";
      return 2;
    }
    p = gen_maxcut(nn, edges);
  } else {
    std::cerr << "unknown family '" << family << "'\n";
    return 2;
  }
  std::string text = write_instance(p);
  if (out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return 2;
    }
    out << text;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"symmetry detection and exploitation for small MINLPs"};
  app.name("symref");
  app.require_subcommand(1);

  std::string file, mode = "refl", setting = "auto", family, graph = "k3", out_path = "-";
  bool enhanced = false, json = false, plan = false;
  long nodes = SolveParams{}.node_limit;
  double gap = SolveParams{}.gap_tol, time_limit = SolveParams{}.time_limit_sec;
  int n = 3, d = 2;

  CLI::App* det = app.add_subcommand("detect", "detect symmetries of an instance");
  det->add_option("file", file, "instance file")->required();
  det->add_option("--mode", mode, "symmetry kind")->check(CLI::IsMember({"perm", "refl"}));
  det->add_flag("--enhanced", enhanced, "use the pattern-matching graph builder");
  det->add_flag("--json", json, "emit the report as JSON");
  det->add_flag("--plan", plan, "also print the handling plan");
  det->add_option("--setting", setting, "plan setting (with --plan)");

  CLI::App* sol = app.add_subcommand("solve", "solve an instance");
  sol->add_option("file", file, "instance file")->required();
  sol->add_option("--setting", setting, "sym0..sym6 or auto");
  sol->add_option("--nodes", nodes, "node limit");
  sol->add_option("--gap", gap, "relative gap tolerance");
  sol->add_option("--time", time_limit, "time limit in seconds");

  CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("family", family, "packing|kissing|energy|maxcut")->required();
  gen->add_option("--n", n, "number of objects");
  gen->add_option("--d", d, "dimension");
  gen->add_option("--graph", graph, "maxcut graph: kN, cN, or petersen");
  gen->add_option("--out", out_path, "output path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (det->parsed()) return detect_command(file, mode, enhanced, json, plan, setting);
  if (sol->parsed()) return solve_command(file, setting, nodes, gap, time_limit);
  if (gen->parsed()) return gen_command(family, n, d, graph, out_path);
  return 2;
}

}  // namespace symref
