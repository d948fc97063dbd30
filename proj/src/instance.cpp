#include "ucvrp/instance.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ucvrp {

Instance::Instance(std::vector<VertexId> parent, std::vector<Rational> weight,
                   const std::map<VertexId, Rational>& demands)
    : parent_(std::move(parent)), weight_(std::move(weight)) {
  const int n = size();
  if (n == 0) throw std::invalid_argument("instance has no vertices");
  if (static_cast<int>(weight_.size()) != n) throw std::invalid_argument("weight/parent size mismatch");
  children_.assign(n, {});
  for (VertexId v = 0; v < n; ++v) {
    if (parent_[v] == kNoVertex) {
      if (root_ != kNoVertex) throw std::invalid_argument("more than one root");
      root_ = v;
      if (!weight_[v].is_zero()) throw std::invalid_argument("root must have weight 0");
    } else if (parent_[v] < 0 || parent_[v] >= n || parent_[v] == v) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " has invalid parent");
    } else {
      children_[parent_[v]].push_back(v);
    }
    if (weight_[v].sign() < 0) throw std::invalid_argument("negative weight on vertex " + std::to_string(v));
  }
  if (root_ == kNoVertex) throw std::invalid_argument("no root (cyclic parent structure)");

  terminal_.assign(n, false);
  demand_.assign(n, Rational(0));
  for (const auto& [v, d] : demands) {
    if (v < 0 || v >= n) throw std::invalid_argument("terminal " + std::to_string(v) + " is not a vertex");
    if (d.sign() <= 0 || d > Rational(1)) throw std::invalid_argument("demand outside (0,1] at vertex " + std::to_string(v));
    terminal_[v] = true;
    demand_[v] = d;
    terminals_.push_back(v);
  }

  dist_.assign(n, Rational(0));
  depth_.assign(n, 0);
  pre_index_.assign(n, -1);
  post_index_.assign(n, -1);
  // iterative DFS keeping pre/post numbers for ancestor queries
  std::vector<std::pair<VertexId, std::size_t>> stack{{root_, 0}};
  int post = 0;
  pre_index_[root_] = 0;
  preorder_.push_back(root_);
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < children_[v].size()) {
      VertexId c = children_[v][i++];
      pre_index_[c] = static_cast<int>(preorder_.size());
      preorder_.push_back(c);
      dist_[c] = dist_[v] + weight_[c];
      depth_[c] = depth_[v] + 1;
      stack.push_back({c, 0});
    } else {
      post_index_[v] = post++;
      stack.pop_back();
    }
  }
  if (static_cast<int>(preorder_.size()) != n)
    throw std::invalid_argument("parent structure is disconnected or cyclic");
}

bool Instance::is_ancestor(VertexId a, VertexId v) const {
  return pre_index_[a] <= pre_index_[v] && post_index_[v] <= post_index_[a];
}

Rational Instance::total_demand() const {
  Rational s;
  for (VertexId t : terminals_) s += demand_[t];
  return s;
}

std::map<VertexId, Rational> Instance::demand_map() const {
  std::map<VertexId, Rational> m;
  for (VertexId t : terminals_) m[t] = demand_[t];
  return m;
}

// ---------------------------------------------------------------- file format

static std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

static long parse_int(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected integer, got '" + s + "'");
  }
}

static Rational parse_dec(const std::string& s, int line) {
  try {
    return Rational::parse_decimal(s);
  } catch (const std::exception& e) {
    throw ParseError(line, e.what());
  }
}

Instance parse_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool header = false;
  std::map<VertexId, std::pair<VertexId, Rational>> verts;
  std::map<VertexId, int> vert_line;
  std::map<VertexId, Rational> demands;
  std::map<VertexId, int> term_line;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "ucvrp" || tok[1] != "1")
        throw ParseError(lineno, "expected header 'ucvrp 1'");
      header = true;
      continue;
    }
    if (tok[0] == "v") {
      if (tok.size() != 4) throw ParseError(lineno, "vertex record needs 'v <id> <parent> <weight>'");
      long id = parse_int(tok[1], lineno), par = parse_int(tok[2], lineno);
      if (id < 0) throw ParseError(lineno, "negative vertex id");
      if (par < -1) throw ParseError(lineno, "invalid parent id");
      Rational w = parse_dec(tok[3], lineno);
      if (w.sign() < 0) throw ParseError(lineno, "negative weight");
      if (par == -1 && !w.is_zero()) throw ParseError(lineno, "root must have weight 0");
      if (verts.count(id)) throw ParseError(lineno, "duplicate vertex " + std::to_string(id));
      verts[id] = {static_cast<VertexId>(par), w};
      vert_line[id] = lineno;
    } else if (tok[0] == "t") {
      if (tok.size() != 3) throw ParseError(lineno, "terminal record needs 't <id> <demand>'");
      long id = parse_int(tok[1], lineno);
      Rational d = parse_dec(tok[2], lineno);
      if (d.sign() <= 0 || d > Rational(1)) throw ParseError(lineno, "demand outside (0,1]");
      if (demands.count(id)) throw ParseError(lineno, "duplicate terminal " + std::to_string(id));
      demands[id] = d;
      term_line[id] = lineno;
    } else {
      throw ParseError(lineno, "unknown record '" + tok[0] + "'");
    }
  }
  if (!header) throw ParseError(lineno, "missing header 'ucvrp 1'");
  if (verts.empty()) throw ParseError(lineno, "no vertices");

  const int n = static_cast<int>(verts.size());
  std::vector<VertexId> parent(n);
  std::vector<Rational> weight(n);
  int roots = 0;
  for (const auto& [id, pw] : verts) {
    if (id >= n) throw ParseError(vert_line[id], "vertex ids must be dense 0..n-1");
    if (pw.first >= n) throw ParseError(vert_line[id], "parent " + std::to_string(pw.first) + " is not a vertex");
    if (pw.first == id) throw ParseError(vert_line[id], "vertex is its own parent");
    if (pw.first == -1 && ++roots > 1) throw ParseError(vert_line[id], "more than one root");
    parent[id] = pw.first;
    weight[id] = pw.second;
  }
  if (roots == 0) throw ParseError(lineno, "no root (cyclic parent structure)");
  for (const auto& [id, d] : demands)
    if (id >= n) throw ParseError(term_line[id], "terminal " + std::to_string(id) + " is not a vertex");
  // cycle detection, reported at a vertex on the cycle
  std::vector<int> state(n, 0);
  for (VertexId s = 0; s < n; ++s) {
    std::vector<VertexId> path;
    VertexId v = s;
    while (v != kNoVertex && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = parent[v];
    }
    if (v != kNoVertex && state[v] == 1) throw ParseError(vert_line[v], "cyclic parent structure");
    for (VertexId p : path) state[p] = 2;
  }
  try {
    return Instance(std::move(parent), std::move(weight), demands);
  } catch (const std::invalid_argument& e) {
    throw ParseError(lineno, e.what());
  }
}

Instance parse_instance_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_instance(is);
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << "ucvrp 1\n";
  for (VertexId v = 0; v < inst.size(); ++v)
    out << "v " << v << ' ' << inst.parent(v) << ' ' << inst.weight(v).str() << '\n';
  for (VertexId t : inst.terminals()) out << "t " << t << ' ' << inst.demand(t).str() << '\n';
}

// ---------------------------------------------------------------- preprocessing

namespace {

struct Node {
  VertexId parent = kNoVertex;
  Rational weight;
  std::vector<int> children;
  bool terminal = false;
  Rational demand;
  VertexId origin = kNoVertex;
  bool alive = true;
};

struct Work {
  std::vector<Node> nodes;
  int root = 0;

  int add(int parent, Rational w, VertexId origin) {
    Node n;
    n.parent = parent;
    n.weight = std::move(w);
    n.origin = origin;
    nodes.push_back(std::move(n));
    int id = static_cast<int>(nodes.size()) - 1;
    if (parent != kNoVertex) nodes[parent].children.push_back(id);
    return id;
  }

  std::vector<int> postorder() const {
    std::vector<int> order, stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int c : nodes[v].children) stack.push_back(c);
    }
    std::reverse(order.begin(), order.end());
    return order;
  }
};

}  // namespace

Normalized preprocess(const Instance& inst) {
  Work w;
  w.nodes.resize(inst.size());
  w.root = inst.root();
  for (VertexId v = 0; v < inst.size(); ++v) {
    Node& n = w.nodes[v];
    n.parent = inst.parent(v);
    n.weight = inst.weight(v);
    n.children = inst.children(v);
    n.terminal = inst.is_terminal(v);
    n.demand = inst.demand(v);
    n.origin = v;
  }

  // drop subtrees without terminals
  std::vector<bool> keep(w.nodes.size(), false);
  for (int v : w.postorder()) {
    keep[v] = w.nodes[v].terminal;
    for (int c : w.nodes[v].children) keep[v] = keep[v] || keep[c];
  }
  keep[w.root] = true;
  for (auto& n : w.nodes) {
    std::vector<int> kept;
    for (int c : n.children)
      if (keep[c]) kept.push_back(c);
    n.children = std::move(kept);
  }

  // terminals that are internal (or the root) move onto a zero-weight pendant leaf
  const int original = static_cast<int>(w.nodes.size());
  for (int v = 0; v < original; ++v) {
    if (!keep[v] || !w.nodes[v].terminal) continue;
    if (w.nodes[v].children.empty() && v != w.root) continue;
    int leaf = w.add(v, Rational(0), v);
    w.nodes[leaf].terminal = true;
    w.nodes[leaf].demand = w.nodes[v].demand;
    w.nodes[v].terminal = false;
    w.nodes[v].demand = Rational(0);
  }

  // binarize: children c1..ck become c1, {c2, {... {c_{k-1}, c_k}}}
  for (int v = 0; v < static_cast<int>(w.nodes.size()); ++v) {
    if (v < original && !keep[v]) continue;
    if (w.nodes[v].children.size() <= 2) continue;
    std::vector<int> kids = w.nodes[v].children;
    w.nodes[v].children = {kids[0]};
    int attach = v;
    for (std::size_t i = 1; i + 2 <= kids.size(); ++i) {
      if (i + 2 == kids.size()) {
        int s = w.add(attach, Rational(0), kNoVertex);
        for (std::size_t j = i; j < kids.size(); ++j) {
          w.nodes[s].children.push_back(kids[j]);
          w.nodes[kids[j]].parent = s;
        }
        break;
      }
      int s = w.add(attach, Rational(0), kNoVertex);
      w.nodes[s].children.push_back(kids[i]);
      w.nodes[kids[i]].parent = s;
      attach = s;
    }
  }

  // contract non-terminal single-child vertices below the root
  for (int v : w.postorder()) {
    Node& n = w.nodes[v];
    if (v == w.root || n.terminal || n.children.size() != 1) continue;
    int c = n.children[0];
    int p = n.parent;
    w.nodes[c].parent = p;
    w.nodes[c].weight += n.weight;
    std::replace(w.nodes[p].children.begin(), w.nodes[p].children.end(), v, c);
    n.alive = false;
  }

  // canonical preorder numbering
  std::vector<int> order, stack{w.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& ch = w.nodes[v].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  std::vector<int> id(w.nodes.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<int>(i);
  const int m = static_cast<int>(order.size());
  std::vector<VertexId> parent(m);
  std::vector<Rational> weight(m);
  std::map<VertexId, Rational> demands;
  Normalized out;
  out.origin.resize(m);
  for (int i = 0; i < m; ++i) {
    const Node& n = w.nodes[order[i]];
    parent[i] = n.parent == kNoVertex || order[i] == w.root ? kNoVertex : id[n.parent];
    weight[i] = order[i] == w.root ? Rational(0) : n.weight;
    if (n.terminal) demands[i] = n.demand;
    out.origin[i] = n.origin;
  }
  out.tree = Instance(std::move(parent), std::move(weight), demands);
  return out;
}

bool is_normalized(const Instance& inst) {
  for (VertexId v = 0; v < inst.size(); ++v) {
    std::size_t k = inst.children(v).size();
    if (v == inst.root()) {
      if (inst.is_terminal(v) || k > 2 || (k == 0 && !inst.terminals().empty())) return false;
    } else if (inst.is_terminal(v) != (k == 0) || (k != 0 && k != 2)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- costs & checks

Rational tour_cost(const Instance& inst, std::span<const VertexId> vertices) {
  std::vector<bool> seen(inst.size(), false);
  Rational total;
  for (VertexId v : vertices) {
    if (!inst.contains(v)) throw std::out_of_range("unknown vertex id " + std::to_string(v));
    while (v != inst.root() && !seen[v]) {
      seen[v] = true;
      total += inst.weight(v);
      v = inst.parent(v);
    }
  }
  return total * Rational(2);
}

Rational tour_demand(const Instance& inst, const Tour& t) {
  Rational d = t.dummy;
  for (VertexId v : t.terminals) d += inst.demand(v);
  return d;
}

Rational solution_cost(const Instance& inst, const Solution& sol) {
  Rational c;
  for (const Tour& t : sol.tours) c += tour_cost(inst, t.terminals);
  return c;
}

FeasibilityReport check_feasible(const Instance& inst, const Solution& sol) {
  FeasibilityReport rep;
  std::vector<int> covered(inst.size(), -1);
  for (int i = 0; i < static_cast<int>(sol.tours.size()); ++i) {
    const Tour& t = sol.tours[i];
    Rational d = t.dummy;
    if (t.dummy.sign() < 0)
      rep.violations.push_back({Violation::Kind::bad_dummy, i, kNoVertex, Rational(0),
                                "tour " + std::to_string(i) + " has negative dummy demand"});
    if (t.terminals.empty() && t.dummy.sign() <= 0)
      rep.violations.push_back({Violation::Kind::empty_tour, i, kNoVertex, Rational(0),
                                "tour " + std::to_string(i) + " is empty"});
    for (VertexId v : t.terminals) {
      if (!inst.contains(v) || !inst.is_terminal(v)) {
        rep.violations.push_back({Violation::Kind::unknown_terminal, i, v, Rational(0),
                                  "tour " + std::to_string(i) + " visits " + std::to_string(v) +
                                      ", which is not a terminal"});
        continue;
      }
      d += inst.demand(v);
      if (covered[v] >= 0) {
        rep.violations.push_back({Violation::Kind::multiply_covered, i, v, Rational(0),
                                  "unsplittability: terminal " + std::to_string(v) + " is in tours " +
                                      std::to_string(covered[v]) + " and " + std::to_string(i)});
      } else {
        covered[v] = i;
      }
    }
    if (d > Rational(1)) {
      Rational excess = d - Rational(1);
      rep.violations.push_back({Violation::Kind::capacity, i, kNoVertex, excess,
                                "tour " + std::to_string(i) + " demand " + d.str() +
                                    " exceeds the capacity of 1 by " + excess.str()});
    }
  }
  for (VertexId v : inst.terminals())
    if (covered[v] < 0)
      rep.violations.push_back({Violation::Kind::uncovered, -1, v, Rational(0),
                                "terminal " + std::to_string(v) + " is not covered by any tour"});
  return rep;
}

int inverse_epsilon(const Rational& eps) {
  if (eps.sign() <= 0 || eps >= Rational(1)) throw std::invalid_argument("epsilon must lie in (0,1)");
  Rational k = Rational(1) / eps;
  if (!k.is_integer()) throw std::invalid_argument("1/epsilon must be an integer");
  return static_cast<int>(k.floor_long());
}

bool check_bounded_distance(const Instance& inst, const Rational& eps) {
  if (inst.terminals().empty()) throw std::invalid_argument("instance has no terminals");
  int k = inverse_epsilon(eps);
  Rational dmin = inst.dist(inst.terminals()[0]), dmax = dmin;
  for (VertexId t : inst.terminals()) {
    dmin = min(dmin, inst.dist(t));
    dmax = max(dmax, inst.dist(t));
  }
  if (inst.terminals().size() == 1 || dmin == dmax) return true;
  return dmax < pow(Rational(k), static_cast<unsigned>(k - 1)) * dmin;
}

}  // namespace ucvrp
