#include "ucvrp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "ucvrp/baselines.hpp"
#include "ucvrp/dp.hpp"
#include "ucvrp/generators.hpp"
#include "ucvrp/local.hpp"
#include "ucvrp/solution_io.hpp"

namespace ucvrp {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// violated invariant: exit code 1
struct Violated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open instance " + path);
  return parse_instance(in);
}

Solution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open solution " + path);
  return parse_solution(in);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  return f;
}

std::vector<Rational> parse_sizes(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(Rational::parse(item));
  return out;
}

Caps parse_caps(const std::string& text) {
  Caps c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("caps entry '" + item + "' needs key=value");
    std::string key = item.substr(0, eq);
    std::size_t val = 0;
    try {
      val = std::stoul(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("caps value for '" + key + "' is not an integer");
    }
    if (key == "y") c.y = val;
    else if (key == "cfg") c.cfg = val;
    else if (key == "parts") c.parts = val;
    else if (key == "table") c.table = val;
    else if (key == "x") c.x_budget = val;
    else throw UsageError("unknown cap '" + key + "' (known: y, cfg, parts, table, x)");
  }
  return c;
}

std::string echo(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

struct ParamFlags {
  std::string epsilon = "1/2";
  std::string overrides;
  bool theoretical = false;

  void add(CLI::App* app) {
    app->add_option("--epsilon", epsilon, "epsilon as a fraction 1/k")->capture_default_str();
    app->add_option("--override", overrides, "gamma=..,alpha=..,gamma_prime=..,beta=..,h_eps=..");
    app->add_flag("--theoretical", theoretical, "derive every parameter from epsilon (default: relaxed values)");
  }
  Params make() const {
    Rational eps;
    ParamOverrides o;
    try {
      eps = Rational::parse(epsilon);
      o = parse_overrides(overrides);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    return theoretical ? Params::make(eps, o) : Params::relaxed(eps, o);
  }
};

// ---------------------------------------------------------------- gen

struct GenFlags {
  std::string family = "random";
  std::uint64_t seed = 1;
  int terminals = 8;
  std::string demands = "dyadic";
  std::string sizes;
  std::string out;
  int count = 1;
  bool reduce = false;
  ParamFlags params;
};

Instance generate(const GenFlags& g, std::uint64_t seed) {
  if (g.family == "random") {
    RandomSpec spec;
    spec.terminals = g.terminals;
    if (g.demands == "uniform") {
      spec.demands = DemandDist::uniform;
      spec.denominator = 100;
      spec.max_numerator = 100;
    } else if (g.demands != "dyadic") {
      throw UsageError("unknown demand distribution '" + g.demands + "' (uniform, dyadic)");
    }
    return gen_random(spec, seed);
  }
  std::vector<Rational> sizes;
  if (!g.sizes.empty()) {
    sizes = parse_sizes(g.sizes);
  } else {
    Rng rng(seed);
    sizes = random_dyadic_sizes(rng, g.terminals, 16);
  }
  if (g.family == "path") return gen_binpacking_path(sizes);
  if (g.family == "star") return gen_binpacking_star(sizes);
  throw UsageError("unknown family '" + g.family + "' (random, path, star)");
}

void write_reduced(const Instance& inst, const Params& p, const std::string& header, const std::string& path,
                   std::ostream& out) {
  Normalized norm = preprocess(inst);
  Hierarchy h = decompose(norm.tree, p);
  ReducedTree rt = height_reduce(norm.tree, h, p);
  auto f = open_out(path);
  f << header;
  write_instance(f, rt.tree);
  auto side = open_out(path + ".origin");
  side << "# reduced-id input-id (-1: splitter vertex)\n";
  for (VertexId v = 0; v < rt.tree.size(); ++v) side << v << ' ' << norm.origin[rt.origin[v]] << '\n';
  out << "wrote " << path << " (" << rt.tree.size() << " vertices, " << rt.critical_vertices.size()
      << " critical) and " << path << ".origin\n";
}

int cmd_gen(const GenFlags& g, const std::string& header, std::ostream& out) {
  if (g.count < 1) throw UsageError("--count must be positive");
  Params p = g.params.make();
  for (int i = 0; i < g.count; ++i) {
    std::uint64_t seed = g.seed + static_cast<std::uint64_t>(i);
    Instance inst = generate(g, seed);
    std::string path = g.out;
    if (g.count > 1) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%03d", i);
      fs::create_directories(g.out);
      path = (fs::path(g.out) / (g.family + "_" + buf + ".ucvrp")).string();
    }
    std::string head = header + "# seed " + std::to_string(seed) + "\n";
    if (g.reduce) {
      if (path.empty()) throw UsageError("--reduce needs --out");
      write_reduced(inst, p, head, path, out);
    } else if (path.empty()) {
      out << head;
      write_instance(out, inst);
    } else {
      auto f = open_out(path);
      f << head;
      write_instance(f, inst);
    }
  }
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveFlags {
  std::string instance;
  std::string caps;
  std::string out;
  std::string stats;
  bool oracle = false;
  bool exhaustive_x = false;
  ParamFlags params;
};

constexpr const char* kStatsHeader =
    "# ucvrp-stats 1\n"
    "instance,n,cost,oracle_cost,ratio,components,critical,y_size,table_entries,max_x_sets,wall_ms\n";

int cmd_solve(const SolveFlags& s, const std::string& header, std::ostream& out) {
  Instance inst = load_instance(s.instance);
  Params p = s.params.make();
  SolveOptions opt;
  opt.caps = parse_caps(s.caps);
  if (s.exhaustive_x) opt.strategy = XStrategy::exhaustive;
  SolveResult r = solve(inst, p, opt);

  std::optional<Rational> oracle;
  if (s.oracle) oracle = exact_opt(inst).cost;
  // comment lines, so stdout stays a parseable solution file
  out << "# cost " << r.stats.cost.str() << '\n';
  if (oracle) out << "# oracle " << oracle->str() << '\n';
  out << "# tours " << r.solution.tours.size() << '\n';
  if (!s.out.empty()) {
    auto f = open_out(s.out);
    f << header;
    write_solution(f, r.solution);
  } else {
    write_solution(out, r.solution);
  }
  if (!s.stats.empty()) {
    auto f = open_out(s.stats);
    f << kStatsHeader;
    const SolveStats& st = r.stats;
    f << fs::path(s.instance).filename().string() << ',' << st.terminals << ',' << st.cost.str() << ','
      << (oracle ? oracle->str() : "") << ','
      << (oracle && oracle->sign() > 0 ? fixed((st.cost / *oracle).to_double(), 6) : "") << ',' << st.components
      << ',' << st.critical << ',' << st.y_size << ',' << st.table_entries << ',' << st.max_x_sets << ','
      << fixed(st.wall_ms, 3) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
  std::string dir;
  std::string out;
  int limit = 14;
  ParamFlags params;
};

int cmd_bench(const BenchFlags& b, std::ostream& out) {
  if (!fs::is_directory(b.dir)) throw UsageError("not a directory: " + b.dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(b.dir))
    if (e.is_regular_file() && e.path().extension() == ".ucvrp") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .ucvrp files in " + b.dir);
  Params p = b.params.make();

  std::ostringstream csv;
  csv << "instance,n,solver,cost,ratio_vs_exact,wall_ms\n";
  double sum_solve = 0, sum_itp = 0;
  int rated = 0, failures = 0;
  for (const auto& path : files) {
    Instance inst = load_instance(path.string());
    const std::string name = path.filename().string();
    const auto n = inst.terminals().size();
    auto timed = [](auto&& f) {
      auto t0 = std::chrono::steady_clock::now();
      auto v = f();
      return std::pair{v, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()};
    };
    std::optional<Rational> exact;
    double exact_ms = 0;
    if (static_cast<int>(n) <= b.limit) std::tie(exact, exact_ms) = timed([&] { return std::optional(exact_opt(inst, b.limit).cost); });
    auto ratio = [&](const Rational& c) {
      return exact && exact->sign() > 0 ? fixed((c / *exact).to_double(), 6) : std::string();
    };
    auto row = [&](const char* solver, const std::string& cost, const std::string& rat, double ms) {
      csv << name << ',' << n << ',' << solver << ',' << cost << ',' << rat << ',' << fixed(ms, 3) << '\n';
    };
    std::optional<Rational> solved;
    double solve_ms = 0;
    try {
      std::tie(solved, solve_ms) = timed([&] { return std::optional(solve(inst, p).stats.cost); });
    } catch (const CapExceeded& e) {
      out << "solve failed on " << name << ": " << e.what() << '\n';
      ++failures;
    }
    auto [itp, itp_ms] = timed([&] { return solution_cost(inst, itp_heuristic(inst, p, ItpMode::nextfit)); });
    row("solve", solved ? solved->str() : "", solved ? ratio(*solved) : "", solve_ms);
    row("itp", itp.str(), ratio(itp), itp_ms);
    if (exact) row("exact", exact->str(), ratio(*exact), exact_ms);
    if (exact && exact->sign() > 0 && solved) {
      sum_solve += (*solved / *exact).to_double();
      sum_itp += (itp / *exact).to_double();
      ++rated;
    }
  }
  if (b.out.empty()) out << csv.str();
  else open_out(b.out) << csv.str();
  out << "instances " << files.size() << " rated " << rated << " solve_failures " << failures << '\n';
  if (rated) {
    out << "mean_ratio solve " << fixed(sum_solve / rated, 6) << " itp " << fixed(sum_itp / rated, 6) << '\n';
  }
  return failures ? 1 : 0;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  std::string instance;
  std::string solution;
  bool local = false;
  bool show = false;
  ParamFlags params;
};

// Each tour's restriction to component c, as a subtour rooted at r_c. Tours that only pass
// through c (serving terminals below its exit) are included.
std::vector<Subtour> restrict_to_component(const Instance& t, const Hierarchy& h, int c, const Solution& sol) {
  const Region& comp = h.components[c];
  std::vector<Subtour> out;
  for (const Tour& tour : sol.tours) {
    std::vector<VertexId> reach;
    std::set<VertexId> served;
    bool below_exit = false;
    for (VertexId v : tour.terminals) {
      if (comp.strictly_inside(v)) {
        reach.push_back(v);
        served.insert(v);
      } else if (comp.exit && t.is_ancestor(*comp.exit, v)) {
        below_exit = true;
      }
    }
    if (below_exit) reach.push_back(*comp.exit);
    if (!reach.empty()) out.push_back(spanning_subtour(t, comp.root, reach, served));
  }
  return out;
}

int cmd_verify(const VerifyFlags& v, std::ostream& out) {
  Instance inst = load_instance(v.instance);
  Solution sol = load_solution(v.solution);
  Params p = v.params.make();
  int problems = 0;
  FeasibilityReport rep = check_feasible(inst, sol);
  for (const Violation& x : rep.violations) {
    out << "violation: " << x.message << '\n';
    ++problems;
  }
  if (rep.feasible()) out << "feasible, cost " << solution_cost(inst, sol).str() << '\n';

  Normalized norm = preprocess(inst);
  Hierarchy h = decompose(norm.tree, p);
  for (int c = 0; c < static_cast<int>(h.components.size()); ++c) {
    CountReport cr = count_check(norm.tree, h, c, p);
    for (const std::string& s : cr.violations) {
      out << "component " << c << ": " << s << '\n';
      ++problems;
    }
  }
  out << "components " << h.components.size() << " blocks " << h.blocks.size() << " clusters "
      << h.clusters.size() << " cells " << h.cells.size() << '\n';
  if (v.show) out << describe(norm.tree, h);

  if (v.local && rep.feasible()) {
    std::vector<VertexId> to_norm(inst.size(), kNoVertex);
    for (VertexId u = 0; u < norm.tree.size(); ++u)
      if (norm.origin[u] != kNoVertex && norm.tree.is_terminal(u)) to_norm[norm.origin[u]] = u;
    Solution mapped;
    for (const Tour& tour : sol.tours) {
      Tour m{{}, tour.dummy};
      for (VertexId x : tour.terminals) m.terminals.push_back(to_norm[x]);
      std::sort(m.terminals.begin(), m.terminals.end());
      mapped.tours.push_back(std::move(m));
    }
    for (int c = 0; c < static_cast<int>(h.components.size()); ++c) {
      std::vector<Subtour> s_c = restrict_to_component(norm.tree, h, c, mapped);
      Rational before;
      for (const Subtour& s : s_c) before += subtour_cost(norm.tree, s);
      try {
        LocalResult lr = local_simplify(norm.tree, h, c, s_c, p);
        Rational after = subtour_cost(norm.tree, lr.bar_t);
        for (const Subtour& s : lr.s_star) after += subtour_cost(norm.tree, s);
        Rational bound = (Rational(3, 2) + Rational(2) * p.eps) * before;
        bool ok = after <= bound;
        out << "local component " << c << ": |S_c|=" << s_c.size() << " cost " << before.str() << " -> "
            << after.str() << (ok ? "" : " exceeds (3/2+2eps) times the input cost") << '\n';
        if (!ok) ++problems;
      } catch (const PreconditionError& e) {
        out << "local component " << c << ": skipped (" << e.what() << ")\n";
      }
    }
  }
  if (problems) throw Violated(std::to_string(problems) + " violation(s)");
  out << "ok\n";
  return 0;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ucvrp: unsplittable capacitated vehicle routing on trees"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* g = app.add_subcommand("gen", "write generated instances");
  g->add_option("--family", gen.family, "random, path or star")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--terminals", gen.terminals)->capture_default_str();
  g->add_option("--demands", gen.demands, "dyadic or uniform (random family)")->capture_default_str();
  g->add_option("--sizes", gen.sizes, "comma-separated item sizes (path, star)");
  g->add_option("--count", gen.count, "instances to write; with more than one, --out is a directory")
      ->capture_default_str();
  g->add_option("--out", gen.out, "output path (default stdout)");
  g->add_flag("--reduce", gen.reduce, "write the height-reduced tree and an .origin sidecar");
  gen.params.add(g);

  SolveFlags sol;
  auto* s = app.add_subcommand("solve", "run the dynamic program");
  s->add_option("instance", sol.instance)->required();
  s->add_option("--caps", sol.caps, "y=..,cfg=..,parts=..,table=..,x=..");
  s->add_option("--out", sol.out, "solution file (default stdout)");
  s->add_option("--stats", sol.stats, "stats CSV path");
  s->add_flag("--oracle", sol.oracle, "also compute the exact optimum");
  s->add_flag("--exhaustive-x", sol.exhaustive_x, "enumerate candidate sets over all of Y");
  sol.params.add(s);

  BenchFlags bench;
  auto* b = app.add_subcommand("bench", "compare solve, itp and exact over a directory");
  b->add_option("--dir", bench.dir)->required();
  b->add_option("--out", bench.out, "CSV path (default stdout)");
  b->add_option("--limit", bench.limit, "terminal limit for the exact oracle")->capture_default_str();
  bench.params.add(b);

  VerifyFlags ver;
  auto* v = app.add_subcommand("verify", "check a solution and the decomposition invariants");
  v->add_option("instance", ver.instance)->required();
  v->add_option("solution", ver.solution)->required();
  v->add_flag("--local", ver.local, "run local simplification on every component");
  v->add_flag("--show", ver.show, "print the decomposition");
  ver.params.add(v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string header = "# ucvrp " + echo(argc, argv) + "\n";
  try {
    if (*g) return cmd_gen(gen, header, out);
    if (*s) return cmd_solve(sol, header, out);
    if (*b) return cmd_bench(bench, out);
    return cmd_verify(ver, out);
  } catch (const Violated& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ucvrp
