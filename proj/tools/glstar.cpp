#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "glstar/bp.hpp"
#include "glstar/calculus.hpp"
#include "glstar/cnf2.hpp"
#include "glstar/translate.hpp"
#include "glstar/witnessing.hpp"

using namespace glstar;
namespace ar = glstar::arith;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "a=1,b=0" style lists.
std::vector<std::pair<std::string, std::string>> bindings(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) throw UsageError("bad binding '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

std::uint64_t to_u64(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || s[0] == '-') throw UsageError("not a number: '" + s + "'");
  return v;
}

Assignment parse_assign(const std::string& text) {
  Assignment a;
  for (const auto& [k, v] : bindings(text)) {
    if (v != "0" && v != "1") throw UsageError("value of " + k + " must be 0 or 1");
    a[k] = v == "1";
  }
  return a;
}

ar::SizeContext parse_ctx(const std::string& text) {
  ar::SizeContext ctx;
  for (const auto& [k, v] : bindings(text)) (ar::is_string_var(k) ? ctx.size : ctx.num)[k] = to_u64(v);
  return ctx;
}

void print_assignment(std::ostream& out, const Assignment& a) {
  for (const auto& [k, v] : a) out << k << '=' << (v ? 1 : 0) << '\n';
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int cmd_check(const std::vector<std::string>& files, const std::string& system) {
  System sys = System::parse(system);
  std::vector<Proof> proofs;
  for (const auto& f : files) proofs.push_back(parse_proof(slurp(f)));
  std::vector<std::future<std::vector<Violation>>> jobs;
  for (const auto& p : proofs) jobs.push_back(std::async(std::launch::async, [&p, sys] { return check_proof(p, sys); }));
  int rc = kOk;
  for (std::size_t k = 0; k < files.size(); ++k) {
    auto v = jobs[k].get();
    const std::string prefix = files.size() > 1 ? files[k] + ": " : "";
    if (v.empty()) {
      std::cout << prefix << "ok (" << sys.name() << ", " << proofs[k].size() << " lines)\n";
      continue;
    }
    rc = kNegative;
    for (const auto& x : v) std::cout << prefix << "violation " << x.to_string() << '\n';
  }
  return rc;
}

int cmd_solve(const std::string& file) {
  CnfView c = parse_dimacs(slurp(file));
  if (!is_cnf2(c)) throw UsageError("input is not CNF(2): some variable occurs more than twice");
  SolveOutcome o = solve_cnf2(c);
  if (!o.sat) {
    std::cout << "Unsat\n";
    return kNegative;
  }
  std::cout << "Sat\nv";
  for (std::uint32_t k = 1; k <= c.num_vars(); ++k) {
    auto it = o.assignment.find(k);
    bool v = it != o.assignment.end() && it->second;
    std::cout << ' ' << (v ? "" : "-") << k;
  }
  std::cout << " 0\n";
  return kOk;
}

int cmd_witness(const std::string& file, const std::string& assign) {
  Proof p = parse_proof(slurp(file));
  auto v = check_proof(p, System::parse("GL*"));
  if (!v.empty()) {
    for (const auto& x : v) std::cout << "violation " << x.to_string() << '\n';
    return kNegative;
  }
  Assignment a = parse_assign(assign);
  for (const auto& x : parameter_vars(p))
    if (!a.count(x)) throw UsageError("no value for parameter '" + x + "'");
  const Sequent& s = p.final_sequent();
  if (s.ante.empty() && s.succ.size() == 1) {
    print_assignment(std::cout, witness_proof(p, a));
    return kOk;
  }
  Witnesser w(to_fvnf(p));
  std::cout << to_string(w.wit(w.proof().size() - 1, w.extend(a))) << '\n';
  return kOk;
}

int cmd_translate(const std::string& file, const std::string& ctx_text, const std::vector<std::uint64_t>& edge_rec) {
  ar::AFormula phi = ar::parse_arith(slurp(file));
  ar::SizeContext ctx = parse_ctx(ctx_text);
  Formula f = edge_rec.empty() ? translate(phi, ctx) : translate_edge_rec(phi, edge_rec[0], edge_rec[1], ctx);
  std::cout << to_string(f) << '\n';
  return kOk;
}

int cmd_run(const std::string& bp_file, const std::string& graph_file, std::uint64_t steps) {
  bp::BranchingProgram p = bp::parse_bp(slurp(bp_file));
  auto adj = bp::parse_graph(slurp(graph_file));
  if (adj.size() != p.a + 1) throw UsageError("graph has " + std::to_string(adj.size()) + " nodes, program expects a+1");
  bp::BpRun run = bp::bp_run(p, bp::graph_model(adj, p.a), steps ? steps : bp::default_steps(p));
  // the path stops at the first self-loop
  std::cout << "path";
  for (std::size_t k = 0; k < run.nodes.size(); ++k) {
    std::cout << ' ' << run.nodes[k];
    if (k + 1 < run.nodes.size() && run.nodes[k + 1] == run.nodes[k]) {
      std::cout << " ...";
      break;
    }
  }
  std::set<std::array<std::uint64_t, 3>> z;
  for (auto code : bp::extract_path(run, p.a, p.b)) z.insert(*ar::untriple(code));
  std::cout << "\nZ";
  for (const auto& t : z) std::cout << " <" << t[0] << ',' << t[1] << ',' << t[2] << '>';
  std::cout << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GL* proof-system toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::vector<std::string> files;
  std::string system = "GL*";
  auto* check = app.add_subcommand("check", "check proof files");
  check->add_option("proofs", files, "proof files")->required();
  check->add_option("--system", system, "GL*, G1*, G2*, ... or G");
  check->callback([&] { action = [&] { return cmd_check(files, system); }; });

  std::string input;
  auto* solve = app.add_subcommand("solve", "solve a CNF(2) DIMACS file");
  solve->add_option("cnf", input)->required();
  solve->callback([&] { action = [&] { return cmd_solve(input); }; });

  std::string assign;
  auto* witness = app.add_subcommand("witness", "witness the final formula of a GL* proof");
  witness->add_option("proof", input)->required();
  witness->add_option("--assign", assign, "parameter values, e.g. x=1,y=0");
  witness->callback([&] { action = [&] { return cmd_witness(input, assign); }; });

  std::string ctx;
  std::vector<std::uint64_t> edge_rec;
  auto* tr = app.add_subcommand("translate", "propositional translation of an arithmetic formula");
  tr->add_option("arith", input)->required();
  tr->add_option("--ctx", ctx, "values and sizes, e.g. n=3,X=5");
  tr->add_option("--edge-rec", edge_rec, "translate the edge-rec axiom of the formula at a b")->expected(2);
  tr->callback([&] { action = [&] { return cmd_translate(input, ctx, edge_rec); }; });

  std::uint64_t a = 1, b = 1;
  std::string out;
  auto* gen = app.add_subcommand("gen-proof", "GL* proof of the edge-rec translation for X(i,j)");
  gen->add_option("--a", a)->required();
  gen->add_option("--b", b)->required();
  gen->add_option("-o,--output", out);
  gen->callback([&] { action = [&] { emit(to_string(gen_edge_rec_proof(a, b)), out); return kOk; }; });

  auto* bpc = app.add_subcommand("bp", "branching programs");
  bpc->require_subcommand(1);
  std::string y = "Y", second;
  std::uint64_t steps = 0;
  auto* build = bpc->add_subcommand("build", "BP_0 for an edge formula phi(i,j)");
  build->add_option("arith", input)->required();
  build->add_option("--a", a)->required();
  build->add_option("--b", b)->required();
  build->add_option("-o,--output", out);
  build->callback([&] {
    action = [&] {
      emit(bp::to_string(bp::bp0(a, b, ar::parse_arith(slurp(input)))), out);
      return kOk;
    };
  });
  auto* simp = bpc->add_subcommand("simplify", "split guards on the bits of a string");
  simp->add_option("bp", input)->required();
  simp->add_option("--y", y);
  simp->add_option("-o,--output", out);
  simp->callback([&] {
    action = [&] {
      emit(bp::to_string(bp::bp_simplify(bp::parse_bp(slurp(input)), y)), out);
      return kOk;
    };
  });
  auto* comp = bpc->add_subcommand("compose", "answer the Y atoms of a simplified program with another");
  comp->add_option("outer", input)->required();
  comp->add_option("inner", second)->required();
  comp->add_option("--y", y);
  comp->add_option("-o,--output", out);
  comp->callback([&] {
    action = [&] {
      emit(bp::to_string(bp::bp_compose(bp::parse_bp(slurp(input)), bp::parse_bp(slurp(second)), y)), out);
      return kOk;
    };
  });
  auto* run = bpc->add_subcommand("run", "run a program on a graph and extract Z");
  run->add_option("bp", input)->required();
  run->add_option("graph", second)->required();
  run->add_option("--steps", steps, "default: size squared");
  run->callback([&] { action = [&] { return cmd_run(input, second, steps); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
