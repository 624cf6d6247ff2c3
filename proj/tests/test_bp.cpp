#include "doctest.h"
#include "glstar/bp.hpp"

using namespace glstar;
using namespace glstar::bp;
namespace ar = glstar::arith;

namespace {

ar::AFormula A(const char* s) { return ar::parse_arith(s); }

std::vector<std::vector<bool>> graph_of(std::uint64_t a, std::uint32_t mask) {
  std::vector<std::vector<bool>> adj(a + 1, std::vector<bool>(a + 1));
  for (std::uint64_t i = 0; i <= a; ++i)
    for (std::uint64_t j = 0; j <= a; ++j) adj[i][j] = (mask >> (i * (a + 1) + j)) & 1;
  return adj;
}

std::set<std::uint64_t> path_of(const BranchingProgram& p, const ar::FiniteModel& m) {
  return extract_path(bp_run(p, m, default_steps(p)), p.a, p.b);
}

bool satisfies_matrix(const ar::AFormula& phi, std::uint64_t a, std::uint64_t b, ar::FiniteModel m,
                      const std::set<std::uint64_t>& z) {
  set_bits(m, "Z", z);
  return ar::eval_arith(ar::conj_all(ar::edge_rec_conjuncts(phi, a, b)), m);
}

// One test node in front of two self-looping exits 1 (true) and 2 (false).
BranchingProgram single_test(const ar::AFormula& g) {
  BranchingProgram p;
  p.labels[0] = Label{g, 1, 2};
  p.labels[1] = Label{ar::top(), 1, 1};
  p.labels[2] = Label{ar::top(), 2, 2};
  return p;
}

std::uint64_t exit_of(const BranchingProgram& p, const ar::FiniteModel& m) {
  return bp_run(p, m, default_steps(p)).nodes.back();
}

ar::FiniteModel y_model(std::uint32_t bits) {
  ar::FiniteModel m;
  std::set<std::uint64_t> ones;
  for (std::uint64_t k = 0; k < 3; ++k)
    if ((bits >> k) & 1) ones.insert(k);
  set_bits(m, "Y", ones);
  return m;
}

}  // namespace

TEST_CASE("bp_run examples") {
  BranchingProgram one;
  one.labels[0] = Label{ar::top(), 0, 0};
  CHECK(bp_run(one, {}, 3).nodes == std::vector<std::uint64_t>{0, 0, 0, 0});

  BranchingProgram two;
  two.labels[0] = Label{A("(bit X 0)"), 1, 0};
  ar::FiniteModel m;
  set_bits(m, "X", {0, 1});
  CHECK(bp_run(two, m, 1).nodes == std::vector<std::uint64_t>{0, 1});
  CHECK_THROWS_AS(bp_run(two, m, 2), BpError);
}

TEST_CASE("bp0 labels") {
  BranchingProgram p = bp0(1, 1, ar::adjacency_template());
  CHECK(ar::to_string(p.labels.at(0).guard) == ar::to_string(A("(bit X 0 0)")));
  CHECK(p.labels.at(ar::triple_value(0, 0, 1)).guard->kind == ar::FKind::Top);
  CHECK(p.labels.at(0).on_true == ar::triple_value(1, 0, 0));
  CHECK(p.labels.at(0).on_false == ar::triple_value(0, 0, 1));
  CHECK(p.labels.at(ar::triple_value(1, 1, 0)).on_true == p.halt());
  CHECK(p.size() == 2 * 4 + 1);
}

TEST_CASE("bp0 paths") {
  auto phi = ar::adjacency_template();
  // 2-cycle 0 -> 1 -> 0
  ar::FiniteModel cyc = graph_model({{false, true}, {true, false}}, 1);
  BranchingProgram p = bp0(1, 2, phi);
  BpRun run = bp_run(p, cyc, default_steps(p));
  CHECK(std::find(run.nodes.begin(), run.nodes.end(), ar::triple_value(2, 0, 0)) != run.nodes.end());
  CHECK(extract_path(run, 1, 2) ==
        std::set<std::uint64_t>{ar::triple_value(0, 0, 1), ar::triple_value(1, 1, 0), ar::triple_value(2, 0, 1)});

  // no edges: pseudo-edges to node a
  ar::FiniteModel empty = graph_model({{false}}, 1);
  auto z = path_of(bp0(1, 1, phi), empty);
  CHECK(z.count(ar::triple_value(0, 0, 1)));
  CHECK(z == std::set<std::uint64_t>{ar::triple_value(0, 0, 1), ar::triple_value(1, 1, 1)});
  CHECK(satisfies_matrix(phi, 1, 1, empty, z));

  CHECK_THROWS_AS(extract_path(bp_run(p, cyc, 0), 1, 2), BpError);
}

TEST_CASE("bp0 runs reach the last level in time and satisfy edge-rec") {
  auto phi = ar::adjacency_template();
  for (std::uint64_t a = 1; a <= 3; ++a)
    for (std::uint64_t b = 0; b <= (a == 3 ? 1 : 2); ++b) {
      BranchingProgram p = bp0(a, b, phi);
      const std::uint64_t budget = (a + 1) * (a + 1) * (b + 1);
      for (std::uint32_t g = 0; g < (1u << ((a + 1) * (a + 1))); ++g) {
        ar::FiniteModel m = graph_model(graph_of(a, g), a);
        BpRun run = bp_run(p, m, budget);
        INFO("a=" << a << " b=" << b << " g=" << g);
        auto z = extract_path(run, a, b);
        CHECK(z.size() == b + 1);
        if (a <= 2) CHECK(satisfies_matrix(phi, a, b, m, z));
      }
    }
}

TEST_CASE("bp_simplify examples") {
  BranchingProgram n = bp_simplify(single_test(A("(not (bit Y 0))")), "Y");
  CHECK(n.size() == 3);
  CHECK(n.labels.at(0).on_true == 2);
  CHECK(n.labels.at(0).on_false == 1);

  BranchingProgram c = bp_simplify(single_test(A("(and (bit Y 0) (bit Y 1))")), "Y");
  CHECK(c.size() == 4);
  BranchingProgram e = bp_simplify(single_test(A("(existsle i 1 (bit Y i))")), "Y");
  CHECK(e.size() == 4);
  for (const auto& [u, l] : e.labels) CHECK((l.guard->kind == ar::FKind::Bit || l.guard->kind == ar::FKind::Top));

  // guards not reading Y stay intact
  BranchingProgram x = bp_simplify(single_test(A("(and (bit X 0) (bit X 1))")), "Y");
  CHECK(x.size() == 3);
}

TEST_CASE("bp_simplify preserves behaviour") {
  const char* guards[] = {
      "(not (bit Y 0))",
      "(and (bit Y 0) (bit Y 1))",
      "(or (bit Y 0) (not (bit Y 2)))",
      "(existsle i 1 (bit Y i))",
      "(forallle i 2 (bit Y i))",
      "(existslt i 0 (bit Y i))",
      "(foralllt i 3 (or (bit Y i) (= i 1)))",
      "(not (and (or (bit Y 0) (bit Y 1)) (not (existsle i 2 (and (bit Y i) (not (bit Y 0)))))))",
      "(and (= 1 1) (or (< 2 1) (bit Y 2)))",
  };
  for (const char* gs : guards) {
    BranchingProgram p = single_test(A(gs));
    BranchingProgram s = bp_simplify(p, "Y");
    for (const auto& [u, l] : s.labels) {
      bool atomic = l.guard->kind == ar::FKind::Bit;
      bool reads = ar::to_string(l.guard).find("Y") != std::string::npos;
      CHECK((atomic || !reads));
    }
    for (std::uint32_t bits = 0; bits < 8; ++bits) {
      INFO(gs << " bits=" << bits);
      CHECK(exit_of(p, y_model(bits)) == exit_of(s, y_model(bits)));
    }
  }
}

TEST_CASE("composition agrees with the two-stage pipeline") {
  const char* outer[] = {
      "(or (bit X i j) (bit Y 0 i j))",
      "(and (bit X i j) (not (existsle w 2 (bit Y w i j))))",
      "(bit Y 1 j i)",
      "(forallle w 1 (or (bit Y w i j) (bit X j i)))",
  };
  const char* inner[] = {"(bit X i j)", "(not (bit X i j))"};
  const std::uint64_t a = 1;
  for (const char* po : outer)
    for (const char* pi : inner)
      for (std::uint64_t b = 0; b <= 2; ++b) {
        auto phi = A(po), phi1 = A(pi);
        BranchingProgram in = bp0(a, b, phi1);
        BranchingProgram out = bp0(a, b, phi);
        BranchingProgram comp = bp_compose(bp_simplify(out, "Y"), in);
        CHECK(comp.inputs == std::set<std::string>{"X"});
        for (std::uint32_t g = 0; g < 16; ++g) {
          ar::FiniteModel m = graph_model(graph_of(a, g), a);
          auto y = path_of(in, m);
          ar::FiniteModel my = m;
          set_bits(my, "Y", y);
          auto two_stage = path_of(out, my);
          auto composed = path_of(comp, m);
          INFO(po << " / " << pi << " b=" << b << " g=" << g);
          CHECK(composed == two_stage);
          CHECK(satisfies_matrix(phi, a, b, my, two_stage));
          CHECK(satisfies_matrix(phi1, a, b, m, y));
        }
      }
}

TEST_CASE("bp_compose edge cases") {
  auto phi = ar::adjacency_template();
  BranchingProgram in = bp0(1, 1, phi);
  // no Y atoms: same program up to renaming
  BranchingProgram out = bp0(1, 1, phi);
  BranchingProgram comp = bp_compose(out, in);
  CHECK(comp.size() == out.size());
  for (const auto& [u, l] : out.labels) {
    const Label& c = comp.labels.at(ar::pair_value(u, 0));
    CHECK(c.on_true == ar::pair_value(l.on_true, 0));
    CHECK(c.on_false == ar::pair_value(l.on_false, 0));
  }
  // unsimplified Y guard
  CHECK_THROWS_AS(bp_compose(bp0(1, 1, A("(not (bit Y 0 i j))")), in), BpError);
  CHECK_THROWS_AS(bp_compose(out, comp), BpError);
}

TEST_CASE("bp and graph text") {
  BranchingProgram p = bp_simplify(bp0(1, 1, A("(and (bit X i j) (bit Y 0 j i))")), "Y");
  BranchingProgram q = parse_bp(to_string(p));
  CHECK(to_string(q) == to_string(p));
  CHECK_THROWS_AS(parse_bp("0 0 0 true\n"), BpError);
  CHECK_THROWS_AS(parse_bp("#glstar-bp v1\n1 1 1 true\n"), BpError);
  CHECK_THROWS_AS(parse_bp("#glstar-bp v1\n0 0 x true\n"), BpError);
  auto g = parse_graph("#glstar-graph v1\n# 2-cycle\n0 1\n1 0\n");
  CHECK(g == std::vector<std::vector<bool>>{{false, true}, {true, false}});
  CHECK_THROWS_AS(parse_graph("#glstar-graph v1\n0 1\n"), BpError);
}
