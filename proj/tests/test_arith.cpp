#include "doctest.h"
#include "glstar/arith.hpp"

#include <set>

using namespace glstar;
using namespace glstar::arith;

namespace {

AFormula A(const char* s) { return parse_arith(s); }

FiniteModel with_string(const std::string& x, const std::set<std::uint64_t>& ones) {
  FiniteModel m;
  std::uint64_t n = ones.empty() ? 0 : *ones.rbegin() + 1;
  std::vector<bool> low(n > 0 ? n - 1 : 0);
  for (auto k : ones)
    if (k + 1 < n) low[k] = true;
  m.set_string(x, n, low);
  return m;
}

// Adds Z with exactly the given bits to a model.
void put_z(FiniteModel& m, const std::set<std::uint64_t>& ones) {
  FiniteModel z = with_string("Z", ones);
  m.ctx.size["Z"] = z.ctx.size["Z"];
  m.bits["Z"] = z.bits["Z"];
}

// Graph on a+1 nodes given by a bitmask over (i,j) in row-major order.
FiniteModel graph(std::uint64_t a, std::uint32_t mask) {
  std::set<std::uint64_t> ones;
  for (std::uint64_t i = 0; i <= a; ++i)
    for (std::uint64_t j = 0; j <= a; ++j)
      if ((mask >> (i * (a + 1) + j)) & 1) ones.insert(pair_value(i, j));
  return with_string("X", ones);
}

std::vector<std::uint64_t> box_codes(std::uint64_t a, std::uint64_t b) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t w = 0; w <= b; ++w)
    for (std::uint64_t i = 0; i <= a; ++i)
      for (std::uint64_t j = 0; j <= a; ++j) out.push_back(triple_value(w, i, j));
  return out;
}

}  // namespace

TEST_CASE("val") {
  SizeContext ctx;
  CHECK(val(parse_term("(* (+ 1 1) (+ 1 1))"), ctx) == 4);
  ctx.num["x"] = 2;
  CHECK(val(parse_term("(+ x 1)"), ctx) == 3);
  ctx.size["X"] = 5;
  CHECK(val(parse_term("(len X)"), ctx) == 5);
  CHECK_THROWS_AS(val(parse_term("y"), ctx), DomainError);
  CHECK_THROWS_AS(val(parse_term("(len Y)"), ctx), DomainError);
  CHECK_THROWS_AS(val(parse_term("(* 4294967296 4294967296)"), ctx), DomainError);
}

TEST_CASE("pairing") {
  CHECK(pair_value(0, 0) == 0);
  CHECK(pair_value(1, 2) == 16);
  CHECK(pair_value(2, 1) == 14);
  CHECK(val(pair(num(1), num(2)), {}) == 16);
  CHECK(val(triple(num(1), num(1), num(1)), {}) == triple_value(1, 1, 1));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i <= 50; ++i)
    for (std::uint64_t j = 0; j <= 50; ++j) {
      std::uint64_t c = pair_value(i, j);
      CHECK(seen.insert(c).second);
      auto back = unpair(c);
      REQUIRE(back);
      CHECK(*back == std::make_pair(i, j));
    }
  CHECK_FALSE(unpair(1));
  auto t = untriple(triple_value(2, 3, 1));
  REQUIRE(t);
  CHECK(*t == std::array<std::uint64_t, 3>{2, 3, 1});
}

TEST_CASE("eval_arith") {
  FiniteModel m = with_string("X", {1});
  CHECK(m.ctx.size["X"] == 2);
  CHECK_FALSE(eval_arith(A("(foralllt i (len X) (bit X i))"), m));
  CHECK(eval_arith(A("(existslt i (len X) (bit X i))"), m));
  CHECK_FALSE(m.bit("X", 0));
  CHECK(m.bit("X", 1));
  CHECK_FALSE(m.bit("X", 7));
  for (std::uint64_t x = 0; x < 5; ++x) {
    m.ctx.num["x"] = x;
    CHECK(eval_arith(A("(= (+ x 0) x)"), m));
  }
  CHECK(eval_arith(A("(existsle y 3 (= (* y y) 9))"), {}));
  CHECK_FALSE(eval_arith(A("(existslt y 3 (= (* y y) 9))"), {}));
  CHECK(eval_arith(A("(foralllt y 0 false)"), {}));
  CHECK_THROWS_AS(eval_arith(A("(bit Y 0)"), {}), DomainError);
}

TEST_CASE("string quantifiers enumerate sizes and bits") {
  CHECK(eval_arith(A("(existsstr Y 3 (and (= (len Y) 3) (bit Y 0)))"), {}));
  CHECK_FALSE(eval_arith(A("(existsstr Y 2 (= (len Y) 3))"), {}));
  CHECK(eval_arith(A("(forallstr Y 3 (< (len Y) 4))"), {}));
  CHECK_FALSE(eval_arith(A("(forallstr Y 3 (bit Y 0))"), {}));
  CHECK_THROWS_AS(eval_arith(A("(existsstr Y 40 true)"), {}), DomainError);
}

TEST_CASE("parse and print round trip") {
  const char* texts[] = {
      "(existsle y (+ x 1) (and (< y x) (not (bit X y))))",
      "(foralllt i (len X) (or (bit X i) (= i 0)))",
      "(existsstr Y 4 (forallle k 3 (bit Y k)))",
      "true",
  };
  for (const char* t : texts) {
    AFormula f = A(t);
    CHECK(to_string(parse_arith(to_string(f))) == to_string(f));
  }
  CHECK(to_string(A("(bit X 1 2)")) == to_string(bit("X", pair(num(1), num(2)))));
  CHECK(to_string(A("#glstar-arith v1\n(= 0 0)")) == "(= 0 0)");
  CHECK_THROWS_AS(A("(= 0"), ParseError);
  CHECK_THROWS_AS(A("(bit x 0)"), ParseError);
  CHECK_THROWS_AS(A("(frob 0 0)"), ParseError);
  CHECK_THROWS_AS(A("(= 0 0) extra"), ParseError);
}

TEST_CASE("free variables and substitution") {
  AFormula f = A("(existsle y x (bit X (+ y z)))");
  CHECK(free_number_vars(f) == std::set<std::string>{"x", "z"});
  CHECK(free_string_vars(f) == std::set<std::string>{"X"});
  CHECK(is_sigma0b(f));
  CHECK_FALSE(is_sigma0b(A("(existsstr Y 2 true)")));
  CHECK(to_string(subst_num(f, "z", num(2))) == "(existsle y x (bit X (+ y 2)))");
  CHECK(to_string(subst_num(f, "y", num(2))) == to_string(f));
  CHECK_THROWS_AS(subst_num(f, "z", var("y")), CaptureError);
}

TEST_CASE("edge-rec has eight conjuncts") {
  AFormula phi = adjacency_template();
  for (std::uint64_t a = 1; a <= 3; ++a)
    for (std::uint64_t b = 0; b <= 3; ++b) CHECK(edge_rec_conjuncts(phi, a, b).size() == 8);
  AFormula er = build_edge_rec(phi, 1, 1);
  CHECK(er->kind == FKind::StrQuant);
  CHECK(val(er->t, {}) == 1 + triple_value(1, 1, 1));
  CHECK_THROWS_AS(edge_rec_conjuncts(A("(bit Z i)"), 1, 1), std::invalid_argument);
}

TEST_CASE("rho1 on a one-node graph") {
  auto rs = edge_rec_conjuncts(adjacency_template(), 0, 1);
  FiniteModel m = graph(0, 0);
  put_z(m, {});
  CHECK(eval_arith(rs[0], m));
}

TEST_CASE("edge-rec matrix has a unique Z in the box") {
  AFormula phi = adjacency_template();
  for (auto [a, b] : {std::pair<std::uint64_t, std::uint64_t>{1, 0}, {1, 1}, {1, 2}, {2, 0}}) {
    AFormula matrix = conj_all(edge_rec_conjuncts(phi, a, b));
    auto codes = box_codes(a, b);
    REQUIRE(codes.size() <= 18);
    for (std::uint32_t g = 0; g < (1u << ((a + 1) * (a + 1))); ++g) {
      FiniteModel m = graph(a, g);
      int count = 0;
      for (std::uint32_t zm = 0; zm < (1u << codes.size()); ++zm) {
        std::set<std::uint64_t> ones;
        for (std::size_t k = 0; k < codes.size(); ++k)
          if ((zm >> k) & 1) ones.insert(codes[k]);
        put_z(m, ones);
        if (eval_arith(matrix, m)) ++count;
      }
      INFO("a=" << a << " b=" << b << " graph=" << g);
      CHECK(count == 1);
    }
  }
}

TEST_CASE("rho8 forbids bits outside the box") {
  auto rs = edge_rec_conjuncts(adjacency_template(), 1, 1);
  FiniteModel m = graph(1, 0);
  // (0,2,0) is below <1,1,1> but outside the box
  REQUIRE(triple_value(0, 2, 0) < triple_value(1, 1, 1));
  put_z(m, {triple_value(0, 2, 0)});
  CHECK_FALSE(eval_arith(rs[7], m));
  put_z(m, {triple_value(1, 1, 1)});
  CHECK(eval_arith(rs[7], m));
}
