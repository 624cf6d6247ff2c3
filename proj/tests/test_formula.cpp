#include "doctest.h"
#include "glstar/formula.hpp"
#include "glstar/oracle.hpp"

using namespace glstar;

namespace {
Formula P(const char* s) { return parse_formula(s); }
Formula V(const char* s) { return Formula::var(s); }
}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(P("(and true false)") == Formula::conj(Formula::top(), Formula::bot()));
  CHECK(P("(exists z (or z x))") == Formula::exists("z", Formula::disj(V("z"), V("x"))));
  CHECK_THROWS_AS(P("(and true"), ParseError);
  CHECK_THROWS_AS(P("(exists z (exists z z))"), ParseError);
  CHECK_THROWS_AS(P("(xor a b)"), ParseError);
  CHECK_THROWS_AS(P("a b"), ParseError);
}

TEST_CASE("print then parse is the identity") {
  const char* samples[] = {"true", "(not (and x (or y' false)))", "(forall a (exists b (or a (not b))))",
                           "(and (exists z z) (exists z (not z)))"};
  for (const char* s : samples) {
    Formula f = P(s);
    CHECK(to_string(f) == s);
    CHECK(P(to_string(f).c_str()) == f);
  }
}

TEST_CASE("hash-consing shares equal trees") {
  CHECK(P("(and x (not y))") == Formula::conj(V("x"), Formula::neg(V("y"))));
  CHECK(P("(and x y)") != P("(and y x)"));
  CHECK(P("(and x (not y))").size() == 4);
}

TEST_CASE("classify") {
  CHECK(classify(P("(or x (not y))")) == QuantClass::SigmaQ(0));
  CHECK(classify(P("(exists z (and z x))")) == QuantClass::SigmaQ(1));
  CHECK(classify(P("(forall y (exists z (or y z)))")) == QuantClass::PiQ(2));
  CHECK(classify(P("(not (exists z z))")) == QuantClass::PiQ(1));
  CHECK(classify(P("(and (exists z z) (forall y y))")) == QuantClass::SigmaQ(2));
}

TEST_CASE("eval0 and its errors") {
  CHECK(eval0({{"x", true}}, P("(or x false)")));
  CHECK_FALSE(eval0({}, P("(not true)")));
  CHECK_FALSE(eval0({{"x", false}, {"y", true}}, P("(and x y)")));
  CHECK_THROWS_AS(eval0({}, P("x")), DomainError);
  CHECK_THROWS_AS(eval0({}, P("(exists z z)")), ClassError);
}

TEST_CASE("eval1 searches the block in lexicographic order") {
  auto r = eval1({{"x", false}}, P("(exists z (and (or z (not x)) (or (not z) x)))"));
  CHECK(r.value);
  CHECK(r.witness == Assignment{{"z", false}});
  CHECK_FALSE(eval1({}, P("(exists z (and z (not z)))")).value);
  auto r2 = eval1({}, P("(exists z1 (exists z2 (and z1 (not z2))))"));
  CHECK(r2.value);
  CHECK(r2.witness == Assignment{{"z1", true}, {"z2", false}});
  CHECK_THROWS_AS(eval1({}, P("(forall z z)")), ClassError);
  Formula big = Formula::top();
  for (int i = 0; i < 25; ++i) big = Formula::exists("q" + std::to_string(i), big);
  CHECK_THROWS_AS(eval1({}, big), DomainError);
}

TEST_CASE("eval_sequent") {
  CHECK(eval_sequent({{"x", true}}, parse_sequent("x |- x")));
  CHECK_FALSE(eval_sequent({}, parse_sequent("|- false")));
  CHECK(eval_sequent({}, parse_sequent("true |- (exists z z)")));
}

TEST_CASE("sequent text round trip") {
  Sequent s = parse_sequent("x, (and x y) |- (exists z z), y");
  CHECK(s.ante.size() == 2);
  CHECK(s.succ.size() == 2);
  CHECK(parse_sequent(to_string(s)) == s);
  CHECK(parse_sequent("|-").ante.empty());
  CHECK(to_string(parse_sequent("|- true")) == "|- true");
}

TEST_CASE("substitute") {
  CHECK(substitute(P("(exists z (or z x))"), "x", P("(and y y)")) == P("(exists z (or z (and y y)))"));
  CHECK_THROWS_AS(substitute(P("(exists z (or z x))"), "x", P("(or z w)")), CaptureError);
  CHECK(substitute(P("x"), "x", Formula::top()) == Formula::top());
  CHECK(substitute(P("(exists x x)"), "x", Formula::top()) == P("(exists x x)"));
  CHECK_THROWS_AS(substitute(P("x"), "x", P("(exists q q)")), ClassError);
}

TEST_CASE("free variables") {
  CHECK(free_vars(P("(exists z (or z x))")) == std::set<std::string>{"x"});
  CHECK(occurs_free(P("(and y (exists y y))"), "y"));
  CHECK_FALSE(occurs_free(P("(exists y y)"), "y"));
}

namespace {

// All quantifier-free formulas over the given variables up to a depth.
std::vector<Formula> small_formulas(const std::vector<std::string>& vars, int depth) {
  std::vector<Formula> out{Formula::top(), Formula::bot()};
  for (const auto& v : vars) out.push_back(Formula::var(v));
  for (int d = 0; d < depth; ++d) {
    std::vector<Formula> next = out;
    for (const auto& a : out) next.push_back(Formula::neg(a));
    for (std::size_t i = 0; i < out.size(); i += 3)
      for (std::size_t j = 1; j < out.size(); j += 4) {
        next.push_back(Formula::conj(out[i], out[j]));
        next.push_back(Formula::disj(out[j], out[i]));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Assignment> all_assignments(const std::vector<std::string>& vars) {
  std::vector<Assignment> out;
  for (std::uint64_t m = 0; m < (1ULL << vars.size()); ++m) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = (m >> i) & 1;
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("eval1 agrees with eval0 on quantifier-free inputs") {
  std::vector<std::string> vars{"a", "b", "c", "d"};
  auto fs = small_formulas(vars, 2);
  auto as = all_assignments(vars);
  for (const auto& f : fs)
    for (const auto& a : as) REQUIRE(eval1(a, f).value == eval0(a, f));
}

TEST_CASE("substitution lemma, exhaustive over small formulas") {
  std::vector<std::string> vars{"a", "b", "c"};
  auto fs = small_formulas(vars, 2);
  auto bs = small_formulas({"b", "c"}, 1);
  auto as = all_assignments(vars);
  int checked = 0;
  for (std::size_t i = 0; i < fs.size(); i += 5)
    for (std::size_t j = 0; j < bs.size(); j += 2) {
      Formula s = substitute(fs[i], "a", bs[j]);
      for (const auto& a : as) {
        Assignment u = a;
        u["a"] = eval0(a, bs[j]);
        REQUIRE(eval0(a, s) == eval0(u, fs[i]));
        ++checked;
      }
    }
  CHECK(checked > 500);
}

TEST_CASE("classify is monotone under conjunction") {
  const char* fs[] = {"x", "(exists z z)", "(forall y (exists z (or y z)))", "(exists a (forall b (and a b)))"};
  for (const char* s : fs)
    for (const char* t : fs) {
      QuantClass a = classify(P(s)), b = classify(P(t)), c = classify(Formula::conj(P(s), P(t)));
      if (a.sigma == b.sigma || a.level == 0 || b.level == 0) CHECK(c.level == std::max(a.level, b.level));
    }
}

TEST_CASE("brute_eval agrees with eval1 on prenex inputs") {
  Formula f = P("(exists p (exists q (and (or p x) (or (not q) (not x)))))");
  for (bool x : {false, true}) CHECK(oracle::brute_eval({{"x", x}}, f) == eval1({{"x", x}}, f).value);
}
