#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glstar/formula.hpp"

// Two-sorted bounded arithmetic: terms and Σ0^B formulas over 0, 1, +, *, |X|,
// with bounded number quantifiers and a root string quantifier.
namespace glstar::arith {

enum class TermKind { Zero, One, Num, Var, Len, Add, Mul };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind = TermKind::Zero;
  std::uint64_t value = 0;  // Num
  std::string name;         // Var, Len
  Term left, right;         // Add, Mul
};

Term zero();
Term one();
Term num(std::uint64_t n);
Term var(std::string name);
Term len(std::string name);
Term add(Term a, Term b);
Term mul(Term a, Term b);
// (s+t)(s+t+1)+2t
Term pair(Term s, Term t);
Term triple(Term w, Term s, Term t);

std::uint64_t pair_value(std::uint64_t i, std::uint64_t j);
std::uint64_t triple_value(std::uint64_t w, std::uint64_t i, std::uint64_t j);
std::optional<std::pair<std::uint64_t, std::uint64_t>> unpair(std::uint64_t c);
std::optional<std::array<std::uint64_t, 3>> untriple(std::uint64_t c);

enum class FKind { Top, Bot, Eq, Lt, Bit, Not, And, Or, NumQuant, StrQuant };

struct FNode;
using AFormula = std::shared_ptr<const FNode>;

struct FNode {
  FKind kind = FKind::Top;
  Term s, t;           // Eq, Lt: s, t; Bit: t; quantifiers: bound t
  std::string name;    // Bit: string variable; quantifiers: bound variable
  bool exists = false;
  bool strict = false;  // NumQuant: y < t instead of y <= t
  AFormula left, right;  // Not/quantifiers: left is the body
};

AFormula top();
AFormula bot();
AFormula eq(Term s, Term t);
AFormula lt(Term s, Term t);
AFormula bit(std::string x, Term t);
AFormula neg(AFormula f);
AFormula conj(AFormula f, AFormula g);
AFormula disj(AFormula f, AFormula g);
AFormula conj_all(const std::vector<AFormula>& fs);
AFormula disj_all(const std::vector<AFormula>& fs);
AFormula exists_le(std::string y, Term t, AFormula body);
AFormula forall_le(std::string y, Term t, AFormula body);
AFormula exists_lt(std::string y, Term t, AFormula body);
AFormula forall_lt(std::string y, Term t, AFormula body);
AFormula exists_str(std::string y, Term t, AFormula body);
AFormula forall_str(std::string y, Term t, AFormula body);

inline bool is_string_var(std::string_view name) { return !name.empty() && name[0] >= 'A' && name[0] <= 'Z'; }

struct SizeContext {
  std::map<std::string, std::uint64_t> num;   // number variable -> value
  std::map<std::string, std::uint64_t> size;  // string variable -> length
};

// A string of length n: bit n-1 is 1, bits >= n are 0; bits[k] gives bit k < n-1.
struct FiniteModel {
  SizeContext ctx;
  std::map<std::string, std::vector<bool>> bits;

  void set_string(const std::string& x, std::uint64_t n, std::vector<bool> low_bits);
  bool bit(const std::string& x, std::uint64_t k) const;
};

std::uint64_t val(const Term& t, const SizeContext& ctx);

inline constexpr int kStringEnumCap = 20;  // total free bits enumerated by eval_arith
bool eval_arith(const AFormula& f, const FiniteModel& m);

bool is_sigma0b(const AFormula& f);
bool mentions_string(const AFormula& f, std::string_view x);
std::set<std::string> free_number_vars(const AFormula& f);
std::set<std::string> free_string_vars(const AFormula& f);
std::set<std::string> all_names(const AFormula& f);

// Replaces free occurrences of number variable y by t.
AFormula subst_num(const AFormula& f, std::string_view y, const Term& t);

std::string to_string(const Term& t);
std::string to_string(const AFormula& f);

inline constexpr std::string_view kArithHeader = "#glstar-arith v1";
// Accepts an optional header line and '#' comments.
AFormula parse_arith(std::string_view text);
Term parse_term(std::string_view text);

struct EdgeRecNames {
  std::string i = "i";  // template parameters of phi
  std::string j = "j";
  std::string z = "Z";
};

// The eight conjuncts rho1..rho8 of the edge-rec body for phi(i,j).
std::vector<AFormula> edge_rec_conjuncts(const AFormula& phi, std::uint64_t a, std::uint64_t b,
                                         const EdgeRecNames& names = {});
// exists Z <= 1+<b,a,a> [rho1 and ... and rho8]
AFormula build_edge_rec(const AFormula& phi, std::uint64_t a, std::uint64_t b, const EdgeRecNames& names = {});

// X(i,j)
AFormula adjacency_template(const std::string& x = "X", const EdgeRecNames& names = {});

}  // namespace glstar::arith
