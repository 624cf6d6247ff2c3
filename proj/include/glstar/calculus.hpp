#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glstar/formula.hpp"

namespace glstar {

enum class Rule {
  AxTop, AxBot, AxVar,
  WeakL, WeakR, ContrL, ContrR, ExchL, ExchR,
  NotL, NotR, AndL, AndR, OrL, OrR,
  Cut, ExL, ExR, AllL, AllR
};

std::string_view rule_name(Rule r);
std::optional<Rule> parse_rule(std::string_view s);
int rule_arity(Rule r);
bool rule_has_eigenvariable(Rule r);  // ex-l, all-r
bool rule_has_formula_data(Rule r);   // cut, ex-r, all-l

struct Inference {
  std::string id;
  Rule rule = Rule::AxTop;
  std::vector<std::size_t> premises;  // indices of earlier lines
  Formula data;                       // cut formula or substituent B
  std::string eigen;                  // eigenvariable of ex-l / all-r
  Sequent conclusion;
};

struct Proof {
  std::vector<Inference> lines;
  const Sequent& final_sequent() const { return lines.back().conclusion; }
  std::size_t size() const { return lines.size(); }
};

struct Violation {
  std::string id;
  std::string rule;
  std::string message;
  std::string to_string() const;
};

// Where a premise occurrence goes in the conclusion. side < 0 means the
// occurrence disappears (the cut formula).
struct Link {
  int side = -1;  // 0 antecedent, 1 succedent
  std::size_t pos = 0;
};

struct RuleMatch {
  // links[k][side][pos] for premise k
  std::vector<std::array<std::vector<Link>, 2>> links;
};

struct RuleCheck {
  bool ok = false;
  std::string message;
  RuleMatch match;
};

RuleCheck check_rule(const Inference& inf, const std::vector<const Sequent*>& premises);

struct System {
  enum Kind { G, Gi, GL } kind = GL;
  int level = 1;
  static System parse(std::string_view s);  // "G", "G1*", "G2*", "GL*"
  std::string name() const;
};

std::vector<Violation> check_proof(const Proof& p, const System& sys);

std::set<std::string> parameter_vars(const Proof& p);

// Every variable that occurs free in some sequent of a rule-correct proof.
std::set<std::string> proof_free_vars(const Proof& p);

std::optional<Violation> check_fvnf(const Proof& p);
Proof to_fvnf(const Proof& p);
std::optional<Violation> check_subformula_property(const Proof& p);

// Descendant/ancestor bookkeeping for a rule-correct proof.
struct Ancestry {
  std::vector<RuleMatch> matches;
  std::vector<std::size_t> user;       // line that uses this line as a premise, or npos
  std::vector<std::size_t> user_slot;  // premise slot within that line
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};
Ancestry compute_ancestry(const Proof& p);

struct Occurrence {
  std::size_t line;
  int side;
  std::size_t pos;
  bool operator==(const Occurrence&) const = default;
};

// All occurrences above o (excluding o) whose descendants reach o.
std::vector<Occurrence> ancestors(const Proof& p, const Ancestry& anc, const Occurrence& o);

class ProofTextError : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

inline constexpr std::string_view kProofHeader = "#glstar-proof v1";

Proof parse_proof(std::string_view text);
std::string to_string(const Proof& p);

// Builds proofs line by line, computing each conclusion from its premises.
// The builder does not validate; check_proof does.
class ProofBuilder {
 public:
  std::size_t add(Inference inf);
  const Sequent& seq(std::size_t line) const { return proof_.lines[line].conclusion; }
  std::size_t size() const { return proof_.lines.size(); }
  Proof take() { return std::move(proof_); }
  const Proof& proof() const { return proof_; }

  std::size_t ax_top();
  std::size_t ax_bot();
  std::size_t ax_var(const std::string& x);
  std::size_t weaken(std::size_t p, int side, std::size_t pos, const Formula& f);
  std::size_t contract(std::size_t p, int side, std::size_t pos);
  std::size_t exchange(std::size_t p, int side, std::size_t pos);
  // not-l: succedent formula q of the premise becomes its negation at antecedent position s
  std::size_t not_l(std::size_t p, std::size_t q, std::size_t s);
  // not-r: antecedent formula q becomes its negation at succedent position s
  std::size_t not_r(std::size_t p, std::size_t q, std::size_t s);
  std::size_t and_l(std::size_t p, std::size_t s);
  std::size_t or_r(std::size_t p, std::size_t s);
  std::size_t and_r(std::size_t p1, std::size_t p2, std::size_t s);
  std::size_t or_l(std::size_t p1, std::size_t p2, std::size_t s);
  // p_ante has the cut formula at antecedent position qa, p_succ at succedent position qs
  std::size_t cut(std::size_t p_ante, std::size_t qa, std::size_t p_succ, std::size_t qs);
  std::size_t ex_l(std::size_t p, std::size_t s, const Formula& principal, const std::string& y);
  std::size_t all_r(std::size_t p, std::size_t s, const Formula& principal, const std::string& y);
  std::size_t ex_r(std::size_t p, std::size_t s, const Formula& principal, const Formula& b);
  std::size_t all_l(std::size_t p, std::size_t s, const Formula& principal, const Formula& b);

 private:
  Proof proof_;
};

}  // namespace glstar
