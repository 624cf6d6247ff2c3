#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glstar/formula.hpp"

namespace glstar {

// Literal code: 2k for variable k, 2k+1 for its negation (k >= 1).
using Lit = std::uint32_t;
inline Lit complement(Lit l) { return l ^ 1u; }
inline Lit make_lit(std::uint32_t var, bool negative) { return 2 * var + (negative ? 1 : 0); }
inline std::uint32_t lit_var(Lit l) { return l >> 1; }
inline bool lit_negative(Lit l) { return l & 1u; }

class ShapeError : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

struct CnfView {
  std::vector<std::vector<Lit>> clauses;
  std::vector<std::string> names;  // names[k] names variable k; names[0] unused
  std::set<std::uint32_t> z_vars;
  std::set<std::uint32_t> x_vars;
  std::vector<std::vector<std::uint32_t>> occ;  // literal code -> clause indices (0-based)

  // Sorts and deduplicates every clause and rebuilds occ. names grows to cover
  // every variable that appears.
  void reindex();
  std::uint32_t num_vars() const { return names.empty() ? 0 : static_cast<std::uint32_t>(names.size() - 1); }
  const std::vector<std::uint32_t>& occurrences(Lit l) const;
  bool occurs(Lit l) const { return !occurrences(l).empty(); }
  std::size_t literal_count() const;

  static CnfView from_clauses(std::vector<std::vector<Lit>> clauses);
};

std::string to_string(const CnfView& c);

// DIMACS with a version comment. An optional line `x v1 v2 ... 0` before the
// clauses marks free variables; every other variable is a z-variable.
inline constexpr std::string_view kCnfHeader = "c glstar-cnf v1";
CnfView parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfView& c);

CnfView cnf_view(const Formula& f);

bool is_cnf2(const CnfView& c);

// One item of a clause in a Σ-CNF matrix: a z-literal or a z-free slot.
struct SigmaItem {
  bool is_z = false;
  std::uint32_t z = 0;  // index into SigmaCnf::zvars (1-based)
  bool negative = false;
  Formula slot;
};

struct SigmaCnf {
  std::vector<std::string> quantified;  // quantifier order
  std::vector<std::string> zvars;       // zvars[k-1] is z-variable k, first-occurrence order
  std::vector<std::vector<SigmaItem>> clauses;
};

// Decomposes an existential block over a CNF matrix whose non-z parts are
// quantifier-free slots. Closed slots are folded away.
std::optional<SigmaCnf> decompose_sigma_cnf(const Formula& f);

bool is_sigma_cnf2(const Formula& f);

struct Simplified {
  bool unsat = false;  // a surviving clause became empty
  CnfView view;
};
Simplified simplify(const Formula& f, const Assignment& x_assign);

bool follows(Lit l1, Lit l2, const CnfView& c);
Lit next(Lit l, const CnfView& c);

struct StageEvent {
  std::size_t stage;
  std::size_t step;
  Lit lit;
  bool operator==(const StageEvent&) const = default;
};

struct StageResult {
  std::vector<StageEvent> events;
  bool done = false;
};

// Stage i (1-based clause index) of the stage-wise CNF(2) algorithm.
StageResult run_stage(std::size_t i, const CnfView& c);

struct SolveOutcome {
  bool sat = false;
  std::size_t failed_stage = 0;
  std::map<std::uint32_t, bool> assignment;  // variable index -> value
  std::vector<StageEvent> log;
};

SolveOutcome solve_cnf2(const CnfView& c);

bool clauses_satisfied(const CnfView& c, const std::map<std::uint32_t, bool>& a, std::size_t upto);

struct WitnessResult {
  bool sat = false;
  Assignment witness;  // values for every quantified variable of f
};
WitnessResult witness_sigma_cnf2(const Formula& f, const Assignment& x_assign);

}  // namespace glstar
