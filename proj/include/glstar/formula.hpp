#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glstar {

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public FormulaError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : FormulaError(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class CaptureError : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

class ClassError : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

class DomainError : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

enum class Kind : std::uint8_t { Top, Bot, Var, Not, And, Or, Exists, Forall };

struct Bloom {
  std::uint64_t lo = 0, hi = 0;
  static Bloom of(std::string_view name);
  Bloom operator|(const Bloom& o) const { return {lo | o.lo, hi | o.hi}; }
  bool may_contain(const Bloom& o) const {
    return (lo & o.lo) == o.lo && (hi & o.hi) == o.hi;
  }
};

class FormulaNode;

// Immutable, hash-consed formula handle. Structurally equal formulas share a
// node, so == is pointer comparison.
class Formula {
 public:
  Formula() = default;

  static Formula top();
  static Formula bot();
  static Formula var(std::string_view name);
  static Formula neg(const Formula& f);
  static Formula conj(const Formula& l, const Formula& r);
  static Formula disj(const Formula& l, const Formula& r);
  static Formula exists(std::string_view v, const Formula& body);
  static Formula forall(std::string_view v, const Formula& body);

  // Left-nested chains; empty conjunction is top, empty disjunction is bot.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula disj_all(const std::vector<Formula>& fs);

  Kind kind() const;
  const std::string& name() const;  // Var name or bound variable
  const Formula& left() const;      // And/Or left, Not child, quantifier body
  const Formula& right() const;
  const Formula& child() const { return left(); }
  const Formula& body() const { return left(); }

  bool is_quantifier_free() const;
  std::uint64_t size() const;
  const Bloom& bloom() const;
  std::size_t hash() const;
  int sigma_level() const;
  int pi_level() const;

  bool valid() const { return static_cast<bool>(p_); }
  const FormulaNode* get() const { return p_.get(); }
  bool operator==(const Formula& o) const { return p_ == o.p_; }
  bool operator!=(const Formula& o) const { return p_ != o.p_; }

 private:
  friend class FormulaNode;
  friend struct Interner;
  explicit Formula(std::shared_ptr<const FormulaNode> p) : p_(std::move(p)) {}
  std::shared_ptr<const FormulaNode> p_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using Assignment = std::map<std::string, bool>;

struct QuantClass {
  bool sigma = true;
  int level = 0;
  bool operator==(const QuantClass&) const = default;
  static QuantClass SigmaQ(int i) { return {true, i}; }
  static QuantClass PiQ(int i) { return {false, i}; }
};

struct Sequent {
  std::vector<Formula> ante;
  std::vector<Formula> succ;
  bool operator==(const Sequent&) const = default;
};

bool is_identifier(std::string_view s);

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);
Sequent parse_sequent(std::string_view text);
std::string to_string(const Sequent& s);

QuantClass classify(const Formula& f);
std::string to_string(const QuantClass& q);

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const Sequent& s);
bool occurs_free(const Formula& f, std::string_view v);
std::set<std::string> bound_vars(const Formula& f);

bool eval0(const Assignment& a, const Formula& f);

struct Eval1Result {
  bool value = false;
  Assignment witness;
};
inline constexpr int kEval1Cap = 24;

// Splits a prenex existential formula into its bound variables and matrix.
// Returns nullopt if f is not an existential block over a quantifier-free body.
struct Prenex {
  std::vector<std::string> vars;
  Formula matrix;
};
std::optional<Prenex> split_prenex_exists(const Formula& f);

Eval1Result eval1(const Assignment& a, const Formula& f);
bool eval_sequent(const Assignment& a, const Sequent& s);

Formula substitute(const Formula& f, std::string_view v, const Formula& b);

// Parses one formula starting at pos and advances pos past it.
Formula parse_formula_at(std::string_view text, std::size_t& pos);

}  // namespace glstar

template <>
struct std::hash<glstar::Formula> {
  std::size_t operator()(const glstar::Formula& f) const { return f.hash(); }
};
