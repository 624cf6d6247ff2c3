#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "glstar/calculus.hpp"
#include "glstar/formula.hpp"

namespace glstar {

class WitnessError : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

struct WitnessOutcome {
  enum Kind { FalseInGamma, Witnessed } kind = FalseInGamma;
  std::size_t pos = 0;
  Assignment witness;  // values for the bound variables of a witnessed prenex formula
  bool operator==(const WitnessOutcome&) const = default;
};

std::string to_string(const WitnessOutcome& o);

// True if the outcome really satisfies s under a: the named antecedent formula
// is false, or the named succedent formula is true (its matrix true under the
// witness when it is a prenex existential).
bool outcome_satisfies(const Sequent& s, const WitnessOutcome& o, const Assignment& a);

// Preprocesses a GL* proof in free-variable normal form once so that many
// assignments can be witnessed cheaply.
class Witnesser {
 public:
  explicit Witnesser(const Proof& p);
  ~Witnesser();
  Witnesser(const Witnesser&) = delete;
  Witnesser& operator=(const Witnesser&) = delete;

  const Proof& proof() const;

  // Parameter values copied from a; ex-l eigenvariables read off the witnesses
  // of their cut descendants; every other free variable false.
  Assignment extend(const Assignment& a) const;

  WitnessOutcome wit(std::size_t line, const Assignment& a_prime) const;
  std::vector<WitnessOutcome> wit_all(const Assignment& a_prime) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Assignment extend_assignment(const Proof& p, const Assignment& a);
WitnessOutcome wit(std::size_t line, const Proof& p, const Assignment& a_prime);

// Values for the bound variables of the final formula of a proof of
// |- exists z1 ... zk P.
Assignment witness_proof(const Proof& p, const Assignment& a);

}  // namespace glstar
