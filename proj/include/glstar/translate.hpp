#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "glstar/arith.hpp"
#include "glstar/calculus.hpp"
#include "glstar/formula.hpp"

namespace glstar {

// Propositional name of bit j of string variable X: "X_j".
std::string bit_var(std::string_view x, std::uint64_t j);

// ||phi||[m;n]. Bounded number quantifiers expand to conjunctions and
// disjunctions over 0..val(t); a string quantifier Q Y<=t becomes, for every
// size 0..val(t), a block Q Y_0 ... Q Y_{size-2} over the translated body.
Formula translate(const arith::AFormula& phi, const arith::SizeContext& ctx);

// Values of the propositional bit variables that encode m.
Assignment bit_assignment(const arith::FiniteModel& m);

// Size context for edge-rec: every free string variable of phi without a
// size in ctx gets pair(a,a)+2, so each X(i,j) with i,j<=a is a variable.
arith::SizeContext edge_rec_context(const arith::AFormula& phi, std::uint64_t a, const arith::SizeContext& ctx = {});

// Bits Z_<w,i,j> with w<=b and i,j<=a, in ascending code order.
std::vector<std::string> edge_rec_box(std::uint64_t a, std::uint64_t b);

// ||exists Z psi_phi(a,b,Z)||: an existential block over the box bits of Z
// in front of the translated matrix. Bits of Z outside the box are false and
// constants are folded. Throws std::logic_error if the result is not
// SigmaCNF(2).
Formula translate_edge_rec(const arith::AFormula& phi, std::uint64_t a, std::uint64_t b,
                           const arith::SizeContext& ctx = {});

// GL* proof of |- translate_edge_rec(X(i,j), a, b).
Proof gen_edge_rec_proof(std::uint64_t a, std::uint64_t b, const arith::SizeContext& ctx = {});

}  // namespace glstar
