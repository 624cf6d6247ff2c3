#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "glstar/cnf2.hpp"
#include "glstar/formula.hpp"

// Brute-force ground truth used by the tests. Deliberately naive.
namespace glstar::oracle {

inline constexpr int kBruteCap = 24;

// Lexicographically least satisfying assignment (variable 1 most
// significant, false before true) over variables 1..num_vars.
std::optional<std::map<std::uint32_t, bool>> brute_sat(const CnfView& c);

// Every CNF(2) clause sequence over at most max_vars variables with at most
// max_clauses nonempty clauses. Variables are introduced in order of first
// occurrence, which removes renamings but keeps clause order.
void for_each_cnf2(int max_vars, int max_clauses, const std::function<void(const CnfView&)>& fn);
std::vector<CnfView> enumerate_cnf2(int max_vars, int max_clauses);

// Number of assignments to variables 1..num_vars satisfying c, stopping at
// limit. Uses splitting with unit propagation.
std::uint64_t count_models(const CnfView& c, std::uint64_t limit);

// Truth value of an arbitrary quantified formula by expansion.
bool brute_eval(const Assignment& a, const Formula& f);

}  // namespace glstar::oracle
