#include "glstar/oracle.hpp"

#include <stdexcept>

namespace glstar::oracle {

namespace {

bool satisfies(const CnfView& c, const std::vector<int>& val) {
  for (const auto& cl : c.clauses) {
    bool ok = false;
    for (Lit l : cl)
      if (val[lit_var(l)] == (lit_negative(l) ? 0 : 1)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::optional<std::map<std::uint32_t, bool>> brute_sat(const CnfView& c) {
  const std::uint32_t n = c.num_vars();
  if (n > static_cast<std::uint32_t>(kBruteCap)) throw std::invalid_argument("brute_sat: too many variables");
  std::vector<int> val(n + 1, 0);
  for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
    for (std::uint32_t k = 1; k <= n; ++k) val[k] = (m >> (n - k)) & 1ULL;
    if (satisfies(c, val)) {
      std::map<std::uint32_t, bool> out;
      for (std::uint32_t k = 1; k <= n; ++k) out[k] = val[k];
      return out;
    }
  }
  return std::nullopt;
}

namespace {

struct Enumerator {
  int max_vars, max_clauses;
  const std::function<void(const CnfView&)>& fn;
  std::vector<std::vector<Lit>> clauses;
  std::vector<int> count;  // occurrences per variable

  void emit() {
    CnfView c = CnfView::from_clauses(clauses);
    fn(c);
  }

  // Builds one clause literal by literal in ascending code order.
  void clause(int used, Lit from, std::vector<Lit>& cur) {
    if (!cur.empty()) {
      int nused = used;
      for (Lit l : cur) nused = std::max<int>(nused, static_cast<int>(lit_var(l)));
      clauses.push_back(cur);
      rec(nused);
      clauses.pop_back();
    }
    for (Lit l = from; lit_var(l) <= static_cast<std::uint32_t>(max_vars); ++l) {
      int v = static_cast<int>(lit_var(l));
      // canonical: a new variable must be the next unused one
      int highest = used;
      for (Lit x : cur) highest = std::max<int>(highest, static_cast<int>(lit_var(x)));
      if (v > highest + 1) break;
      if (count[v] >= 2) continue;
      ++count[v];
      cur.push_back(l);
      clause(used, l + 1, cur);
      cur.pop_back();
      --count[v];
    }
  }

  void rec(int used) {
    emit();
    if (static_cast<int>(clauses.size()) == max_clauses) return;
    std::vector<Lit> cur;
    clause(used, 2, cur);
  }
};

}  // namespace

void for_each_cnf2(int max_vars, int max_clauses, const std::function<void(const CnfView&)>& fn) {
  Enumerator e{max_vars, max_clauses, fn, {}, std::vector<int>(max_vars + 2, 0)};
  e.rec(0);
}

std::vector<CnfView> enumerate_cnf2(int max_vars, int max_clauses) {
  std::vector<CnfView> out;
  for_each_cnf2(max_vars, max_clauses, [&](const CnfView& c) { out.push_back(c); });
  return out;
}

namespace {

std::uint64_t count_rec(const CnfView& c, std::vector<int>& val, std::uint64_t limit) {
  // unit propagation to a fixpoint
  std::vector<std::uint32_t> trail;
  bool changed = true;
  std::uint64_t result = 0;
  bool conflict = false;
  while (changed && !conflict) {
    changed = false;
    for (const auto& cl : c.clauses) {
      int unassigned = 0;
      Lit last = 0;
      bool sat = false;
      for (Lit l : cl) {
        int v = val[lit_var(l)];
        if (v < 0) {
          ++unassigned;
          last = l;
        } else if (v == (lit_negative(l) ? 0 : 1)) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (unassigned == 0) {
        conflict = true;
        break;
      }
      if (unassigned == 1) {
        val[lit_var(last)] = lit_negative(last) ? 0 : 1;
        trail.push_back(lit_var(last));
        changed = true;
      }
    }
  }
  if (!conflict) {
    std::uint32_t pick = 0;
    for (std::uint32_t k = 1; k < val.size(); ++k)
      if (val[k] < 0) {
        bool occurs = false;
        for (const auto& cl : c.clauses) {
          for (Lit l : cl)
            if (lit_var(l) == k) occurs = true;
          if (occurs) break;
        }
        if (occurs) {
          pick = k;
          break;
        }
      }
    if (pick == 0) {
      result = satisfies(c, val) ? 1 : 0;
      if (result) {
        std::uint64_t free = 0;
        for (std::uint32_t k = 1; k < val.size(); ++k)
          if (val[k] < 0) ++free;
        result = free >= 63 ? limit : std::min<std::uint64_t>(limit, 1ULL << free);
      }
    } else {
      for (int b = 0; b <= 1 && result < limit; ++b) {
        val[pick] = b;
        result += count_rec(c, val, limit - result);
        val[pick] = -1;
      }
    }
  }
  for (auto v : trail) val[v] = -1;
  return std::min(result, limit);
}

}  // namespace

std::uint64_t count_models(const CnfView& c, std::uint64_t limit) {
  std::vector<int> val(c.num_vars() + 1, -1);
  return count_rec(c, val, limit);
}

bool brute_eval(const Assignment& a, const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
    case Kind::Var: {
      auto it = a.find(f.name());
      if (it == a.end()) throw DomainError("brute_eval: unassigned variable '" + f.name() + "'");
      return it->second;
    }
    case Kind::Not:
      return !brute_eval(a, f.child());
    case Kind::And:
      return brute_eval(a, f.left()) && brute_eval(a, f.right());
    case Kind::Or:
      return brute_eval(a, f.left()) || brute_eval(a, f.right());
    case Kind::Exists:
    case Kind::Forall: {
      Assignment b = a;
      bool want = f.kind() == Kind::Exists;
      for (bool v : {false, true}) {
        b[f.name()] = v;
        if (brute_eval(b, f.body()) == want) return want;
      }
      return !want;
    }
  }
  return false;
}

}  // namespace glstar::oracle
