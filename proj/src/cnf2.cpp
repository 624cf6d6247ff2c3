#include "glstar/cnf2.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace glstar {

void CnfView::reindex() {
  std::uint32_t maxv = num_vars();
  for (auto& cl : clauses) {
    std::sort(cl.begin(), cl.end());
    cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
    for (Lit l : cl) maxv = std::max(maxv, lit_var(l));
  }
  if (names.size() < maxv + 1) {
    std::size_t old = names.size();
    names.resize(maxv + 1);
    for (std::size_t k = std::max<std::size_t>(old, 1); k <= maxv; ++k)
      if (names[k].empty()) names[k] = "v" + std::to_string(k);
  }
  occ.assign(2 * (maxv + 1), {});
  for (std::uint32_t i = 0; i < clauses.size(); ++i)
    for (Lit l : clauses[i]) occ[l].push_back(i);
}

const std::vector<std::uint32_t>& CnfView::occurrences(Lit l) const {
  static const std::vector<std::uint32_t> none;
  return l < occ.size() ? occ[l] : none;
}

std::size_t CnfView::literal_count() const {
  std::size_t n = 0;
  for (const auto& cl : clauses) n += cl.size();
  return n;
}

CnfView CnfView::from_clauses(std::vector<std::vector<Lit>> clauses) {
  CnfView c;
  c.clauses = std::move(clauses);
  c.names.push_back("");
  c.reindex();
  for (std::uint32_t k = 1; k <= c.num_vars(); ++k) c.z_vars.insert(k);
  return c;
}

std::string to_string(const CnfView& c) {
  std::string out;
  for (std::size_t i = 0; i < c.clauses.size(); ++i) {
    if (i) out += ',';
    out += '{';
    for (std::size_t j = 0; j < c.clauses[i].size(); ++j) {
      if (j) out += ',';
      out += std::to_string(c.clauses[i][j]);
    }
    out += '}';
  }
  return out;
}

namespace {

void flatten(const Formula& f, Kind k, std::vector<Formula>& out) {
  if (f.kind() == k) {
    flatten(f.left(), k, out);
    flatten(f.right(), k, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

CnfView cnf_view(const Formula& f) {
  auto pre = split_prenex_exists(f);
  if (!pre) throw ShapeError("cnf_view needs an existential block over a quantifier-free matrix");
  std::set<std::string> quantified(pre->vars.begin(), pre->vars.end());
  CnfView c;
  c.names.push_back("");
  std::map<std::string, std::uint32_t> index;
  std::vector<Formula> conjuncts;
  flatten(pre->matrix, Kind::And, conjuncts);
  for (const auto& conj : conjuncts) {
    std::vector<Formula> items;
    flatten(conj, Kind::Or, items);
    std::vector<Lit> clause;
    for (const auto& it : items) {
      bool neg = it.kind() == Kind::Not;
      const Formula& atom = neg ? it.child() : it;
      if (atom.kind() != Kind::Var) throw ShapeError("matrix is not in CNF: " + to_string(it));
      auto [pos, fresh] = index.emplace(atom.name(), static_cast<std::uint32_t>(c.names.size()));
      if (fresh) {
        c.names.push_back(atom.name());
        (quantified.count(atom.name()) ? c.z_vars : c.x_vars).insert(pos->second);
      }
      clause.push_back(make_lit(pos->second, neg));
    }
    c.clauses.push_back(std::move(clause));
  }
  c.reindex();
  return c;
}

bool is_cnf2(const CnfView& c) {
  std::unordered_map<std::uint32_t, int> count;
  for (const auto& cl : c.clauses)
    for (Lit l : cl)
      if (++count[lit_var(l)] > 2) return false;
  return true;
}

std::optional<SigmaCnf> decompose_sigma_cnf(const Formula& f) {
  auto pre = split_prenex_exists(f);
  if (!pre) return std::nullopt;
  SigmaCnf out;
  out.quantified = pre->vars;
  std::set<std::string> zset(pre->vars.begin(), pre->vars.end());
  Bloom zb;
  for (const auto& z : zset) zb = zb | Bloom::of(z);
  std::map<std::string, std::uint32_t> index;

  auto mentions_z = [&](const Formula& g) {
    if ((g.bloom().lo & zb.lo) == 0 && (g.bloom().hi & zb.hi) == 0) return false;
    for (const auto& v : free_vars(g))
      if (zset.count(v)) return true;
    return false;
  };

  std::vector<Formula> conjuncts;
  flatten(pre->matrix, Kind::And, conjuncts);
  for (const auto& conj : conjuncts) {
    std::vector<Formula> items;
    flatten(conj, Kind::Or, items);
    std::vector<SigmaItem> clause;
    bool satisfied = false;
    for (const auto& it : items) {
      bool neg = it.kind() == Kind::Not;
      const Formula& atom = neg ? it.child() : it;
      if (atom.kind() == Kind::Var && zset.count(atom.name())) {
        auto [pos, fresh] = index.emplace(atom.name(), static_cast<std::uint32_t>(out.zvars.size() + 1));
        if (fresh) out.zvars.push_back(atom.name());
        SigmaItem s;
        s.is_z = true;
        s.z = pos->second;
        s.negative = neg;
        clause.push_back(s);
        continue;
      }
      if (mentions_z(it)) return std::nullopt;
      if (it.bloom().lo == 0 && it.bloom().hi == 0) {
        if (eval0({}, it)) satisfied = true;
        continue;
      }
      SigmaItem s;
      s.slot = it;
      clause.push_back(s);
    }
    if (!satisfied) out.clauses.push_back(std::move(clause));
  }
  return out;
}

namespace {

void or_leaves(const Formula& f, std::vector<Formula>& out) { flatten(f, Kind::Or, out); }

// True if b holds a slot (not S) whose S, or every disjunct of S, is a slot of a.
bool directed_conflict(const std::unordered_set<Formula>& aslots, const std::vector<SigmaItem>& b) {
  for (const auto& it : b) {
    if (it.is_z || it.slot.kind() != Kind::Not) continue;
    const Formula& inner = it.slot.child();
    if (aslots.count(inner)) return true;
    if (inner.kind() == Kind::Or) {
      std::vector<Formula> leaves;
      or_leaves(inner, leaves);
      bool all = std::all_of(leaves.begin(), leaves.end(), [&](const Formula& l) { return aslots.count(l) > 0; });
      if (all) return true;
    }
  }
  return false;
}

}  // namespace

bool is_sigma_cnf2(const Formula& f) {
  if (f.is_quantifier_free()) return true;
  auto d = decompose_sigma_cnf(f);
  if (!d) return false;
  std::map<std::pair<std::uint32_t, bool>, std::vector<std::size_t>> by_lit;
  for (std::size_t i = 0; i < d->clauses.size(); ++i)
    for (const auto& it : d->clauses[i])
      if (it.is_z) by_lit[{it.z, it.negative}].push_back(i);
  std::vector<std::unordered_set<Formula>> slots(d->clauses.size());
  for (std::size_t i = 0; i < d->clauses.size(); ++i)
    for (const auto& it : d->clauses[i])
      if (!it.is_z) slots[i].insert(it.slot);
  for (auto& [lit, cls] : by_lit) {
    cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
    for (std::size_t p = 0; p < cls.size(); ++p)
      for (std::size_t q = p + 1; q < cls.size(); ++q) {
        std::size_t i = cls[p], j = cls[q];
        if (!directed_conflict(slots[i], d->clauses[j]) && !directed_conflict(slots[j], d->clauses[i]))
          return false;
      }
  }
  return true;
}

Simplified simplify(const Formula& f, const Assignment& x_assign) {
  auto d = decompose_sigma_cnf(f);
  if (!d) throw ShapeError("simplify needs a Σ-CNF formula");
  Simplified out;
  out.view.names.push_back("");
  for (const auto& z : d->zvars) out.view.names.push_back(z);
  for (std::uint32_t k = 1; k <= d->zvars.size(); ++k) out.view.z_vars.insert(k);
  for (const auto& cl : d->clauses) {
    bool sat = false;
    std::vector<Lit> zs;
    for (const auto& it : cl) {
      if (it.is_z) {
        zs.push_back(make_lit(it.z, it.negative));
      } else if (eval0(x_assign, it.slot)) {
        sat = true;
        break;
      }
    }
    if (sat) continue;
    if (zs.empty()) out.unsat = true;
    out.view.clauses.push_back(std::move(zs));
  }
  out.view.reindex();
  return out;
}

bool follows(Lit l1, Lit l2, const CnfView& c) {
  for (std::uint32_t ci : c.occurrences(l2)) {
    const auto& cl = c.clauses[ci];
    auto it = std::find(cl.begin(), cl.end(), l2);
    std::size_t k = static_cast<std::size_t>(it - cl.begin());
    if (cl[(k + 1) % cl.size()] == l1) return true;
  }
  return false;
}

Lit next(Lit l, const CnfView& c) {
  if (!c.occurs(l)) throw std::invalid_argument("next: literal " + std::to_string(l) + " does not occur");
  Lit nl = complement(l);
  const auto& where = c.occurrences(nl);
  if (where.empty()) return l;
  const auto& cl = c.clauses[where.front()];
  auto it = std::find(cl.begin(), cl.end(), nl);
  std::size_t k = static_cast<std::size_t>(it - cl.begin());
  return cl[(k + 1) % cl.size()];
}

namespace {

bool same_clause(Lit a, Lit b, const CnfView& c) {
  const auto& oa = c.occurrences(a);
  const auto& ob = c.occurrences(b);
  for (auto x : oa)
    if (std::find(ob.begin(), ob.end(), x) != ob.end()) return true;
  return false;
}

}  // namespace

StageResult run_stage(std::size_t i, const CnfView& c) {
  if (i == 0 || i > c.clauses.size() || c.clauses[i - 1].empty())
    throw std::invalid_argument("run_stage: clause index out of range or empty clause");
  const std::size_t fsize = c.literal_count();
  const std::size_t cap = (fsize + 1) * (fsize + 1);
  StageResult r;
  std::size_t step = 0;
  auto assign = [&](Lit l) {
    r.events.push_back({i, step++, l});
    return step <= cap;
  };
  auto pure = [&](Lit l) { return !c.occurs(complement(l)); };

  const Lit first = c.clauses[i - 1].front();
  Lit l1 = first;
  do {
    if (!assign(l1)) return r;
    Lit l2 = next(l1, c);
    while (l2 != complement(l1)) {
      if (!assign(l2)) return r;
      l2 = next(l2, c);
      if (pure(l2)) {
        assign(l2);
        r.done = step <= cap;
        return r;
      }
      if (same_clause(l1, l2, c)) {
        r.done = true;
        return r;
      }
    }
    if (!assign(l1)) return r;
    l1 = next(l1, c);
  } while (l1 != first);
  return r;
}

SolveOutcome solve_cnf2(const CnfView& c) {
  if (!is_cnf2(c)) throw std::invalid_argument("solve_cnf2: input is not CNF(2)");
  SolveOutcome out;
  for (std::size_t i = 1; i <= c.clauses.size(); ++i) {
    if (c.clauses[i - 1].empty()) {
      out.failed_stage = i;
      return out;
    }
    StageResult st = run_stage(i, c);
    out.log.insert(out.log.end(), st.events.begin(), st.events.end());
    if (!st.done) {
      out.failed_stage = i;
      return out;
    }
  }
  for (const auto& e : out.log) out.assignment[lit_var(e.lit)] = !lit_negative(e.lit);
  out.sat = true;
  return out;
}

bool clauses_satisfied(const CnfView& c, const std::map<std::uint32_t, bool>& a, std::size_t upto) {
  for (std::size_t i = 0; i < upto && i < c.clauses.size(); ++i) {
    bool ok = false;
    for (Lit l : c.clauses[i]) {
      auto it = a.find(lit_var(l));
      if (it != a.end() && it->second == !lit_negative(l)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

WitnessResult witness_sigma_cnf2(const Formula& f, const Assignment& x_assign) {
  WitnessResult r;
  if (f.is_quantifier_free()) {
    r.sat = eval0(x_assign, f);
    return r;
  }
  Simplified s = simplify(f, x_assign);
  if (s.unsat) return r;
  SolveOutcome o = solve_cnf2(s.view);
  if (!o.sat) return r;
  auto pre = split_prenex_exists(f);
  for (const auto& z : pre->vars) r.witness[z] = false;
  for (const auto& [k, v] : o.assignment) r.witness[s.view.names[k]] = v;
  r.sat = true;
  return r;
}

}  // namespace glstar

namespace glstar {

CnfView parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  long declared_vars = 0, declared_clauses = 0;
  std::vector<std::vector<Lit>> clauses;
  std::set<std::uint32_t> xs;
  std::vector<Lit> cur;
  auto fail = [&](const std::string& msg) { throw ParseError("dimacs: " + msg, lineno); };
  auto lit_of = [&](long v) {
    if (v == 0) fail("zero literal");
    if (std::labs(v) > declared_vars) fail("variable " + std::to_string(std::labs(v)) + " above header count");
    return make_lit(static_cast<std::uint32_t>(std::labs(v)), v < 0);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == 'c') continue;
    if (tok == "p") {
      std::string fmt;
      if (header || !(ls >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf" || declared_vars < 0 ||
          declared_clauses < 0)
        fail("bad problem line");
      header = true;
      continue;
    }
    if (!header) fail("clause before problem line");
    if (tok == "x") {
      long v;
      bool closed = false;
      while (ls >> v) {
        if (v == 0) {
          closed = true;
          break;
        }
        xs.insert(lit_var(lit_of(v)));
      }
      if (!closed) fail("unterminated x line");
      continue;
    }
    std::istringstream all(line);
    long v;
    while (all >> v) {
      if (v == 0) {
        clauses.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(lit_of(v));
      }
    }
    if (!all.eof()) fail("bad token");
  }
  if (!header) fail("missing problem line");
  if (!cur.empty()) fail("unterminated clause");
  if (static_cast<long>(clauses.size()) != declared_clauses) fail("clause count differs from header");
  CnfView c;
  c.names.push_back("");
  for (long k = 1; k <= declared_vars; ++k) c.names.push_back("v" + std::to_string(k));
  c.clauses = std::move(clauses);
  c.reindex();
  for (std::uint32_t k = 1; k <= c.num_vars(); ++k) (xs.count(k) ? c.x_vars : c.z_vars).insert(k);
  return c;
}

std::string to_dimacs(const CnfView& c) {
  std::ostringstream out;
  out << kCnfHeader << '\n' << "p cnf " << c.num_vars() << ' ' << c.clauses.size() << '\n';
  if (!c.x_vars.empty()) {
    out << 'x';
    for (auto v : c.x_vars) out << ' ' << v;
    out << " 0\n";
  }
  for (const auto& cl : c.clauses) {
    for (Lit l : cl) out << (lit_negative(l) ? "-" : "") << lit_var(l) << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace glstar
