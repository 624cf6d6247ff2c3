#include "glstar/witnessing.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "glstar/cnf2.hpp"

namespace glstar {

namespace {

enum class Shape { QuantifierFree, SigmaCnf2, PrenexSigma1, Other };

Shape shape_of(const Formula& f) {
  if (f.is_quantifier_free()) return Shape::QuantifierFree;
  if (is_sigma_cnf2(f)) return Shape::SigmaCnf2;
  if (split_prenex_exists(f)) return Shape::PrenexSigma1;
  return Shape::Other;
}

int count_binders(const Formula& f) {
  switch (f.kind()) {
    case Kind::Not:
      return count_binders(f.child());
    case Kind::And:
    case Kind::Or:
      return count_binders(f.left()) + count_binders(f.right());
    case Kind::Exists:
    case Kind::Forall:
      return 1 + count_binders(f.body());
    default:
      return 0;
  }
}

bool expand(Assignment& a, const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
    case Kind::Var: {
      auto it = a.find(f.name());
      return it != a.end() && it->second;
    }
    case Kind::Not:
      return !expand(a, f.child());
    case Kind::And:
      return expand(a, f.left()) && expand(a, f.right());
    case Kind::Or:
      return expand(a, f.left()) || expand(a, f.right());
    case Kind::Exists:
    case Kind::Forall: {
      const bool want = f.kind() == Kind::Exists;
      auto saved = a.find(f.name()) == a.end() ? std::optional<bool>() : std::optional<bool>(a[f.name()]);
      bool result = !want;
      for (bool v : {false, true}) {
        a[f.name()] = v;
        if (expand(a, f.body()) == want) {
          result = want;
          break;
        }
      }
      if (saved)
        a[f.name()] = *saved;
      else
        a.erase(f.name());
      return result;
    }
  }
  return false;
}

// Truth of an arbitrary formula. Unassigned free variables read as false.
bool truth(const Assignment& a, const Formula& f, Shape sh) {
  switch (sh) {
    case Shape::QuantifierFree: {
      Assignment b = a;
      return expand(b, f);
    }
    case Shape::SigmaCnf2:
      return witness_sigma_cnf2(f, a).sat;
    default:
      break;
  }
  if (count_binders(f) > kEval1Cap) throw WitnessError("formula has too many quantifiers to evaluate: " + to_string(f));
  Assignment b = a;
  return expand(b, f);
}

void complete(Assignment& a, const std::set<std::string>& vars) {
  for (const auto& v : vars) a.emplace(v, false);
}

// Matches a quantifier-free pattern against t, binding the variables in pv.
bool match(const Formula& pat, const Formula& t, const std::map<std::string, std::size_t>& pv,
           std::vector<Formula>& bind) {
  if (pat.kind() == Kind::Var) {
    auto it = pv.find(pat.name());
    if (it != pv.end()) {
      Formula& slot = bind[it->second];
      if (!slot.valid()) {
        slot = t;
        return true;
      }
      return slot == t;
    }
  }
  if (pat.kind() != t.kind()) return false;
  switch (pat.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Var:
      return pat.name() == t.name();
    case Kind::Not:
      return match(pat.child(), t.child(), pv, bind);
    case Kind::And:
    case Kind::Or:
      return match(pat.left(), t.left(), pv, bind) && match(pat.right(), t.right(), pv, bind);
    default:
      return false;
  }
}

}  // namespace

std::string to_string(const WitnessOutcome& o) {
  if (o.kind == WitnessOutcome::FalseInGamma) return "FalseInGamma(" + std::to_string(o.pos) + ")";
  std::string s = "Witnessed(" + std::to_string(o.pos) + ", {";
  bool first = true;
  for (const auto& [k, v] : o.witness) {
    if (!first) s += ", ";
    first = false;
    s += k + "=" + (v ? "1" : "0");
  }
  return s + "})";
}

bool outcome_satisfies(const Sequent& s, const WitnessOutcome& o, const Assignment& a) {
  if (o.kind == WitnessOutcome::FalseInGamma) {
    if (o.pos >= s.ante.size()) return false;
    const Formula& f = s.ante[o.pos];
    return !truth(a, f, shape_of(f));
  }
  if (o.pos >= s.succ.size()) return false;
  const Formula& f = s.succ[o.pos];
  if (auto pre = split_prenex_exists(f); pre && !pre->vars.empty()) {
    Assignment b = a;
    for (const auto& v : pre->vars) {
      auto it = o.witness.find(v);
      b[v] = it != o.witness.end() && it->second;
    }
    return expand(b, pre->matrix);
  }
  return truth(a, f, shape_of(f));
}

// ---------------------------------------------------------------- Witnesser

struct Witnesser::Impl {
  Proof p;
  Ancestry anc;
  std::set<std::string> params;
  std::set<std::string> all_vars;

  struct Eigen {
    std::string y;
    std::string bound;
    std::optional<Formula> cut;  // empty: descends to the final sequent
  };
  std::vector<Eigen> eigens;

  std::unordered_map<Formula, Shape> shapes;

  // Σ0 instances of a prenex succedent formula found among its ancestors,
  // keyed by (line, pos); each entry lists the substituted formulas.
  mutable std::mutex mu;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Formula>>> instances;

  Shape shape(const Formula& f) {
    auto it = shapes.find(f);
    if (it != shapes.end()) return it->second;
    Shape s = shape_of(f);
    shapes.emplace(f, s);
    return s;
  }

  const std::vector<std::vector<Formula>>& instances_of(std::size_t line, std::size_t pos, const Prenex& pre) const {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(line, pos);
    auto it = instances.find(key);
    if (it != instances.end()) return it->second;
    std::map<std::string, std::size_t> pv;
    for (std::size_t i = 0; i < pre.vars.size(); ++i) pv[pre.vars[i]] = i;
    std::vector<std::vector<Formula>> out;
    for (const auto& o : ancestors(p, anc, {line, 1, pos})) {
      const Formula& g = p.lines[o.line].conclusion.succ[o.pos];
      if (!g.is_quantifier_free()) continue;
      std::vector<Formula> bind(pre.vars.size());
      if (!match(pre.matrix, g, pv, bind)) continue;
      for (auto& b : bind)
        if (!b.valid()) b = Formula::bot();
      if (std::find(out.begin(), out.end(), bind) == out.end()) out.push_back(std::move(bind));
    }
    return instances.emplace(key, std::move(out)).first->second;
  }
};

Witnesser::Witnesser(const Proof& p) : impl_(std::make_unique<Impl>()) {
  if (p.lines.empty()) throw WitnessError("empty proof");
  if (auto v = check_fvnf(p)) throw WitnessError("proof is not in free-variable normal form: " + v->to_string());
  Impl& m = *impl_;
  m.p = p;
  m.anc = compute_ancestry(m.p);
  m.params = parameter_vars(m.p);
  m.all_vars = proof_free_vars(m.p);
  for (std::size_t i = 0; i < m.p.lines.size(); ++i) {
    const Inference& inf = m.p.lines[i];
    for (const auto& f : inf.conclusion.ante) m.shape(f);
    for (const auto& f : inf.conclusion.succ) m.shape(f);
    if (inf.rule != Rule::ExL) continue;
    const Sequent& prem = m.p.lines[inf.premises[0]].conclusion;
    const auto& links = m.anc.matches[i].links[0][0];
    std::size_t s = 0;
    for (std::size_t q = 0; q < links.size(); ++q)
      if (prem.ante[q] != inf.conclusion.ante[links[q].pos]) s = links[q].pos;
    Impl::Eigen e;
    e.y = inf.eigen;
    e.bound = inf.conclusion.ante[s].name();
    Occurrence cur{i, 0, s};
    for (;;) {
      std::size_t u = m.anc.user[cur.line];
      if (u == Ancestry::npos) break;
      const Link& l = m.anc.matches[u].links[m.anc.user_slot[cur.line]][cur.side][cur.pos];
      if (l.side < 0) {
        e.cut = m.p.lines[u].data;
        break;
      }
      cur = {u, l.side, l.pos};
    }
    m.eigens.push_back(std::move(e));
  }
}

Witnesser::~Witnesser() = default;

const Proof& Witnesser::proof() const { return impl_->p; }

Assignment Witnesser::extend(const Assignment& a) const {
  const Impl& m = *impl_;
  Assignment out;
  for (const auto& v : m.params) {
    auto it = a.find(v);
    if (it == a.end()) throw WitnessError("assignment does not cover parameter '" + v + "'");
    out[v] = it->second;
  }
  std::unordered_map<Formula, WitnessResult> solved;
  for (const auto& e : m.eigens) {
    bool value = false;
    if (e.cut) {
      auto it = solved.find(*e.cut);
      if (it == solved.end()) {
        if (!is_sigma_cnf2(*e.cut))
          throw WitnessError("cut formula below an ex-l is not SigmaCNF(2): " + to_string(*e.cut));
        Assignment params = out;
        complete(params, free_vars(*e.cut));
        it = solved.emplace(*e.cut, witness_sigma_cnf2(*e.cut, params)).first;
      }
      if (it->second.sat) {
        auto w = it->second.witness.find(e.bound);
        value = w != it->second.witness.end() && w->second;
      }
    }
    out[e.y] = value;
  }
  complete(out, m.all_vars);
  return out;
}

WitnessOutcome Witnesser::wit(std::size_t line, const Assignment& a) const {
  const Impl& m = *impl_;
  if (line >= m.p.lines.size()) throw WitnessError("no such line");
  const Sequent& s = m.p.lines[line].conclusion;
  auto shape = [&](const Formula& f) {
    auto it = m.shapes.find(f);
    return it != m.shapes.end() ? it->second : shape_of(f);
  };
  for (std::size_t i = 0; i < s.ante.size(); ++i)
    if (!truth(a, s.ante[i], shape(s.ante[i]))) return {WitnessOutcome::FalseInGamma, i, {}};
  // quantifier-free and SigmaCNF(2) formulas are decided directly
  std::vector<std::size_t> deferred;
  for (std::size_t i = 0; i < s.succ.size(); ++i) {
    const Formula& f = s.succ[i];
    Shape sh = shape(f);
    if (sh == Shape::QuantifierFree) {
      if (truth(a, f, sh)) return {WitnessOutcome::Witnessed, i, {}};
    } else if (sh == Shape::SigmaCnf2) {
      WitnessResult r = witness_sigma_cnf2(f, a);
      if (r.sat) return {WitnessOutcome::Witnessed, i, r.witness};
    } else {
      deferred.push_back(i);
    }
  }
  for (std::size_t i : deferred) {
    const Formula& f = s.succ[i];
    if (shape(f) == Shape::PrenexSigma1) {
      Prenex pre = *split_prenex_exists(f);
      for (const auto& inst : m.instances_of(line, i, pre)) {
        Assignment w;
        for (std::size_t k = 0; k < pre.vars.size(); ++k) w[pre.vars[k]] = truth(a, inst[k], Shape::QuantifierFree);
        Assignment b = a;
        for (const auto& [k, v] : w) b[k] = v;
        if (expand(b, pre.matrix)) return {WitnessOutcome::Witnessed, i, w};
      }
      if (pre.vars.size() <= static_cast<std::size_t>(kEval1Cap)) {
        Assignment b = a;
        for (const auto& v : pre.vars) b.erase(v);
        Eval1Result r = eval1(b, f);
        if (r.value) return {WitnessOutcome::Witnessed, i, r.witness};
      }
    } else if (truth(a, f, Shape::Other)) {
      return {WitnessOutcome::Witnessed, i, {}};
    }
  }
  throw WitnessError("no formula satisfies the sequent at line " + m.p.lines[line].id + ": " + to_string(s));
}

std::vector<WitnessOutcome> Witnesser::wit_all(const Assignment& a) const {
  std::vector<WitnessOutcome> out;
  out.reserve(impl_->p.lines.size());
  for (std::size_t i = 0; i < impl_->p.lines.size(); ++i) out.push_back(wit(i, a));
  return out;
}

Assignment extend_assignment(const Proof& p, const Assignment& a) { return Witnesser(p).extend(a); }

WitnessOutcome wit(std::size_t line, const Proof& p, const Assignment& a_prime) {
  return Witnesser(p).wit(line, a_prime);
}

Assignment witness_proof(const Proof& p, const Assignment& a) {
  Proof q = to_fvnf(p);
  const Sequent& fin = q.final_sequent();
  if (!fin.ante.empty() || fin.succ.size() != 1)
    throw WitnessError("final sequent must have the form |- exists z P");
  auto pre = split_prenex_exists(fin.succ[0]);
  if (!pre) throw WitnessError("final formula is not a prenex existential formula");
  Witnesser w(q);
  WitnessOutcome o = w.wit(q.lines.size() - 1, w.extend(a));
  Assignment out;
  for (const auto& v : pre->vars) {
    auto it = o.witness.find(v);
    out[v] = it != o.witness.end() && it->second;
  }
  return out;
}

}  // namespace glstar
