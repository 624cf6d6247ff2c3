#include "glstar/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <unordered_map>

#include "glstar/cnf2.hpp"

namespace glstar {

namespace {

struct RuleInfo {
  Rule rule;
  std::string_view name;
  int arity;
};

constexpr RuleInfo kRules[] = {
    {Rule::AxTop, "ax-top", 0},   {Rule::AxBot, "ax-bot", 0},   {Rule::AxVar, "ax-var", 0},
    {Rule::WeakL, "weak-l", 1},   {Rule::WeakR, "weak-r", 1},   {Rule::ContrL, "contr-l", 1},
    {Rule::ContrR, "contr-r", 1}, {Rule::ExchL, "exch-l", 1},   {Rule::ExchR, "exch-r", 1},
    {Rule::NotL, "not-l", 1},     {Rule::NotR, "not-r", 1},     {Rule::AndL, "and-l", 1},
    {Rule::AndR, "and-r", 2},     {Rule::OrL, "or-l", 2},       {Rule::OrR, "or-r", 1},
    {Rule::Cut, "cut", 2},        {Rule::ExL, "ex-l", 1},       {Rule::ExR, "ex-r", 1},
    {Rule::AllL, "all-l", 1},     {Rule::AllR, "all-r", 1},
};

}  // namespace

std::string_view rule_name(Rule r) { return kRules[static_cast<int>(r)].name; }

std::optional<Rule> parse_rule(std::string_view s) {
  for (const auto& ri : kRules)
    if (ri.name == s) return ri.rule;
  return std::nullopt;
}

int rule_arity(Rule r) { return kRules[static_cast<int>(r)].arity; }
bool rule_has_eigenvariable(Rule r) { return r == Rule::ExL || r == Rule::AllR; }
bool rule_has_formula_data(Rule r) { return r == Rule::Cut || r == Rule::ExR || r == Rule::AllL; }

std::string Violation::to_string() const { return "line " + id + " (" + rule + "): " + message; }

// ---------------------------------------------------------------- rule checking

namespace {

using Side = std::vector<Formula>;

std::vector<std::size_t> window_starts(const Side& p, const Side& c, std::size_t kp, std::size_t kc) {
  std::vector<std::size_t> out;
  if (p.size() < kp || c.size() < kc || p.size() - kp != c.size() - kc) return out;
  const std::size_t m = p.size() - kp;
  std::size_t pre = 0;
  while (pre < p.size() && pre < c.size() && p[pre] == c[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < p.size() && suf < c.size() && p[p.size() - 1 - suf] == c[c.size() - 1 - suf]) ++suf;
  std::size_t lo = m > suf ? m - suf : 0;
  std::size_t hi = std::min(pre, m);
  for (std::size_t s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

std::vector<Link> identity_links(int side, std::size_t n) {
  std::vector<Link> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {side, i};
  return out;
}

// Links of a premise side around a window [s, s+kp) replaced by kc formulas.
std::vector<Link> window_links(int side, std::size_t n, std::size_t s, std::size_t kp, std::size_t kc,
                               const std::vector<Link>& window) {
  std::vector<Link> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < s)
      out[i] = {side, i};
    else if (i >= s + kp)
      out[i] = {side, i - kp + kc};
    else
      out[i] = window[i - s];
  }
  return out;
}

RuleCheck fail(std::string msg) {
  RuleCheck r;
  r.message = std::move(msg);
  return r;
}

RuleCheck succeed(std::vector<std::array<std::vector<Link>, 2>> links) {
  RuleCheck r;
  r.ok = true;
  r.match.links = std::move(links);
  return r;
}

bool free_in_sequent(const Sequent& s, const std::string& v) {
  for (const auto& f : s.ante)
    if (occurs_free(f, v)) return true;
  for (const auto& f : s.succ)
    if (occurs_free(f, v)) return true;
  return false;
}

// One-premise rule acting on a window of one side, other side unchanged.
template <class Pred>
RuleCheck window_rule(const Sequent& p, const Sequent& c, int side, std::size_t kp, std::size_t kc,
                      const std::vector<Link>& wmap_rel, Pred ok, const char* what) {
  const Side& ps = side == 0 ? p.ante : p.succ;
  const Side& cs = side == 0 ? c.ante : c.succ;
  const Side& po = side == 0 ? p.succ : p.ante;
  const Side& co = side == 0 ? c.succ : c.ante;
  if (po != co) return fail(std::string(side == 0 ? "succedent" : "antecedent") + " must be unchanged by " + what);
  std::string last_reason;
  for (std::size_t s : window_starts(ps, cs, kp, kc)) {
    std::string reason;
    if (!ok(ps, cs, s, reason)) {
      if (!reason.empty()) last_reason = reason;
      continue;
    }
    std::vector<Link> w;
    for (const Link& l : wmap_rel) w.push_back({side, s + l.pos});
    std::array<std::vector<Link>, 2> links;
    links[side] = window_links(side, ps.size(), s, kp, kc, w);
    links[1 - side] = identity_links(1 - side, po.size());
    return succeed({links});
  }
  if (!last_reason.empty()) return fail(last_reason);
  return fail(std::string("conclusion does not follow by ") + what);
}

RuleCheck check_quantifier(const Inference& inf, const Sequent& p, const Sequent& c) {
  const bool left = inf.rule == Rule::ExL || inf.rule == Rule::AllL;
  const Kind want = (inf.rule == Rule::ExL || inf.rule == Rule::ExR) ? Kind::Exists : Kind::Forall;
  const bool eigen = rule_has_eigenvariable(inf.rule);
  Formula term;
  if (eigen) {
    if (!is_identifier(inf.eigen)) return fail("missing or malformed eigenvariable");
    if (free_in_sequent(c, inf.eigen))
      return fail("eigenvariable '" + inf.eigen + "' occurs free in the conclusion");
    term = Formula::var(inf.eigen);
  } else {
    if (!inf.data.valid()) return fail("missing substituted formula");
    if (!inf.data.is_quantifier_free()) return fail("substituted formula is not quantifier-free");
    term = inf.data;
  }
  return window_rule(
      p, c, left ? 0 : 1, 1, 1, {{0, 0}},
      [&](const Side& ps, const Side& cs, std::size_t s, std::string& reason) {
        const Formula& q = cs[s];
        if (q.kind() != want) return false;
        try {
          return substitute(q.body(), q.name(), term) == ps[s];
        } catch (const CaptureError& e) {
          reason = std::string("substitution captures a variable: ") + e.what();
          return false;
        }
      },
      rule_name(inf.rule).data());
}

// Two-premise rule (and-r, or-l): side `side` has the principal window.
RuleCheck check_branching(const Sequent& p1, const Sequent& p2, const Sequent& c, int side, Kind k,
                          const char* what) {
  const Side& c_main = side == 0 ? c.ante : c.succ;
  const Side& c_other = side == 0 ? c.succ : c.ante;
  const Sequent* ps[2] = {&p1, &p2};
  for (const Sequent* p : ps)
    if ((side == 0 ? p->succ : p->ante) != c_other)
      return fail(std::string("context must be unchanged by ") + what);
  const Side& a = side == 0 ? p1.ante : p1.succ;
  const Side& b = side == 0 ? p2.ante : p2.succ;
  auto sa = window_starts(a, c_main, 1, 1);
  auto sb = window_starts(b, c_main, 1, 1);
  for (std::size_t s : sa) {
    if (std::find(sb.begin(), sb.end(), s) == sb.end()) continue;
    const Formula& q = c_main[s];
    if (q.kind() != k || q.left() != a[s] || q.right() != b[s]) continue;
    std::array<std::vector<Link>, 2> l1, l2;
    l1[side] = window_links(side, a.size(), s, 1, 1, {{side, s}});
    l2[side] = window_links(side, b.size(), s, 1, 1, {{side, s}});
    l1[1 - side] = identity_links(1 - side, c_other.size());
    l2[1 - side] = identity_links(1 - side, c_other.size());
    return succeed({l1, l2});
  }
  return fail(std::string("conclusion does not follow by ") + what);
}

RuleCheck check_cut_order(const Sequent& pa, const Sequent& psu, const Sequent& c, const Formula& a) {
  if (pa.succ != c.succ || psu.ante != c.ante) return RuleCheck{};
  for (std::size_t q1 : window_starts(pa.ante, c.ante, 1, 0)) {
    if (pa.ante[q1] != a) continue;
    for (std::size_t q2 : window_starts(psu.succ, c.succ, 1, 0)) {
      if (psu.succ[q2] != a) continue;
      std::array<std::vector<Link>, 2> la, ls;
      la[0] = window_links(0, pa.ante.size(), q1, 1, 0, {Link{}});
      la[1] = identity_links(1, pa.succ.size());
      ls[0] = identity_links(0, psu.ante.size());
      ls[1] = window_links(1, psu.succ.size(), q2, 1, 0, {Link{}});
      return succeed({la, ls});
    }
  }
  return RuleCheck{};
}

// not-l (side_new = 0): premise succedent loses A, conclusion antecedent gains not A.
RuleCheck check_negation(const Sequent& p, const Sequent& c, int side_new, const char* what) {
  const int side_old = 1 - side_new;
  const Side& p_new = side_new == 0 ? p.ante : p.succ;
  const Side& c_new = side_new == 0 ? c.ante : c.succ;
  const Side& p_old = side_old == 0 ? p.ante : p.succ;
  const Side& c_old = side_old == 0 ? c.ante : c.succ;
  for (std::size_t s : window_starts(p_new, c_new, 0, 1)) {
    if (c_new[s].kind() != Kind::Not) continue;
    const Formula& a = c_new[s].child();
    for (std::size_t q : window_starts(p_old, c_old, 1, 0)) {
      if (p_old[q] != a) continue;
      std::array<std::vector<Link>, 2> l;
      l[side_new] = window_links(side_new, p_new.size(), s, 0, 1, {});
      l[side_old] = window_links(side_old, p_old.size(), q, 1, 0, {{side_new, s}});
      return succeed({l});
    }
  }
  return fail(std::string("conclusion does not follow by ") + what);
}

}  // namespace

RuleCheck check_rule(const Inference& inf, const std::vector<const Sequent*>& premises) {
  if (static_cast<int>(premises.size()) != rule_arity(inf.rule))
    return fail("expected " + std::to_string(rule_arity(inf.rule)) + " premises");
  const Sequent& c = inf.conclusion;
  const Sequent* p = premises.empty() ? nullptr : premises[0];
  auto any = [](const Side&, const Side&, std::size_t, std::string&) { return true; };
  switch (inf.rule) {
    case Rule::AxTop:
      if (c.ante.empty() && c.succ.size() == 1 && c.succ[0].kind() == Kind::Top) return succeed({});
      return fail("initial sequent must be |- true");
    case Rule::AxBot:
      if (c.succ.empty() && c.ante.size() == 1 && c.ante[0].kind() == Kind::Bot) return succeed({});
      return fail("initial sequent must be false |-");
    case Rule::AxVar:
      if (c.ante.size() == 1 && c.succ.size() == 1 && c.ante[0].kind() == Kind::Var && c.ante[0] == c.succ[0])
        return succeed({});
      return fail("initial sequent must be x |- x for a variable x");
    case Rule::WeakL:
    case Rule::WeakR:
      return window_rule(*p, c, inf.rule == Rule::WeakL ? 0 : 1, 0, 1, {}, any, "weakening");
    case Rule::ContrL:
    case Rule::ContrR:
      return window_rule(
          *p, c, inf.rule == Rule::ContrL ? 0 : 1, 2, 1, {{0, 0}, {0, 0}},
          [](const Side& ps, const Side& cs, std::size_t s, std::string&) {
            return ps[s] == ps[s + 1] && ps[s] == cs[s];
          },
          "contraction");
    case Rule::ExchL:
    case Rule::ExchR:
      return window_rule(
          *p, c, inf.rule == Rule::ExchL ? 0 : 1, 2, 2, {{0, 1}, {0, 0}},
          [](const Side& ps, const Side& cs, std::size_t s, std::string&) {
            return ps[s] == cs[s + 1] && ps[s + 1] == cs[s];
          },
          "exchange");
    case Rule::AndL:
    case Rule::OrR: {
      Kind k = inf.rule == Rule::AndL ? Kind::And : Kind::Or;
      return window_rule(
          *p, c, inf.rule == Rule::AndL ? 0 : 1, 2, 1, {{0, 0}, {0, 0}},
          [k](const Side& ps, const Side& cs, std::size_t s, std::string&) {
            return cs[s].kind() == k && cs[s].left() == ps[s] && cs[s].right() == ps[s + 1];
          },
          rule_name(inf.rule).data());
    }
    case Rule::NotL:
      return check_negation(*p, c, 0, "not-l");
    case Rule::NotR:
      return check_negation(*p, c, 1, "not-r");
    case Rule::AndR:
      return check_branching(*premises[0], *premises[1], c, 1, Kind::And, "and-r");
    case Rule::OrL:
      return check_branching(*premises[0], *premises[1], c, 0, Kind::Or, "or-l");
    case Rule::Cut: {
      if (!inf.data.valid()) return fail("missing cut formula");
      RuleCheck r = check_cut_order(*premises[0], *premises[1], c, inf.data);
      if (r.ok) return r;
      r = check_cut_order(*premises[1], *premises[0], c, inf.data);
      if (r.ok) {
        std::swap(r.match.links[0], r.match.links[1]);
        return r;
      }
      return fail("premises do not carry the cut formula in the required positions");
    }
    case Rule::ExL:
    case Rule::ExR:
    case Rule::AllL:
    case Rule::AllR:
      return check_quantifier(inf, *p, c);
  }
  return fail("unknown rule");
}

// ---------------------------------------------------------------- systems

System System::parse(std::string_view s) {
  if (s == "G") return {G, 0};
  if (s == "GL*" || s == "GL") return {GL, 1};
  if (s.size() >= 3 && s.front() == 'G' && s.back() == '*') {
    std::string mid(s.substr(1, s.size() - 2));
    if (!mid.empty() && std::all_of(mid.begin(), mid.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return {Gi, std::stoi(mid)};
  }
  throw std::invalid_argument("unknown proof system '" + std::string(s) + "'");
}

std::string System::name() const {
  switch (kind) {
    case G:
      return "G";
    case Gi:
      return "G" + std::to_string(level) + "*";
    case GL:
      return "GL*";
  }
  return "?";
}

std::set<std::string> parameter_vars(const Proof& p) {
  if (p.lines.empty()) return {};
  return free_vars(p.final_sequent());
}

std::vector<Violation> check_proof(const Proof& p, const System& sys) {
  std::vector<Violation> out;
  if (p.lines.empty()) {
    out.push_back({"-", "-", "empty proof"});
    return out;
  }
  const auto params = parameter_vars(p);
  std::vector<int> uses(p.lines.size(), 0);
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const Inference& inf = p.lines[i];
    const std::string rn(rule_name(inf.rule));
    std::vector<const Sequent*> prem;
    bool bad_ref = false;
    for (std::size_t k : inf.premises) {
      if (k >= i) {
        bad_ref = true;
        break;
      }
      ++uses[k];
      prem.push_back(&p.lines[k].conclusion);
    }
    if (bad_ref) {
      out.push_back({inf.id, rn, "premise does not precede its use"});
      continue;
    }
    RuleCheck rc = check_rule(inf, prem);
    if (!rc.ok) out.push_back({inf.id, rn, rc.message});
    if (inf.rule == Rule::Cut && inf.data.valid() && sys.kind != System::G) {
      const Formula& a = inf.data;
      if (sys.kind == System::Gi) {
        if (a.sigma_level() > sys.level)
          out.push_back({inf.id, rn, "cut formula is not in Sigma_" + std::to_string(sys.level) + "^q: " + to_string(a)});
      } else {
        if (!is_sigma_cnf2(a)) {
          out.push_back({inf.id, rn, "GL* cut formula is not SigmaCNF(2): " + to_string(a)});
        } else if (!a.is_quantifier_free()) {
          for (const auto& v : free_vars(a))
            if (!params.count(v))
              out.push_back({inf.id, rn, "GL* cut formula has non-parameter free variable '" + v + "'"});
        }
      }
    }
  }
  if (sys.kind != System::G)
    for (std::size_t i = 0; i < p.lines.size(); ++i)
      if (uses[i] > 1)
        out.push_back({p.lines[i].id, std::string(rule_name(p.lines[i].rule)), "proof is not treelike: line used " + std::to_string(uses[i]) + " times"});
  return out;
}

// ---------------------------------------------------------------- fvnf

std::set<std::string> proof_free_vars(const Proof& p) {
  std::set<std::string> out = parameter_vars(p);
  for (const auto& inf : p.lines) {
    if (rule_has_eigenvariable(inf.rule)) out.insert(inf.eigen);
    if (inf.data.valid()) {
      auto fv = free_vars(inf.data);
      out.insert(fv.begin(), fv.end());
    }
  }
  return out;
}

std::optional<Violation> check_fvnf(const Proof& p) {
  const auto params = parameter_vars(p);
  std::map<std::string, std::size_t> eig;  // variable -> first line
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& inf = p.lines[i];
    if (!rule_has_eigenvariable(inf.rule)) continue;
    const std::string rn(rule_name(inf.rule));
    if (params.count(inf.eigen))
      return Violation{inf.id, rn, "parameter variable '" + inf.eigen + "' used as an eigenvariable"};
    if (eig.count(inf.eigen))
      return Violation{inf.id, rn, "variable '" + inf.eigen + "' used as an eigenvariable more than once"};
    eig[inf.eigen] = i;
  }
  for (const auto& v : proof_free_vars(p))
    if (!params.count(v) && !eig.count(v))
      return Violation{"-", "-", "non-parameter variable '" + v + "' is never an eigenvariable"};
  return std::nullopt;
}

namespace {

std::vector<std::size_t> subtree(const Proof& p, std::size_t root) {
  std::vector<std::size_t> out, stack{root};
  std::vector<bool> seen(p.lines.size(), false);
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (seen[i]) continue;
    seen[i] = true;
    out.push_back(i);
    for (std::size_t k : p.lines[i].premises) stack.push_back(k);
  }
  return out;
}

Sequent map_sequent(const Sequent& s, const std::function<Formula(const Formula&)>& fn) {
  Sequent out;
  for (const auto& f : s.ante) out.ante.push_back(fn(f));
  for (const auto& f : s.succ) out.succ.push_back(fn(f));
  return out;
}

void rename_line(Inference& inf, const std::string& from, const Formula& to) {
  auto fn = [&](const Formula& f) { return substitute(f, from, to); };
  inf.conclusion = map_sequent(inf.conclusion, fn);
  if (inf.data.valid()) inf.data = fn(inf.data);
  if (rule_has_eigenvariable(inf.rule) && inf.eigen == from && to.kind() == Kind::Var) inf.eigen = to.name();
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!taken.count(cand)) return cand;
  }
}

}  // namespace

Proof to_fvnf(const Proof& in) {
  Proof p = in;
  if (p.lines.empty()) return p;
  const auto params = parameter_vars(p);
  std::set<std::string> taken = proof_free_vars(p);
  for (const auto& inf : p.lines)
    for (const auto& f : inf.conclusion.ante) {
      auto b = bound_vars(f);
      taken.insert(b.begin(), b.end());
    }
  std::set<std::string> used = params;
  for (std::size_t i = p.lines.size(); i-- > 0;) {
    Inference& inf = p.lines[i];
    if (!rule_has_eigenvariable(inf.rule)) continue;
    const std::string y = inf.eigen;
    if (!used.count(y)) {
      used.insert(y);
      continue;
    }
    std::string y2 = fresh_name(y, taken);
    taken.insert(y2);
    used.insert(y2);
    Formula to = Formula::var(y2);
    for (std::size_t k : inf.premises)
      for (std::size_t j : subtree(p, k)) rename_line(p.lines[j], y, to);
    inf.eigen = y2;
  }
  // variables free somewhere that are neither parameters nor eigenvariables
  std::set<std::string> orphans;
  for (const auto& v : proof_free_vars(p))
    if (!used.count(v)) orphans.insert(v);
  if (orphans.empty()) return p;
  Proof q;
  std::vector<std::size_t> remap(p.lines.size());
  std::set<std::string> ids;
  for (const auto& inf : p.lines) ids.insert(inf.id);
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    Inference inf = p.lines[i];
    for (auto& k : inf.premises) k = remap[k];
    if (inf.rule == Rule::AxVar && orphans.count(inf.conclusion.ante[0].name())) {
      Inference bot;
      bot.id = fresh_name(inf.id, ids);
      ids.insert(bot.id);
      bot.rule = Rule::AxBot;
      bot.conclusion.ante = {Formula::bot()};
      q.lines.push_back(bot);
      inf.rule = Rule::WeakR;
      inf.premises = {q.lines.size() - 1};
    }
    for (const auto& v : orphans) rename_line(inf, v, Formula::bot());
    remap[i] = q.lines.size();
    q.lines.push_back(std::move(inf));
  }
  return q;
}

// ---------------------------------------------------------------- ancestry

Ancestry compute_ancestry(const Proof& p) {
  Ancestry a;
  a.matches.resize(p.lines.size());
  a.user.assign(p.lines.size(), Ancestry::npos);
  a.user_slot.assign(p.lines.size(), 0);
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& inf = p.lines[i];
    std::vector<const Sequent*> prem;
    for (std::size_t k = 0; k < inf.premises.size(); ++k) {
      prem.push_back(&p.lines[inf.premises[k]].conclusion);
      a.user[inf.premises[k]] = i;
      a.user_slot[inf.premises[k]] = k;
    }
    RuleCheck rc = check_rule(inf, prem);
    if (!rc.ok) throw std::invalid_argument("ancestry needs a rule-correct proof: line " + inf.id + ": " + rc.message);
    a.matches[i] = std::move(rc.match);
  }
  return a;
}

std::vector<Occurrence> ancestors(const Proof& p, const Ancestry& anc, const Occurrence& o) {
  std::vector<Occurrence> out, stack{o};
  while (!stack.empty()) {
    Occurrence cur = stack.back();
    stack.pop_back();
    const auto& inf = p.lines[cur.line];
    for (std::size_t k = 0; k < inf.premises.size(); ++k) {
      const auto& links = anc.matches[cur.line].links[k];
      for (int side = 0; side < 2; ++side)
        for (std::size_t q = 0; q < links[side].size(); ++q) {
          const Link& l = links[side][q];
          if (l.side == cur.side && l.pos == cur.pos) {
            Occurrence up{inf.premises[k], side, q};
            out.push_back(up);
            stack.push_back(up);
          }
        }
    }
  }
  return out;
}

std::optional<Violation> check_subformula_property(const Proof& p) {
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& inf = p.lines[i];
    std::vector<const Sequent*> prem;
    for (std::size_t k : inf.premises) prem.push_back(&p.lines[k].conclusion);
    RuleCheck rc = check_rule(inf, prem);
    const std::string rn(rule_name(inf.rule));
    if (!rc.ok) return Violation{inf.id, rn, rc.message};
    for (std::size_t k = 0; k < prem.size(); ++k)
      for (int side = 0; side < 2; ++side) {
        const auto& fs = side == 0 ? prem[k]->ante : prem[k]->succ;
        const auto& links = rc.match.links[k][side];
        for (std::size_t q = 0; q < fs.size(); ++q) {
          if (q >= links.size()) return Violation{inf.id, rn, "premise occurrence without descendant"};
          if (links[q].side < 0 && !(inf.rule == Rule::Cut && fs[q] == inf.data))
            return Violation{inf.id, rn, "premise occurrence is neither kept nor a cut formula"};
        }
      }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- text format

namespace {

bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'; }

}  // namespace

Proof parse_proof(std::string_view text) {
  Proof p;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header = false;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    auto err = [&](const std::string& m) {
      return ProofTextError("proof line " + std::to_string(line_no) + ": " + m);
    };
    std::size_t pos = 0;
    auto skip = [&] {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    };
    skip();
    if (!header) {
      if (line.substr(pos).rfind(kProofHeader, 0) != 0) throw err("missing header '" + std::string(kProofHeader) + "'");
      header = true;
      if (end == text.size()) break;
      continue;
    }
    if (pos == line.size() || line[pos] == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto token = [&]() {
      skip();
      std::size_t s = pos;
      while (pos < line.size() && id_char(line[pos])) ++pos;
      return std::string(line.substr(s, pos - s));
    };
    Inference inf;
    inf.id = token();
    if (inf.id.empty()) throw err("missing line id");
    if (index.count(inf.id)) throw err("duplicate id '" + inf.id + "'");
    std::string rn = token();
    auto rule = parse_rule(rn);
    if (!rule) throw err("unknown rule '" + rn + "'");
    inf.rule = *rule;
    for (int k = 0; k < rule_arity(inf.rule); ++k) {
      std::string pid = token();
      if (pid.empty()) throw err("missing premise id");
      auto it = index.find(pid);
      if (it == index.end()) throw err("dangling premise id '" + pid + "'");
      inf.premises.push_back(it->second);
    }
    try {
      if (rule_has_eigenvariable(inf.rule)) {
        inf.eigen = token();
        if (!is_identifier(inf.eigen)) throw err("bad eigenvariable '" + inf.eigen + "'");
      } else if (rule_has_formula_data(inf.rule)) {
        inf.data = parse_formula_at(line, pos);
      }
      skip();
      if (line.substr(pos, 2) != "::") throw err("expected '::' before the conclusion");
      pos += 2;
      inf.conclusion = parse_sequent(line.substr(pos));
    } catch (const ParseError& e) {
      throw err(e.what());
    }
    index[inf.id] = p.lines.size();
    p.lines.push_back(std::move(inf));
    if (end == text.size()) break;
  }
  if (!header) throw ProofTextError("missing header '" + std::string(kProofHeader) + "'");
  if (p.lines.empty()) throw ProofTextError("proof has no lines");
  return p;
}

std::string to_string(const Proof& p) {
  std::string out(kProofHeader);
  out += '\n';
  for (const auto& inf : p.lines) {
    out += inf.id;
    out += ' ';
    out += rule_name(inf.rule);
    for (std::size_t k : inf.premises) {
      out += ' ';
      out += p.lines[k].id;
    }
    if (rule_has_eigenvariable(inf.rule)) {
      out += ' ';
      out += inf.eigen;
    } else if (rule_has_formula_data(inf.rule) && inf.data.valid()) {
      out += ' ';
      out += to_string(inf.data);
    }
    out += " :: ";
    out += to_string(inf.conclusion);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- builder

std::size_t ProofBuilder::add(Inference inf) {
  if (inf.id.empty()) inf.id = std::to_string(proof_.lines.size() + 1);
  proof_.lines.push_back(std::move(inf));
  return proof_.lines.size() - 1;
}

namespace {

Inference make(Rule r, std::vector<std::size_t> prem, Sequent c) {
  Inference inf;
  inf.rule = r;
  inf.premises = std::move(prem);
  inf.conclusion = std::move(c);
  return inf;
}

std::vector<Formula>& side_of(Sequent& s, int side) { return side == 0 ? s.ante : s.succ; }

}  // namespace

std::size_t ProofBuilder::ax_top() { return add(make(Rule::AxTop, {}, Sequent{{}, {Formula::top()}})); }
std::size_t ProofBuilder::ax_bot() { return add(make(Rule::AxBot, {}, Sequent{{Formula::bot()}, {}})); }
std::size_t ProofBuilder::ax_var(const std::string& x) {
  Formula v = Formula::var(x);
  return add(make(Rule::AxVar, {}, Sequent{{v}, {v}}));
}

std::size_t ProofBuilder::weaken(std::size_t p, int side, std::size_t pos, const Formula& f) {
  Sequent c = seq(p);
  auto& s = side_of(c, side);
  s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), f);
  return add(make(side == 0 ? Rule::WeakL : Rule::WeakR, {p}, std::move(c)));
}

std::size_t ProofBuilder::contract(std::size_t p, int side, std::size_t pos) {
  Sequent c = seq(p);
  auto& s = side_of(c, side);
  s.erase(s.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
  return add(make(side == 0 ? Rule::ContrL : Rule::ContrR, {p}, std::move(c)));
}

std::size_t ProofBuilder::exchange(std::size_t p, int side, std::size_t pos) {
  Sequent c = seq(p);
  auto& s = side_of(c, side);
  std::swap(s[pos], s[pos + 1]);
  return add(make(side == 0 ? Rule::ExchL : Rule::ExchR, {p}, std::move(c)));
}

std::size_t ProofBuilder::not_l(std::size_t p, std::size_t q, std::size_t s) {
  Sequent c = seq(p);
  Formula a = c.succ[q];
  c.succ.erase(c.succ.begin() + static_cast<std::ptrdiff_t>(q));
  c.ante.insert(c.ante.begin() + static_cast<std::ptrdiff_t>(s), Formula::neg(a));
  return add(make(Rule::NotL, {p}, std::move(c)));
}

std::size_t ProofBuilder::not_r(std::size_t p, std::size_t q, std::size_t s) {
  Sequent c = seq(p);
  Formula a = c.ante[q];
  c.ante.erase(c.ante.begin() + static_cast<std::ptrdiff_t>(q));
  c.succ.insert(c.succ.begin() + static_cast<std::ptrdiff_t>(s), Formula::neg(a));
  return add(make(Rule::NotR, {p}, std::move(c)));
}

std::size_t ProofBuilder::and_l(std::size_t p, std::size_t s) {
  Sequent c = seq(p);
  Formula f = Formula::conj(c.ante[s], c.ante[s + 1]);
  c.ante.erase(c.ante.begin() + static_cast<std::ptrdiff_t>(s) + 1);
  c.ante[s] = f;
  return add(make(Rule::AndL, {p}, std::move(c)));
}

std::size_t ProofBuilder::or_r(std::size_t p, std::size_t s) {
  Sequent c = seq(p);
  Formula f = Formula::disj(c.succ[s], c.succ[s + 1]);
  c.succ.erase(c.succ.begin() + static_cast<std::ptrdiff_t>(s) + 1);
  c.succ[s] = f;
  return add(make(Rule::OrR, {p}, std::move(c)));
}

std::size_t ProofBuilder::and_r(std::size_t p1, std::size_t p2, std::size_t s) {
  Sequent c = seq(p1);
  c.succ[s] = Formula::conj(seq(p1).succ[s], seq(p2).succ[s]);
  return add(make(Rule::AndR, {p1, p2}, std::move(c)));
}

std::size_t ProofBuilder::or_l(std::size_t p1, std::size_t p2, std::size_t s) {
  Sequent c = seq(p1);
  c.ante[s] = Formula::disj(seq(p1).ante[s], seq(p2).ante[s]);
  return add(make(Rule::OrL, {p1, p2}, std::move(c)));
}

std::size_t ProofBuilder::cut(std::size_t p_ante, std::size_t qa, std::size_t p_succ, std::size_t qs) {
  Sequent c = seq(p_ante);
  Formula a = c.ante[qa];
  c.ante.erase(c.ante.begin() + static_cast<std::ptrdiff_t>(qa));
  (void)qs;
  Inference inf = make(Rule::Cut, {p_ante, p_succ}, std::move(c));
  inf.data = a;
  return add(std::move(inf));
}

std::size_t ProofBuilder::ex_l(std::size_t p, std::size_t s, const Formula& principal, const std::string& y) {
  Sequent c = seq(p);
  c.ante[s] = principal;
  Inference inf = make(Rule::ExL, {p}, std::move(c));
  inf.eigen = y;
  return add(std::move(inf));
}

std::size_t ProofBuilder::all_r(std::size_t p, std::size_t s, const Formula& principal, const std::string& y) {
  Sequent c = seq(p);
  c.succ[s] = principal;
  Inference inf = make(Rule::AllR, {p}, std::move(c));
  inf.eigen = y;
  return add(std::move(inf));
}

std::size_t ProofBuilder::ex_r(std::size_t p, std::size_t s, const Formula& principal, const Formula& b) {
  Sequent c = seq(p);
  c.succ[s] = principal;
  Inference inf = make(Rule::ExR, {p}, std::move(c));
  inf.data = b;
  return add(std::move(inf));
}

std::size_t ProofBuilder::all_l(std::size_t p, std::size_t s, const Formula& principal, const Formula& b) {
  Sequent c = seq(p);
  c.ante[s] = principal;
  Inference inf = make(Rule::AllL, {p}, std::move(c));
  inf.data = b;
  return add(std::move(inf));
}

}  // namespace glstar
