#include "glstar/formula.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <unordered_map>

namespace glstar {

class FormulaNode {
 public:
  Kind kind;
  std::string name;
  Formula l, r;
  std::uint64_t size = 1;
  Bloom bloom;
  std::size_t hash = 0;
  bool qf = true;
  int sigma = 0, pi = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

struct Key {
  Kind kind;
  std::string name;
  const FormulaNode* l;
  const FormulaNode* r;
  std::size_t hash;
  bool operator==(const Key& o) const {
    return kind == o.kind && l == o.l && r == o.r && name == o.name;
  }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const { return k.hash; }
};

}  // namespace

struct Interner {
  struct Entry {
    std::weak_ptr<const FormulaNode> weak;
    const FormulaNode* raw;
  };
  std::mutex mu;
  std::unordered_map<Key, Entry, KeyHash> table;

  static Interner& get() {
    static Interner* in = new Interner();  // outlives every formula
    return *in;
  }

  static Key key_of(Kind k, const std::string& name, const Formula& l, const Formula& r) {
    std::size_t h = std::hash<int>()(static_cast<int>(k));
    h = mix(h, std::hash<std::string>()(name));
    if (l.valid()) h = mix(h, l.hash());
    if (r.valid()) h = mix(h, r.hash());
    return Key{k, name, l.get(), r.get(), h};
  }

  void release(const FormulaNode* n) {
    {
      std::lock_guard<std::mutex> g(mu);
      Key k = key_of(n->kind, n->name, n->l, n->r);
      auto it = table.find(k);
      if (it != table.end() && it->second.raw == n) table.erase(it);
    }
    delete n;
  }

  Formula make(Kind k, std::string name, const Formula& l, const Formula& r) {
    Key key = key_of(k, name, l, r);
    std::lock_guard<std::mutex> g(mu);
    auto it = table.find(key);
    if (it != table.end()) {
      if (auto sp = it->second.weak.lock()) return Formula(sp);
    }
    auto* n = new FormulaNode();
    n->kind = k;
    n->name = std::move(name);
    n->l = l;
    n->r = r;
    n->hash = key.hash;
    switch (k) {
      case Kind::Top:
      case Kind::Bot:
        break;
      case Kind::Var:
        n->bloom = Bloom::of(n->name);
        break;
      case Kind::Not:
        n->size = 1 + l.size();
        n->bloom = l.bloom();
        n->qf = l.is_quantifier_free();
        n->sigma = l.pi_level();
        n->pi = l.sigma_level();
        break;
      case Kind::And:
      case Kind::Or:
        n->size = 1 + l.size() + r.size();
        n->bloom = l.bloom() | r.bloom();
        n->qf = l.is_quantifier_free() && r.is_quantifier_free();
        n->sigma = std::max(l.sigma_level(), r.sigma_level());
        n->pi = std::max(l.pi_level(), r.pi_level());
        break;
      case Kind::Exists:
        n->size = 1 + l.size();
        n->bloom = l.bloom();
        n->qf = false;
        n->sigma = std::max(1, l.sigma_level());
        n->pi = n->sigma + 1;
        break;
      case Kind::Forall:
        n->size = 1 + l.size();
        n->bloom = l.bloom();
        n->qf = false;
        n->pi = std::max(1, l.pi_level());
        n->sigma = n->pi + 1;
        break;
    }
    std::shared_ptr<const FormulaNode> sp(n, [](const FormulaNode* p) { Interner::get().release(p); });
    Key stored = key;
    table[std::move(stored)] = Entry{sp, n};
    return Formula(sp);
  }
};

Bloom Bloom::of(std::string_view name) {
  std::size_t h = std::hash<std::string_view>()(name);
  Bloom b;
  unsigned b1 = h & 127u, b2 = (h >> 7) & 127u;
  for (unsigned bit : {b1, b2}) {
    if (bit < 64)
      b.lo |= 1ULL << bit;
    else
      b.hi |= 1ULL << (bit - 64);
  }
  return b;
}

Formula Formula::top() {
  static const Formula t = Interner::get().make(Kind::Top, "", {}, {});
  return t;
}
Formula Formula::bot() {
  static const Formula b = Interner::get().make(Kind::Bot, "", {}, {});
  return b;
}
Formula Formula::var(std::string_view name) {
  return Interner::get().make(Kind::Var, std::string(name), {}, {});
}
Formula Formula::neg(const Formula& f) { return Interner::get().make(Kind::Not, "", f, {}); }
Formula Formula::conj(const Formula& l, const Formula& r) {
  return Interner::get().make(Kind::And, "", l, r);
}
Formula Formula::disj(const Formula& l, const Formula& r) {
  return Interner::get().make(Kind::Or, "", l, r);
}
Formula Formula::exists(std::string_view v, const Formula& body) {
  return Interner::get().make(Kind::Exists, std::string(v), body, {});
}
Formula Formula::forall(std::string_view v, const Formula& body) {
  return Interner::get().make(Kind::Forall, std::string(v), body, {});
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

Kind Formula::kind() const { return p_->kind; }
const std::string& Formula::name() const { return p_->name; }
const Formula& Formula::left() const { return p_->l; }
const Formula& Formula::right() const { return p_->r; }
bool Formula::is_quantifier_free() const { return p_->qf; }
std::uint64_t Formula::size() const { return p_->size; }
const Bloom& Formula::bloom() const { return p_->bloom; }
std::size_t Formula::hash() const { return p_->hash; }
int Formula::sigma_level() const { return p_->sigma; }
int Formula::pi_level() const { return p_->pi; }

// ---------------------------------------------------------------- text

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  static const std::set<std::string_view> reserved = {"true",  "false",  "not",   "and",
                                                      "or",    "exists", "forall"};
  return !reserved.count(s);
}

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
 public:
  Parser(std::string_view t, std::size_t pos) : t_(t), pos_(pos) {}

  Formula formula() { return parse({}); }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view t_;
  std::size_t pos_;

  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }

  std::string word() {
    skip();
    std::size_t s = pos_;
    while (pos_ < t_.size() && ident_char(t_[pos_])) ++pos_;
    if (s == pos_) {
      if (pos_ >= t_.size()) throw ParseError("unexpected end of input", pos_);
      throw ParseError(std::string("unexpected character '") + t_[pos_] + "'", pos_);
    }
    return std::string(t_.substr(s, pos_ - s));
  }

  void expect(char c) {
    skip();
    if (pos_ >= t_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
    if (t_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "' but found '" + t_[pos_] + "'", pos_);
    ++pos_;
  }

  Formula parse(const std::vector<std::string>& bound) {
    skip();
    if (pos_ >= t_.size()) throw ParseError("unexpected end of input", pos_);
    if (t_[pos_] != '(') {
      std::size_t at = pos_;
      std::string w = word();
      if (w == "true") return Formula::top();
      if (w == "false") return Formula::bot();
      if (!is_identifier(w)) throw ParseError("reserved word '" + w + "' used as variable", at);
      return Formula::var(w);
    }
    ++pos_;
    std::size_t at = pos_;
    std::string op = word();
    Formula out;
    if (op == "not") {
      out = Formula::neg(parse(bound));
    } else if (op == "and" || op == "or") {
      Formula a = parse(bound);
      Formula b = parse(bound);
      out = op == "and" ? Formula::conj(a, b) : Formula::disj(a, b);
    } else if (op == "exists" || op == "forall") {
      std::size_t vat = pos_;
      std::string v = word();
      if (!is_identifier(v)) throw ParseError("bad bound variable '" + v + "'", vat);
      if (std::find(bound.begin(), bound.end(), v) != bound.end())
        throw ParseError("variable '" + v + "' shadows an enclosing binder", vat);
      auto inner = bound;
      inner.push_back(v);
      Formula b = parse(inner);
      out = op == "exists" ? Formula::exists(v, b) : Formula::forall(v, b);
    } else {
      throw ParseError("unknown connective '" + op + "'", at);
    }
    expect(')');
    return out;
  }
};

void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Top:
      out += "true";
      return;
    case Kind::Bot:
      out += "false";
      return;
    case Kind::Var:
      out += f.name();
      return;
    case Kind::Not:
      out += "(not ";
      print(f.child(), out);
      out += ')';
      return;
    case Kind::And:
    case Kind::Or:
      out += f.kind() == Kind::And ? "(and " : "(or ";
      print(f.left(), out);
      out += ' ';
      print(f.right(), out);
      out += ')';
      return;
    case Kind::Exists:
    case Kind::Forall:
      out += f.kind() == Kind::Exists ? "(exists " : "(forall ";
      out += f.name();
      out += ' ';
      print(f.body(), out);
      out += ')';
      return;
  }
}

}  // namespace

Formula parse_formula_at(std::string_view text, std::size_t& pos) {
  Parser p(text, pos);
  Formula f = p.formula();
  pos = p.pos();
  return f;
}

Formula parse_formula(std::string_view text) {
  std::size_t pos = 0;
  Formula f = parse_formula_at(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw ParseError("trailing input", pos);
  return f;
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

Sequent parse_sequent(std::string_view text) {
  Sequent s;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto side = [&](std::vector<Formula>& out, bool stop_at_turnstile) {
    skip();
    if (pos >= text.size()) return;
    if (stop_at_turnstile && text.substr(pos, 2) == "|-") return;
    while (true) {
      out.push_back(parse_formula_at(text, pos));
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      return;
    }
  };
  side(s.ante, true);
  skip();
  if (text.substr(pos, 2) != "|-") throw ParseError("expected '|-'", pos);
  pos += 2;
  side(s.succ, false);
  skip();
  if (pos != text.size()) throw ParseError("trailing input in sequent", pos);
  return s;
}

std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.ante.size(); ++i) {
    if (i) out += ", ";
    print(s.ante[i], out);
  }
  out += s.ante.empty() ? "|-" : " |-";
  for (std::size_t i = 0; i < s.succ.size(); ++i) {
    out += i ? ", " : " ";
    print(s.succ[i], out);
  }
  return out;
}

// ---------------------------------------------------------------- classes

QuantClass classify(const Formula& f) {
  int s = f.sigma_level(), p = f.pi_level();
  if (s <= p) return QuantClass::SigmaQ(s);
  return QuantClass::PiQ(p);
}

std::string to_string(const QuantClass& q) {
  return (q.sigma ? "SigmaQ(" : "PiQ(") + std::to_string(q.level) + ")";
}

// ---------------------------------------------------------------- variables

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  if (f.bloom().lo == 0 && f.bloom().hi == 0) return;
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return;
    case Kind::Var:
      if (std::find(bound.begin(), bound.end(), f.name()) == bound.end()) out.insert(f.name());
      return;
    case Kind::Not:
      collect_free(f.child(), bound, out);
      return;
    case Kind::And:
    case Kind::Or:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case Kind::Exists:
    case Kind::Forall:
      bound.push_back(f.name());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
  }
}

bool occurs_free_impl(const Formula& f, std::string_view v, const Bloom& bv) {
  if (!f.bloom().may_contain(bv)) return false;
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
      return false;
    case Kind::Var:
      return f.name() == v;
    case Kind::Not:
      return occurs_free_impl(f.child(), v, bv);
    case Kind::And:
    case Kind::Or:
      return occurs_free_impl(f.left(), v, bv) || occurs_free_impl(f.right(), v, bv);
    case Kind::Exists:
    case Kind::Forall:
      if (f.name() == v) return false;
      return occurs_free_impl(f.body(), v, bv);
  }
  return false;
}

void collect_bound(const Formula& f, std::set<std::string>& out) {
  if (f.is_quantifier_free()) return;
  switch (f.kind()) {
    case Kind::Not:
      collect_bound(f.child(), out);
      return;
    case Kind::And:
    case Kind::Or:
      collect_bound(f.left(), out);
      collect_bound(f.right(), out);
      return;
    case Kind::Exists:
    case Kind::Forall:
      out.insert(f.name());
      collect_bound(f.body(), out);
      return;
    default:
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> free_vars(const Sequent& s) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  for (const auto& f : s.ante) collect_free(f, bound, out);
  for (const auto& f : s.succ) collect_free(f, bound, out);
  return out;
}

bool occurs_free(const Formula& f, std::string_view v) {
  return occurs_free_impl(f, v, Bloom::of(v));
}

std::set<std::string> bound_vars(const Formula& f) {
  std::set<std::string> out;
  collect_bound(f, out);
  return out;
}

// ---------------------------------------------------------------- evaluation

bool eval0(const Assignment& a, const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
    case Kind::Var: {
      auto it = a.find(f.name());
      if (it == a.end()) throw DomainError("assignment does not cover variable '" + f.name() + "'");
      return it->second;
    }
    case Kind::Not:
      return !eval0(a, f.child());
    case Kind::And:
      return eval0(a, f.left()) && eval0(a, f.right());
    case Kind::Or:
      return eval0(a, f.left()) || eval0(a, f.right());
    case Kind::Exists:
    case Kind::Forall:
      throw ClassError("eval0 applied to a quantified formula");
  }
  return false;
}

std::optional<Prenex> split_prenex_exists(const Formula& f) {
  Prenex p;
  Formula cur = f;
  while (cur.kind() == Kind::Exists) {
    p.vars.push_back(cur.name());
    cur = cur.body();
  }
  if (!cur.is_quantifier_free()) return std::nullopt;
  p.matrix = cur;
  return p;
}

Eval1Result eval1(const Assignment& a, const Formula& f) {
  auto pre = split_prenex_exists(f);
  if (!pre) throw ClassError("eval1 needs a prenex existential formula");
  const auto& vars = pre->vars;
  if (vars.size() > static_cast<std::size_t>(kEval1Cap))
    throw DomainError("eval1 search cap of " + std::to_string(kEval1Cap) + " quantified variables exceeded");
  Assignment work = a;
  const std::uint64_t total = 1ULL << vars.size();
  for (std::uint64_t m = 0; m < total; ++m) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      work[vars[i]] = (m >> (vars.size() - 1 - i)) & 1ULL;
    if (eval0(work, pre->matrix)) {
      Eval1Result r{true, {}};
      for (const auto& v : vars) r.witness[v] = work[v];
      return r;
    }
  }
  return {false, {}};
}

bool eval_sequent(const Assignment& a, const Sequent& s) {
  auto value = [&](const Formula& f) {
    return f.is_quantifier_free() ? eval0(a, f) : eval1(a, f).value;
  };
  for (const auto& f : s.ante)
    if (!value(f)) return true;
  for (const auto& f : s.succ)
    if (value(f)) return true;
  return false;
}

// ---------------------------------------------------------------- substitution

namespace {

struct Substituter {
  std::string_view v;
  Bloom bv;
  Formula b;
  std::set<std::string> fvb;
  std::unordered_map<const FormulaNode*, Formula> memo;

  Formula run(const Formula& f) {
    if (!f.bloom().may_contain(bv)) return f;
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    Formula out = f;
    switch (f.kind()) {
      case Kind::Top:
      case Kind::Bot:
        break;
      case Kind::Var:
        if (f.name() == v) out = b;
        break;
      case Kind::Not: {
        Formula c = run(f.child());
        if (c != f.child()) out = Formula::neg(c);
        break;
      }
      case Kind::And:
      case Kind::Or: {
        Formula l = run(f.left()), r = run(f.right());
        if (l != f.left() || r != f.right())
          out = f.kind() == Kind::And ? Formula::conj(l, r) : Formula::disj(l, r);
        break;
      }
      case Kind::Exists:
      case Kind::Forall: {
        if (f.name() == v) break;
        Formula c = run(f.body());
        if (c != f.body()) {
          if (fvb.count(f.name()))
            throw CaptureError("substituting for '" + std::string(v) + "' would capture '" + f.name() + "'");
          out = f.kind() == Kind::Exists ? Formula::exists(f.name(), c) : Formula::forall(f.name(), c);
        }
        break;
      }
    }
    memo.emplace(f.get(), out);
    return out;
  }
};

}  // namespace

Formula substitute(const Formula& f, std::string_view v, const Formula& b) {
  if (!b.is_quantifier_free()) throw ClassError("substituted formula must be quantifier-free");
  Substituter s{v, Bloom::of(v), b, free_vars(b), {}};
  return s.run(f);
}

}  // namespace glstar
