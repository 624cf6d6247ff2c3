#include "glstar/arith.hpp"

#include <cctype>
#include <functional>
#include <limits>

namespace glstar::arith {

// ---------------------------------------------------------------- terms

namespace {

Term make_term(TermKind k, std::uint64_t v = 0, std::string name = {}, Term l = {}, Term r = {}) {
  auto n = std::make_shared<TermNode>();
  n->kind = k;
  n->value = v;
  n->name = std::move(name);
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw DomainError("arithmetic overflow");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("arithmetic overflow");
  return r;
}

}  // namespace

Term zero() { return make_term(TermKind::Zero); }
Term one() { return make_term(TermKind::One); }
Term num(std::uint64_t n) {
  if (n == 0) return zero();
  if (n == 1) return one();
  return make_term(TermKind::Num, n);
}
Term var(std::string name) { return make_term(TermKind::Var, 0, std::move(name)); }
Term len(std::string name) { return make_term(TermKind::Len, 0, std::move(name)); }
Term add(Term a, Term b) { return make_term(TermKind::Add, 0, {}, std::move(a), std::move(b)); }
Term mul(Term a, Term b) { return make_term(TermKind::Mul, 0, {}, std::move(a), std::move(b)); }

Term pair(Term s, Term t) {
  Term sum = add(s, t);
  return add(mul(sum, add(sum, one())), mul(num(2), t));
}

Term triple(Term w, Term s, Term t) { return pair(std::move(w), pair(std::move(s), std::move(t))); }

std::uint64_t pair_value(std::uint64_t i, std::uint64_t j) {
  std::uint64_t s = checked_add(i, j);
  return checked_add(checked_mul(s, checked_add(s, 1)), checked_mul(2, j));
}

std::uint64_t triple_value(std::uint64_t w, std::uint64_t i, std::uint64_t j) {
  return pair_value(w, pair_value(i, j));
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> unpair(std::uint64_t c) {
  std::uint64_t s = 0;
  while ((s + 1) * (s + 2) <= c) ++s;
  std::uint64_t rest = c - s * (s + 1);
  if (rest % 2 != 0 || rest / 2 > s) return std::nullopt;
  std::uint64_t j = rest / 2;
  return std::make_pair(s - j, j);
}

std::optional<std::array<std::uint64_t, 3>> untriple(std::uint64_t c) {
  auto outer = unpair(c);
  if (!outer) return std::nullopt;
  auto inner = unpair(outer->second);
  if (!inner) return std::nullopt;
  return std::array<std::uint64_t, 3>{outer->first, inner->first, inner->second};
}

std::uint64_t val(const Term& t, const SizeContext& ctx) {
  switch (t->kind) {
    case TermKind::Zero:
      return 0;
    case TermKind::One:
      return 1;
    case TermKind::Num:
      return t->value;
    case TermKind::Var: {
      auto it = ctx.num.find(t->name);
      if (it == ctx.num.end()) throw DomainError("no value for number variable '" + t->name + "'");
      return it->second;
    }
    case TermKind::Len: {
      auto it = ctx.size.find(t->name);
      if (it == ctx.size.end()) throw DomainError("no size for string variable '" + t->name + "'");
      return it->second;
    }
    case TermKind::Add:
      return checked_add(val(t->left, ctx), val(t->right, ctx));
    case TermKind::Mul:
      return checked_mul(val(t->left, ctx), val(t->right, ctx));
  }
  return 0;
}

// ---------------------------------------------------------------- formulas

namespace {

AFormula make(FKind k) {
  auto n = std::make_shared<FNode>();
  n->kind = k;
  return n;
}

AFormula quant(FKind k, bool exists, bool strict, std::string y, Term t, AFormula body) {
  auto n = std::make_shared<FNode>();
  n->kind = k;
  n->exists = exists;
  n->strict = strict;
  n->name = std::move(y);
  n->t = std::move(t);
  n->left = std::move(body);
  return n;
}

}  // namespace

AFormula top() { return make(FKind::Top); }
AFormula bot() { return make(FKind::Bot); }

AFormula eq(Term s, Term t) {
  auto n = std::make_shared<FNode>();
  n->kind = FKind::Eq;
  n->s = std::move(s);
  n->t = std::move(t);
  return n;
}

AFormula lt(Term s, Term t) {
  auto n = std::make_shared<FNode>();
  n->kind = FKind::Lt;
  n->s = std::move(s);
  n->t = std::move(t);
  return n;
}

AFormula bit(std::string x, Term t) {
  auto n = std::make_shared<FNode>();
  n->kind = FKind::Bit;
  n->name = std::move(x);
  n->t = std::move(t);
  return n;
}

AFormula neg(AFormula f) {
  auto n = std::make_shared<FNode>();
  n->kind = FKind::Not;
  n->left = std::move(f);
  return n;
}

AFormula conj(AFormula f, AFormula g) {
  auto n = std::make_shared<FNode>();
  n->kind = FKind::And;
  n->left = std::move(f);
  n->right = std::move(g);
  return n;
}

AFormula disj(AFormula f, AFormula g) {
  auto n = std::make_shared<FNode>();
  n->kind = FKind::Or;
  n->left = std::move(f);
  n->right = std::move(g);
  return n;
}

AFormula conj_all(const std::vector<AFormula>& fs) {
  if (fs.empty()) return top();
  AFormula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

AFormula disj_all(const std::vector<AFormula>& fs) {
  if (fs.empty()) return bot();
  AFormula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

AFormula exists_le(std::string y, Term t, AFormula b) { return quant(FKind::NumQuant, true, false, std::move(y), std::move(t), std::move(b)); }
AFormula forall_le(std::string y, Term t, AFormula b) { return quant(FKind::NumQuant, false, false, std::move(y), std::move(t), std::move(b)); }
AFormula exists_lt(std::string y, Term t, AFormula b) { return quant(FKind::NumQuant, true, true, std::move(y), std::move(t), std::move(b)); }
AFormula forall_lt(std::string y, Term t, AFormula b) { return quant(FKind::NumQuant, false, true, std::move(y), std::move(t), std::move(b)); }
AFormula exists_str(std::string y, Term t, AFormula b) { return quant(FKind::StrQuant, true, false, std::move(y), std::move(t), std::move(b)); }
AFormula forall_str(std::string y, Term t, AFormula b) { return quant(FKind::StrQuant, false, false, std::move(y), std::move(t), std::move(b)); }

// ---------------------------------------------------------------- models

void FiniteModel::set_string(const std::string& x, std::uint64_t n, std::vector<bool> low_bits) {
  ctx.size[x] = n;
  low_bits.resize(n > 0 ? n - 1 : 0, false);
  bits[x] = std::move(low_bits);
}

bool FiniteModel::bit(const std::string& x, std::uint64_t k) const {
  auto sz = ctx.size.find(x);
  if (sz == ctx.size.end()) throw DomainError("no size for string variable '" + x + "'");
  const std::uint64_t n = sz->second;
  if (k >= n) return false;
  if (k + 1 == n) return true;
  auto it = bits.find(x);
  if (it == bits.end() || k >= it->second.size()) throw DomainError("no bits for string variable '" + x + "'");
  return it->second[k];
}

namespace {

bool eval_in(const AFormula& f, FiniteModel& m) {
  switch (f->kind) {
    case FKind::Top:
      return true;
    case FKind::Bot:
      return false;
    case FKind::Eq:
      return val(f->s, m.ctx) == val(f->t, m.ctx);
    case FKind::Lt:
      return val(f->s, m.ctx) < val(f->t, m.ctx);
    case FKind::Bit:
      return m.bit(f->name, val(f->t, m.ctx));
    case FKind::Not:
      return !eval_in(f->left, m);
    case FKind::And:
      return eval_in(f->left, m) && eval_in(f->right, m);
    case FKind::Or:
      return eval_in(f->left, m) || eval_in(f->right, m);
    case FKind::NumQuant: {
      std::uint64_t bound = val(f->t, m.ctx);
      auto saved = m.ctx.num.find(f->name) == m.ctx.num.end() ? std::optional<std::uint64_t>()
                                                              : std::optional<std::uint64_t>(m.ctx.num[f->name]);
      bool result = !f->exists;
      if (!(f->strict && bound == 0)) {
        std::uint64_t hi = f->strict ? bound - 1 : bound;
        for (std::uint64_t y = 0;; ++y) {
          m.ctx.num[f->name] = y;
          if (eval_in(f->left, m) == f->exists) {
            result = f->exists;
            break;
          }
          if (y == hi) break;
        }
      }
      if (saved)
        m.ctx.num[f->name] = *saved;
      else
        m.ctx.num.erase(f->name);
      return result;
    }
    case FKind::StrQuant: {
      std::uint64_t bound = val(f->t, m.ctx);
      if (bound > static_cast<std::uint64_t>(kStringEnumCap) + 1)
        throw DomainError("string quantifier bound too large to enumerate");
      auto saved_size = m.ctx.size.find(f->name) == m.ctx.size.end() ? std::optional<std::uint64_t>()
                                                                      : std::optional<std::uint64_t>(m.ctx.size[f->name]);
      auto saved_bits = m.bits.find(f->name) == m.bits.end() ? std::optional<std::vector<bool>>()
                                                              : std::optional<std::vector<bool>>(m.bits[f->name]);
      bool result = !f->exists;
      for (std::uint64_t n = 0; n <= bound && result != f->exists; ++n) {
        std::uint64_t free_bits = n > 0 ? n - 1 : 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_bits); ++mask) {
          std::vector<bool> low(free_bits);
          for (std::uint64_t k = 0; k < free_bits; ++k) low[k] = (mask >> k) & 1;
          m.set_string(f->name, n, std::move(low));
          if (eval_in(f->left, m) == f->exists) {
            result = f->exists;
            break;
          }
        }
      }
      if (saved_size)
        m.ctx.size[f->name] = *saved_size;
      else
        m.ctx.size.erase(f->name);
      if (saved_bits)
        m.bits[f->name] = *saved_bits;
      else
        m.bits.erase(f->name);
      return result;
    }
  }
  return false;
}

void term_vars(const Term& t, std::set<std::string>& nums, std::set<std::string>& strs) {
  switch (t->kind) {
    case TermKind::Var:
      nums.insert(t->name);
      break;
    case TermKind::Len:
      strs.insert(t->name);
      break;
    case TermKind::Add:
    case TermKind::Mul:
      term_vars(t->left, nums, strs);
      term_vars(t->right, nums, strs);
      break;
    default:
      break;
  }
}

void free_vars_in(const AFormula& f, std::set<std::string>& nums, std::set<std::string>& strs) {
  switch (f->kind) {
    case FKind::Top:
    case FKind::Bot:
      return;
    case FKind::Eq:
    case FKind::Lt:
      term_vars(f->s, nums, strs);
      term_vars(f->t, nums, strs);
      return;
    case FKind::Bit:
      strs.insert(f->name);
      term_vars(f->t, nums, strs);
      return;
    case FKind::Not:
      free_vars_in(f->left, nums, strs);
      return;
    case FKind::And:
    case FKind::Or:
      free_vars_in(f->left, nums, strs);
      free_vars_in(f->right, nums, strs);
      return;
    case FKind::NumQuant:
    case FKind::StrQuant: {
      term_vars(f->t, nums, strs);
      std::set<std::string> bn, bs;
      free_vars_in(f->left, bn, bs);
      (f->kind == FKind::NumQuant ? bn : bs).erase(f->name);
      nums.insert(bn.begin(), bn.end());
      strs.insert(bs.begin(), bs.end());
      return;
    }
  }
}

bool term_has_var(const Term& t, std::string_view y) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == y;
    case TermKind::Add:
    case TermKind::Mul:
      return term_has_var(t->left, y) || term_has_var(t->right, y);
    default:
      return false;
  }
}

Term subst_term(const Term& t, std::string_view y, const Term& r) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == y ? r : t;
    case TermKind::Add:
      return add(subst_term(t->left, y, r), subst_term(t->right, y, r));
    case TermKind::Mul:
      return mul(subst_term(t->left, y, r), subst_term(t->right, y, r));
    default:
      return t;
  }
}

}  // namespace

bool eval_arith(const AFormula& f, const FiniteModel& m) {
  FiniteModel work = m;
  return eval_in(f, work);
}

bool is_sigma0b(const AFormula& f) {
  switch (f->kind) {
    case FKind::StrQuant:
      return false;
    case FKind::Not:
    case FKind::NumQuant:
      return is_sigma0b(f->left);
    case FKind::And:
    case FKind::Or:
      return is_sigma0b(f->left) && is_sigma0b(f->right);
    default:
      return true;
  }
}

bool mentions_string(const AFormula& f, std::string_view x) {
  std::set<std::string> nums, strs;
  free_vars_in(f, nums, strs);
  return strs.count(std::string(x)) > 0;
}

std::set<std::string> free_number_vars(const AFormula& f) {
  std::set<std::string> nums, strs;
  free_vars_in(f, nums, strs);
  return nums;
}

std::set<std::string> free_string_vars(const AFormula& f) {
  std::set<std::string> nums, strs;
  free_vars_in(f, nums, strs);
  return strs;
}

std::set<std::string> all_names(const AFormula& f) {
  std::set<std::string> out;
  std::function<void(const AFormula&)> go = [&](const AFormula& g) {
    std::set<std::string> strs;
    if (g->s) term_vars(g->s, out, strs);
    if (g->t) term_vars(g->t, out, strs);
    out.insert(strs.begin(), strs.end());
    if (!g->name.empty()) out.insert(g->name);
    if (g->left) go(g->left);
    if (g->right) go(g->right);
  };
  go(f);
  return out;
}

AFormula subst_num(const AFormula& f, std::string_view y, const Term& t) {
  switch (f->kind) {
    case FKind::Top:
    case FKind::Bot:
      return f;
    case FKind::Eq:
      return eq(subst_term(f->s, y, t), subst_term(f->t, y, t));
    case FKind::Lt:
      return lt(subst_term(f->s, y, t), subst_term(f->t, y, t));
    case FKind::Bit:
      return bit(f->name, subst_term(f->t, y, t));
    case FKind::Not:
      return neg(subst_num(f->left, y, t));
    case FKind::And:
      return conj(subst_num(f->left, y, t), subst_num(f->right, y, t));
    case FKind::Or:
      return disj(subst_num(f->left, y, t), subst_num(f->right, y, t));
    case FKind::NumQuant:
    case FKind::StrQuant: {
      Term bound = subst_term(f->t, y, t);
      AFormula body = f->left;
      const bool shadows = f->kind == FKind::NumQuant && f->name == y;
      if (!shadows && free_number_vars(body).count(std::string(y))) {
        if (f->kind == FKind::NumQuant && term_has_var(t, f->name))
          throw CaptureError("substituting for '" + std::string(y) + "' would capture '" + f->name + "'");
        body = subst_num(body, y, t);
      }
      return quant(f->kind, f->exists, f->strict, f->name, bound, body);
    }
  }
  return f;
}

// ---------------------------------------------------------------- printing

std::string to_string(const Term& t) {
  switch (t->kind) {
    case TermKind::Zero:
      return "0";
    case TermKind::One:
      return "1";
    case TermKind::Num:
      return std::to_string(t->value);
    case TermKind::Var:
      return t->name;
    case TermKind::Len:
      return "(len " + t->name + ")";
    case TermKind::Add:
      return "(+ " + to_string(t->left) + " " + to_string(t->right) + ")";
    case TermKind::Mul:
      return "(* " + to_string(t->left) + " " + to_string(t->right) + ")";
  }
  return "?";
}

std::string to_string(const AFormula& f) {
  switch (f->kind) {
    case FKind::Top:
      return "true";
    case FKind::Bot:
      return "false";
    case FKind::Eq:
      return "(= " + to_string(f->s) + " " + to_string(f->t) + ")";
    case FKind::Lt:
      return "(< " + to_string(f->s) + " " + to_string(f->t) + ")";
    case FKind::Bit:
      return "(bit " + f->name + " " + to_string(f->t) + ")";
    case FKind::Not:
      return "(not " + to_string(f->left) + ")";
    case FKind::And:
      return "(and " + to_string(f->left) + " " + to_string(f->right) + ")";
    case FKind::Or:
      return "(or " + to_string(f->left) + " " + to_string(f->right) + ")";
    case FKind::NumQuant: {
      std::string op = std::string(f->exists ? "exists" : "forall") + (f->strict ? "lt" : "le");
      return "(" + op + " " + f->name + " " + to_string(f->t) + " " + to_string(f->left) + ")";
    }
    case FKind::StrQuant: {
      std::string op = f->exists ? "existsstr" : "forallstr";
      return "(" + op + " " + f->name + " " + to_string(f->t) + " " + to_string(f->left) + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  AFormula formula() {
    skip();
    if (peek() != '(') {
      std::string a = atom();
      if (a == "true") return top();
      if (a == "false") return bot();
      fail("expected a formula, got '" + a + "'");
    }
    expect('(');
    std::string op = atom();
    AFormula out;
    if (op == "=" || op == "<") {
      Term l = term();
      Term r = term();
      out = op == "=" ? eq(l, r) : lt(l, r);
    } else if (op == "bit") {
      std::string x = atom();
      if (!is_string_var(x)) fail("'" + x + "' is not a string variable");
      std::vector<Term> idx;
      while (skip(), peek() != ')') idx.push_back(term());
      if (idx.size() == 1)
        out = bit(x, idx[0]);
      else if (idx.size() == 2)
        out = bit(x, pair(idx[0], idx[1]));
      else if (idx.size() == 3)
        out = bit(x, triple(idx[0], idx[1], idx[2]));
      else
        fail("bit takes one to three index terms");
    } else if (op == "not") {
      out = neg(formula());
    } else if (op == "and" || op == "or") {
      std::vector<AFormula> parts;
      while (skip(), peek() != ')') parts.push_back(formula());
      if (parts.size() < 2) fail(op + " needs at least two arguments");
      out = op == "and" ? conj_all(parts) : disj_all(parts);
    } else if (op == "existsle" || op == "forallle" || op == "existslt" || op == "foralllt") {
      std::string y = atom();
      if (!is_number_name(y)) fail("'" + y + "' is not a number variable");
      Term t = term();
      AFormula body = formula();
      bool ex = op[0] == 'e';
      bool strict = op.substr(op.size() - 2) == "lt";
      out = ex ? (strict ? exists_lt(y, t, body) : exists_le(y, t, body))
               : (strict ? forall_lt(y, t, body) : forall_le(y, t, body));
    } else if (op == "existsstr" || op == "forallstr") {
      std::string y = atom();
      if (!is_string_var(y)) fail("'" + y + "' is not a string variable");
      Term t = term();
      AFormula body = formula();
      out = op == "existsstr" ? exists_str(y, t, body) : forall_str(y, t, body);
    } else {
      fail("unknown operator '" + op + "'");
    }
    expect(')');
    return out;
  }

  Term term() {
    skip();
    if (peek() != '(') {
      std::string a = atom();
      if (std::isdigit(static_cast<unsigned char>(a[0]))) {
        for (char c : a)
          if (!std::isdigit(static_cast<unsigned char>(c))) fail("bad numeral '" + a + "'");
        try {
          return num(std::stoull(a));
        } catch (const std::out_of_range&) {
          fail("numeral out of range '" + a + "'");
        }
      }
      if (!is_number_name(a)) fail("'" + a + "' is not a number variable");
      return var(a);
    }
    expect('(');
    std::string op = atom();
    Term out;
    if (op == "len") {
      std::string x = atom();
      if (!is_string_var(x)) fail("'" + x + "' is not a string variable");
      out = len(x);
    } else if (op == "+" || op == "*") {
      std::vector<Term> parts;
      while (skip(), peek() != ')') parts.push_back(term());
      if (parts.size() < 2) fail(op + " needs at least two arguments");
      out = parts[0];
      for (std::size_t i = 1; i < parts.size(); ++i) out = op == "+" ? add(out, parts[i]) : mul(out, parts[i]);
    } else if (op == "pair") {
      Term l = term();
      Term r = term();
      out = pair(l, r);
    } else if (op == "triple") {
      Term w = term();
      Term l = term();
      Term r = term();
      out = triple(w, l, r);
    } else {
      fail("unknown term operator '" + op + "'");
    }
    expect(')');
    return out;
  }

  void finish() {
    skip();
    if (pos_ != s_.size()) fail("trailing input");
  }

 private:
  static bool is_number_name(const std::string& a) {
    return !a.empty() && std::islower(static_cast<unsigned char>(a[0])) && is_identifier(a);
  }

  [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, pos_); }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#' && (pos_ == 0 || s_[pos_ - 1] == '\n')) {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string atom() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')')
      ++pos_;
    if (b == pos_) fail("unexpected end of input or parenthesis");
    return std::string(s_.substr(b, pos_ - b));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

AFormula parse_arith(std::string_view text) {
  Parser p(text);
  AFormula f = p.formula();
  p.finish();
  return f;
}

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

// ---------------------------------------------------------------- edge-rec

namespace {

struct Fresh {
  std::set<std::string> used;
  std::string operator()(const std::string& base) {
    std::string cand = base;
    for (int k = 1; used.count(cand); ++k) cand = base + std::to_string(k);
    used.insert(cand);
    return cand;
  }
};

}  // namespace

AFormula adjacency_template(const std::string& x, const EdgeRecNames& names) {
  return bit(x, pair(var(names.i), var(names.j)));
}

std::vector<AFormula> edge_rec_conjuncts(const AFormula& phi, std::uint64_t a, std::uint64_t b,
                                         const EdgeRecNames& names) {
  if (mentions_string(phi, names.z))
    throw std::invalid_argument("edge-rec template must not mention " + names.z);
  if (!is_sigma0b(phi)) throw std::invalid_argument("edge-rec template must be Sigma0^B");
  Fresh fresh;
  fresh.used = all_names(phi);
  fresh.used.insert(names.i);
  fresh.used.insert(names.j);
  fresh.used.insert(names.z);
  const std::string w = fresh("w"), i = fresh("p"), j = fresh("q"), k = fresh("k"), l = fresh("l"), h = fresh("h");

  auto ph = [&](const Term& s, const Term& t) {
    return subst_num(subst_num(phi, names.i, s), names.j, t);
  };
  auto Z = [&](const Term& ww, const Term& ii, const Term& jj) { return bit(names.z, triple(ww, ii, jj)); };
  const Term A = num(a), B = num(b);
  const Term W = var(w), I = var(i), J = var(j), K = var(k), L = var(l), H = var(h);
  const Term W1 = add(W, one());

  std::vector<AFormula> r;
  // rho1
  r.push_back(forall_lt(j, A, disj_all({neg(Z(zero(), zero(), J)), ph(zero(), J), exists_lt(l, J, ph(zero(), L))})));
  // rho2
  r.push_back(forall_le(
      j, A, forall_lt(k, J, disj_all({neg(Z(zero(), zero(), J)), neg(ph(zero(), K)), exists_lt(l, K, ph(zero(), L))}))));
  // rho3
  r.push_back(forall_le(i, A, forall_le(j, A, disj(eq(I, zero()), neg(Z(zero(), I, J))))));
  // rho4, split at j = a
  AFormula pred = exists_le(h, A, Z(W, H, I));
  AFormula rho4a = forall_lt(
      w, B,
      forall_le(i, A, forall_lt(j, A, disj_all({neg(Z(W1, I, J)), pred, neg(ph(I, J)), exists_lt(l, J, ph(I, L))}))));
  AFormula rho4b = forall_lt(w, B, forall_le(i, A, disj_all({neg(Z(W1, I, A)), pred, exists_lt(l, A, ph(I, L))})));
  r.push_back(conj(rho4a, rho4b));
  // rho5
  r.push_back(forall_lt(
      w, B, forall_le(i, A, forall_lt(j, A, disj_all({neg(Z(W1, I, J)), ph(I, J), exists_lt(l, J, ph(I, L))})))));
  // rho6
  r.push_back(forall_lt(
      w, B,
      forall_le(i, A,
                forall_le(j, A,
                          forall_lt(k, J, disj_all({neg(Z(W1, I, J)), neg(ph(I, K)), exists_lt(l, K, ph(I, L))}))))));
  // rho7
  r.push_back(exists_le(i, A, exists_le(j, A, Z(B, I, J))));
  // rho8 over every triple code up to <b,a,a>
  const std::uint64_t T = triple_value(b, a, a);
  std::uint64_t wmax = 0, pmax = 0, imax = 0, jmax = 0;
  while (pair_value(wmax + 1, 0) <= T) ++wmax;
  while (pair_value(0, pmax + 1) <= T) ++pmax;
  while (pair_value(imax + 1, 0) <= pmax) ++imax;
  while (pair_value(0, jmax + 1) <= pmax) ++jmax;
  AFormula out_of_box = disj_all({lt(B, W), lt(A, I), lt(A, J)});
  r.push_back(forall_le(
      w, num(wmax),
      forall_le(i, num(imax),
                forall_le(j, num(jmax), disj_all({lt(triple(B, A, A), triple(W, I, J)), neg(out_of_box), neg(Z(W, I, J))})))));
  return r;
}

AFormula build_edge_rec(const AFormula& phi, std::uint64_t a, std::uint64_t b, const EdgeRecNames& names) {
  return exists_str(names.z, add(one(), triple(num(b), num(a), num(a))), conj_all(edge_rec_conjuncts(phi, a, b, names)));
}

}  // namespace glstar::arith
