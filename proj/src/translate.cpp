#include "glstar/translate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "glstar/cnf2.hpp"

namespace glstar {

using arith::AFormula;
using arith::FKind;
using arith::SizeContext;

std::string bit_var(std::string_view x, std::uint64_t j) { return std::string(x) + "_" + std::to_string(j); }

namespace {

Formula fneg(const Formula& f) {
  if (f.kind() == Kind::Top) return Formula::bot();
  if (f.kind() == Kind::Bot) return Formula::top();
  return Formula::neg(f);
}

Formula fconj(const Formula& l, const Formula& r) {
  if (l.kind() == Kind::Bot || r.kind() == Kind::Bot) return Formula::bot();
  if (l.kind() == Kind::Top) return r;
  if (r.kind() == Kind::Top) return l;
  return Formula::conj(l, r);
}

Formula fdisj(const Formula& l, const Formula& r) {
  if (l.kind() == Kind::Top || r.kind() == Kind::Top) return Formula::top();
  if (l.kind() == Kind::Bot) return r;
  if (r.kind() == Kind::Bot) return l;
  return Formula::disj(l, r);
}

// Overrides the translation of bits of one string variable.
struct BitOverride {
  std::string name;
  std::function<Formula(std::uint64_t)> bit;
};

class Translator {
 public:
  Translator(SizeContext ctx, bool fold, std::optional<BitOverride> over = std::nullopt)
      : ctx_(std::move(ctx)), fold_(fold), over_(std::move(over)) {}

  Formula run(const AFormula& f) {
    switch (f->kind) {
      case FKind::Top:
        return Formula::top();
      case FKind::Bot:
        return Formula::bot();
      case FKind::Eq:
        return arith::val(f->s, ctx_) == arith::val(f->t, ctx_) ? Formula::top() : Formula::bot();
      case FKind::Lt:
        return arith::val(f->s, ctx_) < arith::val(f->t, ctx_) ? Formula::top() : Formula::bot();
      case FKind::Bit:
        return bit(f->name, arith::val(f->t, ctx_));
      case FKind::Not:
        return fold_ ? fneg(run(f->left)) : Formula::neg(run(f->left));
      case FKind::And: {
        Formula l = run(f->left), r = run(f->right);
        return fold_ ? fconj(l, r) : Formula::conj(l, r);
      }
      case FKind::Or: {
        Formula l = run(f->left), r = run(f->right);
        return fold_ ? fdisj(l, r) : Formula::disj(l, r);
      }
      case FKind::NumQuant:
        return number_quantifier(f);
      case FKind::StrQuant:
        return string_quantifier(f);
    }
    return Formula::bot();
  }

 private:
  Formula bit(const std::string& x, std::uint64_t j) {
    if (over_ && over_->name == x) return over_->bit(j);
    auto it = ctx_.size.find(x);
    if (it == ctx_.size.end()) throw DomainError("no size for string variable '" + x + "'");
    const std::uint64_t n = it->second;
    if (n > 0 && j < n - 1) return Formula::var(bit_var(x, j));
    if (n > 0 && j == n - 1) return Formula::top();
    return Formula::bot();
  }

  Formula combine(const std::vector<Formula>& parts, bool exists) const {
    if (!fold_) return exists ? Formula::disj_all(parts) : Formula::conj_all(parts);
    Formula acc = exists ? Formula::bot() : Formula::top();
    for (const auto& p : parts) acc = exists ? fdisj(acc, p) : fconj(acc, p);
    return acc;
  }

  Formula number_quantifier(const AFormula& f) {
    const std::uint64_t bound = arith::val(f->t, ctx_);
    auto found = ctx_.num.find(f->name);
    const bool had = found != ctx_.num.end();
    const std::uint64_t old = had ? found->second : 0;
    std::vector<Formula> parts;
    if (!(f->strict && bound == 0)) {
      const std::uint64_t hi = f->strict ? bound - 1 : bound;
      for (std::uint64_t y = 0;; ++y) {
        ctx_.num[f->name] = y;
        parts.push_back(run(f->left));
        if (y == hi) break;
      }
    }
    if (had)
      ctx_.num[f->name] = old;
    else
      ctx_.num.erase(f->name);
    return combine(parts, f->exists);
  }

  Formula string_quantifier(const AFormula& f) {
    const std::uint64_t bound = arith::val(f->t, ctx_);
    auto found = ctx_.size.find(f->name);
    const bool had = found != ctx_.size.end();
    const std::uint64_t old = had ? found->second : 0;
    std::vector<Formula> parts;
    for (std::uint64_t n = 0; n <= bound; ++n) {
      ctx_.size[f->name] = n;
      Formula body = run(f->left);
      for (std::uint64_t k = n > 1 ? n - 1 : 0; k-- > 0;) {
        std::string v = bit_var(f->name, k);
        body = f->exists ? Formula::exists(v, body) : Formula::forall(v, body);
      }
      parts.push_back(body);
    }
    if (had)
      ctx_.size[f->name] = old;
    else
      ctx_.size.erase(f->name);
    return combine(parts, f->exists);
  }

  SizeContext ctx_;
  bool fold_;
  std::optional<BitOverride> over_;
};

bool in_box(std::uint64_t code, std::uint64_t a, std::uint64_t b) {
  auto t = arith::untriple(code);
  return t && (*t)[0] <= b && (*t)[1] <= a && (*t)[2] <= a;
}

// Folded matrix of edge-rec with Z bit (w,i,j) rendered by zbit for in-box
// positions and false elsewhere.
Formula edge_rec_matrix(const AFormula& phi, std::uint64_t a, std::uint64_t b, const SizeContext& ctx,
                        const std::function<Formula(std::uint64_t)>& zbit) {
  arith::EdgeRecNames names;
  BitOverride over{names.z, [&](std::uint64_t code) { return in_box(code, a, b) ? zbit(code) : Formula::bot(); }};
  Translator tr(edge_rec_context(phi, a, ctx), true, over);
  Formula m = Formula::top();
  for (const auto& c : arith::edge_rec_conjuncts(phi, a, b, names)) m = fconj(m, tr.run(c));
  return m;
}

}  // namespace

Formula translate(const AFormula& phi, const SizeContext& ctx) { return Translator(ctx, false).run(phi); }

Assignment bit_assignment(const arith::FiniteModel& m) {
  Assignment out;
  for (const auto& [x, n] : m.ctx.size)
    for (std::uint64_t k = 0; k + 1 < n; ++k) out[bit_var(x, k)] = m.bit(x, k);
  return out;
}

SizeContext edge_rec_context(const AFormula& phi, std::uint64_t a, const SizeContext& ctx) {
  SizeContext out = ctx;
  for (const auto& x : arith::free_string_vars(phi))
    if (!out.size.count(x)) out.size[x] = arith::pair_value(a, a) + 2;
  return out;
}

std::vector<std::string> edge_rec_box(std::uint64_t a, std::uint64_t b) {
  std::vector<std::uint64_t> codes;
  for (std::uint64_t w = 0; w <= b; ++w)
    for (std::uint64_t i = 0; i <= a; ++i)
      for (std::uint64_t j = 0; j <= a; ++j) codes.push_back(arith::triple_value(w, i, j));
  std::sort(codes.begin(), codes.end());
  std::vector<std::string> out;
  for (auto c : codes) out.push_back(bit_var("Z", c));
  return out;
}

namespace {

Formula close_block(const Formula& matrix, std::uint64_t a, std::uint64_t b) {
  auto fv = free_vars(matrix);
  std::vector<std::string> zs;
  for (const auto& z : edge_rec_box(a, b))
    if (fv.count(z)) zs.push_back(z);
  Formula out = matrix;
  for (auto it = zs.rbegin(); it != zs.rend(); ++it) out = Formula::exists(*it, out);
  return out;
}

}  // namespace

Formula translate_edge_rec(const AFormula& phi, std::uint64_t a, std::uint64_t b, const SizeContext& ctx) {
  Formula m = edge_rec_matrix(phi, a, b, ctx, [](std::uint64_t code) { return Formula::var(bit_var("Z", code)); });
  Formula out = close_block(m, a, b);
  if (!is_sigma_cnf2(out))
    throw std::logic_error("edge-rec translation is not SigmaCNF(2) at a=" + std::to_string(a) +
                           ", b=" + std::to_string(b));
  return out;
}

// ---------------------------------------------------------------- generator

namespace {

std::vector<Formula> or_leaves(const Formula& f) {
  std::vector<Formula> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == Kind::Or) {
      go(g.left());
      go(g.right());
    } else {
      out.push_back(g);
    }
  };
  go(f);
  return out;
}

int index_of(const std::vector<Formula>& v, const Formula& f) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == f) return static_cast<int>(i);
  return -1;
}

template <class T>
std::vector<T> cat(std::vector<T> l, const std::vector<T>& r) {
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

class Generator {
 public:
  Generator(std::uint64_t a, std::uint64_t b, const SizeContext& ctx)
      : a_(a), b_(b), phi_(arith::adjacency_template()), ctx_(edge_rec_context(phi_, a, ctx)) {}

  Proof run() {
    std::size_t line = base();
    for (std::uint64_t k = 0; k < b_; ++k) {
      std::size_t s = stage(k);
      std::size_t w = pb_.weaken(line, 1, 0, target(k + 1));
      line = pb_.cut(s, 0, w, 1);
    }
    return pb_.take();
  }

 private:
  const Formula& target(std::uint64_t k) {
    while (targets_.size() <= k) targets_.push_back(translate_edge_rec(phi_, a_, targets_.size(), ctx_));
    return targets_[k];
  }

  Formula x(std::uint64_t i, std::uint64_t j) {
    AFormula f = arith::subst_num(arith::subst_num(phi_, "i", arith::num(i)), "j", arith::num(j));
    return Translator(ctx_, true).run(f);
  }

  static std::string eigen(std::uint64_t k, std::uint64_t code) { return "e" + std::to_string(k) + "_" + std::to_string(code); }

  // ---- primitive derivations

  std::size_t identity(const Formula& f) {
    switch (f.kind()) {
      case Kind::Var:
        return pb_.ax_var(f.name());
      case Kind::Top:
        return pb_.weaken(pb_.ax_top(), 0, 0, f);
      case Kind::Bot:
        return pb_.weaken(pb_.ax_bot(), 1, 0, f);
      case Kind::Not: {
        std::size_t p = pb_.not_r(identity(f.child()), 0, 1);
        return pb_.not_l(p, 0, 0);
      }
      case Kind::And: {
        std::size_t l = pb_.weaken(identity(f.left()), 0, 1, f.right());
        std::size_t r = pb_.weaken(identity(f.right()), 0, 0, f.left());
        return pb_.and_l(pb_.and_r(l, r, 0), 0);
      }
      case Kind::Or: {
        std::size_t l = pb_.weaken(identity(f.left()), 1, 1, f.right());
        std::size_t r = pb_.weaken(identity(f.right()), 1, 0, f.left());
        return pb_.or_r(pb_.or_l(l, r, 0), 0);
      }
      default:
        throw std::logic_error("identity on a quantified formula");
    }
  }

  // Weakens line up to target; its sides must be subsequences of target's.
  std::size_t fill(std::size_t line, const Sequent& target) {
    for (int side = 0; side < 2; ++side) {
      const auto& want = side == 0 ? target.ante : target.succ;
      std::size_t c = 0;
      for (std::size_t t = 0; t < want.size(); ++t) {
        const auto& have = side == 0 ? pb_.seq(line).ante : pb_.seq(line).succ;
        if (c < have.size() && have[c] == want[t]) {
          ++c;
          continue;
        }
        line = pb_.weaken(line, side, t, want[t]);
        ++c;
      }
      const auto& have = side == 0 ? pb_.seq(line).ante : pb_.seq(line).succ;
      if (have != want) throw std::logic_error("fill: premise is not a subsequence of the target");
    }
    return line;
  }

  // Cut-free derivation of a quantifier-free valid sequent, exactly as given.
  std::size_t prove(const Sequent& s) {
    for (const auto& f : s.succ)
      if (f.kind() == Kind::Top) return fill(pb_.ax_top(), s);
    for (const auto& f : s.ante)
      if (f.kind() == Kind::Bot) return fill(pb_.ax_bot(), s);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& f : s.ante)
        if ((f.kind() == Kind::Var) == (pass == 0) && index_of(s.succ, f) >= 0) return fill(identity(f), s);

    for (std::size_t i = 0; i < s.ante.size(); ++i)
      if (s.ante[i].kind() == Kind::Not) {
        Sequent p = s;
        p.ante.erase(p.ante.begin() + static_cast<std::ptrdiff_t>(i));
        p.succ.push_back(s.ante[i].child());
        return pb_.not_l(prove(p), p.succ.size() - 1, i);
      }
    for (std::size_t i = 0; i < s.succ.size(); ++i)
      if (s.succ[i].kind() == Kind::Not) {
        Sequent p = s;
        p.succ.erase(p.succ.begin() + static_cast<std::ptrdiff_t>(i));
        p.ante.push_back(s.succ[i].child());
        return pb_.not_r(prove(p), p.ante.size() - 1, i);
      }
    for (std::size_t i = 0; i < s.ante.size(); ++i)
      if (s.ante[i].kind() == Kind::And) {
        Sequent p = s;
        p.ante[i] = s.ante[i].left();
        p.ante.insert(p.ante.begin() + static_cast<std::ptrdiff_t>(i) + 1, s.ante[i].right());
        return pb_.and_l(prove(p), i);
      }
    for (std::size_t i = 0; i < s.succ.size(); ++i)
      if (s.succ[i].kind() == Kind::Or) {
        Sequent p = s;
        p.succ[i] = s.succ[i].left();
        p.succ.insert(p.succ.begin() + static_cast<std::ptrdiff_t>(i) + 1, s.succ[i].right());
        return pb_.or_r(prove(p), i);
      }
    for (std::size_t i = 0; i < s.succ.size(); ++i)
      if (s.succ[i].kind() == Kind::And) {
        Sequent l = s, r = s;
        l.succ[i] = s.succ[i].left();
        r.succ[i] = s.succ[i].right();
        std::size_t pl = prove(l);
        return pb_.and_r(pl, prove(r), i);
      }
    for (std::size_t i = 0; i < s.ante.size(); ++i)
      if (s.ante[i].kind() == Kind::Or) {
        Sequent l = s, r = s;
        l.ante[i] = s.ante[i].left();
        r.ante[i] = s.ante[i].right();
        std::size_t pl = prove(l);
        return pb_.or_l(pl, prove(r), i);
      }
    throw std::logic_error("generator: sequent is not valid: " + to_string(s));
  }

  // ---- context formula M: extraction of its conjunction-tree nodes

  void set_context(std::optional<Formula> m) {
    m_ = std::move(m);
    parent_.clear();
    if (!m_) return;
    std::vector<Formula> stack{*m_};
    while (!stack.empty()) {
      Formula f = stack.back();
      stack.pop_back();
      if (f.kind() != Kind::And) continue;
      for (bool left : {true, false}) {
        const Formula& c = left ? f.left() : f.right();
        if (parent_.emplace(c, std::make_pair(f, left)).second) stack.push_back(c);
      }
    }
  }

  // From [n] |- D to [M] |- D.
  std::size_t extract(std::size_t line, Formula n) {
    while (n != *m_) {
      auto [p, left] = parent_.at(n);
      line = left ? pb_.weaken(line, 0, 1, p.right()) : pb_.weaken(line, 0, 0, p.left());
      line = pb_.and_l(line, 0);
      n = p;
    }
    return line;
  }

  // [M] |- [t], or |- [t] without a context.
  std::size_t prove_target(const Formula& t) {
    if (m_ && (t == *m_ || parent_.count(t))) return extract(identity(t), t);
    if (t == t7_) return rho7_();
    if (t.kind() == Kind::And) {
      std::size_t l = prove_target(t.left());
      return pb_.and_r(l, prove_target(t.right()), 0);
    }
    std::size_t line = prove(Sequent{{}, {t}});
    return m_ ? pb_.weaken(line, 0, 0, *m_) : line;
  }

  // Rebuilds the disjunction tree t at succedent position pos from its leaves.
  std::size_t fold_or(std::size_t line, std::size_t pos, const Formula& t) {
    if (t.kind() != Kind::Or) return line;
    line = fold_or(line, pos, t.left());
    line = fold_or(line, pos + 1, t.right());
    return pb_.or_r(line, pos);
  }

  // gamma |- bs[0..a], by cuts on xs[a-1], ..., xs[0]: the first true x of the
  // row selects its B, and B at index a covers the row without any edge.
  std::size_t row(const std::vector<Formula>& gamma, const std::vector<Formula>& bs, const std::vector<Formula>& xs) {
    std::size_t line = prove(Sequent{gamma, cat({bs[a_]}, xs)});
    for (std::uint64_t j = a_; j-- > 0;) {
      std::vector<Formula> later(bs.begin() + static_cast<std::ptrdiff_t>(j), bs.end());
      std::vector<Formula> before(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(j));
      std::size_t l = prove(Sequent{cat(gamma, {xs[j]}), cat(later, before)});
      std::size_t r = pb_.weaken(line, 1, 0, bs[j]);
      line = pb_.cut(l, gamma.size(), r, pb_.seq(r).succ.size() - 1);
    }
    return line;
  }

  std::vector<Formula> row_x(std::uint64_t i) {
    std::vector<Formula> xs;
    for (std::uint64_t j = 0; j < a_; ++j) xs.push_back(x(i, j));
    return xs;
  }

  // conj(head..., x_ij, not x_i0, ..., not x_i,j-1); no x_ij conjunct for j = a.
  Formula first_edge(std::vector<Formula> parts, std::uint64_t i, std::uint64_t j) {
    if (j < a_) parts.push_back(x(i, j));
    for (std::uint64_t l = 0; l < j; ++l) parts.push_back(Formula::neg(x(i, l)));
    return Formula::conj_all(parts);
  }

  // Applies ex-r for every quantifier of e, innermost first, starting from a
  // derivation of its instance under w.
  template <class Core>
  std::size_t introduce_block(const Formula& e, const std::map<std::string, Formula>& w, Core core) {
    std::vector<Formula> q{e};
    while (q.back().kind() == Kind::Exists) {
      const Formula& f = q.back();
      q.push_back(substitute(f.body(), f.name(), w.at(f.name())));
    }
    std::size_t line = core(q.back());
    for (std::size_t k = q.size() - 1; k-- > 0;) line = pb_.ex_r(line, pb_.seq(line).succ.size() - 1, q[k], w.at(q[k].name()));
    return line;
  }

  // |- E_0
  std::size_t base() {
    std::map<std::string, Formula> w;
    std::vector<Formula> bs;
    for (std::uint64_t j = 0; j <= a_; ++j) bs.push_back(first_edge({}, 0, j));
    for (const auto& z : edge_rec_box(a_, 0)) w[z] = Formula::bot();
    for (std::uint64_t j = 0; j <= a_; ++j) w[bit_var("Z", arith::triple_value(0, 0, j))] = bs[j];

    std::vector<Formula> xs = row_x(0);
    rho7_ = [&, bs, xs]() {
      std::size_t line = row({}, bs, xs);
      line = fill(line, Sequent{{}, or_leaves(t7_)});
      return fold_or(line, 0, t7_);
    };
    return introduce_block(target(0), w, [&](const Formula& m) {
      set_context(std::nullopt);
      t7_ = m.right();
      return prove_target(m);
    });
  }

  // E_k |- E_{k+1}
  std::size_t stage(std::uint64_t k) {
    const Formula& ek = target(k);
    std::map<std::string, Formula> eig;  // bound Z bit of E_k -> eigenvariable
    std::map<std::string, std::uint64_t> row_of;
    std::vector<Formula> heads;
    {
      std::vector<Formula> r{ek};
      while (r.back().kind() == Kind::Exists) r.push_back(r.back().body());
      for (std::size_t t = 0; t + 1 < r.size(); ++t) {
        const std::string& z = r[t].name();
        std::uint64_t code = std::stoull(z.substr(2));
        eig[z] = Formula::var(eigen(k, code));
        auto c = arith::untriple(code);
        if ((*c)[0] == k) row_of[eigen(k, code)] = (*c)[2];
      }
    }
    for (std::uint64_t i = 0; i <= a_; ++i) {
      std::vector<Formula> hs;
      for (std::uint64_t h = 0; h <= a_; ++h) hs.push_back(eig.at(bit_var("Z", arith::triple_value(k, h, i))));
      heads.push_back(Formula::disj_all(hs));
    }

    std::map<std::string, Formula> w;
    std::vector<std::vector<Formula>> bs(a_ + 1);
    for (const auto& z : edge_rec_box(a_, k + 1)) {
      std::uint64_t code = std::stoull(z.substr(2));
      auto c = *arith::untriple(code);
      if (c[0] <= k) {
        w[z] = eig.at(z);
      } else {
        w[z] = first_edge({heads[c[1]]}, c[1], c[2]);
      }
    }
    for (std::uint64_t i = 0; i <= a_; ++i)
      for (std::uint64_t j = 0; j <= a_; ++j) bs[i].push_back(w.at(bit_var("Z", arith::triple_value(k + 1, i, j))));

    // the eigenvariable instance of E_k's matrix
    std::vector<Formula> r{ek};
    while (r.back().kind() == Kind::Exists) r.push_back(substitute(r.back().body(), r.back().name(), eig.at(r.back().name())));
    const Formula mk = r.back();

    rho7_ = [&, mk]() {
      const Formula src = mk.right();
      const auto leaves = or_leaves(t7_);
      std::function<std::size_t(const Formula&)> tree = [&](const Formula& d) -> std::size_t {
        if (d.kind() == Kind::Or) {
          std::size_t l = tree(d.left());
          return pb_.or_l(l, tree(d.right()), 0);
        }
        std::uint64_t i = row_of.at(d.name());
        std::size_t line = row({d}, bs[i], row_x(i));
        line = fill(line, Sequent{{d}, leaves});
        return fold_or(line, 0, t7_);
      };
      return extract(tree(src), src);
    };

    std::size_t line = introduce_block(target(k + 1), w, [&](const Formula& m) {
      set_context(mk);
      t7_ = m.right();
      return prove_target(m);
    });
    for (std::size_t t = r.size() - 1; t-- > 0;) line = pb_.ex_l(line, 0, r[t], eig.at(r[t].name()).name());
    return line;
  }

  std::uint64_t a_, b_;
  AFormula phi_;
  SizeContext ctx_;
  ProofBuilder pb_;
  std::vector<Formula> targets_;
  std::optional<Formula> m_;
  std::unordered_map<Formula, std::pair<Formula, bool>> parent_;
  Formula t7_;
  std::function<std::size_t()> rho7_;
};

}  // namespace

Proof gen_edge_rec_proof(std::uint64_t a, std::uint64_t b, const SizeContext& ctx) {
  return Generator(a, b, ctx).run();
}

}  // namespace glstar
