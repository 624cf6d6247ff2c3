#include "glstar/bp.hpp"

#include <algorithm>
#include <sstream>

namespace glstar::bp {

using arith::AFormula;
using arith::FKind;

std::uint64_t BranchingProgram::halt() const { return arith::triple_value(b + 1, 0, 0); }

std::uint64_t default_steps(const BranchingProgram& p) {
  std::uint64_t n = p.size();
  return n * n;
}

BpRun bp_run(const BranchingProgram& p, const arith::FiniteModel& m, std::uint64_t steps) {
  BpRun run;
  run.product = p.product;
  run.nodes.push_back(0);
  std::uint64_t u = 0;
  for (std::uint64_t s = 0; s < steps; ++s) {
    auto it = p.labels.find(u);
    if (it == p.labels.end()) throw BpError("node " + std::to_string(u) + " has no label");
    const Label& l = it->second;
    bool v = arith::eval_arith(l.guard, m);
    if (l.on_true == u && l.on_false == u) {
      run.nodes.insert(run.nodes.end(), steps - s, u);
      run.outcomes.insert(run.outcomes.end(), steps - s, v);
      break;
    }
    u = v ? l.on_true : l.on_false;
    run.nodes.push_back(u);
    run.outcomes.push_back(v);
  }
  return run;
}

BranchingProgram bp0(std::uint64_t a, std::uint64_t b, const AFormula& phi, const arith::EdgeRecNames& names) {
  if (!arith::is_sigma0b(phi)) throw BpError("bp0 needs a Sigma0^B template");
  BranchingProgram p;
  p.a = a;
  p.b = b;
  p.inputs = arith::free_string_vars(phi);
  const std::uint64_t halt = p.halt();
  auto next_level = [&](std::uint64_t w, std::uint64_t j) {
    return w == b ? halt : arith::triple_value(w + 1, j, 0);
  };
  for (std::uint64_t w = 0; w <= b; ++w)
    for (std::uint64_t i = 0; i <= a; ++i)
      for (std::uint64_t j = 0; j <= a; ++j) {
        Label l;
        if (j < a) {
          l.guard = arith::subst_num(arith::subst_num(phi, names.i, arith::num(i)), names.j, arith::num(j));
          l.on_true = next_level(w, j);
          l.on_false = arith::triple_value(w, i, j + 1);
        } else {
          l.guard = arith::top();
          l.on_true = next_level(w, j);
          l.on_false = 0;
        }
        p.labels[arith::triple_value(w, i, j)] = l;
      }
  p.labels[halt] = Label{arith::top(), halt, halt};
  return p;
}

namespace {

bool reads_bits(const AFormula& f, const std::string& y) {
  switch (f->kind) {
    case FKind::Bit:
      return f->name == y;
    case FKind::Not:
    case FKind::NumQuant:
      return reads_bits(f->left, y);
    case FKind::StrQuant:
      if (f->name == y) return false;
      if (reads_bits(f->left, y)) throw BpError("guard reads " + y + " under a string quantifier");
      return false;
    case FKind::And:
    case FKind::Or:
      return reads_bits(f->left, y) || reads_bits(f->right, y);
    default:
      return false;
  }
}

bool is_atom_of(const AFormula& f, const std::string& y) { return f->kind == FKind::Bit && f->name == y; }

std::uint64_t closed_value(const arith::Term& t) {
  try {
    return arith::val(t, {});
  } catch (const DomainError&) {
    throw BpError("term " + arith::to_string(t) + " is not closed");
  }
}

std::uint64_t fresh_start(const BranchingProgram& p) {
  std::uint64_t m = 0;
  for (const auto& [u, l] : p.labels) m = std::max({m, u, l.on_true, l.on_false});
  return m + 1;
}

}  // namespace

BranchingProgram bp_simplify(const BranchingProgram& p, const std::string& y) {
  BranchingProgram out = p;
  std::uint64_t next = fresh_start(p);
  std::vector<std::uint64_t> work;
  for (const auto& [u, l] : p.labels) work.push_back(u);
  while (!work.empty()) {
    const std::uint64_t u = work.back();
    work.pop_back();
    const Label l = out.labels.at(u);
    const AFormula& g = l.guard;
    if (!reads_bits(g, y) || is_atom_of(g, y)) continue;
    switch (g->kind) {
      case FKind::Not:
        out.labels[u] = Label{g->left, l.on_false, l.on_true};
        work.push_back(u);
        break;
      case FKind::And:
      case FKind::Or: {
        const std::uint64_t v = next++;
        if (g->kind == FKind::And) {
          out.labels[u] = Label{g->left, v, l.on_false};
        } else {
          out.labels[u] = Label{g->left, l.on_true, v};
        }
        out.labels[v] = Label{g->right, l.on_true, l.on_false};
        work.push_back(u);
        work.push_back(v);
        break;
      }
      case FKind::NumQuant: {
        const std::uint64_t bound = closed_value(g->t);
        if (g->strict && bound == 0) {
          out.labels[u] = Label{g->exists ? arith::bot() : arith::top(), l.on_true, l.on_false};
          break;
        }
        const std::uint64_t hi = g->strict ? bound - 1 : bound;
        // one test per instance: exists stops at the first true one, forall at the first false one
        std::uint64_t cur = u;
        for (std::uint64_t k = 0; k <= hi; ++k) {
          const std::uint64_t after = k == hi ? (g->exists ? l.on_false : l.on_true) : next++;
          Label step{arith::subst_num(g->left, g->name, arith::num(k)), 0, 0};
          step.on_true = g->exists ? l.on_true : after;
          step.on_false = g->exists ? after : l.on_false;
          out.labels[cur] = step;
          work.push_back(cur);
          cur = after;
        }
        break;
      }
      default:
        throw BpError("cannot simplify guard " + arith::to_string(g));
    }
  }
  return out;
}

BranchingProgram bp_compose(const BranchingProgram& bpn, const BranchingProgram& bp, const std::string& y) {
  if (bp.product) throw BpError("signature mismatch: the inner program is itself a composition");
  if (bpn.product) throw BpError("signature mismatch: the outer program is a composition");
  if (bp.inputs.count(y)) throw BpError("signature mismatch: the inner program reads " + y);
  const std::uint64_t halt = bp.halt();
  std::map<std::uint64_t, std::uint64_t> level;
  for (const auto& [u2, l2] : bp.labels) {
    if (u2 == halt) {
      level[u2] = bp.b + 1;
      continue;
    }
    auto t = arith::untriple(u2);
    if (!t || (*t)[0] > bp.b || (*t)[1] > bp.a || (*t)[2] > bp.a)
      throw BpError("signature mismatch: inner node " + std::to_string(u2) + " is not a grid node");
    level[u2] = (*t)[0];
  }

  BranchingProgram out;
  out.product = true;
  out.a = bpn.a;
  out.b = bpn.b;
  out.inputs = bp.inputs;
  for (const auto& x : bpn.inputs)
    if (x != y) out.inputs.insert(x);
  auto P = [](std::uint64_t u1, std::uint64_t u2) { return arith::pair_value(u1, u2); };

  for (const auto& [u1, l] : bpn.labels) {
    const AFormula& g = l.guard;
    if (!reads_bits(g, y)) {
      out.labels[P(u1, 0)] = Label{g, P(l.on_true, 0), P(l.on_false, 0)};
      continue;
    }
    if (!is_atom_of(g, y))
      throw BpError("signature mismatch: guard at node " + std::to_string(u1) + " is not a single " + y + " atom");
    const std::uint64_t code = closed_value(g->t);
    auto t = arith::untriple(code);
    if (!t || (*t)[0] > bp.b || (*t)[1] > bp.a || (*t)[2] > bp.a) {
      out.labels[P(u1, 0)] = Label{arith::top(), P(l.on_false, 0), P(l.on_false, 0)};
      continue;
    }
    const std::uint64_t w = (*t)[0];
    for (const auto& [u2, l2] : bp.labels) {
      if (u2 == code) {
        out.labels[P(u1, u2)] = Label{l2.guard, P(l.on_true, 0), P(l.on_false, 0)};
      } else if (level.at(u2) <= w) {
        out.labels[P(u1, u2)] = Label{l2.guard, P(u1, l2.on_true), P(u1, l2.on_false)};
      } else {
        out.labels[P(u1, u2)] = Label{arith::top(), P(l.on_false, 0), P(l.on_false, 0)};
      }
    }
  }
  return out;
}

std::set<std::uint64_t> extract_path(const BpRun& run, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t halt = arith::triple_value(b + 1, 0, 0);
  auto level_of = [&](std::uint64_t u) -> std::optional<std::uint64_t> {
    if (u == halt) return b + 1;
    auto t = arith::untriple(u);
    if (!t || (*t)[0] > b || (*t)[1] > a || (*t)[2] > a) return std::nullopt;
    return (*t)[0];
  };
  std::vector<std::uint64_t> seq;
  for (std::uint64_t node : run.nodes) {
    std::uint64_t u = node;
    if (run.product) {
      auto pr = arith::unpair(node);
      if (!pr) continue;
      u = pr->first;
    }
    if (!level_of(u)) continue;
    if (seq.empty() || seq.back() != u) seq.push_back(u);
  }
  std::set<std::uint64_t> out;
  bool done = false;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    const std::uint64_t u = seq[k];
    if (u == halt) break;
    const std::uint64_t w = *level_of(u);
    if (*level_of(seq[k + 1]) == w + 1) {
      out.insert(u);
      if (w == b) done = true;
    }
  }
  if (!done) throw BpError("incomplete run: no edge was taken at level " + std::to_string(b));
  return out;
}

void set_bits(arith::FiniteModel& m, const std::string& x, const std::set<std::uint64_t>& ones) {
  const std::uint64_t n = ones.empty() ? 0 : *ones.rbegin() + 1;
  std::vector<bool> low(n > 0 ? n - 1 : 0);
  for (auto k : ones)
    if (k + 1 < n) low[k] = true;
  m.set_string(x, n, std::move(low));
}

arith::FiniteModel graph_model(const std::vector<std::vector<bool>>& adj, std::uint64_t a, const std::string& x) {
  if (adj.size() > a + 1) throw BpError("graph has more than a+1 nodes");
  const std::uint64_t n = arith::pair_value(a, a) + 2;
  std::vector<bool> low(n - 1);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (adj[i].size() != adj.size()) throw BpError("adjacency matrix is not square");
    for (std::size_t j = 0; j < adj[i].size(); ++j) low[arith::pair_value(i, j)] = adj[i][j];
  }
  arith::FiniteModel m;
  m.set_string(x, n, std::move(low));
  return m;
}

// ---------------------------------------------------------------- text

std::string to_string(const BranchingProgram& p) {
  std::ostringstream os;
  os << kBpHeader << "\n";
  os << "grid " << p.a << " " << p.b << "\n";
  if (p.product) os << "product\n";
  os << "inputs";
  for (const auto& x : p.inputs) os << " " << x;
  os << "\n";
  for (const auto& [u, l] : p.labels) os << u << " " << l.on_true << " " << l.on_false << " " << arith::to_string(l.guard) << "\n";
  return os.str();
}

namespace {

std::vector<std::string> lines_of(std::string_view text, std::string_view header, const char* what) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  std::string line;
  bool seen_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!seen_header) {
      if (line.empty()) continue;
      if (line != header) throw BpError(std::string("missing ") + what + " header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line.substr(first));
  }
  if (!seen_header) throw BpError(std::string("missing ") + what + " header '" + std::string(header) + "'");
  return out;
}

std::uint64_t number(const std::string& s, std::size_t lineno) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw BpError("line " + std::to_string(lineno) + ": expected a number, got '" + s + "'");
  return std::stoull(s);
}

}  // namespace

BranchingProgram parse_bp(std::string_view text) {
  BranchingProgram p;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(text, kBpHeader, "branching program")) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "grid") {
      std::string a, b;
      ls >> a >> b;
      p.a = number(a, lineno);
      p.b = number(b, lineno);
    } else if (head == "product") {
      p.product = true;
    } else if (head == "inputs") {
      std::string x;
      while (ls >> x) p.inputs.insert(x);
    } else {
      std::string t, f;
      ls >> t >> f;
      Label l;
      const std::uint64_t u = number(head, lineno);
      l.on_true = number(t, lineno);
      l.on_false = number(f, lineno);
      std::string rest;
      std::getline(ls, rest);
      try {
        l.guard = arith::parse_arith(rest);
      } catch (const ParseError& e) {
        throw BpError("line " + std::to_string(lineno) + ": " + e.what());
      }
      if (!p.labels.emplace(u, l).second) throw BpError("line " + std::to_string(lineno) + ": duplicate node");
    }
  }
  if (!p.labels.count(0)) throw BpError("node 0 has no label");
  return p;
}

std::vector<std::vector<bool>> parse_graph(std::string_view text) {
  std::vector<std::vector<bool>> adj;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(text, kGraphHeader, "graph")) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<bool> row;
    std::string tok;
    while (ls >> tok) {
      if (tok != "0" && tok != "1") throw BpError("line " + std::to_string(lineno) + ": entries must be 0 or 1");
      row.push_back(tok == "1");
    }
    adj.push_back(std::move(row));
  }
  for (const auto& row : adj)
    if (row.size() != adj.size()) throw BpError("adjacency matrix is not square");
  return adj;
}

}  // namespace glstar::bp
