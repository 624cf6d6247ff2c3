#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glstar/arith.hpp"

namespace glstar::bp {

class BpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Label {
  arith::AFormula guard;
  std::uint64_t on_true = 0;
  std::uint64_t on_false = 0;
};

// Nodes are numbers; node 0 is initial. Targets need not be labeled, but a
// run cannot leave an unlabeled node.
struct BranchingProgram {
  std::map<std::uint64_t, Label> labels;
  std::set<std::string> inputs;  // string variables the guards may read
  std::uint64_t a = 0, b = 0;    // grid of the BP_0 program this one derives from
  bool product = false;          // nodes are pair(u1,u2) codes of a composition

  std::size_t size() const { return labels.size(); }
  // triple(b+1,0,0), the self-looping node reached after the level-b edge
  std::uint64_t halt() const;
};

struct BpRun {
  std::vector<std::uint64_t> nodes;  // nodes[0] = 0, one more than outcomes
  std::vector<bool> outcomes;
  bool product = false;
};

std::uint64_t default_steps(const BranchingProgram& p);

// Exactly `steps` steps from node 0, evaluating guards with eval_arith.
BpRun bp_run(const BranchingProgram& p, const arith::FiniteModel& m, std::uint64_t steps);

// Pseudo-path program: node <w,i,j> tests phi(i,j); an edge moves to
// <w+1,j,0>, a miss to <w,i,j+1>; at j=a the pseudo-edge (i,a) is taken.
BranchingProgram bp0(std::uint64_t a, std::uint64_t b, const arith::AFormula& phi,
                     const arith::EdgeRecNames& names = {});

// Rewrites guards until every guard reading a bit of y is a single y-atom.
BranchingProgram bp_simplify(const BranchingProgram& p, const std::string& y);

// Runs bp in the second coordinate to answer each y-atom of bpn.
BranchingProgram bp_compose(const BranchingProgram& bpn, const BranchingProgram& bp, const std::string& y = "Y");

// Codes <w,i,j> of the edges taken at level transitions of a run.
std::set<std::uint64_t> extract_path(const BpRun& run, std::uint64_t a, std::uint64_t b);

// A string holding exactly the given bits.
void set_bits(arith::FiniteModel& m, const std::string& x, const std::set<std::uint64_t>& ones);

// Adjacency matrix of a graph on a+1 nodes as the string X with X(i,j) = m[i][j].
arith::FiniteModel graph_model(const std::vector<std::vector<bool>>& adj, std::uint64_t a,
                               const std::string& x = "X");

inline constexpr std::string_view kBpHeader = "#glstar-bp v1";
inline constexpr std::string_view kGraphHeader = "#glstar-graph v1";
std::string to_string(const BranchingProgram& p);
BranchingProgram parse_bp(std::string_view text);
std::vector<std::vector<bool>> parse_graph(std::string_view text);

}  // namespace glstar::bp
