#pragma once

// LPCC protocol trees: rounds of local projective measurements, each branch
// ending in a leaf whose claim is checked against the surviving states.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "locality/opsolve.hpp"

namespace loc {

enum class LeafRule { identified, single_state, two_orthogonal_states, lemma1_2xn, three_product };
std::string leaf_rule_name(LeafRule r);
LeafRule parse_leaf_rule(const std::string& s);

struct ProtocolTree {
  std::size_t outcome = 0;  // index in the parent's PVM; unused at the root

  // Internal node: a PVM on a group, elements given in ket notation
  // ("0,1" is the projector onto span{|0>,|1>}). Missing remainder is added
  // as the last outcome.
  std::vector<std::size_t> group;
  std::vector<std::string> pvm;
  std::vector<ProtocolTree> children;

  // Leaf.
  std::optional<LeafRule> claim;
  std::string label;  // for identified leaves

  bool is_leaf() const { return claim.has_value(); }
  static ProtocolTree leaf(LeafRule r, std::string label = {});
  std::size_t depth() const;
  std::size_t count_leaves() const;
};

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// PVM element from a projector, written as the kets spanning its range.
std::string element_text(const Mat& projector, const std::vector<std::size_t>& dims);

enum class Status { distinguishable, indistinguishable, unknown };
std::string status_name(Status s);

struct BranchTrace {
  std::string path;  // e.g. "C:0/B:1"
  std::vector<std::string> labels;
  std::string note;
};

struct Verdict {
  Status status = Status::unknown;
  std::optional<ProtocolTree> tree;
  std::optional<IrreducibilityReport> certificate;
  std::vector<BranchTrace> trace;
  std::string reason;
};

// Replays t on s within partition p. Throws ProtocolError (with the branch
// path) on a malformed node, a measurement that spoils orthogonality, a
// child set that does not match the non-annihilating outcomes, or a leaf
// whose rule does not hold.
Verdict execute_and_verify(const StateSet& s, const ProtocolTree& t, const Partition& p);

// Product decomposition used by Lemma 1: a qubit-like block Q (support
// dimension <= 2), a block N, and spectator blocks on which every state has
// the same factor.
struct Lemma1Structure {
  std::optional<std::size_t> q_block;
  std::size_t n_block = 0;
  std::vector<std::size_t> spectators;
  // Each class collects the states whose Q factor is alpha or alpha-perp.
  struct Class {
    Vec alpha;  // empty when Q is absent
    std::vector<std::size_t> on_alpha, on_perp;
  };
  std::vector<Class> classes;
};

std::optional<Lemma1Structure> lemma1_structure(const StateSet& s, const Partition& p);

// Three rounds: N separates the classes, Q splits alpha from alpha-perp, N
// identifies. Rounds that would not split anything are skipped.
ProtocolTree lemma1_protocol(const StateSet& s, const Partition& p);

// M0 = |a_j><a_j| on a block where the first two states have orthogonal factors.
ProtocolTree three_product_protocol(const StateSet& s, const Partition& p);

struct SearchConfig {
  EnumerationConfig enumeration;
  std::size_t depth = 4;
  std::size_t max_pvms_per_node = 64;
};

Verdict lpcc_search(const StateSet& s, const Partition& p, const SearchConfig& cfg = {});

// Checks for the terminal rules; returns the first rule that applies.
std::optional<LeafRule> terminal_rule(const StateSet& s, const Partition& p);

}  // namespace loc
