#pragma once

// Activation of hidden nonlocality: a first orthogonality-preserving round
// after which every branch is locally indistinguishable.

#include <optional>
#include <string>
#include <vector>

#include "locality/protocols.hpp"

namespace loc {

// Relabeling of a bipartite set onto the 3x3 domino set
// {|0>|0+-1>, |0+-1>|2>, |1+-2>|0>, |2>|1+-2>, |1>|1>}.
struct DominoWitness {
  Partition partition;                  // the two blocks that were merged
  std::vector<Vec> basis_a, basis_b;    // support vectors sent to |0>,|1>,|2>
  std::vector<std::size_t> permutation; // state k -> domino state permutation[k]
  // Bases written in the original parties of each block.
  std::string str(const PartySpec& spec) const;
};

// The domino states in the order permutation refers to.
StateSet domino_reference();

// s must have exactly two parties.
std::optional<DominoWitness> domino_match(const StateSet& s);
// Merges p (two blocks) first; the witness bases live on the merged parties.
std::optional<DominoWitness> domino_match(const StateSet& s, const Partition& p);

struct ActivationBranch {
  std::size_t outcome = 0;
  StateSet states;
  IrreducibilityReport certificate;
  std::optional<DominoWitness> domino;
  bool certified = false;  // at least two states and PVM-irreducible in the partition
  // indistinguishable when certified; distinguishable when a protocol was
  // found and replayed; unknown otherwise.
  Status status = Status::unknown;
};

struct ActivationReport {
  LocalPVM first;
  Partition partition;
  std::vector<ActivationBranch> branches;
  RedundancyVerdict redundancy;
  bool activated = false;
  std::string reason;
};

// Throws std::invalid_argument when first is trivial on s or spoils orthogonality.
ActivationReport verify_activation(const StateSet& s, const LocalPVM& first, const Partition& p,
                                   const EnumerationConfig& cfg = {});

enum class LocalityClass { strong_local_evidence, type_i, type_ii, indistinguishable_already, unknown };
std::string locality_class_name(LocalityClass c);

struct ClassifyConfig {
  SearchConfig search;
  // Candidate first rounds for joint groups, e.g. from fixtures.
  std::vector<LocalPVM> joint_candidates;
  std::size_t max_joint_dim = 9;  // joint groups above this are verification-only
};

struct ClassifyResult {
  LocalityClass cls = LocalityClass::unknown;
  bool exact = false;   // structural recognition, not a search result
  bool exhaustive = false;  // every group's enumeration was complete
  std::optional<ActivationReport> witness;
  std::vector<std::string> trace;
};

ClassifyResult classify(const StateSet& s, const std::vector<std::vector<std::size_t>>& joint_pairs,
                        const ClassifyConfig& cfg = {});

// True when the nontrivial OP PVMs on group were listed completely: the
// local support fills a group of dimension <= 3 (so every nontrivial PVM has
// a rank-1 element), the exact case split finished and found no continuous
// family. Support dimension <= 1 leaves nothing to list.
bool enumeration_is_complete(const StateSet& s, const std::vector<std::size_t>& group,
                             const SolverConfig& cfg = {});

struct Dim2Step {
  std::vector<std::size_t> group;
  LocalPVM pvm;
  std::vector<std::size_t> branch_sizes;
  bool reduced = false;  // every branch is product with the measured party one-dimensional
};

struct Dim2NoGo {
  bool confirmed = false;
  std::vector<Dim2Step> steps;
  std::vector<LocalPVM> alice_candidates;  // what is left for the large party
  std::string reason;
};

// s: three parties with dims n, 2, 2, every state product across A|BC.
// Throws std::invalid_argument when the precondition fails.
Dim2NoGo check_dim2_nogo(const StateSet& s, const SolverConfig& cfg = {});

enum class Tri { yes, no, unknown };
std::string tri_name(Tri t);

struct MActivation {
  Tri verdict = Tri::unknown;
  std::optional<ActivationReport> witness;
  std::optional<Partition> coarser;  // strong variant: where post-sets stay irreducible
  std::vector<std::string> trace;
};

struct MActivationConfig {
  EnumerationConfig enumeration;
  std::vector<LocalPVM> candidates;  // first rounds to try in every partition they fit
  std::size_t max_joint_dim = 9;
};

MActivation is_m_activable(const StateSet& s, std::size_t m, bool strong, const MActivationConfig& cfg = {});

}  // namespace loc
