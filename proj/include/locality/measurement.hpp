#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "locality/stateset.hpp"

namespace loc {

bool is_projector(const Mat& m);

struct PVM {
  std::size_t dim = 0;
  std::vector<Mat> elements;

  // Validates and, with complete=true, appends I - sum(elements) when nonzero.
  static PVM from_elements(std::vector<Mat> elements, bool complete = false);
  // Throws std::invalid_argument unless elements are orthogonal projectors summing to I.
  void validate() const;
  std::size_t size() const { return elements.size(); }
};

// Triviality in the {0, I} sense: every element is the zero matrix or the identity.
bool is_trivial(const PVM& p);

struct LocalPVM {
  PVM pvm;
  std::vector<std::size_t> group;
  Partition partition;
};

// PVM from ket notation ("0;1", "00,02,11;01,10,12"), completed with the
// remainder projector when the listed elements do not sum to the identity.
LocalPVM make_local_pvm(const PartySpec& spec, const std::vector<std::size_t>& group,
                        const Partition& partition, const std::string& pvm_text);
LocalPVM make_local_pvm(const PartySpec& spec, const std::vector<std::size_t>& group,
                        const Partition& partition, std::vector<Mat> elements);

void check_compatible(const LocalPVM& lp, const PartySpec& spec);

// Each element tensored with the identity on the other parties.
std::vector<Mat> embed(const LocalPVM& lp, const PartySpec& spec);

struct Branch {
  std::size_t outcome = 0;
  StateSet states;                       // nonzero images, labels preserved
  std::vector<std::string> annihilated;  // labels mapped to zero
};
// One branch per PVM element, including branches where every state vanished.
std::vector<Branch> apply(const StateSet& s, const LocalPVM& lp);

struct OPWitness {
  std::size_t outcome = 0, i = 0, j = 0;
  Scalar value;
};
// nullopt when <psi_i|P (x) I|psi_j> = 0 for every element and every pair.
std::optional<OPWitness> preserves_orthogonality(const StateSet& s, const LocalPVM& lp);

// True when every element acts as a multiple of the identity on the span of
// the set's local parts on the group, so no outcome carries information.
bool is_trivial_on(const StateSet& s, const LocalPVM& lp);

// Canonical ordering key for deduplicating PVMs.
std::string pvm_key(const PVM& p);

}  // namespace loc
