#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "locality/linalg.hpp"

namespace loc {

struct PartySpec {
  std::vector<std::size_t> dims;
  std::vector<std::string> labels;

  PartySpec() = default;
  // Labels default to A, B, C, ...
  explicit PartySpec(std::vector<std::size_t> d, std::vector<std::string> l = {});

  std::size_t parties() const { return dims.size(); }
  std::size_t total() const;
  std::size_t dim_of(const std::vector<std::size_t>& group) const;
  std::vector<std::size_t> dims_of(const std::vector<std::size_t>& group) const;
  // Party index for a label; throws on unknown label.
  std::size_t index_of(const std::string& label) const;
  std::string group_name(const std::vector<std::size_t>& group) const;
  std::string str() const;  // e.g. "3x2x3"
  friend bool operator==(const PartySpec& a, const PartySpec& b) {
    return a.dims == b.dims && a.labels == b.labels;
  }
};

// Ordered blocks of party indices. Within a block the listed order fixes the
// flattening of the merged local space.
struct Partition {
  std::vector<std::vector<std::size_t>> blocks;

  static Partition finest(std::size_t parties);
  static Partition whole(std::size_t parties);
  // "A|BC", "A|B|C", or with commas for long labels: "Alice|Bob,Carol".
  static Partition parse(const std::string& text, const PartySpec& spec);

  void validate(std::size_t parties) const;  // throws std::invalid_argument
  std::size_t size() const { return blocks.size(); }
  // Index of the block containing every party of group, if any.
  std::optional<std::size_t> block_containing(const std::vector<std::size_t>& group) const;
  std::string str(const PartySpec& spec) const;
};

// All partitions of {0..n-1} into exactly m blocks, canonical order.
std::vector<Partition> partitions_with_blocks(std::size_t n, std::size_t m);
std::vector<Partition> all_partitions(std::size_t n);

struct State {
  std::string label;
  Vec amps;
};

struct StateSet {
  PartySpec spec;
  std::vector<State> states;
  std::string provenance = "user";

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  const Vec& vec(std::size_t i) const { return states[i].amps; }
  std::vector<std::string> labels() const;
  void add(std::string label, Vec v);
  // Throws when a state has the wrong dimension or is zero.
  void validate() const;
};

// Splits the global index space into (group, rest) coordinates.
class LocalLayout {
 public:
  LocalLayout(const PartySpec& spec, std::vector<std::size_t> group);
  std::size_t group_dim() const { return gdim_; }
  std::size_t rest_dim() const { return rdim_; }
  const std::vector<std::size_t>& group() const { return group_; }
  const std::vector<std::size_t>& rest() const { return rest_; }
  // psi as a group_dim x rest_dim matrix.
  Mat split(const Vec& psi) const;
  Vec join(const Mat& m) const;
  // (op (x) I) psi without materializing the global operator.
  Vec act(const Mat& op, const Vec& psi) const;
  std::size_t group_index(std::size_t flat) const { return gidx_[flat]; }
  std::size_t rest_index(std::size_t flat) const { return ridx_[flat]; }

 private:
  std::vector<std::size_t> group_, rest_;
  std::size_t gdim_ = 1, rdim_ = 1;
  std::vector<std::size_t> gidx_, ridx_;
};

struct OrthogonalityWitness {
  std::size_t i = 0, j = 0;
  Scalar value;
};
// nullopt when all pairs are orthogonal.
std::optional<OrthogonalityWitness> check_mutual_orthogonality(const StateSet& s);

struct RedundancyVerdict {
  bool redundant = false;
  std::vector<std::size_t> discarded;  // witness when redundant
};
RedundancyVerdict is_locally_redundant(const StateSet& s);

StateSet merge_parties(const StateSet& s, const Partition& p);

struct SeparabilityResult {
  std::size_t degree = 1;
  Partition partition;
};
SeparabilityResult separability_degree(const Vec& state, const PartySpec& spec);
// True when state factorizes across every block of p.
bool is_product_across(const Vec& state, const PartySpec& spec, const Partition& p);
// Factor of a product state on the given group (defined up to scalar).
Vec local_factor(const Vec& state, const PartySpec& spec, const std::vector<std::size_t>& group);

// Canonical basis of the span of all states' local parts on group.
std::vector<Vec> local_support(const StateSet& s, const std::vector<std::size_t>& group);

// True when a and b agree up to a bijection of states and nonzero per-state scalars.
bool equal_up_to_scalars(const StateSet& a, const StateSet& b);

// Re-embeds s into target: source party k goes to target party target_of[k]
// with basis index shifted by offset[k].
StateSet embed_parties(const StateSet& s, const PartySpec& target,
                       const std::vector<std::size_t>& target_of,
                       const std::vector<std::size_t>& offset);

}  // namespace loc
