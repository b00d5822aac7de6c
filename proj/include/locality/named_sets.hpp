#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "locality/stateset.hpp"

namespace loc {

enum class NamedSet { S1, S2, S2prime, S2doubleprime, S1m, S2m, Domino, UnionS };

NamedSet parse_set_name(const std::string& name);
std::string set_name(NamedSet n);
std::vector<std::string> named_set_names();

// Throws std::invalid_argument when m is missing or zero for S1m/S2m.
StateSet build_named_set(NamedSet name, std::optional<std::size_t> m = std::nullopt);

// Builds a set from ket strings. A '±' entry expands to two states labelled
// "<label>+" / "<label>-", or "x" / "y" when the label is written "x/y".
StateSet set_from_kets(const PartySpec& spec, const std::vector<std::pair<std::string, std::string>>& kets,
                       std::string provenance = "user");

// Basis ranges used to embed the three subsets of the 8x8x8 union, per party.
struct UnionEmbedding {
  std::string subset;
  std::vector<std::vector<std::size_t>> ranges;  // per party A, B, C
};
std::vector<UnionEmbedding> union_embeddings();

}  // namespace loc
