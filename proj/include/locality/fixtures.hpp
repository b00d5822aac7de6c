#pragma once

// Protocol and activation fixtures shipped inside the library.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "locality/io.hpp"

namespace loc {

const std::map<std::string, std::string_view>& fixture_table();
std::vector<std::string> fixture_names();
// Parsed fixture; throws std::out_of_range for an unknown name.
json fixture(const std::string& name);

// The named set a fixture refers to, built through named_sets.
StateSet fixture_set(const json& fx);
Partition fixture_partition(const json& fx, const PartySpec& spec, const char* key = "partition");
// {"group", "pvm": [...]} with the remainder added.
LocalPVM fixture_pvm(const json& node, const PartySpec& spec, const Partition& p);

}  // namespace loc
