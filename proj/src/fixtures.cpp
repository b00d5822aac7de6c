#include "locality/fixtures.hpp"

#include <optional>

#include "locality/named_sets.hpp"

namespace loc {

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : fixture_table()) out.push_back(k);
  return out;
}

json fixture(const std::string& name) {
  const auto& t = fixture_table();
  auto it = t.find(name);
  if (it == t.end()) throw std::out_of_range("no fixture named '" + name + "'");
  return json::parse(it->second);
}

StateSet fixture_set(const json& fx) {
  const auto& set = fx.at("set");
  if (set.is_object()) return stateset_from_json(set);
  std::optional<std::size_t> m;
  if (fx.contains("m")) m = fx["m"].get<std::size_t>();
  return build_named_set(parse_set_name(set.get<std::string>()), m);
}

Partition fixture_partition(const json& fx, const PartySpec& spec, const char* key) {
  return Partition::parse(fx.at(key).get<std::string>(), spec);
}

LocalPVM fixture_pvm(const json& node, const PartySpec& spec, const Partition& p) {
  auto group = parse_group(node.at("group").get<std::string>(), spec);
  std::string text;
  for (const auto& e : node.at("pvm")) text += (text.empty() ? "" : ";") + e.get<std::string>();
  return make_local_pvm(spec, group, p, text);
}

}  // namespace loc
