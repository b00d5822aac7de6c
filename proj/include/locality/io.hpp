#pragma once

// JSON forms of the exact objects. Rationals are integer pairs; an integer
// outside int64 is written as a decimal string.

#include <string>

#include <json.hpp>

#include "locality/activation.hpp"

namespace loc {

using json = nlohmann::json;

json to_json(const Scalar& z);  // [re_num, re_den, im_num, im_den]
Scalar scalar_from_json(const json& j);

json to_json(const Vec& v);
Vec vec_from_json(const json& j);
json to_json(const Mat& m);  // list of rows
Mat mat_from_json(const json& j);

json to_json(const StateSet& s);
StateSet stateset_from_json(const json& j);

// Ordered group such as "BC", "CA" or "Alice,Bob".
std::vector<std::size_t> parse_group(const std::string& text, const PartySpec& spec);

json to_json(const PVM& p);
PVM pvm_from_json(const json& j);
json to_json(const LocalPVM& lp, const PartySpec& spec);
LocalPVM local_pvm_from_json(const json& j, const PartySpec& spec);

// Branch listing with the labels that survive each outcome.
json branches_to_json(const std::vector<Branch>& branches);

json to_json(const Direction& d);
json to_json(const DirectionFamily& f);
json to_json(const SolutionReport& r, const PartySpec& spec);
json to_json(const IrreducibilityReport& r, const PartySpec& spec);

// Script format: {"group", "pvm": [ket text or matrix], "children": {"0": ...}}
// or {"claim": rule, "label": ...}.
json to_json(const ProtocolTree& t, const PartySpec& spec);
ProtocolTree protocol_from_json(const json& j, const PartySpec& spec);

json to_json(const Verdict& v, const PartySpec& spec);

json to_json(const DominoWitness& w, const PartySpec& spec);
json to_json(const ActivationReport& r, const PartySpec& spec);
json to_json(const ClassifyResult& r, const PartySpec& spec);
json to_json(const Dim2NoGo& r, const PartySpec& spec);
json to_json(const MActivation& r, const PartySpec& spec);

}  // namespace loc
