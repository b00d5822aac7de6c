#include "locality/io.hpp"

#include <algorithm>
#include <stdexcept>

namespace loc {

namespace {

json int_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

mpz_class int_from_json(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return mpz_class(j.get<std::string>());
  throw std::invalid_argument("expected an integer or a decimal string, got " + j.dump());
}

json rational_pair(const mpq_class& q) { return {int_to_json(q.get_num()), int_to_json(q.get_den())}; }

mpq_class rational_from(const json& num, const json& den) {
  mpq_class q(int_from_json(num), int_from_json(den));
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
  q.canonicalize();
  return q;
}

std::vector<std::size_t> group_from_json(const json& j, const PartySpec& spec) {
  if (j.is_string()) return parse_group(j.get<std::string>(), spec);
  std::vector<std::size_t> g;
  for (const auto& x : j) g.push_back(spec.index_of(x.get<std::string>()));
  return g;
}

}  // namespace

json to_json(const Scalar& z) {
  json a = rational_pair(z.re());
  json b = rational_pair(z.im());
  return {a[0], a[1], b[0], b[1]};
}

Scalar scalar_from_json(const json& j) {
  if (j.is_number_integer()) return Scalar(mpq_class(int_from_json(j)));
  if (!j.is_array() || (j.size() != 2 && j.size() != 4))
    throw std::invalid_argument("scalar must be [re_num, re_den, im_num, im_den], got " + j.dump());
  mpq_class re = rational_from(j[0], j[1]);
  mpq_class im = j.size() == 4 ? rational_from(j[2], j[3]) : mpq_class(0);
  return Scalar(re, im);
}

json to_json(const Vec& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

Vec vec_from_json(const json& j) {
  std::vector<Scalar> xs;
  for (const auto& z : j) xs.push_back(scalar_from_json(z));
  return Vec(std::move(xs));
}

json to_json(const Mat& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
  return out;
}

Mat mat_from_json(const json& j) {
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(vec_from_json(r));
  if (rows.empty()) return Mat();
  std::size_t c = rows[0].dim();
  for (const auto& r : rows)
    if (r.dim() != c) throw std::invalid_argument("ragged matrix");
  return Mat::from_rows(rows, c);
}

json to_json(const StateSet& s) {
  json states = json::array();
  for (const auto& st : s.states) states.push_back({{"label", st.label}, {"amps", to_json(st.amps)}});
  return {{"dims", s.spec.dims}, {"labels", s.spec.labels}, {"states", states}, {"provenance", s.provenance}};
}

StateSet stateset_from_json(const json& j) {
  StateSet s;
  s.spec = PartySpec(j.at("dims").get<std::vector<std::size_t>>(),
                     j.contains("labels") ? j["labels"].get<std::vector<std::string>>() : std::vector<std::string>{});
  for (const auto& st : j.at("states")) s.add(st.at("label").get<std::string>(), vec_from_json(st.at("amps")));
  if (j.contains("provenance")) s.provenance = j["provenance"].get<std::string>();
  s.validate();
  return s;
}

std::vector<std::size_t> parse_group(const std::string& text, const PartySpec& spec) {
  std::vector<std::size_t> g;
  if (text.find(',') != std::string::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string::npos) end = text.size();
      g.push_back(spec.index_of(text.substr(start, end - start)));
      start = end + 1;
    }
  } else {
    for (char c : text) g.push_back(spec.index_of(std::string(1, c)));
  }
  if (g.empty()) throw std::invalid_argument("empty party group");
  std::vector<std::size_t> sorted = g;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("party repeated in group '" + text + "'");
  return g;
}

json to_json(const PVM& p) {
  json els = json::array();
  for (const auto& e : p.elements) els.push_back(to_json(e));
  return {{"dim", p.dim}, {"elements", els}};
}

PVM pvm_from_json(const json& j) {
  std::vector<Mat> els;
  for (const auto& e : j.at("elements")) els.push_back(mat_from_json(e));
  PVM p = PVM::from_elements(std::move(els), false);
  if (j.contains("dim") && j["dim"].get<std::size_t>() != p.dim) throw std::invalid_argument("PVM dim mismatch");
  return p;
}

json to_json(const LocalPVM& lp, const PartySpec& spec) {
  json text = json::array();
  for (const auto& e : lp.pvm.elements) text.push_back(element_text(e, spec.dims_of(lp.group)));
  json out = to_json(lp.pvm);
  out["group"] = spec.group_name(lp.group);
  out["partition"] = lp.partition.str(spec);
  out["kets"] = text;
  return out;
}

LocalPVM local_pvm_from_json(const json& j, const PartySpec& spec) {
  LocalPVM lp;
  lp.group = group_from_json(j.at("group"), spec);
  lp.partition = j.contains("partition") ? Partition::parse(j["partition"].get<std::string>(), spec)
                                         : isolating_partition(spec.parties(), lp.group);
  lp.pvm = pvm_from_json(j);
  if (lp.pvm.dim != spec.dim_of(lp.group)) throw std::invalid_argument("PVM dimension does not match its group");
  check_compatible(lp, spec);
  return lp;
}

json branches_to_json(const std::vector<Branch>& branches) {
  json out = json::array();
  for (const auto& b : branches)
    out.push_back({{"outcome", b.outcome}, {"labels", b.states.labels()}, {"annihilated", b.annihilated},
                   {"states", to_json(b.states)}});
  return out;
}

json to_json(const Direction& d) {
  json out = {{"exactness", exactness_name(d.exactness)}, {"text", d.str()}};
  if (d.exactness != Exactness::numeric) out["theta"] = to_json(d.theta);
  if (d.exactness == Exactness::exact_sqrt) {
    out["sqrt_d"] = rational_pair(d.sqrt_d);
    out["theta_sqrt"] = to_json(d.theta_sqrt);
  }
  json approx = json::array();
  for (const auto& z : d.approx) approx.push_back({z.real(), z.imag()});
  out["approx"] = approx;
  return out;
}

json to_json(const DirectionFamily& f) {
  json basis = json::array();
  for (const auto& b : f.basis) basis.push_back(to_json(b));
  json conic = json::array();
  for (const auto& q : f.conic) conic.push_back(rational_pair(q));
  return {{"kind", f.kind}, {"basis", basis}, {"conic", conic}, {"text", f.str()}};
}

json to_json(const SolutionReport& r, const PartySpec& spec) {
  json sols = json::array();
  for (const auto& d : r.solutions) sols.push_back(to_json(d));
  json fams = json::array();
  for (const auto& f : r.families) fams.push_back(to_json(f));
  json support = json::array();
  for (const auto& v : r.support) support.push_back(to_json(v));
  json out = {{"group", spec.group_name(r.group)},
              {"group_dim", r.group_dim},
              {"support_dim", r.support_dim},
              {"support", support},
              {"solutions", sols},
              {"families", fams},
              {"complete", r.complete},
              {"trace", r.trace}};
  if (r.none_found)
    out["none_found"] = {
        {"method", r.none_found->method}, {"seed", r.none_found->seed}, {"tolerance", r.none_found->tolerance}};
  else
    out["none_found"] = nullptr;
  return out;
}

json to_json(const IrreducibilityReport& r, const PartySpec& spec) {
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    json x = {{"group", spec.group_name(b.group)},
              {"verdict", irreducibility_name(b.verdict)},
              {"certificate", b.certificate}};
    if (b.witness) x["witness"] = to_json(*b.witness, spec);
    blocks.push_back(x);
  }
  json out = {{"verdict", irreducibility_name(r.verdict)}, {"blocks", blocks}};
  if (r.witness) out["witness"] = to_json(*r.witness, spec);
  return out;
}

json to_json(const ProtocolTree& t, const PartySpec& spec) {
  if (t.is_leaf()) {
    json out = {{"claim", leaf_rule_name(*t.claim)}};
    if (!t.label.empty()) out["label"] = t.label;
    return out;
  }
  json children = json::object();
  for (const auto& c : t.children) children[std::to_string(c.outcome)] = to_json(c, spec);
  return {{"group", spec.group_name(t.group)}, {"pvm", t.pvm}, {"children", children}};
}

ProtocolTree protocol_from_json(const json& j, const PartySpec& spec) {
  if (j.contains("claim")) {
    ProtocolTree t = ProtocolTree::leaf(parse_leaf_rule(j["claim"].get<std::string>()));
    if (j.contains("label")) t.label = j["label"].get<std::string>();
    return t;
  }
  ProtocolTree t;
  t.group = group_from_json(j.at("group"), spec);
  const auto dims = spec.dims_of(t.group);
  for (const auto& e : j.at("pvm")) {
    if (e.is_string())
      t.pvm.push_back(e.get<std::string>());
    else
      t.pvm.push_back(element_text(mat_from_json(e), dims));
  }
  if (j.contains("children")) {
    for (const auto& [key, child] : j["children"].items()) {
      std::size_t pos = 0;
      unsigned long o = std::stoul(key, &pos);
      if (pos != key.size()) throw std::invalid_argument("child key '" + key + "' is not an outcome index");
      ProtocolTree c = protocol_from_json(child, spec);
      c.outcome = o;
      t.children.push_back(std::move(c));
    }
    std::sort(t.children.begin(), t.children.end(),
              [](const ProtocolTree& a, const ProtocolTree& b) { return a.outcome < b.outcome; });
  }
  return t;
}

json to_json(const Verdict& v, const PartySpec& spec) {
  json trace = json::array();
  for (const auto& b : v.trace) trace.push_back({{"path", b.path}, {"labels", b.labels}, {"note", b.note}});
  json out = {{"status", status_name(v.status)}, {"reason", v.reason}, {"trace", trace}};
  out["tree"] = v.tree ? to_json(*v.tree, spec) : json(nullptr);
  out["certificate"] = v.certificate ? to_json(*v.certificate, spec) : json(nullptr);
  return out;
}

json to_json(const DominoWitness& w, const PartySpec& spec) {
  json perm = w.permutation;
  return {{"partition", w.partition.str(spec)}, {"text", w.str(spec)}, {"permutation", perm}};
}

json to_json(const ActivationReport& r, const PartySpec& spec) {
  json branches = json::array();
  for (const auto& b : r.branches) {
    json x = {{"outcome", b.outcome},
              {"labels", b.states.labels()},
              {"certified", b.certified},
              {"status", status_name(b.status)},
              {"certificate", to_json(b.certificate, spec)}};
    x["domino"] = b.domino ? to_json(*b.domino, spec) : json(nullptr);
    branches.push_back(x);
  }
  return {{"first", to_json(r.first, spec)},
          {"partition", r.partition.str(spec)},
          {"branches", branches},
          {"redundant", r.redundancy.redundant},
          {"activated", r.activated},
          {"reason", r.reason}};
}

json to_json(const ClassifyResult& r, const PartySpec& spec) {
  json out = {{"class", locality_class_name(r.cls)}, {"exact", r.exact}, {"exhaustive", r.exhaustive},
              {"trace", r.trace}};
  out["witness"] = r.witness ? to_json(*r.witness, spec) : json(nullptr);
  return out;
}

json to_json(const Dim2NoGo& r, const PartySpec& spec) {
  json steps = json::array();
  for (const auto& st : r.steps)
    steps.push_back({{"group", spec.group_name(st.group)},
                     {"pvm", to_json(st.pvm, spec)["kets"]},
                     {"branch_sizes", st.branch_sizes},
                     {"reduced", st.reduced}});
  json alice = json::array();
  for (const auto& lp : r.alice_candidates) alice.push_back(to_json(lp, spec)["kets"]);
  return {{"confirmed", r.confirmed}, {"steps", steps}, {"alice_candidates", alice}, {"reason", r.reason}};
}

json to_json(const MActivation& r, const PartySpec& spec) {
  json out = {{"verdict", tri_name(r.verdict)}, {"trace", r.trace}};
  out["witness"] = r.witness ? to_json(*r.witness, spec) : json(nullptr);
  out["coarser"] = r.coarser ? json(r.coarser->str(spec)) : json(nullptr);
  return out;
}

}  // namespace loc
