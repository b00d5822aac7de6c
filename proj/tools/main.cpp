// locality: command-line front end for the library.
//
// Exit codes: 0 claim confirmed, 1 refuted, 2 unknown or budget exhausted,
// 64 invalid arguments.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "diagram.hpp"
#include "locality/fixtures.hpp"
#include "locality/ket.hpp"
#include "locality/named_sets.hpp"
#include "locality/theorems.hpp"

using namespace loc;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kUsage = 64;

struct Options {
  std::string name, file, partition, group, pvm, protocol_file, fixture_name, format = "ascii";
  std::optional<std::size_t> m;
  std::vector<std::string> joint, candidates;
  std::size_t depth = 3, m_activable = 0, trials = 0;
  std::uint64_t seed = 1;
  bool json = false, exact_only = false, strong = false;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

int exit_of(Tri t) { return t == Tri::yes ? 0 : t == Tri::no ? 1 : 2; }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return json::parse(in);
}

StateSet load_set(const Options& o) {
  if (!o.file.empty()) return stateset_from_json(read_json(o.file));
  if (!o.name.empty()) return build_named_set(parse_set_name(o.name), o.m);
  if (!o.fixture_name.empty()) return fixture_set(fixture(o.fixture_name));
  throw UsageError("give a set with --name or --file");
}

json input_echo(const Options& o, const StateSet& s) {
  if (!o.name.empty()) {
    json j = {{"name", o.name}};
    if (o.m) j["m"] = *o.m;
    return j;
  }
  if (!o.fixture_name.empty()) return {{"fixture", o.fixture_name}};
  return to_json(s);
}

Partition load_partition(const Options& o, const StateSet& s) {
  if (!o.partition.empty()) return Partition::parse(o.partition, s.spec);
  if (!o.fixture_name.empty()) {
    auto fx = fixture(o.fixture_name);
    if (fx.contains("partition")) return fixture_partition(fx, s.spec);
  }
  return Partition::finest(s.spec.parties());
}

std::vector<std::size_t> load_group(const Options& o, const StateSet& s) {
  if (o.group.empty()) throw UsageError("--group is required");
  return parse_group(o.group, s.spec);
}

LocalPVM load_pvm(const Options& o, const StateSet& s, const Partition& p) {
  if (o.pvm.empty()) {
    if (!o.fixture_name.empty()) {
      auto fx = fixture(o.fixture_name);
      if (fx.contains("first")) return fixture_pvm(fx["first"], s.spec, p);
    }
    throw UsageError("--pvm is required");
  }
  return make_local_pvm(s.spec, load_group(o, s), p, o.pvm);
}

// "BC:00,02,11;01,10,12" -> a candidate first round on BC.
LocalPVM parse_candidate(const std::string& text, const StateSet& s) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("candidate must look like GROUP:PVM, got '" + text + "'");
  auto group = parse_group(text.substr(0, colon), s.spec);
  return make_local_pvm(s.spec, group, isolating_partition(s.spec.parties(), group), text.substr(colon + 1));
}

std::string listing(const StateSet& s) {
  std::ostringstream out;
  for (const auto& st : s.states) out << "  " << st.label << ": " << format_ket(st.amps, s.spec.dims) << '\n';
  return out.str();
}

class Runner {
 public:
  Runner(const Options& o, std::string command) : o_(o) {
    report_["command"] = std::move(command);
    report_["version"] = kVersion;
  }

  int finish(int code, const json& result, const std::string& human) {
    report_["result"] = result;
    report_["exit"] = code;
    report_["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (o_.json)
      std::cout << report_.dump(2) << '\n';
    else
      std::cout << human;
    return code;
  }
  void input(const json& j) { report_["input"] = j; }

 private:
  const Options& o_;
  json report_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

EnumerationConfig enum_cfg(const Options& o) {
  EnumerationConfig c;
  c.solver.exact_only = o.exact_only;
  c.solver.seed = o.seed;
  return c;
}

SearchConfig search_cfg(const Options& o) {
  SearchConfig c;
  c.depth = o.depth;
  c.enumeration = enum_cfg(o);
  return c;
}

int sets_verb(const std::string& sub, const Options& o, Runner& run) {
  StateSet s = load_set(o);
  run.input(input_echo(o, s));
  if (sub == "build")
    return run.finish(0, to_json(s), s.spec.str() + ", " + std::to_string(s.size()) + " states\n" + listing(s));
  if (sub == "check") {
    auto w = check_mutual_orthogonality(s);
    json r = {{"orthogonal", !w}, {"states", s.size()}};
    if (w) r["witness"] = {{"i", s.states[w->i].label}, {"j", s.states[w->j].label}, {"inner", to_json(w->value)}};
    std::string h = w ? "not orthogonal: <" + s.states[w->i].label + "|" + s.states[w->j].label + "> = " +
                            w->value.str() + "\n"
                      : "orthogonality ok (" + std::to_string(s.size()) + " states, " + s.spec.str() + ")\n";
    return run.finish(w ? 1 : 0, r, h);
  }
  if (sub == "redundancy") {
    auto r = is_locally_redundant(s);
    json discarded = json::array();
    for (auto k : r.discarded) discarded.push_back(s.states[k].label);
    std::string h = r.redundant ? "locally redundant: discarding " + discarded.dump() + " keeps orthogonality\n"
                                : "free from local redundancy\n";
    return run.finish(r.redundant ? 1 : 0, {{"redundant", r.redundant}, {"discarded", discarded}}, h);
  }
  if (sub == "merge") {
    if (o.partition.empty()) throw UsageError("--partition is required");
    StateSet m = merge_parties(s, Partition::parse(o.partition, s.spec));
    return run.finish(0, to_json(m), m.spec.str() + "\n" + listing(m));
  }
  throw UsageError("unknown sets subcommand");
}

int measure_verb(const std::string& sub, const Options& o, Runner& run) {
  StateSet s = load_set(o);
  run.input(input_echo(o, s));
  Partition p = load_partition(o, s);
  LocalPVM lp = load_pvm(o, s, p);
  if (sub == "apply") {
    auto br = apply(s, lp);
    std::ostringstream h;
    const auto dims = s.spec.dims_of(lp.group);
    for (const auto& b : br) {
      h << "outcome " << b.outcome << " [" << element_text(lp.pvm.elements[b.outcome], dims) << "]: "
        << b.states.size() << " states\n"
        << listing(b.states);
    }
    return run.finish(0, {{"pvm", to_json(lp, s.spec)}, {"branches", branches_to_json(br)}}, h.str());
  }
  if (sub == "check") {
    auto w = preserves_orthogonality(s, lp);
    bool trivial = is_trivial_on(s, lp);
    json r = {{"preserves", !w}, {"trivial_on_set", trivial}};
    std::string h;
    if (w) {
      r["witness"] = {{"i", s.states[w->i].label}, {"j", s.states[w->j].label}, {"outcome", w->outcome}};
      h = "spoils orthogonality of " + s.states[w->i].label + ", " + s.states[w->j].label + " at outcome " +
          std::to_string(w->outcome) + "\n";
    } else {
      h = std::string("orthogonality preserved") + (trivial ? " (trivial on the set)" : "") + "\n";
    }
    return run.finish(w ? 1 : 0, r, h);
  }
  throw UsageError("unknown measure subcommand");
}

int solve_verb(const std::string& sub, const Options& o, Runner& run) {
  StateSet s = load_set(o);
  run.input(input_echo(o, s));
  auto cfg = enum_cfg(o);
  if (sub == "directions") {
    auto r = rank1_op_directions(s, load_group(o, s), cfg.solver);
    std::ostringstream h;
    h << s.spec.group_name(r.group) << ": support " << r.support_dim << " of " << r.group_dim << '\n';
    for (const auto& d : r.solutions) h << "  " << d.str() << " (" << exactness_name(d.exactness) << ")\n";
    for (const auto& f : r.families) h << "  family " << f.str() << '\n';
    if (r.none_found) h << "  no nontrivial direction (" << r.none_found->method << ")\n";
    bool settled = r.complete || (r.none_found && r.none_found->method == "exact-case-split");
    return run.finish(settled ? 0 : 2, to_json(r, s.spec), h.str());
  }
  if (sub == "pvms") {
    auto group = load_group(o, s);
    Partition p = o.partition.empty() ? isolating_partition(s.spec.parties(), group) : load_partition(o, s);
    auto list = enumerate_op_pvms(s, group, p, cfg);
    bool complete = enumeration_is_complete(s, group, cfg.solver);
    json arr = json::array();
    std::ostringstream h;
    for (const auto& lp : list) {
      arr.push_back(to_json(lp, s.spec));
      h << "  " << arr.back()["kets"].dump() << '\n';
    }
    h << list.size() << " nontrivial OP PVMs" << (complete ? " (complete)" : " (may be incomplete)") << '\n';
    return run.finish(complete ? 0 : 2, {{"pvms", arr}, {"complete", complete}}, h.str());
  }
  if (sub == "irreducible") {
    Partition p = load_partition(o, s);
    auto r = is_pvm_irreducible(s, p, cfg);
    std::ostringstream h;
    h << irreducibility_name(r.verdict) << " in " << p.str(s.spec) << '\n';
    for (const auto& b : r.blocks)
      h << "  " << s.spec.group_name(b.group) << ": " << irreducibility_name(b.verdict) << " (" << b.certificate
        << ")\n";
    int code = r.verdict == Irreducibility::irreducible ? 0 : r.verdict == Irreducibility::reducible ? 1 : 2;
    return run.finish(code, to_json(r, s.spec), h.str());
  }
  throw UsageError("unknown solve subcommand");
}

std::string tree_text(const ProtocolTree& t, const PartySpec& spec, const std::string& indent = "") {
  if (t.is_leaf()) return indent + leaf_rule_name(*t.claim) + (t.label.empty() ? "" : " " + t.label) + "\n";
  std::string out = indent + spec.group_name(t.group) + " measures " + json(t.pvm).dump() + "\n";
  for (const auto& c : t.children)
    out += indent + "  " + std::to_string(c.outcome) + ":\n" + tree_text(c, spec, indent + "    ");
  return out;
}

int verdict_exit(Status s) { return s == Status::distinguishable ? 0 : s == Status::indistinguishable ? 1 : 2; }

int protocol_verb(const std::string& sub, const Options& o, Runner& run) {
  StateSet s = load_set(o);
  run.input(input_echo(o, s));
  Partition p = load_partition(o, s);
  if (sub == "run") {
    json tj;
    if (!o.protocol_file.empty())
      tj = read_json(o.protocol_file);
    else if (!o.fixture_name.empty() && fixture(o.fixture_name).contains("protocol"))
      tj = fixture(o.fixture_name)["protocol"];
    else
      throw UsageError("give a tree with --protocol or --fixture");
    ProtocolTree t = protocol_from_json(tj, s.spec);
    try {
      Verdict v = execute_and_verify(s, t, p);
      return run.finish(verdict_exit(v.status), to_json(v, s.spec), status_name(v.status) + "\n" + tree_text(t, s.spec));
    } catch (const ProtocolError& e) {
      return run.finish(1, {{"status", "rejected"}, {"path", e.path()}, {"error", e.what()}},
                        std::string("rejected: ") + e.what() + "\n");
    }
  }
  if (sub == "search") {
    Verdict v = lpcc_search(s, p, search_cfg(o));
    std::string h = status_name(v.status) + (v.reason.empty() ? "" : ": " + v.reason) + "\n";
    if (v.tree) h += tree_text(*v.tree, s.spec);
    return run.finish(verdict_exit(v.status), to_json(v, s.spec), h);
  }
  if (sub == "lemma1") {
    if (!lemma1_structure(s, p))
      return run.finish(2, {{"structure", nullptr}}, "no 2 x n product structure in " + p.str(s.spec) + "\n");
    ProtocolTree t = lemma1_protocol(s, p);
    Verdict v = execute_and_verify(s, t, p);
    return run.finish(verdict_exit(v.status), to_json(v, s.spec), status_name(v.status) + "\n" + tree_text(t, s.spec));
  }
  throw UsageError("unknown protocol subcommand");
}

int activate_verb(const Options& o, Runner& run) {
  StateSet s = load_set(o);
  run.input(input_echo(o, s));
  Partition p = load_partition(o, s);
  LocalPVM lp = load_pvm(o, s, p);
  auto rep = verify_activation(s, lp, p, enum_cfg(o));
  std::ostringstream h;
  h << (rep.activated ? "activated" : "not activated") << " in " << p.str(s.spec);
  if (!rep.reason.empty()) h << ": " << rep.reason;
  h << '\n';
  for (const auto& b : rep.branches) {
    h << "  outcome " << b.outcome << ": " << b.states.size() << " states, " << status_name(b.status) << ", "
      << irreducibility_name(b.certificate.verdict) << '\n';
    if (b.domino) h << "    domino " << b.domino->str(s.spec) << '\n';
  }
  return run.finish(rep.activated ? 0 : 1, to_json(rep, s.spec), h.str());
}

int classify_verb(const Options& o, Runner& run) {
  StateSet s = load_set(o);
  run.input(input_echo(o, s));
  std::vector<LocalPVM> candidates;
  for (const auto& c : o.candidates) candidates.push_back(parse_candidate(c, s));
  if (!o.fixture_name.empty()) {
    auto fx = fixture(o.fixture_name);
    if (fx.contains("first")) {
      Partition fp = fixture_partition(fx, s.spec);
      candidates.push_back(fixture_pvm(fx["first"], s.spec, fp));
    }
  }
  if (o.m_activable) {
    MActivationConfig cfg;
    cfg.enumeration = enum_cfg(o);
    cfg.candidates = candidates;
    auto r = is_m_activable(s, o.m_activable, o.strong, cfg);
    std::string h = std::string(o.strong ? "strong " : "") + std::to_string(o.m_activable) +
                    "-activable: " + tri_name(r.verdict) + "\n";
    if (r.witness) h += "  witness: " + r.witness->partition.str(s.spec) + "\n";
    return run.finish(exit_of(r.verdict), to_json(r, s.spec), h);
  }
  std::vector<std::vector<std::size_t>> pairs;
  for (const auto& j : o.joint) pairs.push_back(parse_group(j, s.spec));
  ClassifyConfig cfg;
  cfg.search = search_cfg(o);
  cfg.joint_candidates = candidates;
  auto r = classify(s, pairs, cfg);
  std::string h = locality_class_name(r.cls) + (r.exact ? " (exact)" : "") + (r.exhaustive ? " (exhaustive)" : "") + "\n";
  for (const auto& t : r.trace) h += "  " + t + "\n";
  return run.finish(r.cls == LocalityClass::unknown ? 2 : 0, to_json(r, s.spec), h);
}

int claim_verb(const ClaimReport& r, Runner& run) {
  std::ostringstream h;
  h << r.claim << ": " << tri_name(r.verdict()) << " (" << r.seconds << " s)\n" << r.summary << '\n';
  for (const auto& c : r.checks)
    h << "  [" << (c.outcome == Tri::yes ? "ok" : c.outcome == Tri::no ? "FAIL" : "??") << "] " << c.name
      << (c.detail.empty() ? "" : " - " + c.detail) << '\n';
  return run.finish(exit_of(r.verdict()), to_json(r), h.str());
}

int diagram_verb(const Options& o, Runner& run) {
  StateSet s = load_set(o);
  run.input(input_echo(o, s));
  Partition p = load_partition(o, s);
  if (o.format != "ascii" && o.format != "svg") throw UsageError("--format must be ascii or svg");
  Grid g = occupancy(s, p);
  std::string doc = o.format == "svg" ? render_svg(g) : render_ascii(g);
  json cells = json::array();
  for (const auto& r : g.cells) {
    json row = json::array();
    for (const auto& c : r) row.push_back(c);
    cells.push_back(row);
  }
  return run.finish(0, {{"rows", g.row_names}, {"cols", g.col_names}, {"cells", cells}, {"labels", g.labels},
                        {"document", doc}},
                    doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact local distinguishability and nonlocality activation of multipartite state sets", "locality"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Machine-readable report on stdout");
  app.add_flag("--exact-only", o.exact_only, "Exact solver only; no numeric fallback");
  app.add_option("--seed", o.seed, "Seed for numeric starts and random trials");
  app.add_option("--depth", o.depth, "LPCC search depth");
  app.add_option("--name", o.name, "Named set: " + [] {
    std::string s;
    for (const auto& n : named_set_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  app.add_option("--m", o.m, "Family parameter for S1m/S2m");
  app.add_option("--file", o.file, "StateSet JSON file");
  app.add_option("--fixture", o.fixture_name, "Bundled fixture: set, partition, protocol or first round");
  app.add_option("--partition", o.partition, "Partition such as A|B|C or A|BC");
  app.add_option("--group", o.group, "Party group such as B or BC");
  app.add_option("--pvm", o.pvm, "PVM in ket notation, e.g. \"0;1\" or \"00,02,11;01,10,12\"");
  app.add_option("--protocol", o.protocol_file, "Protocol tree JSON file");
  app.add_option("--joint", o.joint, "Party pair allowed to measure jointly, e.g. B,C (repeatable)");
  app.add_option("--candidate", o.candidates, "Candidate joint first round GROUP:PVM (repeatable)");
  app.add_option("--m-activable", o.m_activable, "Decide m-activability instead of classifying");
  app.add_flag("--strong", o.strong, "Strong variant of m-activability");
  app.add_option("--trials", o.trials, "Random trials for theorem and lemma replays");
  app.add_option("--format", o.format, "Diagram format")->check(CLI::IsMember({"ascii", "svg"}));

  std::string which;
  auto* sets = app.add_subcommand("sets", "Build, check, merge named or JSON sets");
  sets->add_option("action", which, "build | check | redundancy | merge")
      ->required()
      ->check(CLI::IsMember({"build", "check", "redundancy", "merge"}));
  auto* measure = app.add_subcommand("measure", "Apply or check a local PVM");
  measure->add_option("action", which, "apply | check")->required()->check(CLI::IsMember({"apply", "check"}));
  auto* solve = app.add_subcommand("solve", "Orthogonality-preserving measurements");
  solve->add_option("action", which, "directions | pvms | irreducible")
      ->required()
      ->check(CLI::IsMember({"directions", "pvms", "irreducible"}));
  auto* protocol = app.add_subcommand("protocol", "Run, search or build LPCC protocols");
  protocol->add_option("action", which, "run | search | lemma1")
      ->required()
      ->check(CLI::IsMember({"run", "search", "lemma1"}));
  auto* activate = app.add_subcommand("activate", "Verify a first round activates nonlocality");
  auto* classify_cmd = app.add_subcommand("classify", "Place a set on the locality line");
  int number = 0;
  auto* theorem = app.add_subcommand("theorem", "Replay a theorem on the bundled sets");
  theorem->add_option("n", number, "1..5")->required()->check(CLI::Range(1, 5));
  auto* lemma = app.add_subcommand("lemma", "Replay the 2 x n lemma");
  lemma->add_option("n", number, "1")->required()->check(CLI::Range(1, 1));
  auto* diagram = app.add_subcommand("diagram", "Occupancy grid of a set in two blocks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);
  Runner run(o, command);
  try {
    if (sets->parsed()) return sets_verb(which, o, run);
    if (measure->parsed()) return measure_verb(which, o, run);
    if (solve->parsed()) return solve_verb(which, o, run);
    if (protocol->parsed()) return protocol_verb(which, o, run);
    if (activate->parsed()) return activate_verb(o, run);
    if (classify_cmd->parsed()) return classify_verb(o, run);
    ClaimOptions co;
    co.seed = o.seed;
    co.depth = o.depth;
    co.random_trials = o.trials;
    if (theorem->parsed()) return claim_verb(run_theorem(number, co), run);
    if (lemma->parsed()) return claim_verb(run_lemma1(co), run);
    if (diagram->parsed()) return diagram_verb(o, run);
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
