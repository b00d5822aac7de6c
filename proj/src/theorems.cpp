#include "locality/theorems.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "locality/fixtures.hpp"
#include "locality/ket.hpp"
#include "locality/named_sets.hpp"
#include "locality/random_sets.hpp"

namespace loc {

namespace {

SolverConfig exact_solver() {
  SolverConfig c;
  c.exact_only = true;
  return c;
}

EnumerationConfig exact_enum() {
  EnumerationConfig c;
  c.solver.exact_only = true;
  return c;
}

SearchConfig exact_search(std::size_t depth) {
  SearchConfig c;
  c.depth = depth;
  c.enumeration.solver.exact_only = true;
  return c;
}

void add(ClaimReport& r, std::string name, Tri t, std::string detail = {}) {
  r.checks.push_back({std::move(name), t, std::move(detail)});
}

void add(ClaimReport& r, std::string name, bool ok, std::string detail = {}) {
  add(r, std::move(name), ok ? Tri::yes : Tri::no, std::move(detail));
}

Tri from_status(Status s) {
  if (s == Status::distinguishable) return Tri::yes;
  if (s == Status::indistinguishable) return Tri::no;
  return Tri::unknown;
}

std::vector<Branch> measure(const StateSet& s, const std::string& group, const std::string& pvm,
                            const Partition& p) {
  return apply(s, make_local_pvm(s.spec, parse_group(group, s.spec), p, pvm));
}

StateSet kets_set(const PartySpec& spec, const std::vector<std::string>& kets) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::size_t k = 0; k < kets.size(); ++k) rows.push_back({"k" + std::to_string(k + 1), kets[k]});
  return set_from_kets(spec, rows, "written");
}

// got and want agree as sets of directions.
bool same_directions(const std::vector<Vec>& got, const std::vector<std::string>& want,
                     const std::vector<std::size_t>& dims) {
  if (got.size() != want.size()) return false;
  for (const auto& w : want) {
    Vec v = ket(w, dims);
    bool hit = false;
    for (const auto& g : got) hit = hit || parallel(g, v);
    if (!hit) return false;
  }
  return true;
}

std::string sizes(const std::vector<Branch>& br) {
  std::string out;
  for (const auto& b : br) out += (out.empty() ? "" : "/") + std::to_string(b.states.size());
  return out;
}

Verdict replay_fixture(const std::string& name) {
  auto fx = fixture(name);
  StateSet s = fixture_set(fx);
  Partition p = fixture_partition(fx, s.spec);
  return execute_and_verify(s, protocol_from_json(fx.at("protocol"), s.spec), p);
}

// Single-party first rounds: every group's list must be complete and no
// round may activate.
void single_party_rounds(ClaimReport& r, const StateSet& s, const std::string& tag) {
  Partition fine = Partition::finest(s.spec.parties());
  auto cfg = exact_enum();
  std::size_t tried = 0, activated = 0;
  bool complete = true;
  for (std::size_t k = 0; k < s.spec.parties(); ++k) {
    complete = complete && enumeration_is_complete(s, {k}, cfg.solver);
    for (const auto& lp : enumerate_op_pvms(s, {k}, fine, cfg)) {
      ++tried;
      if (verify_activation(s, lp, fine, cfg).activated) ++activated;
    }
  }
  add(r, tag + ": single-party enumerations complete", complete);
  add(r, tag + ": no single-party first round activates", activated == 0,
      std::to_string(tried) + " OP PVMs tried");
}

// The activation checks shared by the joint and single-party witnesses.
void activation_checks(ClaimReport& r, const std::string& tag, const ActivationReport& rep,
                       const std::vector<std::vector<std::string>>& paper_branches, const PartySpec& written_spec,
                       const json& domino_supports, const std::vector<std::size_t>& support_dims,
                       const std::string& domino_partition) {
  add(r, tag + ": activated", rep.activated, rep.reason);
  add(r, tag + ": branch count", rep.branches.size() == domino_supports.size(),
      std::to_string(rep.branches.size()) + " branches");
  for (std::size_t k = 0; k < rep.branches.size() && k < domino_supports.size(); ++k) {
    const auto& b = rep.branches[k];
    const std::string bt = tag + ": branch " + std::to_string(k);
    if (k < paper_branches.size())
      add(r, bt + " matches the written states", equal_up_to_scalars(b.states, kets_set(written_spec, paper_branches[k])));
    add(r, bt + " PVM-irreducible (exact)",
        b.certified && b.certificate.verdict == Irreducibility::irreducible,
        irreducibility_name(b.certificate.verdict));
    std::vector<std::string> want;
    for (const auto& t : domino_supports[k]) want.push_back(t.get<std::string>());
    bool ok = b.domino.has_value() && b.domino->partition.str(b.states.spec) == domino_partition &&
              same_directions(b.domino->basis_b, want, support_dims);
    add(r, bt + " domino match", ok, b.domino ? b.domino->str(b.states.spec) : "no match");
  }
}

ClaimReport theorem1(const ClaimOptions& opt) {
  ClaimReport r;
  r.claim = "theorem 1";
  auto cfg = exact_solver();
  // Charlie's rank-2 outcome span{0,1} on S2, Charlie restricted to that span.
  StateSet residual = kets_set(PartySpec({3, 2, 2}), {"|0>|0>|0±1>", "|2>|1>|0±1>", "|0±1>|1>|0-1>",
                                                      "|1±2>|0>|0-1>"});
  add(r, "residual set orthogonal", !check_mutual_orthogonality(residual).has_value());
  add(r, "residual set distinguishable", from_status(lpcc_search(residual, Partition::finest(3),
                                                                 exact_search(opt.depth)).status));
  auto res = check_dim2_nogo(residual, cfg);
  add(r, "residual: B and C rounds leave a party one-dimensional", res.confirmed, res.reason);
  add(r, "residual: Alice has no OP PVM either", res.alice_candidates.empty(),
      std::to_string(res.alice_candidates.size()) + " candidates");
  r.details["residual"] = to_json(res, residual.spec);

  std::mt19937_64 rng(opt.seed);
  auto prod = random_product_set(rng, {4, 2, 2}, 10);
  auto pr = check_dim2_nogo(prod, cfg);
  add(r, "random product set in 4x2x2", pr.confirmed, pr.reason);

  const std::size_t trials = opt.random_trials ? opt.random_trials : 20;
  std::size_t failed = 0, steps = 0;
  std::uniform_int_distribution<std::size_t> count(2, 12);
  for (std::size_t t = 0; t < trials; ++t) {
    auto s = random_biseparable(rng, 3, count(rng));
    auto out = check_dim2_nogo(s, cfg);
    failed += !out.confirmed;
    steps += out.steps.size();
  }
  add(r, "random biseparable sets in 3x2x2", failed == 0,
      std::to_string(trials) + " sets, " + std::to_string(steps) + " B/C rounds, " + std::to_string(failed) +
          " failures");
  r.summary = "nontrivial B or C rounds on n x 2 x 2 sets product across A|BC leave a one-dimensional party";
  return r;
}

ClaimReport theorem2(const ClaimOptions&) {
  ClaimReport r;
  r.claim = "theorem 2";
  Verdict v = replay_fixture("s1_protocol");
  add(r, "S1 distinguishable by the bundled protocol", from_status(v.status), v.reason);

  auto fx = fixture("theorem2");
  StateSet s1 = fixture_set(fx);
  Partition p = fixture_partition(fx, s1.spec);
  LocalPVM bob = fixture_pvm(fx.at("first"), s1.spec, p);
  auto rep = verify_activation(s1, bob, p, exact_enum());
  activation_checks(r, "Bob {0;1}", rep,
                    {{"|0>|0>|0±1>", "|0±1>|0>|2>", "|1±2>|0>|0>", "|2>|0>|1±2>", "|1>|0>|1>"},
                     {"|0>|1>|0±1>", "|0±1>|1>|2>", "|1±2>|1>|0>", "|2>|1>|1±2>", "|1>|1>|1>"}},
                    s1.spec, fx.at("domino_supports"), {2, 3}, "A|BC");
  r.details["activation"] = to_json(rep, s1.spec);
  r.summary = "Bob's computational round leaves two domino sets in A|BC";
  return r;
}

ClaimReport theorem3(const ClaimOptions& opt) {
  ClaimReport r;
  r.claim = "theorem 3";
  StateSet s2 = build_named_set(NamedSet::S2);
  Partition fine = Partition::finest(3);
  auto cfg = exact_solver();
  Verdict v = replay_fixture("s2_protocol");
  add(r, "S2 distinguishable by the bundled protocol", from_status(v.status), v.reason);

  json dirs = json::object();
  for (std::size_t k = 0; k < 2; ++k) {
    auto rep = rank1_op_directions(s2, {k}, cfg);
    bool ok = rep.none_found && rep.none_found->method == "exact-case-split";
    add(r, s2.spec.labels[k] + ": no nontrivial OP PVM", ok,
        rep.none_found ? rep.none_found->method : std::to_string(rep.solutions.size()) + " directions");
    dirs[s2.spec.labels[k]] = to_json(rep, s2.spec);
  }
  auto charlie = rank1_op_directions(s2, {2}, cfg);
  bool three = charlie.complete && charlie.families.empty() &&
               same_directions(charlie.exact_directions(), {"0-1", "0+1", "2"}, {3});
  std::string listed;
  for (const auto& d : charlie.solutions) listed += (listed.empty() ? "" : ", ") + d.str();
  add(r, "C: exactly the directions 0-1, 0+1, 2", three, listed);
  dirs["C"] = to_json(charlie, s2.spec);
  r.details["directions"] = dirs;

  single_party_rounds(r, s2, "S2");

  // Charlie's rank-1 element; the rank-2 remainder leaves the case sets.
  struct Case {
    const char* m1;
    std::vector<std::string> kets;
    bool alice_computational;
  };
  const std::vector<Case> cases = {
      {"2", {"|0>|0>|0±1>", "|2>|1>|0±1>", "|0±1>|1>|0-1>", "|1±2>|0>|0-1>"}, false},
      {"0-1",
       {"|0>(|0>|0+1>+|0-1>|2>)", "|0>|0+1>|2>", "|1>|0-1>|2>", "|2>|0+1>|2>", "|2>(|0-1>|2>-|1>|0+1>)"},
       true},
      {"0+1",
       {"|0>|0-1>|2>", "|0>(|0>|0-1>-|0+1>|2>)", "|1>|0-1>|2>", "|2>(|0+1>|2>-|1>|0-1>)", "|2>|0-1>|2>",
        "|0±1>|1>|0-1>", "|1±2>|0>|0-1>"},
       false}};
  auto search = exact_search(opt.depth);
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& cs = cases[c];
    const std::string tag = "case " + std::to_string(c + 1) + " (C removes " + cs.m1 + ")";
    auto br = measure(s2, "C", cs.m1, fine);
    const StateSet& residual = br.at(1).states;
    add(r, tag + ": residual matches the written states", equal_up_to_scalars(residual, kets_set(s2.spec, cs.kets)));
    add(r, tag + ": residual distinguishable", from_status(lpcc_search(residual, fine, search).status));
    auto alice = rank1_op_directions(residual, {0}, cfg);
    if (!cs.alice_computational) {
      add(r, tag + ": Alice has no OP direction", alice.none_found && alice.none_found->method == "exact-case-split");
    } else {
      bool comp = alice.complete && alice.families.empty() &&
                  same_directions(alice.exact_directions(), {"0", "1", "2"}, {3});
      add(r, tag + ": Alice only has the computational directions", comp);
      bool all = true;
      for (const auto& b : measure(residual, "A", "0;1;2", fine))
        if (!b.states.empty()) all = all && lpcc_search(b.states, fine, search).status == Status::distinguishable;
      add(r, tag + ": every Alice branch distinguishable", all);
    }
  }
  auto m3 = is_m_activable(s2, 3, false, {exact_enum(), {}, 9});
  add(r, "S2 not 3-activable", m3.verdict == Tri::no ? Tri::yes : (m3.verdict == Tri::yes ? Tri::no : Tri::unknown),
      tri_name(m3.verdict));
  r.summary = "no nontrivial OP-PVM for Alice/Bob; Charlie enumeration = " +
              std::to_string(charlie.exact_directions().size()) + " directions";
  return r;
}

ClaimReport theorem4(const ClaimOptions&) {
  ClaimReport r;
  r.claim = "theorem 4";
  auto fx = fixture("theorem4");
  StateSet s2 = fixture_set(fx);
  Partition p = fixture_partition(fx, s2.spec);
  LocalPVM m = fixture_pvm(fx.at("first"), s2.spec, p);
  auto rep = verify_activation(s2, m, p, exact_enum());
  activation_checks(r, "BC {00,02,11; 01,10,12}", rep,
                    {{"|0>|00±02>", "|1>|02>", "|2>|02±11>", "|0±1>|11>", "|1±2>|00>"},
                     {"|0>|01±12>", "|0±1>|10>", "|1±2>|01>", "|2>|12±10>", "|1>|12>"}},
                    s2.spec, fx.at("domino_supports"), {2, 3}, "A|BC");
  auto m2 = is_m_activable(s2, 2, false, {exact_enum(), {m}, 9});
  add(r, "S2 2-activable", m2.verdict, tri_name(m2.verdict));
  r.details["activation"] = to_json(rep, s2.spec);
  r.summary = "joint BC round leaves two domino sets in A|BC";
  return r;
}

ClaimReport theorem5(const ClaimOptions& opt) {
  ClaimReport r;
  r.claim = "theorem 5";
  auto fx = fixture("theorem5");
  StateSet u = fixture_set(fx);
  Partition fine = fixture_partition(fx, u.spec);
  LocalPVM alice = fixture_pvm(fx.at("first"), u.spec, fine);
  add(r, "Alice's coarse round keeps orthogonality", !preserves_orthogonality(u, alice).has_value());
  auto br = apply(u, alice);
  auto emb = union_embeddings();
  add(r, "Alice's round has one outcome per subset", br.size() == emb.size(), sizes(br));
  json subsets = json::array();
  auto search = exact_search(opt.depth);
  for (std::size_t k = 0; k < emb.size() && k < br.size(); ++k) {
    const auto& e = emb[k];
    const StateSet& part = br[k].states;
    StateSet compact = build_named_set(parse_set_name(e.subset));
    std::vector<std::size_t> offset;
    bool ranges_ok = true;
    for (std::size_t q = 0; q < 3; ++q) {
      offset.push_back(e.ranges[q].front());
      auto sup = local_support(part, {q});
      ranges_ok = ranges_ok && sup.size() == e.ranges[q].size();
      for (const auto& v : sup)
        for (std::size_t i = 0; i < v.dim(); ++i)
          if (!v[i].is_zero() && std::find(e.ranges[q].begin(), e.ranges[q].end(), i) == e.ranges[q].end())
            ranges_ok = false;
    }
    add(r, e.subset + ": branch support equals the embedding ranges", ranges_ok);
    StateSet placed = embed_parties(compact, u.spec, {0, 1, 2}, offset);
    add(r, e.subset + ": branch is the embedded subset", equal_up_to_scalars(part, placed));
    add(r, e.subset + ": distinguishable",
        from_status(lpcc_search(compact, Partition::finest(3), search).status));
    single_party_rounds(r, compact, e.subset);

    const auto& sub = fx.at("subsets").at(k);
    Partition p = fixture_partition(sub, u.spec);
    LocalPVM joint = fixture_pvm(sub.at("first"), u.spec, p);
    auto rep = verify_activation(part, joint, p, exact_enum());
    const std::string tag = e.subset + " joint " + sub.at("first").at("group").get<std::string>();
    add(r, tag + ": activated", rep.activated, rep.reason);
    bool dom = rep.branches.size() == 2;
    for (const auto& b : rep.branches) dom = dom && b.certified && b.domino.has_value();
    add(r, tag + ": both branches certified domino sets", dom);
    subsets.push_back({{"subset", e.subset}, {"activation", to_json(rep, u.spec)}});
  }
  r.details["subsets"] = subsets;
  r.summary = "Alice separates S2, S2', S2''; each pair of parties activates one of them jointly";
  return r;
}

}  // namespace

Tri ClaimReport::verdict() const {
  Tri out = Tri::yes;
  for (const auto& c : checks) {
    if (c.outcome == Tri::no) return Tri::no;
    if (c.outcome == Tri::unknown) out = Tri::unknown;
  }
  return out;
}

ClaimReport run_theorem(int n, const ClaimOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  ClaimReport r;
  switch (n) {
    case 1: r = theorem1(opt); break;
    case 2: r = theorem2(opt); break;
    case 3: r = theorem3(opt); break;
    case 4: r = theorem4(opt); break;
    case 5: r = theorem5(opt); break;
    default: throw std::invalid_argument("theorem number must be 1..5, got " + std::to_string(n));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ClaimReport run_lemma1(const ClaimOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  ClaimReport r;
  r.claim = "lemma 1";
  auto leaf = [&](const std::string& tag, const StateSet& s, const std::vector<std::string>& kets) {
    Partition fine = Partition::finest(s.spec.parties());
    add(r, tag + ": matches the written states", equal_up_to_scalars(s, kets_set(s.spec, kets)));
    bool ok = lemma1_structure(s, fine).has_value();
    std::string why;
    if (ok) {
      try {
        Verdict v = execute_and_verify(s, lemma1_protocol(s, fine), fine);
        ok = v.status == Status::distinguishable;
      } catch (const std::exception& e) {
        ok = false;
        why = e.what();
      }
    }
    add(r, tag + ": protocol built and verified", ok, why);
  };
  Partition fine = Partition::finest(3);
  StateSet s1 = build_named_set(NamedSet::S1);
  auto c1 = measure(s1, "C", "0,1;2", fine);
  auto b1 = measure(c1[0].states, "B", "0-1;0+1", fine);
  leaf("S1 C=01, B=0-1", b1[0].states, {"|0>|0-1>|1>", "|0>|0-1>|0>", "|1>|0-1>|1>", "|2>|0-1>|1>", "|1±2>|0-1>|0>"});
  leaf("S1 C=01, B=0+1", b1[1].states, {"|0>|0+1>|0>", "|0>|0+1>|1>", "|2>|0+1>|1>"});
  leaf("S1 C=2", c1[1].states, {"|2>|0±1>|2>", "|0±1>|0-1>|2>"});
  StateSet s2 = build_named_set(NamedSet::S2);
  auto c2 = measure(s2, "C", "0,1;2", fine);
  auto b2 = measure(c2[0].states, "B", "0;1", fine);
  leaf("S2 C=01, B=0", b2[0].states, {"|0>|0>|0±1>", "|1±2>|0>|0-1>"});
  leaf("S2 C=01, B=1", b2[1].states, {"|0±1>|1>|0-1>", "|2>|1>|0±1>"});
  leaf("S2 C=2", c2[1].states, {"|0>|0±1>|2>", "|2>|0±1>|2>", "|1>|0-1>|2>"});

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> dim(2, 6);
  std::uniform_int_distribution<int> coin(0, 1);
  const std::size_t trials = opt.random_trials ? opt.random_trials : 200;
  std::size_t failed = 0, states = 0;
  Partition two = Partition::finest(2);
  for (std::size_t t = 0; t < trials; ++t) {
    StateSet s = structured_2xn(rng, dim(rng), coin(rng));
    states += s.size();
    try {
      if (!lemma1_structure(s, two) ||
          execute_and_verify(s, lemma1_protocol(s, two), two).status != Status::distinguishable)
        ++failed;
    } catch (const std::exception&) {
      ++failed;
    }
  }
  add(r, "random structured 2 x n sets", failed == 0,
      std::to_string(trials) + " sets, " + std::to_string(states) + " states, " + std::to_string(failed) +
          " failures");

  std::size_t missing = 0;
  for (std::size_t t = 0; t < trials / 2; ++t) {
    std::size_t n = dim(rng);
    StateSet s = random_product_set(rng, {2, n}, std::uniform_int_distribution<std::size_t>(1, 2 * n)(rng));
    missing += !lemma1_structure(s, two).has_value();
  }
  add(r, "random orthogonal product 2 x n sets admit the structure", missing == 0,
      std::to_string(trials / 2) + " sets, " + std::to_string(missing) + " without it");
  r.summary = "2 x n orthogonal product sets are distinguished by the three-round protocol";
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

json to_json(const ClaimReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"outcome", tri_name(c.outcome)}, {"detail", c.detail}});
  return {{"claim", r.claim},   {"verdict", tri_name(r.verdict())}, {"summary", r.summary},
          {"checks", checks},   {"details", r.details},             {"seconds", r.seconds}};
}

}  // namespace loc
