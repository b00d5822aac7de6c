// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "locality/fixtures.hpp"
#include "locality/named_sets.hpp"
#include "locality/random_sets.hpp"
#include "locality/theorems.hpp"

using namespace loc;

namespace {

// Pinned limits.
constexpr double kGoldenSeconds = 10.0;
constexpr double kUnionSeconds = 120.0;
constexpr int kPlantedTrials = 1000;
constexpr int kLemmaTrials = 200;
constexpr int kBiseparableTrials = 20;
constexpr int kStructuralTrials = 10;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << (note.tellp() > 0 ? "; " : "") << what;
    }
  }
};

std::string failed_checks(const ClaimReport& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (c.outcome != Tri::yes) out += (out.empty() ? "" : "; ") + c.name + " [" + tri_name(c.outcome) + "]";
  return out;
}

void claim(Outcome& o, const ClaimReport& r) {
  o.require(r.verdict() == Tri::yes, r.claim + ": " + failed_checks(r));
  o.note << (o.note.tellp() > 0 ? "; " : "") << r.checks.size() << " checks";
}

// 1
void orthogonality_goldens(Outcome& o) {
  auto start = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, StateSet>> sets;
  for (auto n : {NamedSet::S1, NamedSet::S2, NamedSet::S2prime, NamedSet::S2doubleprime, NamedSet::UnionS,
                 NamedSet::Domino})
    sets.push_back({set_name(n), build_named_set(n)});
  for (std::size_t m = 1; m <= 4; ++m) {
    sets.push_back({"S1m(" + std::to_string(m) + ")", build_named_set(NamedSet::S1m, m)});
    sets.push_back({"S2m(" + std::to_string(m) + ")", build_named_set(NamedSet::S2m, m)});
  }
  for (const auto& [name, s] : sets) o.require(!check_mutual_orthogonality(s).has_value(), name + " not orthogonal");
  o.require(equal_up_to_scalars(build_named_set(NamedSet::S1m, 1), build_named_set(NamedSet::S1)), "S1m(1) != S1");
  o.require(equal_up_to_scalars(build_named_set(NamedSet::S2m, 1), build_named_set(NamedSet::S2)), "S2m(1) != S2");
  double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(t < kGoldenSeconds, "took " + std::to_string(t) + " s");
  o.note << (o.note.tellp() > 0 ? "; " : "") << sets.size() << " sets";
}

// 2
void lemma1(Outcome& o) {
  ClaimOptions opt;
  opt.seed = kSeed;
  opt.random_trials = kLemmaTrials;
  claim(o, run_lemma1(opt));
}

void theorem(Outcome& o, int n) {
  ClaimOptions opt;
  opt.seed = kSeed;
  auto r = run_theorem(n, opt);
  claim(o, r);
  if (n == 5) o.require(r.seconds < kUnionSeconds, "took " + std::to_string(r.seconds) + " s");
}

// 7
void strong_local(Outcome& o) {
  std::mt19937_64 rng(kSeed + 7);
  for (int t = 0; t < kStructuralTrials; ++t) {
    StateSet two;
    two.spec = PartySpec({3, 2, 3});
    Vec a = random_vec(rng, 18), b = random_vec(rng, 18);
    b -= (inner(a, b) / inner(a, a)) * a;
    while (b.is_zero()) b = random_vec(rng, 18);
    two.add("a", a);
    two.add("b", b);
    auto r = classify(two, {});
    o.require(r.cls == LocalityClass::strong_local_evidence && r.exact, "two-state set " + std::to_string(t));
  }
  std::uniform_int_distribution<std::size_t> dim(2, 5);
  for (int t = 0; t < kStructuralTrials; ++t) {
    std::size_t n = dim(rng);
    auto s = random_product_set(rng, {n, 2}, std::uniform_int_distribution<std::size_t>(2, 2 * n)(rng));
    auto r = classify(s, {});
    o.require(r.cls == LocalityClass::strong_local_evidence && r.exact, "n x 2 product set " + std::to_string(t));
  }
  SolverConfig exact;
  exact.exact_only = true;
  std::uniform_int_distribution<std::size_t> count(2, 12);
  for (int t = 0; t < kBiseparableTrials; ++t) {
    auto s = random_biseparable(rng, 3, count(rng));
    auto r = check_dim2_nogo(s, exact);
    o.require(r.confirmed, "biseparable set " + std::to_string(t) + ": " + r.reason);
  }
  o.note << kStructuralTrials << " two-state sets, " << kStructuralTrials << " n x 2 product sets, "
         << kBiseparableTrials << " biseparable sets";
}

// 8
void domino_irreducible(Outcome& o) {
  EnumerationConfig cfg;
  cfg.solver.exact_only = true;
  auto r = is_pvm_irreducible(build_named_set(NamedSet::Domino), Partition::finest(2), cfg);
  o.require(r.verdict == Irreducibility::irreducible, irreducibility_name(r.verdict));
  for (const auto& b : r.blocks) o.note << (o.note.tellp() > 0 ? "; " : "") << b.certificate;
}

// Random PVM on a group: an orthogonal basis cut into consecutive chunks.
LocalPVM random_local_pvm(std::mt19937_64& rng, const PartySpec& spec, const std::vector<std::size_t>& group) {
  const std::size_t d = spec.dim_of(group);
  std::vector<Vec> raw;
  for (std::size_t k = 0; k < d; ++k) raw.push_back(random_vec(rng, d));
  for (std::size_t k = 0; k < d; ++k) raw.push_back(Vec::basis(d, k));
  auto basis = gram_schmidt(raw);
  std::vector<Mat> els;
  std::size_t next = 0;
  while (next < d) {
    std::size_t len = std::uniform_int_distribution<std::size_t>(1, d - next)(rng);
    std::vector<Vec> chunk(basis.begin() + next, basis.begin() + next + len);
    els.push_back(projector_onto_span(chunk, d));
    next += len;
  }
  return make_local_pvm(spec, group, isolating_partition(spec.parties(), group), els);
}

// Per-node label accounting through apply, independent of the replay code.
bool accounted(const StateSet& s, const ProtocolTree& t, const Partition& p, std::set<std::string>& reached) {
  if (t.is_leaf()) {
    for (const auto& l : s.labels()) reached.insert(l);
    return true;
  }
  std::string text;
  for (const auto& e : t.pvm) text += (text.empty() ? "" : ";") + e;
  auto br = apply(s, make_local_pvm(s.spec, t.group, p, text));
  bool ok = true;
  for (const auto& b : br) {
    std::multiset<std::string> here(b.annihilated.begin(), b.annihilated.end());
    for (const auto& l : b.states.labels()) here.insert(l);
    auto all = s.labels();
    ok = ok && here == std::multiset<std::string>(all.begin(), all.end());
    for (const auto& c : t.children)
      if (c.outcome == b.outcome && !b.states.empty()) ok = accounted(b.states, c, p, reached) && ok;
  }
  return ok;
}

// 9
void properties(Outcome& o) {
  std::mt19937_64 rng(kSeed + 9);
  const std::vector<std::vector<std::size_t>> shapes = {{2, 3}, {3, 3}, {2, 2, 2}, {3, 2, 3}};
  std::size_t norm_cases = 0;
  for (int t = 0; t < 40; ++t) {
    StateSet s;
    s.spec = PartySpec(shapes[t % shapes.size()]);
    for (int k = 0; k < 4; ++k) s.add("s" + std::to_string(k), random_vec(rng, s.spec.total()));
    std::vector<std::size_t> group{static_cast<std::size_t>(t) % s.spec.parties()};
    if (t % 3 == 0 && s.spec.parties() > 2) group.push_back((group[0] + 1) % s.spec.parties());
    LocalPVM lp = random_local_pvm(rng, s.spec, group);
    Vec sums(s.size());
    for (const auto& b : apply(s, lp))
      for (const auto& st : b.states.states)
        for (std::size_t i = 0; i < s.size(); ++i)
          if (s.states[i].label == st.label) sums[i] += inner(st.amps, st.amps);
    for (std::size_t i = 0; i < s.size(); ++i) o.require(sums[i] == inner(s.vec(i), s.vec(i)), "norm lost");
    ++norm_cases;

    auto parts = all_partitions(s.spec.parties());
    for (auto p : {parts[t % parts.size()], parts[(t + 1) % parts.size()]}) {
      std::reverse(p.blocks.begin(), p.blocks.end());
      auto m = merge_parties(s, p);
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
          o.require(inner(s.vec(i), s.vec(j)) == inner(m.vec(i), m.vec(j)), "merge changed an inner product");
    }
  }

  SolverConfig exact;
  exact.exact_only = true;
  int misses = 0, counted = 0;
  for (int t = 0; t < kPlantedTrials; ++t) {
    auto pl = planted_set(rng);
    auto rep = rank1_op_directions(pl.set, {pl.party}, exact);
    if (rep.support_dim <= 1) continue;  // nothing to recover
    ++counted;
    if (rep.none_found || !rep.covers(pl.theta)) ++misses;
  }
  o.require(misses == 0, std::to_string(misses) + " planted misses");

  std::size_t trees = 0;
  auto check_tree = [&](const StateSet& s, const ProtocolTree& t, const Partition& p) {
    std::set<std::string> reached;
    bool ok = accounted(s, t, p, reached);
    Verdict v = execute_and_verify(s, t, p);
    for (const auto& b : v.trace) {
      std::set<std::string> here(b.labels.begin(), b.labels.end());
      ok = ok && here.size() == b.labels.size();
    }
    for (const auto& l : s.labels()) ok = ok && reached.count(l);
    o.require(ok, "label invariant broken");
    ++trees;
  };
  for (const char* name : {"s1_protocol", "s2_protocol"}) {
    auto fx = fixture(name);
    StateSet s = fixture_set(fx);
    check_tree(s, protocol_from_json(fx.at("protocol"), s.spec), fixture_partition(fx, s.spec));
  }
  Partition two = Partition::finest(2);
  std::uniform_int_distribution<std::size_t> dim(2, 6);
  for (int t = 0; t < 50; ++t) {
    auto s = structured_2xn(rng, dim(rng), t % 2);
    check_tree(s, lemma1_protocol(s, two), two);
  }
  o.note << norm_cases << " norm/merge cases, " << counted << " planted trials with support > 1, " << trees
         << " trees";
}

// 10
void monotonicity(Outcome& o) {
  MActivationConfig cfg;
  cfg.enumeration.solver.exact_only = true;
  auto fx = fixture("theorem4");
  for (auto n : {NamedSet::S1, NamedSet::S2}) {
    StateSet s = build_named_set(n);
    MActivationConfig c = cfg;
    if (n == NamedSet::S2) c.candidates.push_back(fixture_pvm(fx.at("first"), s.spec, fixture_partition(fx, s.spec)));
    auto strong3 = is_m_activable(s, 3, true, c);
    auto weak3 = is_m_activable(s, 3, false, c);
    auto two = is_m_activable(s, 2, false, c);
    const std::string tag = set_name(n) + ": strong-3 " + tri_name(strong3.verdict) + ", 3 " +
                            tri_name(weak3.verdict) + ", 2 " + tri_name(two.verdict);
    o.require(!(strong3.verdict == Tri::yes && two.verdict == Tri::no), tag + " contradicts strong-3 => 2");
    o.require(!(strong3.verdict == Tri::yes && weak3.verdict == Tri::no), tag + " contradicts strong-3 => 3");
    o.require(strong3.verdict != Tri::unknown && two.verdict != Tri::unknown, tag + " left open");
    o.note << (o.note.tellp() > 0 ? "; " : "") << tag;
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"orthogonality goldens", orthogonality_goldens},
      {"lemma 1 protocols", lemma1},
      {"theorem 2 activation of S1 by Bob", [](Outcome& o) { theorem(o, 2); }},
      {"theorem 3 no activation of S2", [](Outcome& o) { theorem(o, 3); }},
      {"theorem 4 joint BC activation of S2", [](Outcome& o) { theorem(o, 4); }},
      {"theorem 5 union in 8x8x8", [](Outcome& o) { theorem(o, 5); }},
      {"strong-local recognitions", strong_local},
      {"domino irreducibility", domino_irreducible},
      {"property suites", properties},
      {"activability monotonicity", monotonicity},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %2zu: %s (%.2f s) - %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                t, o.note.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
