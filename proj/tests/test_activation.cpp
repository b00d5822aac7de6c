#include <gtest/gtest.h>

#include <random>

#include "locality/activation.hpp"
#include "locality/fixtures.hpp"
#include "locality/ket.hpp"
#include "locality/named_sets.hpp"
#include "test_util.hpp"

using namespace loc;

namespace {

// Exact rotation in the (i, j) plane by the 3-4-5 angle.
Mat rotation(std::size_t dim, std::size_t i, std::size_t j) {
  Mat r = Mat::identity(dim);
  r(i, i) = Scalar(mpq_class(3, 5));
  r(j, j) = Scalar(mpq_class(3, 5));
  r(i, j) = Scalar(mpq_class(-4, 5));
  r(j, i) = Scalar(mpq_class(4, 5));
  return r;
}

Mat random_unitary3(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2), coin(0, 1);
  Mat u = Mat::identity(3);
  for (int k = 0; k < 3; ++k) {
    std::size_t i = pick(rng), j = (i + 1 + coin(rng)) % 3;
    u = u * rotation(3, i, j);
  }
  Mat phase = Mat::identity(3);
  std::size_t k = pick(rng);
  phase(k, k) = Scalar::imag_unit();
  return u * phase;
}

std::set<std::string> basis_texts(const std::vector<Vec>& basis, const std::vector<std::size_t>& dims) {
  std::set<std::string> out;
  for (const auto& v : basis) out.insert(format_ket(canonical_direction(v), dims));
  return out;
}

StateSet restricted(const StateSet& s, std::vector<std::size_t> order) {
  StateSet out;
  out.spec = s.spec;
  for (auto k : order) out.add(s.states[k].label, s.states[k].amps);
  return out;
}

}  // namespace

TEST(Domino, ReferenceMatchesItself) {
  StateSet d = domino_reference();
  EXPECT_FALSE(check_mutual_orthogonality(d).has_value());
  auto w = domino_match(d);
  ASSERT_TRUE(w.has_value());
  std::set<std::size_t> image(w->permutation.begin(), w->permutation.end());
  EXPECT_EQ(image.size(), 9u);
  EXPECT_EQ(basis_texts(w->basis_a, {3}), (std::set<std::string>{"0", "1", "2"}));
  EXPECT_EQ(build_named_set(NamedSet::Domino).size(), 9u);
  EXPECT_TRUE(domino_match(build_named_set(NamedSet::Domino)).has_value());
}

TEST(Domino, InvariantUnderLocalUnitariesScalingAndOrder) {
  std::mt19937_64 rng(21);
  StateSet d = domino_reference();
  for (int trial = 0; trial < 30; ++trial) {
    Mat ua = random_unitary3(rng), ub = random_unitary3(rng);
    Mat u = kron(ua, ub);
    std::vector<std::size_t> order(9);
    for (std::size_t k = 0; k < 9; ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), rng);
    StateSet t;
    t.spec = d.spec;
    for (auto k : order) t.add(d.states[k].label, testutil::random_scalar(rng) * (u * d.vec(k)));
    bool zero = false;
    for (const auto& st : t.states) zero = zero || st.amps.is_zero();
    if (zero) continue;
    ASSERT_FALSE(check_mutual_orthogonality(t).has_value());
    auto w = domino_match(t);
    ASSERT_TRUE(w.has_value()) << "trial " << trial;
    for (std::size_t k = 0; k < 9; ++k) {
      // the matched domino state has the same support pattern
      const Vec& target = d.vec(w->permutation[k]);
      Vec fa = local_factor(t.vec(k), t.spec, {0});
      std::size_t nz = 0;
      for (const auto& e : w->basis_a) nz += !inner(e, fa).is_zero();
      std::size_t want = 0;
      Vec ta = local_factor(target, d.spec, {0});
      for (const auto& z : ta) want += !z.is_zero();
      EXPECT_EQ(nz, want);
    }
  }
}

TEST(Domino, RejectsNearMisses) {
  StateSet d = domino_reference();
  StateSet eight = restricted(d, {0, 1, 2, 3, 4, 5, 6, 7});
  EXPECT_FALSE(domino_match(eight).has_value());
  // Unbalanced pair: still orthogonal, no longer a relabeled domino.
  StateSet skew = set_from_kets(PartySpec({3, 3}),
                                {{"a", "|0>|0+[2]1>"}, {"b", "|0>|[2]0-1>"}, {"c", "|0+1>|2>"}, {"d", "|0-1>|2>"},
                                 {"e", "|1+2>|0>"}, {"f", "|1-2>|0>"}, {"g", "|2>|1+2>"}, {"h", "|2>|1-2>"},
                                 {"i", "|1>|1>"}},
                                "test");
  ASSERT_FALSE(check_mutual_orthogonality(skew).has_value());
  EXPECT_FALSE(domino_match(skew).has_value());
  StateSet ent = set_from_kets(PartySpec({3, 3}), {{"a", "|00+11>"}}, "test");
  EXPECT_FALSE(domino_match(ent).has_value());
}

TEST(Activation, BobActivatesS1) {
  auto fx = fixture("theorem2");
  StateSet s1 = fixture_set(fx);
  Partition p = fixture_partition(fx, s1.spec);
  LocalPVM bob = fixture_pvm(fx.at("first"), s1.spec, p);
  auto rep = verify_activation(s1, bob, p);
  EXPECT_TRUE(rep.activated) << rep.reason;
  EXPECT_FALSE(rep.redundancy.redundant);
  ASSERT_EQ(rep.branches.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& b = rep.branches[k];
    EXPECT_TRUE(b.certified);
    EXPECT_EQ(b.states.size(), 9u);
    ASSERT_TRUE(b.domino.has_value());
    EXPECT_EQ(b.domino->partition.str(s1.spec), "A|BC");
    std::set<std::string> want;
    for (const auto& t : fx["domino_supports"][k]) want.insert(t.get<std::string>());
    EXPECT_EQ(basis_texts(b.domino->basis_b, {2, 3}), want);
  }
}

TEST(Activation, JointBCActivatesS2) {
  auto fx = fixture("theorem4");
  StateSet s2 = fixture_set(fx);
  Partition p = fixture_partition(fx, s2.spec);
  LocalPVM m = fixture_pvm(fx.at("first"), s2.spec, p);
  auto rep = verify_activation(s2, m, p);
  EXPECT_TRUE(rep.activated) << rep.reason;
  ASSERT_EQ(rep.branches.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    ASSERT_TRUE(rep.branches[k].domino.has_value());
    std::set<std::string> want;
    for (const auto& t : fx["domino_supports"][k]) want.insert(t.get<std::string>());
    EXPECT_EQ(basis_texts(rep.branches[k].domino->basis_b, {2, 3}), want);
  }
}

TEST(Activation, NoSinglePartyRoundActivatesS2) {
  StateSet s2 = build_named_set(NamedSet::S2);
  Partition fine = Partition::finest(3);
  EnumerationConfig cfg;
  cfg.solver.exact_only = true;
  std::size_t tried = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_TRUE(enumeration_is_complete(s2, {k}, cfg.solver));
    for (const auto& lp : enumerate_op_pvms(s2, {k}, fine, cfg)) {
      auto rep = verify_activation(s2, lp, fine, cfg);
      EXPECT_FALSE(rep.activated);
      bool some = false;
      for (const auto& b : rep.branches) some = some || b.status == Status::distinguishable;
      EXPECT_TRUE(some) << pvm_key(lp.pvm);
      ++tried;
    }
  }
  EXPECT_EQ(tried, 4u);
}

TEST(Activation, RejectsBadFirstRounds) {
  StateSet s1 = build_named_set(NamedSet::S1);
  Partition fine = Partition::finest(3);
  EXPECT_THROW(verify_activation(s1, make_local_pvm(s1.spec, {0}, fine, "0+1"), fine), std::invalid_argument);
  EXPECT_THROW(verify_activation(s1, make_local_pvm(s1.spec, {0}, fine, "0,1,2"), fine), std::invalid_argument);
  Partition a_bc = Partition::parse("A|BC", s1.spec);
  EXPECT_THROW(verify_activation(s1, make_local_pvm(s1.spec, {0, 1}, Partition::whole(3), "00"), a_bc),
               std::invalid_argument);
}

TEST(Activation, RedundantSetIsNeverActivated) {
  // Two domino copies on disjoint supports, told apart by C alone. Measuring
  // C leaves two dominoes, but discarding C already keeps orthogonality.
  StateSet d = domino_reference();
  PartySpec spec({6, 6, 2});
  StateSet s;
  s.spec = spec;
  for (std::size_t copy = 0; copy < 2; ++copy) {
    StateSet e = embed_parties(d, PartySpec({6, 6}), {0, 1}, {3 * copy, 3 * copy});
    for (const auto& st : e.states)
      s.add(st.label + "_" + std::to_string(copy), tensor(st.amps, Vec::basis(2, copy)));
  }
  ASSERT_FALSE(check_mutual_orthogonality(s).has_value());
  Partition fine = Partition::finest(3);
  auto rep = verify_activation(s, make_local_pvm(spec, {2}, fine, "0;1"), fine);
  EXPECT_TRUE(rep.redundancy.redundant);
  for (const auto& b : rep.branches) EXPECT_TRUE(b.certified);
  EXPECT_FALSE(rep.activated);
}

TEST(Classify, StructuralStrongLocal) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    StateSet two;
    two.spec = PartySpec({3, 3, 2});
    Vec a = testutil::random_vec(rng, 18);
    Vec b = testutil::random_vec(rng, 18);
    b -= (inner(a, b) / inner(a, a)) * a;
    if (b.is_zero()) continue;
    two.add("a", a);
    two.add("b", b);
    auto r = classify(two, {});
    EXPECT_EQ(r.cls, LocalityClass::strong_local_evidence);
    EXPECT_TRUE(r.exact);
  }
  std::uniform_int_distribution<std::size_t> dim(2, 5);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = dim(rng);
    StateSet s = testutil::random_product_set(rng, {n, 2}, 2 * n);
    auto r = classify(s, {});
    EXPECT_EQ(r.cls, LocalityClass::strong_local_evidence);
    EXPECT_TRUE(r.exact);
  }
}

TEST(Classify, NamedSets) {
  auto s1 = classify(build_named_set(NamedSet::S1), {});
  EXPECT_EQ(s1.cls, LocalityClass::type_i);
  ASSERT_TRUE(s1.witness.has_value());
  EXPECT_EQ(s1.witness->first.group.size(), 1u);

  StateSet s2 = build_named_set(NamedSet::S2);
  auto fx = fixture("theorem4");
  Partition p = fixture_partition(fx, s2.spec);
  ClassifyConfig cfg;
  cfg.joint_candidates.push_back(fixture_pvm(fx.at("first"), s2.spec, p));
  auto r2 = classify(s2, {{1, 2}}, cfg);
  EXPECT_EQ(r2.cls, LocalityClass::type_ii);
  ASSERT_TRUE(r2.witness.has_value());
  EXPECT_EQ(r2.witness->first.group.size(), 2u);

  auto dom = classify(build_named_set(NamedSet::Domino), {});
  EXPECT_EQ(dom.cls, LocalityClass::indistinguishable_already);
}

TEST(Classify, InvariantUnderRescalingAndRelabeling) {
  std::mt19937_64 rng(23);
  StateSet s1 = build_named_set(NamedSet::S1);
  std::vector<std::size_t> order(s1.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  StateSet t;
  t.spec = s1.spec;
  for (auto k : order) {
    Scalar c;
    while (c.is_zero()) c = testutil::random_scalar(rng);
    t.add("x" + std::to_string(k), c * s1.vec(k));
  }
  EXPECT_EQ(classify(t, {}).cls, LocalityClass::type_i);
}

TEST(Dim2NoGo, ResidualAndProductSets) {
  // Charlie's rank-2 outcome {0,1} on S2, with Charlie restricted to that span.
  StateSet residual = set_from_kets(PartySpec({3, 2, 2}),
                                    {{"a1", "|0>|0>|0+1>"},
                                     {"a2", "|0>|0>|0-1>"},
                                     {"b1", "|2>|1>|0+1>"},
                                     {"b2", "|2>|1>|0-1>"},
                                     {"c1", "|0+1>|1>|0-1>"},
                                     {"c2", "|0-1>|1>|0-1>"},
                                     {"d1", "|1+2>|0>|0-1>"},
                                     {"d2", "|1-2>|0>|0-1>"}},
                                    "test");
  auto r = check_dim2_nogo(residual);
  EXPECT_TRUE(r.confirmed) << r.reason;
  EXPECT_TRUE(r.alice_candidates.empty());

  std::mt19937_64 rng(24);
  auto prod = testutil::random_product_set(rng, {4, 2, 2}, 10);
  EXPECT_TRUE(check_dim2_nogo(prod).confirmed);

  for (int trial = 0; trial < 20; ++trial) {
    StateSet bi = random_biseparable(rng, 3, 6);
    auto out = check_dim2_nogo(bi);
    EXPECT_TRUE(out.confirmed) << out.reason;
  }

  StateSet ent = set_from_kets(PartySpec({2, 2, 2}), {{"a", "|000+111>"}}, "test");
  EXPECT_THROW(check_dim2_nogo(ent), std::invalid_argument);
  EXPECT_THROW(check_dim2_nogo(build_named_set(NamedSet::S2)), std::invalid_argument);
}

TEST(MActivable, NamedSetsAndMonotonicity) {
  StateSet s1 = build_named_set(NamedSet::S1);
  EXPECT_EQ(is_m_activable(s1, 3, false).verdict, Tri::yes);
  auto strong = is_m_activable(s1, 3, true);
  auto two = is_m_activable(s1, 2, false);
  if (strong.verdict == Tri::yes) EXPECT_NE(two.verdict, Tri::no);
  EXPECT_EQ(strong.verdict, Tri::yes);

  StateSet s2 = build_named_set(NamedSet::S2);
  EXPECT_EQ(is_m_activable(s2, 3, false).verdict, Tri::no);
  auto fx = fixture("theorem4");
  MActivationConfig cfg;
  cfg.candidates.push_back(fixture_pvm(fx.at("first"), s2.spec, fixture_partition(fx, s2.spec)));
  auto s2two = is_m_activable(s2, 2, false, cfg);
  EXPECT_EQ(s2two.verdict, Tri::yes);
  EXPECT_THROW(is_m_activable(s2, 4, false), std::invalid_argument);
  EXPECT_THROW(is_m_activable(s2, 1, false), std::invalid_argument);
}
