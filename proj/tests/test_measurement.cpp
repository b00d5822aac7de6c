#include <gtest/gtest.h>

#include <random>

#include "locality/ket.hpp"
#include "locality/measurement.hpp"
#include "locality/named_sets.hpp"
#include "test_util.hpp"

using namespace loc;

namespace {

const std::string kPm = "\xC2\xB1";

StateSet branch_of(const std::vector<Branch>& bs, std::size_t outcome) {
  for (const auto& b : bs)
    if (b.outcome == outcome) return b.states;
  throw std::runtime_error("no such outcome");
}

StateSet listed(const PartySpec& spec, const std::vector<std::string>& kets) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::size_t k = 0; k < kets.size(); ++k) rows.push_back({"r" + std::to_string(k), kets[k]});
  return set_from_kets(spec, rows);
}

Vec norm_by_outcome_sum(const StateSet& s, const LocalPVM& lp) {
  Vec out(s.size());
  for (const auto& b : apply(s, lp))
    for (const auto& st : b.states.states)
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s.states[i].label == st.label) out[i] += inner(st.amps, st.amps);
  return out;
}

}  // namespace

TEST(Pvm, Validation) {
  EXPECT_NO_THROW(PVM::from_elements({Mat::identity(3)}));
  EXPECT_THROW(PVM::from_elements({projector_onto(ket("0", {2}))}), std::invalid_argument);
  auto p = PVM::from_elements({projector_onto(ket("0", {2}))}, true);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_THROW(PVM::from_elements({projector_onto(ket("0", {2})), projector_onto(ket("0+1", {2}))}, true),
               std::invalid_argument);
  Mat not_proj = Mat::identity(2) + Mat::identity(2);
  EXPECT_FALSE(is_projector(not_proj));
}

TEST(Pvm, Triviality) {
  EXPECT_TRUE(is_trivial(PVM::from_elements({Mat::identity(2)})));
  EXPECT_FALSE(is_trivial(PVM::from_elements({projector_onto(ket("0", {2})), projector_onto(ket("1", {2}))})));
  auto rank2 = PVM::from_elements({projector_onto_span({ket("0", {3}), ket("1", {3})}, 3)}, true);
  EXPECT_FALSE(is_trivial(rank2));
}

TEST(Embed, Ranks) {
  PartySpec spec({3, 2, 3});
  auto bob = make_local_pvm(spec, {1}, Partition::finest(3), "0");
  auto ops = embed(bob, spec);
  ASSERT_EQ(ops.size(), 2u);
  EXPECT_EQ(ops[0].rows(), 18u);
  EXPECT_EQ(rank(ops[0]), 9u);
  EXPECT_EQ(ops[0] + ops[1], Mat::identity(18));

  auto id = make_local_pvm(spec, {2}, Partition::finest(3), std::vector<Mat>{Mat::identity(3)});
  EXPECT_EQ(embed(id, spec)[0], Mat::identity(18));

  auto joint = make_local_pvm(spec, {1, 2}, Partition::parse("A|BC", spec), "00,02,11;01,10,12");
  auto jops = embed(joint, spec);
  EXPECT_EQ(rank(jops[0]), 9u);
  EXPECT_EQ(rank(jops[1]), 9u);
}

TEST(Embed, GroupOutsideBlockRejected) {
  PartySpec spec({3, 2, 3});
  EXPECT_THROW(make_local_pvm(spec, {1, 2}, Partition::finest(3), "00;01"), std::invalid_argument);
  EXPECT_THROW(make_local_pvm(spec, {1}, Partition::finest(3), std::vector<Mat>{Mat::identity(3)}),
               std::invalid_argument);
}

TEST(Embed, CommutesWithMerge) {
  std::mt19937_64 rng(31);
  PartySpec spec({2, 3, 2});
  auto merged_part = Partition::parse("AC|B", spec);
  for (int t = 0; t < 10; ++t) {
    StateSet s;
    s.spec = spec;
    for (int k = 0; k < 3; ++k) s.add("s" + std::to_string(k), testutil::random_vec(rng, 12));
    Vec proj_vec = testutil::random_vec(rng, 4);
    Mat p = projector_onto(proj_vec);
    auto lp = make_local_pvm(spec, {0, 2}, merged_part, std::vector<Mat>{p});
    auto m = merge_parties(s, merged_part);
    auto lpm = make_local_pvm(m.spec, {0}, Partition::finest(2), std::vector<Mat>{p});
    auto e1 = embed(lp, spec);
    auto e2 = embed(lpm, m.spec);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Vec a = merge_parties([&] {
                StateSet one;
                one.spec = spec;
                one.add("x", e1[0] * s.vec(i));
                return one;
              }(), merged_part).vec(0);
      EXPECT_EQ(a, e2[0] * m.vec(i));
    }
  }
}

TEST(Apply, BobOnS1) {
  auto s1 = build_named_set(NamedSet::S1);
  auto lp = make_local_pvm(s1.spec, {1}, Partition::finest(3), "0;1");
  auto bs = apply(s1, lp);
  ASSERT_EQ(bs.size(), 2u);
  auto out0 = branch_of(bs, 0);
  EXPECT_EQ(out0.size(), 9u);
  EXPECT_TRUE(equal_up_to_scalars(
      out0, listed(s1.spec, {"0(00" + kPm + "01)", "(0" + kPm + "1)02", "(1" + kPm + "2)00",
                             "2(01" + kPm + "02)", "101"})));
  EXPECT_TRUE(bs[0].annihilated.empty());
  EXPECT_FALSE(check_mutual_orthogonality(out0));
}

TEST(Apply, CharlieOnS1) {
  auto s1 = build_named_set(NamedSet::S1);
  auto lp = make_local_pvm(s1.spec, {2}, Partition::finest(3), "0,1;2");
  auto bs = apply(s1, lp);
  auto out1 = branch_of(bs, 1);
  EXPECT_TRUE(equal_up_to_scalars(out1, listed(s1.spec, {"2(0" + kPm + "1)2", "(0" + kPm + "1)(0-1)2"})));
  EXPECT_EQ(bs[1].annihilated.size(), 5u);
  auto out0 = branch_of(bs, 0);
  EXPECT_TRUE(equal_up_to_scalars(
      out0, listed(s1.spec, {"0(00+01+10-11)", "0(00-01-10-11)", "1(0-1)1", "2(0" + kPm + "1)1",
                             "(1" + kPm + "2)(0-1)0"})));
}

TEST(Apply, CharlieOnS2) {
  auto s2 = build_named_set(NamedSet::S2);
  auto bs = apply(s2, make_local_pvm(s2.spec, {2}, Partition::finest(3), "0,1;2"));
  EXPECT_TRUE(equal_up_to_scalars(
      branch_of(bs, 0), listed(s2.spec, {"00(0" + kPm + "1)", "(0" + kPm + "1)1(0-1)",
                                         "(1" + kPm + "2)0(0-1)", "21(0" + kPm + "1)"})));
  EXPECT_TRUE(equal_up_to_scalars(
      branch_of(bs, 1), listed(s2.spec, {"0(0" + kPm + "1)2", "2(0" + kPm + "1)2", "1(0-1)2"})));
}

TEST(Apply, JointBCOnS2) {
  auto s2 = build_named_set(NamedSet::S2);
  auto lp = make_local_pvm(s2.spec, {1, 2}, Partition::parse("A|BC", s2.spec), "00,02,11;01,10,12");
  auto bs = apply(s2, lp);
  EXPECT_TRUE(equal_up_to_scalars(
      branch_of(bs, 0), listed(s2.spec, {"0(00" + kPm + "02)", "102", "2(02" + kPm + "11)",
                                         "(0" + kPm + "1)11", "(1" + kPm + "2)00"})));
  EXPECT_TRUE(equal_up_to_scalars(
      branch_of(bs, 1), listed(s2.spec, {"0(01" + kPm + "12)", "(0" + kPm + "1)10", "(1" + kPm + "2)01",
                                         "2(12" + kPm + "10)", "112"})));
  EXPECT_FALSE(preserves_orthogonality(s2, lp));
}

TEST(Apply, IdentityKeepsSet) {
  auto s = build_named_set(NamedSet::S2);
  auto bs = apply(s, make_local_pvm(s.spec, {0}, Partition::finest(3), std::vector<Mat>{Mat::identity(3)}));
  ASSERT_EQ(bs.size(), 1u);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(bs[0].states.vec(i), s.vec(i));
}

TEST(Apply, NormConservation) {
  for (auto name : {NamedSet::S1, NamedSet::S2, NamedSet::Domino}) {
    auto s = build_named_set(name);
    for (std::size_t p = 0; p < s.spec.parties(); ++p) {
      std::string text = s.spec.dims[p] == 2 ? "0+1" : "0-1;2";
      auto lp = make_local_pvm(s.spec, {p}, Partition::finest(s.spec.parties()), text);
      Vec sums = norm_by_outcome_sum(s, lp);
      for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(sums[i], inner(s.vec(i), s.vec(i)));
    }
  }
}

TEST(Orthogonality, PreservationExamples) {
  auto s1 = build_named_set(NamedSet::S1);
  EXPECT_FALSE(preserves_orthogonality(s1, make_local_pvm(s1.spec, {1}, Partition::finest(3), "0;1")));
  EXPECT_FALSE(preserves_orthogonality(s1, make_local_pvm(s1.spec, {2}, Partition::finest(3), "0,1;2")));
  EXPECT_FALSE(preserves_orthogonality(
      s1, make_local_pvm(s1.spec, {0}, Partition::finest(3), std::vector<Mat>{Mat::identity(3)})));

  auto s2 = build_named_set(NamedSet::S2);
  auto alice = make_local_pvm(s2.spec, {0}, Partition::finest(3), "0");
  auto w = preserves_orthogonality(s2, alice);
  ASSERT_TRUE(w);
  // The pair phi2_6, phi2_7 is spoiled by |0><0| on Alice whatever the completion.
  LocalLayout lay(s2.spec, {0});
  Mat p0 = projector_onto(ket("0", {3}));
  EXPECT_FALSE(inner(s2.vec(5), lay.act(p0, s2.vec(6))).is_zero());
}

TEST(Orthogonality, PreservedImpliesOrthogonalBranches) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    auto s = testutil::random_product_set(rng, {2, 3, 2}, 6);
    std::size_t p = t % 3;
    std::size_t d = s.spec.dims[p];
    auto lp = make_local_pvm(s.spec, {p}, Partition::finest(3),
                             std::vector<Mat>{projector_onto(testutil::random_vec(rng, d))});
    if (preserves_orthogonality(s, lp)) continue;
    for (const auto& b : apply(s, lp)) EXPECT_FALSE(check_mutual_orthogonality(b.states));
  }
}

TEST(Triviality, RelativeToSupport) {
  StateSet s;
  s.spec = PartySpec({3, 2});
  s.add("a", ket("00", {3, 2}));
  s.add("b", ket("01", {3, 2}));
  // Alice's parts span only |0>, so any Alice PVM is uninformative here.
  EXPECT_TRUE(is_trivial_on(s, make_local_pvm(s.spec, {0}, Partition::finest(2), "0;1;2")));
  EXPECT_FALSE(is_trivial_on(s, make_local_pvm(s.spec, {1}, Partition::finest(2), "0;1")));
}

TEST(Dim2, PvmsAreTrivialOrRankOne) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 50; ++t) {
    Vec v = testutil::random_vec(rng, 2);
    auto p = PVM::from_elements({projector_onto(v)}, true);
    ASSERT_EQ(p.size(), 2u);
    for (const auto& e : p.elements) EXPECT_EQ(rank(e), 1u);
    // A rank-2 element in dimension 2 is the identity.
    auto q = PVM::from_elements({projector_onto_span({v, testutil::random_vec(rng, 2)}, 2)}, true);
    EXPECT_TRUE(q.size() == 1 ? is_trivial(q) : rank(q.elements[0]) == 1);
  }
}
