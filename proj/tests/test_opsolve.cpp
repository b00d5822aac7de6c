#include <gtest/gtest.h>

#include <random>

#include "locality/ket.hpp"
#include "locality/named_sets.hpp"
#include "locality/opsolve.hpp"
#include "test_util.hpp"

using namespace loc;

namespace {

SolverConfig exact_cfg() {
  SolverConfig c;
  c.exact_only = true;
  return c;
}

bool has_pvm(const std::vector<LocalPVM>& pvms, const PartySpec& spec, const std::vector<std::size_t>& group,
             const std::string& text) {
  auto want = make_local_pvm(spec, group, isolating_partition(spec.parties(), group), text);
  for (const auto& p : pvms)
    if (pvm_key(p.pvm) == pvm_key(want.pvm)) return true;
  return false;
}

using Planted = PlantedSet;

}  // namespace

TEST(Constraints, MatchDirectExpansion) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    StateSet s;
    s.spec = PartySpec({2, 3});
    for (int k = 0; k < 3; ++k) s.add("s" + std::to_string(k), testutil::random_vec(rng, 6));
    for (std::size_t g = 0; g < 2; ++g) {
      const std::size_t d = s.spec.dims[g];
      LocalLayout lay(s.spec, {g});
      for (const auto& c : constraint_matrices(s, {g})) {
        ASSERT_EQ(c.mat.rows(), d);
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) {
            Mat op = outer(Vec::basis(d, a), Vec::basis(d, b));
            EXPECT_EQ(c.mat(a, b), inner(s.vec(c.i), lay.act(op, s.vec(c.j))));
          }
      }
    }
  }
}

TEST(Constraints, ProductStructure) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    std::vector<Vec> alpha, beta;
    StateSet s;
    s.spec = PartySpec({3, 2});
    for (int k = 0; k < 3; ++k) {
      alpha.push_back(testutil::random_vec(rng, 3));
      beta.push_back(testutil::random_vec(rng, 2));
      s.add("s" + std::to_string(k), tensor(alpha.back(), beta.back()));
    }
    for (const auto& c : constraint_matrices(s, {0}))
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          EXPECT_EQ(c.mat(a, b), alpha[c.i][a].conj() * alpha[c.j][b] * inner(beta[c.i], beta[c.j]));
  }
}

TEST(Constraints, LocallyOrthogonalPairGivesZero) {
  StateSet s;
  s.spec = PartySpec({2, 2});
  s.add("a", ket("00", {2, 2}));
  s.add("b", ket("11", {2, 2}));
  EXPECT_TRUE(constraint_matrices(s, {0})[0].mat.is_zero());
}

TEST(Constraints, AliceOnS2ForcesOverlapZero) {
  auto s2 = build_named_set(NamedSet::S2);
  // phi2_1 and phi2_3: Alice parts |0>, |1>; the rest overlap <00+01+02-12|02-12> = 2.
  for (const auto& c : constraint_matrices(s2, {0})) {
    if (c.i != 0 || c.j != 2) continue;
    Mat want(3, 3);
    want(0, 1) = 2;
    EXPECT_EQ(c.mat, want);
  }
}

TEST(Rank1, S2Parties) {
  auto s2 = build_named_set(NamedSet::S2);
  auto alice = rank1_op_directions(s2, {0}, exact_cfg());
  ASSERT_TRUE(alice.none_found);
  EXPECT_EQ(alice.none_found->method, "exact-case-split");
  auto bob = rank1_op_directions(s2, {1}, exact_cfg());
  ASSERT_TRUE(bob.none_found);
  EXPECT_EQ(bob.none_found->method, "exact-case-split");

  auto charlie = rank1_op_directions(s2, {2}, exact_cfg());
  EXPECT_TRUE(charlie.complete);
  EXPECT_TRUE(charlie.families.empty());
  ASSERT_EQ(charlie.solutions.size(), 3u);
  std::vector<Vec> want{ket("0-1", {3}), ket("0+1", {3}), ket("2", {3})};
  for (const auto& w : want) EXPECT_TRUE(charlie.covers(w)) << w.str();
  for (const auto& d : charlie.solutions) EXPECT_EQ(d.exactness, Exactness::exact);
}

TEST(Rank1, DominoHasNoDirection) {
  auto dom = build_named_set(NamedSet::Domino);
  for (std::size_t p = 0; p < 2; ++p) {
    auto rep = rank1_op_directions(dom, {p}, exact_cfg());
    ASSERT_TRUE(rep.none_found) << p;
    EXPECT_EQ(rep.none_found->method, "exact-case-split");
  }
}

TEST(Rank1, ScalingStatesKeepsSolutions) {
  std::mt19937_64 rng(43);
  auto s2 = build_named_set(NamedSet::S2);
  auto base = rank1_op_directions(s2, {2}, exact_cfg());
  for (int t = 0; t < 5; ++t) {
    StateSet scaled = s2;
    for (auto& st : scaled.states) {
      Scalar c = testutil::random_scalar(rng);
      if (c.is_zero()) c = Scalar(mpq_class(1), mpq_class(1));
      st.amps *= c;
    }
    auto rep = rank1_op_directions(scaled, {2}, exact_cfg());
    ASSERT_EQ(rep.solutions.size(), base.solutions.size());
    for (std::size_t k = 0; k < rep.solutions.size(); ++k) EXPECT_EQ(rep.solutions[k].theta, base.solutions[k].theta);
  }
}

TEST(Rank1, PlantedDirectionIsAlwaysFound) {
  std::mt19937_64 rng(44);
  int complete = 0;
  for (int t = 0; t < 1000; ++t) {
    auto pl = planted_set(rng);
    ASSERT_FALSE(check_mutual_orthogonality(pl.set)) << t;
    auto rep = rank1_op_directions(pl.set, {pl.party}, exact_cfg());
    if (rep.support_dim <= 1) continue;
    complete += rep.complete;
    EXPECT_FALSE(rep.none_found) << t;
    EXPECT_TRUE(rep.covers(pl.theta)) << t << " " << pl.theta.str();
  }
  EXPECT_GT(complete, 900);
}

TEST(Rank1, DimensionTwoStaysExact) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 200; ++t) {
    auto s = testutil::random_product_set(rng, {2, 3}, 3);
    // An entangled state in the orthocomplement of the first two makes the problem non-product.
    StateSet e;
    e.spec = s.spec;
    for (int k = 0; k < 4; ++k) e.add("r" + std::to_string(k), testutil::random_vec(rng, 6));
    auto basis = gram_schmidt({e.vec(0), e.vec(1), e.vec(2), e.vec(3)});
    StateSet mixed;
    mixed.spec = s.spec;
    for (std::size_t k = 0; k < basis.size(); ++k) mixed.add("b" + std::to_string(k), basis[k]);
    SolverConfig cfg;  // numeric fallback allowed, must not be used
    for (const auto* set : {&s, &mixed}) {
      auto rep = rank1_op_directions(*set, {0}, cfg);
      EXPECT_TRUE(rep.complete);
      for (const auto& d : rep.solutions) EXPECT_NE(d.exactness, Exactness::numeric);
    }
  }
}

TEST(Lifted, ContainsInverseGram) {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 30; ++t) {
    auto s = testutil::random_product_set(rng, {3, 2, 2}, 5);
    for (std::size_t p = 0; p < 3; ++p) EXPECT_GE(lifted_dimension(s, {p}), 1u);
  }
}

TEST(Enumerate, S2Charlie) {
  auto s2 = build_named_set(NamedSet::S2);
  EnumerationConfig cfg;
  cfg.solver = exact_cfg();
  cfg.max_outcomes = 3;
  auto pvms = enumerate_op_pvms(s2, {2}, Partition::finest(3), cfg);
  EXPECT_TRUE(has_pvm(pvms, s2.spec, {2}, "0-1;0+1;2"));
  EXPECT_TRUE(has_pvm(pvms, s2.spec, {2}, "2;0,1"));
  EXPECT_TRUE(has_pvm(pvms, s2.spec, {2}, "0+1;0-1,2"));
  EXPECT_TRUE(has_pvm(pvms, s2.spec, {2}, "0-1;0+1,2"));
  EXPECT_EQ(pvms.size(), 4u);
  for (const auto& p : pvms) {
    EXPECT_FALSE(preserves_orthogonality(s2, p));
    EXPECT_FALSE(is_trivial(p.pvm));
  }
}

TEST(Enumerate, S1Bob) {
  auto s1 = build_named_set(NamedSet::S1);
  auto pvms = enumerate_op_pvms(s1, {1}, Partition::finest(3));
  EXPECT_TRUE(has_pvm(pvms, s1.spec, {1}, "0;1"));
  // Every real basis works for Bob; the curve family supplies the rotated ones.
  EXPECT_TRUE(has_pvm(pvms, s1.spec, {1}, "0+1;0-1"));
}

TEST(Enumerate, DimensionTwoWithoutDirectionsIsEmpty) {
  auto s2 = build_named_set(NamedSet::S2);
  EXPECT_TRUE(enumerate_op_pvms(s2, {1}, Partition::finest(3)).empty());
}

TEST(Irreducible, Domino) {
  auto dom = build_named_set(NamedSet::Domino);
  auto rep = is_pvm_irreducible(dom, Partition::finest(2));
  EXPECT_EQ(rep.verdict, Irreducibility::irreducible);
}

TEST(Irreducible, S2IsReducibleThroughCharlie) {
  auto s2 = build_named_set(NamedSet::S2);
  auto rep = is_pvm_irreducible(s2, Partition::finest(3));
  EXPECT_EQ(rep.verdict, Irreducibility::reducible);
  ASSERT_TRUE(rep.witness);
  EXPECT_EQ(rep.witness->group, (std::vector<std::size_t>{2}));
  EXPECT_EQ(rep.blocks[0].verdict, Irreducibility::irreducible);
  EXPECT_EQ(rep.blocks[1].verdict, Irreducibility::irreducible);
}

TEST(Irreducible, TwoStatesNeverCertified) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 100; ++t) {
    StateSet s;
    s.spec = PartySpec({2, 3});
    Vec a = testutil::random_vec(rng, 6), b = testutil::random_vec(rng, 6);
    auto gs = gram_schmidt({a, b});
    if (gs.size() < 2) continue;
    s.add("a", gs[0]);
    s.add("b", gs[1]);
    EXPECT_NE(is_pvm_irreducible(s, Partition::finest(2)).verdict, Irreducibility::irreducible) << t;
  }
}
