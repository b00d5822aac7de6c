#include <gtest/gtest.h>

#include <random>

#include "locality/ket.hpp"
#include "locality/linalg.hpp"
#include "test_util.hpp"

using namespace loc;

TEST(Scalar, ArithmeticIsExact) {
  Scalar a(mpq_class(1, 3), mpq_class(2));
  Scalar b(mpq_class(-1, 2), mpq_class(1, 5));
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a - a, Scalar(0));
  EXPECT_EQ(a * a.conj(), Scalar(a.norm2()));
  EXPECT_EQ(Scalar::imag_unit() * Scalar::imag_unit(), Scalar(-1));
  EXPECT_THROW(a / Scalar(0), std::domain_error);
}

TEST(Scalar, RationalSqrt) {
  mpq_class r;
  EXPECT_TRUE(rational_sqrt(mpq_class(9, 4), &r));
  EXPECT_EQ(r, mpq_class(3, 2));
  EXPECT_FALSE(rational_sqrt(mpq_class(2), &r));
  EXPECT_FALSE(rational_sqrt(mpq_class(-4), &r));
}

TEST(Inner, Examples) {
  std::vector<std::size_t> d323{3, 2, 3};
  EXPECT_EQ(inner(ket("0(00+01+10-11)", d323), ket("0(00-01-10-11)", d323)), Scalar(0));
  Vec v = ket("00-01-10-11", {2, 2});
  EXPECT_EQ(inner(v, v), Scalar(4));
  EXPECT_EQ(inner(ket("0-1", {2}), ket("0+1", {2})), Scalar(0));
  EXPECT_THROW(inner(Vec(2), Vec(3)), std::invalid_argument);
}

TEST(Inner, ConjugateSymmetry) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Vec u = testutil::random_vec(rng, 5), v = testutil::random_vec(rng, 5);
    EXPECT_EQ(inner(u, v), inner(v, u).conj());
  }
}

TEST(Tensor, Examples) {
  EXPECT_EQ(tensor(Vec::basis(2, 0), Vec::basis(2, 1)), Vec::basis(4, 1));
  EXPECT_EQ(tensor(ket("0+1", {2}), ket("0-1", {2})), (Vec{1, -1, 1, -1}));
  const std::size_t m = 1;
  Vec xi1 = tensor({Vec::basis(3, m), ket("0-1", {2}), Vec::basis(3, m)});
  EXPECT_EQ(xi1, ket("1(01-11)", {3, 2, 3}));
}

TEST(Tensor, Associative) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    Vec a = testutil::random_vec(rng, 2), b = testutil::random_vec(rng, 3),
        c = testutil::random_vec(rng, 2);
    EXPECT_EQ(tensor(tensor(a, b), c), tensor(a, tensor(b, c)));
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Mat::identity(3)), 3u);
  EXPECT_EQ(rank(reshape(ket("00", {2, 2}), 2, 2)), 1u);
  EXPECT_EQ(rank(reshape(ket("00+11", {2, 2}), 2, 2)), 2u);
  EXPECT_THROW(reshape(Vec(4), 3, 2), std::invalid_argument);
}

TEST(Rank, AdjointAndRowScaling) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int t = 0; t < 100; ++t) {
    Mat a = testutil::random_mat(rng, 4, 5, /*sparse=*/true);
    const std::size_t r = rank(a);
    EXPECT_EQ(r, rank(a.adjoint()));
    Mat b = a;
    for (std::size_t i = 0; i < b.rows(); ++i) {
      Scalar c(mpq_class(coin(rng) + 1, 3), mpq_class(coin(rng) - 1));
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) *= c;
    }
    EXPECT_EQ(r, rank(b));
  }
}

TEST(Nullspace, SolvesSystem) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    Mat a = testutil::random_mat(rng, 3, 5, true);
    auto ns = nullspace(a);
    EXPECT_EQ(ns.size() + rank(a), 5u);
    for (const auto& x : ns) EXPECT_TRUE((a * x).is_zero());
  }
}

TEST(GramSchmidt, OrthogonalAndSameSpan) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 30; ++t) {
    std::vector<Vec> vs;
    for (int k = 0; k < 4; ++k) vs.push_back(testutil::random_vec(rng, 5));
    vs.push_back(vs[0] + vs[1]);
    auto gs = gram_schmidt(vs);
    EXPECT_EQ(gs.size(), rank(Mat::from_columns(vs, 5)));
    for (std::size_t i = 0; i < gs.size(); ++i)
      for (std::size_t j = i + 1; j < gs.size(); ++j) EXPECT_TRUE(inner(gs[i], gs[j]).is_zero());
    for (const auto& v : vs) EXPECT_TRUE(in_span(v, gs));
    Mat p = projector_onto_span(vs, 5);
    EXPECT_TRUE(p.is_hermitian());
    EXPECT_TRUE(p.is_idempotent());
  }
}

TEST(Ket, GrammarRoundTrip) {
  std::vector<std::size_t> dims{3, 2, 3};
  Vec v = ket("[1/2]0(00+i01)-[3]212+i[-2/3]110", dims);
  EXPECT_EQ(ket(format_ket(v, dims), dims), v);
  EXPECT_EQ(ket("|0\xE2\x9F\xA9|00\xE2\x88\x92" "01\xE2\x9F\xA9", {2, 2, 2}), ket("000-001", {2, 2, 2}));
  EXPECT_EQ(ket("{12}", {13}), Vec::basis(13, 12));
  auto pm = expand_pm("(0\xC2\xB1" "1)(02-12)");
  ASSERT_EQ(pm.size(), 2u);
  EXPECT_EQ(ket(pm[1], dims), ket("(0-1)(02-12)", dims));
  EXPECT_THROW(ket("0+12", {3, 3}), std::invalid_argument);
  EXPECT_THROW(ket("3", {3}), std::invalid_argument);
  EXPECT_THROW(ket("(0+1", {3}), std::invalid_argument);
}

TEST(Ket, PvmElements) {
  auto els = parse_pvm_elements("00,02,11;01,10,12", {2, 3});
  ASSERT_EQ(els.size(), 2u);
  EXPECT_EQ(els[0] + els[1], Mat::identity(6));
  auto ch = parse_pvm_elements("0-1;0+1;2", {3});
  EXPECT_EQ(ch[0], projector_onto(ket("0-1", {3})));
}
