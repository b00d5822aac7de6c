#pragma once

// Orthogonality-preserving (OP) measurements available to a party group.
//
// A projector P on the group keeps the set orthogonal iff
// <psi_i|P (x) I|psi_j> = 0 for all i < j. For P = |theta><theta| this is the
// quadratic condition sum_ab theta_a conj(theta_b) C_ij[a][b] = 0.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locality/measurement.hpp"

namespace loc {

struct ConstraintMatrix {
  std::vector<std::size_t> group;
  std::size_t i = 0, j = 0;
  Mat mat;  // C[a][b] = <psi_i|(|a><b| on group) (x) I|psi_j>
};

std::vector<ConstraintMatrix> constraint_matrices(const StateSet& s, const std::vector<std::size_t>& group);

enum class Exactness { exact, exact_sqrt, numeric };
std::string exactness_name(Exactness e);

// A rank-1 direction up to scale. For exact_sqrt the direction is
// theta + sqrt(sqrt_d) * theta_sqrt with sqrt_d a non-square rational.
struct Direction {
  Exactness exactness = Exactness::exact;
  Vec theta;
  mpq_class sqrt_d;
  Vec theta_sqrt;
  std::vector<std::complex<double>> approx;  // unit-norm double image
  std::string str() const;
};

// A set of directions that all satisfy the constraints.
//   subspace: every nonzero vector in span(basis).
//   curve: x = t*basis[0] + basis[1] with t = u + iv on the real conic
//          a(u^2+v^2) + b u + c v + e = 0 (a line when a = 0).
struct DirectionFamily {
  std::string kind;
  std::vector<Vec> basis;
  std::vector<mpq_class> conic;  // a, b, c, e for curves
  std::string str() const;
};

struct NoneFound {
  std::string method;  // "exact-case-split" or "heuristic"
  std::uint64_t seed = 0;
  double tolerance = 0;
};

struct SolutionReport {
  std::vector<std::size_t> group;
  std::size_t group_dim = 0;
  std::size_t support_dim = 0;
  std::vector<Vec> support;  // orthogonal basis of the local support
  std::vector<Direction> solutions;
  std::vector<DirectionFamily> families;
  std::optional<NoneFound> none_found;
  bool complete = false;  // the exact case split covered every branch
  std::vector<std::string> trace;

  // True when theta, projected onto the local support, is one of the
  // reported directions or lies in a reported family.
  bool covers(const Vec& theta, double tol = 1e-9) const;
  std::vector<Vec> exact_directions() const;
};

struct SolverConfig {
  bool exact_only = false;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  int starts = 64;
  std::size_t max_nodes = 20000;
  // Groups whose local support exceeds this dimension are not searched.
  std::size_t max_support = 12;
};

SolutionReport rank1_op_directions(const StateSet& s, const std::vector<std::size_t>& group,
                                   const SolverConfig& cfg = {});

// Partition that has group as one block and every other party alone.
Partition isolating_partition(std::size_t parties, const std::vector<std::size_t>& group);

struct EnumerationConfig {
  SolverConfig solver;
  std::size_t max_outcomes = 0;  // 0: no limit
  std::size_t max_support = 9;   // above this only candidates are verified
  std::size_t max_results = 2000;
  std::vector<LocalPVM> candidates;
};

// Nontrivial (relative to the set) OP PVMs on the group, sorted by pvm_key.
std::vector<LocalPVM> enumerate_op_pvms(const StateSet& s, const std::vector<std::size_t>& group,
                                        const Partition& partition, const EnumerationConfig& cfg = {});

// dim of {F Hermitian on the local support : Tr(F G_ij) = 0 for all pairs}.
// The support Gram inverse always lies in it; dimension 1 rules out every
// nontrivial OP POVM on the group.
std::size_t lifted_dimension(const StateSet& s, const std::vector<std::size_t>& group);

enum class Irreducibility { irreducible, reducible, unknown };
std::string irreducibility_name(Irreducibility v);

struct BlockVerdict {
  std::vector<std::size_t> group;
  Irreducibility verdict = Irreducibility::unknown;
  std::string certificate;  // how the block was settled
  std::optional<LocalPVM> witness;
};

struct IrreducibilityReport {
  Irreducibility verdict = Irreducibility::unknown;
  std::vector<BlockVerdict> blocks;
  std::optional<LocalPVM> witness;
};

IrreducibilityReport is_pvm_irreducible(const StateSet& s, const Partition& p,
                                        const EnumerationConfig& cfg = {});

}  // namespace loc
