#pragma once

// Random generators for orthogonal sets with known structure. Entries are
// small Gaussian integers so everything stays exact.

#include <random>

#include "locality/stateset.hpp"

namespace loc {

Scalar random_scalar(std::mt19937_64& rng, bool complex = true);
Vec random_vec(std::mt19937_64& rng, std::size_t dim, bool complex = true);
Mat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, bool sparse);

// Tensor products of random orthogonal local bases, count distinct cells.
StateSet random_product_set(std::mt19937_64& rng, const std::vector<std::size_t>& dims, std::size_t count);

// 2 (x) n (or n (x) 2) set built from Q/N blocks: a chunk of an orthogonal
// basis of C^n tensored with alpha, optionally followed by a second basis of
// the same chunk tensored with alpha-perp.
StateSet structured_2xn(std::mt19937_64& rng, std::size_t n, bool q_first);

// Orthogonal set on which |theta><theta| at `party` keeps orthogonality:
// some states carry theta there, the rest live in theta-perp (a few
// entangled across the cut).
struct PlantedSet {
  StateSet set;
  std::size_t party = 0;
  Vec theta;
};
PlantedSet planted_set(std::mt19937_64& rng);

// n (x) 2 (x) 2 set, product across A|BC, with BC vectors drawn from a random
// (generally entangled) orthogonal basis of C^4.
StateSet random_biseparable(std::mt19937_64& rng, std::size_t n, std::size_t count);

}  // namespace loc
