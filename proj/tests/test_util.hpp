#pragma once

#include "locality/random_sets.hpp"

namespace testutil {

using loc::random_mat;
using loc::random_product_set;
using loc::random_scalar;
using loc::random_vec;

}  // namespace testutil
