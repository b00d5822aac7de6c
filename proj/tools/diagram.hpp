#pragma once

// Occupancy grids: rows index the first block's basis, columns the second's;
// a cell lists the states with amplitude there.

#include <string>
#include <vector>

#include "locality/stateset.hpp"

namespace loc {

struct Grid {
  std::vector<std::string> row_names, col_names;
  std::vector<std::vector<std::vector<std::size_t>>> cells;  // state indices per cell
  std::vector<std::string> labels;
  std::string row_block, col_block;
};

// p must have at most two blocks; throws std::invalid_argument otherwise.
Grid occupancy(const StateSet& s, const Partition& p);
std::string render_ascii(const Grid& g);
std::string render_svg(const Grid& g);

}  // namespace loc
