#pragma once

// Replays of the locality results on the bundled sets and fixtures. Every
// nonexistence claim is taken from the exact solver.

#include <cstdint>
#include <string>
#include <vector>

#include "locality/io.hpp"

namespace loc {

struct ClaimCheck {
  std::string name;
  Tri outcome = Tri::unknown;
  std::string detail;
};

struct ClaimReport {
  std::string claim;  // "theorem 3", "lemma 1"
  std::string summary;
  std::vector<ClaimCheck> checks;
  json details = json::object();
  double seconds = 0;
  // no when a check was refuted, unknown when one stayed open.
  Tri verdict() const;
};

struct ClaimOptions {
  std::uint64_t seed = 1;
  std::size_t random_trials = 0;  // 0 keeps each claim's default
  std::size_t depth = 3;          // lpcc_search budget
};

// n in 1..5; throws std::invalid_argument otherwise.
ClaimReport run_theorem(int n, const ClaimOptions& opt = {});
ClaimReport run_lemma1(const ClaimOptions& opt = {});

json to_json(const ClaimReport& r);

}  // namespace loc
