#pragma once

#include "dpaudit/mechanisms.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dpaudit {

// A named family of adjacent query pairs of a common length d. Generators
// that skip a pattern (e.g. half-split patterns at odd d) record a warning
// instead of failing.
struct PatternSet {
  int d = 0;
  std::vector<AdjacentPair> pairs;
  std::vector<std::string> warnings;
};

// True iff the vectors have equal length and entries differ by at most 1.
bool is_query_adjacent(std::span<const std::int64_t> q, std::span<const std::int64_t> qp);

// The seven standard query patterns (One Above, One Below, One Above Rest
// Below, One Below Rest Above, Half Half, All Above All Below, X Shape)
// generalized to length d. Odd d omits the two half-split patterns with a
// warning record.
PatternSet table1_pairs(int d);

// The zero query vector paired with every nonzero q' in {0,1}^d; 2^d - 1
// pairs, enumerated in increasing binary order. Requires d <= 20.
std::vector<AdjacentPair> binary_neighborhood(int d);

// The center (1/2,...,1/2) paired with each of the other 3^k - 1 points of
// the {0, 1/2, 1}^k grid, enumerated in ternary order. Requires k <= 6.
std::vector<AdjacentPair> cube_grid_neighborhood(int k);

// Named statistic-pair presets for the continuous mechanisms:
//   "laplace":     0 vs b/10
//   "noisy-max":   (0,0,0) vs (b/10, b/10, b/10)
//   "exponential": 1 vs 1 + b/10
// for b = 1..10. Unknown names throw std::invalid_argument.
std::vector<AdjacentPair> statistic_pairs(const std::string& preset);

// JSON array of pairs (id, x, x') for config files and report provenance.
std::string pairs_to_json(const std::vector<AdjacentPair>& pairs);
std::vector<AdjacentPair> pairs_from_json(const std::string& text);

}  // namespace dpaudit
