#pragma once
#include <cstddef>
#include <vector>

namespace sehs {

// Classic dynamic-time-warping distance with absolute-difference local cost
// and match/insert/delete steps, no warping window:
//   D(i,j) = |a_i - b_j| + min(D(i-1,j-1), D(i-1,j), D(i,j-1))
// O(len_a * len_b) time, O(min(len_a, len_b)) memory via a rolling row.
double dtw_distance(const std::vector<double>& a, const std::vector<double>& b);

// Memo-free recursive reference that explores every warping path. Exponential
// cost; only usable for very short sequences (tests compare the DP against it).
double dtw_distance_bruteforce(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sehs
