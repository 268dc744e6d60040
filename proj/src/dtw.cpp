#include "sehs/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sehs/errors.hpp"

namespace sehs {

double dtw_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw data_error("dtw_distance: empty sequence");
  // Roll over the shorter sequence to keep the buffer small.
  const std::vector<double>& rows = a.size() >= b.size() ? a : b;
  const std::vector<double>& cols = a.size() >= b.size() ? b : a;
  const std::size_t m = cols.size();

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m, inf), curr(m, inf);

  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double cost = std::fabs(rows[i] - cols[j]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = curr[j - 1];
      } else if (j == 0) {
        best = prev[j];
      } else {
        best = std::min({prev[j - 1], prev[j], curr[j - 1]});
      }
      curr[j] = cost + best;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

namespace {

double brute(const std::vector<double>& a, const std::vector<double>& b, std::size_t i,
             std::size_t j) {
  const double cost = std::fabs(a[i] - b[j]);
  if (i == 0 && j == 0) return cost;
  double best = std::numeric_limits<double>::infinity();
  if (i > 0 && j > 0) best = std::min(best, brute(a, b, i - 1, j - 1));
  if (i > 0) best = std::min(best, brute(a, b, i - 1, j));
  if (j > 0) best = std::min(best, brute(a, b, i, j - 1));
  return cost + best;
}

}  // namespace

double dtw_distance_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw data_error("dtw_distance_bruteforce: empty sequence");
  return brute(a, b, a.size() - 1, b.size() - 1);
}

}  // namespace sehs
