#pragma once
#include <array>
#include <string>
#include <vector>

#include "sehs/dataset.hpp"

namespace sehs {

inline constexpr int kNumFeatures = 22;

// Ordered names of the 22 per-cycle features (11 time domain, 11 frequency
// domain). The order is part of the on-disk model format.
const std::array<std::string, kNumFeatures>& feature_names();

// Extracts the feature vector of one cycle. `duration_s` is the real-time
// span of the cycle; it sets the effective sample rate len/duration used for
// the frequency axis.
std::array<double, kNumFeatures> extract_features(const std::vector<double>& samples,
                                                  double duration_s);

struct FeatureMatrix {
  std::vector<std::vector<double>> x;  // one row per cycle, kNumFeatures wide
  std::vector<int> y;                  // subject id per row
};

FeatureMatrix feature_matrix(const Dataset& ds);

}  // namespace sehs
