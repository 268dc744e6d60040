#pragma once
#include <string>
#include <vector>

namespace sehs {

struct KnnConfig {
  int k = 10;
  void validate() const;  // throws config_error
};

// K-nearest-neighbours over z-scored feature vectors with Euclidean distance.
// Ties: majority vote first, then smallest summed distance among tied
// classes, then smallest class id.
class KnnClassifier {
 public:
  void fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
           KnnConfig cfg = {});
  int predict_one(const std::vector<double>& x) const;
  std::vector<int> predict(const std::vector<std::vector<double>>& x) const;

  bool trained() const { return !xz_.empty(); }
  const KnnConfig& config() const { return cfg_; }

  std::string to_json() const;
  static KnnClassifier from_json(const std::string& text);

 private:
  KnnConfig cfg_;
  std::vector<std::vector<double>> xz_;  // z-scored training rows
  std::vector<int> y_;
  std::vector<double> mu_, sigma_;  // training normalization (sigma 0 -> 1)
};

}  // namespace sehs
