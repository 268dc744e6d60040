#include "sehs/knn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>

#include <nlohmann/json.hpp>

#include "sehs/errors.hpp"
#include "sehs/stats.hpp"

namespace sehs {

void KnnConfig::validate() const {
  if (k < 1) throw config_error("knn k must be >= 1");
}

void KnnClassifier::fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                        KnnConfig cfg) {
  cfg.validate();
  if (x.empty()) throw data_error("knn fit: empty training set");
  if (x.size() != y.size()) throw data_error("knn fit: feature/label count mismatch");
  const std::size_t dim = x.front().size();
  if (dim == 0) throw data_error("knn fit: zero-dimensional features");
  for (const auto& row : x)
    if (row.size() != dim) throw data_error("knn fit: inconsistent feature dimensions");
  for (int label : y)
    if (label < 0) throw data_error("knn fit: negative class label");
  cfg_ = cfg;
  mu_.assign(dim, 0.0);
  sigma_.assign(dim, 0.0);
  for (const auto& row : x)
    for (std::size_t d = 0; d < dim; ++d) mu_[d] += row[d];
  for (double& v : mu_) v /= static_cast<double>(x.size());
  for (const auto& row : x)
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = row[d] - mu_[d];
      sigma_[d] += diff * diff;
    }
  for (double& v : sigma_) {
    v = std::sqrt(v / static_cast<double>(x.size()));
    if (!(v > 0.0)) v = 1.0;  // constant features contribute nothing
  }
  xz_ = x;
  for (auto& row : xz_)
    for (std::size_t d = 0; d < dim; ++d) row[d] = (row[d] - mu_[d]) / sigma_[d];
  y_ = y;
}

int KnnClassifier::predict_one(const std::vector<double>& x) const {
  if (!trained()) throw data_error("knn predict: model not trained");
  const std::size_t dim = mu_.size();
  if (x.size() != dim) throw data_error("knn predict: feature dimension mismatch");
  std::vector<double> q(dim);
  for (std::size_t d = 0; d < dim; ++d) q[d] = (x[d] - mu_[d]) / sigma_[d];
  std::vector<std::pair<double, std::size_t>> dist;  // (distance, train index)
  dist.reserve(xz_.size());
  for (std::size_t i = 0; i < xz_.size(); ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = q[d] - xz_[i][d];
      acc += diff * diff;
    }
    dist.emplace_back(std::sqrt(acc), i);
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg_.k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return a.second < b.second;
                    });
  std::map<int, std::pair<int, double>> votes;  // class -> (count, summed distance)
  for (std::size_t i = 0; i < k; ++i) {
    auto& entry = votes[y_[dist[i].second]];
    entry.first += 1;
    entry.second += dist[i].first;
  }
  int best_class = -1;
  int best_count = -1;
  double best_sum = 0.0;
  for (const auto& [cls, cs] : votes) {  // std::map iterates in ascending class id
    const auto [count, sum] = cs;
    if (count > best_count || (count == best_count && sum < best_sum)) {
      best_class = cls;
      best_count = count;
      best_sum = sum;
    }
  }
  return best_class;
}

std::vector<int> KnnClassifier::predict(const std::vector<std::vector<double>>& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict_one(row));
  return out;
}

std::string KnnClassifier::to_json() const {
  if (!trained()) throw data_error("knn save: model not trained");
  nlohmann::ordered_json j;
  j["model"] = "knn";
  j["k"] = cfg_.k;
  j["mu"] = mu_;
  j["sigma"] = sigma_;
  j["x"] = xz_;
  j["y"] = y_;
  return j.dump(1);
}

KnnClassifier KnnClassifier::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("knn load: invalid JSON: ") + e.what());
  }
  KnnClassifier m;
  try {
    if (j.at("model").get<std::string>() != "knn")
      throw data_error("knn load: not a knn model file");
    m.cfg_.k = j.at("k").get<int>();
    m.mu_ = j.at("mu").get<std::vector<double>>();
    m.sigma_ = j.at("sigma").get<std::vector<double>>();
    m.xz_ = j.at("x").get<std::vector<std::vector<double>>>();
    m.y_ = j.at("y").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("knn load: missing or malformed field: ") + e.what());
  }
  m.cfg_.validate();
  if (m.xz_.size() != m.y_.size() || m.xz_.empty())
    throw data_error("knn load: inconsistent model contents");
  for (const auto& row : m.xz_)
    if (row.size() != m.mu_.size()) throw data_error("knn load: inconsistent model contents");
  if (m.sigma_.size() != m.mu_.size())
    throw data_error("knn load: inconsistent model contents");
  return m;
}

}  // namespace sehs
