#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "sehs/errors.hpp"
#include "sehs/knn.hpp"
#include "sehs/rng.hpp"

using namespace sehs;

namespace {

// Straight-line reference classifier reimplementing the documented rules:
// z-score by training stats (zero spread -> 1), Euclidean distance, k nearest
// with ties on distance broken by training index, majority vote, vote ties
// broken by smaller summed distance then smaller class id.
int reference_predict(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      int k, const std::vector<double>& q) {
  const std::size_t dim = x[0].size();
  std::vector<double> mu(dim, 0), sigma(dim, 0);
  for (const auto& row : x)
    for (std::size_t d = 0; d < dim; ++d) mu[d] += row[d];
  for (double& m : mu) m /= static_cast<double>(x.size());
  for (const auto& row : x)
    for (std::size_t d = 0; d < dim; ++d) sigma[d] += (row[d] - mu[d]) * (row[d] - mu[d]);
  for (double& s : sigma) {
    s = std::sqrt(s / static_cast<double>(x.size()));
    if (s == 0.0) s = 1.0;
  }
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d2 = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double a = (x[i][d] - mu[d]) / sigma[d];
      const double b = (q[d] - mu[d]) / sigma[d];
      d2 += (a - b) * (a - b);
    }
    dist.push_back({std::sqrt(d2), i});
  }
  std::sort(dist.begin(), dist.end());
  const std::size_t kk = std::min<std::size_t>(k, dist.size());
  std::map<int, int> votes;
  std::map<int, double> sums;
  for (std::size_t i = 0; i < kk; ++i) {
    votes[y[dist[i].second]] += 1;
    sums[y[dist[i].second]] += dist[i].first;
  }
  int best = -1, best_votes = -1;
  double best_sum = 0;
  for (const auto& [cls, v] : votes) {  // ascending class id
    const double s = sums[cls];
    if (v > best_votes || (v == best_votes && s < best_sum)) {
      best = cls;
      best_votes = v;
      best_sum = s;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("knn") {

TEST_CASE("an exact training point is its own nearest neighbour at k=1") {
  KnnClassifier m;
  KnnConfig cfg;
  cfg.k = 1;
  m.fit({{0, 0}, {5, 5}, {10, 0}}, {0, 1, 2}, cfg);
  CHECK(m.predict_one({5, 5}) == 1);
  CHECK(m.predict_one({0, 0}) == 0);
  CHECK(m.predict_one({10, 0}) == 2);
}

TEST_CASE("a symmetric tie resolves to the smallest class id") {
  KnnClassifier m;
  KnnConfig cfg;
  cfg.k = 2;
  m.fit({{0, 0}, {2, 0}}, {0, 1}, cfg);
  // Equidistant from both training points: one vote each, equal summed
  // distance, so the smaller class id wins.
  CHECK(m.predict_one({1, 0}) == 0);
}

TEST_CASE("majority vote beats a single closer neighbour") {
  KnnClassifier m;
  KnnConfig cfg;
  cfg.k = 3;
  m.fit({{0.9, 0}, {2, 0}, {2.2, 0}}, {0, 1, 1}, cfg);
  CHECK(m.predict_one({1.0, 0}) == 1);
}

TEST_CASE("separated gaussian clusters classify almost perfectly") {
  Rng rng(17);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int cls = 0; cls < 4; ++cls) {
    for (int i = 0; i < 60; ++i) {
      x.push_back({cls * 10.0 + rng.gaussian(), cls * -6.0 + rng.gaussian()});
      y.push_back(cls);
    }
  }
  KnnClassifier m;
  m.fit(x, y);  // default k = 10
  int correct = 0;
  for (int cls = 0; cls < 4; ++cls) {
    for (int i = 0; i < 25; ++i) {
      const std::vector<double> q = {cls * 10.0 + rng.gaussian(), cls * -6.0 + rng.gaussian()};
      correct += (m.predict_one(q) == cls);
    }
  }
  CHECK(correct >= 97);
}

TEST_CASE("predictions match an independent reference on random data") {
  Rng rng(23);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 80; ++i) {
    x.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 1)});
    y.push_back(static_cast<int>(rng.uniform_int(5)));
  }
  KnnClassifier m;
  m.fit(x, y);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> q = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 1)};
    CHECK(m.predict_one(q) == reference_predict(x, y, 10, q));
  }
}

TEST_CASE("model JSON round trip preserves predictions") {
  Rng rng(29);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 50; ++i) {
    x.push_back({rng.gaussian(), rng.gaussian()});
    y.push_back(static_cast<int>(rng.uniform_int(3)));
  }
  KnnClassifier m;
  m.fit(x, y);
  const KnnClassifier back = KnnClassifier::from_json(m.to_json());
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<double> q = {rng.gaussian(), rng.gaussian()};
    CHECK(back.predict_one(q) == m.predict_one(q));
  }
}

TEST_CASE("invalid inputs are rejected") {
  KnnClassifier m;
  CHECK_THROWS_AS(m.predict_one({1, 2}), data_error);  // untrained
  CHECK_THROWS_AS(m.fit({}, {}), data_error);
  CHECK_THROWS_AS(m.fit({{1, 2}}, {0, 1}), data_error);      // size mismatch
  CHECK_THROWS_AS(m.fit({{1, 2}, {1}}, {0, 0}), data_error); // ragged rows
  CHECK_THROWS_AS(m.fit({{1, 2}}, {-1}), data_error);        // negative label
  KnnConfig bad;
  bad.k = 0;
  CHECK_THROWS_AS(bad.validate(), config_error);
  m.fit({{1, 2}, {3, 4}}, {0, 1});
  CHECK_THROWS_AS(m.predict_one({1}), data_error);  // dimension mismatch
  CHECK_THROWS_AS(KnnClassifier::from_json("{}"), data_error);
}

}  // TEST_SUITE
