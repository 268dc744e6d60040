#include <doctest.h>

#include <vector>

#include "sehs/errors.hpp"
#include "sehs/eval.hpp"
#include "sehs/rng.hpp"

using namespace sehs;

namespace {

// Builds label vectors realizing a given confusion matrix.
void from_confusion(const std::vector<std::vector<int>>& cm, std::vector<int>& y_true,
                    std::vector<int>& y_pred) {
  for (std::size_t t = 0; t < cm.size(); ++t)
    for (std::size_t p = 0; p < cm[t].size(); ++p)
      for (int i = 0; i < cm[t][p]; ++i) {
        y_true.push_back(static_cast<int>(t));
        y_pred.push_back(static_cast<int>(p));
      }
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("a two-class confusion matrix yields the hand-computed metrics") {
  std::vector<int> y_true, y_pred;
  from_confusion({{8, 2}, {3, 7}}, y_true, y_pred);
  const Evaluation ev = evaluate(y_true, y_pred);
  CHECK(ev.n == 20);
  CHECK(ev.correct == 15);
  CHECK(ev.accuracy == doctest::Approx(0.75));
  CHECK(ev.confusion[0][0] == 8);
  CHECK(ev.confusion[0][1] == 2);
  CHECK(ev.confusion[1][0] == 3);
  CHECK(ev.confusion[1][1] == 7);
  CHECK(ev.precision[0] == doctest::Approx(8.0 / 11.0).epsilon(1e-12));
  CHECK(ev.precision[1] == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
  CHECK(ev.recall[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ev.recall[1] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(ev.macro_recall == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(ev.macro_precision == doctest::Approx((8.0 / 11 + 7.0 / 9) / 2).epsilon(1e-12));
  const double f1_0 = 2 * (8.0 / 11) * 0.8 / (8.0 / 11 + 0.8);
  CHECK(ev.f1[0] == doctest::Approx(f1_0).epsilon(1e-12));
  CHECK(ev.precision_undefined == 0);
  CHECK(ev.recall_undefined == 0);
}

TEST_CASE("perfect predictions score one everywhere") {
  const std::vector<int> y = {0, 1, 2, 0, 1, 2, 2};
  const Evaluation ev = evaluate(y, y);
  CHECK(ev.accuracy == 1.0);
  CHECK(ev.macro_precision == 1.0);
  CHECK(ev.macro_recall == 1.0);
  CHECK(ev.macro_f1 == 1.0);
}

TEST_CASE("random guessing over 20 classes has ~5% macro recall") {
  for (const std::uint64_t seed : {1, 2, 3, 4, 5}) {
    Rng rng(seed);
    std::vector<int> y_true, y_pred;
    for (int i = 0; i < 20000; ++i) {
      y_true.push_back(static_cast<int>(rng.uniform_int(20)));
      y_pred.push_back(static_cast<int>(rng.uniform_int(20)));
    }
    const Evaluation ev = evaluate(y_true, y_pred);
    CHECK(ev.macro_recall > 0.03);
    CHECK(ev.macro_recall < 0.07);
  }
}

TEST_CASE("a class absent from the test set has undefined recall, excluded from the macro") {
  // Three declared classes; class 2 never occurs in y_true.
  const std::vector<int> y_true = {0, 0, 1, 1};
  const std::vector<int> y_pred = {0, 1, 1, 1};
  const Evaluation ev = evaluate(y_true, y_pred, 3);
  CHECK_FALSE(ev.recall_defined[2]);
  CHECK(ev.recall[2] == 0.0);
  CHECK(ev.recall_undefined == 1);
  CHECK(ev.macro_recall == doctest::Approx((0.5 + 1.0) / 2).epsilon(1e-12));
}

TEST_CASE("a class never predicted has undefined precision, excluded from the macro") {
  const std::vector<int> y_true = {0, 1, 1};
  const std::vector<int> y_pred = {0, 0, 0};  // class 1 never predicted
  const Evaluation ev = evaluate(y_true, y_pred);
  CHECK_FALSE(ev.precision_defined[1]);
  CHECK(ev.precision_undefined == 1);
  CHECK(ev.macro_precision == doctest::Approx(1.0 / 3.0).epsilon(1e-12));  // only class 0
}

TEST_CASE("inconsistent label vectors are rejected") {
  CHECK_THROWS_AS(evaluate({0, 1}, {0}), data_error);
  CHECK_THROWS_AS(evaluate({}, {}), data_error);
  CHECK_THROWS_AS(evaluate({0, -1}, {0, 0}), data_error);
  CHECK_THROWS_AS(evaluate({0, 3}, {0, 0}, 2), data_error);  // label beyond n_classes
}

}  // TEST_SUITE
