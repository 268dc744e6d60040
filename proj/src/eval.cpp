#include "sehs/eval.hpp"

#include <algorithm>
#include <cstddef>

#include "sehs/errors.hpp"

namespace sehs {

Evaluation evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                    int n_classes) {
  if (y_true.size() != y_pred.size()) throw data_error("evaluate: label count mismatch");
  if (y_true.empty()) throw data_error("evaluate: empty label vectors");
  int max_label = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_pred[i] < 0) throw data_error("evaluate: negative class label");
    max_label = std::max({max_label, y_true[i], y_pred[i]});
  }
  if (n_classes <= 0) n_classes = max_label + 1;
  if (max_label >= n_classes) throw data_error("evaluate: label exceeds n_classes");

  Evaluation ev;
  const std::size_t c = static_cast<std::size_t>(n_classes);
  ev.confusion.assign(c, std::vector<int>(c, 0));
  ev.n = static_cast<int>(y_true.size());
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ev.confusion[static_cast<std::size_t>(y_true[i])][static_cast<std::size_t>(y_pred[i])]++;
    if (y_true[i] == y_pred[i]) ev.correct++;
  }
  ev.accuracy = static_cast<double>(ev.correct) / static_cast<double>(ev.n);

  ev.precision.assign(c, 0.0);
  ev.recall.assign(c, 0.0);
  ev.f1.assign(c, 0.0);
  ev.precision_defined.assign(c, false);
  ev.recall_defined.assign(c, false);
  int n_prec = 0, n_rec = 0, n_f1 = 0;
  for (std::size_t k = 0; k < c; ++k) {
    int tp = ev.confusion[k][k];
    int pred_k = 0, true_k = 0;
    for (std::size_t j = 0; j < c; ++j) {
      pred_k += ev.confusion[j][k];
      true_k += ev.confusion[k][j];
    }
    if (pred_k > 0) {
      ev.precision[k] = static_cast<double>(tp) / pred_k;
      ev.precision_defined[k] = true;
      ev.macro_precision += ev.precision[k];
      ++n_prec;
    }
    if (true_k > 0) {
      ev.recall[k] = static_cast<double>(tp) / true_k;
      ev.recall_defined[k] = true;
      ev.macro_recall += ev.recall[k];
      ++n_rec;
    }
    const double pr = ev.precision[k] + ev.recall[k];
    if (pr > 0.0) ev.f1[k] = 2.0 * ev.precision[k] * ev.recall[k] / pr;
    if (true_k > 0) {
      ev.macro_f1 += ev.f1[k];
      ++n_f1;
    }
  }
  ev.precision_undefined = static_cast<int>(c) - n_prec;
  ev.recall_undefined = static_cast<int>(c) - n_rec;
  if (n_prec > 0) ev.macro_precision /= n_prec;
  if (n_rec > 0) ev.macro_recall /= n_rec;
  if (n_f1 > 0) ev.macro_f1 /= n_f1;
  return ev;
}

}  // namespace sehs
