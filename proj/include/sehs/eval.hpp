#pragma once
#include <vector>

namespace sehs {

struct Evaluation {
  std::vector<std::vector<int>> confusion;  // [true_class][predicted_class]
  int n = 0;
  int correct = 0;
  double accuracy = 0.0;
  // Per-class metrics. A metric is undefined (flag false, value 0) when its
  // denominator is zero: precision when the class was never predicted,
  // recall when the class never occurs in y_true.
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<bool> precision_defined;
  std::vector<bool> recall_defined;
  // Macro averages run over defined classes only; the *_undefined counts say
  // how many classes were excluded (callers should warn when nonzero).
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;  // over classes present in y_true
  int precision_undefined = 0;
  int recall_undefined = 0;
};

// n_classes <= 0 infers the class count from the largest label seen.
Evaluation evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                    int n_classes = 0);

}  // namespace sehs
