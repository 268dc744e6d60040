#include "sehs/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sehs/errors.hpp"
#include "sehs/features.hpp"

namespace sehs {
namespace {

std::vector<int> dataset_labels(const Dataset& ds) {
  std::vector<int> labels;
  labels.reserve(ds.cycles.size());
  for (const GaitCycle& c : ds.cycles) labels.push_back(c.subject_id);
  return labels;
}

int count_classes(const std::vector<int>& labels) {
  int mx = -1;
  for (int l : labels) mx = std::max(mx, l);
  return mx + 1;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd ms;
  if (v.empty()) return ms;
  for (double x : v) ms.mean += x;
  ms.mean /= static_cast<double>(v.size());
  for (double x : v) ms.std += (x - ms.mean) * (x - ms.mean);
  ms.std = std::sqrt(ms.std / static_cast<double>(v.size()));
  return ms;
}

// Trains one model on `fit_idx` (+ early-stop carve for LSTMs drawn from it
// upstream), evaluates on `test_idx`. Representations are built lazily from
// the subset actually used.
FitResult fit_and_eval(const Dataset& ds, ClassifierKind kind, const ProtocolConfig& cfg,
                       const std::vector<std::size_t>& fit_idx,
                       const std::vector<std::size_t>& val_idx,
                       const std::vector<std::size_t>& sel_idx,
                       const std::vector<std::size_t>& test_idx, std::uint64_t model_seed) {
  if (fit_idx.empty()) throw data_error("training split is empty");
  if (test_idx.empty()) throw data_error("test split is empty");
  const std::vector<int> labels = dataset_labels(ds);
  const int n_classes = count_classes(labels);
  if (n_classes < 2) throw data_error("training requires at least 2 classes");

  FitResult out;
  out.n_train = static_cast<int>(fit_idx.size());
  out.n_val = static_cast<int>(val_idx.size());
  out.n_test = static_cast<int>(test_idx.size());

  std::vector<int> y_test;
  y_test.reserve(test_idx.size());
  for (std::size_t i : test_idx) y_test.push_back(labels[i]);

  if (kind == ClassifierKind::Knn) {
    std::vector<std::vector<double>> x_fit;
    std::vector<int> y_fit;
    x_fit.reserve(fit_idx.size());
    for (std::size_t i : fit_idx) {
      const auto f = extract_features(ds.cycles[i].samples, ds.cycles[i].original_duration_s);
      x_fit.emplace_back(f.begin(), f.end());
      y_fit.push_back(labels[i]);
    }
    KnnClassifier knn;
    knn.fit(x_fit, y_fit, cfg.knn);
    auto project = [&ds](const std::vector<std::size_t>& idx) {
      std::vector<std::vector<double>> x;
      x.reserve(idx.size());
      for (std::size_t i : idx) {
        const auto f = extract_features(ds.cycles[i].samples, ds.cycles[i].original_duration_s);
        x.emplace_back(f.begin(), f.end());
      }
      return x;
    };
    out.test_eval = evaluate(y_test, knn.predict(project(test_idx)), n_classes);
    if (!sel_idx.empty()) {
      std::vector<int> y_sel;
      for (std::size_t i : sel_idx) y_sel.push_back(labels[i]);
      const Evaluation sel = evaluate(y_sel, knn.predict(project(sel_idx)), n_classes);
      out.selection_accuracy = sel.accuracy;
    }
    out.model_json = knn.to_json();
    return out;
  }

  auto sequences = [&ds, &labels](const std::vector<std::size_t>& idx,
                                  std::vector<int>* y) {
    std::vector<std::vector<double>> x;
    x.reserve(idx.size());
    if (y) y->reserve(idx.size());
    for (std::size_t i : idx) {
      x.push_back(ds.cycles[i].samples);
      if (y) y->push_back(labels[i]);
    }
    return x;
  };
  std::vector<int> y_fit, y_val;
  const auto x_fit = sequences(fit_idx, &y_fit);
  const auto x_val = sequences(val_idx, &y_val);

  LstmConfig lcfg = cfg.lstm;
  lcfg.kind = kind == ClassifierKind::BiLstm ? LstmKind::Bi : LstmKind::Uni;
  LstmClassifier model;
  model.init(n_classes, lcfg, model_seed);
  out.history = model.train(x_fit, y_fit, x_val, y_val);
  out.test_eval = evaluate(y_test, model.predict(sequences(test_idx, nullptr)), n_classes);
  if (!sel_idx.empty()) {
    std::vector<int> y_sel;
    const auto x_sel = sequences(sel_idx, &y_sel);
    const Evaluation sel = evaluate(y_sel, model.predict(x_sel), n_classes);
    out.selection_accuracy = sel.accuracy;
  } else if (!out.history.val_accuracy.empty() && out.history.best_epoch >= 0) {
    out.selection_accuracy =
        out.history.val_accuracy[static_cast<std::size_t>(out.history.best_epoch)];
  }
  out.model_json = model.to_json();
  return out;
}

}  // namespace

SplitIndices stratified_split(const std::vector<int>& labels, double test_frac, Rng& rng) {
  if (!(test_frac > 0.0) || !(test_frac < 1.0))
    throw config_error("test fraction must lie in (0, 1)");
  if (labels.empty()) throw data_error("cannot split an empty label set");
  std::map<int, std::vector<std::size_t>> groups;  // ordered by class id
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw data_error("negative class label");
    groups[labels[i]].push_back(i);
  }
  SplitIndices out;
  for (auto& [cls, idx] : groups) {
    (void)cls;
    rng.shuffle(idx);
    std::size_t n_test = static_cast<std::size_t>(
        std::lround(test_frac * static_cast<double>(idx.size())));
    if (n_test >= idx.size()) n_test = idx.size() - 1;  // keep at least 1 in train
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i < n_test)
        out.test.push_back(idx[i]);
      else
        out.train.push_back(idx[i]);
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& labels, int folds,
                                                       Rng& rng) {
  if (folds < 2) throw config_error("cross-validation needs at least 2 folds");
  if (labels.empty()) throw data_error("cannot fold an empty label set");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw data_error("negative class label");
    groups[labels[i]].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
  for (auto& [cls, idx] : groups) {
    (void)cls;
    rng.shuffle(idx);
    for (std::size_t i = 0; i < idx.size(); ++i)
      out[i % static_cast<std::size_t>(folds)].push_back(idx[i]);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

const char* classifier_name(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::UniLstm: return "unilstm";
    case ClassifierKind::BiLstm: return "bilstm";
  }
  return "unknown";
}

ClassifierKind classifier_from_name(const std::string& name) {
  if (name == "knn") return ClassifierKind::Knn;
  if (name == "unilstm" || name == "uni") return ClassifierKind::UniLstm;
  if (name == "bilstm" || name == "bi") return ClassifierKind::BiLstm;
  throw config_error("unknown classifier: " + name + " (expected knn, unilstm, or bilstm)");
}

void ProtocolConfig::validate() const {
  if (!(test_frac > 0.0) || !(test_frac < 1.0))
    throw config_error("test_frac must lie in (0, 1)");
  if (folds < 2) throw config_error("folds must be >= 2");
  if (!(val_frac > 0.0) || !(val_frac < 1.0))
    throw config_error("val_frac must lie in (0, 1)");
  knn.validate();
  lstm.validate();
}

FitResult train_once(const Dataset& ds, ClassifierKind kind, const ProtocolConfig& cfg) {
  cfg.validate();
  const std::vector<int> labels = dataset_labels(ds);
  Rng rng(cfg.seed);
  const SplitIndices outer = stratified_split(labels, cfg.test_frac, rng);
  std::vector<std::size_t> fit_idx = outer.train, val_idx;
  if (kind != ClassifierKind::Knn) {
    std::vector<int> train_labels;
    train_labels.reserve(outer.train.size());
    for (std::size_t i : outer.train) train_labels.push_back(labels[i]);
    const SplitIndices carve = stratified_split(train_labels, cfg.val_frac, rng);
    fit_idx.clear();
    for (std::size_t p : carve.train) fit_idx.push_back(outer.train[p]);
    for (std::size_t p : carve.test) val_idx.push_back(outer.train[p]);
  }
  const std::uint64_t model_seed = rng.raw();
  return fit_and_eval(ds, kind, cfg, fit_idx, val_idx, {}, outer.test, model_seed);
}

CvReport run_protocol(const Dataset& ds, ClassifierKind kind, const ProtocolConfig& cfg) {
  cfg.validate();
  const std::vector<int> labels = dataset_labels(ds);
  Rng rng(cfg.seed);
  const SplitIndices outer = stratified_split(labels, cfg.test_frac, rng);
  std::vector<int> train_labels;
  train_labels.reserve(outer.train.size());
  for (std::size_t i : outer.train) train_labels.push_back(labels[i]);
  const auto folds = stratified_folds(train_labels, cfg.folds, rng);

  CvReport report;
  report.classifier = classifier_name(kind);
  std::vector<double> accs, recalls, precisions;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    // Selection split = this fold; training pool = the other folds.
    std::vector<std::size_t> sel_idx, pool_pos;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      for (std::size_t p : folds[g]) {
        if (g == f)
          sel_idx.push_back(outer.train[p]);
        else
          pool_pos.push_back(p);
      }
    }
    std::vector<std::size_t> fit_idx, val_idx;
    if (kind != ClassifierKind::Knn) {
      std::vector<int> pool_labels;
      pool_labels.reserve(pool_pos.size());
      for (std::size_t p : pool_pos) pool_labels.push_back(train_labels[p]);
      const SplitIndices carve = stratified_split(pool_labels, cfg.val_frac, rng);
      for (std::size_t q : carve.train) fit_idx.push_back(outer.train[pool_pos[q]]);
      for (std::size_t q : carve.test) val_idx.push_back(outer.train[pool_pos[q]]);
    } else {
      for (std::size_t p : pool_pos) fit_idx.push_back(outer.train[p]);
    }
    const std::uint64_t model_seed = rng.raw();
    FitResult fr =
        fit_and_eval(ds, kind, cfg, fit_idx, val_idx, sel_idx, outer.test, model_seed);
    accs.push_back(fr.test_eval.accuracy);
    recalls.push_back(fr.test_eval.macro_recall);
    precisions.push_back(fr.test_eval.macro_precision);
    report.folds.push_back(std::move(fr));
  }
  const MeanStd a = mean_std(accs);
  const MeanStd r = mean_std(recalls);
  const MeanStd p = mean_std(precisions);
  report.mean_test_accuracy = a.mean;
  report.std_test_accuracy = a.std;
  report.mean_macro_recall = r.mean;
  report.std_macro_recall = r.std;
  report.mean_macro_precision = p.mean;
  report.std_macro_precision = p.std;
  report.best_fold = 0;
  for (std::size_t f = 1; f < report.folds.size(); ++f)
    if (report.folds[f].selection_accuracy >
        report.folds[static_cast<std::size_t>(report.best_fold)].selection_accuracy)
      report.best_fold = static_cast<int>(f);
  return report;
}

}  // namespace sehs
