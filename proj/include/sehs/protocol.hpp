#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "sehs/dataset.hpp"
#include "sehs/eval.hpp"
#include "sehs/knn.hpp"
#include "sehs/lstm.hpp"
#include "sehs/rng.hpp"

namespace sehs {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Shuffles within each class and moves round(test_frac * n_c) samples of
// every class into the test side.
SplitIndices stratified_split(const std::vector<int>& labels, double test_frac, Rng& rng);

// Disjoint folds covering all indices exactly once, each with near-equal
// per-class counts (round-robin deal after a per-class shuffle).
std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& labels, int folds,
                                                       Rng& rng);

enum class ClassifierKind { Knn, UniLstm, BiLstm };
const char* classifier_name(ClassifierKind k);
ClassifierKind classifier_from_name(const std::string& name);

struct ProtocolConfig {
  double test_frac = 0.2;  // held-out outer test share
  int folds = 5;           // cross-validation folds over the outer train side
  double val_frac = 0.1;   // early-stopping carve from each fold's train pool
  KnnConfig knn;
  LstmConfig lstm;  // `kind` is overridden by the classifier argument
  std::uint64_t seed = 0;
  void validate() const;  // throws config_error
};

struct FitResult {
  Evaluation test_eval;            // on the outer held-out test set
  TrainHistory history;            // empty for knn
  double selection_accuracy = 0.0; // on the fold's selection split (CV only)
  std::string model_json;
  int n_train = 0;  // samples the model was fitted on
  int n_val = 0;    // early-stopping carve size (0 for knn)
  int n_test = 0;
};

struct CvReport {
  std::string classifier;
  std::vector<FitResult> folds;
  double mean_test_accuracy = 0.0;
  double std_test_accuracy = 0.0;
  double mean_macro_recall = 0.0;
  double std_macro_recall = 0.0;
  double mean_macro_precision = 0.0;
  double std_macro_precision = 0.0;
  int best_fold = 0;  // highest selection accuracy (ties: lowest index)
};

// One stratified train/test split; LSTMs carve val_frac of the train side
// for early stopping. Fast path used by the parameter sweeps.
FitResult train_once(const Dataset& ds, ClassifierKind kind, const ProtocolConfig& cfg);

// Outer stratified split, then k-fold cross-validation over the train side.
// Every fold's model is evaluated on the same outer test set; the fold's
// held-out fifth only selects the best model.
CvReport run_protocol(const Dataset& ds, ClassifierKind kind, const ProtocolConfig& cfg);

}  // namespace sehs
