#pragma once
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sehs/rng.hpp"

namespace sehs {

enum class LstmKind { Uni, Bi };

const char* lstm_kind_name(LstmKind k);
LstmKind lstm_kind_from_name(const std::string& name);

struct LstmConfig {
  LstmKind kind = LstmKind::Uni;
  int hidden = 32;
  int max_epochs = 200;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int patience = 10;  // early-stopping patience on validation loss
  void validate() const;  // throws config_error
};

// Byte offsets (in doubles) of the blocks inside the flat parameter vector.
// Per direction the recurrent weights form one row-major matrix
// W in R^{4H x (H+2)} acting on [x_t; h_{t-1}; 1]; gate row order i, f, o, g.
struct LstmLayout {
  int hidden = 0;
  int n_classes = 0;
  bool bidirectional = false;
  std::size_t dir_w_count = 0;   // 4H * (H+2)
  std::size_t fwd_off = 0;
  std::size_t bwd_off = 0;       // == fwd_off for unidirectional (unused)
  std::size_t dense_w_off = 0;   // C x (H or 2H), row-major
  std::size_t dense_b_off = 0;   // C
  std::size_t total = 0;
};

struct TrainHistory {
  std::vector<double> train_loss;    // per epoch, mean over samples
  std::vector<double> val_loss;      // empty when no validation set given
  std::vector<double> val_accuracy;
  int best_epoch = -1;               // epoch whose weights were kept (0-based)
  int epochs_run = 0;
};

// Sequence classifier over scalar time series (one value per timestep). All
// sequences passed to one call must share a single length.
class LstmClassifier {
 public:
  // Fresh model with randomly initialized weights: uniform(+-1/sqrt(H)),
  // biases zero except the forget gate's, which starts at 1.
  void init(int n_classes, LstmConfig cfg, std::uint64_t seed);

  // Adam + cross-entropy with shuffled mini-batches; validation loss drives
  // early stopping (best weights restored). Empty val set disables stopping.
  TrainHistory train(const std::vector<std::vector<double>>& x_train,
                     const std::vector<int>& y_train,
                     const std::vector<std::vector<double>>& x_val,
                     const std::vector<int>& y_val);

  std::vector<int> predict(const std::vector<std::vector<double>>& x) const;
  std::vector<std::vector<double>> predict_proba(const std::vector<std::vector<double>>& x) const;

  // Mean cross-entropy over the batch; optionally the full parameter
  // gradient. Exposed for verification against numerical differentiation.
  double loss_and_grad(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       std::vector<double>* grad) const;

  const LstmLayout& layout() const { return layout_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  const LstmConfig& config() const { return cfg_; }
  int n_classes() const { return layout_.n_classes; }
  bool initialized() const { return !params_.empty(); }

  void set_normalization(double mu, double sigma);
  double norm_mu() const { return mu_; }
  double norm_sigma() const { return sigma_; }

  std::string to_json() const;
  static LstmClassifier from_json(const std::string& text);

 private:
  LstmConfig cfg_;
  LstmLayout layout_;
  std::vector<double> params_;
  double mu_ = 0.0;
  double sigma_ = 1.0;
  Rng rng_{0};
};

}  // namespace sehs
