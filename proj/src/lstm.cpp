#include "sehs/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sehs/errors.hpp"

namespace sehs {
namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<Mat>;
using CMapMat = Eigen::Map<const Mat>;
using MapVec = Eigen::Map<Eigen::VectorXd>;
using CMapVec = Eigen::Map<const Eigen::VectorXd>;

struct DirCache {
  std::vector<Mat> in;      // per step: B x (H+2) = [x_t, h_prev, 1]
  std::vector<Mat> gates;   // per step: B x 4H, columns [i f o g] post-activation
  std::vector<Mat> c_prev;  // per step: B x H
  std::vector<Mat> tanh_c;  // per step: B x H
};

// One direction over the whole batch. `reverse` consumes the sequence
// back-to-front. Returns the final hidden state (B x H); caches are optional.
Mat run_direction(const CMapMat& w, const Mat& x, int hidden, bool reverse, DirCache* cache) {
  const Eigen::Index b = x.rows();
  const Eigen::Index l = x.cols();
  const int h = hidden;
  Mat hs = Mat::Zero(b, h);
  Mat cs = Mat::Zero(b, h);
  Mat in(b, h + 2);
  in.col(h + 1).setOnes();
  if (cache) {
    cache->in.reserve(static_cast<std::size_t>(l));
    cache->gates.reserve(static_cast<std::size_t>(l));
    cache->c_prev.reserve(static_cast<std::size_t>(l));
    cache->tanh_c.reserve(static_cast<std::size_t>(l));
  }
  for (Eigen::Index s = 0; s < l; ++s) {
    const Eigen::Index idx = reverse ? l - 1 - s : s;
    in.col(0) = x.col(idx);
    in.block(0, 1, b, h) = hs;
    Mat z(b, 4 * h);
    z.noalias() = in * w.transpose();
    z.leftCols(3 * h).array() = 1.0 / (1.0 + (-z.leftCols(3 * h).array()).exp());
    z.rightCols(h).array() = z.rightCols(h).array().tanh();
    Mat c_new =
        z.block(0, h, b, h).cwiseProduct(cs) + z.block(0, 0, b, h).cwiseProduct(z.block(0, 3 * h, b, h));
    Mat tc = c_new.array().tanh().matrix();
    if (cache) {
      cache->in.push_back(in);
      cache->c_prev.push_back(cs);
      cache->tanh_c.push_back(tc);
    }
    hs = z.block(0, 2 * h, b, h).cwiseProduct(tc);
    cs = std::move(c_new);
    if (cache) cache->gates.push_back(std::move(z));
  }
  return hs;
}

// Backpropagation through one direction; dh_final is dLoss/d(final h).
// Accumulates into dw (4H x (H+2)).
void back_direction(const CMapMat& w, const DirCache& cache, const Mat& dh_final, int hidden,
                    MapMat dw) {
  const Eigen::Index l = static_cast<Eigen::Index>(cache.gates.size());
  if (l == 0) return;
  const Eigen::Index b = dh_final.rows();
  const int h = hidden;
  Mat dh_carry = dh_final;
  Mat dc_carry = Mat::Zero(b, h);
  Mat da(b, 4 * h);
  for (Eigen::Index s = l - 1; s >= 0; --s) {
    const Mat& g = cache.gates[static_cast<std::size_t>(s)];
    const Mat& tc = cache.tanh_c[static_cast<std::size_t>(s)];
    const Mat& cp = cache.c_prev[static_cast<std::size_t>(s)];
    auto gi = g.block(0, 0, b, h).array();
    auto gf = g.block(0, h, b, h).array();
    auto go = g.block(0, 2 * h, b, h).array();
    auto gg = g.block(0, 3 * h, b, h).array();
    Mat dc =
        (dh_carry.array() * go * (1.0 - tc.array() * tc.array())).matrix() + dc_carry;
    da.block(0, 0, b, h).array() = dc.array() * gg * gi * (1.0 - gi);          // input gate
    da.block(0, h, b, h).array() = dc.array() * cp.array() * gf * (1.0 - gf);  // forget gate
    da.block(0, 2 * h, b, h).array() = dh_carry.array() * tc.array() * go * (1.0 - go);
    da.block(0, 3 * h, b, h).array() = dc.array() * gi * (1.0 - gg * gg);      // candidate
    dw.noalias() += da.transpose() * cache.in[static_cast<std::size_t>(s)];
    Mat din(b, h + 2);
    din.noalias() = da * w;
    dh_carry = din.block(0, 1, b, h);
    dc_carry = (dc.array() * gf).matrix();
  }
}

void check_equal_lengths(const std::vector<std::vector<double>>& x) {
  if (x.empty()) throw data_error("sequence batch is empty");
  const std::size_t len = x.front().size();
  if (len == 0) throw data_error("sequences must be non-empty");
  for (const auto& s : x)
    if (s.size() != len) throw data_error("all sequences in a batch must share one length");
}

}  // namespace

const char* lstm_kind_name(LstmKind k) { return k == LstmKind::Uni ? "uni" : "bi"; }

LstmKind lstm_kind_from_name(const std::string& name) {
  if (name == "uni") return LstmKind::Uni;
  if (name == "bi") return LstmKind::Bi;
  throw config_error("unknown lstm kind: " + name + " (expected uni or bi)");
}

void LstmConfig::validate() const {
  if (hidden < 1) throw config_error("lstm hidden size must be >= 1");
  if (max_epochs < 1) throw config_error("lstm max_epochs must be >= 1");
  if (batch_size < 1) throw config_error("lstm batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw config_error("lstm learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw config_error("adam betas must lie in [0, 1)");
  if (!(adam_eps > 0.0)) throw config_error("adam_eps must be > 0");
  if (patience < 1) throw config_error("lstm patience must be >= 1");
}

void LstmClassifier::init(int n_classes, LstmConfig cfg, std::uint64_t seed) {
  cfg.validate();
  if (n_classes < 2) throw config_error("lstm needs at least 2 classes");
  cfg_ = cfg;
  const int h = cfg.hidden;
  const bool bi = cfg.kind == LstmKind::Bi;
  layout_ = LstmLayout{};
  layout_.hidden = h;
  layout_.n_classes = n_classes;
  layout_.bidirectional = bi;
  layout_.dir_w_count = static_cast<std::size_t>(4 * h) * static_cast<std::size_t>(h + 2);
  layout_.fwd_off = 0;
  layout_.bwd_off = bi ? layout_.dir_w_count : 0;
  const int dense_in = bi ? 2 * h : h;
  layout_.dense_w_off = layout_.dir_w_count * (bi ? 2 : 1);
  layout_.dense_b_off = layout_.dense_w_off +
                        static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(dense_in);
  layout_.total = layout_.dense_b_off + static_cast<std::size_t>(n_classes);

  rng_ = Rng(seed);
  params_.assign(layout_.total, 0.0);
  const double bound = 1.0 / std::sqrt(static_cast<double>(h));
  for (double& p : params_) p = rng_.uniform(-bound, bound);
  // Bias column of each recurrent weight block: zero, forget gate rows at 1.
  const int cols = h + 2;
  for (int dir = 0; dir < (bi ? 2 : 1); ++dir) {
    const std::size_t off = dir == 0 ? layout_.fwd_off : layout_.bwd_off;
    for (int r = 0; r < 4 * h; ++r) {
      const bool forget_row = r >= h && r < 2 * h;
      params_[off + static_cast<std::size_t>(r) * cols + (cols - 1)] = forget_row ? 1.0 : 0.0;
    }
  }
  for (std::size_t k = layout_.dense_b_off; k < layout_.total; ++k) params_[k] = 0.0;
  mu_ = 0.0;
  sigma_ = 1.0;
}

void LstmClassifier::set_normalization(double mu, double sigma) {
  if (!(sigma > 0.0)) throw config_error("normalization sigma must be > 0");
  mu_ = mu;
  sigma_ = sigma;
}

double LstmClassifier::loss_and_grad(const std::vector<std::vector<double>>& x,
                                     const std::vector<int>& y,
                                     std::vector<double>* grad) const {
  if (!initialized()) throw data_error("lstm: model not initialized");
  check_equal_lengths(x);
  if (x.size() != y.size()) throw data_error("lstm: feature/label count mismatch");
  const int c = layout_.n_classes;
  for (int label : y)
    if (label < 0 || label >= c) throw data_error("lstm: label outside [0, n_classes)");
  const Eigen::Index b = static_cast<Eigen::Index>(x.size());
  const Eigen::Index l = static_cast<Eigen::Index>(x.front().size());
  const int h = layout_.hidden;
  const bool bi = layout_.bidirectional;
  const int dense_in = bi ? 2 * h : h;

  Mat xm(b, l);
  for (Eigen::Index r = 0; r < b; ++r)
    for (Eigen::Index t = 0; t < l; ++t)
      xm(r, t) = (x[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] - mu_) / sigma_;

  CMapMat w_fwd(params_.data() + layout_.fwd_off, 4 * h, h + 2);
  CMapMat w_bwd(params_.data() + layout_.bwd_off, 4 * h, h + 2);
  CMapMat w_dense(params_.data() + layout_.dense_w_off, c, dense_in);
  CMapVec b_dense(params_.data() + layout_.dense_b_off, c);

  DirCache cache_f, cache_b;
  DirCache* cf = grad ? &cache_f : nullptr;
  DirCache* cb = grad ? &cache_b : nullptr;
  Mat h_fin(b, dense_in);
  h_fin.leftCols(h) = run_direction(w_fwd, xm, h, false, cf);
  if (bi) h_fin.rightCols(h) = run_direction(w_bwd, xm, h, true, cb);

  Mat logits(b, c);
  logits.noalias() = h_fin * w_dense.transpose();
  logits.rowwise() += b_dense.transpose();

  // Stable softmax cross-entropy.
  Mat p = logits;
  double loss = 0.0;
  for (Eigen::Index r = 0; r < b; ++r) {
    const double mx = p.row(r).maxCoeff();
    p.row(r).array() = (p.row(r).array() - mx).exp();
    const double z = p.row(r).sum();
    p.row(r) /= z;
    loss -= std::log(std::max(p(r, y[static_cast<std::size_t>(r)]),
                              std::numeric_limits<double>::min()));
  }
  loss /= static_cast<double>(b);

  if (grad) {
    grad->assign(layout_.total, 0.0);
    MapMat dw_fwd(grad->data() + layout_.fwd_off, 4 * h, h + 2);
    MapMat dw_bwd(grad->data() + layout_.bwd_off, 4 * h, h + 2);
    MapMat dw_dense(grad->data() + layout_.dense_w_off, c, dense_in);
    MapVec db_dense(grad->data() + layout_.dense_b_off, c);

    Mat dlogits = p;
    for (Eigen::Index r = 0; r < b; ++r) dlogits(r, y[static_cast<std::size_t>(r)]) -= 1.0;
    dlogits /= static_cast<double>(b);
    dw_dense.noalias() += dlogits.transpose() * h_fin;
    db_dense += dlogits.colwise().sum().transpose();
    Mat dh_fin(b, dense_in);
    dh_fin.noalias() = dlogits * w_dense;
    back_direction(w_fwd, cache_f, dh_fin.leftCols(h), h, dw_fwd);
    if (bi) back_direction(w_bwd, cache_b, dh_fin.rightCols(h), h, dw_bwd);
  }
  return loss;
}

std::vector<std::vector<double>> LstmClassifier::predict_proba(
    const std::vector<std::vector<double>>& x) const {
  if (!initialized()) throw data_error("lstm: model not initialized");
  if (x.empty()) return {};
  check_equal_lengths(x);
  const int c = layout_.n_classes;
  const int h = layout_.hidden;
  const bool bi = layout_.bidirectional;
  const int dense_in = bi ? 2 * h : h;
  CMapMat w_fwd(params_.data() + layout_.fwd_off, 4 * h, h + 2);
  CMapMat w_bwd(params_.data() + layout_.bwd_off, 4 * h, h + 2);
  CMapMat w_dense(params_.data() + layout_.dense_w_off, c, dense_in);
  CMapVec b_dense(params_.data() + layout_.dense_b_off, c);

  std::vector<std::vector<double>> out;
  out.reserve(x.size());
  const std::size_t chunk = 256;  // bound transient memory on large sets
  const std::size_t l = x.front().size();
  for (std::size_t start = 0; start < x.size(); start += chunk) {
    const std::size_t nb = std::min(chunk, x.size() - start);
    Mat xm(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(l));
    for (std::size_t r = 0; r < nb; ++r)
      for (std::size_t t = 0; t < l; ++t)
        xm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) =
            (x[start + r][t] - mu_) / sigma_;
    Mat h_fin(static_cast<Eigen::Index>(nb), dense_in);
    h_fin.leftCols(h) = run_direction(w_fwd, xm, h, false, nullptr);
    if (bi) h_fin.rightCols(h) = run_direction(w_bwd, xm, h, true, nullptr);
    Mat logits(static_cast<Eigen::Index>(nb), c);
    logits.noalias() = h_fin * w_dense.transpose();
    logits.rowwise() += b_dense.transpose();
    for (std::size_t r = 0; r < nb; ++r) {
      const Eigen::Index ri = static_cast<Eigen::Index>(r);
      const double mx = logits.row(ri).maxCoeff();
      Eigen::VectorXd e = (logits.row(ri).array() - mx).exp();
      e /= e.sum();
      out.emplace_back(e.data(), e.data() + c);
    }
  }
  return out;
}

std::vector<int> LstmClassifier::predict(const std::vector<std::vector<double>>& x) const {
  const auto proba = predict_proba(x);
  std::vector<int> out;
  out.reserve(proba.size());
  for (const auto& p : proba) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(p.size()); ++k)
      if (p[static_cast<std::size_t>(k)] > p[static_cast<std::size_t>(best)]) best = k;
    out.push_back(best);
  }
  return out;
}

TrainHistory LstmClassifier::train(const std::vector<std::vector<double>>& x_train,
                                   const std::vector<int>& y_train,
                                   const std::vector<std::vector<double>>& x_val,
                                   const std::vector<int>& y_val) {
  if (!initialized()) throw data_error("lstm: model not initialized");
  check_equal_lengths(x_train);
  if (x_train.size() != y_train.size()) throw data_error("lstm: feature/label count mismatch");
  if (x_val.size() != y_val.size()) throw data_error("lstm: validation count mismatch");
  const bool has_val = !x_val.empty();

  // Input normalization from the training set only.
  double mu = 0.0;
  std::size_t count = 0;
  for (const auto& s : x_train) {
    for (double v : s) mu += v;
    count += s.size();
  }
  mu /= static_cast<double>(count);
  double var = 0.0;
  for (const auto& s : x_train)
    for (double v : s) var += (v - mu) * (v - mu);
  double sigma = std::sqrt(var / static_cast<double>(count));
  if (!(sigma > 0.0)) sigma = 1.0;
  mu_ = mu;
  sigma_ = sigma;

  TrainHistory hist;
  std::vector<double> m(layout_.total, 0.0), v(layout_.total, 0.0), grad;
  MapVec pm(params_.data(), static_cast<Eigen::Index>(layout_.total));
  MapVec mm(m.data(), static_cast<Eigen::Index>(layout_.total));
  MapVec vm(v.data(), static_cast<Eigen::Index>(layout_.total));
  long long adam_t = 0;

  std::vector<std::size_t> order(x_train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> best_params;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 0; epoch < cfg_.max_epochs; ++epoch) {
    rng_.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg_.batch_size)) {
      const std::size_t nb =
          std::min<std::size_t>(static_cast<std::size_t>(cfg_.batch_size), order.size() - start);
      std::vector<std::vector<double>> bx(nb);
      std::vector<int> by(nb);
      for (std::size_t i = 0; i < nb; ++i) {
        bx[i] = x_train[order[start + i]];
        by[i] = y_train[order[start + i]];
      }
      const double loss = loss_and_grad(bx, by, &grad);
      if (!std::isfinite(loss))
        throw train_error("training diverged (non-finite loss) in epoch " +
                          std::to_string(epoch + 1));
      epoch_loss += loss * static_cast<double>(nb);
      ++adam_t;
      MapVec gm(grad.data(), static_cast<Eigen::Index>(layout_.total));
      mm = cfg_.beta1 * mm + (1.0 - cfg_.beta1) * gm;
      vm.array() = cfg_.beta2 * vm.array() + (1.0 - cfg_.beta2) * gm.array().square();
      const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(adam_t));
      const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(adam_t));
      pm.array() -=
          cfg_.learning_rate * (mm.array() / bc1) / ((vm.array() / bc2).sqrt() + cfg_.adam_eps);
    }
    hist.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    hist.epochs_run = epoch + 1;

    if (has_val) {
      const double vl = loss_and_grad(x_val, y_val, nullptr);
      if (!std::isfinite(vl))
        throw train_error("training diverged (non-finite validation loss) in epoch " +
                          std::to_string(epoch + 1));
      const auto pred = predict(x_val);
      int ok = 0;
      for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == y_val[i]) ++ok;
      hist.val_loss.push_back(vl);
      hist.val_accuracy.push_back(static_cast<double>(ok) / static_cast<double>(pred.size()));
      if (vl < best_val) {
        best_val = vl;
        best_params = params_;
        hist.best_epoch = epoch;
        since_best = 0;
      } else {
        ++since_best;
        if (since_best >= cfg_.patience) break;
      }
    } else {
      hist.best_epoch = epoch;
    }
  }
  if (has_val && !best_params.empty()) params_ = std::move(best_params);
  return hist;
}

std::string LstmClassifier::to_json() const {
  if (!initialized()) throw data_error("lstm save: model not initialized");
  nlohmann::ordered_json j;
  j["model"] = "lstm";
  j["kind"] = lstm_kind_name(cfg_.kind);
  j["hidden"] = cfg_.hidden;
  j["n_classes"] = layout_.n_classes;
  j["mu"] = mu_;
  j["sigma"] = sigma_;
  j["max_epochs"] = cfg_.max_epochs;
  j["batch_size"] = cfg_.batch_size;
  j["learning_rate"] = cfg_.learning_rate;
  j["beta1"] = cfg_.beta1;
  j["beta2"] = cfg_.beta2;
  j["adam_eps"] = cfg_.adam_eps;
  j["patience"] = cfg_.patience;
  j["params"] = params_;
  return j.dump(1);
}

LstmClassifier LstmClassifier::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("lstm load: invalid JSON: ") + e.what());
  }
  LstmClassifier m;
  try {
    if (j.at("model").get<std::string>() != "lstm")
      throw data_error("lstm load: not an lstm model file");
    LstmConfig cfg;
    cfg.kind = lstm_kind_from_name(j.at("kind").get<std::string>());
    cfg.hidden = j.at("hidden").get<int>();
    cfg.max_epochs = j.at("max_epochs").get<int>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.beta1 = j.at("beta1").get<double>();
    cfg.beta2 = j.at("beta2").get<double>();
    cfg.adam_eps = j.at("adam_eps").get<double>();
    cfg.patience = j.at("patience").get<int>();
    const int n_classes = j.at("n_classes").get<int>();
    m.init(n_classes, cfg, 0);
    const auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != m.layout_.total)
      throw data_error("lstm load: parameter count does not match architecture");
    m.params_ = params;
    m.mu_ = j.at("mu").get<double>();
    m.sigma_ = j.at("sigma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("lstm load: missing or malformed field: ") + e.what());
  }
  if (!(m.sigma_ > 0.0)) throw data_error("lstm load: sigma must be > 0");
  return m;
}

}  // namespace sehs
