#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sehs/configio.hpp"
#include "sehs/errors.hpp"
#include "sehs/protocol.hpp"
#include "sehs/rng.hpp"

using namespace sehs;

namespace {

std::vector<int> make_labels(const std::vector<int>& class_sizes) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < class_sizes.size(); ++c)
    for (int i = 0; i < class_sizes[c]; ++i) labels.push_back(static_cast<int>(c));
  return labels;
}

std::map<int, int> class_counts(const std::vector<int>& labels,
                                const std::vector<std::size_t>& idx) {
  std::map<int, int> counts;
  for (std::size_t i : idx) counts[labels[i]]++;
  return counts;
}

// Separable toy dataset: subject k's cycles hover around level k.
Dataset make_dataset(int n_subjects, int per_subject, int len, std::uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  for (int s = 0; s < n_subjects; ++s) {
    for (int i = 0; i < per_subject; ++i) {
      GaitCycle c;
      c.subject_id = s;
      c.original_duration_s = 1.0 + 0.02 * rng.gaussian();
      for (int t = 0; t < len; ++t) c.samples.push_back(s + 0.1 * rng.gaussian());
      ds.cycles.push_back(std::move(c));
    }
  }
  return ds;
}

ProtocolConfig fast_protocol(std::uint64_t seed) {
  ProtocolConfig cfg;
  cfg.seed = seed;
  cfg.knn.k = 5;
  cfg.lstm.hidden = 8;
  cfg.lstm.max_epochs = 15;
  cfg.lstm.batch_size = 16;
  cfg.lstm.learning_rate = 1e-2;
  return cfg;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("stratified split is disjoint, covering, and proportional per class") {
  const std::vector<int> labels = make_labels({10, 20, 5});
  Rng rng(3);
  const SplitIndices s = stratified_split(labels, 0.2, rng);
  CHECK(s.train.size() + s.test.size() == labels.size());
  std::set<std::size_t> seen(s.train.begin(), s.train.end());
  seen.insert(s.test.begin(), s.test.end());
  CHECK(seen.size() == labels.size());  // disjoint and covering

  const auto test_counts = class_counts(labels, s.test);
  CHECK(test_counts.at(0) == 2);  // round(0.2 * 10)
  CHECK(test_counts.at(1) == 4);
  CHECK(test_counts.at(2) == 1);
}

TEST_CASE("stratified split always keeps at least one training sample per class") {
  const std::vector<int> labels = make_labels({2, 8});
  Rng rng(5);
  const SplitIndices s = stratified_split(labels, 0.9, rng);
  const auto train_counts = class_counts(labels, s.train);
  CHECK(train_counts.at(0) == 1);  // round(0.9*2)=2 would empty the class
  CHECK(train_counts.at(1) == 1);
}

TEST_CASE("stratified split rejects bad fractions and labels") {
  Rng rng(1);
  const std::vector<int> labels = make_labels({4, 4});
  CHECK_THROWS_AS(stratified_split(labels, 0.0, rng), config_error);
  CHECK_THROWS_AS(stratified_split(labels, 1.0, rng), config_error);
  CHECK_THROWS_AS(stratified_split({}, 0.2, rng), data_error);
  CHECK_THROWS_AS(stratified_split({0, -1}, 0.2, rng), data_error);
}

TEST_CASE("stratified folds partition the indices with balanced class shares") {
  const std::vector<int> labels = make_labels({10, 10, 10});
  Rng rng(7);
  const auto folds = stratified_folds(labels, 5, rng);
  REQUIRE(folds.size() == 5);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    CHECK(f.size() == 6);
    const auto counts = class_counts(labels, f);
    for (int c = 0; c < 3; ++c) CHECK(counts.at(c) == 2);
    seen.insert(f.begin(), f.end());
  }
  CHECK(seen.size() == labels.size());
  CHECK_THROWS_AS(stratified_folds(labels, 1, rng), config_error);
}

TEST_CASE("uneven class sizes spread across folds within one sample") {
  const std::vector<int> labels = make_labels({24, 24, 24});
  Rng rng(11);
  const auto folds = stratified_folds(labels, 5, rng);
  for (const auto& f : folds) {
    const auto counts = class_counts(labels, f);
    for (const auto& [cls, n] : counts) {
      (void)cls;
      CHECK(n >= 4);
      CHECK(n <= 5);
    }
  }
}

TEST_CASE("splits are reproducible for a fixed seed") {
  const std::vector<int> labels = make_labels({30, 30});
  Rng a(9), b(9), c(10);
  const SplitIndices s1 = stratified_split(labels, 0.2, a);
  const SplitIndices s2 = stratified_split(labels, 0.2, b);
  const SplitIndices s3 = stratified_split(labels, 0.2, c);
  CHECK(s1.train == s2.train);
  CHECK(s1.test == s2.test);
  CHECK(s1.test != s3.test);
}

TEST_CASE("classifier names round-trip and bad names throw") {
  for (ClassifierKind k : {ClassifierKind::Knn, ClassifierKind::UniLstm, ClassifierKind::BiLstm})
    CHECK(classifier_from_name(classifier_name(k)) == k);
  CHECK(classifier_from_name("bi") == ClassifierKind::BiLstm);
  CHECK_THROWS_AS(classifier_from_name("forest"), config_error);
}

TEST_CASE("protocol config validation rejects out-of-range settings") {
  ProtocolConfig cfg;
  cfg.test_frac = 0.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = ProtocolConfig{};
  cfg.folds = 1;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = ProtocolConfig{};
  cfg.val_frac = 1.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = ProtocolConfig{};
  cfg.knn.k = 0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  CHECK_NOTHROW(ProtocolConfig{}.validate());
}

TEST_CASE("single-split knn training uses the whole training side") {
  const Dataset ds = make_dataset(3, 30, 20, 17);
  const FitResult fr = train_once(ds, ClassifierKind::Knn, fast_protocol(21));
  CHECK(fr.n_test == 18);  // round(0.2*30) per subject
  CHECK(fr.n_train == 72);
  CHECK(fr.n_val == 0);
  CHECK(fr.test_eval.n == 18);
  CHECK(fr.history.epochs_run == 0);
  CHECK(!fr.model_json.empty());
  CHECK(fr.test_eval.accuracy > 0.9);  // trivially separable levels
}

TEST_CASE("single-split lstm training carves a validation set from the training side") {
  const Dataset ds = make_dataset(3, 30, 20, 19);
  const FitResult fr = train_once(ds, ClassifierKind::UniLstm, fast_protocol(23));
  CHECK(fr.n_test == 18);
  CHECK(fr.n_val == 6);  // round(0.1*24) per subject
  CHECK(fr.n_train == 66);
  CHECK(fr.n_train + fr.n_val + fr.n_test == static_cast<int>(ds.cycles.size()));
  CHECK(fr.history.epochs_run >= 1);
  CHECK(fr.test_eval.accuracy > 0.9);
}

TEST_CASE("single-split training is deterministic for a fixed seed") {
  const Dataset ds = make_dataset(3, 20, 15, 31);
  const FitResult a = train_once(ds, ClassifierKind::Knn, fast_protocol(37));
  const FitResult b = train_once(ds, ClassifierKind::Knn, fast_protocol(37));
  CHECK(a.model_json == b.model_json);
  CHECK(a.test_eval.accuracy == b.test_eval.accuracy);
  const FitResult c = train_once(ds, ClassifierKind::Knn, fast_protocol(38));
  CHECK(a.model_json != c.model_json);  // different split
}

TEST_CASE("cross-validation runs every fold against the shared outer test set") {
  const Dataset ds = make_dataset(3, 30, 20, 41);
  const CvReport rep = run_protocol(ds, ClassifierKind::Knn, fast_protocol(43));
  CHECK(rep.classifier == "knn");
  REQUIRE(rep.folds.size() == 5);
  double acc_sum = 0.0;
  for (const FitResult& fr : rep.folds) {
    CHECK(fr.n_test == 18);  // same outer test set everywhere
    CHECK(fr.n_val == 0);
    CHECK(fr.n_train < 72);  // one fold held out for selection
    CHECK(fr.selection_accuracy >= 0.0);
    acc_sum += fr.test_eval.accuracy;
  }
  CHECK(rep.mean_test_accuracy == doctest::Approx(acc_sum / 5.0).epsilon(1e-12));
  CHECK(rep.best_fold >= 0);
  CHECK(rep.best_fold < 5);
  const double best_sel = rep.folds[rep.best_fold].selection_accuracy;
  for (const FitResult& fr : rep.folds) CHECK(best_sel >= fr.selection_accuracy);
}

TEST_CASE("cross-validation with an lstm carves fit, validation, and selection splits") {
  const Dataset ds = make_dataset(2, 25, 12, 47);
  ProtocolConfig cfg = fast_protocol(51);
  cfg.folds = 3;
  cfg.lstm.max_epochs = 6;
  const CvReport rep = run_protocol(ds, ClassifierKind::UniLstm, cfg);
  REQUIRE(rep.folds.size() == 3);
  for (const FitResult& fr : rep.folds) {
    CHECK(fr.n_val > 0);
    CHECK(fr.history.epochs_run >= 1);
    CHECK(fr.n_train + fr.n_val < 40);  // fit pool excludes the selection fold
  }
}

TEST_CASE("training with fewer than two classes is rejected") {
  const Dataset ds = make_dataset(1, 20, 10, 53);
  CHECK_THROWS_AS(train_once(ds, ClassifierKind::Knn, fast_protocol(1)), data_error);
}

TEST_CASE("shipped circuit config file matches the built-in defaults") {
  const CircuitParams d;
  const CircuitParams c = load_circuit_config(std::string(SEHS_REPO_DIR) + "/configs/circuit.cfg");
  CHECK(c.c_f == d.c_f);
  CHECK(c.r_internal_ohm == d.r_internal_ohm);
  CHECK(c.r_match_ohm == d.r_match_ohm);
  CHECK(c.v_diode == d.v_diode);
  CHECK(c.v_cap_init == d.v_cap_init);
  CHECK(c.discharge_period_s == d.discharge_period_s);
  CHECK(c.sim_step_s == d.sim_step_s);
  CHECK(c.out_rate_hz == d.out_rate_hz);
  CHECK(c.adc.bits == d.adc.bits);
  CHECK(c.adc.full_scale_v == d.adc.full_scale_v);
}

TEST_CASE("shipped population config file matches the built-in defaults") {
  const PopulationRanges d;
  const PopulationRanges p =
      load_population_config(std::string(SEHS_REPO_DIR) + "/configs/population.cfg");
  CHECK(p.n_subjects == d.n_subjects);
  CHECK(p.heel_peak_lo_v == d.heel_peak_lo_v);
  CHECK(p.heel_peak_hi_v == d.heel_peak_hi_v);
  CHECK(p.toe_ratio_lo == d.toe_ratio_lo);
  CHECK(p.toe_ratio_hi == d.toe_ratio_hi);
  CHECK(p.heel_pos_lo == d.heel_pos_lo);
  CHECK(p.heel_pos_hi == d.heel_pos_hi);
  CHECK(p.toe_pos_lo == d.toe_pos_lo);
  CHECK(p.toe_pos_hi == d.toe_pos_hi);
  CHECK(p.width_lo == d.width_lo);
  CHECK(p.width_hi == d.width_hi);
  CHECK(p.rebound_lo == d.rebound_lo);
  CHECK(p.rebound_hi == d.rebound_hi);
  CHECK(p.harmonic_abs_max == d.harmonic_abs_max);
  CHECK(p.amp_jitter_sd == d.amp_jitter_sd);
  CHECK(p.duration_mean_lo_s == d.duration_mean_lo_s);
  CHECK(p.duration_mean_hi_s == d.duration_mean_hi_s);
  CHECK(p.duration_sd_lo_s == d.duration_sd_lo_s);
  CHECK(p.duration_sd_hi_s == d.duration_sd_hi_s);
  CHECK(p.noise_lo_v == d.noise_lo_v);
  CHECK(p.noise_hi_v == d.noise_hi_v);
  CHECK(p.rear_amp_scale == d.rear_amp_scale);
  CHECK(p.rear_phase_shift == d.rear_phase_shift);
}

TEST_CASE("shipped pipeline config file matches the built-in defaults") {
  const PipelineConfig d;
  const PipelineConfig p =
      load_pipeline_config(std::string(SEHS_REPO_DIR) + "/configs/pipeline.cfg");
  CHECK(p.ma_window == d.ma_window);
  CHECK(p.lowpass_cutoff_hz == d.lowpass_cutoff_hz);
  CHECK(p.lowpass_taps == d.lowpass_taps);
  CHECK(p.band_lo_hz == d.band_lo_hz);
  CHECK(p.band_hi_hz == d.band_hi_hz);
  CHECK(p.auto_band == d.auto_band);
  CHECK(p.bandpass_taps == d.bandpass_taps);
  CHECK(p.peak_min_frac == d.peak_min_frac);
  CHECK(p.peak_min_dist_s == d.peak_min_dist_s);
  CHECK(p.min_cycle_s == d.min_cycle_s);
  CHECK(p.max_cycle_s == d.max_cycle_s);
  CHECK(p.target_len == d.target_len);
  CHECK(p.reject_factor == d.reject_factor);
}

TEST_CASE("shipped training config file matches the built-in defaults") {
  const ProtocolConfig d;
  const ProtocolConfig p =
      load_protocol_config(std::string(SEHS_REPO_DIR) + "/configs/train.cfg");
  CHECK(p.test_frac == d.test_frac);
  CHECK(p.folds == d.folds);
  CHECK(p.val_frac == d.val_frac);
  CHECK(p.seed == d.seed);
  CHECK(p.knn.k == d.knn.k);
  CHECK(p.lstm.hidden == d.lstm.hidden);
  CHECK(p.lstm.max_epochs == d.lstm.max_epochs);
  CHECK(p.lstm.batch_size == d.lstm.batch_size);
  CHECK(p.lstm.learning_rate == d.lstm.learning_rate);
  CHECK(p.lstm.beta1 == d.lstm.beta1);
  CHECK(p.lstm.beta2 == d.lstm.beta2);
  CHECK(p.lstm.adam_eps == d.lstm.adam_eps);
  CHECK(p.lstm.patience == d.lstm.patience);
}

}  // TEST_SUITE
