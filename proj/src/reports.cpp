#include "sehs/reports.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "sehs/errors.hpp"
#include "sehs/io.hpp"
#include "sehs/trace.hpp"

namespace sehs {
namespace {

nlohmann::ordered_json history_json(const TrainHistory& h) {
  nlohmann::ordered_json j;
  j["epochs_run"] = h.epochs_run;
  j["best_epoch"] = h.best_epoch;
  j["train_loss"] = h.train_loss;
  j["val_loss"] = h.val_loss;
  j["val_accuracy"] = h.val_accuracy;
  return j;
}

}  // namespace

nlohmann::ordered_json evaluation_json(const Evaluation& ev) {
  nlohmann::ordered_json j;
  j["n"] = ev.n;
  j["correct"] = ev.correct;
  j["accuracy"] = ev.accuracy;
  j["macro_precision"] = ev.macro_precision;
  j["macro_recall"] = ev.macro_recall;
  j["macro_f1"] = ev.macro_f1;
  j["precision_undefined_classes"] = ev.precision_undefined;
  j["recall_undefined_classes"] = ev.recall_undefined;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < ev.precision.size(); ++k) {
    nlohmann::ordered_json c;
    c["class"] = static_cast<int>(k);
    if (ev.precision_defined[k])
      c["precision"] = ev.precision[k];
    else
      c["precision"] = nullptr;
    if (ev.recall_defined[k])
      c["recall"] = ev.recall[k];
    else
      c["recall"] = nullptr;
    c["f1"] = ev.f1[k];
    per_class.push_back(c);
  }
  j["per_class"] = per_class;
  j["confusion"] = ev.confusion;
  return j;
}

nlohmann::ordered_json fit_result_json(const FitResult& fr) {
  nlohmann::ordered_json j;
  j["n_train"] = fr.n_train;
  j["n_val"] = fr.n_val;
  j["n_test"] = fr.n_test;
  j["selection_accuracy"] = fr.selection_accuracy;
  j["test"] = evaluation_json(fr.test_eval);
  if (fr.history.epochs_run > 0) j["history"] = history_json(fr.history);
  return j;
}

nlohmann::ordered_json cv_report_json(const CvReport& r) {
  nlohmann::ordered_json j;
  j["classifier"] = r.classifier;
  j["mean_test_accuracy"] = r.mean_test_accuracy;
  j["std_test_accuracy"] = r.std_test_accuracy;
  j["mean_macro_recall"] = r.mean_macro_recall;
  j["std_macro_recall"] = r.std_macro_recall;
  j["mean_macro_precision"] = r.mean_macro_precision;
  j["std_macro_precision"] = r.std_macro_precision;
  j["best_fold"] = r.best_fold;
  nlohmann::ordered_json folds = nlohmann::ordered_json::array();
  for (const FitResult& f : r.folds) folds.push_back(fit_result_json(f));
  j["folds"] = folds;
  return j;
}

nlohmann::ordered_json energy_json(const EnergyReport& r) {
  nlohmann::ordered_json j;
  j["mean_front_uj"] = r.mean_front_uj;
  j["mean_rear_uj"] = r.mean_rear_uj;
  j["mean_total_uj"] = r.mean_total_uj;
  j["improvement_vs_front_pct"] = r.improvement.vs_front_pct;
  j["improvement_vs_rear_pct"] = r.improvement.vs_rear_pct;
  nlohmann::ordered_json subjects = nlohmann::ordered_json::array();
  for (const auto& s : r.subjects) {
    nlohmann::ordered_json e;
    e["subject_id"] = s.subject_id;
    e["front_mean_uj"] = s.front_mean_uj;
    e["rear_mean_uj"] = s.rear_mean_uj;
    e["total_mean_uj"] = s.total_mean_uj;
    e["front_steps"] = s.front_steps;
    e["rear_steps"] = s.rear_steps;
    subjects.push_back(e);
  }
  j["subjects"] = subjects;
  return j;
}

nlohmann::ordered_json segmentation_json(const SegmentationSummary& s) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : s.subjects) {
    nlohmann::ordered_json e;
    e["subject_id"] = r.subject_id;
    e["detected"] = r.detected;
    e["rejected"] = r.rejected;
    e["kept"] = r.kept;
    e["band_fallback"] = r.band_fallback;
    e["band_lo_hz"] = r.band_lo_hz;
    e["band_hi_hz"] = r.band_hi_hz;
    arr.push_back(e);
  }
  return arr;
}

nlohmann::ordered_json similarity_json(const SimilarityComparison& s) {
  nlohmann::ordered_json j;
  double mf = 0.0, mu = 0.0;
  for (std::size_t i = 0; i < s.subject_ids.size(); ++i) {
    mf += s.filtered[i];
    mu += s.unfiltered[i];
  }
  const double n = static_cast<double>(s.subject_ids.size());
  j["mean_filtered_dtw"] = mf / n;
  j["mean_unfiltered_dtw"] = mu / n;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.subject_ids.size(); ++i) {
    nlohmann::ordered_json e;
    e["subject_id"] = s.subject_ids[i];
    e["filtered_dtw"] = s.filtered[i];
    e["unfiltered_dtw"] = s.unfiltered[i];
    e["ratio"] = std::isfinite(s.ratio[i]) ? nlohmann::ordered_json(s.ratio[i])
                                           : nlohmann::ordered_json(nullptr);
    arr.push_back(e);
  }
  j["subjects"] = arr;
  return j;
}

nlohmann::ordered_json distortion_json(const DistortionStats& d) {
  nlohmann::ordered_json j;
  j["n_cycles"] = d.n_cycles;
  j["unfiltered_slope"] = d.unfiltered.slope;
  j["unfiltered_p_value"] = d.unfiltered.p_value;
  j["filtered_slope"] = d.filtered.slope;
  j["filtered_p_value"] = d.filtered.p_value;
  j["slope_reduction_pct"] = d.reduction_pct;
  return j;
}

nlohmann::ordered_json sweep_json(const std::string& x_name, const std::vector<SweepPoint>& pts) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepPoint& p : pts) {
    nlohmann::ordered_json e;
    e[x_name] = p.x;
    e["macro_recall"] = p.macro_recall;
    e["accuracy"] = p.accuracy;
    arr.push_back(e);
  }
  return arr;
}

std::string sweep_csv(const std::string& x_name, const std::vector<SweepPoint>& pts) {
  std::ostringstream out;
  out << x_name << ",macro_recall,accuracy\n";
  for (const SweepPoint& p : pts)
    out << format_double(p.x) << ',' << format_double(p.macro_recall) << ','
        << format_double(p.accuracy) << '\n';
  return out.str();
}

std::string similarity_csv(const SimilarityComparison& s) {
  std::ostringstream out;
  out << "subject_id,filtered_dtw,unfiltered_dtw,ratio\n";
  for (std::size_t i = 0; i < s.subject_ids.size(); ++i)
    out << s.subject_ids[i] << ',' << format_double(s.filtered[i]) << ','
        << format_double(s.unfiltered[i]) << ','
        << (std::isfinite(s.ratio[i]) ? format_double(s.ratio[i]) : "inf") << '\n';
  return out.str();
}

std::string energy_csv(const EnergyReport& r) {
  std::ostringstream out;
  out << "subject_id,front_mean_uj,rear_mean_uj,total_mean_uj,front_steps,rear_steps\n";
  for (const auto& s : r.subjects)
    out << s.subject_id << ',' << format_double(s.front_mean_uj) << ','
        << format_double(s.rear_mean_uj) << ',' << format_double(s.total_mean_uj) << ','
        << s.front_steps << ',' << s.rear_steps << '\n';
  return out.str();
}

void run_reproduce(const ReproduceOptions& opt, std::ostream& log) {
  if (opt.n_subjects < 2)
    throw config_error("reproduce needs at least 2 subjects for classification");
  ScenarioConfig sc;
  sc.seed = opt.seed;
  sc.n_subjects = opt.n_subjects;
  sc.cycles_per_subject = opt.cycles_per_subject;
  sc.walk_duration_s = opt.walk_duration_s;
  sc.validate();
  ProtocolConfig proto;
  proto.seed = opt.seed;
  proto.validate();

  std::filesystem::create_directories(opt.out_dir);
  auto out_path = [&opt](const std::string& name) {
    return (std::filesystem::path(opt.out_dir) / name).string();
  };

  log << "simulating " << sc.n_subjects << " subjects, " << sc.walk_duration_s
      << " s walks (front + rear)\n";
  const std::vector<SubjectData> sims = build_population_sims(sc);

  log << "computing harvested-energy report\n";
  const EnergyReport energy = energy_report(sims);

  log << "building filtered and unfiltered datasets\n";
  SegmentationSummary seg_f, seg_u;
  const Dataset ds_f = build_dataset(sims, sc, true, &seg_f);
  const Dataset ds_u = build_dataset(sims, sc, false, &seg_u);

  log << "computing DTW gait-similarity comparison\n";
  const SimilarityComparison sim_cmp = similarity_by_subject(ds_f, ds_u, 1000, opt.seed);

  log << "computing distortion statistics\n";
  nlohmann::ordered_json distortion = nlohmann::ordered_json::array();
  double mean_reduction = 0.0;
  for (std::size_t id = 0; id < sims.size(); ++id) {
    const DistortionStats d = distortion_stats(sims[id].front, sc.v_star);
    nlohmann::ordered_json e = distortion_json(d);
    e["subject_id"] = static_cast<int>(id);
    distortion.push_back(e);
    mean_reduction += d.reduction_pct;
  }
  mean_reduction /= static_cast<double>(sims.size());

  nlohmann::ordered_json classification = nlohmann::ordered_json::array();
  for (const ClassifierKind kind :
       {ClassifierKind::Knn, ClassifierKind::UniLstm, ClassifierKind::BiLstm}) {
    for (const bool filtered : {true, false}) {
      log << "training " << classifier_name(kind) << (filtered ? " (filtered)" : " (unfiltered)")
          << (opt.full_cv ? " with cross-validation" : "") << '\n';
      nlohmann::ordered_json row;
      row["classifier"] = classifier_name(kind);
      row["filtered"] = filtered;
      const Dataset& ds = filtered ? ds_f : ds_u;
      if (opt.full_cv) {
        row["cv"] = cv_report_json(run_protocol(ds, kind, proto));
      } else {
        row["fit"] = fit_result_json(train_once(ds, kind, proto));
      }
      classification.push_back(row);
    }
  }

  nlohmann::ordered_json sweeps;
  if (opt.run_sweeps) {
    log << "sweeping v_star over " << opt.v_star_grid.size() << " points\n";
    const auto sv = sweep_v_star(sims, sc, proto, ClassifierKind::BiLstm, opt.v_star_grid);
    log << "sweeping sampling rate over " << opt.rate_grid.size() << " points\n";
    const auto sr =
        sweep_rate(ds_f, sc.circuit.out_rate_hz, proto, ClassifierKind::BiLstm, opt.rate_grid);
    log << "sweeping training size over " << opt.size_grid.size() << " points\n";
    const auto ss = sweep_size(ds_f, proto, ClassifierKind::BiLstm, opt.size_grid);
    sweeps["v_star"] = sweep_json("v_star", sv);
    sweeps["sampling_rate_hz"] = sweep_json("rate_hz", sr);
    sweeps["training_size"] = sweep_json("cycles_per_subject", ss);
    write_file_atomic(out_path("sweep_v_star.csv"), sweep_csv("v_star", sv));
    write_file_atomic(out_path("sweep_rate.csv"), sweep_csv("rate_hz", sr));
    write_file_atomic(out_path("sweep_size.csv"), sweep_csv("cycles_per_subject", ss));
  }

  nlohmann::ordered_json summary;
  summary["options"] = {{"seed", opt.seed},
                        {"n_subjects", opt.n_subjects},
                        {"cycles_per_subject", opt.cycles_per_subject},
                        {"walk_duration_s", opt.walk_duration_s},
                        {"run_sweeps", opt.run_sweeps},
                        {"full_cv", opt.full_cv},
                        {"v_star_grid", opt.v_star_grid},
                        {"rate_grid", opt.rate_grid},
                        {"size_grid", opt.size_grid}};
  summary["energy"] = energy_json(energy);
  summary["segmentation"] = {{"filtered", segmentation_json(seg_f)},
                             {"unfiltered", segmentation_json(seg_u)}};
  summary["similarity"] = similarity_json(sim_cmp);
  summary["distortion"] = {{"mean_slope_reduction_pct", mean_reduction},
                           {"subjects", distortion}};
  summary["classification"] = classification;
  if (opt.run_sweeps) summary["sweeps"] = sweeps;

  write_file_atomic(out_path("summary.json"), summary.dump(1) + "\n");
  write_file_atomic(out_path("energy.csv"), energy_csv(energy));
  write_file_atomic(out_path("similarity.csv"), similarity_csv(sim_cmp));
  log << "wrote " << out_path("summary.json") << '\n';
}

}  // namespace sehs
