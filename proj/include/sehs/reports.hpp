#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sehs/experiment.hpp"

namespace sehs {

// JSON views of result structs (ordered keys, deterministic dumps).
nlohmann::ordered_json evaluation_json(const Evaluation& ev);
nlohmann::ordered_json fit_result_json(const FitResult& fr);
nlohmann::ordered_json cv_report_json(const CvReport& r);
nlohmann::ordered_json energy_json(const EnergyReport& r);
nlohmann::ordered_json segmentation_json(const SegmentationSummary& s);
nlohmann::ordered_json similarity_json(const SimilarityComparison& s);
nlohmann::ordered_json distortion_json(const DistortionStats& d);
nlohmann::ordered_json sweep_json(const std::string& x_name, const std::vector<SweepPoint>& pts);

std::string sweep_csv(const std::string& x_name, const std::vector<SweepPoint>& pts);
std::string similarity_csv(const SimilarityComparison& s);
std::string energy_csv(const EnergyReport& r);

struct ReproduceOptions {
  std::uint64_t seed = 7;
  int n_subjects = 20;
  int cycles_per_subject = 250;
  double walk_duration_s = 360.0;
  bool run_sweeps = true;
  bool full_cv = false;  // k-fold CV per classifier instead of one split
  std::string out_dir = "reproduce_out";
  std::vector<double> v_star_grid{0.5, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> rate_grid{10, 20, 30, 40, 60, 80, 100};
  std::vector<int> size_grid{25, 50, 100, 150, 200};
};

// Chains the full workflow: population simulation, energy accounting,
// filtered + unfiltered datasets, DTW similarity, classifier comparison, and
// the three parameter sweeps. Writes summary.json and plot-ready CSVs into
// out_dir; all outputs are deterministic functions of the options (no
// timestamps), so identical options give byte-identical files.
void run_reproduce(const ReproduceOptions& opt, std::ostream& log);

}  // namespace sehs
