#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sehs/circuit.hpp"
#include "sehs/dataset.hpp"
#include "sehs/filter.hpp"
#include "sehs/pipeline.hpp"
#include "sehs/population.hpp"
#include "sehs/power.hpp"
#include "sehs/protocol.hpp"
#include "sehs/stats.hpp"

namespace sehs {

// One end-to-end recognition scenario: a synthetic walker population, the
// harvester circuit they drive, and the segmentation settings that turn the
// recorded traces into datasets.
struct ScenarioConfig {
  int n_subjects = 20;
  int cycles_per_subject = 250;
  double walk_duration_s = 360.0;
  double v_star = 2.0;
  Peh position = Peh::Front;  // which harvester's trace feeds recognition
  std::uint64_t seed = 0;
  CircuitParams circuit;
  PopulationRanges ranges;
  PipelineConfig pipeline;
  void validate() const;  // throws config_error
};

struct SubjectData {
  SubjectProfile front_profile;
  SubjectProfile rear_profile;
  SimResult front;
  SimResult rear;
};

SubjectData build_subject(const ScenarioConfig& cfg, int subject_id);
std::vector<SubjectData> build_population_sims(const ScenarioConfig& cfg);

// The differential voltage fed to recognition: filtered V' or raw V_A - V_B.
std::vector<double> recognition_signal(const SimResult& sim, bool filtered, double v_star);

struct SubjectSegmentation {
  int subject_id = 0;
  int detected = 0;
  int rejected = 0;
  int kept = 0;
  bool band_fallback = false;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
};

struct SegmentationSummary {
  std::vector<SubjectSegmentation> subjects;
};

// Segments every subject's recognition signal and balances the result to
// cycles_per_subject cycles each (data error if any subject falls short).
Dataset build_dataset(const std::vector<SubjectData>& sims, const ScenarioConfig& cfg,
                      bool filtered, SegmentationSummary* summary = nullptr);

// Per-cycle peak-to-peak amplitude regressed against the capacitor voltage
// at cycle start, for the raw differential signal and its filtered version.
struct DistortionStats {
  SlopeFit unfiltered;
  SlopeFit filtered;
  double reduction_pct = 0.0;  // |slope| reduction achieved by the filter
  int n_cycles = 0;
};
DistortionStats distortion_stats(const SimResult& sim, double v_star);

// Mean pairwise DTW distance per subject, filtered vs. unfiltered datasets
// (lower = more regular). Distances use at most max_pairs sampled pairs.
struct SimilarityComparison {
  std::vector<int> subject_ids;
  std::vector<double> filtered;
  std::vector<double> unfiltered;
  std::vector<double> ratio;  // unfiltered / filtered
};
SimilarityComparison similarity_by_subject(const Dataset& filtered_ds,
                                           const Dataset& unfiltered_ds, std::size_t max_pairs,
                                           std::uint64_t seed);

// Harvested-energy accounting over both shoe positions.
struct EnergyReport {
  struct PerSubject {
    int subject_id = 0;
    double front_mean_uj = 0.0;
    double rear_mean_uj = 0.0;
    double total_mean_uj = 0.0;
    int front_steps = 0;
    int rear_steps = 0;
  };
  std::vector<PerSubject> subjects;
  double mean_front_uj = 0.0;
  double mean_rear_uj = 0.0;
  double mean_total_uj = 0.0;
  HarvestImprovement improvement;  // of dual placement over each single one
};
EnergyReport energy_report(const std::vector<SubjectData>& sims);

struct SweepPoint {
  double x = 0.0;
  double macro_recall = 0.0;
  double accuracy = 0.0;
};

// Each sweep re-runs dataset construction and a single-split training with
// the same seed at every grid point, varying only the swept parameter.
std::vector<SweepPoint> sweep_v_star(const std::vector<SubjectData>& sims,
                                     const ScenarioConfig& cfg, const ProtocolConfig& proto,
                                     ClassifierKind kind, const std::vector<double>& grid);
std::vector<SweepPoint> sweep_rate(const Dataset& base, double original_rate_hz,
                                   const ProtocolConfig& proto, ClassifierKind kind,
                                   const std::vector<double>& grid_hz);
std::vector<SweepPoint> sweep_size(const Dataset& base, const ProtocolConfig& proto,
                                   ClassifierKind kind, const std::vector<int>& grid);

}  // namespace sehs
