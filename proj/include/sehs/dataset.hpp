#pragma once
#include <string>
#include <vector>

namespace sehs {

// Which harvester on the insole produced the signal.
enum class Peh { Front, Rear };

std::string peh_name(Peh p);
Peh peh_from_name(const std::string& s);  // throws data_error

// One segmented, length-normalized gait cycle.
struct GaitCycle {
  int subject_id = 0;
  Peh source_peh = Peh::Front;
  double original_duration_s = 0.0;  // duration before length normalization
  std::vector<double> samples;

  void validate() const;  // throws data_error
};

// Labelled cycle collection. Persisted as a JSON array of cycle objects:
//   [{"subject_id":0,"source_peh":"Front","original_duration_s":1.04,
//     "samples":[...]}, ...]
struct Dataset {
  std::vector<GaitCycle> cycles;

  int n_subjects() const;  // max subject_id + 1 (0 when empty)
  std::vector<int> counts_per_subject() const;

  // Keeps exactly k cycles per subject (the first k surviving ones, which
  // preserves pipeline order); throws data_error if any subject has fewer.
  static Dataset balanced(const std::vector<std::vector<GaitCycle>>& per_subject, int k);
};

void save_dataset(const Dataset& ds, const std::string& path);  // atomic write
Dataset load_dataset(const std::string& path);

}  // namespace sehs
