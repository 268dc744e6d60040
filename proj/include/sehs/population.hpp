#pragma once
#include <cstdint>
#include <vector>

#include "sehs/circuit.hpp"

namespace sehs {

// Ranges the synthetic walker population is drawn from. Each subject's
// parameters come from Rng(seed + subject_id), so a subject is reproducible
// on its own. The rear harvester reuses the front profile with scaled
// amplitudes and shifted peak timing (it sits under a different part of the
// foot), and shares the subject's gait timing stream.
struct PopulationRanges {
  int n_subjects = 20;
  double heel_peak_lo_v = 42000.0, heel_peak_hi_v = 43600.0;
  double toe_ratio_lo = 0.55, toe_ratio_hi = 0.78;
  double heel_pos_lo = 0.15, heel_pos_hi = 0.22;
  double toe_pos_lo = 0.44, toe_pos_hi = 0.54;
  double width_lo = 0.050, width_hi = 0.085;
  double rebound_lo = 0.03, rebound_hi = 0.06;
  double harmonic_abs_max = 0.03;
  double amp_jitter_sd = 0.007;
  double duration_mean_lo_s = 0.85, duration_mean_hi_s = 1.25;
  double duration_sd_lo_s = 0.02, duration_sd_hi_s = 0.05;
  double noise_lo_v = 32.0, noise_hi_v = 64.0;
  double rear_amp_scale = 0.90;
  double rear_phase_shift = 0.04;

  void validate() const;  // throws config_error
};

SubjectProfile draw_profile(const PopulationRanges& ranges, int subject_id, std::uint64_t seed);

// Rear-harvester variant of a drawn profile.
SubjectProfile rear_variant(const SubjectProfile& front, const PopulationRanges& ranges);

std::vector<SubjectProfile> draw_population(const PopulationRanges& ranges, std::uint64_t seed);

}  // namespace sehs
