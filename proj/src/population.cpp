#include "sehs/population.hpp"

#include <algorithm>
#include <cmath>

#include "sehs/errors.hpp"
#include "sehs/rng.hpp"

namespace sehs {

void PopulationRanges::validate() const {
  if (n_subjects <= 0) throw config_error("population needs at least one subject");
  auto range_ok = [](double lo, double hi) { return lo <= hi; };
  if (!range_ok(heel_peak_lo_v, heel_peak_hi_v) || !range_ok(toe_ratio_lo, toe_ratio_hi) ||
      !range_ok(heel_pos_lo, heel_pos_hi) || !range_ok(toe_pos_lo, toe_pos_hi) ||
      !range_ok(width_lo, width_hi) || !range_ok(rebound_lo, rebound_hi) ||
      !range_ok(duration_mean_lo_s, duration_mean_hi_s) ||
      !range_ok(duration_sd_lo_s, duration_sd_hi_s) || !range_ok(noise_lo_v, noise_hi_v)) {
    throw config_error("population range has lo > hi");
  }
  if (heel_peak_lo_v <= 0.0) throw config_error("heel peak range must be positive");
  if (rear_amp_scale <= 0.0) throw config_error("rear amplitude scale must be positive");
}

SubjectProfile draw_profile(const PopulationRanges& ranges, int subject_id, std::uint64_t seed) {
  ranges.validate();
  Rng rng(subject_seed(seed, subject_id));
  SubjectProfile p;
  p.subject_id = subject_id;
  p.heel_peak_v = rng.uniform(ranges.heel_peak_lo_v, ranges.heel_peak_hi_v);
  p.toe_peak_v = p.heel_peak_v * rng.uniform(ranges.toe_ratio_lo, ranges.toe_ratio_hi);
  p.heel_pos = rng.uniform(ranges.heel_pos_lo, ranges.heel_pos_hi);
  p.toe_pos = rng.uniform(ranges.toe_pos_lo, ranges.toe_pos_hi);
  p.peak_width = rng.uniform(ranges.width_lo, ranges.width_hi);
  p.rebound_frac = rng.uniform(ranges.rebound_lo, ranges.rebound_hi);
  for (auto& c : p.harmonic_coeffs) {
    c = rng.uniform(-ranges.harmonic_abs_max, ranges.harmonic_abs_max);
  }
  p.amp_jitter_sd = ranges.amp_jitter_sd;
  p.cycle_duration_mean_s = rng.uniform(ranges.duration_mean_lo_s, ranges.duration_mean_hi_s);
  p.cycle_duration_sd_s = rng.uniform(ranges.duration_sd_lo_s, ranges.duration_sd_hi_s);
  p.noise_sd_v = rng.uniform(ranges.noise_lo_v, ranges.noise_hi_v);
  p.validate();
  return p;
}

SubjectProfile rear_variant(const SubjectProfile& front, const PopulationRanges& ranges) {
  SubjectProfile r = front;
  r.heel_peak_v *= ranges.rear_amp_scale;
  r.toe_peak_v *= ranges.rear_amp_scale;
  r.noise_sd_v *= ranges.rear_amp_scale;
  const double shift = ranges.rear_phase_shift;
  r.heel_pos = std::min(front.heel_pos + shift, front.toe_pos - 0.05);
  r.toe_pos = std::min(front.toe_pos + shift, 0.95);
  r.validate();
  return r;
}

std::vector<SubjectProfile> draw_population(const PopulationRanges& ranges, std::uint64_t seed) {
  ranges.validate();
  std::vector<SubjectProfile> out;
  out.reserve(static_cast<std::size_t>(ranges.n_subjects));
  for (int s = 0; s < ranges.n_subjects; ++s) {
    out.push_back(draw_profile(ranges, s, seed));
  }
  return out;
}

}  // namespace sehs
