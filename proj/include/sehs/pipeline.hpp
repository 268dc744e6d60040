#pragma once
#include <cstdint>
#include <vector>

#include "sehs/dataset.hpp"
#include "sehs/dtw.hpp"

namespace sehs {

struct PipelineConfig {
  // Denoising: moving average followed by a zero-delay low-pass FIR.
  int ma_window = 5;
  double lowpass_cutoff_hz = 10.0;
  int lowpass_taps = 63;

  // Cycle detection: peaks of the band-passed signal, one per gait cycle.
  double band_lo_hz = 0.5;
  double band_hi_hz = 3.0;
  bool auto_band = true;  // tune the band per signal from its dominant frequency
  int bandpass_taps = 201;
  double peak_min_frac = 0.5;    // peak threshold relative to the band-passed max
  double peak_min_dist_s = 0.4;  // minimum spacing between peaks

  // Segment duration guard and length normalization.
  double min_cycle_s = 0.5;
  double max_cycle_s = 2.0;
  int target_len = 130;

  // Irregular-cycle rejection threshold (multiple of the median distance to
  // the typical cycle).
  double reject_factor = 2.0;

  void validate() const;  // throws config_error
};

// Centered moving average; windows shrink at the edges (no delay, no padding
// artifacts).
std::vector<double> moving_average(const std::vector<double>& x, int window);

// Zero-delay low-pass: odd-length Hamming windowed-sinc FIR applied centered
// with edge reflection.
std::vector<double> lowpass_fir(const std::vector<double>& x, double fs, double cutoff_hz,
                                int taps);
std::vector<double> bandpass_fir(const std::vector<double>& x, double fs, double lo_hz,
                                 double hi_hz, int taps);

std::vector<double> denoise(const std::vector<double>& x, double fs,
                            const PipelineConfig& cfg = {});

// Plateau-aware local maxima at least min_height high and min_dist samples
// apart (taller peaks win conflicts).
std::vector<std::size_t> find_peaks(const std::vector<double>& x, double min_height,
                                    std::size_t min_dist);

struct BandChoice {
  double lo_hz = 0.5;
  double hi_hz = 3.0;
  double f0_hz = 0.0;   // dominant frequency, 0 when fallback
  bool fallback = false;  // no clear spectral peak; default band used
};

// Picks the cycle-detection band from the dominant frequency f0 in
// [0.5, 3] Hz: (0.6*f0, 1.6*f0) clipped to [0.5, 3]. Falls back to the full
// band when no peak stands clear of the noise floor.
BandChoice auto_band(const std::vector<double>& x, double fs);

struct Segment {
  std::size_t begin = 0;  // inclusive sample index
  std::size_t end = 0;    // exclusive
  double duration_s(double fs) const { return static_cast<double>(end - begin) / fs; }
};

// Segments between consecutive detected peaks whose duration passes the
// guard. `chosen` reports the band actually used.
std::vector<Segment> detect_cycles(const std::vector<double>& denoised, double fs,
                                   const PipelineConfig& cfg = {}, BandChoice* chosen = nullptr);

// Linear interpolation onto target_len uniformly spaced points; endpoints map
// exactly.
std::vector<double> interpolate_cycle(const std::vector<double>& x, int target_len);

struct RejectResult {
  std::vector<std::size_t> kept;      // indices into the input cycle list
  std::vector<std::size_t> rejected;
  std::vector<double> distances;      // DTW distance of each cycle to the typical cycle
  std::vector<double> typical;        // pointwise mean cycle
  double median_distance = 0.0;
};

// Rejects cycles whose DTW distance to the typical (pointwise mean) cycle
// exceeds factor * median distance. Cycles must share one length.
RejectResult reject_irregular(const std::vector<std::vector<double>>& cycles, double factor);

// Mean pairwise DTW distance over all n*(n-1)/2 pairs (lower = more regular).
double gait_similarity(const std::vector<std::vector<double>>& cycles,
                       std::uint64_t* n_dtw_calls = nullptr);
// Same statistic over a deterministic subsample of at most max_pairs pairs.
double gait_similarity_sampled(const std::vector<std::vector<double>>& cycles,
                               std::size_t max_pairs, std::uint64_t seed,
                               std::uint64_t* n_dtw_calls = nullptr);

// Models recording at a lower rate: each cycle is decimated to
// round(len * target / original) samples.
Dataset resample_dataset(const Dataset& ds, double original_rate_hz, double target_rate_hz);

struct SegmentationResult {
  std::vector<GaitCycle> cycles;  // kept cycles, in time order
  int detected = 0;
  int rejected = 0;
  int kept = 0;
  BandChoice band;
};

// Full per-signal pipeline: denoise, detect, interpolate, reject.
SegmentationResult segment_signal(const std::vector<double>& signal, double fs, int subject_id,
                                  Peh source_peh, const PipelineConfig& cfg = {});

}  // namespace sehs
