#include "sehs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

#include "sehs/errors.hpp"
#include "sehs/rng.hpp"
#include "sehs/spectrum.hpp"

namespace sehs {
namespace {

constexpr double kPi = 3.14159265358979323846;

double median_of(std::vector<double> v) {
  if (v.empty()) throw std::logic_error("median of empty vector");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Odd-length Hamming windowed-sinc low-pass kernel with unit DC gain.
std::vector<double> lowpass_kernel(double fs, double cutoff_hz, int taps) {
  if (taps < 3 || taps % 2 == 0) throw config_error("FIR taps must be odd and >= 3");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0))
    throw config_error("FIR cutoff must lie in (0, fs/2)");
  const int m = taps / 2;
  const double fc = cutoff_hz / fs;  // normalized cutoff (cycles per sample)
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int n = 0; n < taps; ++n) {
    const int k = n - m;
    double s;
    if (k == 0) {
      s = 2.0 * fc;
    } else {
      s = std::sin(2.0 * kPi * fc * k) / (kPi * k);
    }
    const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * n / (taps - 1));
    h[static_cast<std::size_t>(n)] = s * w;
    sum += s * w;
  }
  for (double& v : h) v /= sum;
  return h;
}

// Centered convolution with edge reflection, output length == input length.
std::vector<double> apply_fir_centered(const std::vector<double>& x,
                                       const std::vector<double>& h) {
  const std::size_t n = x.size();
  if (n < 2) return x;
  const int taps = static_cast<int>(h.size());
  const int m = taps / 2;
  std::vector<double> y(n);
  const long long last = static_cast<long long>(n) - 1;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int t = 0; t < taps; ++t) {
      long long idx = static_cast<long long>(i) + (t - m);
      // Reflect out-of-range indices back into [0, n-1].
      while (idx < 0 || idx > last) {
        if (idx < 0) idx = -idx;
        if (idx > last) idx = 2 * last - idx;
      }
      acc += h[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(idx)];
    }
    y[i] = acc;
  }
  return y;
}

}  // namespace

void PipelineConfig::validate() const {
  if (ma_window < 1) throw config_error("ma_window must be >= 1");
  if (lowpass_taps < 3 || lowpass_taps % 2 == 0)
    throw config_error("lowpass_taps must be odd and >= 3");
  if (bandpass_taps < 3 || bandpass_taps % 2 == 0)
    throw config_error("bandpass_taps must be odd and >= 3");
  if (!(lowpass_cutoff_hz > 0.0)) throw config_error("lowpass_cutoff_hz must be > 0");
  if (!(band_lo_hz > 0.0) || !(band_hi_hz > band_lo_hz))
    throw config_error("cycle band must satisfy 0 < lo < hi");
  if (!(band_hi_hz < lowpass_cutoff_hz))
    throw config_error("cycle band must sit below the low-pass cutoff");
  if (!(peak_min_frac > 0.0) || !(peak_min_frac <= 1.0))
    throw config_error("peak_min_frac must be in (0, 1]");
  if (!(peak_min_dist_s >= 0.0)) throw config_error("peak_min_dist_s must be >= 0");
  if (!(min_cycle_s > 0.0) || !(max_cycle_s > min_cycle_s))
    throw config_error("cycle duration guard must satisfy 0 < min < max");
  if (target_len < 2) throw config_error("target_len must be >= 2");
  if (!(reject_factor > 1.0)) throw config_error("reject_factor must be > 1");
}

std::vector<double> moving_average(const std::vector<double>& x, int window) {
  if (window < 1) throw config_error("moving average window must be >= 1");
  const std::size_t n = x.size();
  if (n == 0 || window == 1) return x;
  const int half_lo = (window - 1) / 2;  // samples before i
  const int half_hi = window / 2;        // samples after i
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(half_lo) ? i - half_lo : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(half_hi));
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += x[j];
    y[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return y;
}

std::vector<double> lowpass_fir(const std::vector<double>& x, double fs, double cutoff_hz,
                                int taps) {
  return apply_fir_centered(x, lowpass_kernel(fs, cutoff_hz, taps));
}

std::vector<double> bandpass_fir(const std::vector<double>& x, double fs, double lo_hz,
                                 double hi_hz, int taps) {
  if (!(hi_hz > lo_hz)) throw config_error("band-pass requires hi > lo");
  std::vector<double> h_hi = lowpass_kernel(fs, hi_hz, taps);
  std::vector<double> h_lo = lowpass_kernel(fs, lo_hz, taps);
  std::vector<double> h(h_hi.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = h_hi[i] - h_lo[i];
  return apply_fir_centered(x, h);
}

std::vector<double> denoise(const std::vector<double>& x, double fs,
                            const PipelineConfig& cfg) {
  cfg.validate();
  if (!(fs > 0.0)) throw config_error("sample rate must be > 0");
  if (!(cfg.lowpass_cutoff_hz < fs / 2.0))
    throw config_error("low-pass cutoff must lie below the Nyquist rate");
  if (x.size() < static_cast<std::size_t>(cfg.ma_window))
    throw data_error("signal shorter than the moving-average window");
  std::vector<double> y = moving_average(x, cfg.ma_window);
  return lowpass_fir(y, fs, cfg.lowpass_cutoff_hz, cfg.lowpass_taps);
}

std::vector<std::size_t> find_peaks(const std::vector<double>& x, double min_height,
                                    std::size_t min_dist) {
  const std::size_t n = x.size();
  std::vector<std::pair<double, std::size_t>> cands;  // (height, index)
  std::size_t i = 1;
  while (n >= 3 && i + 1 < n) {
    if (x[i] > x[i - 1]) {
      // Walk over a possible plateau of equal values.
      std::size_t j = i;
      while (j + 1 < n && x[j + 1] == x[i]) ++j;
      if (j + 1 < n && x[j + 1] < x[i]) {
        const std::size_t center = i + (j - i) / 2;
        if (x[i] >= min_height) cands.emplace_back(x[i], center);
        i = j + 1;
        continue;
      }
      i = j + 1;
      continue;
    }
    ++i;
  }
  // Taller peaks claim their neighborhood first; ties resolve to the earlier
  // index so the result is deterministic.
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> accepted;
  for (const auto& [h, idx] : cands) {
    (void)h;
    bool ok = true;
    for (std::size_t a : accepted) {
      const std::size_t d = a > idx ? a - idx : idx - a;
      if (d < min_dist) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back(idx);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

BandChoice auto_band(const std::vector<double>& x, double fs) {
  BandChoice out;
  out.fallback = true;
  if (!(fs > 0.0)) throw config_error("sample rate must be > 0");
  // Needs at least ~10 s of signal for a usable stride-frequency estimate.
  if (static_cast<double>(x.size()) < 10.0 * fs || x.size() < 16) return out;
  // ~0.05 Hz resolution at fs = 100 Hz; shorter signals get one full segment.
  std::size_t nperseg = std::min<std::size_t>(x.size(), static_cast<std::size_t>(std::lround(20.0 * fs)));
  if (nperseg < 16) nperseg = std::min<std::size_t>(x.size(), 16);
  const WelchSpectrum spec = welch_psd(x, fs, nperseg);
  const std::vector<double>& psd = spec.power;
  if (spec.freq_hz.size() < 2) return out;
  const double df = spec.freq_hz[1] - spec.freq_hz[0];
  std::vector<double> band_p;
  std::vector<std::size_t> band_k;
  for (std::size_t k = 0; k < psd.size(); ++k) {
    const double f = spec.freq_hz[k];
    if (f >= 0.5 && f <= 3.0) {
      band_p.push_back(psd[k]);
      band_k.push_back(k);
    }
  }
  if (band_p.size() < 3) return out;
  std::size_t best = 0;
  for (std::size_t k = 1; k < band_p.size(); ++k)
    if (band_p[k] > band_p[best]) best = k;
  const double pmax = band_p[best];
  const double med = median_of(band_p);
  // A clear dominant peak must stand well above the in-band floor.
  if (!(pmax > 0.0) || pmax < 4.0 * med) return out;
  std::size_t kbest = band_k[best];
  // Two-peaked strides put most of their energy at twice the stride rate. If
  // half the strongest frequency also shows a clear spectral peak, that half
  // is the stride fundamental; lock onto it instead of the harmonic.
  {
    const double f_half = spec.freq_hz[kbest] / 2.0;
    if (f_half >= 0.5) {
      const double tol = std::max(2.0 * df, 0.05 * f_half);
      std::size_t ksub = 0;
      double psub = 0.0;
      for (std::size_t k = 1; k + 1 < psd.size(); ++k) {
        if (std::abs(spec.freq_hz[k] - f_half) > tol) continue;
        if (psd[k] >= psd[k - 1] && psd[k] >= psd[k + 1] && psd[k] > psub) {
          psub = psd[k];
          ksub = k;
        }
      }
      if (ksub != 0 && psub >= 0.2 * pmax) kbest = ksub;
    }
  }
  double f0 = spec.freq_hz[kbest];
  if (kbest > 0 && kbest + 1 < psd.size()) {
    const double pm = psd[kbest - 1];
    const double pc = psd[kbest];
    const double pp = psd[kbest + 1];
    const double denom = pm - 2.0 * pc + pp;
    if (denom < 0.0) {
      const double delta = 0.5 * (pm - pp) / denom;
      if (std::abs(delta) <= 1.0) f0 += delta * df;
    }
  }
  f0 = std::clamp(f0, 0.5, 3.0);
  out.f0_hz = f0;
  out.lo_hz = std::max(0.5, 0.6 * f0);
  out.hi_hz = std::min(3.0, 1.6 * f0);
  if (!(out.hi_hz > out.lo_hz)) {  // degenerate clip; keep the default band
    out.lo_hz = 0.5;
    out.hi_hz = 3.0;
  }
  out.fallback = false;
  return out;
}

std::vector<Segment> detect_cycles(const std::vector<double>& denoised, double fs,
                                   const PipelineConfig& cfg, BandChoice* chosen) {
  cfg.validate();
  if (!(fs > 0.0)) throw config_error("sample rate must be > 0");
  BandChoice band;
  band.lo_hz = cfg.band_lo_hz;
  band.hi_hz = cfg.band_hi_hz;
  band.fallback = true;
  if (cfg.auto_band) {
    BandChoice ab = auto_band(denoised, fs);
    if (!ab.fallback) band = ab;
  }
  if (chosen) *chosen = band;
  std::vector<Segment> segments;
  if (denoised.size() < 3) return segments;
  double hi = band.hi_hz;
  const double nyq = fs / 2.0;
  if (hi >= nyq) hi = 0.999 * nyq;  // keep the kernel designable at low rates
  if (!(hi > band.lo_hz)) return segments;
  const std::vector<double> bp = bandpass_fir(denoised, fs, band.lo_hz, hi, cfg.bandpass_taps);
  const double mx = *std::max_element(bp.begin(), bp.end());
  if (!(mx > 0.0)) return segments;
  const std::size_t min_dist =
      static_cast<std::size_t>(std::llround(cfg.peak_min_dist_s * fs));
  // Threshold against the median candidate height, not the global max: an
  // isolated burst (e.g. the ring-down after a storage-capacitor discharge)
  // would otherwise raise a max-relative threshold above every normal step.
  const std::vector<std::size_t> cands = find_peaks(bp, 1e-12 * mx, min_dist);
  if (cands.empty()) return segments;
  std::vector<double> heights;
  heights.reserve(cands.size());
  for (const std::size_t idx : cands) heights.push_back(bp[idx]);
  std::nth_element(heights.begin(), heights.begin() + heights.size() / 2, heights.end());
  const double med_h = heights[heights.size() / 2];
  const double thr = cfg.peak_min_frac * std::max(med_h, 0.0);
  std::vector<std::size_t> peaks;
  peaks.reserve(cands.size());
  for (const std::size_t idx : cands)
    if (bp[idx] >= thr && bp[idx] > 0.0) peaks.push_back(idx);
  for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
    Segment s;
    s.begin = peaks[p];
    s.end = peaks[p + 1];
    const double dur = s.duration_s(fs);
    if (dur >= cfg.min_cycle_s && dur <= cfg.max_cycle_s) segments.push_back(s);
  }
  return segments;
}

std::vector<double> interpolate_cycle(const std::vector<double>& x, int target_len) {
  if (target_len < 2) throw config_error("interpolation target length must be >= 2");
  if (x.size() < 2) throw data_error("cannot interpolate a cycle with fewer than 2 samples");
  const std::size_t n = x.size();
  std::vector<double> y(static_cast<std::size_t>(target_len));
  const double scale = static_cast<double>(n - 1) / static_cast<double>(target_len - 1);
  for (int j = 0; j < target_len; ++j) {
    const double pos = scale * j;
    std::size_t i0 = static_cast<std::size_t>(pos);
    if (i0 >= n - 1) i0 = n - 2;
    const double frac = pos - static_cast<double>(i0);
    y[static_cast<std::size_t>(j)] = x[i0] + frac * (x[i0 + 1] - x[i0]);
  }
  y.back() = x.back();  // exact endpoint regardless of rounding
  return y;
}

RejectResult reject_irregular(const std::vector<std::vector<double>>& cycles, double factor) {
  if (!(factor > 1.0)) throw config_error("rejection factor must be > 1");
  if (cycles.size() < 3)
    throw data_error("irregular-cycle rejection needs at least 3 cycles");
  RejectResult out;
  const std::size_t len = cycles.front().size();
  if (len == 0) throw data_error("cannot reject on empty cycles");
  for (const auto& c : cycles)
    if (c.size() != len) throw data_error("irregular-cycle rejection requires equal-length cycles");
  out.typical.assign(len, 0.0);
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < len; ++i) out.typical[i] += c[i];
  for (double& v : out.typical) v /= static_cast<double>(cycles.size());
  out.distances.reserve(cycles.size());
  for (const auto& c : cycles) out.distances.push_back(dtw_distance(c, out.typical));
  out.median_distance = median_of(out.distances);
  const double cut = factor * out.median_distance;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (out.distances[i] <= cut)
      out.kept.push_back(i);
    else
      out.rejected.push_back(i);
  }
  return out;
}

double gait_similarity(const std::vector<std::vector<double>>& cycles,
                       std::uint64_t* n_dtw_calls) {
  const std::size_t n = cycles.size();
  if (n < 2) throw data_error("gait similarity needs at least 2 cycles");
  double acc = 0.0;
  std::uint64_t calls = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      acc += dtw_distance(cycles[i], cycles[j]);
      ++calls;
    }
  }
  if (n_dtw_calls) *n_dtw_calls = calls;
  return acc / static_cast<double>(calls);
}

double gait_similarity_sampled(const std::vector<std::vector<double>>& cycles,
                               std::size_t max_pairs, std::uint64_t seed,
                               std::uint64_t* n_dtw_calls) {
  const std::size_t n = cycles.size();
  if (n < 2) throw data_error("gait similarity needs at least 2 cycles");
  if (max_pairs == 0) throw config_error("max_pairs must be >= 1");
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (total <= max_pairs) return gait_similarity(cycles, n_dtw_calls);

  // Sample max_pairs distinct pair indices without materializing all pairs
  // (Floyd's algorithm), then visit them in sorted order for determinism.
  Rng rng(seed);
  std::vector<std::uint64_t> picked;
  picked.reserve(max_pairs);
  auto contains = [&picked](std::uint64_t v) {
    return std::binary_search(picked.begin(), picked.end(), v);
  };
  auto insert_sorted = [&picked](std::uint64_t v) {
    picked.insert(std::upper_bound(picked.begin(), picked.end(), v), v);
  };
  for (std::uint64_t j = total - max_pairs; j < total; ++j) {
    const std::uint64_t t = rng.uniform_int(j + 1);
    if (contains(t))
      insert_sorted(j);
    else
      insert_sorted(t);
  }

  // Row starts of the (i < j) pair enumeration ordered by i then j.
  std::vector<std::uint64_t> row_start(n);
  std::uint64_t acc_start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    row_start[i] = acc_start;
    acc_start += static_cast<std::uint64_t>(n - 1 - i);
  }
  double acc = 0.0;
  for (std::uint64_t m : picked) {
    const auto it = std::upper_bound(row_start.begin(), row_start.end(), m);
    const std::size_t i = static_cast<std::size_t>(it - row_start.begin()) - 1;
    const std::size_t j = i + 1 + static_cast<std::size_t>(m - row_start[i]);
    acc += dtw_distance(cycles[i], cycles[j]);
  }
  if (n_dtw_calls) *n_dtw_calls = max_pairs;
  return acc / static_cast<double>(max_pairs);
}

Dataset resample_dataset(const Dataset& ds, double original_rate_hz, double target_rate_hz) {
  if (!(original_rate_hz > 0.0) || !(target_rate_hz > 0.0))
    throw config_error("sample rates must be > 0");
  if (target_rate_hz > original_rate_hz)
    throw config_error("resampling only lowers the rate (target must be <= original)");
  Dataset out;
  out.cycles.reserve(ds.cycles.size());
  for (const GaitCycle& c : ds.cycles) {
    GaitCycle r = c;
    const double ratio = target_rate_hz / original_rate_hz;
    int len = static_cast<int>(std::lround(static_cast<double>(c.samples.size()) * ratio));
    if (len < 2) len = 2;
    r.samples = interpolate_cycle(c.samples, len);
    out.cycles.push_back(std::move(r));
  }
  return out;
}

SegmentationResult segment_signal(const std::vector<double>& signal, double fs, int subject_id,
                                  Peh source_peh, const PipelineConfig& cfg) {
  cfg.validate();
  SegmentationResult out;
  const std::vector<double> clean = denoise(signal, fs, cfg);
  const std::vector<Segment> segs = detect_cycles(clean, fs, cfg, &out.band);
  out.detected = static_cast<int>(segs.size());
  if (segs.empty()) return out;
  std::vector<std::vector<double>> interp;
  interp.reserve(segs.size());
  std::vector<double> durations;
  durations.reserve(segs.size());
  for (const Segment& s : segs) {
    std::vector<double> raw(clean.begin() + static_cast<std::ptrdiff_t>(s.begin),
                            clean.begin() + static_cast<std::ptrdiff_t>(s.end));
    interp.push_back(interpolate_cycle(raw, cfg.target_len));
    durations.push_back(s.duration_s(fs));
  }
  // Rejection needs at least 3 cycles to define a typical cycle; with fewer,
  // keep everything that passed the duration guard.
  RejectResult rr;
  if (interp.size() >= 3) {
    rr = reject_irregular(interp, cfg.reject_factor);
  } else {
    for (std::size_t i = 0; i < interp.size(); ++i) rr.kept.push_back(i);
  }
  out.rejected = static_cast<int>(rr.rejected.size());
  out.kept = static_cast<int>(rr.kept.size());
  out.cycles.reserve(rr.kept.size());
  for (std::size_t idx : rr.kept) {
    GaitCycle gc;
    gc.subject_id = subject_id;
    gc.source_peh = source_peh;
    gc.original_duration_s = durations[idx];
    gc.samples = interp[idx];
    gc.validate();
    out.cycles.push_back(std::move(gc));
  }
  return out;
}

}  // namespace sehs
