#include "sehs/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "sehs/errors.hpp"
#include "sehs/spectrum.hpp"
#include "sehs/stats.hpp"

namespace sehs {
namespace {

// Guards divisions where a spectral band can be empty or silent.
constexpr double kTinyEnergy = 1e-12;

}  // namespace

const std::array<std::string, kNumFeatures>& feature_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "mean",
      "std",
      "variance",
      "rms",
      "min",
      "max",
      "range",
      "skewness",
      "kurtosis_excess",
      "zero_crossing_rate",
      "mean_abs_diff",
      "spec_energy",
      "spec_entropy",
      "spec_centroid",
      "spec_spread",
      "dominant_freq",
      "dominant_mag",
      "second_dominant_freq",
      "band_energy_ratio",
      "spec_skewness",
      "spec_kurtosis",
      "spec_rolloff85",
  };
  return names;
}

std::array<double, kNumFeatures> extract_features(const std::vector<double>& samples,
                                                  double duration_s) {
  const std::size_t n = samples.size();
  if (n < 4) throw data_error("feature extraction needs at least 4 samples per cycle");
  if (!(duration_s > 0.0)) throw data_error("cycle duration must be > 0");
  std::array<double, kNumFeatures> f{};

  // --- Time domain ---
  const double m = mean(samples);
  const double var = variance(samples);
  const double sd = std::sqrt(var);
  double sumsq = 0.0, mn = samples[0], mx = samples[0];
  double m3 = 0.0, m4 = 0.0;
  for (double v : samples) {
    sumsq += v * v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    const double d = v - m;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  std::size_t crossings = 0;
  double abs_diff = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((samples[i] - m) * (samples[i + 1] - m) < 0.0) ++crossings;
    abs_diff += std::abs(samples[i + 1] - samples[i]);
  }
  f[0] = m;
  f[1] = sd;
  f[2] = var;
  f[3] = std::sqrt(sumsq / static_cast<double>(n));
  f[4] = mn;
  f[5] = mx;
  f[6] = mx - mn;
  f[7] = sd > 0.0 ? m3 / (sd * sd * sd) : 0.0;
  f[8] = sd > 0.0 ? m4 / (var * var) - 3.0 : 0.0;
  f[9] = static_cast<double>(crossings) / static_cast<double>(n - 1);
  f[10] = abs_diff / static_cast<double>(n - 1);

  // --- Frequency domain (mean-removed spectrum, DC bin skipped) ---
  const double fs_eff = static_cast<double>(n) / duration_s;
  std::vector<double> centered(samples);
  for (double& v : centered) v -= m;
  const std::vector<double> mag = magnitude_spectrum(centered);
  const double df = fs_eff / static_cast<double>(n);
  const std::size_t kmax = mag.size();  // n/2 + 1 bins; index * df = frequency

  double energy = 0.0;
  for (std::size_t k = 1; k < kmax; ++k) energy += mag[k] * mag[k];
  f[11] = energy;

  double entropy = 0.0, centroid = 0.0;
  std::size_t dom = 1, dom2 = 0;
  double e_lo = 0.0, e_hi = 0.0;
  if (energy > 0.0 && kmax > 1) {
    for (std::size_t k = 1; k < kmax; ++k) {
      const double p = mag[k] * mag[k] / energy;
      const double fk = df * static_cast<double>(k);
      if (p > 0.0) entropy -= p * std::log(p);
      centroid += p * fk;
      if (mag[k] > mag[dom]) dom = k;
      if (fk >= 0.5 && fk <= 3.0) e_lo += mag[k] * mag[k];
      if (fk > 3.0 && fk <= 10.0) e_hi += mag[k] * mag[k];
    }
    const std::size_t nbins = kmax - 1;
    f[12] = nbins > 1 ? entropy / std::log(static_cast<double>(nbins)) : 0.0;
    f[13] = centroid;
    double spread2 = 0.0;
    for (std::size_t k = 1; k < kmax; ++k) {
      const double p = mag[k] * mag[k] / energy;
      const double d = df * static_cast<double>(k) - centroid;
      spread2 += p * d * d;
    }
    const double spread = std::sqrt(spread2);
    f[14] = spread;
    f[15] = df * static_cast<double>(dom);
    f[16] = mag[dom];
    for (std::size_t k = 1; k < kmax; ++k) {
      if (k == dom) continue;
      if (dom2 == 0 || mag[k] > mag[dom2]) dom2 = k;
    }
    f[17] = dom2 > 0 ? df * static_cast<double>(dom2) : 0.0;
    f[18] = e_lo / (e_hi + kTinyEnergy);
    if (spread > 0.0) {
      double s3 = 0.0, s4 = 0.0;
      for (std::size_t k = 1; k < kmax; ++k) {
        const double p = mag[k] * mag[k] / energy;
        const double z = (df * static_cast<double>(k) - centroid) / spread;
        s3 += p * z * z * z;
        s4 += p * z * z * z * z;
      }
      f[19] = s3;
      f[20] = s4 - 3.0;
    }
    double cum = 0.0;
    for (std::size_t k = 1; k < kmax; ++k) {
      cum += mag[k] * mag[k];
      if (cum >= 0.85 * energy) {
        f[21] = df * static_cast<double>(k);
        break;
      }
    }
  }
  return f;
}

FeatureMatrix feature_matrix(const Dataset& ds) {
  FeatureMatrix out;
  out.x.reserve(ds.cycles.size());
  out.y.reserve(ds.cycles.size());
  for (const GaitCycle& c : ds.cycles) {
    const auto f = extract_features(c.samples, c.original_duration_s);
    out.x.emplace_back(f.begin(), f.end());
    out.y.push_back(c.subject_id);
  }
  return out;
}

}  // namespace sehs
