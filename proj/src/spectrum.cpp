#include "sehs/spectrum.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "sehs/errors.hpp"

namespace sehs {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// FFTW plans are cached per transform length. Guarded by a mutex because
// plan creation is not thread safe; execution with per-call buffers is.
class FftwCache {
 public:
  static FftwCache& instance() {
    static FftwCache c;
    return c;
  }

  // Computes the r2c transform of x into out (size n/2+1 complex values).
  void transform(const std::vector<double>& x, std::vector<double>& re, std::vector<double>& im) {
    const std::size_t n = x.size();
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it == plans_.end()) {
      PlanBuf pb;
      pb.in = fftw_alloc_real(n);
      pb.out = fftw_alloc_complex(n / 2 + 1);
      pb.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), pb.in, pb.out, FFTW_ESTIMATE);
      it = plans_.emplace(n, pb).first;
    }
    PlanBuf& pb = it->second;
    for (std::size_t i = 0; i < n; ++i) pb.in[i] = x[i];
    fftw_execute(pb.plan);
    const std::size_t m = n / 2 + 1;
    re.resize(m);
    im.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      re[i] = pb.out[i][0];
      im[i] = pb.out[i][1];
    }
  }

 private:
  struct PlanBuf {
    double* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
  };
  std::mutex mu_;
  std::map<std::size_t, PlanBuf> plans_;
};

}  // namespace

std::vector<double> magnitude_spectrum(const std::vector<double>& x) {
  if (x.empty()) throw data_error("magnitude_spectrum: empty signal");
  std::vector<double> re, im;
  FftwCache::instance().transform(x, re, im);
  std::vector<double> mag(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    mag[i] = std::hypot(re[i], im[i]);
  }
  return mag;
}

WelchSpectrum welch_psd(const std::vector<double>& x, double fs, std::size_t nperseg) {
  if (x.size() < 8) throw data_error("welch_psd: signal too short");
  nperseg = std::min(nperseg, x.size());
  if (nperseg < 8) nperseg = 8;
  const std::size_t step = nperseg / 2;

  std::vector<double> window(nperseg);
  double wsum2 = 0.0;
  for (std::size_t i = 0; i < nperseg; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                     static_cast<double>(nperseg - 1));
    wsum2 += window[i] * window[i];
  }

  const std::size_t m = nperseg / 2 + 1;
  WelchSpectrum out;
  out.freq_hz.resize(m);
  out.power.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    out.freq_hz[i] = static_cast<double>(i) * fs / static_cast<double>(nperseg);
  }

  std::size_t n_segments = 0;
  std::vector<double> seg(nperseg), re, im;
  for (std::size_t start = 0; start + nperseg <= x.size(); start += step) {
    double seg_mean = 0.0;
    for (std::size_t i = 0; i < nperseg; ++i) seg_mean += x[start + i];
    seg_mean /= static_cast<double>(nperseg);
    for (std::size_t i = 0; i < nperseg; ++i) {
      seg[i] = (x[start + i] - seg_mean) * window[i];
    }
    FftwCache::instance().transform(seg, re, im);
    for (std::size_t i = 0; i < m; ++i) {
      out.power[i] += (re[i] * re[i] + im[i] * im[i]) / (wsum2 * fs);
    }
    ++n_segments;
    if (step == 0) break;
  }
  if (n_segments == 0) throw data_error("welch_psd: no full segment fits the signal");
  for (double& p : out.power) p /= static_cast<double>(n_segments);
  return out;
}

}  // namespace sehs
