#pragma once
#include <cstddef>
#include <vector>

namespace sehs {

// Magnitude spectrum of a real signal: bins k = 0 .. N/2, freq k * fs / N.
// Thin wrapper over FFTW's real-to-complex transform with plan caching.
std::vector<double> magnitude_spectrum(const std::vector<double>& x);

struct WelchSpectrum {
  std::vector<double> freq_hz;
  std::vector<double> power;
};

// Welch power spectral density estimate: Hann-windowed segments with 50%
// overlap, averaged periodograms. nperseg is clamped to the signal length.
WelchSpectrum welch_psd(const std::vector<double>& x, double fs, std::size_t nperseg);

}  // namespace sehs
