#pragma once
#include <cstdint>

namespace sehs {

// Successive-approximation ADC model: `bits` resolution over [0, full_scale_v].
struct AdcConfig {
  int bits = 10;
  double full_scale_v = 5.0;

  int levels() const { return 1 << bits; }
  int max_code() const { return (1 << bits) - 1; }
  void validate() const;  // throws config_error
};

// volts -> code: clamp(round(v / full_scale * 2^bits), 0, 2^bits - 1).
// Out-of-rail inputs clip, mirroring the hardware front end.
int adc_quantize(double volts, const AdcConfig& cfg);

// code -> volts: full_scale * code / 2^bits.
double adc_to_voltage(int code, const AdcConfig& cfg);

}  // namespace sehs
