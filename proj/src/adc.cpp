#include "sehs/adc.hpp"

#include <cmath>

#include "sehs/errors.hpp"

namespace sehs {

void AdcConfig::validate() const {
  if (bits < 1 || bits > 16) {
    throw config_error("adc bits must be in [1, 16], got " + std::to_string(bits));
  }
  if (!(full_scale_v > 0.0) || !std::isfinite(full_scale_v)) {
    throw config_error("adc full_scale_v must be positive and finite");
  }
}

int adc_quantize(double volts, const AdcConfig& cfg) {
  const long code = std::lround(volts / cfg.full_scale_v * cfg.levels());
  if (code < 0) return 0;
  if (code > cfg.max_code()) return cfg.max_code();
  return static_cast<int>(code);
}

double adc_to_voltage(int code, const AdcConfig& cfg) {
  return cfg.full_scale_v * static_cast<double>(code) / cfg.levels();
}

}  // namespace sehs
