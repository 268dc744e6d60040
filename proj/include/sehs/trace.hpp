#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sehs/adc.hpp"

namespace sehs {

// Multichannel time series at a fixed sample rate. Channels come in two
// flavours:
//   - quantized: stored as raw ADC codes; the volt view is derived, so a
//     save/load round trip is bit exact.
//   - real: stored as doubles (e.g. filter outputs, which can go negative).
//
// CSV layout (written by save_trace, parsed by load_trace):
//   # sample_rate_hz=100
//   # adc_bits=10
//   # adc_full_scale_v=5
//   # <extra metadata, one key=value per line, sorted>
//   t_s,V_A_raw,V_B_raw,V_C_raw[,more columns]
//   0.000000,512,488,0[,...]
// Quantized channels use a `<name>_raw` column with integer codes; real
// channels use their own name with shortest-round-trip decimal values.
class VoltageTrace {
 public:
  VoltageTrace() = default;
  VoltageTrace(double sample_rate_hz, AdcConfig adc);

  void add_quantized(const std::string& name, std::vector<std::uint16_t> codes);
  // Quantizes through the trace's ADC config.
  void add_quantized_from_volts(const std::string& name, const std::vector<double>& volts);
  void add_real(const std::string& name, std::vector<double> values);

  bool has(const std::string& name) const;
  bool is_quantized(const std::string& name) const;
  const std::vector<std::uint16_t>& raw(const std::string& name) const;
  // Derived volt view for quantized channels, stored values for real ones.
  std::vector<double> volts(const std::string& name) const;
  // Channel names in insertion order.
  const std::vector<std::string>& names() const { return order_; }

  std::size_t n_samples() const;
  double duration_s() const;
  double sample_rate_hz() const { return sample_rate_hz_; }
  const AdcConfig& adc() const { return adc_; }

  // Free-form metadata persisted as extra preamble lines.
  std::map<std::string, std::string> meta;

 private:
  struct Channel {
    bool quantized = true;
    std::vector<std::uint16_t> codes;
    std::vector<double> values;
    std::size_t size() const { return quantized ? codes.size() : values.size(); }
  };
  const Channel& channel(const std::string& name) const;

  double sample_rate_hz_ = 0.0;
  AdcConfig adc_;
  std::vector<std::string> order_;
  std::map<std::string, Channel> channels_;
};

// Atomic write (temp file + rename).
void save_trace(const VoltageTrace& trace, const std::string& path);
VoltageTrace load_trace(const std::string& path);

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

}  // namespace sehs
