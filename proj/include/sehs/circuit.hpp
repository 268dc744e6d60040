#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sehs/trace.hpp"

namespace sehs {

// Lumped-element model of one piezoelectric harvester feeding a full-bridge
// rectifier and storage capacitor, with a matching resistor across the output
// so the AC swing stays inside the ADC range. Ideal-threshold diodes: the
// bridge conducts only when the divider output exceeds the capacitor voltage
// plus two diode drops.
struct CircuitParams {
  double c_f = 1000e-6;            // storage capacitor
  double r_internal_ohm = 1e6;     // harvester internal resistance
  double r_match_ohm = 120.0;      // matching resistor across the output
  double v_diode = 0.3;            // per-diode drop
  double v_cap_init = 0.0;         // capacitor voltage at t=0 and after discharge
  double discharge_period_s = 50;  // manual discharge interval; <= 0 disables
  double sim_step_s = 1e-3;        // explicit Euler step
  double out_rate_hz = 100.0;      // sample rate of the recorded trace
  AdcConfig adc;

  double alpha() const { return r_match_ohm / (r_internal_ohm + r_match_ohm); }
  void validate() const;  // throws config_error
};

// One walker: open-circuit source amplitudes and gait timing. Each cycle has
// a heel-strike bump and a toe-off bump (positive), each followed by a
// negative rebound lobe, plus low-order harmonic shaping and sensor noise.
struct SubjectProfile {
  int subject_id = 0;
  double heel_peak_v = 42800.0;  // open-circuit heel-strike peak
  double toe_peak_v = 28400.0;   // open-circuit toe-off peak
  double heel_pos = 0.17;       // peak centers, fraction of cycle
  double toe_pos = 0.49;
  double peak_width = 0.065;    // gaussian sigma, fraction of cycle
  double rebound_frac = 0.045;  // rebound amplitude relative to its peak
  std::array<double, 3> harmonic_coeffs{0.0, 0.0, 0.0};  // relative to heel peak
  double amp_jitter_sd = 0.007;  // per-cycle multiplicative strike jitter
  double cycle_duration_mean_s = 1.05;
  double cycle_duration_sd_s = 0.035;
  double noise_sd_v = 48.0;     // additive source-referred noise
  void validate() const;  // throws config_error
};

struct Excitation {
  std::vector<double> v_source;       // open-circuit voltage at sim step rate
  std::vector<double> cycle_marks_s;  // start time of each gait cycle
  double step_s = 1e-3;
};

// Deterministic for a given (profile, duration, seed): cycle durations and
// per-cycle jitters are drawn before per-sample noise, so the same seed
// yields the same gait timing at any step size (with noise disabled) and
// for amplitude-scaled profile variants (e.g. the rear harvester).
Excitation synth_excitation(const SubjectProfile& profile, double duration_s,
                            std::uint64_t seed, double step_s = 1e-3);

enum class SimEventKind { CycleStart, CapDischarge };
struct SimEvent {
  double time_s = 0.0;
  SimEventKind kind = SimEventKind::CycleStart;
};

struct SimResult {
  VoltageTrace trace;             // quantized V_A, V_B, V_C at out_rate_hz
  std::vector<double> v_cap;      // pre-quantization capacitor voltage
  std::vector<double> v_source;   // ground-truth source, decimated to out rate
  std::vector<SimEvent> events;   // cycle starts and capacitor discharges
  double source_energy_j = 0.0;   // integral of |v_source * i| dt
  double out_rate_hz = 100.0;
  double c_f = 1000e-6;           // copied from the simulation parameters

  std::vector<double> cycle_marks_s() const;
  std::vector<double> discharge_times_s() const;
};

// Explicit fixed-step Euler simulation of the charge dynamics.
// Blocked:    v_ab = alpha * v_src, no charging current.
// Conducting (|alpha * v_src| > v_cap + 2*v_diode):
//   i = (|v_src| - v_cap - 2*v_diode) / (r_internal + r_match)
//   v_cap += i * dt / C, and the output clamps at v_ab = sign * (v_cap + 2*v_diode).
// Node voltages sit symmetrically about the bridge midpoint:
//   V_A = (v_cap + v_ab)/2, V_B = (v_cap - v_ab)/2 (negative values clip at the ADC).
SimResult simulate(const CircuitParams& params, const std::vector<double>& v_source,
                   const std::vector<double>& cycle_marks_s = {});

// Closed-form charging current for a constant DC source applied through the
// bridge: i(t) = i0 * exp(-t / ((r_internal + r_match) * C)) with
// i0 = (v_src - v_cap_init - 2*v_diode) / (r_internal + r_match).
double charging_current(const CircuitParams& params, double v_src_dc, double t_s);

// Energy accumulated in the capacitor between two instants:
// C/2 * (v(t1)^2 - v(t0)^2), using the pre-quantization capacitor voltage.
double harvested_energy(const SimResult& sim, double t0_s, double t1_s);

// Convenience wrapper: energy between two known capacitor voltages.
double capacitor_energy_delta(double c_f, double v_start, double v_end);

}  // namespace sehs
