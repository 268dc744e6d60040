#include "sehs/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sehs/errors.hpp"
#include "sehs/rng.hpp"

namespace sehs {

void CircuitParams::validate() const {
  if (!(c_f > 0.0)) throw config_error("capacitance must be positive");
  if (!(r_internal_ohm > 0.0) || !(r_match_ohm > 0.0)) {
    throw config_error("resistances must be positive");
  }
  if (v_diode < 0.0) throw config_error("diode drop must be non-negative");
  if (v_cap_init < 0.0) throw config_error("initial capacitor voltage must be non-negative");
  if (!(sim_step_s > 0.0)) throw config_error("sim step must be positive");
  if (!(out_rate_hz > 0.0)) throw config_error("output rate must be positive");
  const double decim = 1.0 / (out_rate_hz * sim_step_s);
  if (std::fabs(decim - std::round(decim)) > 1e-9 || decim < 1.0) {
    throw config_error("sim step must divide the output sample period exactly");
  }
  adc.validate();
}

void SubjectProfile::validate() const {
  if (heel_peak_v <= 0.0 || toe_peak_v <= 0.0) throw config_error("peak amplitudes must be positive");
  if (!(heel_pos > 0.0) || !(toe_pos < 1.0) || !(heel_pos < toe_pos)) {
    throw config_error("peak positions must satisfy 0 < heel_pos < toe_pos < 1");
  }
  if (!(peak_width > 0.0) || peak_width > 0.2) throw config_error("peak width out of range (0, 0.2]");
  if (rebound_frac < 0.0 || rebound_frac > 1.0) throw config_error("rebound fraction out of [0, 1]");
  if (!(cycle_duration_mean_s > 0.0)) throw config_error("cycle duration mean must be positive");
  if (cycle_duration_sd_s < 0.0) throw config_error("cycle duration sd must be non-negative");
  if (noise_sd_v < 0.0 || amp_jitter_sd < 0.0) throw config_error("noise levels must be non-negative");
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Cycle durations are drawn from the subject's distribution and clamped to
// the physiological range.
constexpr double kMinCycleS = 0.5;
constexpr double kMaxCycleS = 2.0;

struct CycleShape {
  double duration_s;
  double heel_amp;
  double toe_amp;
};

// Continuous within-cycle waveform, tau in [0, 1).
double cycle_waveform(const SubjectProfile& p, const CycleShape& c, double tau) {
  auto bump = [](double tau_, double center, double sigma) {
    const double d = (tau_ - center) / sigma;
    return std::exp(-0.5 * d * d);
  };
  const double rb_sigma = 1.4 * p.peak_width;
  const double rb_off = 2.2 * p.peak_width;
  double v = c.heel_amp * bump(tau, p.heel_pos, p.peak_width) +
             c.toe_amp * bump(tau, p.toe_pos, p.peak_width) -
             p.rebound_frac * c.heel_amp * bump(tau, p.heel_pos + rb_off, rb_sigma) -
             p.rebound_frac * c.toe_amp * bump(tau, p.toe_pos + rb_off, rb_sigma);
  for (std::size_t k = 0; k < p.harmonic_coeffs.size(); ++k) {
    v += p.harmonic_coeffs[k] * p.heel_peak_v * std::sin(kTwoPi * static_cast<double>(k + 2) * tau);
  }
  return v;
}

}  // namespace

Excitation synth_excitation(const SubjectProfile& profile, double duration_s,
                            std::uint64_t seed, double step_s) {
  profile.validate();
  if (!(duration_s > 0.0)) throw config_error("excitation duration must be positive");
  if (!(step_s > 0.0)) throw config_error("excitation step must be positive");

  Rng rng(seed);
  Excitation ex;
  ex.step_s = step_s;
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s / step_s));
  ex.v_source.resize(n, 0.0);

  double t_start = 0.0;
  while (t_start < duration_s) {
    CycleShape shape;
    shape.duration_s = std::clamp(
        rng.gaussian(profile.cycle_duration_mean_s, profile.cycle_duration_sd_s), kMinCycleS,
        kMaxCycleS);
    shape.heel_amp = profile.heel_peak_v * (1.0 + profile.amp_jitter_sd * rng.gaussian());
    shape.toe_amp = profile.toe_peak_v * (1.0 + profile.amp_jitter_sd * rng.gaussian());
    ex.cycle_marks_s.push_back(t_start);

    const std::size_t k_begin = static_cast<std::size_t>(std::ceil(t_start / step_s - 1e-9));
    const double t_end = t_start + shape.duration_s;
    std::size_t k_end = static_cast<std::size_t>(std::ceil(t_end / step_s - 1e-9));
    k_end = std::min(k_end, n);
    for (std::size_t k = k_begin; k < k_end; ++k) {
      const double tau = (static_cast<double>(k) * step_s - t_start) / shape.duration_s;
      double v = cycle_waveform(profile, shape, tau);
      if (profile.noise_sd_v > 0.0) v += rng.gaussian(0.0, profile.noise_sd_v);
      ex.v_source[k] = v;
    }
    t_start = t_end;
  }
  return ex;
}

SimResult simulate(const CircuitParams& params, const std::vector<double>& v_source,
                   const std::vector<double>& cycle_marks_s) {
  params.validate();
  if (v_source.empty()) throw data_error("simulate: empty source waveform");

  const double dt = params.sim_step_s;
  const double r_sum = params.r_internal_ohm + params.r_match_ohm;
  const double alpha = params.alpha();
  const std::size_t decim = static_cast<std::size_t>(std::llround(1.0 / (params.out_rate_hz * dt)));

  SimResult out;
  out.out_rate_hz = params.out_rate_hz;
  out.c_f = params.c_f;
  out.trace = VoltageTrace(params.out_rate_hz, params.adc);

  const std::size_t n_out = (v_source.size() + decim - 1) / decim;
  std::vector<std::uint16_t> qa, qb, qc;
  qa.reserve(n_out);
  qb.reserve(n_out);
  qc.reserve(n_out);
  out.v_cap.reserve(n_out);
  out.v_source.reserve(n_out);

  double v_cap = params.v_cap_init;
  double next_discharge = params.discharge_period_s > 0.0
                              ? params.discharge_period_s
                              : std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < v_source.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t >= next_discharge - 1e-12) {
      v_cap = params.v_cap_init;
      out.events.push_back({next_discharge, SimEventKind::CapDischarge});
      next_discharge += params.discharge_period_s;
    }
    const double vs = v_source[k];
    const double thr = v_cap + 2.0 * params.v_diode;
    const double v_div = alpha * vs;
    double v_ab;
    double i = 0.0;
    if (std::fabs(v_div) > thr) {
      i = (std::fabs(vs) - thr) / r_sum;
      v_ab = vs >= 0.0 ? thr : -thr;
    } else {
      v_ab = v_div;
    }
    if (k % decim == 0) {
      const double v_a = 0.5 * (v_cap + v_ab);
      const double v_b = 0.5 * (v_cap - v_ab);
      qa.push_back(static_cast<std::uint16_t>(adc_quantize(v_a, params.adc)));
      qb.push_back(static_cast<std::uint16_t>(adc_quantize(v_b, params.adc)));
      qc.push_back(static_cast<std::uint16_t>(adc_quantize(v_cap, params.adc)));
      out.v_cap.push_back(v_cap);
      out.v_source.push_back(vs);
    }
    if (i > 0.0) {
      out.source_energy_j += std::fabs(vs * i) * dt;
      v_cap += i * dt / params.c_f;
    }
  }

  out.trace.add_quantized("V_A", std::move(qa));
  out.trace.add_quantized("V_B", std::move(qb));
  out.trace.add_quantized("V_C", std::move(qc));

  for (double m : cycle_marks_s) out.events.push_back({m, SimEventKind::CycleStart});
  std::sort(out.events.begin(), out.events.end(), [](const SimEvent& a, const SimEvent& b) {
    if (a.time_s != b.time_s) return a.time_s < b.time_s;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return out;
}

std::vector<double> SimResult::cycle_marks_s() const {
  std::vector<double> out;
  for (const auto& e : events) {
    if (e.kind == SimEventKind::CycleStart) out.push_back(e.time_s);
  }
  return out;
}

std::vector<double> SimResult::discharge_times_s() const {
  std::vector<double> out;
  for (const auto& e : events) {
    if (e.kind == SimEventKind::CapDischarge) out.push_back(e.time_s);
  }
  return out;
}

double charging_current(const CircuitParams& params, double v_src_dc, double t_s) {
  const double r_sum = params.r_internal_ohm + params.r_match_ohm;
  const double i0 = (v_src_dc - params.v_cap_init - 2.0 * params.v_diode) / r_sum;
  return i0 * std::exp(-t_s / (r_sum * params.c_f));
}

double harvested_energy(const SimResult& sim, double t0_s, double t1_s) {
  if (sim.v_cap.empty()) throw data_error("harvested_energy: empty simulation");
  auto v_at = [&](double t) {
    long idx = std::lround(t * sim.out_rate_hz);
    idx = std::clamp<long>(idx, 0, static_cast<long>(sim.v_cap.size()) - 1);
    return sim.v_cap[static_cast<std::size_t>(idx)];
  };
  return capacitor_energy_delta(sim.c_f, v_at(t0_s), v_at(t1_s));
}

double capacitor_energy_delta(double c_f, double v_start, double v_end) {
  return 0.5 * c_f * (v_end * v_end - v_start * v_start);
}

}  // namespace sehs
