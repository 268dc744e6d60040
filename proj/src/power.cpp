#include "sehs/power.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sehs/errors.hpp"

namespace sehs {

void PowerProfile::validate() const {
  if (mcu_on_time_us < 0.0 || total_event_time_us < 0.0 || sleep_power_uw < 0.0 ||
      adc_event_power_uw < 0.0 || amplifier_power_uw < 0.0 || sampling_rate_hz < 0.0)
    throw config_error("power profile fields must be non-negative");
  if (mcu_on_time_us > total_event_time_us)
    throw config_error("mcu_on_time_us must not exceed total_event_time_us");
}

PowerProfile three_adc_profile() {
  PowerProfile p;
  p.mcu_on_time_us = 270.0;
  p.total_event_time_us = 600.0;
  p.sleep_power_uw = 6.0;
  p.adc_event_power_uw = 511.0;
  p.amplifier_power_uw = 0.0;
  p.sampling_rate_hz = 40.0;
  return p;
}

PowerProfile one_adc_amp_profile() {
  PowerProfile p;
  p.mcu_on_time_us = 220.0;
  p.total_event_time_us = 600.0;
  p.sleep_power_uw = 6.0;
  p.adc_event_power_uw = 482.0;
  p.amplifier_power_uw = 500.0;
  p.sampling_rate_hz = 40.0;
  return p;
}

double overall_power_uw(const PowerProfile& p) {
  p.validate();
  const double t_event_s = p.total_event_time_us * 1e-6;
  const double duty = t_event_s * p.sampling_rate_hz;
  if (duty > 1.0)
    throw config_error("duty cycle exceeds 1 (event time * sampling rate > 1 s/s)");
  return (p.adc_event_power_uw + p.amplifier_power_uw) * duty +
         p.sleep_power_uw * (1.0 - duty);
}

double energy_per_event_uj(const PowerProfile& p) {
  p.validate();
  return (p.adc_event_power_uw + p.amplifier_power_uw) * p.total_event_time_us * 1e-6;
}

HarvestImprovement harvest_improvement(double e_front_uj, double e_rear_uj) {
  if (!(e_front_uj > 0.0) || !(e_rear_uj > 0.0))
    throw data_error("harvest improvement requires positive per-position energies");
  const double total = e_front_uj + e_rear_uj;
  HarvestImprovement out;
  out.vs_front_pct = 100.0 * (total - e_front_uj) / e_front_uj;
  out.vs_rear_pct = 100.0 * (total - e_rear_uj) / e_rear_uj;
  return out;
}

StepEnergyReport per_step_energy(const SimResult& sim) {
  const std::vector<double> marks = sim.cycle_marks_s();
  const std::vector<double> discharges = sim.discharge_times_s();
  if (marks.size() < 2) throw data_error("per-step energy needs at least 2 cycle marks");
  if (sim.v_cap.empty()) throw data_error("simulation carries no capacitor samples");
  StepEnergyReport out;
  auto v_at = [&sim](double t_s) {
    long long idx = std::llround(t_s * sim.out_rate_hz);
    idx = std::clamp<long long>(idx, 0, static_cast<long long>(sim.v_cap.size()) - 1);
    return sim.v_cap[static_cast<std::size_t>(idx)];
  };
  for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
    const double t0 = marks[k];
    const double t1 = marks[k + 1];
    const bool crosses_discharge =
        std::any_of(discharges.begin(), discharges.end(),
                    [t0, t1](double td) { return td > t0 && td <= t1; });
    if (crosses_discharge) {
      out.skipped++;
      continue;
    }
    const double de_j = capacitor_energy_delta(sim.c_f, v_at(t0), v_at(t1));
    out.energies_uj.push_back(de_j * 1e6);
  }
  for (double e : out.energies_uj) out.total_uj += e;
  if (!out.energies_uj.empty())
    out.mean_uj = out.total_uj / static_cast<double>(out.energies_uj.size());
  return out;
}

std::string power_table() {
  const PowerProfile one = one_adc_amp_profile();
  const PowerProfile three = three_adc_profile();
  // The published comparison prints per-event energy without amplifier
  // energy (the amplifier is accounted for in overall power only).
  PowerProfile one_adc_only = one;
  one_adc_only.amplifier_power_uw = 0.0;
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "Power consumption analysis when sampling at %.0f Hz\n"
                "%-26s %14s %14s\n"
                "%-26s %14.0f %14.0f\n"
                "%-26s %14.0f %14.0f\n"
                "%-26s %14.0f %14.0f\n"
                "%-26s %14.0f %14.0f\n"
                "%-26s %14.2f %14.2f\n"
                "%-26s %14.0f %14.0f\n"
                "%-26s %14.2f %14.2f\n",
                one.sampling_rate_hz, "Event", "One ADC", "Three ADC",
                "MCU On Time (us)", one.mcu_on_time_us, three.mcu_on_time_us,
                "Total Event Time (us)", one.total_event_time_us, three.total_event_time_us,
                "MCU Sleep Power (uW)", one.sleep_power_uw, three.sleep_power_uw,
                "ADC Power (uW)", one.adc_event_power_uw, three.adc_event_power_uw,
                "Energy/Event (uJ)", energy_per_event_uj(one_adc_only),
                energy_per_event_uj(three),
                "Amplifier Power (uW)", one.amplifier_power_uw, three.amplifier_power_uw,
                "Overall Power (uW)", overall_power_uw(one), overall_power_uw(three));
  return std::string(buf);
}

}  // namespace sehs
