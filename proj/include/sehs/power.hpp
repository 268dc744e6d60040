#pragma once
#include <string>
#include <vector>

#include "sehs/circuit.hpp"

namespace sehs {

// Duty-cycled sensing power budget: the MCU sleeps between periodic ADC
// events; average power blends event power and sleep power by duty cycle.
struct PowerProfile {
  double mcu_on_time_us = 0.0;
  double total_event_time_us = 0.0;
  double sleep_power_uw = 0.0;
  double adc_event_power_uw = 0.0;  // average power during the event window
  double amplifier_power_uw = 0.0;
  double sampling_rate_hz = 0.0;
  void validate() const;  // throws config_error
};

// Measured profiles of the two compared sensing architectures at 40 Hz:
// three ADC channels with no amplifier, versus one ADC channel + amplifier.
PowerProfile three_adc_profile();
PowerProfile one_adc_amp_profile();

// Average power over one second:
// (adc + amp) * t_event * rate + sleep * (1 - t_event * rate), in uW.
double overall_power_uw(const PowerProfile& p);

// Energy spent per sampling event: (adc + amp) * t_event, in uJ. The
// published comparison table excludes amplifier energy from this row for the
// one-ADC architecture; callers reproduce that by zeroing amplifier_power_uw.
double energy_per_event_uj(const PowerProfile& p);

struct HarvestImprovement {
  double vs_front_pct = 0.0;  // dual-harvester total vs. front alone
  double vs_rear_pct = 0.0;
};

// Improvement of combining both shoe positions over each single position:
// ((front + rear) - x) / x as a percentage.
HarvestImprovement harvest_improvement(double e_front_uj, double e_rear_uj);

struct StepEnergyReport {
  std::vector<double> energies_uj;  // one per fully-charged gait cycle
  int skipped = 0;                  // cycles containing a capacitor discharge
  double total_uj = 0.0;
  double mean_uj = 0.0;
};

// Capacitor energy gained per gait cycle, 1/2*C*(V_end^2 - V_start^2) on the
// pre-quantization capacitor voltage. Cycles spanning a discharge are
// skipped (their delta would be an artifact of the reset).
StepEnergyReport per_step_energy(const SimResult& sim);

// Formatted power comparison of the two architectures (the published
// two-column analysis); returned as display rows for the CLI.
std::string power_table();

}  // namespace sehs
