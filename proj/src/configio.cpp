#include "sehs/configio.hpp"

namespace sehs {

CircuitParams apply_circuit_config(KvConfig& cfg, CircuitParams base) {
  base.c_f = cfg.get_double("c_f", base.c_f);
  base.r_internal_ohm = cfg.get_double("r_internal_ohm", base.r_internal_ohm);
  base.r_match_ohm = cfg.get_double("r_match_ohm", base.r_match_ohm);
  base.v_diode = cfg.get_double("v_diode", base.v_diode);
  base.v_cap_init = cfg.get_double("v_cap_init", base.v_cap_init);
  base.discharge_period_s = cfg.get_double("discharge_period_s", base.discharge_period_s);
  base.sim_step_s = cfg.get_double("sim_step_s", base.sim_step_s);
  base.out_rate_hz = cfg.get_double("out_rate_hz", base.out_rate_hz);
  base.adc.bits = static_cast<int>(cfg.get_int("adc_bits", base.adc.bits));
  base.adc.full_scale_v = cfg.get_double("adc_full_scale_v", base.adc.full_scale_v);
  return base;
}

PopulationRanges apply_population_config(KvConfig& cfg, PopulationRanges base) {
  base.n_subjects = static_cast<int>(cfg.get_int("n_subjects", base.n_subjects));
  base.heel_peak_lo_v = cfg.get_double("heel_peak_lo_v", base.heel_peak_lo_v);
  base.heel_peak_hi_v = cfg.get_double("heel_peak_hi_v", base.heel_peak_hi_v);
  base.toe_ratio_lo = cfg.get_double("toe_ratio_lo", base.toe_ratio_lo);
  base.toe_ratio_hi = cfg.get_double("toe_ratio_hi", base.toe_ratio_hi);
  base.heel_pos_lo = cfg.get_double("heel_pos_lo", base.heel_pos_lo);
  base.heel_pos_hi = cfg.get_double("heel_pos_hi", base.heel_pos_hi);
  base.toe_pos_lo = cfg.get_double("toe_pos_lo", base.toe_pos_lo);
  base.toe_pos_hi = cfg.get_double("toe_pos_hi", base.toe_pos_hi);
  base.width_lo = cfg.get_double("width_lo", base.width_lo);
  base.width_hi = cfg.get_double("width_hi", base.width_hi);
  base.rebound_lo = cfg.get_double("rebound_lo", base.rebound_lo);
  base.rebound_hi = cfg.get_double("rebound_hi", base.rebound_hi);
  base.harmonic_abs_max = cfg.get_double("harmonic_abs_max", base.harmonic_abs_max);
  base.amp_jitter_sd = cfg.get_double("amp_jitter_sd", base.amp_jitter_sd);
  base.duration_mean_lo_s = cfg.get_double("duration_mean_lo_s", base.duration_mean_lo_s);
  base.duration_mean_hi_s = cfg.get_double("duration_mean_hi_s", base.duration_mean_hi_s);
  base.duration_sd_lo_s = cfg.get_double("duration_sd_lo_s", base.duration_sd_lo_s);
  base.duration_sd_hi_s = cfg.get_double("duration_sd_hi_s", base.duration_sd_hi_s);
  base.noise_lo_v = cfg.get_double("noise_lo_v", base.noise_lo_v);
  base.noise_hi_v = cfg.get_double("noise_hi_v", base.noise_hi_v);
  base.rear_amp_scale = cfg.get_double("rear_amp_scale", base.rear_amp_scale);
  base.rear_phase_shift = cfg.get_double("rear_phase_shift", base.rear_phase_shift);
  return base;
}

PipelineConfig apply_pipeline_config(KvConfig& cfg, PipelineConfig base) {
  base.ma_window = static_cast<int>(cfg.get_int("ma_window", base.ma_window));
  base.lowpass_cutoff_hz = cfg.get_double("lowpass_cutoff_hz", base.lowpass_cutoff_hz);
  base.lowpass_taps = static_cast<int>(cfg.get_int("lowpass_taps", base.lowpass_taps));
  base.band_lo_hz = cfg.get_double("band_lo_hz", base.band_lo_hz);
  base.band_hi_hz = cfg.get_double("band_hi_hz", base.band_hi_hz);
  base.auto_band = cfg.get_int("auto_band", base.auto_band ? 1 : 0) != 0;
  base.bandpass_taps = static_cast<int>(cfg.get_int("bandpass_taps", base.bandpass_taps));
  base.peak_min_frac = cfg.get_double("peak_min_frac", base.peak_min_frac);
  base.peak_min_dist_s = cfg.get_double("peak_min_dist_s", base.peak_min_dist_s);
  base.min_cycle_s = cfg.get_double("min_cycle_s", base.min_cycle_s);
  base.max_cycle_s = cfg.get_double("max_cycle_s", base.max_cycle_s);
  base.target_len = static_cast<int>(cfg.get_int("target_len", base.target_len));
  base.reject_factor = cfg.get_double("reject_factor", base.reject_factor);
  return base;
}

ProtocolConfig apply_protocol_config(KvConfig& cfg, ProtocolConfig base) {
  base.test_frac = cfg.get_double("test_frac", base.test_frac);
  base.folds = static_cast<int>(cfg.get_int("folds", base.folds));
  base.val_frac = cfg.get_double("val_frac", base.val_frac);
  base.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long>(base.seed)));
  base.knn.k = static_cast<int>(cfg.get_int("knn_k", base.knn.k));
  base.lstm.hidden = static_cast<int>(cfg.get_int("lstm_hidden", base.lstm.hidden));
  base.lstm.max_epochs = static_cast<int>(cfg.get_int("lstm_max_epochs", base.lstm.max_epochs));
  base.lstm.batch_size = static_cast<int>(cfg.get_int("lstm_batch_size", base.lstm.batch_size));
  base.lstm.learning_rate = cfg.get_double("lstm_learning_rate", base.lstm.learning_rate);
  base.lstm.beta1 = cfg.get_double("lstm_beta1", base.lstm.beta1);
  base.lstm.beta2 = cfg.get_double("lstm_beta2", base.lstm.beta2);
  base.lstm.adam_eps = cfg.get_double("lstm_adam_eps", base.lstm.adam_eps);
  base.lstm.patience = static_cast<int>(cfg.get_int("lstm_patience", base.lstm.patience));
  return base;
}

PowerProfile apply_power_profile_config(KvConfig& cfg, PowerProfile base) {
  base.mcu_on_time_us = cfg.get_double("mcu_on_time_us", base.mcu_on_time_us);
  base.total_event_time_us = cfg.get_double("total_event_time_us", base.total_event_time_us);
  base.sleep_power_uw = cfg.get_double("sleep_power_uw", base.sleep_power_uw);
  base.adc_event_power_uw = cfg.get_double("adc_event_power_uw", base.adc_event_power_uw);
  base.amplifier_power_uw = cfg.get_double("amplifier_power_uw", base.amplifier_power_uw);
  base.sampling_rate_hz = cfg.get_double("sampling_rate_hz", base.sampling_rate_hz);
  return base;
}

namespace {
template <typename T, typename Fn>
T load_one(const std::string& path, Fn apply) {
  KvConfig cfg = KvConfig::load(path);
  T out = apply(cfg);
  cfg.reject_unknown_keys();
  out.validate();
  return out;
}
}  // namespace

CircuitParams load_circuit_config(const std::string& path) {
  return load_one<CircuitParams>(path,
                                 [](KvConfig& c) { return apply_circuit_config(c); });
}

PopulationRanges load_population_config(const std::string& path) {
  return load_one<PopulationRanges>(path,
                                    [](KvConfig& c) { return apply_population_config(c); });
}

PipelineConfig load_pipeline_config(const std::string& path) {
  return load_one<PipelineConfig>(path,
                                  [](KvConfig& c) { return apply_pipeline_config(c); });
}

ProtocolConfig load_protocol_config(const std::string& path) {
  return load_one<ProtocolConfig>(path,
                                  [](KvConfig& c) { return apply_protocol_config(c); });
}

PowerProfile load_power_profile_config(const std::string& path) {
  return load_one<PowerProfile>(
      path, [](KvConfig& c) { return apply_power_profile_config(c, PowerProfile{}); });
}

SynthConfig load_synth_config(const std::string& path) {
  KvConfig cfg = KvConfig::load(path);
  SynthConfig out;
  out.circuit = apply_circuit_config(cfg);
  out.ranges = apply_population_config(cfg);
  cfg.reject_unknown_keys();
  out.circuit.validate();
  out.ranges.validate();
  return out;
}

}  // namespace sehs
