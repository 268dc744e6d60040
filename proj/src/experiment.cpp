#include "sehs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sehs/errors.hpp"
#include "sehs/rng.hpp"

namespace sehs {
namespace {

// Offset separating the excitation stream from the profile-draw stream,
// which both key off the subject seed. Front and rear share the excitation
// seed so they experience the same gait timing.
constexpr std::uint64_t kExcitationStreamOffset = 0x9E3779B9ull;

double peak_to_peak(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
  double mn = x[lo], mx = x[lo];
  for (std::size_t i = lo; i < hi; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  return mx - mn;
}

std::map<int, std::vector<std::vector<double>>> group_samples_by_subject(const Dataset& ds) {
  std::map<int, std::vector<std::vector<double>>> out;
  for (const GaitCycle& c : ds.cycles) out[c.subject_id].push_back(c.samples);
  return out;
}

std::vector<std::vector<GaitCycle>> group_cycles_by_subject(const Dataset& ds) {
  const int n = ds.n_subjects();
  std::vector<std::vector<GaitCycle>> groups(static_cast<std::size_t>(n));
  for (const GaitCycle& c : ds.cycles)
    groups[static_cast<std::size_t>(c.subject_id)].push_back(c);
  return groups;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_subjects < 1) throw config_error("n_subjects must be >= 1");
  if (cycles_per_subject < 1) throw config_error("cycles_per_subject must be >= 1");
  if (!(walk_duration_s > 0.0)) throw config_error("walk_duration_s must be > 0");
  if (!(v_star > 0.0)) throw config_error("v_star must be > 0");
  circuit.validate();
  ranges.validate();
  pipeline.validate();
}

SubjectData build_subject(const ScenarioConfig& cfg, int subject_id) {
  cfg.validate();
  SubjectData out;
  out.front_profile = draw_profile(cfg.ranges, subject_id, cfg.seed);
  out.rear_profile = rear_variant(out.front_profile, cfg.ranges);
  const std::uint64_t exc_seed =
      subject_seed(cfg.seed, subject_id) + kExcitationStreamOffset;
  const Excitation front_exc =
      synth_excitation(out.front_profile, cfg.walk_duration_s, exc_seed, cfg.circuit.sim_step_s);
  const Excitation rear_exc =
      synth_excitation(out.rear_profile, cfg.walk_duration_s, exc_seed, cfg.circuit.sim_step_s);
  out.front = simulate(cfg.circuit, front_exc.v_source, front_exc.cycle_marks_s);
  out.rear = simulate(cfg.circuit, rear_exc.v_source, rear_exc.cycle_marks_s);
  out.front.trace.meta["subject_id"] = std::to_string(subject_id);
  out.front.trace.meta["source_peh"] = peh_name(Peh::Front);
  out.rear.trace.meta["subject_id"] = std::to_string(subject_id);
  out.rear.trace.meta["source_peh"] = peh_name(Peh::Rear);
  return out;
}

std::vector<SubjectData> build_population_sims(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<SubjectData> out;
  out.reserve(static_cast<std::size_t>(cfg.n_subjects));
  for (int id = 0; id < cfg.n_subjects; ++id) out.push_back(build_subject(cfg, id));
  return out;
}

std::vector<double> recognition_signal(const SimResult& sim, bool filtered, double v_star) {
  if (filtered) {
    FilterConfig fc;
    fc.v_star = v_star;
    return filter_trace(sim.trace, fc).volts("V_f");
  }
  const std::vector<double> va = sim.trace.volts("V_A");
  const std::vector<double> vb = sim.trace.volts("V_B");
  std::vector<double> v(va.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = va[i] - vb[i];
  return v;
}

Dataset build_dataset(const std::vector<SubjectData>& sims, const ScenarioConfig& cfg,
                      bool filtered, SegmentationSummary* summary) {
  cfg.validate();
  if (sims.empty()) throw data_error("no simulated subjects to build a dataset from");
  std::vector<std::vector<GaitCycle>> per_subject;
  per_subject.reserve(sims.size());
  if (summary) summary->subjects.clear();
  for (std::size_t id = 0; id < sims.size(); ++id) {
    const SimResult& sim = cfg.position == Peh::Front ? sims[id].front : sims[id].rear;
    const std::vector<double> signal = recognition_signal(sim, filtered, cfg.v_star);
    const SegmentationResult seg = segment_signal(signal, sim.out_rate_hz,
                                                  static_cast<int>(id), cfg.position,
                                                  cfg.pipeline);
    if (summary) {
      SubjectSegmentation s;
      s.subject_id = static_cast<int>(id);
      s.detected = seg.detected;
      s.rejected = seg.rejected;
      s.kept = seg.kept;
      s.band_fallback = seg.band.fallback;
      s.band_lo_hz = seg.band.lo_hz;
      s.band_hi_hz = seg.band.hi_hz;
      summary->subjects.push_back(s);
    }
    per_subject.push_back(seg.cycles);
  }
  return Dataset::balanced(per_subject, cfg.cycles_per_subject);
}

DistortionStats distortion_stats(const SimResult& sim, double v_star) {
  const std::vector<double> marks = sim.cycle_marks_s();
  if (marks.size() < 3) throw data_error("distortion statistics need at least 3 gait cycles");
  const std::vector<double> va = sim.trace.volts("V_A");
  const std::vector<double> vb = sim.trace.volts("V_B");
  const std::vector<double> vc = sim.trace.volts("V_C");
  FilterConfig fc;
  fc.v_star = v_star;
  const std::vector<double> vf = filter_trace(sim.trace, fc).volts("V_f");
  std::vector<double> raw(va.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = va[i] - vb[i];
  const std::vector<double> discharges = sim.discharge_times_s();

  std::vector<double> x, y_raw, y_filt;
  const std::size_t n = raw.size();
  for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
    const double t0 = marks[k];
    const double t1 = marks[k + 1];
    const bool crosses =
        std::any_of(discharges.begin(), discharges.end(),
                    [t0, t1](double td) { return td > t0 && td <= t1; });
    if (crosses) continue;
    std::size_t lo = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(t0 * sim.out_rate_hz), 0,
                              static_cast<long long>(n) - 1));
    std::size_t hi = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(t1 * sim.out_rate_hz), 0,
                              static_cast<long long>(n)));
    if (hi <= lo + 1) continue;
    x.push_back(vc[lo]);
    y_raw.push_back(peak_to_peak(raw, lo, hi));
    y_filt.push_back(peak_to_peak(vf, lo, hi));
  }
  if (x.size() < 3) throw data_error("too few usable cycles for distortion statistics");
  DistortionStats out;
  out.unfiltered = fit_slope(x, y_raw);
  out.filtered = fit_slope(x, y_filt);
  out.n_cycles = static_cast<int>(x.size());
  if (std::abs(out.unfiltered.slope) > 0.0)
    out.reduction_pct =
        100.0 * (1.0 - std::abs(out.filtered.slope) / std::abs(out.unfiltered.slope));
  return out;
}

SimilarityComparison similarity_by_subject(const Dataset& filtered_ds,
                                           const Dataset& unfiltered_ds, std::size_t max_pairs,
                                           std::uint64_t seed) {
  const auto gf = group_samples_by_subject(filtered_ds);
  const auto gu = group_samples_by_subject(unfiltered_ds);
  if (gf.empty() || gu.empty()) throw data_error("similarity comparison needs non-empty datasets");
  SimilarityComparison out;
  for (const auto& [id, fcycles] : gf) {
    const auto it = gu.find(id);
    if (it == gu.end())
      throw data_error("subject " + std::to_string(id) + " missing from the unfiltered dataset");
    const double sf = gait_similarity_sampled(fcycles, max_pairs,
                                              subject_seed(seed, id), nullptr);
    const double su = gait_similarity_sampled(it->second, max_pairs,
                                              subject_seed(seed, id), nullptr);
    out.subject_ids.push_back(id);
    out.filtered.push_back(sf);
    out.unfiltered.push_back(su);
    out.ratio.push_back(sf > 0.0 ? su / sf : std::numeric_limits<double>::infinity());
  }
  return out;
}

EnergyReport energy_report(const std::vector<SubjectData>& sims) {
  if (sims.empty()) throw data_error("energy report needs at least one subject");
  EnergyReport out;
  for (std::size_t id = 0; id < sims.size(); ++id) {
    const StepEnergyReport f = per_step_energy(sims[id].front);
    const StepEnergyReport r = per_step_energy(sims[id].rear);
    EnergyReport::PerSubject s;
    s.subject_id = static_cast<int>(id);
    s.front_mean_uj = f.mean_uj;
    s.rear_mean_uj = r.mean_uj;
    s.total_mean_uj = f.mean_uj + r.mean_uj;
    s.front_steps = static_cast<int>(f.energies_uj.size());
    s.rear_steps = static_cast<int>(r.energies_uj.size());
    out.subjects.push_back(s);
    out.mean_front_uj += f.mean_uj;
    out.mean_rear_uj += r.mean_uj;
  }
  out.mean_front_uj /= static_cast<double>(sims.size());
  out.mean_rear_uj /= static_cast<double>(sims.size());
  out.mean_total_uj = out.mean_front_uj + out.mean_rear_uj;
  out.improvement = harvest_improvement(out.mean_front_uj, out.mean_rear_uj);
  return out;
}

std::vector<SweepPoint> sweep_v_star(const std::vector<SubjectData>& sims,
                                     const ScenarioConfig& cfg, const ProtocolConfig& proto,
                                     ClassifierKind kind, const std::vector<double>& grid) {
  if (grid.empty()) throw config_error("sweep grid must be non-empty");
  std::vector<SweepPoint> out;
  for (double v : grid) {
    ScenarioConfig point = cfg;
    point.v_star = v;
    const Dataset ds = build_dataset(sims, point, true);
    const FitResult fr = train_once(ds, kind, proto);
    out.push_back({v, fr.test_eval.macro_recall, fr.test_eval.accuracy});
  }
  return out;
}

std::vector<SweepPoint> sweep_rate(const Dataset& base, double original_rate_hz,
                                   const ProtocolConfig& proto, ClassifierKind kind,
                                   const std::vector<double>& grid_hz) {
  if (grid_hz.empty()) throw config_error("sweep grid must be non-empty");
  std::vector<SweepPoint> out;
  for (double rate : grid_hz) {
    const Dataset ds =
        rate == original_rate_hz ? base : resample_dataset(base, original_rate_hz, rate);
    const FitResult fr = train_once(ds, kind, proto);
    out.push_back({rate, fr.test_eval.macro_recall, fr.test_eval.accuracy});
  }
  return out;
}

std::vector<SweepPoint> sweep_size(const Dataset& base, const ProtocolConfig& proto,
                                   ClassifierKind kind, const std::vector<int>& grid) {
  if (grid.empty()) throw config_error("sweep grid must be non-empty");
  const auto groups = group_cycles_by_subject(base);
  std::vector<SweepPoint> out;
  for (int k : grid) {
    const Dataset ds = Dataset::balanced(groups, k);
    const FitResult fr = train_once(ds, kind, proto);
    out.push_back({static_cast<double>(k), fr.test_eval.macro_recall, fr.test_eval.accuracy});
  }
  return out;
}

}  // namespace sehs
