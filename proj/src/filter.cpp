#include "sehs/filter.hpp"

#include <cmath>

#include "sehs/errors.hpp"

namespace sehs {

void FilterConfig::validate() const {
  if (!(v_star > 0.0) || !std::isfinite(v_star)) {
    throw config_error("filter v_star must be positive and finite");
  }
}

double filter_node(double v_node, double v_c, double v_star, FilterStats* stats) {
  if (stats) stats->branch_evaluations++;
  if (v_node >= v_c) {
    return v_node - v_c + v_star;
  }
  return v_star * v_node / v_c;
}

FilteredSample filter_sample(double v_a, double v_b, double v_c, const FilterConfig& cfg,
                             FilterStats* stats) {
  FilteredSample s;
  s.v_a_f = filter_node(v_a, v_c, cfg.v_star, stats);
  s.v_b_f = filter_node(v_b, v_c, cfg.v_star, stats);
  s.v_f = s.v_a_f - s.v_b_f;
  return s;
}

VoltageTrace filter_trace(const VoltageTrace& in, const FilterConfig& cfg, FilterStats* stats) {
  cfg.validate();
  for (const char* ch : {"V_A", "V_B", "V_C"}) {
    if (!in.has(ch)) throw data_error(std::string("filter_trace: input lacks channel ") + ch);
  }
  const std::vector<double> va = in.volts("V_A");
  const std::vector<double> vb = in.volts("V_B");
  const std::vector<double> vc = in.volts("V_C");

  std::vector<double> fa(va.size()), fb(va.size()), f(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    const FilteredSample s = filter_sample(va[i], vb[i], vc[i], cfg, stats);
    fa[i] = s.v_a_f;
    fb[i] = s.v_b_f;
    f[i] = s.v_f;
  }

  VoltageTrace out(in.sample_rate_hz(), in.adc());
  out.meta = in.meta;
  out.meta["v_star"] = format_double(cfg.v_star);
  out.add_real("V_A_f", std::move(fa));
  out.add_real("V_B_f", std::move(fb));
  out.add_real("V_f", std::move(f));
  return out;
}

}  // namespace sehs
