#pragma once
#include <cstdint>

#include "sehs/trace.hpp"

namespace sehs {

// Distortion-removal filter. The rectifier couples the measured AC swing to
// the capacitor voltage (the conduction clamp rises as the capacitor
// charges), so the raw peak-to-peak amplitude ratchets upward within each
// charge window. The filter re-references each node sample against the
// simultaneously sampled capacitor voltage:
//
//   if V_node >= V_C:  V_node' = V_node - V_C + v_star   (charging: subtract the lift)
//   else:              V_node' = v_star * V_node / V_C   (blocked: rescale the pattern)
//
// applied to V_A and V_B independently; the filtered signal is
// V' = V_A' - V_B'. v_star sets the reconstructed reference level; downstream
// recognition is insensitive to its exact value.
struct FilterConfig {
  double v_star = 2.0;
  void validate() const;  // throws config_error
};

struct FilterStats {
  // One branch evaluation per node per sample; filter_trace does exactly
  // 2 * n_samples of them.
  std::uint64_t branch_evaluations = 0;
};

struct FilteredSample {
  double v_a_f = 0.0;
  double v_b_f = 0.0;
  double v_f = 0.0;  // v_a_f - v_b_f
};

// One node against the capacitor channel. v_c == 0 with v_node >= 0 takes the
// charging branch, so the blocked-branch division is never reached with a
// zero denominator for non-negative inputs.
double filter_node(double v_node, double v_c, double v_star, FilterStats* stats = nullptr);

FilteredSample filter_sample(double v_a, double v_b, double v_c, const FilterConfig& cfg = {},
                             FilterStats* stats = nullptr);

// Filters a trace with channels V_A, V_B, V_C; returns a trace at the same
// rate with real-valued channels V_A_f, V_B_f, V_f. Metadata is carried over
// and a v_star entry is added.
VoltageTrace filter_trace(const VoltageTrace& in, const FilterConfig& cfg = {},
                          FilterStats* stats = nullptr);

}  // namespace sehs
