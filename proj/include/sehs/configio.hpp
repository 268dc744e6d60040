#pragma once
#include <string>

#include "sehs/circuit.hpp"
#include "sehs/kvconfig.hpp"
#include "sehs/pipeline.hpp"
#include "sehs/population.hpp"
#include "sehs/power.hpp"
#include "sehs/protocol.hpp"

namespace sehs {

// Flat key=value bindings for the library's config structs. Every key is
// optional and falls back to the struct default, so an empty file yields the
// defaults; unknown keys are rejected to catch typos. The apply_* forms patch
// an existing struct (used when one file carries several sections); the
// load_* forms read a file, reject leftover keys, and validate.

CircuitParams apply_circuit_config(KvConfig& cfg, CircuitParams base = {});
PopulationRanges apply_population_config(KvConfig& cfg, PopulationRanges base = {});
PipelineConfig apply_pipeline_config(KvConfig& cfg, PipelineConfig base = {});
ProtocolConfig apply_protocol_config(KvConfig& cfg, ProtocolConfig base = {});
PowerProfile apply_power_profile_config(KvConfig& cfg, PowerProfile base);

CircuitParams load_circuit_config(const std::string& path);
PopulationRanges load_population_config(const std::string& path);
PipelineConfig load_pipeline_config(const std::string& path);
ProtocolConfig load_protocol_config(const std::string& path);
PowerProfile load_power_profile_config(const std::string& path);

// One file may configure both the circuit and the population ranges.
struct SynthConfig {
  CircuitParams circuit;
  PopulationRanges ranges;
};
SynthConfig load_synth_config(const std::string& path);

}  // namespace sehs
