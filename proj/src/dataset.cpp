#include "sehs/dataset.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "sehs/errors.hpp"
#include "sehs/io.hpp"

namespace sehs {

using ordered_json = nlohmann::ordered_json;

std::string peh_name(Peh p) { return p == Peh::Front ? "Front" : "Rear"; }

Peh peh_from_name(const std::string& s) {
  if (s == "Front") return Peh::Front;
  if (s == "Rear") return Peh::Rear;
  throw data_error("unknown PEH position '" + s + "' (expected Front or Rear)");
}

void GaitCycle::validate() const {
  if (subject_id < 0) throw data_error("gait cycle has negative subject_id");
  if (!(original_duration_s > 0.0) || !(original_duration_s < 5.0)) {
    throw data_error("gait cycle duration " + std::to_string(original_duration_s) +
                     " s outside (0, 5) s");
  }
  if (samples.empty()) throw data_error("gait cycle has no samples");
  for (double v : samples) {
    if (!std::isfinite(v)) throw data_error("gait cycle contains a non-finite sample");
  }
}

int Dataset::n_subjects() const {
  int max_id = -1;
  for (const auto& c : cycles) max_id = std::max(max_id, c.subject_id);
  return max_id + 1;
}

std::vector<int> Dataset::counts_per_subject() const {
  std::vector<int> counts(n_subjects(), 0);
  for (const auto& c : cycles) counts[c.subject_id]++;
  return counts;
}

Dataset Dataset::balanced(const std::vector<std::vector<GaitCycle>>& per_subject, int k) {
  if (k <= 0) throw data_error("balanced dataset needs k > 0");
  Dataset ds;
  for (std::size_t s = 0; s < per_subject.size(); ++s) {
    if (static_cast<int>(per_subject[s].size()) < k) {
      throw data_error("subject " + std::to_string(s) + " has only " +
                       std::to_string(per_subject[s].size()) + " cycles, needs " +
                       std::to_string(k));
    }
    for (int i = 0; i < k; ++i) ds.cycles.push_back(per_subject[s][i]);
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : ds.cycles) {
    ordered_json obj;
    obj["subject_id"] = c.subject_id;
    obj["source_peh"] = peh_name(c.source_peh);
    obj["original_duration_s"] = c.original_duration_s;
    obj["samples"] = c.samples;
    arr.push_back(std::move(obj));
  }
  write_file_atomic(path, arr.dump(1) + "\n");
}

Dataset load_dataset(const std::string& path) {
  ordered_json arr;
  try {
    arr = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw data_error("dataset file '" + path + "': " + e.what());
  }
  if (!arr.is_array()) throw data_error("dataset file '" + path + "' is not a JSON array");
  Dataset ds;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& obj = arr[i];
    try {
      GaitCycle c;
      c.subject_id = obj.at("subject_id").get<int>();
      c.source_peh = peh_from_name(obj.at("source_peh").get<std::string>());
      c.original_duration_s = obj.at("original_duration_s").get<double>();
      c.samples = obj.at("samples").get<std::vector<double>>();
      c.validate();
      ds.cycles.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw data_error("dataset file '" + path + "', cycle " + std::to_string(i) + ": " +
                       e.what());
    }
  }
  return ds;
}

}  // namespace sehs
