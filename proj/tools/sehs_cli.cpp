// Command-line front end: synth -> filter -> pipeline -> train -> eval,
// plus the power/energy accounting and the one-shot reproduce workflow.
//
// Exit codes: 0 success, 1 configuration error (bad flags, missing files,
// invalid parameter values), 2 data error (malformed or inconsistent
// inputs), 3 internal/training error. Errors print a human-readable line
// and a machine-readable JSON object on stderr.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sehs/configio.hpp"
#include "sehs/errors.hpp"
#include "sehs/experiment.hpp"
#include "sehs/features.hpp"
#include "sehs/filter.hpp"
#include "sehs/io.hpp"
#include "sehs/knn.hpp"
#include "sehs/lstm.hpp"
#include "sehs/pipeline.hpp"
#include "sehs/power.hpp"
#include "sehs/protocol.hpp"
#include "sehs/reports.hpp"
#include "sehs/trace.hpp"

namespace {

using nlohmann::ordered_json;

void require_input(const std::string& path) {
  if (!sehs::file_exists(path))
    throw sehs::config_error("input file not found: " + path);
}

// SEHS_SEED overrides any configured or flag-provided seed.
void apply_env_seed(std::uint64_t& seed) {
  const char* env = std::getenv("SEHS_SEED");
  if (env == nullptr || *env == '\0') return;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    seed = static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw sehs::config_error(std::string("SEHS_SEED is not a valid unsigned integer: ") + env);
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw sehs::config_error("grid entry is not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw sehs::config_error("empty grid");
  return out;
}

std::string truth_path_for(const std::string& trace_path) {
  std::filesystem::path p(trace_path);
  p.replace_extension(".truth.json");
  return p.string();
}

void write_truth_sidecar(const sehs::SimResult& sim, const std::string& path) {
  ordered_json j;
  j["out_rate_hz"] = sim.out_rate_hz;
  j["c_f"] = sim.c_f;
  j["source_energy_j"] = sim.source_energy_j;
  j["cycle_marks_s"] = sim.cycle_marks_s();
  j["discharge_times_s"] = sim.discharge_times_s();
  j["v_cap"] = sim.v_cap;
  j["v_source"] = sim.v_source;
  sehs::write_file_atomic(path, j.dump(1) + "\n");
}

// Rebuilds enough of a simulation result from a trace plus its ground-truth
// sidecar to run the per-step energy accounting.
sehs::SimResult load_sim(const std::string& trace_path, const std::string& truth_path,
                         double c_override) {
  require_input(trace_path);
  if (!sehs::file_exists(truth_path))
    throw sehs::config_error(
        "ground-truth sidecar not found: " + truth_path +
        " (synth writes one next to each trace; pass --truth to point elsewhere)");
  sehs::SimResult sim;
  sim.trace = sehs::load_trace(trace_path);
  ordered_json j;
  try {
    j = ordered_json::parse(sehs::read_file(truth_path));
    sim.out_rate_hz = j.at("out_rate_hz").get<double>();
    sim.c_f = j.at("c_f").get<double>();
    sim.source_energy_j = j.value("source_energy_j", 0.0);
    sim.v_cap = j.at("v_cap").get<std::vector<double>>();
    if (j.contains("v_source")) sim.v_source = j.at("v_source").get<std::vector<double>>();
    for (const double t : j.at("cycle_marks_s").get<std::vector<double>>())
      sim.events.push_back({t, sehs::SimEventKind::CycleStart});
    for (const double t : j.at("discharge_times_s").get<std::vector<double>>())
      sim.events.push_back({t, sehs::SimEventKind::CapDischarge});
  } catch (const nlohmann::json::exception& e) {
    throw sehs::data_error("malformed ground-truth sidecar " + truth_path + ": " + e.what());
  }
  if (c_override > 0) sim.c_f = c_override;
  return sim;
}

constexpr int kModelFormatVersion = 1;

void write_model_file(const std::string& path, const std::string& classifier,
                      const std::string& payload_json) {
  ordered_json j;
  j["format"] = "sehs-model";
  j["format_version"] = kModelFormatVersion;
  j["classifier"] = classifier;
  j["payload"] = ordered_json::parse(payload_json);
  sehs::write_file_atomic(path, j.dump(1) + "\n");
}

struct LoadedModel {
  std::string classifier;
  sehs::KnnClassifier knn;
  sehs::LstmClassifier lstm;
};

LoadedModel load_model_file(const std::string& path) {
  require_input(path);
  ordered_json j;
  try {
    j = ordered_json::parse(sehs::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw sehs::data_error("model file is not valid JSON: " + std::string(e.what()));
  }
  LoadedModel m;
  try {
    if (j.at("format").get<std::string>() != "sehs-model")
      throw sehs::data_error("not a model file (format field mismatch)");
    const int ver = j.at("format_version").get<int>();
    if (ver != kModelFormatVersion)
      throw sehs::data_error("unsupported model format version " + std::to_string(ver));
    m.classifier = j.at("classifier").get<std::string>();
    const std::string payload = j.at("payload").dump();
    if (m.classifier == "knn")
      m.knn = sehs::KnnClassifier::from_json(payload);
    else if (m.classifier == "unilstm" || m.classifier == "bilstm")
      m.lstm = sehs::LstmClassifier::from_json(payload);
    else
      throw sehs::data_error("unknown classifier in model file: " + m.classifier);
  } catch (const nlohmann::json::exception& e) {
    throw sehs::data_error("malformed model file: " + std::string(e.what()));
  }
  return m;
}

// ---------------------------------------------------------------- synth ----

int cmd_synth(const std::string& config_path, int subjects, double duration_s,
              std::uint64_t seed, const std::string& out_dir, const std::string& positions) {
  sehs::ScenarioConfig sc;
  if (!config_path.empty()) {
    require_input(config_path);
    const sehs::SynthConfig file = sehs::load_synth_config(config_path);
    sc.circuit = file.circuit;
    sc.ranges = file.ranges;
    sc.n_subjects = file.ranges.n_subjects;
  }
  if (subjects > 0) sc.n_subjects = subjects;
  sc.ranges.n_subjects = sc.n_subjects;
  if (duration_s > 0) sc.walk_duration_s = duration_s;
  sc.seed = seed;
  apply_env_seed(sc.seed);
  sc.cycles_per_subject = 1;  // synth does not segment; keep validation happy
  sc.validate();
  const bool want_front = positions == "both" || positions == "front";
  const bool want_rear = positions == "both" || positions == "rear";
  if (!want_front && !want_rear)
    throw sehs::config_error("--positions must be front, rear, or both");

  std::filesystem::create_directories(out_dir);
  ordered_json files = ordered_json::array();
  for (int id = 0; id < sc.n_subjects; ++id) {
    const sehs::SubjectData subj = sehs::build_subject(sc, id);
    const auto emit = [&](const sehs::SimResult& sim, const char* tag) {
      std::ostringstream name;
      name << "subject_" << id << '_' << tag << ".csv";
      const std::string trace_path =
          (std::filesystem::path(out_dir) / name.str()).string();
      sehs::save_trace(sim.trace, trace_path);
      write_truth_sidecar(sim, truth_path_for(trace_path));
      files.push_back(trace_path);
    };
    if (want_front) emit(subj.front, "front");
    if (want_rear) emit(subj.rear, "rear");
  }

  ordered_json out;
  out["subjects"] = sc.n_subjects;
  out["walk_duration_s"] = sc.walk_duration_s;
  out["seed"] = sc.seed;
  out["files"] = files;
  std::cout << out.dump(1) << '\n';
  return 0;
}

// --------------------------------------------------------------- filter ----

int cmd_filter(const std::string& input, double v_star, const std::string& output) {
  require_input(input);
  const sehs::VoltageTrace in = sehs::load_trace(input);
  sehs::FilterConfig cfg;
  cfg.v_star = v_star;
  const sehs::VoltageTrace filtered = sehs::filter_trace(in, cfg);

  // The output keeps every input column and appends the filtered channels.
  sehs::VoltageTrace out(in.sample_rate_hz(), in.adc());
  out.meta = filtered.meta;
  for (const std::string& name : in.names()) {
    if (in.is_quantized(name))
      out.add_quantized(name, in.raw(name));
    else
      out.add_real(name, in.volts(name));
  }
  for (const std::string& name : filtered.names()) out.add_real(name, filtered.volts(name));
  sehs::save_trace(out, output);

  ordered_json rep;
  rep["input"] = input;
  rep["output"] = output;
  rep["v_star"] = v_star;
  rep["n_samples"] = out.n_samples();
  std::cout << rep.dump(1) << '\n';
  return 0;
}

// ------------------------------------------------------------- pipeline ----

int cmd_pipeline(const std::vector<std::string>& inputs, const std::string& config_path,
                 const std::string& output, const std::string& report_path) {
  for (const std::string& p : inputs) require_input(p);
  if (!config_path.empty()) require_input(config_path);
  const sehs::PipelineConfig cfg =
      config_path.empty() ? sehs::PipelineConfig{} : sehs::load_pipeline_config(config_path);

  sehs::Dataset ds;
  ordered_json report = ordered_json::array();
  for (const std::string& path : inputs) {
    const sehs::VoltageTrace tr = sehs::load_trace(path);
    const auto sid_it = tr.meta.find("subject_id");
    if (sid_it == tr.meta.end())
      throw sehs::data_error("trace " + path + " lacks subject_id metadata");
    int subject_id = 0;
    try {
      subject_id = std::stoi(sid_it->second);
    } catch (const std::exception&) {
      throw sehs::data_error("trace " + path + " has non-integer subject_id metadata");
    }
    sehs::Peh peh = sehs::Peh::Front;
    const auto peh_it = tr.meta.find("source_peh");
    if (peh_it != tr.meta.end()) peh = sehs::peh_from_name(peh_it->second);

    std::vector<double> signal;
    if (tr.has("V_f")) {
      signal = tr.volts("V_f");
    } else if (tr.has("V_A") && tr.has("V_B")) {
      const auto va = tr.volts("V_A");
      const auto vb = tr.volts("V_B");
      signal.resize(va.size());
      for (std::size_t i = 0; i < va.size(); ++i) signal[i] = va[i] - vb[i];
    } else {
      throw sehs::data_error("trace " + path + " has neither V_f nor V_A/V_B channels");
    }

    const sehs::SegmentationResult seg =
        sehs::segment_signal(signal, tr.sample_rate_hz(), subject_id, peh, cfg);
    for (const sehs::GaitCycle& c : seg.cycles) ds.cycles.push_back(c);

    ordered_json row;
    row["file"] = path;
    row["subject_id"] = subject_id;
    row["source_peh"] = sehs::peh_name(peh);
    row["detected"] = seg.detected;
    row["rejected"] = seg.rejected;
    row["kept"] = seg.kept;
    row["band_lo_hz"] = seg.band.lo_hz;
    row["band_hi_hz"] = seg.band.hi_hz;
    row["band_fallback"] = seg.band.fallback;
    report.push_back(row);
  }

  sehs::save_dataset(ds, output);
  if (!report_path.empty())
    sehs::write_file_atomic(report_path, report.dump(1) + "\n");
  ordered_json out;
  out["output"] = output;
  out["n_cycles"] = ds.cycles.size();
  out["per_input"] = report;
  std::cout << out.dump(1) << '\n';
  return 0;
}

// ---------------------------------------------------------------- train ----

int cmd_train(const std::string& dataset_path, const std::string& model_name,
              const std::string& config_path, const std::string& out_path,
              const std::string& report_path, std::uint64_t seed_flag, bool seed_given,
              bool single_split) {
  require_input(dataset_path);
  if (!config_path.empty()) require_input(config_path);
  sehs::ProtocolConfig proto =
      config_path.empty() ? sehs::ProtocolConfig{} : sehs::load_protocol_config(config_path);
  if (seed_given) proto.seed = seed_flag;
  apply_env_seed(proto.seed);
  const sehs::ClassifierKind kind = sehs::classifier_from_name(model_name);
  const sehs::Dataset ds = sehs::load_dataset(dataset_path);

  ordered_json rep;
  std::string best_model_json;
  if (single_split) {
    const sehs::FitResult fit = sehs::train_once(ds, kind, proto);
    rep["classifier"] = sehs::classifier_name(kind);
    rep["fit"] = sehs::fit_result_json(fit);
    best_model_json = fit.model_json;
    std::cout << "test accuracy " << fit.test_eval.accuracy << '\n';
  } else {
    const sehs::CvReport cv = sehs::run_protocol(ds, kind, proto);
    rep = sehs::cv_report_json(cv);
    best_model_json = cv.folds[static_cast<std::size_t>(cv.best_fold)].model_json;
    std::cout << "mean test accuracy " << cv.mean_test_accuracy << " (std "
              << cv.std_test_accuracy << "), best fold " << cv.best_fold << '\n';
  }
  if (!out_path.empty())
    write_model_file(out_path, sehs::classifier_name(kind), best_model_json);
  if (!report_path.empty()) sehs::write_file_atomic(report_path, rep.dump(1) + "\n");
  return 0;
}

// ----------------------------------------------------------------- eval ----

int cmd_eval(const std::string& model_path, const std::string& dataset_path,
             const std::string& out_path) {
  require_input(dataset_path);
  const LoadedModel m = load_model_file(model_path);
  const sehs::Dataset ds = sehs::load_dataset(dataset_path);
  if (ds.cycles.empty()) throw sehs::data_error("evaluation dataset is empty");

  std::vector<int> y_true, y_pred;
  if (m.classifier == "knn") {
    const sehs::FeatureMatrix fm = sehs::feature_matrix(ds);
    y_true = fm.y;
    y_pred = m.knn.predict(fm.x);
  } else {
    std::vector<std::vector<double>> x;
    for (const sehs::GaitCycle& c : ds.cycles) {
      x.push_back(c.samples);
      y_true.push_back(c.subject_id);
    }
    y_pred = m.lstm.predict(x);
  }
  const sehs::Evaluation ev = sehs::evaluate(y_true, y_pred);
  const ordered_json rep = sehs::evaluation_json(ev);
  if (ev.precision_undefined > 0 || ev.recall_undefined > 0)
    std::cerr << "warning: " << ev.recall_undefined << " class(es) absent from the test set and "
              << ev.precision_undefined
              << " never predicted; their precision/recall are excluded from macro averages\n";
  if (!out_path.empty()) sehs::write_file_atomic(out_path, rep.dump(1) + "\n");
  std::cout << rep.dump(1) << '\n';
  return 0;
}

// ---------------------------------------------------------------- sweep ----

int cmd_sweep(const std::string& kind, const std::string& grid_text, const std::string& out_csv,
              const std::string& model_name, const std::string& config_path,
              const std::string& train_config_path, int subjects, int cycles, double duration_s,
              std::uint64_t seed) {
  if (!config_path.empty()) require_input(config_path);
  if (!train_config_path.empty()) require_input(train_config_path);
  sehs::ScenarioConfig sc;
  if (!config_path.empty()) {
    const sehs::SynthConfig file = sehs::load_synth_config(config_path);
    sc.circuit = file.circuit;
    sc.ranges = file.ranges;
    sc.n_subjects = file.ranges.n_subjects;
  }
  if (subjects > 0) sc.n_subjects = subjects;
  sc.ranges.n_subjects = sc.n_subjects;
  if (cycles > 0) sc.cycles_per_subject = cycles;
  if (duration_s > 0) sc.walk_duration_s = duration_s;
  sc.seed = seed;
  apply_env_seed(sc.seed);
  sc.validate();
  sehs::ProtocolConfig proto = train_config_path.empty()
                                   ? sehs::ProtocolConfig{}
                                   : sehs::load_protocol_config(train_config_path);
  proto.seed = sc.seed;
  const sehs::ClassifierKind ckind = sehs::classifier_from_name(model_name);
  const std::vector<double> grid = parse_grid(grid_text);

  std::vector<sehs::SweepPoint> pts;
  std::string x_name;
  if (kind == "v_star") {
    x_name = "v_star";
    const auto sims = sehs::build_population_sims(sc);
    pts = sehs::sweep_v_star(sims, sc, proto, ckind, grid);
  } else if (kind == "rate") {
    x_name = "rate_hz";
    const auto sims = sehs::build_population_sims(sc);
    const sehs::Dataset ds = sehs::build_dataset(sims, sc, true);
    pts = sehs::sweep_rate(ds, sc.circuit.out_rate_hz, proto, ckind, grid);
  } else if (kind == "size") {
    x_name = "cycles_per_subject";
    const auto sims = sehs::build_population_sims(sc);
    const sehs::Dataset ds = sehs::build_dataset(sims, sc, true);
    std::vector<int> sizes;
    for (const double g : grid) sizes.push_back(static_cast<int>(std::lround(g)));
    pts = sehs::sweep_size(ds, proto, ckind, sizes);
  } else {
    throw sehs::config_error("unknown sweep kind '" + kind + "' (v_star, rate, or size)");
  }

  sehs::write_file_atomic(out_csv, sehs::sweep_csv(x_name, pts));
  std::cout << sehs::sweep_json(x_name, pts).dump(1) << '\n';
  return 0;
}

// ---------------------------------------------------------------- power ----

int cmd_power(const std::string& profile_name, double rate_override) {
  sehs::PowerProfile profile;
  bool builtin = true;
  if (profile_name == "sehs") {
    profile = sehs::three_adc_profile();
  } else if (profile_name == "one-adc-amp") {
    profile = sehs::one_adc_amp_profile();
  } else {
    builtin = false;
    require_input(profile_name);
    profile = sehs::load_power_profile_config(profile_name);
  }
  if (rate_override > 0) profile.sampling_rate_hz = rate_override;
  profile.validate();

  if (builtin && rate_override <= 0) std::cout << sehs::power_table() << '\n';

  ordered_json rep;
  rep["profile"] = profile_name;
  rep["sampling_rate_hz"] = profile.sampling_rate_hz;
  rep["overall_power_uw"] = sehs::overall_power_uw(profile);
  rep["energy_per_event_uj"] = sehs::energy_per_event_uj(profile);
  if (profile.amplifier_power_uw > 0) {
    sehs::PowerProfile no_amp = profile;
    no_amp.amplifier_power_uw = 0;
    rep["energy_per_event_excl_amplifier_uj"] = sehs::energy_per_event_uj(no_amp);
  }
  std::cout << rep.dump(1) << '\n';
  return 0;
}

// --------------------------------------------------------------- energy ----

int cmd_energy(const std::string& trace_path, const std::string& truth_flag,
               const std::string& rear_path, const std::string& rear_truth_flag,
               double c_override) {
  const std::string truth = truth_flag.empty() ? truth_path_for(trace_path) : truth_flag;
  const sehs::SimResult sim = load_sim(trace_path, truth, c_override);
  const sehs::StepEnergyReport front = sehs::per_step_energy(sim);

  ordered_json rep;
  const auto step_json = [](const sehs::StepEnergyReport& r) {
    ordered_json j;
    j["steps"] = r.energies_uj.size();
    j["skipped_discharge_cycles"] = r.skipped;
    j["total_uj"] = r.total_uj;
    j["mean_uj"] = r.mean_uj;
    return j;
  };
  rep["trace"] = trace_path;
  rep["c_f"] = sim.c_f;
  rep["per_step"] = step_json(front);

  if (!rear_path.empty()) {
    const std::string rear_truth =
        rear_truth_flag.empty() ? truth_path_for(rear_path) : rear_truth_flag;
    const sehs::SimResult rsim = load_sim(rear_path, rear_truth, c_override);
    const sehs::StepEnergyReport rear = sehs::per_step_energy(rsim);
    rep["rear_trace"] = rear_path;
    rep["rear_per_step"] = step_json(rear);
    const sehs::HarvestImprovement imp =
        sehs::harvest_improvement(front.mean_uj, rear.mean_uj);
    rep["improvement_vs_front_pct"] = imp.vs_front_pct;
    rep["improvement_vs_rear_pct"] = imp.vs_rear_pct;
  }
  std::cout << rep.dump(1) << '\n';
  return 0;
}

// ------------------------------------------------------------ reproduce ----

int cmd_reproduce(sehs::ReproduceOptions opt, const std::string& v_star_grid,
                  const std::string& rate_grid, const std::string& size_grid) {
  apply_env_seed(opt.seed);
  if (!v_star_grid.empty()) opt.v_star_grid = parse_grid(v_star_grid);
  if (!rate_grid.empty()) opt.rate_grid = parse_grid(rate_grid);
  if (!size_grid.empty()) {
    opt.size_grid.clear();
    for (const double v : parse_grid(size_grid)) opt.size_grid.push_back(v);
  }
  sehs::run_reproduce(opt, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piezoelectric-harvester gait sensing toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Simulate a walker population and write trace CSVs + ground-truth sidecars");
  std::string sy_config, sy_out = "synth_out", sy_positions = "both";
  int sy_subjects = 0;
  double sy_duration = 0;
  std::uint64_t sy_seed = 0;
  synth->add_option("--config", sy_config, "circuit + population key=value file");
  synth->add_option("--subjects", sy_subjects, "number of subjects (overrides config)");
  synth->add_option("--duration", sy_duration, "walk duration in seconds (default 360)");
  synth->add_option("--seed", sy_seed, "population seed (default 0)");
  synth->add_option("--out", sy_out, "output directory (default synth_out)");
  synth->add_option("--positions", sy_positions, "front, rear, or both (default both)");

  // filter
  auto* filter = app.add_subcommand(
      "filter", "Apply the distortion-removal filter; appends V_A_f,V_B_f,V_f columns");
  std::string fl_input, fl_output;
  double fl_vstar = 2.0;
  filter->add_option("--input", fl_input, "trace CSV with V_A,V_B,V_C")->required();
  filter->add_option("--v-star", fl_vstar, "reconstruction reference level (default 2.0)");
  filter->add_option("--output", fl_output, "output trace CSV")->required();

  // pipeline
  auto* pipeline = app.add_subcommand(
      "pipeline", "Denoise, segment, reject irregular cycles, and build a dataset");
  std::vector<std::string> pl_inputs;
  std::string pl_config, pl_output, pl_report;
  pipeline->add_option("--input", pl_inputs, "trace CSV (repeatable)")->required();
  pipeline->add_option("--config", pl_config, "pipeline key=value file");
  pipeline->add_option("--output", pl_output, "dataset JSON path")->required();
  pipeline->add_option("--report", pl_report, "segmentation report JSON path");

  // train
  auto* train = app.add_subcommand(
      "train", "Cross-validated training; writes the best model and a report");
  std::string tr_dataset, tr_model = "bilstm", tr_config, tr_out, tr_report;
  std::uint64_t tr_seed = 0;
  bool tr_single = false;
  train->add_option("--dataset", tr_dataset, "dataset JSON")->required();
  train->add_option("--model", tr_model, "bilstm, unilstm, or knn (default bilstm)");
  train->add_option("--config", tr_config, "training key=value file");
  train->add_option("--out", tr_out, "model file path");
  train->add_option("--report", tr_report, "report JSON path");
  auto* tr_seed_opt = train->add_option("--seed", tr_seed, "protocol seed (overrides config)");
  train->add_flag("--single-split", tr_single,
                  "one stratified split instead of k-fold cross-validation");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  std::string ev_model, ev_dataset, ev_out;
  eval->add_option("--model", ev_model, "model file from train")->required();
  eval->add_option("--dataset", ev_dataset, "dataset JSON")->required();
  eval->add_option("--out", ev_out, "also write the report JSON here");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Recall vs. v_star, sampling rate, or training-set size on a synthetic population");
  std::string sw_kind, sw_grid, sw_out, sw_model = "bilstm", sw_config, sw_train_config;
  int sw_subjects = 0, sw_cycles = 0;
  double sw_duration = 0;
  std::uint64_t sw_seed = 0;
  sweep->add_option("--kind", sw_kind, "v_star, rate, or size")->required();
  sweep->add_option("--grid", sw_grid, "comma-separated sweep values")->required();
  sweep->add_option("--out", sw_out, "output CSV path")->required();
  sweep->add_option("--model", sw_model, "classifier (default bilstm)");
  sweep->add_option("--config", sw_config, "circuit + population key=value file");
  sweep->add_option("--train-config", sw_train_config, "training key=value file");
  sweep->add_option("--subjects", sw_subjects, "population size (default 20)");
  sweep->add_option("--cycles", sw_cycles, "cycles per subject (default 250)");
  sweep->add_option("--duration", sw_duration, "walk duration in seconds (default 360)");
  sweep->add_option("--seed", sw_seed, "seed (default 0)");

  // power
  auto* power = app.add_subcommand(
      "power", "Duty-cycled sensing power budget for a measured or custom profile");
  std::string pw_profile = "sehs";
  double pw_rate = 0;
  power->add_option("--profile", pw_profile,
                    "sehs, one-adc-amp, or a key=value profile file (default sehs)");
  power->add_option("--rate", pw_rate, "override the sampling rate in Hz");

  // energy
  auto* energy = app.add_subcommand(
      "energy", "Per-gait-cycle capacitor energy from a simulated trace");
  std::string en_trace, en_truth, en_rear, en_rear_truth;
  double en_c = 0;
  energy->add_option("--trace", en_trace, "trace CSV from synth")->required();
  energy->add_option("--truth", en_truth, "ground-truth sidecar (default <trace>.truth.json)");
  energy->add_option("--rear", en_rear, "rear-position trace for the dual-placement comparison");
  energy->add_option("--rear-truth", en_rear_truth, "sidecar for --rear");
  energy->add_option("--c", en_c, "capacitance override in farads");

  // reproduce
  auto* reproduce = app.add_subcommand(
      "reproduce", "Full workflow: population, energy, filter comparison, classifiers, sweeps");
  sehs::ReproduceOptions opt;
  std::string rp_vstar_grid, rp_rate_grid, rp_size_grid;
  reproduce->add_option("--seed", opt.seed, "workflow seed (default 7)");
  reproduce->add_option("--subjects", opt.n_subjects, "population size (default 20)");
  reproduce->add_option("--cycles", opt.cycles_per_subject, "cycles per subject (default 250)");
  reproduce->add_option("--walk-duration", opt.walk_duration_s,
                        "walk duration in seconds (default 360)");
  reproduce->add_option("--out", opt.out_dir, "output directory (default reproduce_out)");
  bool rp_skip_sweeps = false;
  reproduce->add_flag("--skip-sweeps", rp_skip_sweeps, "skip the three parameter sweeps");
  reproduce->add_flag("--full-cv", opt.full_cv,
                      "k-fold cross-validation instead of a single split per classifier");
  reproduce->add_option("--v-star-grid", rp_vstar_grid, "override the v_star sweep grid");
  reproduce->add_option("--rate-grid", rp_rate_grid, "override the sampling-rate sweep grid");
  reproduce->add_option("--size-grid", rp_size_grid, "override the training-size sweep grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return 0;
    nlohmann::ordered_json err;
    err["error"] = {{"type", "config"}, {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }

  const auto fail = [](const char* type, const std::string& msg, int code) {
    std::cerr << "error: " << msg << '\n';
    nlohmann::ordered_json err;
    err["error"] = {{"type", type}, {"message", msg}};
    std::cerr << err.dump() << '\n';
    return code;
  };

  try {
    if (synth->parsed())
      return cmd_synth(sy_config, sy_subjects, sy_duration, sy_seed, sy_out, sy_positions);
    if (filter->parsed()) return cmd_filter(fl_input, fl_vstar, fl_output);
    if (pipeline->parsed()) return cmd_pipeline(pl_inputs, pl_config, pl_output, pl_report);
    if (train->parsed())
      return cmd_train(tr_dataset, tr_model, tr_config, tr_out, tr_report, tr_seed,
                       tr_seed_opt->count() > 0, tr_single);
    if (eval->parsed()) return cmd_eval(ev_model, ev_dataset, ev_out);
    if (sweep->parsed())
      return cmd_sweep(sw_kind, sw_grid, sw_out, sw_model, sw_config, sw_train_config,
                       sw_subjects, sw_cycles, sw_duration, sw_seed);
    if (power->parsed()) return cmd_power(pw_profile, pw_rate);
    if (energy->parsed()) return cmd_energy(en_trace, en_truth, en_rear, en_rear_truth, en_c);
    if (reproduce->parsed()) {
      opt.run_sweeps = !rp_skip_sweeps;
      return cmd_reproduce(opt, rp_vstar_grid, rp_rate_grid, rp_size_grid);
    }
    return fail("config", "no subcommand given", 1);
  } catch (const sehs::config_error& e) {
    return fail("config", e.what(), 1);
  } catch (const sehs::data_error& e) {
    return fail("data", e.what(), 2);
  } catch (const sehs::train_error& e) {
    return fail("train", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
}
