#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "domegrip/buckling.hpp"
#include "domegrip/detector.hpp"
#include "domegrip/fabrication.hpp"
#include "domegrip/io.hpp"
#include "domegrip/pv_data.hpp"
#include "domegrip/regime.hpp"
#include "domegrip/synthetic.hpp"

namespace domegrip::cli {

namespace {

using io::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows of numbers or strings written as CSV, TSV or a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string cell_text(const json& cell) {
  if (cell.is_null()) return "";
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_number_integer()) return std::to_string(cell.get<long long>());
  return io::format_number(cell.get<double>());
}

std::string render_delimited(const Table& table, char separator) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? std::string(1, separator) : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? std::string(1, separator) : "") << cell_text(row[c]);
    out << '\n';
  }
  return out.str();
}

json table_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json object;
    for (std::size_t c = 0; c < row.size(); ++c) object[table.columns[c]] = row[c];
    rows.push_back(object);
  }
  return io::rounded(rows);
}

std::string render(const Table& table, const std::string& format) {
  if (format == "csv") return render_delimited(table, ',');
  if (format == "tsv") return render_delimited(table, '\t');
  return table_json(table).dump(2) + "\n";
}

/// Single-record output: a JSON object or a one-row table.
std::string render_record(const json& record, const std::string& format) {
  if (format == "json") return io::rounded(record).dump(2) + "\n";
  Table table;
  std::vector<json> row;
  for (const auto& [key, value] : record.items()) {
    if (value.is_structured()) continue;
    table.columns.push_back(key);
    row.push_back(value);
  }
  table.rows.push_back(row);
  return render(table, format);
}

struct Common {
  std::string config_path;
  std::string output_path;
  std::string format;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  json config = json::object();

  void load(const Common& common) {
    if (common.config_path.empty()) return;
    config = io::read_json(common.config_path);
    if (!config.is_object()) throw IoError(common.config_path + ": config must be a JSON object");
  }

  json section(const char* key) const {
    return config.contains(key) ? config.at(key) : json::object();
  }

  void emit(const Common& common, const std::string& text) const {
    if (common.output_path.empty()) {
      out << text;
      out.flush();
    } else {
      io::write_file_atomic(common.output_path, text);
    }
  }
};

void add_common(CLI::App* command, Common& common, std::vector<std::string> formats, const std::string& fallback) {
  common.format = fallback;
  command->add_option("--config", common.config_path, "JSON config (sections: design, detector, coating, thresholds)");
  command->add_option("-o,--output", common.output_path, "Write to this file instead of standard output");
  command->add_option("--format", common.format, "Output format")->check(CLI::IsMember(std::move(formats)));
}

GripperDesignd load_design(const Context& context, const std::string& design_path) {
  if (!design_path.empty()) {
    json j = io::read_json(design_path);
    return io::design_from_json(j.contains("design") ? j.at("design") : j);
  }
  if (context.config.contains("design")) return io::design_from_json(context.config.at("design"));
  throw UsageError("a design is required: pass --design <json> or a config with a \"design\" section");
}

template <typename T>
void override_with(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

// predict ------------------------------------------------------------------

struct PredictArgs {
  Common common;
  std::string design;
};

json prediction_record(const ShellGeometryd& geometry, const ElasticMateriald& material) {
  const auto prediction = dome_critical_pressure(geometry, material);
  json j;
  j["h_bar"] = geometry.slenderness();
  j["cap_angle_rad"] = geometry.cap_angle();
  j["critical_pressure_pa"] = prediction.critical_pressure_pa;
  j["normalized_pressure"] = prediction.normalized_pressure;
  j["normalized_cap_angle"] = prediction.normalized_cap_angle;
  j["zoelly_pressure_pa"] =
      zoelly_sphere_pressure(young_modulus(material), material.poisson_ratio(), geometry.slenderness());
  return j;
}

void run_predict(Context& context, const PredictArgs& args) {
  const GripperDesignd design = load_design(context, args.design);
  context.emit(args.common, render_record(prediction_record(design.geometry(), design.shell_material()),
                                          args.common.format));
}

// thickness ----------------------------------------------------------------

struct ThicknessArgs {
  Common common;
  Eigen::Index layers = 1;
  double radius_m = 0.0;
  double zenith_rad = 0.0;
  std::optional<double> viscosity, density, gravity, alpha, beta, cure_time, wait_time;
};

void run_thickness(Context& context, ThicknessArgs& args) {
  CoatingParamsd params = io::coating_from_json(context.section("coating"));
  override_with(args.viscosity, params.initial_viscosity_pa_s);
  override_with(args.density, params.density_kg_m3);
  override_with(args.gravity, params.gravity_m_s2);
  override_with(args.alpha, params.alpha);
  override_with(args.beta, params.beta);
  override_with(args.cure_time, params.cure_time_s);
  override_with(args.wait_time, params.wait_time_s);
  const Eigen::VectorXd layers = layer_profile(args.layers, args.radius_m, args.zenith_rad, params);
  Table table{{"layer", "layer_thickness_m", "cumulative_thickness_m"}, {}};
  double total = 0.0;
  for (Eigen::Index i = 0; i < layers.size(); ++i) {
    total += layers[i];
    table.rows.push_back({json(i + 1), json(layers[i]), json(total)});
  }
  context.emit(args.common, render(table, args.common.format));
}

// classify -----------------------------------------------------------------

struct ClassifyArgs {
  Common common;
  std::string curve;
  std::string markers;
  std::optional<double> mdc, mcf;
};

RegimeThresholds resolve_thresholds(const Context& context, std::optional<double> mdc, std::optional<double> mcf) {
  RegimeThresholds thresholds = io::thresholds_from_json(context.section("thresholds"));
  override_with(mdc, thresholds.mdc);
  override_with(mcf, thresholds.mcf);
  return thresholds;
}

RegimeReport classify_files(const std::filesystem::path& curve_path, const std::filesystem::path& marker_path,
                            const RegimeThresholds& thresholds) {
  const auto samples = io::read_pv_samples(curve_path);
  // V0 does not enter the regime metrics
  const PVCurve curve(samples, SweepDirection::Deflation, synth::demo_design(), 1.0);
  return classify_regime(curve, io::read_markers(marker_path), thresholds);
}

void run_classify(Context& context, const ClassifyArgs& args) {
  const auto report = classify_files(args.curve, args.markers, resolve_thresholds(context, args.mdc, args.mcf));
  context.emit(args.common, render_record(io::report_to_json(report), args.common.format));
}

// correct ------------------------------------------------------------------

struct CorrectArgs {
  Common common;
  std::string input;
  std::string design;
  double v0_system_ml = 0.0;
  std::optional<double> p0_abs_pa;
  double ambient_pa = kStandardAtmospherePa;
};

void run_correct(Context& context, const CorrectArgs& args) {
  const GripperDesignd design = load_design(context, args.design);
  const auto samples = io::read_pv_samples(args.input);
  detail::require(samples.size() >= 2, "curve needs at least 2 samples");
  const auto direction = samples.back().syringe_volume_ml > samples.front().syringe_volume_ml
                             ? SweepDirection::Deflation
                             : SweepDirection::Inflation;
  const PVCurve curve(samples, direction, design);
  const Eigen::VectorXd cavity =
      compressibility_correct(curve, args.v0_system_ml, args.p0_abs_pa.value_or(args.ambient_pa), args.ambient_pa);
  std::vector<PVSample> corrected = samples;
  for (std::size_t i = 0; i < corrected.size(); ++i) {
    corrected[i].syringe_volume_ml = cavity[static_cast<Eigen::Index>(i)];
  }
  if (args.common.format == "json") {
    Table table{{"time_s", "gauge_pressure_pa", "syringe_volume_ml"}, {}};
    for (const auto& s : corrected) table.rows.push_back({s.time_s, s.gauge_pressure_pa, s.syringe_volume_ml});
    context.emit(args.common, render(table, "json"));
    return;
  }
  std::ostringstream out;
  io::write_pv_samples(out, corrected);
  context.emit(args.common, out.str());
}

// detect -------------------------------------------------------------------

struct DetectArgs {
  Common common;
  std::string trial;
  std::string reference;
  std::string phase_log;
  std::string design;
  bool stream = false;
  std::optional<double> contact_threshold, release_threshold, mask_fraction, buckling_threshold,
      buckling_noise_multiplier;
  std::optional<Eigen::Index> smoothing_window, slope_window;
};

DetectorConfig resolve_detector(const Context& context, const DetectArgs& args) {
  DetectorConfig config = io::detector_config_from_json(context.section("detector"));
  override_with(args.contact_threshold, config.contact_threshold);
  override_with(args.release_threshold, config.release_threshold);
  override_with(args.mask_fraction, config.volume_mask_fraction);
  override_with(args.buckling_noise_multiplier, config.buckling_noise_multiplier);
  override_with(args.smoothing_window, config.smoothing_window);
  override_with(args.slope_window, config.slope_fit_window);
  if (args.buckling_threshold) config.buckling_slope_threshold = args.buckling_threshold;
  config.validate();
  return config;
}

std::string event_line(const EventRecord& event) { return io::event_to_json(event).dump() + "\n"; }

void run_detect(Context& context, const DetectArgs& args) {
  const GripperDesignd design = load_design(context, args.design);
  const DetectorConfig config = resolve_detector(context, args);
  const ReferenceSet references = io::split_reference_cycle(io::read_pv_samples(args.reference), design);
  const io::PhaseLog log = io::read_phase_log(args.phase_log);

  if (!args.stream) {
    if (args.trial.empty()) throw UsageError("detect needs --trial <csv> or --stream");
    const auto segments = io::split_by_phase(io::read_pv_samples(args.trial), log);
    std::string text;
    for (const auto& event : detect_trial(segments, references, config)) text += event_line(event);
    context.emit(args.common, text);
    return;
  }

  StreamDetector detector(references, config);
  std::string collected;
  const auto report = [&](const std::vector<EventRecord>& events) {
    for (const auto& event : events) {
      if (args.common.output_path.empty()) {
        context.out << event_line(event);
        context.out.flush();
      } else {
        collected += event_line(event);
      }
    }
  };
  std::string line;
  bool header = false;
  std::size_t line_number = 0;
  while (std::getline(context.in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!header) {
      std::istringstream first(line + "\n");
      io::read_csv(first, io::kPVHeader, "<stdin>");
      header = true;
      continue;
    }
    const PVSample sample = io::parse_pv_line(line, "<stdin>:" + std::to_string(line_number));
    report(detector.push(sample, io::phase_at(log, sample.time_s)));
  }
  if (!header) throw IoError("<stdin>: missing header");
  report(detector.finish());
  if (!args.common.output_path.empty()) io::write_file_atomic(args.common.output_path, collected);
}

// synth --------------------------------------------------------------------

struct SynthArgs {
  Common common;
  std::uint64_t seed = 0;
  std::string prefix;
  std::string design;
  std::optional<int> archetype;
  Eigen::Index archetype_samples = 400;
  double noise_sigma = 0.005;
  double idle_s = 4.0;
  bool object_free = false;
};

std::string pv_csv(std::span<const PVSample> samples) {
  std::ostringstream out;
  io::write_pv_samples(out, samples);
  return out.str();
}

std::vector<PVSample> cycle_samples(const ReferenceSet& references) {
  std::vector<PVSample> samples = references.deflation.samples();
  const auto inflation = references.inflation.samples();
  samples.insert(samples.end(), inflation.begin(), inflation.end());
  return samples;
}

std::vector<synth::Injection> injections_from_json(const json& list) {
  std::vector<synth::Injection> out;
  for (const auto& item : list) {
    const auto kind = parse_event_kind(item.at("kind").get<std::string>());
    if (!kind) throw IoError("unknown injection kind " + item.at("kind").dump());
    out.push_back({*kind, item.at("target").get<double>(), item.value("amplitude", 0.0), item.value("width", 0.0)});
  }
  return out;
}

void run_synth(Context& context, const SynthArgs& args) {
  const GripperDesignd design = args.design.empty() && !context.config.contains("design")
                                    ? synth::demo_design()
                                    : load_design(context, args.design);
  const std::string prefix = args.prefix;

  if (args.archetype) {
    if (*args.archetype < 1 || *args.archetype > 3) throw UsageError("--archetype must be 1, 2 or 3");
    const auto archetype =
        synth::synth_regime_curve(static_cast<Regime>(*args.archetype), design, args.archetype_samples, args.seed);
    std::ostringstream markers;
    io::write_markers(markers, archetype.markers);
    io::write_file_atomic(prefix + "_curve.csv", pv_csv(archetype.curve.samples()));
    io::write_file_atomic(prefix + "_markers.csv", markers.str());
    return;
  }

  const json options = context.section("synth");
  const synth::CycleSpec spec;
  const double noise = options.value("noise_sigma", args.noise_sigma);
  const auto cycle = synth::synth_reference_cycle(design, spec, noise, args.seed);
  synth::TrialScript script = synth::grasp_script(spec, options.value("idle_s", args.idle_s));
  script.noise_sigma = noise;
  script.seed = args.seed + 1;
  script.reference_buckling_fraction = cycle.buckling_volume_fraction;
  if (options.contains("injections")) {
    script.injections = injections_from_json(options.at("injections"));
  } else if (!args.object_free) {
    script.injections = synth::sample_grasp_injections(args.seed + 2);
  }
  const auto trial = synth::synth_grasp_trial(script, cycle.underlying);

  std::vector<PVSample> trial_samples;
  for (const auto& segment : trial.segments) {
    trial_samples.insert(trial_samples.end(), segment.samples.begin(), segment.samples.end());
  }
  std::ostringstream phases;
  io::write_phase_log(phases, io::phase_log_of(trial.segments));
  std::string truth;
  for (const auto& event : trial.ground_truth) truth += event_line(event);
  json config;
  config["design"] = io::design_to_json(design);
  config["detector"] = io::detector_config_to_json(io::detector_config_from_json(context.section("detector")));

  io::write_file_atomic(prefix + "_reference.csv", pv_csv(cycle_samples(cycle.references)));
  io::write_file_atomic(prefix + "_trial.csv", pv_csv(trial_samples));
  io::write_file_atomic(prefix + "_phases.csv", phases.str());
  io::write_file_atomic(prefix + "_truth.jsonl", truth);
  io::write_file_atomic(prefix + "_config.json", io::rounded(config).dump(2) + "\n");
}

// payload ------------------------------------------------------------------

struct PayloadArgs {
  Common common;
  std::string force;
  std::string design;
  std::optional<double> mass_kg;
  double gravity = kStandardGravity;
};

void run_payload(Context& context, const PayloadArgs& args) {
  const ForceTrace trace = io::read_force_trace(args.force);
  std::optional<GripperDesignd> design;
  if (!args.design.empty() || context.config.contains("design")) design = load_design(context, args.design);
  if (!design && !args.mass_kg) throw UsageError("payload needs --mass or a design");
  const GripperDesignd base = design.value_or(synth::demo_design());
  const GripperDesignd gripper(base.geometry(), base.shell_material(), base.film_material(),
                               args.mass_kg.value_or(base.mass()));
  double max_force = trace.samples().front().force_n;
  for (const auto& s : trace.samples()) max_force = std::max(max_force, s.force_n);
  json j;
  j["max_force_n"] = max_force;
  j["mass_kg"] = gripper.mass();
  j["gravity_m_s2"] = args.gravity;
  j["payload_ratio"] = max_payload_ratio(trace, gripper, args.gravity);
  context.emit(args.common, render_record(j, args.common.format));
}

// sweep --------------------------------------------------------------------

struct SweepArgs {
  Common common;
  std::string mode = "predict";
  std::string design;
  double h_min = 0.005, h_max = 0.1;
  Eigen::Index h_count = 20;
  std::string spacing = "log";
  double theta_min = std::numbers::pi / 2.0, theta_max = std::numbers::pi / 2.0;
  Eigen::Index theta_count = 1;
  std::string manifest;
  std::optional<double> mdc, mcf;
};

std::vector<double> grid(double lo, double hi, Eigen::Index count, bool logarithmic) {
  detail::require(count >= 1, "grid counts must be at least 1");
  detail::require(lo <= hi, "grid minimum exceeds maximum");
  if (count == 1) return {lo};
  detail::require(!logarithmic || lo > 0, "log spacing needs a positive minimum");
  std::vector<double> out;
  for (Eigen::Index k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(logarithmic ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo));
  }
  return out;
}

void run_sweep(Context& context, const SweepArgs& args) {
  if (args.mode == "predict") {
    const bool have_design = !args.design.empty() || context.config.contains("design");
    const ElasticMateriald material =
        have_design ? load_design(context, args.design).shell_material() : materials::elite_double_32();
    const double radius = have_design ? load_design(context, args.design).geometry().radius() : 1.0;
    Table table{{"h_bar", "cap_angle_rad", "critical_pressure_pa", "normalized_pressure", "normalized_cap_angle",
                 "zoelly_pressure_pa"},
                {}};
    for (double theta : grid(args.theta_min, args.theta_max, args.theta_count, false)) {
      for (double h_bar : grid(args.h_min, args.h_max, args.h_count, args.spacing == "log")) {
        const json record = prediction_record(ShellGeometryd(radius, h_bar * radius, theta), material);
        std::vector<json> row;
        for (const auto& column : table.columns) row.push_back(record.at(column));
        table.rows.push_back(row);
      }
    }
    context.emit(args.common, render(table, args.common.format));
    return;
  }

  if (args.manifest.empty()) throw UsageError("sweep --mode classify needs --manifest <csv>");
  const RegimeThresholds thresholds = resolve_thresholds(context, args.mdc, args.mcf);
  std::ifstream in(args.manifest);
  if (!in) throw IoError("cannot open " + args.manifest);
  const auto base = std::filesystem::path(args.manifest).parent_path();
  Table table{{"h_bar", "t_bar", "m_dc", "m_cf", "regime"}, {}};
  for (const auto& row : io::read_csv(in, {"h_bar", "t_bar", "curve_csv", "marker_csv"}, args.manifest)) {
    const auto report = classify_files(base / row[2], base / row[3], thresholds);
    table.rows.push_back({std::stod(row[0]), std::stod(row[1]), report.m_dc,
                          report.m_cf ? json(*report.m_cf) : json(nullptr),
                          std::string(to_string(report.regime))});
  }
  context.emit(args.common, render(table, args.common.format));
}

void print_error(std::ostream& err, const char* kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Buckling-based soft gripper toolkit"};
  app.name("domegrip");
  app.require_subcommand(1);

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Critical buckling pressure of a design");
  add_common(predict_cmd, predict.common, {"json", "csv", "tsv"}, "json");
  predict_cmd->add_option("--design", predict.design, "Design JSON");

  ThicknessArgs thickness;
  auto* thickness_cmd = app.add_subcommand("thickness", "Layer thicknesses of a viscous-coated shell");
  add_common(thickness_cmd, thickness.common, {"csv", "json"}, "csv");
  thickness_cmd->add_option("-n,--layers", thickness.layers, "Number of pours")->required();
  thickness_cmd->add_option("--radius", thickness.radius_m, "Initial sphere radius in m")->required();
  thickness_cmd->add_option("--zenith", thickness.zenith_rad, "Zenith angle in rad, 0 to pi/2")->required();
  thickness_cmd->add_option("--viscosity", thickness.viscosity, "Initial viscosity in Pa s");
  thickness_cmd->add_option("--density", thickness.density, "Density in kg/m^3");
  thickness_cmd->add_option("--gravity", thickness.gravity, "Gravity in m/s^2");
  thickness_cmd->add_option("--alpha", thickness.alpha, "Viscosity growth exponent");
  thickness_cmd->add_option("--beta", thickness.beta, "Cure rate in 1/s");
  thickness_cmd->add_option("--cure-time", thickness.cure_time, "Cure time in s");
  thickness_cmd->add_option("--wait-time", thickness.wait_time, "Wait before pouring in s");

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "Regime of a deflation curve and marker set");
  add_common(classify_cmd, classify.common, {"json", "csv"}, "json");
  classify_cmd->add_option("--curve", classify.curve, "Deflation curve CSV")->required();
  classify_cmd->add_option("--markers", classify.markers, "Marker CSV")->required();
  classify_cmd->add_option("--mdc", classify.mdc, "M_DC threshold");
  classify_cmd->add_option("--mcf", classify.mcf, "M_CF threshold");

  CorrectArgs correct;
  auto* correct_cmd = app.add_subcommand("correct", "Gas compressibility correction of a recorded sweep");
  add_common(correct_cmd, correct.common, {"csv", "json"}, "csv");
  correct_cmd->add_option("--input", correct.input, "Raw pressure-volume CSV")->required();
  correct_cmd->add_option("--design", correct.design, "Design JSON");
  correct_cmd->add_option("--v0-system", correct.v0_system_ml, "Initial gas volume of the loop in mL")->required();
  correct_cmd->add_option("--p0", correct.p0_abs_pa, "Initial absolute pressure in Pa (default: ambient)");
  correct_cmd->add_option("--ambient", correct.ambient_pa, "Ambient pressure in Pa");

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Contact, buckling, release and spike events");
  add_common(detect_cmd, detect.common, {"json"}, "json");
  detect_cmd->add_option("--trial", detect.trial, "Trial CSV");
  detect_cmd->add_option("--reference", detect.reference, "Object-free deflation + inflation CSV")->required();
  detect_cmd->add_option("--phase-log", detect.phase_log, "Phase log CSV")->required();
  detect_cmd->add_option("--design", detect.design, "Design JSON");
  detect_cmd->add_flag("--stream", detect.stream, "Read trial samples from standard input");
  detect_cmd->add_option("--contact-threshold", detect.contact_threshold);
  detect_cmd->add_option("--release-threshold", detect.release_threshold);
  detect_cmd->add_option("--smoothing-window", detect.smoothing_window);
  detect_cmd->add_option("--mask-fraction", detect.mask_fraction);
  detect_cmd->add_option("--slope-window", detect.slope_window);
  detect_cmd->add_option("--buckling-threshold", detect.buckling_threshold);
  detect_cmd->add_option("--buckling-noise-multiplier", detect.buckling_noise_multiplier);
  detect_cmd->get_option("--trial")->excludes("--stream");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Seeded synthetic grasp trial or regime archetype");
  add_common(synth_cmd, synth_args.common, {"csv"}, "csv");
  synth_cmd->add_option("--seed", synth_args.seed, "Random seed")->required();
  synth_cmd->add_option("--prefix", synth_args.prefix, "Output path prefix")->required();
  synth_cmd->add_option("--design", synth_args.design, "Design JSON (default: demo gripper)");
  synth_cmd->add_option("--archetype", synth_args.archetype, "Write a regime 1, 2 or 3 archetype instead");
  synth_cmd->add_option("--samples", synth_args.archetype_samples, "Archetype sample count");
  synth_cmd->add_option("--noise", synth_args.noise_sigma, "Noise as a fraction of the pressure range");
  synth_cmd->add_option("--idle", synth_args.idle_s, "Idle duration in s");
  synth_cmd->add_flag("--object-free", synth_args.object_free, "No injected events");

  PayloadArgs payload;
  auto* payload_cmd = app.add_subcommand("payload", "Payload-to-weight ratio from a force trace");
  add_common(payload_cmd, payload.common, {"json", "csv"}, "json");
  payload_cmd->add_option("--force", payload.force, "Force CSV")->required();
  payload_cmd->add_option("--design", payload.design, "Design JSON");
  payload_cmd->add_option("--mass", payload.mass_kg, "Gripper mass in kg");
  payload_cmd->add_option("--gravity", payload.gravity, "Gravity in m/s^2");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Predict or classify over a design grid");
  add_common(sweep_cmd, sweep.common, {"csv", "json"}, "csv");
  sweep_cmd->add_option("--mode", sweep.mode)->check(CLI::IsMember({"predict", "classify"}));
  sweep_cmd->add_option("--design", sweep.design, "Design JSON for the material and radius");
  sweep_cmd->add_option("--h-bar-min", sweep.h_min);
  sweep_cmd->add_option("--h-bar-max", sweep.h_max);
  sweep_cmd->add_option("--h-bar-count", sweep.h_count);
  sweep_cmd->add_option("--spacing", sweep.spacing)->check(CLI::IsMember({"log", "linear"}));
  sweep_cmd->add_option("--theta-min", sweep.theta_min);
  sweep_cmd->add_option("--theta-max", sweep.theta_max);
  sweep_cmd->add_option("--theta-count", sweep.theta_count);
  sweep_cmd->add_option("--manifest", sweep.manifest, "CSV of h_bar,t_bar,curve_csv,marker_csv");
  sweep_cmd->add_option("--mdc", sweep.mdc, "M_DC threshold");
  sweep_cmd->add_option("--mcf", sweep.mcf, "M_CF threshold");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kUsageError;
  }

  Context context{in, out};
  try {
    const auto with = [&](const Common& common, auto&& body) {
      context.load(common);
      body();
    };
    if (*predict_cmd) with(predict.common, [&] { run_predict(context, predict); });
    if (*thickness_cmd) with(thickness.common, [&] { run_thickness(context, thickness); });
    if (*classify_cmd) with(classify.common, [&] { run_classify(context, classify); });
    if (*correct_cmd) with(correct.common, [&] { run_correct(context, correct); });
    if (*detect_cmd) with(detect.common, [&] { run_detect(context, detect); });
    if (*synth_cmd) with(synth_args.common, [&] { run_synth(context, synth_args); });
    if (*payload_cmd) with(payload.common, [&] { run_payload(context, payload); });
    if (*sweep_cmd) with(sweep.common, [&] { run_sweep(context, sweep); });
  } catch (const UsageError& e) {
    print_error(err, "usage", e.what());
    return kUsageError;
  } catch (const IoError& e) {
    print_error(err, "io", e.what());
    return kIoError;
  } catch (const json::exception& e) {
    print_error(err, "io", e.what());
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error(err, "io", e.what());
    return kIoError;
  } catch (const DomainError& e) {
    print_error(err, "domain", e.what());
    return kDomainError;
  } catch (const std::invalid_argument& e) {
    print_error(err, "io", e.what());
    return kIoError;
  }
  return kOk;
}

}  // namespace domegrip::cli
