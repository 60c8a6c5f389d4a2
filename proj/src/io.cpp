#include "domegrip/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace domegrip::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& source) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw IoError(source + ": not a number: '" + text + "'");
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

double round_sig(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value == 0.0 ? 0.0 : value);
  return buffer;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in, const std::vector<std::string>& header,
                                               const std::string& source) {
  std::string line;
  bool have_header = false;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    auto fields = split_fields(trim(line));
    if (!have_header) {
      if (fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw IoError(source + ": expected header '" + expected + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw IoError(source + ":" + std::to_string(line_number) + ": expected " +
                    std::to_string(header.size()) + " fields");
    }
    rows.push_back(std::move(fields));
  }
  if (!have_header) throw IoError(source + ": missing header");
  return rows;
}

PVSample parse_pv_line(const std::string& line, const std::string& source) {
  const auto fields = split_fields(trim(line));
  if (fields.size() != 3) throw IoError(source + ": expected 3 fields");
  return {parse_double(fields[0], source), parse_double(fields[1], source), parse_double(fields[2], source)};
}

std::vector<PVSample> read_pv_samples(std::istream& in, const std::string& source) {
  std::vector<PVSample> samples;
  for (const auto& row : read_csv(in, kPVHeader, source)) {
    samples.push_back({parse_double(row[0], source), parse_double(row[1], source), parse_double(row[2], source)});
  }
  return samples;
}

std::vector<PVSample> read_pv_samples(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_pv_samples(in, path.string());
}

void write_pv_samples(std::ostream& out, std::span<const PVSample> samples) {
  out << "time_s,gauge_pressure_pa,syringe_volume_ml\n";
  for (const auto& s : samples) {
    out << format_number(s.time_s) << ',' << format_number(s.gauge_pressure_pa) << ','
        << format_number(s.syringe_volume_ml) << '\n';
  }
}

ForceTrace read_force_trace(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<ForceSample> samples;
  for (const auto& row : read_csv(in, kForceHeader, path.string())) {
    samples.push_back({parse_double(row[0], path.string()), parse_double(row[1], path.string())});
  }
  if (samples.empty()) throw DomainError(path.string() + ": force trace is empty");
  return ForceTrace(std::move(samples));
}

MarkerQuadd read_markers(const std::filesystem::path& path) {
  auto in = open_input(path);
  MarkerQuadd markers;
  std::array<bool, 4> seen{};
  for (const auto& row : read_csv(in, kMarkerHeader, path.string())) {
    const std::string& label = row[0];
    if (label.size() != 2 || label[0] != 'r' || label[1] < '1' || label[1] > '4') {
      throw IoError(path.string() + ": marker labels must be r1..r4, got '" + label + "'");
    }
    const int column = label[1] - '1';
    if (seen[static_cast<std::size_t>(column)]) throw IoError(path.string() + ": duplicate marker " + label);
    seen[static_cast<std::size_t>(column)] = true;
    for (int k = 0; k < 3; ++k) {
      markers.undeformed(k, column) = parse_double(row[static_cast<std::size_t>(1 + k)], path.string());
      markers.deformed(k, column) = parse_double(row[static_cast<std::size_t>(4 + k)], path.string());
    }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw IoError(path.string() + ": markers r1..r4 are all required");
  }
  return markers;
}

void write_markers(std::ostream& out, const MarkerQuadd& markers) {
  out << "label,x_undef,y_undef,z_undef,x_def,y_def,z_def\n";
  for (int c = 0; c < 4; ++c) {
    out << 'r' << (c + 1);
    for (int k = 0; k < 3; ++k) out << ',' << format_number(markers.undeformed(k, c));
    for (int k = 0; k < 3; ++k) out << ',' << format_number(markers.deformed(k, c));
    out << '\n';
  }
}

PhaseLog read_phase_log(const std::filesystem::path& path) {
  auto in = open_input(path);
  PhaseLog log;
  for (const auto& row : read_csv(in, kPhaseLogHeader, path.string())) {
    const auto phase = parse_phase(row[1]);
    if (!phase) throw IoError(path.string() + ": unknown phase '" + row[1] + "'");
    const double time = parse_double(row[0], path.string());
    if (!log.empty() && time <= log.back().first) {
      throw IoError(path.string() + ": phase start times must increase");
    }
    log.emplace_back(time, *phase);
  }
  if (log.empty()) throw IoError(path.string() + ": phase log is empty");
  return log;
}

void write_phase_log(std::ostream& out, const PhaseLog& log) {
  out << "time_s,phase\n";
  for (const auto& [time, phase] : log) out << format_number(time) << ',' << to_string(phase) << '\n';
}

PhaseLog phase_log_of(std::span<const PhaseSegment> segments) {
  PhaseLog log;
  for (const auto& segment : segments) {
    if (!segment.samples.empty()) log.emplace_back(segment.samples.front().time_s, segment.phase);
  }
  return log;
}

Phase phase_at(const PhaseLog& log, double time_s) {
  if (log.empty() || time_s < log.front().first) {
    throw DomainError("sample at t=" + format_number(time_s) + " s precedes the phase log");
  }
  auto it = std::upper_bound(log.begin(), log.end(), time_s,
                             [](double t, const auto& entry) { return t < entry.first; });
  return std::prev(it)->second;
}

std::vector<PhaseSegment> split_by_phase(std::span<const PVSample> samples, const PhaseLog& log) {
  std::vector<PhaseSegment> segments;
  std::size_t entry = 0;
  for (const auto& sample : samples) {
    if (sample.time_s < log.front().first) {
      throw DomainError("sample at t=" + format_number(sample.time_s) + " s precedes the phase log");
    }
    // a new log entry starts a new segment even if the phase repeats
    bool boundary = segments.empty();
    while (entry + 1 < log.size() && sample.time_s >= log[entry + 1].first) {
      ++entry;
      boundary = true;
    }
    if (boundary) segments.push_back({log[entry].second, {}});
    segments.back().samples.push_back(sample);
  }
  return segments;
}

ReferenceSet split_reference_cycle(std::span<const PVSample> samples, const GripperDesignd& design) {
  detail::require(samples.size() >= 4, "reference cycle needs at least 4 samples");
  const auto by_volume = [](const PVSample& a, const PVSample& b) {
    return a.syringe_volume_ml < b.syringe_volume_ml;
  };
  const auto first_max = std::max_element(samples.begin(), samples.end(), by_volume);
  const double deepest = first_max->syringe_volume_ml;
  auto last_max = samples.end() - 1;
  while (last_max->syringe_volume_ml != deepest) --last_max;
  const auto deflation = std::span(samples.begin(), first_max + 1);
  const auto inflation = std::span(last_max, samples.end());
  return {PVCurve(deflation, SweepDirection::Deflation, design),
          PVCurve(inflation, SweepDirection::Inflation, design)};
}

json read_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw IoError(std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number(j, key);
}

}  // namespace

ElasticMateriald material_from_json(const json& j) {
  return ElasticMateriald(number(j, "shear_modulus_pa"), number(j, "poisson_ratio"),
                          number(j, "density_kg_m3"), optional_number(j, "gent_extension_limit"));
}

json material_to_json(const ElasticMateriald& material) {
  json j;
  j["shear_modulus_pa"] = material.shear_modulus();
  j["poisson_ratio"] = material.poisson_ratio();
  j["density_kg_m3"] = material.density();
  if (material.gent_extension_limit()) j["gent_extension_limit"] = *material.gent_extension_limit();
  return j;
}

GripperDesignd design_from_json(const json& j) {
  if (!j.is_object()) throw IoError("design must be a JSON object");
  if (!j.contains("shell_material") || !j.contains("film_material")) {
    throw IoError("design needs shell_material and film_material");
  }
  const ShellGeometryd geometry(number(j, "radius_m"), number(j, "thickness_m"), number(j, "cap_angle_rad"),
                                optional_number(j, "film_thickness_m"));
  return GripperDesignd(geometry, material_from_json(j.at("shell_material")),
                        material_from_json(j.at("film_material")), number(j, "mass_kg"));
}

json design_to_json(const GripperDesignd& design) {
  json j;
  j["radius_m"] = design.geometry().radius();
  j["thickness_m"] = design.geometry().thickness();
  j["cap_angle_rad"] = design.geometry().cap_angle();
  if (design.geometry().film_thickness()) j["film_thickness_m"] = *design.geometry().film_thickness();
  j["shell_material"] = material_to_json(design.shell_material());
  j["film_material"] = material_to_json(design.film_material());
  j["mass_kg"] = design.mass();
  return j;
}

DetectorConfig detector_config_from_json(const json& source) {
  const json& j = source.contains("detector") ? source.at("detector") : source;
  DetectorConfig config;
  if (auto v = optional_number(j, "contact_threshold")) config.contact_threshold = *v;
  if (auto v = optional_number(j, "release_threshold")) config.release_threshold = *v;
  if (auto v = optional_number(j, "smoothing_window")) config.smoothing_window = static_cast<Eigen::Index>(*v);
  if (auto v = optional_number(j, "volume_mask_fraction")) config.volume_mask_fraction = *v;
  if (auto v = optional_number(j, "slope_fit_window")) config.slope_fit_window = static_cast<Eigen::Index>(*v);
  if (auto v = optional_number(j, "buckling_noise_multiplier")) config.buckling_noise_multiplier = *v;
  config.buckling_slope_threshold = optional_number(j, "buckling_slope_threshold");
  config.validate();
  return config;
}

json detector_config_to_json(const DetectorConfig& config) {
  json j;
  j["contact_threshold"] = config.contact_threshold;
  j["release_threshold"] = config.release_threshold;
  j["smoothing_window"] = config.smoothing_window;
  j["volume_mask_fraction"] = config.volume_mask_fraction;
  j["slope_fit_window"] = config.slope_fit_window;
  j["buckling_noise_multiplier"] = config.buckling_noise_multiplier;
  j["buckling_slope_threshold"] =
      config.buckling_slope_threshold ? json(*config.buckling_slope_threshold) : json(nullptr);
  return j;
}

CoatingParamsd coating_from_json(const json& source) {
  const json& j = source.contains("coating") ? source.at("coating") : source;
  CoatingParamsd p;
  if (auto v = optional_number(j, "initial_viscosity_pa_s")) p.initial_viscosity_pa_s = *v;
  if (auto v = optional_number(j, "density_kg_m3")) p.density_kg_m3 = *v;
  if (auto v = optional_number(j, "gravity_m_s2")) p.gravity_m_s2 = *v;
  if (auto v = optional_number(j, "alpha")) p.alpha = *v;
  if (auto v = optional_number(j, "beta")) p.beta = *v;
  if (auto v = optional_number(j, "cure_time_s")) p.cure_time_s = *v;
  if (auto v = optional_number(j, "wait_time_s")) p.wait_time_s = *v;
  return p;
}

RegimeThresholds thresholds_from_json(const json& source) {
  const json& j = source.contains("thresholds") ? source.at("thresholds") : source;
  RegimeThresholds t;
  if (auto v = optional_number(j, "mdc")) t.mdc = *v;
  if (auto v = optional_number(j, "mcf")) t.mcf = *v;
  return t;
}

json event_to_json(const EventRecord& event) {
  json j;
  j["kind"] = std::string(to_string(event.kind));
  j["index"] = event.sample_index;
  j["volume_fraction"] = round_sig(event.volume_fraction);
  j["time_s"] = round_sig(event.time_s);
  j["metric_value"] = round_sig(event.metric_value);
  return j;
}

EventRecord event_from_json(const json& j) {
  const auto kind = parse_event_kind(j.at("kind").get<std::string>());
  if (!kind) throw IoError("unknown event kind");
  return {*kind, j.at("index").get<Eigen::Index>(), number(j, "volume_fraction"), number(j, "time_s"),
          number(j, "metric_value")};
}

json report_to_json(const RegimeReport& report) {
  json j;
  j["m_dc"] = report.m_dc;
  j["m_cf"] = report.m_cf ? json(*report.m_cf) : json(nullptr);
  j["regime"] = std::string(to_string(report.regime));
  j["thresholds"] = {{"mdc", report.thresholds.mdc}, {"mcf", report.thresholds.mcf}};
  return rounded(j);
}

json rounded(json j) {
  if (j.is_number_float()) return round_sig(j.get<double>());
  if (j.is_structured()) {
    for (auto& element : j) element = rounded(element);
  }
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path temporary = path;
  temporary += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + temporary.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing " + temporary.string());
  }
  std::error_code ec;
  std::filesystem::rename(temporary, path, ec);
  if (ec) {
    std::filesystem::remove(temporary);
    throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace domegrip::io
