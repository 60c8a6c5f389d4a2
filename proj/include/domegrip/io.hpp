#pragma once

// File formats: pressure-volume, force and marker CSVs, phase logs, design and
// detector JSON, event JSON lines. Numbers are written with 12 significant
// digits so outputs are byte-stable.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "domegrip/detector.hpp"
#include "domegrip/fabrication.hpp"
#include "domegrip/pv_data.hpp"
#include "domegrip/regime.hpp"

namespace domegrip::io {

using json = nlohmann::ordered_json;

/// Value rounded to 12 significant digits (what the writers print).
double round_sig(double value);
/// %.12g
std::string format_number(double value);

std::vector<std::vector<std::string>> read_csv(std::istream& in, const std::vector<std::string>& header,
                                               const std::string& source);

inline const std::vector<std::string> kPVHeader = {"time_s", "gauge_pressure_pa", "syringe_volume_ml"};
inline const std::vector<std::string> kForceHeader = {"time_s", "force_n"};
inline const std::vector<std::string> kMarkerHeader = {"label", "x_undef", "y_undef", "z_undef",
                                                       "x_def", "y_def", "z_def"};
inline const std::vector<std::string> kPhaseLogHeader = {"time_s", "phase"};

std::vector<PVSample> read_pv_samples(std::istream& in, const std::string& source = "<stream>");
std::vector<PVSample> read_pv_samples(const std::filesystem::path& path);
void write_pv_samples(std::ostream& out, std::span<const PVSample> samples);

/// Parses one CSV data line of the pressure-volume schema.
PVSample parse_pv_line(const std::string& line, const std::string& source);

ForceTrace read_force_trace(const std::filesystem::path& path);
MarkerQuadd read_markers(const std::filesystem::path& path);
void write_markers(std::ostream& out, const MarkerQuadd& markers);

/// Rows of (start time, phase): each phase lasts until the next row's time.
using PhaseLog = std::vector<std::pair<double, Phase>>;
PhaseLog read_phase_log(const std::filesystem::path& path);
void write_phase_log(std::ostream& out, const PhaseLog& log);
PhaseLog phase_log_of(std::span<const PhaseSegment> segments);
Phase phase_at(const PhaseLog& log, double time_s);
std::vector<PhaseSegment> split_by_phase(std::span<const PVSample> samples, const PhaseLog& log);

/// Splits an object-free cycle at its deepest deflation: the deflation runs
/// up to the first maximum of the syringe volume, the inflation starts at
/// the last maximum.
ReferenceSet split_reference_cycle(std::span<const PVSample> samples, const GripperDesignd& design);

json read_json(const std::filesystem::path& path);

GripperDesignd design_from_json(const json& j);
json design_to_json(const GripperDesignd& design);
ElasticMateriald material_from_json(const json& j);
json material_to_json(const ElasticMateriald& material);

/// Reads the "detector" section when present, else the object itself.
DetectorConfig detector_config_from_json(const json& j);
json detector_config_to_json(const DetectorConfig& config);

CoatingParamsd coating_from_json(const json& j);
RegimeThresholds thresholds_from_json(const json& j);

json event_to_json(const EventRecord& event);
EventRecord event_from_json(const json& j);
json report_to_json(const RegimeReport& report);

/// Recursively rounds every floating-point number to 12 significant digits.
json rounded(json j);

/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace domegrip::io
