#pragma once

// Contact, buckling, release and environment-spike detection from
// pressure-volume data, in batch form and as an incremental stream.
//
// Each detector works on the trial's own samples; the object-free reference
// is interpolated at the trial's |dV/V0| values. Event indices are local to
// the curve (or phase segment) the event was found in.

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "domegrip/pv_data.hpp"

namespace domegrip {

enum class EventKind { Contact, Buckling, Release, EnvironmentSpike };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct EventRecord {
  EventKind kind;
  Eigen::Index sample_index;
  /// |dV/V0| at the event.
  double volume_fraction;
  double time_s;
  double metric_value;

  bool operator==(const EventRecord&) const = default;
};

struct DetectorConfig {
  double contact_threshold = 0.03;
  double release_threshold = 0.03;
  Eigen::Index smoothing_window = 30;
  double volume_mask_fraction = 0.25;
  Eigen::Index slope_fit_window = 30;
  /// Calibrated buckling threshold in units of the slope-change noise level.
  double buckling_noise_multiplier = 6.0;
  /// Calibrated from the reference deflation (or the trial itself) when absent.
  std::optional<double> buckling_slope_threshold;

  void validate() const;
};

/// Object-free sweeps recorded before the live trial.
struct ReferenceSet {
  PVCurve deflation;
  PVCurve inflation;
};

/// Normalized deviation of a trial from the reference,
///   D = sign * (P_ref_norm - P_trial_norm) / mean(P_ref_norm),
/// with sign = +1 for contact and -1 for release.
class DeviationMetric {
 public:
  enum class Orientation { ReferenceMinusTrial, TrialMinusReference };

  DeviationMetric(const PVCurve& reference, Orientation orientation);

  double operator()(double abs_volume_fraction, double trial_normalized_pressure) const;
  Eigen::VectorXd series(const PVCurve& trial) const;

  /// Mean normalized reference pressure over the whole reference sweep.
  double reference_mean() const { return reference_mean_; }

 private:
  Eigen::VectorXd reference_x_;
  Eigen::VectorXd reference_p_;
  double reference_mean_;
  double sign_;
};

/// First sample whose smoothed |D_contact| exceeds the contact threshold.
/// metric_value carries the signed smoothed D.
std::optional<EventRecord> detect_contact(const PVCurve& trial, const PVCurve& reference,
                                          const DetectorConfig& config);

/// Difference between the least-squares slopes of the smoothed normalized
/// pressure (against |dV/V0|) in the windows just after and just before each
/// sample. Only samples whose fit windows see fully formed smoothing windows
/// are evaluated: values[k] belongs to sample first + k.
struct SlopeChangeSeries {
  Eigen::Index first = 0;
  Eigen::VectorXd values;
  Eigen::VectorXd left_slopes;
};

SlopeChangeSeries slope_changes(const PVCurve& curve, const DetectorConfig& config);

/// buckling_noise_multiplier x the standard deviation that sample noise
/// induces in the slope changes along `reference`. The sample noise is the
/// median absolute deviation of second differences of the normalized
/// pressure, propagated through the smoothing and slope fits. Floored at a
/// small fraction of the typical slope so noise-free curves do not trigger
/// on round-off.
double calibrate_buckling_threshold(const PVCurve& reference, const DetectorConfig& config);

/// Copy of `config` with the buckling threshold calibrated on `reference`
/// unless one was given explicitly.
DetectorConfig resolve_config(const DetectorConfig& config, const PVCurve& reference_deflation);

/// Samples with |dV/V0| below volume_mask_fraction * max|dV/V0| are ignored.
/// The first run of slope changes beyond the threshold is located and the
/// event is placed at its peak.
std::optional<EventRecord> detect_buckling(const PVCurve& trial, const DetectorConfig& config);

/// First sample where smoothed D_release has come down below the release
/// threshold (after having reached it) while the least-squares slope of the
/// smoothed metric over the surrounding slope_fit_window samples is negative.
std::optional<EventRecord> detect_release(const PVCurve& inflation_trial,
                                          const PVCurve& inflation_reference,
                                          const DetectorConfig& config);

/// Excursions of the smoothed idle pressure from the idle baseline (mean of
/// the first smoothing_window samples) beyond contact_threshold times the
/// mean reference deflation pressure. One event per excursion, placed at its
/// peak; metric_value is the peak deviation over |mean reference pressure|.
std::vector<EventRecord> detect_environment_spikes(std::span<const PVSample> idle,
                                                   double initial_volume_ml,
                                                   const PVCurve& reference_deflation,
                                                   const DetectorConfig& config);

enum class Phase { Deflation, Idle, Inflation };

std::string_view to_string(Phase phase);
std::optional<Phase> parse_phase(std::string_view name);

struct PhaseSegment {
  Phase phase;
  std::vector<PVSample> samples;
};

/// Batch pipeline over consecutive phase segments: Contact then Buckling for
/// each deflation, spikes for each idle period, Release for each inflation.
std::vector<EventRecord> detect_trial(std::span<const PhaseSegment> segments,
                                      const ReferenceSet& references, const DetectorConfig& config);

struct PhasedSample {
  Phase phase;
  PVSample sample;
};

/// Sequential state machine fed one sample at a time. Events are released
/// as soon as every sample that can influence them has arrived; buckling is
/// decided when its deflation segment closes.
class StreamDetector {
 public:
  StreamDetector(ReferenceSet references, const DetectorConfig& config);

  /// Appends one sample; a change of phase closes the open segment.
  std::vector<EventRecord> push(const PVSample& sample, Phase phase);
  /// Closes the open segment.
  std::vector<EventRecord> finish();

  const DetectorConfig& config() const { return config_; }

 private:
  void close_segment(std::vector<EventRecord>& out);
  void advance(std::vector<EventRecord>& out, bool closing);
  void advance_deflation(std::vector<EventRecord>& out, bool closing);
  void advance_idle(std::vector<EventRecord>& out, bool closing);
  void advance_inflation(std::vector<EventRecord>& out, bool closing);

  ReferenceSet references_;
  DetectorConfig config_;
  DeviationMetric contact_metric_;
  DeviationMetric release_metric_;
  double reference_mean_pressure_pa_;

  std::optional<Phase> phase_;
  std::optional<double> last_time_;
  std::vector<PVSample> segment_;
  std::vector<double> raw_;
  std::vector<double> smoothed_;
  Eigen::Index next_ = 0;

  bool found_ = false;
  bool armed_ = false;
  std::optional<double> baseline_;
  Eigen::Index run_peak_ = -1;
  double run_peak_value_ = 0.0;
};

std::vector<EventRecord> process_stream(std::span<const PhasedSample> samples,
                                        const ReferenceSet& references,
                                        const DetectorConfig& config);

}  // namespace domegrip
