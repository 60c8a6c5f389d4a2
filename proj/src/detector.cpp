#include "domegrip/detector.hpp"

#include <cmath>
#include <limits>

#include "detector_detail.hpp"
#include "domegrip/signal.hpp"

namespace domegrip {

using detail::require;

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Contact: return "Contact";
    case EventKind::Buckling: return "Buckling";
    case EventKind::Release: return "Release";
    case EventKind::EnvironmentSpike: return "EnvironmentSpike";
  }
  return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (auto kind : {EventKind::Contact, EventKind::Buckling, EventKind::Release,
                    EventKind::EnvironmentSpike}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Deflation: return "deflation";
    case Phase::Idle: return "idle";
    case Phase::Inflation: return "inflation";
  }
  return "unknown";
}

std::optional<Phase> parse_phase(std::string_view name) {
  for (auto phase : {Phase::Deflation, Phase::Idle, Phase::Inflation}) {
    if (to_string(phase) == name) return phase;
  }
  return std::nullopt;
}

void DetectorConfig::validate() const {
  require(contact_threshold > 0 && release_threshold > 0, "detector thresholds must be positive");
  require(smoothing_window >= 1 && slope_fit_window >= 1, "detector windows must be at least 1");
  require(volume_mask_fraction >= 0 && volume_mask_fraction < 1,
          "volume mask fraction must lie in [0, 1)");
  require(buckling_noise_multiplier > 0, "buckling noise multiplier must be positive");
  if (buckling_slope_threshold) {
    require(*buckling_slope_threshold > 0, "buckling slope threshold must be positive");
  }
}

DeviationMetric::DeviationMetric(const PVCurve& reference, Orientation orientation)
    : reference_x_(reference.abs_volume_fraction()),
      reference_p_(normalize_pressure(reference)),
      reference_mean_(reference_p_.mean()),
      sign_(orientation == Orientation::ReferenceMinusTrial ? 1.0 : -1.0) {
  require(reference_mean_ != 0.0, "mean normalized reference pressure is zero");
  for (Eigen::Index i = 1; i < reference_x_.size(); ++i) {
    require(reference.direction() == SweepDirection::Deflation
                ? reference_x_[i] > reference_x_[i - 1]
                : reference_x_[i] < reference_x_[i - 1],
            "reference volume fraction must be strictly monotone");
  }
}

double DeviationMetric::operator()(double abs_volume_fraction, double trial_normalized_pressure) const {
  const double reference = interpolate_linear(reference_x_.data(), reference_p_.data(),
                                              reference_x_.size(), abs_volume_fraction);
  return sign_ * (reference - trial_normalized_pressure) / reference_mean_;
}

Eigen::VectorXd DeviationMetric::series(const PVCurve& trial) const {
  const Eigen::VectorXd x = trial.abs_volume_fraction();
  const Eigen::VectorXd p = normalize_pressure(trial);
  Eigen::VectorXd d(trial.size());
  for (Eigen::Index i = 0; i < trial.size(); ++i) d[i] = (*this)(x[i], p[i]);
  return d;
}

std::optional<EventRecord> detect_contact(const PVCurve& trial, const PVCurve& reference,
                                          const DetectorConfig& config) {
  config.validate();
  const DeviationMetric metric(reference, DeviationMetric::Orientation::ReferenceMinusTrial);
  const Eigen::VectorXd raw = metric.series(trial);
  const WindowExtent extent(config.smoothing_window);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double d = window_mean_at(raw.data(), raw.size(), i, extent);
    if (std::abs(d) > config.contact_threshold) {
      return detail::make_event(EventKind::Contact, i, trial.sample(i), trial.initial_volume_ml(), d);
    }
  }
  return std::nullopt;
}

SlopeChangeSeries slope_changes(const PVCurve& curve, const DetectorConfig& config) {
  config.validate();
  const Eigen::Index w = config.slope_fit_window;
  require(w >= 2, "slope fit window must be at least 2");
  require(curve.size() >= 2 * w, "curve is shorter than twice the slope fit window");
  const WindowExtent smoothing(config.smoothing_window);
  const Eigen::VectorXd x = curve.abs_volume_fraction();
  const Eigen::VectorXd smoothed = central_moving_mean(normalize_pressure(curve), config.smoothing_window);

  const Eigen::Index n = curve.size();
  const Eigen::Index first = w - 1 + smoothing.behind;
  const Eigen::Index last = n - w - smoothing.ahead;
  SlopeChangeSeries out;
  out.first = first;
  const Eigen::Index count = std::max<Eigen::Index>(0, last - first + 1);
  out.values.resize(count);
  out.left_slopes.resize(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Eigen::Index i = first + k;
    const double left = least_squares_slope(x.data(), smoothed.data(), i - w + 1, i);
    const double right = least_squares_slope(x.data(), smoothed.data(), i, i + w - 1);
    out.values[k] = right - left;
    out.left_slopes[k] = left;
  }
  return out;
}

namespace {

// Euclidean norm of the weights mapping raw samples to the slope change at i.
double slope_change_gain(const Eigen::VectorXd& x, Eigen::Index i, Eigen::Index w, const WindowExtent& smoothing) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
  const auto add_fit = [&](Eigen::Index lo, Eigen::Index hi, double sign) {
    const auto span = x.segment(lo, hi - lo + 1);
    const double mean = span.mean();
    const double sxx = (span.array() - mean).square().sum();
    for (Eigen::Index k = lo; k <= hi; ++k) {
      const double a = sign * (x[k] - mean) / sxx;
      const Eigen::Index b = std::max<Eigen::Index>(0, k - smoothing.behind);
      const Eigen::Index t = std::min(n - 1, k + smoothing.ahead);
      weights.segment(b, t - b + 1).array() += a / static_cast<double>(t - b + 1);
    }
  };
  add_fit(i, i + w - 1, 1.0);
  add_fit(i - w + 1, i, -1.0);
  return weights.norm();
}

}  // namespace

double calibrate_buckling_threshold(const PVCurve& reference, const DetectorConfig& config) {
  const SlopeChangeSeries changes = slope_changes(reference, config);
  require(changes.values.size() > 0, "reference curve too short to calibrate the buckling threshold");
  const Eigen::VectorXd p = normalize_pressure(reference);
  std::vector<double> curvature(static_cast<std::size_t>(p.size() - 2));
  for (std::size_t k = 0; k < curvature.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k) + 1;
    curvature[k] = p[i + 1] - 2.0 * p[i] + p[i - 1];
  }
  // MAD of a Gaussian is 0.6745 sigma; a second difference has variance 6 sigma^2
  const double sample_noise = median_absolute_deviation(curvature) / (0.6744897501960817 * std::sqrt(6.0));
  const Eigen::Index mid = changes.first + changes.values.size() / 2;
  const double spread = sample_noise * slope_change_gain(reference.abs_volume_fraction(), mid,
                                                         config.slope_fit_window,
                                                         WindowExtent(config.smoothing_window));
  std::vector<double> slopes(static_cast<std::size_t>(changes.left_slopes.size()));
  for (std::size_t k = 0; k < slopes.size(); ++k) {
    slopes[k] = std::abs(changes.left_slopes[static_cast<Eigen::Index>(k)]);
  }
  const double floor = std::max(1e-6 * median(slopes), 1e-12);
  return std::max(config.buckling_noise_multiplier * spread, floor);
}

DetectorConfig resolve_config(const DetectorConfig& config, const PVCurve& reference_deflation) {
  DetectorConfig resolved = config;
  if (!resolved.buckling_slope_threshold) {
    resolved.buckling_slope_threshold = calibrate_buckling_threshold(reference_deflation, config);
  }
  return resolved;
}

std::optional<EventRecord> detect_buckling(const PVCurve& trial, const DetectorConfig& config) {
  const SlopeChangeSeries changes = slope_changes(trial, config);
  const double threshold = config.buckling_slope_threshold
                               ? *config.buckling_slope_threshold
                               : calibrate_buckling_threshold(trial, config);
  const Eigen::VectorXd x = trial.abs_volume_fraction();
  const double mask_limit = config.volume_mask_fraction * x.maxCoeff();

  Eigen::Index peak = -1;
  for (Eigen::Index k = 0; k < changes.values.size(); ++k) {
    const Eigen::Index i = changes.first + k;
    if (x[i] < mask_limit) continue;
    const double magnitude = std::abs(changes.values[k]);
    if (magnitude > threshold) {
      if (peak < 0 || magnitude > std::abs(changes.values[peak - changes.first])) peak = i;
    } else if (peak >= 0) {
      break;
    }
  }
  if (peak < 0) return std::nullopt;
  return detail::make_event(EventKind::Buckling, peak, trial.sample(peak), trial.initial_volume_ml(),
                            changes.values[peak - changes.first]);
}

std::optional<EventRecord> detect_release(const PVCurve& inflation_trial,
                                          const PVCurve& inflation_reference,
                                          const DetectorConfig& config) {
  config.validate();
  const DeviationMetric metric(inflation_reference, DeviationMetric::Orientation::TrialMinusReference);
  const Eigen::VectorXd smoothed =
      central_moving_mean(metric.series(inflation_trial), config.smoothing_window);
  const WindowExtent slope_extent(config.slope_fit_window);
  detail::ReleaseTracker tracker{config.release_threshold};
  for (Eigen::Index i = 0; i < smoothed.size(); ++i) {
    const double slope = detail::release_slope_at(smoothed.data(), smoothed.size(), i, slope_extent);
    if (tracker.feed(smoothed[i], slope)) {
      return detail::make_event(EventKind::Release, i, inflation_trial.sample(i),
                                inflation_trial.initial_volume_ml(), smoothed[i]);
    }
  }
  return std::nullopt;
}

std::vector<EventRecord> detect_environment_spikes(std::span<const PVSample> idle,
                                                   double initial_volume_ml,
                                                   const PVCurve& reference_deflation,
                                                   const DetectorConfig& config) {
  config.validate();
  std::vector<EventRecord> events;
  if (idle.empty()) return events;
  const double reference_mean = reference_deflation.pressures().mean();
  require(reference_mean != 0.0, "mean reference pressure is zero");

  const auto n = static_cast<Eigen::Index>(idle.size());
  Eigen::VectorXd pressure(n);
  for (Eigen::Index i = 0; i < n; ++i) pressure[i] = idle[static_cast<std::size_t>(i)].gauge_pressure_pa;
  const Eigen::Index baseline_count = std::min(n, config.smoothing_window);
  const double baseline = detail::leading_mean(pressure.data(), baseline_count);

  const WindowExtent extent(config.smoothing_window);
  detail::ExcursionTracker tracker{config.contact_threshold};
  const auto emit = [&](const detail::Excursion& e) {
    events.push_back(detail::make_event(EventKind::EnvironmentSpike, e.peak,
                                        idle[static_cast<std::size_t>(e.peak)], initial_volume_ml,
                                        e.value));
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const double smoothed = window_mean_at(pressure.data(), n, i, extent);
    if (auto done = tracker.feed(i, detail::spike_magnitude(smoothed, baseline, reference_mean))) emit(*done);
  }
  if (auto done = tracker.close()) emit(*done);
  return events;
}

std::vector<EventRecord> detect_trial(std::span<const PhaseSegment> segments,
                                      const ReferenceSet& references, const DetectorConfig& config) {
  const DetectorConfig resolved = resolve_config(config, references.deflation);
  const GripperDesignd& design = references.deflation.design();
  const double v0 = references.deflation.initial_volume_ml();
  std::vector<EventRecord> events;
  for (const PhaseSegment& segment : segments) {
    switch (segment.phase) {
      case Phase::Deflation: {
        const PVCurve curve(segment.samples, SweepDirection::Deflation, design, v0);
        if (auto contact = detect_contact(curve, references.deflation, resolved)) events.push_back(*contact);
        if (auto buckling = detect_buckling(curve, resolved)) events.push_back(*buckling);
        break;
      }
      case Phase::Idle: {
        auto spikes = detect_environment_spikes(segment.samples, v0, references.deflation, resolved);
        events.insert(events.end(), spikes.begin(), spikes.end());
        break;
      }
      case Phase::Inflation: {
        const PVCurve curve(segment.samples, SweepDirection::Inflation, design, v0);
        if (auto release = detect_release(curve, references.inflation, resolved)) events.push_back(*release);
        break;
      }
    }
  }
  return events;
}

}  // namespace domegrip
