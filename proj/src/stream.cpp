#include <cmath>

#include "detector_detail.hpp"
#include "domegrip/detector.hpp"
#include "domegrip/signal.hpp"

namespace domegrip {

StreamDetector::StreamDetector(ReferenceSet references, const DetectorConfig& config)
    : references_(std::move(references)),
      config_(resolve_config(config, references_.deflation)),
      contact_metric_(references_.deflation, DeviationMetric::Orientation::ReferenceMinusTrial),
      release_metric_(references_.inflation, DeviationMetric::Orientation::TrialMinusReference),
      reference_mean_pressure_pa_(references_.deflation.pressures().mean()) {
  detail::require(reference_mean_pressure_pa_ != 0.0, "mean reference pressure is zero");
}

std::vector<EventRecord> StreamDetector::push(const PVSample& sample, Phase phase) {
  detail::require(std::isfinite(sample.time_s) && std::isfinite(sample.gauge_pressure_pa) &&
                      std::isfinite(sample.syringe_volume_ml),
                  "stream samples must be finite");
  detail::require(!last_time_ || sample.time_s > *last_time_, "stream sample out of time order");
  last_time_ = sample.time_s;

  std::vector<EventRecord> out;
  if (phase_ && *phase_ != phase) close_segment(out);
  if (!phase_) {
    phase_ = phase;
    segment_.clear();
    raw_.clear();
    smoothed_.clear();
    next_ = 0;
    found_ = false;
    armed_ = false;
    baseline_.reset();
    run_peak_ = -1;
    run_peak_value_ = 0.0;
  }

  segment_.push_back(sample);
  const double v0 = references_.deflation.initial_volume_ml();
  const double scale = references_.deflation.design().pressure_scale();
  const double abs_x = std::abs(sample.syringe_volume_ml) / v0;
  switch (phase) {
    case Phase::Deflation: raw_.push_back(contact_metric_(abs_x, sample.gauge_pressure_pa / scale)); break;
    case Phase::Inflation: raw_.push_back(release_metric_(abs_x, sample.gauge_pressure_pa / scale)); break;
    case Phase::Idle: raw_.push_back(sample.gauge_pressure_pa); break;
  }
  advance(out, false);
  return out;
}

std::vector<EventRecord> StreamDetector::finish() {
  std::vector<EventRecord> out;
  close_segment(out);
  return out;
}

void StreamDetector::close_segment(std::vector<EventRecord>& out) {
  if (!phase_) return;
  advance(out, true);
  phase_.reset();
}

void StreamDetector::advance(std::vector<EventRecord>& out, bool closing) {
  switch (*phase_) {
    case Phase::Deflation: advance_deflation(out, closing); break;
    case Phase::Idle: advance_idle(out, closing); break;
    case Phase::Inflation: advance_inflation(out, closing); break;
  }
}

void StreamDetector::advance_deflation(std::vector<EventRecord>& out, bool closing) {
  const auto n = static_cast<Eigen::Index>(raw_.size());
  const WindowExtent extent(config_.smoothing_window);
  const double v0 = references_.deflation.initial_volume_ml();
  while (!found_ && next_ < n && (closing || next_ + extent.ahead <= n - 1)) {
    const double d = window_mean_at(raw_.data(), n, next_, extent);
    if (std::abs(d) > config_.contact_threshold) {
      out.push_back(detail::make_event(EventKind::Contact, next_,
                                       segment_[static_cast<std::size_t>(next_)], v0, d));
      found_ = true;
    }
    ++next_;
  }
  if (closing) {
    // The mask depends on the deepest deflation reached, known only once the segment ends.
    const PVCurve curve(segment_, SweepDirection::Deflation, references_.deflation.design(), v0);
    if (auto buckling = detect_buckling(curve, config_)) out.push_back(*buckling);
  }
}

void StreamDetector::advance_inflation(std::vector<EventRecord>& out, bool closing) {
  const auto n = static_cast<Eigen::Index>(raw_.size());
  const WindowExtent smoothing(config_.smoothing_window);
  const WindowExtent slope(config_.slope_fit_window);
  while (static_cast<Eigen::Index>(smoothed_.size()) < n &&
         (closing || static_cast<Eigen::Index>(smoothed_.size()) + smoothing.ahead <= n - 1)) {
    smoothed_.push_back(
        window_mean_at(raw_.data(), n, static_cast<Eigen::Index>(smoothed_.size()), smoothing));
  }
  const auto available = static_cast<Eigen::Index>(smoothed_.size());
  detail::ReleaseTracker tracker{config_.release_threshold, armed_};
  while (!found_ && next_ < available && (closing || next_ + slope.ahead <= available - 1)) {
    const double s = detail::release_slope_at(smoothed_.data(), available, next_, slope);
    if (tracker.feed(smoothed_[static_cast<std::size_t>(next_)], s)) {
      out.push_back(detail::make_event(EventKind::Release, next_,
                                       segment_[static_cast<std::size_t>(next_)],
                                       references_.deflation.initial_volume_ml(),
                                       smoothed_[static_cast<std::size_t>(next_)]));
      found_ = true;
    }
    ++next_;
  }
  armed_ = tracker.armed;
}

void StreamDetector::advance_idle(std::vector<EventRecord>& out, bool closing) {
  const auto n = static_cast<Eigen::Index>(raw_.size());
  if (!baseline_ && (n >= config_.smoothing_window || (closing && n > 0))) {
    baseline_ = detail::leading_mean(raw_.data(), std::min(n, config_.smoothing_window));
  }
  if (!baseline_) return;

  const WindowExtent extent(config_.smoothing_window);
  const double v0 = references_.deflation.initial_volume_ml();
  detail::ExcursionTracker tracker{config_.contact_threshold, run_peak_, run_peak_value_};
  const auto emit = [&](const detail::Excursion& e) {
    out.push_back(detail::make_event(EventKind::EnvironmentSpike, e.peak,
                                     segment_[static_cast<std::size_t>(e.peak)], v0, e.value));
  };
  while (next_ < n && (closing || next_ + extent.ahead <= n - 1)) {
    const double smoothed = window_mean_at(raw_.data(), n, next_, extent);
    if (auto done = tracker.feed(next_, detail::spike_magnitude(smoothed, *baseline_,
                                                                reference_mean_pressure_pa_))) {
      emit(*done);
    }
    ++next_;
  }
  if (closing) {
    if (auto done = tracker.close()) emit(*done);
  }
  run_peak_ = tracker.peak;
  run_peak_value_ = tracker.peak_value;
}

std::vector<EventRecord> process_stream(std::span<const PhasedSample> samples,
                                        const ReferenceSet& references,
                                        const DetectorConfig& config) {
  StreamDetector detector(references, config);
  std::vector<EventRecord> events;
  for (const auto& item : samples) {
    auto found = detector.push(item.sample, item.phase);
    events.insert(events.end(), found.begin(), found.end());
  }
  auto rest = detector.finish();
  events.insert(events.end(), rest.begin(), rest.end());
  return events;
}

}  // namespace domegrip
