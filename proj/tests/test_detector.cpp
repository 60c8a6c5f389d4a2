#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "domegrip/detector.hpp"
#include "domegrip/errors.hpp"
#include "domegrip/synthetic.hpp"
#include "fixtures.hpp"

namespace domegrip {
namespace {

using testing::curve_of;
using testing::grid;

constexpr Eigen::Index kSamples = 400;

double reference_pressure(double x) { return -1000.0 * (x + 0.1); }

const Eigen::VectorXd& deflation_grid() {
  static const Eigen::VectorXd g = grid(0.0, 0.84, kSamples);
  return g;
}

const Eigen::VectorXd& inflation_grid() {
  static const Eigen::VectorXd g = grid(0.84, 0.0, kSamples);
  return g;
}

PVCurve reference_deflation() { return curve_of(deflation_grid(), reference_pressure); }
PVCurve reference_inflation() {
  return curve_of(inflation_grid(), reference_pressure, SweepDirection::Inflation);
}

/// Trial pressure = reference + offset(i) * mean reference pressure.
PVCurve offset_trial(const PVCurve& reference, const std::function<double(Eigen::Index)>& offset) {
  const double mean = reference.pressures().mean();
  Eigen::VectorXd p = reference.pressures();
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += offset(i) * mean;
  return reference.with_pressures(p);
}

TEST(DetectContact, IdenticalCurvesGiveNoEvent) {
  const PVCurve ref = reference_deflation();
  EXPECT_FALSE(detect_contact(ref, ref, DetectorConfig{}).has_value());
}

TEST(DetectContact, StepIsFoundNearItsOnset) {
  const PVCurve ref = reference_deflation();
  for (Eigen::Index k : {40, 120, 250, 350}) {
    const PVCurve trial = offset_trial(ref, [k](Eigen::Index i) { return i >= k ? -0.05 : 0.0; });
    const auto event = detect_contact(trial, ref, DetectorConfig{});
    ASSERT_TRUE(event.has_value()) << k;
    EXPECT_EQ(event->kind, EventKind::Contact);
    EXPECT_LE(std::abs(event->sample_index - k), 15) << k;
    EXPECT_NEAR(event->volume_fraction, deflation_grid()[event->sample_index], 1e-12);
    EXPECT_GT(std::abs(event->metric_value), 0.03);
  }
}

TEST(DetectContact, SubThresholdStepIsIgnored) {
  const PVCurve ref = reference_deflation();
  const PVCurve trial = offset_trial(ref, [](Eigen::Index i) { return i >= 100 ? -0.02 : 0.0; });
  EXPECT_FALSE(detect_contact(trial, ref, DetectorConfig{}).has_value());
}

TEST(DetectContact, HigherThresholdNeverDetectsEarlier) {
  const PVCurve ref = reference_deflation();
  const PVCurve trial = offset_trial(ref, [](Eigen::Index i) {
    return i < 100 ? 0.0 : -0.2 * (1.0 - std::exp(-static_cast<double>(i - 100) / 40.0));
  });
  Eigen::Index previous = -1;
  for (double threshold = 0.01; threshold < 0.19; threshold += 0.01) {
    DetectorConfig config;
    config.contact_threshold = threshold;
    const auto event = detect_contact(trial, ref, config);
    ASSERT_TRUE(event.has_value()) << threshold;
    EXPECT_GE(event->sample_index, previous);
    previous = event->sample_index;
  }
}

double knee_pressure(double x, double knee) { return x < knee ? -x : -knee - 0.2 * (x - knee); }

TEST(DetectBuckling, KneeIsLocatedWithinOneStep) {
  for (double knee : {0.30, 0.435, 0.60}) {
    const PVCurve curve = curve_of(deflation_grid(), [knee](double x) { return knee_pressure(x, knee); });
    const auto event = detect_buckling(curve, DetectorConfig{});
    ASSERT_TRUE(event.has_value()) << knee;
    EXPECT_LE(std::abs(event->volume_fraction - knee), 0.84 / (kSamples - 1)) << knee;
    EXPECT_GT(event->metric_value, 0.0);
  }
}

TEST(DetectBuckling, StraightLineGivesNoEvent) {
  const PVCurve curve = curve_of(deflation_grid(), reference_pressure);
  EXPECT_FALSE(detect_buckling(curve, DetectorConfig{}).has_value());
}

TEST(DetectBuckling, KinkInsideVolumeMaskIsIgnored) {
  const PVCurve curve = curve_of(deflation_grid(), [](double x) { return knee_pressure(x, 0.10); });
  EXPECT_FALSE(detect_buckling(curve, DetectorConfig{}).has_value());
  DetectorConfig unmasked;
  unmasked.volume_mask_fraction = 0.0;
  EXPECT_TRUE(detect_buckling(curve, unmasked).has_value());
}

TEST(DetectBuckling, ExplicitThresholdBoundsDetection) {
  const PVCurve curve = curve_of(deflation_grid(), [](double x) { return knee_pressure(x, 0.5); });
  const SlopeChangeSeries changes = slope_changes(curve, DetectorConfig{});
  const double peak = changes.values.cwiseAbs().maxCoeff();
  DetectorConfig config;
  config.buckling_slope_threshold = 0.99 * peak;
  EXPECT_TRUE(detect_buckling(curve, config).has_value());
  config.buckling_slope_threshold = peak;
  EXPECT_FALSE(detect_buckling(curve, config).has_value());
}

TEST(CalibrateBucklingThreshold, ScalesWithNoiseLevel) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::VectorXd noise(kSamples);
  for (auto& v : noise) v = normal(rng);
  const PVCurve clean = reference_deflation();
  const auto noisy = [&](double sigma) { return clean.with_pressures(clean.pressures() + sigma * noise); };
  const double t1 = calibrate_buckling_threshold(noisy(1.0), DetectorConfig{});
  const double t2 = calibrate_buckling_threshold(noisy(2.0), DetectorConfig{});
  EXPECT_NEAR(t2 / t1, 2.0, 1e-9);
  DetectorConfig stricter;
  stricter.buckling_noise_multiplier = 12.0;
  EXPECT_NEAR(calibrate_buckling_threshold(noisy(1.0), stricter) / t1, 2.0, 1e-9);
  EXPECT_GT(calibrate_buckling_threshold(clean, DetectorConfig{}), 0.0);
}

TEST(DetectRelease, IdenticalCurvesGiveNoEvent) {
  const PVCurve ref = reference_inflation();
  EXPECT_FALSE(detect_release(ref, ref, DetectorConfig{}).has_value());
}

TEST(DetectRelease, DecayIsFoundNearItsOnset) {
  const PVCurve ref = reference_inflation();
  for (Eigen::Index k : {60, 150, 300}) {
    const PVCurve trial = offset_trial(ref, [k](Eigen::Index i) {
      return i < k ? 0.1 : 0.1 * std::exp(-static_cast<double>(i - k) / 3.0);
    });
    const auto event = detect_release(trial, ref, DetectorConfig{});
    ASSERT_TRUE(event.has_value()) << k;
    EXPECT_EQ(event->kind, EventKind::Release);
    EXPECT_LE(std::abs(event->sample_index - k), 30) << k;
    EXPECT_LE(event->metric_value, 0.03);
  }
}

TEST(DetectRelease, PersistentDeviationGivesNoEvent) {
  const PVCurve ref = reference_inflation();
  const PVCurve trial = offset_trial(ref, [](Eigen::Index) { return 0.1; });
  EXPECT_FALSE(detect_release(trial, ref, DetectorConfig{}).has_value());
}

std::vector<PVSample> idle_with_pulses(double mean_pressure, const std::vector<std::pair<double, double>>& pulses) {
  std::vector<PVSample> idle;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.02 * i;
    double p = -500.0;
    for (const auto& [centre, amplitude] : pulses) {
      p += amplitude * mean_pressure * std::exp(-0.5 * std::pow((t - centre) / 0.1, 2));
    }
    idle.push_back({10.0 + t, p, 12.0});
  }
  return idle;
}

TEST(DetectEnvironmentSpikes, OneEventPerExcursionAtItsPeak) {
  const PVCurve ref = reference_deflation();
  const double mean = ref.pressures().mean();
  const auto idle = idle_with_pulses(mean, {{1.0, 0.3}, {3.0, 0.15}});
  const auto events = detect_environment_spikes(idle, ref.initial_volume_ml(), ref, DetectorConfig{});
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].kind, EventKind::EnvironmentSpike);
  EXPECT_NEAR(events[0].time_s, 11.0, 0.02 + 1e-9);
  EXPECT_NEAR(events[1].time_s, 13.0, 0.02 + 1e-9);
  EXPECT_GT(std::abs(events[0].metric_value), std::abs(events[1].metric_value));
  EXPECT_TRUE(detect_environment_spikes(idle_with_pulses(mean, {}), ref.initial_volume_ml(), ref,
                                        DetectorConfig{})
                  .empty());
}

TEST(DetectorConfig, RejectsInvalidSettings) {
  const auto invalid = [](auto mutate) {
    DetectorConfig c;
    mutate(c);
    return c;
  };
  EXPECT_NO_THROW(DetectorConfig{}.validate());
  EXPECT_THROW(invalid([](DetectorConfig& c) { c.contact_threshold = 0; }).validate(), DomainError);
  EXPECT_THROW(invalid([](DetectorConfig& c) { c.release_threshold = -1; }).validate(), DomainError);
  EXPECT_THROW(invalid([](DetectorConfig& c) { c.smoothing_window = 0; }).validate(), DomainError);
  EXPECT_THROW(invalid([](DetectorConfig& c) { c.volume_mask_fraction = 1.0; }).validate(), DomainError);
  EXPECT_THROW(invalid([](DetectorConfig& c) { c.buckling_noise_multiplier = 0; }).validate(), DomainError);
  EXPECT_THROW(invalid([](DetectorConfig& c) { c.buckling_slope_threshold = 0.0; }).validate(), DomainError);
}

TEST(EventKindNames, RoundTrip) {
  for (auto kind : {EventKind::Contact, EventKind::Buckling, EventKind::Release, EventKind::EnvironmentSpike}) {
    EXPECT_EQ(parse_event_kind(to_string(kind)), kind);
  }
  for (auto phase : {Phase::Deflation, Phase::Idle, Phase::Inflation}) EXPECT_EQ(parse_phase(to_string(phase)), phase);
  EXPECT_FALSE(parse_event_kind("contact").has_value());
}

struct TrialFixture {
  synth::ReferenceCycle cycle;
  synth::SyntheticTrial trial;
};

TrialFixture grasp(std::uint64_t seed, bool with_spike) {
  const synth::CycleSpec spec;
  const auto design = testing::design();
  TrialFixture f{synth::synth_reference_cycle(design, spec, 0.005, 1000 + seed), {}};
  auto script = synth::grasp_script(spec, 4.0);
  script.noise_sigma = 0.005;
  script.seed = 5000 + seed;
  script.reference_buckling_fraction = f.cycle.buckling_volume_fraction;
  script.injections = synth::sample_grasp_injections(seed);
  if (with_spike) script.injections.push_back({EventKind::EnvironmentSpike, 2.0, 0.5, 0.1});
  f.trial = synth::synth_grasp_trial(script, f.cycle.underlying);
  return f;
}

TEST(DetectTrial, ReportsEventsInPipelineOrder) {
  const auto f = grasp(7, true);
  const auto events = detect_trial(f.trial.segments, f.cycle.references, DetectorConfig{});
  ASSERT_EQ(events.size(), 4u);
  EXPECT_EQ(events[0].kind, EventKind::Contact);
  EXPECT_EQ(events[1].kind, EventKind::Buckling);
  EXPECT_EQ(events[2].kind, EventKind::EnvironmentSpike);
  EXPECT_EQ(events[3].kind, EventKind::Release);
  for (std::size_t i = 1; i < events.size(); ++i) EXPECT_GT(events[i].time_s, events[i - 1].time_s);
  ASSERT_EQ(f.trial.ground_truth.size(), 4u);
  for (std::size_t i = 0; i < events.size(); ++i) EXPECT_EQ(events[i].kind, f.trial.ground_truth[i].kind);
}

TEST(DetectTrial, Deterministic) {
  const auto f = grasp(11, false);
  EXPECT_EQ(detect_trial(f.trial.segments, f.cycle.references, DetectorConfig{}),
            detect_trial(f.trial.segments, f.cycle.references, DetectorConfig{}));
}

}  // namespace
}  // namespace domegrip
