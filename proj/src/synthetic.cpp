#include "domegrip/synthetic.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "domegrip/signal.hpp"

namespace domegrip::synth {

using detail::require;

namespace {

struct ArchetypeShape {
  double initial_slope;
  double final_slope;
  double drop;
};

ArchetypeShape nominal_shape(Regime regime) {
  switch (regime) {
    case Regime::DestructiveBuckling: return {1.0, 0.3, 0.45};
    case Regime::ConstructiveBuckling: return {1.0, 0.2, 0.0};
    case Regime::FilmDeformation: return {0.6, 0.0, 0.0};
  }
  return {};
}

double shape_pressure(Regime regime, const ArchetypeShape& shape, double x) {
  switch (regime) {
    case Regime::DestructiveBuckling: {
      const auto softening = [&](double u) { return -shape.initial_slope * (u - 0.3 * u * u); };
      if (x <= kDestructiveDropFraction) return softening(x);
      return (1.0 - shape.drop) * softening(kDestructiveDropFraction) -
             shape.final_slope * (x - kDestructiveDropFraction);
    }
    case Regime::ConstructiveBuckling: {
      if (x <= kConstructiveKneeFraction) return -shape.initial_slope * x;
      return -shape.initial_slope * kConstructiveKneeFraction -
             shape.final_slope * (x - kConstructiveKneeFraction);
    }
    case Regime::FilmDeformation: return -shape.initial_slope * (x - 0.25 * x * x);
  }
  return 0.0;
}

struct MarkerStretch {
  double major;
  double minor;
};

MarkerStretch nominal_stretch(Regime regime) {
  switch (regime) {
    case Regime::DestructiveBuckling: return {1.0, 0.85};
    case Regime::ConstructiveBuckling: return {1.05, 0.70};
    case Regime::FilmDeformation: return {0.96, 0.94};
  }
  return {1.0, 1.0};
}

Eigen::Matrix<double, 3, 4> equator_markers(double radius, double major, double minor) {
  Eigen::Matrix<double, 3, 4> m;
  m.col(0) << major * radius, 0, 0;
  m.col(1) << 0, minor * radius, 0;
  m.col(2) << -major * radius, 0, 0;
  m.col(3) << 0, -minor * radius, 0;
  return m;
}

double pump_volume_ml(double rate_ml_min, Eigen::Index k, double sample_rate_hz) {
  return rate_ml_min / 60.0 * static_cast<double>(k) / sample_rate_hz;
}

constexpr double kReleaseRampSamples = 25.0;

double logistic_step(double samples_past_center, double ramp_samples) {
  // 1% to 99% over ramp_samples
  const double tau = ramp_samples / (2.0 * std::log(99.0));
  return 1.0 / (1.0 + std::exp(-samples_past_center / tau));
}

}  // namespace

double archetype_pressure(Regime regime, double x) {
  return shape_pressure(regime, nominal_shape(regime), x);
}

RegimeArchetype synth_regime_curve(Regime regime, const GripperDesignd& design,
                                   Eigen::Index n_samples, std::uint64_t seed) {
  require(n_samples >= 100, "archetype curves need at least 100 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);

  ArchetypeShape shape = nominal_shape(regime);
  shape.initial_slope *= 1.0 + 0.03 * jitter(rng);
  shape.final_slope *= 1.0 + 0.03 * jitter(rng);
  shape.drop += 0.03 * jitter(rng);

  const double v0 = design_cavity_volume_ml(design);
  const double scale = design.pressure_scale();
  const double rate_ml_s = 70.0 / 60.0;
  std::vector<PVSample> samples(static_cast<std::size_t>(n_samples));
  for (Eigen::Index i = 0; i < n_samples; ++i) {
    const double x = kArchetypeMaxFraction * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const double volume = x * v0;
    samples[static_cast<std::size_t>(i)] = {volume / rate_ml_s, shape_pressure(regime, shape, x) * scale,
                                            volume};
  }

  MarkerStretch stretch = nominal_stretch(regime);
  stretch.major += 0.005 * jitter(rng);
  stretch.minor += 0.005 * jitter(rng);
  const double radius = design.geometry().radius();
  MarkerQuadd markers;
  markers.undeformed = equator_markers(radius, 1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond rotation(normal(rng), normal(rng), normal(rng), normal(rng));
  rotation.normalize();
  const Eigen::Vector3d shift(radius * jitter(rng), radius * jitter(rng), radius * jitter(rng));
  markers.deformed =
      (rotation.toRotationMatrix() * equator_markers(radius, stretch.major, stretch.minor)).colwise() + shift;

  std::optional<double> feature;
  if (regime == Regime::DestructiveBuckling) feature = kDestructiveDropFraction;
  if (regime == Regime::ConstructiveBuckling) feature = kConstructiveKneeFraction;
  return {PVCurve(samples, SweepDirection::Deflation, design), markers, feature};
}

void BoyleSystem::validate() const {
  require(v0_syringe_ml > 0 && v0_tubes_ml > 0 && v0_hemisphere_ml > 0,
          "gas loop volumes must be positive");
  require(p0_abs_pa > 0 && ambient_pa > 0, "gas loop pressures must be positive");
}

double boyle_pressure(const BoyleSystem& system, double syringe_withdrawal_ml, double cavity_change_ml) {
  system.validate();
  const double v0 = system.total_ml();
  const double volume = v0 + syringe_withdrawal_ml - cavity_change_ml;
  require(volume > 0, "gas loop volume must stay positive");
  return system.p0_abs_pa * v0 / volume;
}

PVCurve boyle_loop(const PVCurve& cavity_history, const BoyleSystem& system) {
  system.validate();
  const double v0 = system.total_ml();
  Eigen::VectorXd withdrawal(cavity_history.size());
  for (Eigen::Index i = 0; i < cavity_history.size(); ++i) {
    const double absolute = cavity_history.pressures()[i] + system.ambient_pa;
    require(absolute > 0, "implied absolute pressure is not positive");
    const double cavity_change = cavity_history.volumes_ml()[i];
    require(std::abs(cavity_change) <= system.v0_hemisphere_ml,
            "cavity volume change exceeds the initial cavity volume");
    withdrawal[i] = system.p0_abs_pa * v0 / absolute - v0 + cavity_change;
  }
  return cavity_history.with_volumes(withdrawal);
}

ReferenceCycle synth_reference_cycle(const GripperDesignd& design, const CycleSpec& spec,
                                     double noise_sigma, std::uint64_t seed) {
  require(spec.pump_rate_ml_min > 0 && spec.target_volume_ml > 0 && spec.sample_rate_hz > 0,
          "cycle rates and volumes must be positive");
  require(noise_sigma >= 0, "noise level must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const double v0 = design_cavity_volume_ml(design);
  const double scale = design.pressure_scale();
  const auto steps = static_cast<Eigen::Index>(
      std::floor(spec.target_volume_ml / spec.pump_rate_ml_min * 60.0 * spec.sample_rate_hz + 1e-9));
  require(steps >= 2, "cycle too short for the sample rate");
  const double end_volume = pump_volume_ml(spec.pump_rate_ml_min, steps, spec.sample_rate_hz);
  const double range = std::abs(archetype_pressure(Regime::ConstructiveBuckling, end_volume / v0)) * scale;
  const double sigma = noise_sigma * range;

  std::vector<PVSample> deflation, inflation, clean_deflation, clean_inflation;
  for (Eigen::Index k = 0; k <= steps; ++k) {
    const double volume = pump_volume_ml(spec.pump_rate_ml_min, k, spec.sample_rate_hz);
    const double clean = archetype_pressure(Regime::ConstructiveBuckling, volume / v0) * scale;
    const double time = static_cast<double>(k) / spec.sample_rate_hz;
    deflation.push_back({time, clean + sigma * normal(rng), volume});
    clean_deflation.push_back({time, clean, volume});
  }
  const double start = static_cast<double>(steps + 1) / spec.sample_rate_hz;
  for (Eigen::Index k = 0; k <= steps; ++k) {
    const double volume = end_volume - pump_volume_ml(spec.pump_rate_ml_min, k, spec.sample_rate_hz);
    const double clean = 0.9 * archetype_pressure(Regime::ConstructiveBuckling, volume / v0) * scale;
    const double time = start + static_cast<double>(k) / spec.sample_rate_hz;
    inflation.push_back({time, clean + sigma * normal(rng), volume});
    clean_inflation.push_back({time, clean, volume});
  }
  return {ReferenceSet{PVCurve(deflation, SweepDirection::Deflation, design),
                       PVCurve(inflation, SweepDirection::Inflation, design)},
          ReferenceSet{PVCurve(clean_deflation, SweepDirection::Deflation, design),
                       PVCurve(clean_inflation, SweepDirection::Inflation, design)},
          kConstructiveKneeFraction};
}

TrialScript grasp_script(const CycleSpec& spec, double idle_duration_s) {
  const double sweep_s =
      std::floor(spec.target_volume_ml / spec.pump_rate_ml_min * 60.0 * spec.sample_rate_hz + 1e-9) /
          spec.sample_rate_hz +
      1.0 / spec.sample_rate_hz;
  TrialScript script;
  script.sample_rate_hz = spec.sample_rate_hz;
  script.phases = {{Phase::Deflation, sweep_s, spec.pump_rate_ml_min},
                   {Phase::Idle, idle_duration_s, 0.0},
                   {Phase::Inflation, sweep_s, spec.pump_rate_ml_min}};
  return script;
}

namespace {

struct CurveView {
  Eigen::VectorXd x;
  Eigen::VectorXd p;

  explicit CurveView(const PVCurve& curve) : x(curve.abs_volume_fraction()), p(curve.pressures()) {}
  double at(double xq) const { return interpolate_linear(x.data(), p.data(), x.size(), xq); }
};

/// Maps a trial |dV/V0| to the reference |dV/V0| so that the reference's
/// slope change at `source` appears at `target`.
double warp(double x, double anchor, double source, double target, double end) {
  if (x <= anchor) return x;
  if (x <= target) return anchor + (x - anchor) * (source - anchor) / (target - anchor);
  if (end <= target) return source;
  return source + (x - target) * (end - source) / (end - target);
}

Eigen::Index first_index_at_or_past(const std::vector<double>& xs, double target, bool increasing) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (increasing ? xs[i] >= target : xs[i] <= target) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

}  // namespace

SyntheticTrial synth_grasp_trial(const TrialScript& script, const ReferenceSet& reference) {
  require(script.sample_rate_hz > 0, "sample rate must be positive");
  require(script.noise_sigma >= 0, "noise level must be non-negative");
  for (const auto& phase : script.phases) require(phase.duration_s > 0, "phase durations must be positive");
  for (const auto& injection : script.injections) {
    require(injection.amplitude >= 0, "injection amplitudes must be non-negative");
  }

  std::mt19937_64 rng(script.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double v0 = reference.deflation.initial_volume_ml();
  const double deflation_mean = reference.deflation.pressures().mean();
  const double inflation_mean = reference.inflation.pressures().mean();
  const double sigma = script.noise_sigma * (reference.deflation.pressures().maxCoeff() -
                                             reference.deflation.pressures().minCoeff());
  const CurveView deflation_ref(reference.deflation);
  const CurveView inflation_ref(reference.inflation);
  const double deflation_end = deflation_ref.x.maxCoeff();

  const auto injections_of = [&](EventKind kind) {
    std::vector<Injection> found;
    for (const auto& injection : script.injections) {
      if (injection.kind == kind) found.push_back(injection);
    }
    return found;
  };
  const auto buckling = injections_of(EventKind::Buckling);
  require(buckling.size() <= 1, "at most one buckling injection per trial");
  if (!buckling.empty()) {
    require(script.reference_buckling_fraction.has_value(),
            "buckling injection needs the reference buckling location");
  }

  SyntheticTrial trial;
  double time = 0.0;
  double volume = 0.0;
  double held_pressure = 0.0;
  bool deflated = false;
  for (const ScriptPhase& phase : script.phases) {
    const auto count = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::floor(phase.duration_s * script.sample_rate_hz + 1e-9)));
    PhaseSegment segment{phase.phase, {}};
    std::vector<double> xs(static_cast<std::size_t>(count));
    std::vector<double> volumes(static_cast<std::size_t>(count));
    std::vector<double> times(static_cast<std::size_t>(count));
    for (Eigen::Index k = 0; k < count; ++k) {
      const auto j = static_cast<std::size_t>(k);
      times[j] = time + static_cast<double>(k) / script.sample_rate_hz;
      const double pumped = pump_volume_ml(phase.pump_rate_ml_min, k, script.sample_rate_hz);
      volumes[j] = phase.phase == Phase::Deflation   ? volume + pumped
                   : phase.phase == Phase::Inflation ? volume - pumped
                                                     : volume;
      xs[j] = std::abs(volumes[j]) / v0;
    }
    std::vector<double> clean(static_cast<std::size_t>(count));
    const auto event_at = [&](EventKind kind, Eigen::Index i, double metric) {
      const auto j = static_cast<std::size_t>(i);
      trial.ground_truth.push_back({kind, i, xs[j], times[j], metric});
    };

    switch (phase.phase) {
      case Phase::Deflation: {
        require(!deflated, "one deflation phase per trial script");
        deflated = true;
        std::optional<double> buckle_target;
        if (!buckling.empty()) buckle_target = buckling.front().target;
        double anchor = 0.0;
        for (const auto& contact : injections_of(EventKind::Contact)) anchor = std::max(anchor, contact.target);
        if (buckle_target) {
          require(anchor < *buckle_target && *buckle_target < deflation_end,
                  "buckling injection must lie after every contact and inside the deflation range");
        }
        for (std::size_t j = 0; j < clean.size(); ++j) {
          const double u = buckle_target ? warp(xs[j], anchor, *script.reference_buckling_fraction,
                                                *buckle_target, deflation_end)
                                         : xs[j];
          clean[j] = deflation_ref.at(u);
        }
        for (const auto& contact : injections_of(EventKind::Contact)) {
          const Eigen::Index center = first_index_at_or_past(xs, contact.target, true);
          require(contact.target > xs.front() && center > 0, "contact injection outside the deflation range");
          for (std::size_t j = 0; j < clean.size(); ++j) {
            clean[j] -= contact.amplitude * deflation_mean *
                        logistic_step(static_cast<double>(static_cast<Eigen::Index>(j) - center), contact.width);
          }
          event_at(EventKind::Contact, center, contact.amplitude);
        }
        const std::optional<double> truth =
            buckle_target ? buckle_target : script.reference_buckling_fraction;
        if (truth) {
          const Eigen::Index index = first_index_at_or_past(xs, *truth, true);
          require(index > 0, "buckling location outside the deflation range");
          event_at(EventKind::Buckling, index, 0.0);
        }
        break;
      }
      case Phase::Idle: {
        std::fill(clean.begin(), clean.end(), held_pressure);
        auto spikes = injections_of(EventKind::EnvironmentSpike);
        std::sort(spikes.begin(), spikes.end(),
                  [](const Injection& a, const Injection& b) { return a.target < b.target; });
        for (const auto& spike : spikes) {
          require(spike.target >= 0 && spike.target < phase.duration_s && spike.width > 0,
                  "environment spike outside the idle phase");
          for (std::size_t j = 0; j < clean.size(); ++j) {
            const double z = (times[j] - time - spike.target) / spike.width;
            clean[j] += spike.amplitude * deflation_mean * std::exp(-0.5 * z * z);
          }
          event_at(EventKind::EnvironmentSpike,
                   static_cast<Eigen::Index>(std::lround(spike.target * script.sample_rate_hz)),
                   spike.amplitude);
        }
        break;
      }
      case Phase::Inflation: {
        for (std::size_t j = 0; j < clean.size(); ++j) clean[j] = inflation_ref.at(xs[j]);
        for (const auto& release : injections_of(EventKind::Release)) {
          const Eigen::Index onset = first_index_at_or_past(xs, release.target, false);
          require(release.target < xs.front() && onset > 1, "release injection outside the inflation range");
          require(release.width > 0, "release decay constant must be positive");
          const double rise = std::min(kReleaseRampSamples, static_cast<double>(onset) / 2.0);
          for (std::size_t j = 0; j < clean.size(); ++j) {
            const double i = static_cast<double>(j);
            const double shape = j <= static_cast<std::size_t>(onset)
                                     ? std::min(1.0, i / rise)
                                     : std::exp(-(i - static_cast<double>(onset)) / release.width);
            clean[j] += release.amplitude * inflation_mean * shape;
          }
          event_at(EventKind::Release, onset, release.amplitude);
        }
        break;
      }
    }

    for (std::size_t j = 0; j < clean.size(); ++j) {
      segment.samples.push_back({times[j], clean[j] + sigma * normal(rng), volumes[j]});
    }
    held_pressure = clean.back();
    volume = volumes.back();
    time += static_cast<double>(count) / script.sample_rate_hz;
    trial.segments.push_back(std::move(segment));
  }
  return trial;
}

std::vector<PhasedSample> flatten(const SyntheticTrial& trial) {
  std::vector<PhasedSample> out;
  for (const auto& segment : trial.segments) {
    for (const auto& sample : segment.samples) out.push_back({segment.phase, sample});
  }
  return out;
}

GripperDesignd demo_design() {
  return GripperDesignd(ShellGeometryd(0.025, 0.00125, std::numbers::pi / 2.0, 0.0005),
                        materials::elite_double_32(), materials::ecoflex_00_30(), 0.0096);
}

std::vector<Injection> sample_grasp_injections(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const double contact_at = between(0.04, 0.14);
  const double contact_amplitude = between(0.05, 0.15);
  const double buckling_at = between(0.30, 0.50);
  const double release_at = between(0.10, 0.50);
  const double release_amplitude = between(0.05, 0.15);
  return {{EventKind::Contact, contact_at, contact_amplitude, 10.0},
          {EventKind::Buckling, buckling_at, 0.0, 0.0},
          {EventKind::Release, release_at, release_amplitude, 3.0}};
}

}  // namespace domegrip::synth
