#pragma once

// Seed-deterministic generators for pressure-volume data: regime archetypes,
// the isothermal syringe/tube/cavity gas loop, and grasp trials with known
// injected events.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "domegrip/detector.hpp"
#include "domegrip/pv_data.hpp"
#include "domegrip/regime.hpp"

namespace domegrip::synth {

/// Deepest deflation of the archetype sweeps (84% of V0).
inline constexpr double kArchetypeMaxFraction = 0.84;
/// |dV/V0| of the catastrophic pressure drop in the destructive archetype.
inline constexpr double kDestructiveDropFraction = 0.455;
/// |dV/V0| of the slope change in the constructive archetype.
inline constexpr double kConstructiveKneeFraction = 0.435;

struct RegimeArchetype {
  PVCurve curve;
  MarkerQuadd markers;
  /// Location of the drop (Regime 1) or slope change (Regime 2).
  std::optional<double> feature_volume_fraction;
};

/// Noise-free archetype deflation sweep over |dV/V0| in [0, 0.84], pressures
/// scaled by E h_bar^3 of the design. The seed jitters slopes, marker stretches
/// and a rigid motion applied to the deformed markers.
RegimeArchetype synth_regime_curve(Regime regime, const GripperDesignd& design,
                                   Eigen::Index n_samples, std::uint64_t seed);

/// Normalized archetype pressure (units of E h_bar^3) at |dV/V0| = x with the
/// nominal (unjittered) shape parameters.
double archetype_pressure(Regime regime, double x);

struct BoyleSystem {
  double v0_syringe_ml;
  double v0_tubes_ml;
  double v0_hemisphere_ml;
  double p0_abs_pa;
  double ambient_pa = kStandardAtmospherePa;

  double total_ml() const { return v0_syringe_ml + v0_tubes_ml + v0_hemisphere_ml; }
  void validate() const;
};

/// Absolute system pressure after withdrawing `syringe_withdrawal_ml` while
/// the cavity shrank by `cavity_change_ml`: P0 V0 / (V0 + dV_syr - dV_hem).
double boyle_pressure(const BoyleSystem& system, double syringe_withdrawal_ml,
                      double cavity_change_ml);

/// Forward model of the gas loop. `cavity_history` holds the true cavity
/// record (its volumes are cavity volume changes, its pressures the cavity
/// gauge pressures). Returns the raw record the syringe side would see: same
/// times and pressures, volumes replaced by the syringe withdrawal
///   dV_syr = P0 V0 / P - V0 + dV_hem.
PVCurve boyle_loop(const PVCurve& cavity_history, const BoyleSystem& system);

struct CycleSpec {
  double pump_rate_ml_min = 70.0;
  double target_volume_ml = 25.0;
  double sample_rate_hz = 50.0;
};

struct ReferenceCycle {
  ReferenceSet references;
  /// The same sweeps without noise; grasp trials are generated from these so
  /// that trial and reference carry independent noise.
  ReferenceSet underlying;
  double buckling_volume_fraction;
};

/// Object-free deflation and inflation sweeps of a constructive-buckling
/// gripper, with additive Gaussian noise of `noise_sigma` times the
/// deflation pressure range.
ReferenceCycle synth_reference_cycle(const GripperDesignd& design, const CycleSpec& spec,
                                     double noise_sigma, std::uint64_t seed);

struct ScriptPhase {
  Phase phase;
  double duration_s;
  double pump_rate_ml_min;
};

/// One injected deviation.
///   Contact: logistic step of the contact metric at |dV/V0| = target,
///            ramping over `width` samples, held to the end of deflation.
///   Buckling: moves the reference's slope change to |dV/V0| = target,
///            leaving the curve up to the last contact target unchanged.
///   Release: release metric ramps to `amplitude` over the first 25 samples
///            of inflation, holds, then decays with time constant `width`
///            samples from |dV/V0| = target.
///   EnvironmentSpike: Gaussian pressure pulse of standard deviation `width`
///            seconds centred `target` seconds into the idle phase.
/// Amplitudes are fractions of the mean pressure of the reference sweep the
/// event is measured against (the inflation sweep for Release, the deflation
/// sweep otherwise). Buckling ignores amplitude and width.
struct Injection {
  EventKind kind;
  double target;
  double amplitude;
  double width;
};

struct TrialScript {
  std::vector<ScriptPhase> phases;
  std::vector<Injection> injections;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  double sample_rate_hz = 50.0;
  /// Where the object-free reference buckles; reported as a ground-truth
  /// event and required for Buckling injections.
  std::optional<double> reference_buckling_fraction;
};

struct SyntheticTrial {
  std::vector<PhaseSegment> segments;
  std::vector<EventRecord> ground_truth;
};

/// Standard deflation / idle / inflation script matching a reference cycle.
TrialScript grasp_script(const CycleSpec& spec, double idle_duration_s);

/// Trial = reference (interpolated at the trial's volumes) + injected
/// deviations + seeded Gaussian noise (noise_sigma times the reference
/// deflation pressure range). Ground truth lists every injected event in
/// the order the batch pipeline reports events.
SyntheticTrial synth_grasp_trial(const TrialScript& script, const ReferenceSet& reference);

/// Trial samples in time order, tagged with their phase.
std::vector<PhasedSample> flatten(const SyntheticTrial& trial);

/// Hemispherical gripper used by the demos and the acceptance corpus:
/// R = 25 mm, h = 1.25 mm shell of Elite Double 32 with a 0.5 mm
/// Ecoflex 00-30 film, 9.6 g.
GripperDesignd demo_design();

/// One contact, one buckling and one release injection drawn from the seed:
/// contact at |dV/V0| in [0.04, 0.14] with amplitude in [0.05, 0.15] over a
/// 10-sample ramp; buckling moved to [0.30, 0.50]; release onset at
/// [0.10, 0.50] with amplitude in [0.05, 0.15] and a 3-sample decay.
std::vector<Injection> sample_grasp_injections(std::uint64_t seed);

}  // namespace domegrip::synth
