// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "domegrip/buckling.hpp"
#include "domegrip/detector.hpp"
#include "domegrip/fabrication.hpp"
#include "domegrip/pv_data.hpp"
#include "domegrip/regime.hpp"
#include "domegrip/synthetic.hpp"

using namespace domegrip;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kModulus = 1.12485e6;
constexpr double kPoisson = 0.4998;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double log_log_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::ArrayXd lx = x.array().log();
  const Eigen::ArrayXd ly = y.array().log();
  const Eigen::ArrayXd cx = lx - lx.mean();
  return (cx * (ly - ly.mean())).sum() / cx.square().sum();
}

ElasticMateriald rubber(double E, double nu) { return ElasticMateriald(E / (2.0 * (1.0 + nu)), nu, 1070.0); }

Outcome cubic_law() {
  const Eigen::VectorXd h = Eigen::VectorXd::LinSpaced(20, std::log(0.005), std::log(0.1)).array().exp();
  Eigen::VectorXd p(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    p[i] = dome_critical_pressure(ShellGeometryd(1.0, h[i], kHalfPi), rubber(kModulus, kPoisson)).critical_pressure_pa;
  }
  const double slope = log_log_slope(h, p);
  return {std::abs(slope - 3.0) <= 1e-9, fmt("slope %.12f", slope)};
}

Outcome model_identity() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double E = std::exp(std::log(1e3) + unit(rng) * std::log(1e4));
    const double nu = 0.5 * unit(rng);
    const double radius = 1e-3 + unit(rng);
    const double theta = 0.2 + (std::numbers::pi - 0.4) * unit(rng);
    const double h_bar = 1e-3 + 0.19 * unit(rng);
    const ShellGeometryd geometry(radius, h_bar * radius, theta);
    const double dome = dome_critical_pressure(geometry, rubber(E, nu)).critical_pressure_pa;
    const double ring = ring_critical_pressure(E, nu, h_bar / std::sin(theta));
    worst = std::max(worst, std::abs(dome - ring) / ring);
  }
  return {worst <= 1e-12, fmt("max relative difference %.3g over 10000 designs", worst)};
}

Outcome quadratic_reference() {
  const Eigen::VectorXd h = Eigen::VectorXd::LinSpaced(20, std::log(0.005), std::log(0.1)).array().exp();
  Eigen::VectorXd p(h.size());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    p[i] = zoelly_sphere_pressure(kModulus, kPoisson, h[i]);
    const double incompressible = zoelly_sphere_pressure(kModulus, 0.5, h[i]);
    const double expected = 4.0 / 3.0 * kModulus * h[i] * h[i];
    worst = std::max(worst, std::abs(incompressible - expected) / expected);
  }
  const double slope = log_log_slope(h, p);
  return {std::abs(slope - 2.0) <= 1e-9 && worst <= 1e-15,
          fmt("slope %.12f, nu=0.5 deviation from 4/3 E h^2 %.3g", slope, worst)};
}

Outcome regime_closed_loop() {
  const GripperDesignd design = synth::demo_design();
  int correct = 0, located = 0, total = 0;
  double worst_drop = 0.0, worst_knee = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (Regime regime : {Regime::DestructiveBuckling, Regime::ConstructiveBuckling, Regime::FilmDeformation}) {
      ++total;
      const auto archetype = synth::synth_regime_curve(regime, design, 400, seed);
      correct += classify_regime(archetype.curve, archetype.markers).regime == regime;
      const Eigen::VectorXd x = archetype.curve.abs_volume_fraction();
      const double step = x[1] - x[0];
      if (regime == Regime::DestructiveBuckling) {
        const double error = std::abs(x[metric_mdc_pair(archetype.curve.pressures())] - 0.455);
        worst_drop = std::max(worst_drop, error);
        located += error <= step;
      } else if (regime == Regime::ConstructiveBuckling) {
        const auto knee = detect_buckling(archetype.curve, DetectorConfig{});
        const double error = knee ? std::abs(knee->volume_fraction - 0.435) : 1.0;
        worst_knee = std::max(worst_knee, error);
        located += error <= step;
      } else {
        ++located;
      }
    }
  }
  return {correct == total && located == total,
          fmt("%d/%d classified, drop error %.4f, knee error %.4f", correct, total, worst_drop, worst_knee)};
}

Outcome compressibility_invariance() {
  const GripperDesignd design = synth::demo_design();
  const PVCurve history = synth::synth_regime_curve(Regime::ConstructiveBuckling, design, 500, 1).curve;
  const double v_hem = design_cavity_volume_ml(design);
  std::vector<Eigen::VectorXd> corrected;
  double round_trip = 0.0;
  for (double syringe : {50.0, 100.0, 150.0}) {
    const synth::BoyleSystem system{syringe, 4.0, v_hem, kStandardAtmospherePa};
    const PVCurve raw = synth::boyle_loop(history, system);
    corrected.push_back(compressibility_correct(raw, system.total_ml(), system.p0_abs_pa));
    for (Eigen::Index i = 1; i < history.size(); ++i) {
      const double truth = history.volumes_ml()[i];
      round_trip = std::max(round_trip, std::abs(corrected.back()[i] - truth) / std::abs(truth));
    }
  }
  double spread = 0.0;
  for (Eigen::Index i = 1; i < history.size(); ++i) {
    for (std::size_t k = 1; k < corrected.size(); ++k) {
      spread = std::max(spread, std::abs(corrected[k][i] - corrected[0][i]) / std::abs(corrected[0][i]));
    }
  }
  return {spread <= 1e-9 && round_trip <= 1e-9,
          fmt("max pairwise difference %.3g, round-trip error %.3g", spread, round_trip)};
}

struct CorpusTrial {
  synth::ReferenceCycle cycle;
  synth::SyntheticTrial trial;
  bool object_free;
};

std::vector<CorpusTrial> corpus() {
  const GripperDesignd design = synth::demo_design();
  const synth::CycleSpec spec;
  std::vector<CorpusTrial> trials;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto cycle = synth::synth_reference_cycle(design, spec, 0.005, 1000 + s);
    for (bool object_free : {false, true}) {
      auto script = synth::grasp_script(spec, 4.0);
      script.noise_sigma = 0.005;
      script.seed = (object_free ? 9000 : 5000) + s;
      script.reference_buckling_fraction = cycle.buckling_volume_fraction;
      if (!object_free) script.injections = synth::sample_grasp_injections(s);
      auto trial = synth::synth_grasp_trial(script, cycle.underlying);
      trials.push_back({cycle, std::move(trial), object_free});
    }
  }
  return trials;
}

Outcome detection_suite() {
  int hits[3] = {}, injected[3] = {};
  double worst[3] = {};
  int false_events = 0, intrinsic = 0, free_trials = 0;
  for (const CorpusTrial& c : corpus()) {
    const auto events = detect_trial(c.trial.segments, c.cycle.references, DetectorConfig{});
    std::vector<bool> matched(events.size(), false);
    for (const EventRecord& truth : c.trial.ground_truth) {
      const int k = static_cast<int>(truth.kind);
      if (!c.object_free) ++injected[k];
      for (std::size_t e = 0; e < events.size(); ++e) {
        if (matched[e] || events[e].kind != truth.kind) continue;
        const double error = std::abs(events[e].volume_fraction - truth.volume_fraction);
        if (error > 0.01) continue;
        matched[e] = true;
        if (c.object_free) {
          ++intrinsic;
        } else {
          ++hits[k];
          worst[k] = std::max(worst[k], error);
        }
        break;
      }
    }
    if (c.object_free) {
      ++free_trials;
      for (bool m : matched) false_events += !m;
    }
  }
  bool pass = false_events == 0;
  std::string detail;
  const char* names[3] = {"contact", "buckling", "release"};
  for (int k = 0; k < 3; ++k) {
    const double recall = static_cast<double>(hits[k]) / injected[k];
    pass = pass && recall >= 0.95;
    detail += fmt("%s %d/%d (max error %.4f), ", names[k], hits[k], injected[k], worst[k]);
  }
  detail += fmt("object-free: %d events beyond the gripper's own buckling (located in %d/%d)", false_events,
                intrinsic, free_trials);
  return {pass, detail};
}

Outcome batch_stream_equivalence() {
  int equal = 0, total = 0;
  for (const CorpusTrial& c : corpus()) {
    ++total;
    const auto batch = detect_trial(c.trial.segments, c.cycle.references, DetectorConfig{});
    equal += process_stream(synth::flatten(c.trial), c.cycle.references, DetectorConfig{}) == batch;
  }
  return {equal == total, fmt("%d/%d trials identical", equal, total)};
}

Outcome payload_ratio() {
  const GripperDesignd design = synth::demo_design();
  const auto trace = [](double scale) {
    std::vector<ForceSample> samples;
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.01 * i;
      samples.push_back({t, scale * 1.102 * std::sin(std::numbers::pi * t)});
    }
    return ForceTrace(samples);
  };
  const double ratio = max_payload_ratio(trace(1.0), design);
  const bool linear = max_payload_ratio(trace(2.0), design) == 2.0 * ratio;
  const bool zero = max_payload_ratio(trace(0.0), design) == 0.0;
  return {std::abs(ratio - 11.70) <= 0.01 && linear && zero,
          fmt("ratio %.4f, doubling exact %s, zero force exact %s", ratio, linear ? "yes" : "no", zero ? "yes" : "no")};
}

Outcome fabrication_model() {
  const double K = cure_kernel(CoatingParamsd{});
  const double oracle = 153.7781329582757;
  const double error = std::abs(K - oracle) / oracle;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int monotone = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    CoatingParamsd p;
    p.initial_viscosity_pa_s = 0.5 + 20 * unit(rng);
    p.density_kg_m3 = 900 + 400 * unit(rng);
    p.alpha = 1.5 + 8 * unit(rng);
    p.beta = 1e-4 + 1e-2 * unit(rng);
    p.cure_time_s = 100 + 900 * unit(rng);
    p.wait_time_s = p.cure_time_s * unit(rng);
    const double r0 = 0.005 + 0.05 * unit(rng);
    const double phi = kHalfPi * unit(rng);
    const Eigen::VectorXd layers = layer_profile(8, r0, phi, p);
    bool ok = true;
    double previous = 0.0;
    for (Eigen::Index n = 1; n <= 8; ++n) {
      const double total = stack_thickness(n, r0, phi, p);
      ok = ok && total > previous && (n == 1 || layers[n - 1] >= layers[n - 2]);
      previous = total;
    }
    monotone += ok;
  }
  return {error <= 1e-9 && monotone == 1000,
          fmt("K = %.10f s (relative error %.3g), monotone in %d/1000 parameter sets", K, error, monotone)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
    double time_limit_s;
  };
  const std::vector<Criterion> criteria{
      {1, "cubic law", cubic_law, 1.0},
      {2, "model identity", model_identity, 0.0},
      {3, "quadratic reference", quadratic_reference, 0.0},
      {4, "regime closed loop", regime_closed_loop, 1.0},
      {5, "compressibility invariance", compressibility_invariance, 0.0},
      {6, "detection suite", detection_suite, 30.0},
      {7, "batch/stream equivalence", batch_stream_equivalence, 0.0},
      {8, "payload ratio", payload_ratio, 0.0},
      {9, "fabrication model", fabrication_model, 0.0},
  };
  int failures = 0;
  const auto suite_start = std::chrono::steady_clock::now();
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && elapsed >= c.time_limit_s) {
      outcome.pass = false;
      outcome.detail += fmt(", exceeded %.0f s limit", c.time_limit_s);
    }
    failures += !outcome.pass;
    std::printf("%s criterion %d (%s): %s [%.3f s]\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), elapsed);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
  std::printf("%d/%zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failures, criteria.size(),
              total);
  return failures == 0 ? 0 : 1;
}
