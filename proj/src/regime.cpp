#include "domegrip/regime.hpp"

#include <cmath>
#include <limits>

namespace domegrip {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::DestructiveBuckling: return "Regime1";
    case Regime::ConstructiveBuckling: return "Regime2";
    case Regime::FilmDeformation: return "Regime3";
  }
  return "unknown";
}

Eigen::Index metric_mdc_pair(const Eigen::VectorXd& pressures) {
  detail::require(pressures.size() >= 2, "M_DC needs at least 2 samples");
  Eigen::Index best = -1;
  double best_drop = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < pressures.size(); ++i) {
    if (pressures[i] == 0.0) continue;
    const double drop = std::abs(pressures[i]) - std::abs(pressures[i + 1]);
    if (drop > best_drop) {
      best_drop = drop;
      best = i;
    }
  }
  detail::require(best >= 0, "M_DC undefined: every pressure reading is zero");
  return best;
}

double metric_mdc(const Eigen::VectorXd& pressures) {
  const Eigen::Index i = metric_mdc_pair(pressures);
  if (std::abs(pressures[i + 1]) >= std::abs(pressures[i])) return 0.0;
  return std::abs((pressures[i] - pressures[i + 1]) / pressures[i]);
}

double metric_mdc(const PVCurve& deflation) { return metric_mdc(deflation.pressures()); }

RegimeReport classify_regime(const PVCurve& deflation, const MarkerQuadd& markers,
                             RegimeThresholds thresholds) {
  RegimeReport report{metric_mdc(deflation), std::nullopt, Regime::DestructiveBuckling, thresholds};
  if (report.m_dc > thresholds.mdc) return report;
  report.m_cf = metric_mcf(markers);
  report.regime = *report.m_cf > thresholds.mcf ? Regime::ConstructiveBuckling
                                                 : Regime::FilmDeformation;
  return report;
}

}  // namespace domegrip
