#include "ecobatch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecobatch {

std::vector<long> feasible_interval(long entry_tick,
                                    std::optional<long> front_departure_tick,
                                    long self_departure_tick, long t_min,
                                    const SignalPlan& plan, int phi,
                                    const TimeGrid& grid, PlanningMode mode) {
  long lo = t_min;
  if (front_departure_tick)
    lo = std::max(lo, *front_departure_tick - entry_tick + 1);
  long hi = self_departure_tick - entry_tick;
  if (mode == PlanningMode::kStatic) hi -= 1;

  const auto reds = red_intervals(plan, phi, grid);
  std::vector<long> out;
  for (long xi = lo; xi <= hi; ++xi) {
    const long departure = entry_tick + xi;
    bool excluded = false;
    for (const auto& red : reds) {
      if (departure >= red.begin && departure < red.end) {
        excluded = true;
        break;
      }
    }
    if (!excluded) out.push_back(xi);
  }
  return out;
}

GapCertificate gap_certificate(const Trajectory& realized,
                               const EcoBatch& batch,
                               const std::vector<long>& interval,
                               const VtMicroCoefficients& coeffs) {
  GapCertificate cert;
  cert.feasible_interval = interval;
  cert.realized_fuel = trajectory_fuel(realized, coeffs);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& entry : batch.entries) {
    if (std::find(interval.begin(), interval.end(), entry.travel_ticks) !=
        interval.end())
      best = std::min(best, entry.fuel);
  }
  if (!std::isfinite(best)) {
    cert.empty_interval = true;
    cert.best_batch_fuel = cert.realized_fuel;
    cert.sup_gap = 0.0;
    return cert;
  }
  cert.best_batch_fuel = best;
  cert.sup_gap = cert.realized_fuel > 0.0
                     ? std::abs(cert.realized_fuel - best) / cert.realized_fuel
                     : 0.0;
  return cert;
}

}  // namespace ecobatch
