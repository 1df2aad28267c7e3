#pragma once

#include <optional>
#include <vector>

#include "ecobatch/batch.hpp"
#include "ecobatch/core.hpp"
#include "ecobatch/fuel.hpp"

namespace ecobatch {

enum class PlanningMode { kStatic, kRolling };

/// Travel times (in ticks) a vehicle could feasibly have taken: bounded
/// below by the front vehicle's departure (or the kinematic minimum for a
/// leader), bounded above by its own departure (exclusive in plan-once mode,
/// inclusive in rolling mode), minus the kinematically unreachable range
/// [0, t_min) and the travel times that would place the departure inside a
/// red phase.
std::vector<long> feasible_interval(long entry_tick,
                                    std::optional<long> front_departure_tick,
                                    long self_departure_tick, long t_min,
                                    const SignalPlan& plan, int phi,
                                    const TimeGrid& grid, PlanningMode mode);

/// Post-hoc upper bound on a planned trajectory's fuel suboptimality with
/// respect to the batch over the feasible travel-time interval.
struct GapCertificate {
  std::vector<long> feasible_interval;
  bool empty_interval = false;
  double best_batch_fuel = 0.0;  // minimum batch fuel over the interval
  double realized_fuel = 0.0;
  double sup_gap = 0.0;  // |realized - best| / realized; 0 when degenerate
  double inf_gap = 0.0;  // always 0
};

GapCertificate gap_certificate(const Trajectory& realized,
                               const EcoBatch& batch,
                               const std::vector<long>& interval,
                               const VtMicroCoefficients& coeffs);

}  // namespace ecobatch
