#include "ecobatch/planner.hpp"

#include <algorithm>
#include <cmath>

namespace ecobatch {

namespace {
constexpr double kEps = 1e-9;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kSignal: return "signal";
    case ViolationKind::kSafeDistance: return "safe_distance";
    case ViolationKind::kEmergencyBraking: return "emergency_braking";
    case ViolationKind::kReversal: return "reversal";
  }
  return "?";
}

ExamineResult examine(const Trajectory& candidate, long entry_tick,
                      long now_tick, double position, double speed,
                      const FrontTrack* front, const SignalPlan& plan,
                      const VehicleParams& params, const TimeGrid& grid) {
  Trajectory aligned = translate(candidate, entry_tick, grid);

  // (a) Signal. Batch candidates always reach the stop line and carry one
  // post-departure tick, so both instants exist.
  const long departure = *aligned.departure_tick();
  long crossing = -1;
  for (long i = 0; i < aligned.size(); ++i) {
    if (aligned.positions()[i] > params.approach_length + kEps) {
      crossing = entry_tick + i;
      break;
    }
  }
  if (phase_at(plan, departure, grid) == Phase::kRed)
    return Violation{ViolationKind::kSignal, departure};
  if (crossing >= 0 && phase_at(plan, crossing, grid) == Phase::kRed)
    return Violation{ViolationKind::kSignal, crossing};

  // (b) Safe distance against the front track, over every covered tick of
  // the candidate span.
  if (front) {
    const double gap = params.vehicle_length + params.min_gap_behind(front->kind);
    const long begin = std::max(entry_tick, front->first_tick);
    const long end = std::min(entry_tick + aligned.size() - 1, front->last_tick());
    for (long t = begin; t <= end; ++t) {
      const double bound = front->at(t) - gap;
      if (aligned.positions()[t - entry_tick] > bound + kEps)
        return Violation{ViolationKind::kSafeDistance, t};
    }
  }

  // (c) Emergency braking bridge on re-plans.
  double bridge_speed = aligned.speed(0);
  if (now_tick > entry_tick) {
    const long next_index = now_tick + 1 - entry_tick;
    if (next_index >= aligned.size())
      return Violation{ViolationKind::kReversal, now_tick};
    const double v_req =
        (aligned.positions()[next_index] - position) / grid.theta;
    if (v_req < params.v_min - kEps)
      return Violation{ViolationKind::kReversal, now_tick};
    if (v_req < speed + params.d_emergency * grid.theta - kEps)
      return Violation{ViolationKind::kEmergencyBraking, now_tick};
    if (v_req > speed + params.a_max * grid.theta + kEps ||
        v_req > params.v_max + kEps)
      return Violation{ViolationKind::kEmergencyBraking, now_tick};
    bridge_speed = v_req;
  }

  return AlignedCandidate{std::move(aligned), bridge_speed, crossing};
}

std::optional<Selection> select_candidate(
    const EcoBatch& batch, long entry_tick, long now_tick, double position,
    double speed, const FrontTrack* front, const SignalPlan& plan,
    const VehicleParams& params, const TimeGrid& grid,
    const std::set<std::size_t>& excluded) {
  for (std::size_t i = 0; i < batch.entries.size(); ++i) {
    if (excluded.count(i)) continue;
    const Trajectory& candidate = batch.entries[i].trajectory;
    if (entry_tick + candidate.size() - 1 > grid.horizon_ticks) continue;
    ExamineResult result = examine(candidate, entry_tick, now_tick, position,
                                   speed, front, plan, params, grid);
    if (auto* ok = std::get_if<AlignedCandidate>(&result))
      return Selection{i, std::move(*ok)};
  }
  return std::nullopt;
}

std::optional<Selection> plan_static(long entry_tick, const EcoBatch& batch,
                                     const FrontTrack* front,
                                     const SignalPlan& plan,
                                     const VehicleParams& params,
                                     const TimeGrid& grid) {
  return select_candidate(batch, entry_tick, entry_tick, 0.0, params.v_entry,
                          front, plan, params, grid);
}

PlanStepOutcome plan_step(long entry_tick, long now_tick, double position,
                          double speed, const EcoBatch& batch,
                          const FrontTrack* front, const SignalPlan& plan,
                          const VehicleParams& params, const TimeGrid& grid,
                          RollingState& state) {
  auto selection = select_candidate(batch, entry_tick, now_tick, position,
                                    speed, front, plan, params, grid);
  if (!selection) return PlanStepOutcome{false, true};

  const auto& positions = selection->aligned.trajectory.positions();
  const long keep = now_tick - entry_tick;  // realized prefix stays
  state.track.resize(positions.size());
  for (long i = keep + 1; i < static_cast<long>(positions.size()); ++i)
    state.track[static_cast<std::size_t>(i)] = positions[i];
  if (keep >= 0 && keep < static_cast<long>(state.track.size()))
    state.track[static_cast<std::size_t>(keep)] = position;
  state.batch_index = selection->batch_index;
  return PlanStepOutcome{true, false};
}

}  // namespace ecobatch
