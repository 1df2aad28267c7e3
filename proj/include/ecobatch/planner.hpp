#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "ecobatch/batch.hpp"
#include "ecobatch/core.hpp"

namespace ecobatch {

/// Re-planning cadence: empty update interval means plan once at entry.
struct PlannerConfig {
  std::optional<long> update_ticks;

  bool rolling() const { return update_ticks.has_value(); }
};

/// Position track of the immediately preceding vehicle, covering realized
/// history from its entry plus the predicted (HDV) or planned (CAV) future.
struct FrontTrack {
  long first_tick = 0;
  std::vector<double> positions;
  VehicleKind kind = VehicleKind::kHdv;

  long last_tick() const {
    return first_tick + static_cast<long>(positions.size()) - 1;
  }
  bool covers(long tick) const {
    return tick >= first_tick && tick <= last_tick();
  }
  double at(long tick) const {
    return positions[static_cast<std::size_t>(tick - first_tick)];
  }
};

enum class ViolationKind { kSignal, kSafeDistance, kEmergencyBraking, kReversal };

struct Violation {
  ViolationKind kind = ViolationKind::kSignal;
  long tick = 0;  // first violating tick
};

const char* to_string(ViolationKind kind);

struct AlignedCandidate {
  Trajectory trajectory;     // candidate translated to the entry tick
  double bridge_speed = 0;   // speed over [now, now + theta) converging onto it
  long crossing_tick = 0;    // first tick strictly past the stop line
};

using ExamineResult = std::variant<AlignedCandidate, Violation>;

/// Feasibility check of one batch candidate for a vehicle with entry tick
/// `entry_tick`, examined at `now_tick` from live state (position, speed):
///   (a) signal: neither the departure tick (position reaches the stop line)
///       nor the crossing tick (position strictly past it) may fall in red;
///   (b) safe distance: at every covered tick the candidate must stay at
///       least vehicle_length + minimum gap behind the front track;
///   (c) emergency braking (re-plans only): the one-tick bridge speed
///       necessary to converge onto the candidate must be reachable within
///       [d_emergency, a_max] and [v_min, v_max].
/// Throws HorizonOverflowError when the translated candidate leaves the grid.
ExamineResult examine(const Trajectory& candidate, long entry_tick,
                      long now_tick, double position, double speed,
                      const FrontTrack* front, const SignalPlan& plan,
                      const VehicleParams& params, const TimeGrid& grid);

struct Selection {
  std::size_t batch_index = 0;
  AlignedCandidate aligned;
};

/// First batch entry (in fuel-ascending order) passing examine; candidates
/// that do not fit the horizon or appear in `excluded` are skipped.
std::optional<Selection> select_candidate(
    const EcoBatch& batch, long entry_tick, long now_tick, double position,
    double speed, const FrontTrack* front, const SignalPlan& plan,
    const VehicleParams& params, const TimeGrid& grid,
    const std::set<std::size_t>& excluded = {});

/// Plan-once entry point: selects at the entry tick from the entry state.
/// The resulting trajectory is final for the vehicle.
std::optional<Selection> plan_static(long entry_tick, const EcoBatch& batch,
                                     const FrontTrack* front,
                                     const SignalPlan& plan,
                                     const VehicleParams& params,
                                     const TimeGrid& grid);

/// Rolling planner state: the positions the vehicle is currently tracking,
/// indexed from its entry tick.
struct RollingState {
  std::optional<std::size_t> batch_index;
  std::vector<double> track;  // track[i] = position at entry_tick + i

  bool covers(long entry_tick, long tick) const {
    const long i = tick - entry_tick;
    return i >= 0 && i < static_cast<long>(track.size());
  }
  double at(long entry_tick, long tick) const {
    return track[static_cast<std::size_t>(tick - entry_tick)];
  }
};

struct PlanStepOutcome {
  bool replanned = false;
  bool infeasible = false;
};

/// One re-planning step of the rolling mode: re-selects from the live state,
/// keeps the realized prefix of the track, and overwrites the future with
/// the newly selected candidate (the first overwritten tick is the smoothing
/// bridge). On NoFeasible the previous track is left untouched and
/// `infeasible` is set; the caller falls back to car-following for the
/// interval and retries at the next update.
PlanStepOutcome plan_step(long entry_tick, long now_tick, double position,
                          double speed, const EcoBatch& batch,
                          const FrontTrack* front, const SignalPlan& plan,
                          const VehicleParams& params, const TimeGrid& grid,
                          RollingState& state);

}  // namespace ecobatch
