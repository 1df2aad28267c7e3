#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecobatch {

enum class Phase { kGreen, kYellow, kRed };
enum class VehicleKind { kHdv, kCav };

const char* to_string(Phase phase);
const char* to_string(VehicleKind kind);

/// Uniform time discretization. All trajectory indices are integer ticks on
/// this grid; motion is uniform within a tick.
struct TimeGrid {
  double theta = 1.0;       // seconds per tick
  long horizon_ticks = 240; // last valid tick index

  double time_at(long tick) const { return static_cast<double>(tick) * theta; }
  void validate() const;
};

/// Fixed-cycle signal schedule with phase order green -> yellow -> red.
/// `offset` is the in-cycle time at the start of the horizon.
struct SignalPlan {
  double cycle = 60.0;
  double green = 25.0;
  double yellow = 5.0;
  double red = 30.0;
  double offset = 0.0;

  void validate() const;
};

/// Kinematic and geometric limits shared by all vehicles.
struct VehicleParams {
  double v_min = 0.0;            // m/s
  double v_max = 16.0;           // m/s
  double a_max = 2.0;            // m/s^2, > 0
  double d_max = -2.0;           // m/s^2, comfort braking, < 0
  double d_emergency = -6.0;     // m/s^2, emergency braking, <= d_max
  double v_entry = 6.0;          // m/s, speed at entry
  double v_depart = 6.0;         // m/s, minimum speed at departure
  double vehicle_length = 4.0;   // m
  double min_gap_hdv = 1.0;      // m
  double min_gap_cav = 1.0;      // m
  double approach_length = 200.0; // m, entry point to stop line

  void validate() const;
  double min_gap_behind(VehicleKind front) const {
    return front == VehicleKind::kCav ? min_gap_cav : min_gap_hdv;
  }
};

class HorizonOverflowError : public std::runtime_error {
 public:
  explicit HorizonOverflowError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Discrete-time trajectory stored as cumulative positions from the entry
/// point. positions[i] is the distance at tick start_tick + i; speeds and
/// accelerations are always derived from positions, never stored.
class Trajectory {
 public:
  Trajectory() = default;  // empty; useful only as a placeholder

  /// Validates border and kinematic limits; throws std::invalid_argument on
  /// violation. `accel_floor` is the lowest admissible acceleration
  /// (comfort braking for batch trajectories, emergency braking for realized
  /// ones).
  Trajectory(long start_tick, std::vector<double> positions,
             const VehicleParams& params, const TimeGrid& grid);
  Trajectory(long start_tick, std::vector<double> positions,
             const VehicleParams& params, const TimeGrid& grid,
             double accel_floor);

  /// Builds without kinematic validation. Used for simulated tracks whose
  /// conformance is checked by the simulation violation log instead.
  static Trajectory unchecked(long start_tick, std::vector<double> positions,
                              double theta, double approach_length);

  long start_tick() const { return start_tick_; }
  double theta() const { return theta_; }
  const std::vector<double>& positions() const { return positions_; }
  long size() const { return static_cast<long>(positions_.size()); }

  /// Speed during tick start_tick + i, defined for i in [0, size-2].
  double speed(long i) const {
    return (positions_[i + 1] - positions_[i]) / theta_;
  }
  /// Acceleration during tick start_tick + i, defined for i in [0, size-3].
  double accel(long i) const {
    return (speed(i + 1) - speed(i)) / theta_;
  }

  /// Index of the first position at or beyond the stop line, if reached.
  std::optional<long> travel_ticks() const { return travel_ticks_; }
  /// Absolute tick of departure (position first reaches the stop line).
  std::optional<long> departure_tick() const {
    if (!travel_ticks_) return std::nullopt;
    return start_tick_ + *travel_ticks_;
  }

  bool operator==(const Trajectory& other) const {
    return start_tick_ == other.start_tick_ && positions_ == other.positions_;
  }

 private:
  friend Trajectory translate(const Trajectory&, long, const TimeGrid&);

  long start_tick_ = 0;
  double theta_ = 1.0;
  std::vector<double> positions_;
  std::optional<long> travel_ticks_;
};

/// A vehicle present in a scenario. Position/speed are the live state.
struct Vehicle {
  int id = 0;
  VehicleKind kind = VehicleKind::kHdv;
  long entry_tick = 0;
  double position = 0.0;
  double speed = 0.0;
};

Phase phase_at(const SignalPlan& plan, long tick, const TimeGrid& grid);

/// Half-open tick interval [begin, end).
struct TickInterval {
  long begin = 0;
  long end = 0;
  bool operator==(const TickInterval&) const = default;
};

/// The first `phi` complete red phases as tick intervals, in order.
std::vector<TickInterval> red_intervals(const SignalPlan& plan, int phi,
                                        const TimeGrid& grid);

/// Shifts a trajectory that starts at tick 0 to start at `new_start`.
/// Positions (and therefore speeds, accelerations and fuel) are unchanged.
/// Throws HorizonOverflowError when the shifted span leaves the grid.
Trajectory translate(const Trajectory& traj, long new_start,
                     const TimeGrid& grid);

}  // namespace ecobatch
