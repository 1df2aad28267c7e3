#include "ecobatch/core.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace ecobatch {

namespace {
constexpr double kEps = 1e-9;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw std::invalid_argument(field + ": " + message);
}
}  // namespace

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::kGreen: return "green";
    case Phase::kYellow: return "yellow";
    case Phase::kRed: return "red";
  }
  return "?";
}

const char* to_string(VehicleKind kind) {
  return kind == VehicleKind::kCav ? "CAV" : "HDV";
}

void TimeGrid::validate() const {
  if (!(theta > 0.0)) fail("grid.theta", "must be positive");
  if (horizon_ticks < 1) fail("grid.horizon_ticks", "must be at least 1");
}

void SignalPlan::validate() const {
  if (!(cycle > 0.0)) fail("signal.cycle", "must be positive");
  if (green < 0.0 || yellow < 0.0 || red < 0.0)
    fail("signal", "phase durations must be nonnegative");
  if (std::abs(green + yellow + red - cycle) > kEps)
    fail("signal.cycle", "green + yellow + red must equal cycle");
}

void VehicleParams::validate() const {
  if (!(a_max > 0.0)) fail("params.a_max", "must be positive");
  if (!(d_max < 0.0)) fail("params.d_max", "must be negative");
  if (d_emergency > d_max)
    fail("params.d_emergency", "must not exceed comfort braking d_max");
  if (v_min > v_max) fail("params.v_min", "must not exceed v_max");
  if (v_entry < v_min - kEps || v_entry > v_max + kEps)
    fail("params.v_entry", "must lie in [v_min, v_max]");
  if (v_depart < v_min - kEps || v_depart > v_max + kEps)
    fail("params.v_depart", "must lie in [v_min, v_max]");
  if (!(approach_length > 0.0))
    fail("params.approach_length", "must be positive");
  if (!(vehicle_length > 0.0)) fail("params.vehicle_length", "must be positive");
  if (min_gap_hdv < 0.0) fail("params.min_gap_hdv", "must be nonnegative");
  if (min_gap_cav < 0.0) fail("params.min_gap_cav", "must be nonnegative");
}

Phase phase_at(const SignalPlan& plan, long tick, const TimeGrid& grid) {
  double t = std::fmod(grid.time_at(tick) + plan.offset, plan.cycle);
  if (t < 0.0) t += plan.cycle;
  if (t < plan.green - kEps) return Phase::kGreen;
  if (t < plan.green + plan.yellow - kEps) return Phase::kYellow;
  return Phase::kRed;
}

std::vector<TickInterval> red_intervals(const SignalPlan& plan, int phi,
                                        const TimeGrid& grid) {
  if (phi < 1) throw std::invalid_argument("red_intervals: phi must be >= 1");
  const double red_ticks_f = plan.red / grid.theta;
  const double cycle_ticks_f = plan.cycle / grid.theta;
  const long red_ticks = std::lround(red_ticks_f);
  const long cycle_ticks = std::lround(cycle_ticks_f);
  if (std::abs(red_ticks_f - red_ticks) > kEps ||
      std::abs(cycle_ticks_f - cycle_ticks) > kEps)
    throw std::invalid_argument(
        "red_intervals: signal durations must be whole ticks");

  // First complete red begins where the in-cycle time hits green + yellow.
  double start_s = std::fmod(plan.green + plan.yellow - plan.offset, plan.cycle);
  if (start_s < 0.0) start_s += plan.cycle;
  const long start_tick = std::lround(start_s / grid.theta);

  std::vector<TickInterval> out;
  out.reserve(static_cast<std::size_t>(phi));
  for (int j = 0; j < phi; ++j) {
    const long b = start_tick + j * cycle_ticks;
    out.push_back({b, b + red_ticks});
  }
  return out;
}

Trajectory::Trajectory(long start_tick, std::vector<double> positions,
                       const VehicleParams& params, const TimeGrid& grid)
    : Trajectory(start_tick, std::move(positions), params, grid,
                 params.d_max) {}

Trajectory::Trajectory(long start_tick, std::vector<double> positions,
                       const VehicleParams& params, const TimeGrid& grid,
                       double accel_floor) {
  if (positions.empty()) fail("trajectory", "must contain at least one tick");
  if (std::abs(positions.front()) > kEps)
    fail("trajectory", "must start at the entry point (position 0)");
  const long n = static_cast<long>(positions.size());
  for (long i = 0; i + 1 < n; ++i) {
    const double v = (positions[i + 1] - positions[i]) / grid.theta;
    if (v < params.v_min - kEps || v > params.v_max + kEps) {
      std::ostringstream os;
      os << "trajectory: speed " << v << " at tick " << i
         << " outside [" << params.v_min << ", " << params.v_max << "]";
      throw std::invalid_argument(os.str());
    }
  }
  for (long i = 0; i + 2 < n; ++i) {
    const double v0 = (positions[i + 1] - positions[i]) / grid.theta;
    const double v1 = (positions[i + 2] - positions[i + 1]) / grid.theta;
    const double a = (v1 - v0) / grid.theta;
    if (a < accel_floor - kEps || a > params.a_max + kEps) {
      std::ostringstream os;
      os << "trajectory: acceleration " << a << " at tick " << i
         << " outside [" << accel_floor << ", " << params.a_max << "]";
      throw std::invalid_argument(os.str());
    }
  }
  start_tick_ = start_tick;
  theta_ = grid.theta;
  positions_ = std::move(positions);
  for (long i = 0; i < n; ++i) {
    if (positions_[i] >= params.approach_length - kEps) {
      travel_ticks_ = i;
      break;
    }
  }
}

Trajectory Trajectory::unchecked(long start_tick,
                                 std::vector<double> positions, double theta,
                                 double approach_length) {
  Trajectory t;
  t.start_tick_ = start_tick;
  t.theta_ = theta;
  t.positions_ = std::move(positions);
  for (long i = 0; i < static_cast<long>(t.positions_.size()); ++i) {
    if (t.positions_[i] >= approach_length - kEps) {
      t.travel_ticks_ = i;
      break;
    }
  }
  return t;
}

Trajectory translate(const Trajectory& traj, long new_start,
                     const TimeGrid& grid) {
  if (traj.start_tick() != 0)
    throw std::invalid_argument("translate: source must start at tick 0");
  if (new_start < 0 || new_start + traj.size() - 1 > grid.horizon_ticks) {
    std::ostringstream os;
    os << "translate: start " << new_start << " with " << traj.size()
       << " ticks exceeds horizon " << grid.horizon_ticks;
    throw HorizonOverflowError(os.str());
  }
  Trajectory out = traj;
  out.start_tick_ = new_start;
  return out;
}

}  // namespace ecobatch
