#pragma once

#include <optional>

#include "ecobatch/core.hpp"

namespace ecobatch {

/// Live car-following context of one vehicle at one tick.
struct FrontGap {
  double v_front = 0.0;   // front vehicle's current speed
  double clearance = 0.0; // net spare gap: x_front - x_self - l_v - min gap
};

struct FollowingContext {
  double v_self = 0.0;
  std::optional<FrontGap> front;  // empty for the leader
  double to_stopline = 0.0;       // approach_length - x_self
};

/// Gipps speed: min of the acceleration-limited speed, the speed limit, and
/// the safe speed -b*theta + sqrt(b^2 theta^2 + 2 b max(clearance, 0)) with
/// b = |d_max|; clamped to at least v_min. The front speed is part of the
/// classic interface but does not enter the braking term: the safe speed
/// assumes the front vehicle may stop instantly.
double gipps_speed(double v_self, double v_front, double clearance,
                   const VehicleParams& params, const TimeGrid& grid);

/// Phase-aware speed: during green the vehicle follows its front vehicle
/// only; during yellow/red a virtual stopped vehicle whose induced clearance
/// equals the distance to the stop line is added. Vehicles at or beyond the
/// stop line ignore the signal.
double predict_hdv_speed(const FollowingContext& ctx, Phase phase,
                         const VehicleParams& params, const TimeGrid& grid);

struct StepState {
  double position = 0.0;
  double speed = 0.0;
};

/// One car-following step: the new speed holds for [tick, tick+theta) and
/// the position advances uniformly by it.
StepState step_hdv(const StepState& self, const std::optional<StepState>& front,
                   const SignalPlan& plan, const VehicleParams& params,
                   const TimeGrid& grid, long tick);

}  // namespace ecobatch
