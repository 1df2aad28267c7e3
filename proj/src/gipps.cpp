#include "ecobatch/gipps.hpp"

#include <algorithm>
#include <cmath>

namespace ecobatch {

double gipps_speed(double v_self, double /*v_front*/, double clearance,
                   const VehicleParams& params, const TimeGrid& grid) {
  const double b = -params.d_max;
  const double th = grid.theta;
  const double v_acc = v_self + params.a_max * th;
  const double gap = std::max(clearance, 0.0);
  const double v_safe = -b * th + std::sqrt(b * b * th * th + 2.0 * b * gap);
  return std::max(std::min({v_acc, params.v_max, v_safe}), params.v_min);
}

double predict_hdv_speed(const FollowingContext& ctx, Phase phase,
                         const VehicleParams& params, const TimeGrid& grid) {
  double v;
  if (ctx.front) {
    v = gipps_speed(ctx.v_self, ctx.front->v_front, ctx.front->clearance,
                    params, grid);
  } else {
    v = std::max(std::min(ctx.v_self + params.a_max * grid.theta, params.v_max),
                 params.v_min);
  }
  if (phase != Phase::kGreen && ctx.to_stopline > 0.0) {
    v = std::min(v, gipps_speed(ctx.v_self, 0.0, ctx.to_stopline, params, grid));
  }
  return v;
}

StepState step_hdv(const StepState& self, const std::optional<StepState>& front,
                   const SignalPlan& plan, const VehicleParams& params,
                   const TimeGrid& grid, long tick) {
  FollowingContext ctx;
  ctx.v_self = self.speed;
  ctx.to_stopline = params.approach_length - self.position;
  if (front) {
    ctx.front = FrontGap{front->speed, front->position - self.position -
                                           params.vehicle_length -
                                           params.min_gap_hdv};
  }
  const double v = predict_hdv_speed(ctx, phase_at(plan, tick, grid), params, grid);
  return StepState{self.position + v * grid.theta, v};
}

}  // namespace ecobatch
