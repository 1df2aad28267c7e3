#include "ecobatch/core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace ecobatch {
namespace {

TimeGrid unit_grid(long horizon = 240) { return TimeGrid{1.0, horizon}; }

SignalPlan paper_plan() { return SignalPlan{60, 25, 5, 30, 0}; }

TEST(PhaseAt, FixedSchedule) {
  const TimeGrid grid = unit_grid();
  const SignalPlan plan = paper_plan();
  EXPECT_EQ(phase_at(plan, 10, grid), Phase::kGreen);
  EXPECT_EQ(phase_at(plan, 27, grid), Phase::kYellow);
  EXPECT_EQ(phase_at(plan, 60, grid), Phase::kGreen);
  EXPECT_EQ(phase_at(plan, 0, grid), Phase::kGreen);
  EXPECT_EQ(phase_at(plan, 24, grid), Phase::kGreen);
  EXPECT_EQ(phase_at(plan, 25, grid), Phase::kYellow);
  EXPECT_EQ(phase_at(plan, 29, grid), Phase::kYellow);
  EXPECT_EQ(phase_at(plan, 30, grid), Phase::kRed);
  EXPECT_EQ(phase_at(plan, 59, grid), Phase::kRed);
}

TEST(PhaseAt, PeriodicInCycle) {
  const TimeGrid grid = unit_grid(1000);
  const SignalPlan plan = paper_plan();
  for (long t = 0; t < 200; ++t)
    EXPECT_EQ(phase_at(plan, t, grid), phase_at(plan, t + 60, grid)) << t;
}

TEST(PhaseAt, OffsetShiftsSchedule) {
  const TimeGrid grid = unit_grid();
  SignalPlan plan = paper_plan();
  plan.offset = 30;  // horizon starts at the red phase
  EXPECT_EQ(phase_at(plan, 0, grid), Phase::kRed);
  EXPECT_EQ(phase_at(plan, 29, grid), Phase::kRed);
  EXPECT_EQ(phase_at(plan, 30, grid), Phase::kGreen);
}

TEST(RedIntervals, PaperSchedule) {
  const TimeGrid grid = unit_grid();
  const SignalPlan plan = paper_plan();
  const auto two = red_intervals(plan, 2, grid);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], (TickInterval{30, 60}));
  EXPECT_EQ(two[1], (TickInterval{90, 120}));
  const auto one = red_intervals(plan, 1, grid);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], (TickInterval{30, 60}));
}

TEST(RedIntervals, OffsetShiftsIntervals) {
  const TimeGrid grid = unit_grid();
  SignalPlan plan = paper_plan();
  plan.offset = 30;
  const auto reds = red_intervals(plan, 2, grid);
  ASSERT_EQ(reds.size(), 2u);
  EXPECT_EQ(reds[0], (TickInterval{0, 30}));
  EXPECT_EQ(reds[1], (TickInterval{60, 90}));
}

TEST(RedIntervals, DisjointAndRedLength) {
  const TimeGrid grid = unit_grid();
  const auto reds = red_intervals(paper_plan(), 4, grid);
  for (std::size_t j = 0; j < reds.size(); ++j) {
    EXPECT_EQ(reds[j].end - reds[j].begin, 30);
    if (j > 0) EXPECT_GE(reds[j].begin, reds[j - 1].end);
  }
}

VehicleParams table_params() { return VehicleParams{}; }

TEST(Trajectory, AcceptsValidSequence) {
  const TimeGrid grid = unit_grid();
  const VehicleParams params = table_params();
  // Accelerate 6 -> 10 then cruise.
  Trajectory t(0, {0, 6, 14, 24, 34, 44}, params, grid);
  EXPECT_EQ(t.size(), 6);
  EXPECT_DOUBLE_EQ(t.speed(0), 6);
  EXPECT_DOUBLE_EQ(t.speed(1), 8);
  EXPECT_DOUBLE_EQ(t.accel(0), 2);
  EXPECT_DOUBLE_EQ(t.accel(3), 0);
  EXPECT_FALSE(t.travel_ticks().has_value());
}

TEST(Trajectory, RejectsNonzeroStart) {
  EXPECT_THROW(Trajectory(0, {1, 7}, table_params(), unit_grid()),
               std::invalid_argument);
}

TEST(Trajectory, RejectsReversal) {
  EXPECT_THROW(Trajectory(0, {0, 6, 5}, table_params(), unit_grid()),
               std::invalid_argument);
}

TEST(Trajectory, RejectsOverSpeed) {
  EXPECT_THROW(Trajectory(0, {0, 17}, table_params(), unit_grid()),
               std::invalid_argument);
}

TEST(Trajectory, RejectsHardBraking) {
  // 6 -> 2 m/s in one tick is -4 m/s^2, below comfort braking.
  EXPECT_THROW(Trajectory(0, {0, 6, 8}, table_params(), unit_grid()),
               std::invalid_argument);
  // ...but fine when emergency braking is the floor.
  EXPECT_NO_THROW(Trajectory(0, {0, 6, 8}, table_params(), unit_grid(),
                             table_params().d_emergency));
}

TEST(Trajectory, TravelTicksAtStopLine) {
  VehicleParams params = table_params();
  params.approach_length = 20;
  Trajectory t(0, {0, 6, 14, 24, 34}, params, unit_grid());
  ASSERT_TRUE(t.travel_ticks().has_value());
  EXPECT_EQ(*t.travel_ticks(), 3);  // first position >= 20
  EXPECT_EQ(*t.departure_tick(), 3);
}

TEST(Translate, ShiftKeepsShape) {
  const TimeGrid grid = unit_grid();
  Trajectory t(0, {0, 6, 12}, table_params(), grid);
  Trajectory shifted = translate(t, 25, grid);
  EXPECT_EQ(shifted.start_tick(), 25);
  EXPECT_EQ(shifted.positions(), t.positions());
}

TEST(Translate, ZeroShiftIsIdentity) {
  const TimeGrid grid = unit_grid();
  Trajectory t(0, {0, 6, 12}, table_params(), grid);
  EXPECT_EQ(translate(t, 0, grid), t);
}

TEST(Translate, RejectsHorizonOverflow) {
  const TimeGrid grid = unit_grid(10);
  Trajectory t(0, {0, 6, 12}, table_params(), grid);
  EXPECT_NO_THROW(translate(t, 8, grid));
  EXPECT_THROW(translate(t, 9, grid), HorizonOverflowError);
}

TEST(Translate, RequiresBatchAnchoredSource) {
  const TimeGrid grid = unit_grid();
  Trajectory t(0, {0, 6, 12}, table_params(), grid);
  Trajectory shifted = translate(t, 5, grid);
  EXPECT_THROW(translate(shifted, 10, grid), std::invalid_argument);
}

TEST(Params, ValidationNamesField) {
  VehicleParams params = table_params();
  params.v_entry = 20;  // above v_max
  try {
    params.validate();
    FAIL() << "expected validation error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("v_entry"), std::string::npos);
  }
}

TEST(SignalPlan, ValidationChecksCycleSum) {
  SignalPlan plan = paper_plan();
  plan.red = 31;
  EXPECT_THROW(plan.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace ecobatch
