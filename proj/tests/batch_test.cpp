#include "ecobatch/batch.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

namespace ecobatch {
namespace {

const TimeGrid kGrid{1.0, 400};
const auto kCoeffs = VtMicroCoefficients::standard();

VehicleParams tiny_params() {
  VehicleParams p;
  p.v_min = 0;
  p.v_max = 4;
  p.a_max = 2;
  p.d_max = -2;
  p.d_emergency = -4;
  p.v_entry = 2;
  p.v_depart = 2;
  p.approach_length = 12;
  return p;
}

TEST(SolveMinFuel, MatchesBruteForceOnTinyInstance) {
  const VehicleParams params = tiny_params();
  const GridSpec spec{1.0};
  for (long xi = 1; xi <= 10; ++xi) {
    auto dp = solve_min_fuel(xi, params, spec, kGrid, kCoeffs);
    auto bf = brute_force_min_fuel(xi, params, spec, kGrid, kCoeffs);
    ASSERT_EQ(dp.has_value(), bf.has_value()) << "xi=" << xi;
    if (!dp) continue;
    EXPECT_EQ(trajectory_fuel(*dp, kCoeffs), bf->fuel) << "xi=" << xi;
    EXPECT_EQ(trajectory_fuel(bf->trajectory, kCoeffs), bf->fuel) << "xi=" << xi;
  }
}

TEST(SolveMinFuel, SingleTickEdgeCases) {
  VehicleParams params = tiny_params();
  params.approach_length = 2;  // exactly v_entry * theta
  const GridSpec spec{1.0};
  auto t = solve_min_fuel(1, params, spec, kGrid, kCoeffs);
  ASSERT_TRUE(t.has_value());
  ASSERT_EQ(*t->travel_ticks(), 1);
  EXPECT_DOUBLE_EQ(t->positions()[1], 2.0);
  EXPECT_GE(t->speed(1), params.v_depart);

  params.approach_length = 3;  // unreachable in one tick from v_entry = 2
  auto none = solve_min_fuel(1, params, spec, kGrid, kCoeffs);
  EXPECT_FALSE(none.has_value());
  auto bf_none = brute_force_min_fuel(1, params, spec, kGrid, kCoeffs);
  EXPECT_FALSE(bf_none.has_value());
}

TEST(SolveMinFuel, RandomTinyInstancesAgreeWithBruteForce) {
  std::mt19937_64 rng(42);
  int compared = 0;
  while (compared < 12) {
    VehicleParams p;
    p.v_min = 0;
    p.v_max = 2 + static_cast<double>(rng() % 3);
    p.a_max = 1 + static_cast<double>(rng() % 2);
    p.d_max = -1 - static_cast<double>(rng() % 2);
    p.d_emergency = -6;
    p.v_entry = static_cast<double>(rng() % static_cast<unsigned>(p.v_max + 1));
    p.v_depart = static_cast<double>(rng() % static_cast<unsigned>(p.v_max + 1));
    p.approach_length = 2 + static_cast<double>(rng() % 19);
    const long xi = 1 + static_cast<long>(rng() % 12);
    const GridSpec spec{1.0};
    std::optional<Trajectory> dp;
    std::optional<BruteForceResult> bf;
    try {
      dp = solve_min_fuel(xi, p, spec, kGrid, kCoeffs);
      bf = brute_force_min_fuel(xi, p, spec, kGrid, kCoeffs);
    } catch (const TooLargeError&) {
      continue;
    }
    ASSERT_EQ(dp.has_value(), bf.has_value());
    if (dp) EXPECT_EQ(trajectory_fuel(*dp, kCoeffs), bf->fuel);
    ++compared;
  }
}

TEST(SolveMinFuel, TableParamsReachabilityThreshold) {
  const VehicleParams params;  // full experiment defaults
  const GridSpec spec{0.5};
  EXPECT_FALSE(solve_min_fuel(14, params, spec, kGrid, kCoeffs).has_value());
  auto t15 = solve_min_fuel(15, params, spec, kGrid, kCoeffs);
  ASSERT_TRUE(t15.has_value());
  EXPECT_EQ(*t15->travel_ticks(), 15);
  EXPECT_DOUBLE_EQ(t15->positions()[15], 200.0);
  EXPECT_DOUBLE_EQ(t15->speed(0), 6.0);
  EXPECT_GE(t15->speed(15), 6.0);
}

SignalPlan mini_plan() { return SignalPlan{20, 8, 2, 10, 0}; }

VehicleParams mini_params() {
  VehicleParams p;
  p.approach_length = 60;
  return p;
}

TEST(BuildBatch, StructureInvariants) {
  const VehicleParams params = mini_params();
  const GridSpec spec{0.5};
  EcoBatch batch = build_batch(params, spec, mini_plan(), 2, kGrid, kCoeffs);

  // Bound: (2 * 20 - 10) / 1 = 30.
  EXPECT_EQ(batch.meta.max_travel_ticks, 30);
  ASSERT_FALSE(batch.entries.empty());
  EXPECT_FALSE(batch.meta.content_hash.empty());

  std::set<long> travels;
  double prev_fuel = -1.0;
  long min_travel = batch.meta.max_travel_ticks + 1;
  for (const auto& e : batch.entries) {
    EXPECT_TRUE(travels.insert(e.travel_ticks).second)
        << "duplicate travel time " << e.travel_ticks;
    EXPECT_GE(e.fuel, prev_fuel);
    prev_fuel = e.fuel;
    EXPECT_GE(e.travel_ticks, batch.t_min);
    EXPECT_LE(e.travel_ticks, batch.meta.max_travel_ticks);
    ASSERT_TRUE(e.trajectory.travel_ticks().has_value());
    EXPECT_EQ(*e.trajectory.travel_ticks(), e.travel_ticks);
    EXPECT_DOUBLE_EQ(e.trajectory.positions()[e.travel_ticks],
                     params.approach_length);
    EXPECT_DOUBLE_EQ(e.trajectory.speed(0), params.v_entry);
    EXPECT_GE(e.trajectory.speed(e.travel_ticks), params.v_depart - 1e-9);
    min_travel = std::min(min_travel, e.travel_ticks);
  }
  EXPECT_EQ(batch.t_min, min_travel);

  // Every feasible travel time in [t_min, bound] is present exactly once.
  for (long xi = batch.t_min; xi <= batch.meta.max_travel_ticks; ++xi) {
    const bool feasible =
        solve_min_fuel(xi, params, spec, kGrid, kCoeffs).has_value();
    EXPECT_EQ(feasible, travels.count(xi) == 1) << "xi=" << xi;
  }
}

TEST(BuildBatch, DeterministicAcrossThreadCounts) {
  const VehicleParams params = mini_params();
  const GridSpec spec{0.5};
  EcoBatch one = build_batch(params, spec, mini_plan(), 1, kGrid, kCoeffs, 1);
  EcoBatch four = build_batch(params, spec, mini_plan(), 1, kGrid, kCoeffs, 4);
  ASSERT_EQ(one.entries.size(), four.entries.size());
  for (std::size_t i = 0; i < one.entries.size(); ++i) {
    EXPECT_EQ(one.entries[i].travel_ticks, four.entries[i].travel_ticks);
    EXPECT_EQ(one.entries[i].fuel, four.entries[i].fuel);
    EXPECT_EQ(one.entries[i].trajectory, four.entries[i].trajectory);
  }
  EXPECT_EQ(one.meta.content_hash, four.meta.content_hash);
}

TEST(BuildBatch, MonotoneGridRefinement) {
  // Halving dv keeps every coarse profile available, so the optimal fuel
  // can only improve.
  const VehicleParams params = tiny_params();
  for (long xi : {4L, 6L, 8L}) {
    auto coarse = solve_min_fuel(xi, params, GridSpec{1.0}, kGrid, kCoeffs);
    auto fine = solve_min_fuel(xi, params, GridSpec{0.5}, kGrid, kCoeffs);
    if (!coarse) continue;
    ASSERT_TRUE(fine.has_value());
    EXPECT_LE(trajectory_fuel(*fine, kCoeffs),
              trajectory_fuel(*coarse, kCoeffs) + 1e-15);
  }
}

TEST(BuildBatch, EmptyBatchSignalsInconsistentParams) {
  VehicleParams params = mini_params();
  params.approach_length = 4000;  // unreachable within two mini cycles
  EXPECT_THROW(build_batch(params, GridSpec{0.5}, mini_plan(), 2, kGrid, kCoeffs),
               EmptyBatchError);
}

class BatchIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("ecobatch_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
    batch_ = build_batch(mini_params(), GridSpec{0.5}, mini_plan(), 2, kGrid,
                         kCoeffs);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
  EcoBatch batch_;
};

TEST_F(BatchIoTest, RoundTripIdentity) {
  const auto path = dir_ / "batch.json";
  save_batch(batch_, path);
  EcoBatch loaded = load_batch(path);
  ASSERT_EQ(loaded.entries.size(), batch_.entries.size());
  for (std::size_t i = 0; i < batch_.entries.size(); ++i) {
    EXPECT_EQ(loaded.entries[i].travel_ticks, batch_.entries[i].travel_ticks);
    EXPECT_EQ(loaded.entries[i].fuel, batch_.entries[i].fuel);
    EXPECT_EQ(loaded.entries[i].trajectory, batch_.entries[i].trajectory);
  }
  EXPECT_EQ(loaded.t_min, batch_.t_min);
  EXPECT_EQ(loaded.meta.content_hash, batch_.meta.content_hash);
}

TEST_F(BatchIoTest, SaveIsByteStable) {
  const auto a = dir_ / "a.json";
  const auto b = dir_ / "b.json";
  save_batch(batch_, a);
  save_batch(load_batch(a), b);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(fa)), {});
  std::string sb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_EQ(sa, sb);
}

TEST_F(BatchIoTest, EditedPositionsFailHashCheck) {
  const auto path = dir_ / "batch.json";
  save_batch(batch_, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  in.close();
  // Nudge one position value: 6.0 -> 6.5 in the first entry payload.
  auto pos = text.find("6.0,");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 4, "6.5,");
  std::ofstream out(path, std::ios::trunc);
  out << text;
  out.close();
  EXPECT_THROW(load_batch(path), BatchIoError);
}

TEST_F(BatchIoTest, MismatchedParamsRejected) {
  VehicleParams other = mini_params();
  other.v_entry = 8;
  EXPECT_THROW(require_compatible(batch_, other, GridSpec{0.5}, mini_plan(), 2,
                                  kGrid, kCoeffs),
               ParamMismatchError);
  EXPECT_NO_THROW(require_compatible(batch_, mini_params(), GridSpec{0.5},
                                     mini_plan(), 2, kGrid, kCoeffs));
}

TEST_F(BatchIoTest, MissingFileAndBadSchema) {
  EXPECT_THROW(load_batch(dir_ / "missing.json"), BatchIoError);
  const auto path = dir_ / "junk.json";
  std::ofstream(path) << "{\"format_version\": 99}";
  EXPECT_THROW(load_batch(path), SchemaMismatchError);
}

}  // namespace
}  // namespace ecobatch
