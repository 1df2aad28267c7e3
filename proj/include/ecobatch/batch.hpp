#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecobatch/core.hpp"
#include "ecobatch/fuel.hpp"

namespace ecobatch {

/// Discretization of the batch solver: speeds live on multiples of dv,
/// positions on multiples of dv * theta.
struct GridSpec {
  double dv = 0.5;  // m/s

  /// Checks that every speed bound and the approach length lie on the grid.
  void validate(const VehicleParams& params, const TimeGrid& grid) const;
};

struct BatchEntry {
  long travel_ticks = 0;
  double fuel = 0.0;
  Trajectory trajectory;  // start_tick == 0, hits the stop line exactly
};

struct BatchMeta {
  double theta = 1.0;
  double dv = 0.5;
  VehicleParams params;
  SignalPlan signal;
  int phi = 2;
  long max_travel_ticks = 0;  // (phi * cycle - last red) / theta
  VtMicroCoefficients coeffs;
  std::string content_hash;  // sha-256 of the canonical entries serialization
};

/// Fuel-ascending list of one fuel-minimal trajectory per feasible travel
/// time (ties broken by shorter travel time).
struct EcoBatch {
  std::vector<BatchEntry> entries;
  long t_min = 0;  // minimum feasible travel ticks
  BatchMeta meta;
};

class EmptyBatchError : public std::runtime_error {
 public:
  explicit EmptyBatchError(const std::string& what) : std::runtime_error(what) {}
};
class TooLargeError : public std::runtime_error {
 public:
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};
class BatchIoError : public std::runtime_error {
 public:
  explicit BatchIoError(const std::string& what) : std::runtime_error(what) {}
};
class SchemaMismatchError : public BatchIoError {
 public:
  explicit SchemaMismatchError(const std::string& what) : BatchIoError(what) {}
};
class HashMismatchError : public BatchIoError {
 public:
  explicit HashMismatchError(const std::string& what) : BatchIoError(what) {}
};
class ParamMismatchError : public BatchIoError {
 public:
  explicit ParamMismatchError(const std::string& what) : BatchIoError(what) {}
};

/// Fuel-minimal trajectory for an exact travel time of `xi_ticks`: starts at
/// (0, v_entry), stays strictly before the stop line until tick xi_ticks,
/// hits it exactly there with speed >= v_depart. The returned positions
/// include one post-departure tick so the departure speed is derivable.
/// Returns nullopt when no grid trajectory satisfies the constraints.
std::optional<Trajectory> solve_min_fuel(long xi_ticks,
                                         const VehicleParams& params,
                                         const GridSpec& spec,
                                         const TimeGrid& grid,
                                         const VtMicroCoefficients& coeffs);

struct BruteForceResult {
  Trajectory trajectory;
  double fuel = 0.0;
};

/// Exhaustive enumeration over all grid acceleration profiles; independent
/// check of solve_min_fuel. Throws TooLargeError when the search exceeds
/// `guard` node visits.
std::optional<BruteForceResult> brute_force_min_fuel(
    long xi_ticks, const VehicleParams& params, const GridSpec& spec,
    const TimeGrid& grid, const VtMicroCoefficients& coeffs,
    std::size_t guard = 10'000'000);

/// Runs the solver for every travel time in [0, (phi*C - R_phi)/theta] and
/// collects the feasible ones, sorted ascending by fuel.
/// Throws EmptyBatchError when no travel time is feasible.
EcoBatch build_batch(const VehicleParams& params, const GridSpec& spec,
                     const SignalPlan& plan, int phi, const TimeGrid& grid,
                     const VtMicroCoefficients& coeffs, int threads = 0);

void save_batch(const EcoBatch& batch, const std::filesystem::path& path);

/// Loads and verifies a batch file: schema, content hash, and re-derived
/// entry fuels. Throws SchemaMismatchError / HashMismatchError.
EcoBatch load_batch(const std::filesystem::path& path);

/// Verifies that a batch was built with exactly these parameters.
/// Throws ParamMismatchError naming the offending field.
void require_compatible(const EcoBatch& batch, const VehicleParams& params,
                        const GridSpec& spec, const SignalPlan& plan, int phi,
                        const TimeGrid& grid, const VtMicroCoefficients& coeffs);

std::string sha256_hex(const std::string& data);

/// Canonical serialization of the entries array; input of the content hash.
std::string canonical_entries_json(const EcoBatch& batch);

}  // namespace ecobatch
