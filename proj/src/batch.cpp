#include "ecobatch/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace ecobatch {

namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

long exact_ratio(double value, double unit, const char* what) {
  const double q = value / unit;
  const long r = std::lround(q);
  if (std::abs(q - r) > 1e-9) {
    std::ostringstream os;
    os << what << " (" << value << ") must be an integer multiple of " << unit;
    throw std::invalid_argument(os.str());
  }
  return r;
}

/// Integerized view of one solver instance.
struct DpProblem {
  double dv = 0.5;
  double theta = 1.0;
  long m_min = 0, m_max = 0;     // speed indices, v = m * dv
  long m_entry = 0, m_depart = 0;
  long n_line = 0;               // position index of the stop line
  long delta_lo = 0, delta_hi = 0;  // admissible speed-index changes per tick

  double speed_of(long m) const { return static_cast<double>(m) * dv; }
  double accel_of(long m, long m_next) const {
    return (speed_of(m_next) - speed_of(m)) / theta;
  }
};

DpProblem make_problem(const VehicleParams& params, const GridSpec& spec,
                       const TimeGrid& grid) {
  spec.validate(params, grid);
  DpProblem p;
  p.dv = spec.dv;
  p.theta = grid.theta;
  p.m_min = exact_ratio(params.v_min, spec.dv, "v_min");
  p.m_max = exact_ratio(params.v_max, spec.dv, "v_max");
  p.m_entry = exact_ratio(params.v_entry, spec.dv, "v_entry");
  p.m_depart = exact_ratio(params.v_depart, spec.dv, "v_depart");
  p.n_line = exact_ratio(params.approach_length, spec.dv * grid.theta,
                         "approach_length");
  p.delta_lo = static_cast<long>(
      std::ceil(params.d_max * grid.theta / spec.dv - kEps));
  p.delta_hi = static_cast<long>(
      std::floor(params.a_max * grid.theta / spec.dv + kEps));
  return p;
}

/// Builds the trajectory for a speed-index profile m_0..m_xi, appending one
/// post-departure tick so the departure speed stays derivable.
Trajectory profile_to_trajectory(const std::vector<long>& speed_indices,
                                 const DpProblem& p,
                                 const VehicleParams& params,
                                 const TimeGrid& grid) {
  std::vector<double> positions;
  positions.reserve(speed_indices.size() + 1);
  double x = 0.0;
  positions.push_back(x);
  for (long m : speed_indices) {
    x += p.speed_of(m) * p.theta;
    positions.push_back(x);
  }
  return Trajectory(0, std::move(positions), params, grid);
}

}  // namespace

void GridSpec::validate(const VehicleParams& params,
                        const TimeGrid& grid) const {
  if (!(dv > 0.0)) throw std::invalid_argument("grid_spec.dv: must be positive");
  exact_ratio(params.v_min, dv, "v_min");
  exact_ratio(params.v_max, dv, "v_max");
  exact_ratio(params.v_entry, dv, "v_entry");
  exact_ratio(params.v_depart, dv, "v_depart");
  exact_ratio(params.approach_length, dv * grid.theta, "approach_length");
}

std::optional<Trajectory> solve_min_fuel(long xi_ticks,
                                         const VehicleParams& params,
                                         const GridSpec& spec,
                                         const TimeGrid& grid,
                                         const VtMicroCoefficients& coeffs) {
  if (xi_ticks < 0) throw std::invalid_argument("xi_ticks must be >= 0");
  const DpProblem p = make_problem(params, spec, grid);
  const long n_speeds = p.m_max + 1;
  const long n_pos = p.n_line + 1;
  const long n_layers = xi_ticks + 1;
  if (n_layers * n_speeds * n_pos > 300'000'000L)
    throw std::invalid_argument("solve_min_fuel: state space too large");

  if (xi_ticks == 0)
    return std::nullopt;  // the stop line is strictly ahead of the entry point

  // Per-transition interval fuel, indexed by [m][delta - delta_lo].
  const long n_delta = p.delta_hi - p.delta_lo + 1;
  std::vector<double> tcost(static_cast<std::size_t>(n_speeds * n_delta), kInf);
  for (long m = p.m_min; m <= p.m_max; ++m) {
    for (long d = p.delta_lo; d <= p.delta_hi; ++d) {
      const long m2 = m + d;
      if (m2 < p.m_min || m2 > p.m_max) continue;
      tcost[static_cast<std::size_t>(m * n_delta + (d - p.delta_lo))] =
          interval_fuel(p.speed_of(m), p.accel_of(m, m2), p.theta, coeffs);
    }
  }

  // Cost-to-go over states (tick k, speed index m, position index n): the
  // minimum fuel of intervals k..xi-1 reaching the terminal set
  // (xi, m >= m_depart, n == n_line). Positions must stay strictly below the
  // line before tick xi; states with n == n_line on earlier layers keep
  // infinite cost.
  const auto idx = [&](long k, long m, long n) {
    return static_cast<std::size_t>((k * n_speeds + m) * n_pos + n);
  };
  std::vector<double> ctg(static_cast<std::size_t>(n_layers) *
                              static_cast<std::size_t>(n_speeds * n_pos),
                          kInf);
  for (long m = std::max(p.m_depart, p.m_min); m <= p.m_max; ++m)
    ctg[idx(xi_ticks, m, p.n_line)] = 0.0;

  for (long k = xi_ticks - 1; k >= 0; --k) {
    const bool next_is_terminal = (k + 1 == xi_ticks);
    for (long m = p.m_min; m <= p.m_max; ++m) {
      for (long n = 0; n <= p.n_line - 1; ++n) {
        const long n2 = n + m;
        if (n2 > p.n_line) continue;
        if (next_is_terminal && n2 != p.n_line) continue;
        if (!next_is_terminal && n2 > p.n_line - 1) continue;
        double best = kInf;
        for (long d = p.delta_lo; d <= p.delta_hi; ++d) {
          const long m2 = m + d;
          if (m2 < p.m_min || m2 > p.m_max) continue;
          const double tail = ctg[idx(k + 1, m2, n2)];
          if (tail == kInf) continue;
          const double c =
              tcost[static_cast<std::size_t>(m * n_delta + (d - p.delta_lo))] +
              tail;
          if (c < best) best = c;
        }
        ctg[idx(k, m, n)] = best;
      }
    }
  }

  if (ctg[idx(0, p.m_entry, 0)] == kInf) return std::nullopt;

  // Forward walk; ties resolved toward the smallest next speed, which yields
  // the lexicographically smallest optimal speed sequence.
  std::vector<long> profile;
  profile.reserve(static_cast<std::size_t>(xi_ticks) + 1);
  long m = p.m_entry;
  long n = 0;
  profile.push_back(m);
  for (long k = 0; k < xi_ticks; ++k) {
    const long n2 = n + m;
    double best = kInf;
    long best_m2 = -1;
    for (long d = p.delta_lo; d <= p.delta_hi; ++d) {
      const long m2 = m + d;
      if (m2 < p.m_min || m2 > p.m_max) continue;
      const double tail = ctg[idx(k + 1, m2, n2)];
      if (tail == kInf) continue;
      const double c =
          tcost[static_cast<std::size_t>(m * n_delta + (d - p.delta_lo))] + tail;
      if (c < best) {
        best = c;
        best_m2 = m2;
      }
    }
    m = best_m2;
    n = n2;
    profile.push_back(m);
  }
  return profile_to_trajectory(profile, p, params, grid);
}

std::optional<BruteForceResult> brute_force_min_fuel(
    long xi_ticks, const VehicleParams& params, const GridSpec& spec,
    const TimeGrid& grid, const VtMicroCoefficients& coeffs,
    std::size_t guard) {
  if (xi_ticks < 0) throw std::invalid_argument("xi_ticks must be >= 0");
  const DpProblem p = make_problem(params, spec, grid);
  if (xi_ticks == 0) return std::nullopt;

  struct Search {
    const DpProblem& p;
    const VtMicroCoefficients& coeffs;
    long xi;
    std::size_t guard;
    std::size_t visited = 0;
    std::vector<long> path;
    std::vector<long> best_path;
    double best_fuel = kInf;

    double path_fuel() const {
      double total = 0.0;
      for (long i = xi - 1; i >= 0; --i)
        total += interval_fuel(p.speed_of(path[i]),
                               p.accel_of(path[i], path[i + 1]), p.theta,
                               coeffs);
      return total;
    }

    void visit(long k, long m, long n) {
      if (++visited > guard)
        throw TooLargeError("brute_force_min_fuel: search guard exceeded");
      if (k == xi) {
        if (n == p.n_line && m >= p.m_depart) {
          const double fuel = path_fuel();
          if (fuel < best_fuel) {
            best_fuel = fuel;
            best_path = path;
          }
        }
        return;
      }
      // Exact prunes: the line may not be touched before tick xi and must
      // remain reachable with full acceleration.
      if (n >= p.n_line) return;
      if (n + (xi - k) * p.m_max < p.n_line) return;
      if (m + (xi - k) * p.delta_hi < p.m_depart) return;
      const long n2 = n + m;
      for (long d = p.delta_lo; d <= p.delta_hi; ++d) {
        const long m2 = m + d;
        if (m2 < p.m_min || m2 > p.m_max) continue;
        path.push_back(m2);
        visit(k + 1, m2, n2);
        path.pop_back();
      }
    }
  };

  Search search{p, coeffs, xi_ticks, guard};
  search.path.reserve(static_cast<std::size_t>(xi_ticks) + 1);
  search.path.push_back(p.m_entry);
  search.visit(0, p.m_entry, 0);
  if (search.best_fuel == kInf) return std::nullopt;
  return BruteForceResult{
      profile_to_trajectory(search.best_path, p, params, grid),
      search.best_fuel};
}

EcoBatch build_batch(const VehicleParams& params, const GridSpec& spec,
                     const SignalPlan& plan, int phi, const TimeGrid& grid,
                     const VtMicroCoefficients& coeffs, int threads) {
  if (phi < 1) throw std::invalid_argument("phi must be >= 1");
  params.validate();
  plan.validate();
  grid.validate();
  spec.validate(params, grid);
  const long max_xi =
      exact_ratio(phi * plan.cycle - plan.red, grid.theta, "phi*C - R_phi");

  std::vector<std::optional<Trajectory>> solved(
      static_cast<std::size_t>(max_xi) + 1);
  int n_threads = threads > 0 ? threads
                              : static_cast<int>(
                                    std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, 8);
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      const long xi = next.fetch_add(1);
      if (xi > max_xi) return;
      solved[static_cast<std::size_t>(xi)] =
          solve_min_fuel(xi, params, spec, grid, coeffs);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  EcoBatch batch;
  batch.t_min = -1;
  for (long xi = 0; xi <= max_xi; ++xi) {
    auto& traj = solved[static_cast<std::size_t>(xi)];
    if (!traj) continue;
    if (batch.t_min < 0) batch.t_min = xi;
    batch.entries.push_back(
        BatchEntry{xi, trajectory_fuel(*traj, coeffs), std::move(*traj)});
  }
  if (batch.entries.empty())
    throw EmptyBatchError("no feasible travel time; check parameters");
  std::sort(batch.entries.begin(), batch.entries.end(),
            [](const BatchEntry& a, const BatchEntry& b) {
              if (a.fuel != b.fuel) return a.fuel < b.fuel;
              return a.travel_ticks < b.travel_ticks;
            });

  batch.meta.theta = grid.theta;
  batch.meta.dv = spec.dv;
  batch.meta.params = params;
  batch.meta.signal = plan;
  batch.meta.phi = phi;
  batch.meta.max_travel_ticks = max_xi;
  batch.meta.coeffs = coeffs;
  batch.meta.content_hash = sha256_hex(canonical_entries_json(batch));
  return batch;
}

}  // namespace ecobatch
