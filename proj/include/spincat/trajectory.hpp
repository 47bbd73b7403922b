#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "spincat/spin.hpp"

namespace spincat {

/// Raised when an iteration fails to converge or a state degenerates.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class JumpSampler { ExactWaitingTime, BernoulliDt };

struct TrajectoryConfig {
  Spin spin;
  double upsilon = 1.0;
  double t_max = 50.0;
  std::uint64_t seed = 0;
  JumpSampler sampler = JumpSampler::ExactWaitingTime;
  double dt = 0.0;  // Bernoulli step; must satisfy dt * 2 upsilon S^2 < 0.1
  double settle_epsilon = 1e-6;
  std::optional<StateVector> initial;  // default |S,0>_x
  // End the run at the settling event instead of t_max (used by histogram
  // ensembles, where only settled_m matters; leaves counts unchanged).
  bool stop_after_settle = false;

  void validate() const;
  StateVector initial_state_y() const;
};

struct TrajectoryResult {
  std::vector<double> jump_times;
  std::optional<int> settled_m;
  std::optional<Parity> settled_parity;
  std::optional<double> settle_time;
  StateVector final_state;  // y basis
};

struct CycleHistogram {
  Spin spin;
  std::map<int, long> counts;
  long unsettled = 0;
  long n_trajectories = 0;
};

/// Non-Hermitian decay: c_m -> c_m exp(-upsilon m^2 dt), renormalized.
StateVector decay_between_jumps(const StateVector& state, double dt, double upsilon);

/// 2 upsilon <Sy^2> for a normalized y-basis state.
double jump_rate(const StateVector& state, double upsilon);

/// Exact waiting time until the next jump: inverts the survival function
/// sum_m |c_m|^2 exp(-2 upsilon m^2 t) = u by bracketed bisection. Returns
/// nullopt when the draw lands in the dark (no-jump-ever) mass |c_0|^2.
std::optional<double> sample_next_jump(const StateVector& state, double upsilon,
                                       std::mt19937_64& rng);

/// c_m -> m c_m, renormalized. Errors on states supported only at m = 0.
StateVector apply_jump(const StateVector& state);

TrajectoryResult run_trajectory(const TrajectoryConfig& config);

/// Ensemble of independently seeded trajectories (seed_i derived from the
/// master seed); result is identical for any worker_count.
CycleHistogram run_histogram(const TrajectoryConfig& config, long n_trajectories,
                             int worker_count);

/// Invert the photoemission-rate law: m_hat = round(sqrt(count / (2 upsilon w)))
/// from the jump count in the terminal window (t_end - window, t_end].
std::optional<int> estimate_cycle_from_rate(const std::vector<double>& jump_times,
                                            double window, double t_end, double upsilon);

/// Population of the {+m,-m} pair (|c_0|^2 for m = 0).
double pair_population(const StateVector& state_y, int m);

/// Pair with the largest population.
int dominant_pair(const StateVector& state_y);

}  // namespace spincat
