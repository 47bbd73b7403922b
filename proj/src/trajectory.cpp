#include "spincat/trajectory.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "spincat/rng.hpp"

namespace spincat {

namespace {

// Populations of reflection pairs {+m,-m}, keyed by two_m >= 0.
double pair_pop_by_two_m(const StateVector& y, int two_m) {
  int hi = (y.spin.two_s + two_m) / 2;
  int lo = (y.spin.two_s - two_m) / 2;
  double p = std::norm(y.amplitudes(hi));
  if (two_m > 0) p += std::norm(y.amplitudes(lo));
  return p;
}

int dominant_pair_two_m(const StateVector& y) {
  int best = y.spin.two_s % 2;
  double best_p = -1.0;
  for (int two_m = y.spin.two_s % 2; two_m <= y.spin.two_s; two_m += 2) {
    double p = pair_pop_by_two_m(y, two_m);
    if (p > best_p) {
      best_p = p;
      best = two_m;
    }
  }
  return best;
}

// Parity of the dominant Kitten pair: sign structure of (c_m, c_-m).
std::optional<Parity> pair_parity(const StateVector& y, int two_m) {
  if (y.spin.is_half_integer() || two_m == 0) return std::nullopt;
  int m = two_m / 2;
  KittenSpec plus(y.spin, m, Parity::Plus);
  KittenSpec minus(y.spin, m, Parity::Minus);
  double p_plus = std::norm(overlap(kitten_state(plus), y));
  double p_minus = std::norm(overlap(kitten_state(minus), y));
  return p_plus >= p_minus ? Parity::Plus : Parity::Minus;
}

}  // namespace

void TrajectoryConfig::validate() const {
  if (upsilon <= 0) throw std::invalid_argument("TrajectoryConfig: upsilon must be > 0");
  if (t_max <= 0) throw std::invalid_argument("TrajectoryConfig: t_max must be > 0");
  if (settle_epsilon <= 0 || settle_epsilon >= 1)
    throw std::invalid_argument("TrajectoryConfig: settle_epsilon must be in (0,1)");
  if (sampler == JumpSampler::BernoulliDt) {
    double s = spin.s();
    if (dt <= 0 || dt * 2.0 * upsilon * s * s >= 0.1)
      throw std::invalid_argument("TrajectoryConfig: Bernoulli dt must satisfy dt*2*upsilon*S^2 < 0.1");
  }
  if (initial && !(initial->spin == spin))
    throw std::invalid_argument("TrajectoryConfig: initial state spin mismatch");
}

StateVector TrajectoryConfig::initial_state_y() const {
  if (initial) {
    StateVector y = rotate_state(*initial, Axis::Y);
    y.normalize();
    return y;
  }
  if (spin.is_half_integer())
    throw std::invalid_argument("TrajectoryConfig: half-integer spin needs an explicit initial state");
  return rotate_state(dicke_state(spin, 0, Axis::X), Axis::Y);
}

StateVector decay_between_jumps(const StateVector& state, double dt, double upsilon) {
  if (dt < 0) throw std::invalid_argument("decay_between_jumps: dt < 0");
  StateVector out = state;
  double s = state.spin.s();
  for (int i = 0; i < state.spin.dim(); ++i) {
    double m = i - s;
    out.amplitudes(i) *= std::exp(-upsilon * m * m * dt);
  }
  double n = out.norm();
  if (!(n > 0.0)) throw NumericError("decay_between_jumps: state decayed to zero");
  out.amplitudes /= n;
  return out;
}

double jump_rate(const StateVector& state, double upsilon) {
  double s = state.spin.s();
  double rate = 0.0;
  for (int i = 0; i < state.spin.dim(); ++i) {
    double m = i - s;
    rate += m * m * std::norm(state.amplitudes(i));
  }
  return 2.0 * upsilon * rate;
}

std::optional<double> sample_next_jump(const StateVector& state, double upsilon,
                                       std::mt19937_64& rng) {
  // Compact the decaying components (rate 2 upsilon m^2 each); populations
  // below 1e-20 are beneath double precision in the survival sum.
  double s = state.spin.s();
  double dark = 0.0;  // mass that never jumps (m = 0 component)
  std::vector<double> pop_v, rate_v;
  pop_v.reserve(state.spin.dim());
  rate_v.reserve(state.spin.dim());
  for (int i = 0; i < state.spin.dim(); ++i) {
    double m = i - s;
    double p = std::norm(state.amplitudes(i));
    if (m == 0.0)
      dark += p;
    else if (p > 1e-20) {
      pop_v.push_back(p);
      rate_v.push_back(2.0 * upsilon * m * m);
    }
  }
  Eigen::Map<const Eigen::ArrayXd> pops(pop_v.data(), pop_v.size());
  Eigen::Map<const Eigen::ArrayXd> rates(rate_v.data(), rate_v.size());

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  if (u <= dark || pop_v.empty()) return std::nullopt;

  auto survival_and_slope = [&](double t) {
    Eigen::ArrayXd e = (-t * rates).exp();
    return std::pair<double, double>{dark + (pops * e).sum(), -(pops * rates * e).sum()};
  };

  // Bracket the root of survival(t) = u, then safeguarded Newton.
  double mean_rate = (pops * rates).sum() / pops.sum();
  double lo = 0.0, hi = 1.0 / mean_rate;
  int grow = 0;
  while (survival_and_slope(hi).first > u) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 2100) throw NumericError("sample_next_jump: bracket growth failed");
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    auto [f, df] = survival_and_slope(t);
    if (f > u)
      lo = t;
    else
      hi = t;
    double step = (f - u) / df;  // df < 0, survival strictly decreasing
    double t_next = t - step;
    if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * std::max(1.0, hi) || std::abs(t_next - t) <= 1e-15 * t)
      return t_next;
    t = t_next;
  }
  throw NumericError("sample_next_jump: root refinement failed to converge");
}

StateVector apply_jump(const StateVector& state) {
  StateVector out = state;
  double s = state.spin.s();
  for (int i = 0; i < state.spin.dim(); ++i) out.amplitudes(i) *= (i - s);
  double n = out.norm();
  if (!(n > 0.0))
    throw std::domain_error("apply_jump: state supported only on m = 0 cannot jump");
  out.amplitudes /= n;
  return out;
}

double pair_population(const StateVector& state_y, int m) {
  if (state_y.spin.is_half_integer())
    throw std::invalid_argument("pair_population: integer spin required for integer m");
  if (m < 0 || 2 * m > state_y.spin.two_s) throw std::out_of_range("pair_population: m out of range");
  return pair_pop_by_two_m(state_y, 2 * m);
}

int dominant_pair(const StateVector& state_y) {
  if (state_y.spin.is_half_integer())
    throw std::invalid_argument("dominant_pair: integer spin required");
  return dominant_pair_two_m(state_y) / 2;
}

TrajectoryResult run_trajectory(const TrajectoryConfig& config) {
  config.validate();
  StateVector y = config.initial_state_y();
  auto rng = make_engine(config.seed, 0);

  TrajectoryResult result;
  double threshold = 1.0 - config.settle_epsilon;
  bool settled = false;

  auto mark_settled = [&](double t) {
    int two_m = dominant_pair_two_m(y);
    if (pair_pop_by_two_m(y, two_m) < threshold) return;
    settled = true;
    result.settle_time = t;
    if (!y.spin.is_half_integer()) result.settled_m = two_m / 2;
    result.settled_parity = pair_parity(y, two_m);
  };

  double t = 0.0;
  mark_settled(t);
  auto done = [&] { return settled && config.stop_after_settle; };

  if (config.sampler == JumpSampler::ExactWaitingTime) {
    while (t < config.t_max && !done()) {
      std::optional<double> wait = sample_next_jump(y, config.upsilon, rng);
      if (!wait) {
        // No jump ever: the state relaxes toward the dark m = 0 component.
        // Locate the threshold crossing, if it happens before t_max.
        if (!settled && !y.spin.is_half_integer()) {
          double lo = 0.0, hi = config.t_max - t;
          StateVector probe = decay_between_jumps(y, hi, config.upsilon);
          if (pair_population(probe, 0) >= threshold) {
            for (int it = 0; it < 200 && hi - lo > 1e-12 * config.t_max; ++it) {
              double mid = 0.5 * (lo + hi);
              if (pair_population(decay_between_jumps(y, mid, config.upsilon), 0) >= threshold)
                hi = mid;
              else
                lo = mid;
            }
            y = decay_between_jumps(y, hi, config.upsilon);
            t += hi;
            mark_settled(t);
          }
        }
        y = decay_between_jumps(y, config.t_max - t, config.upsilon);
        t = config.t_max;
        break;
      }
      if (t + *wait >= config.t_max) {
        y = decay_between_jumps(y, config.t_max - t, config.upsilon);
        t = config.t_max;
        if (!settled) mark_settled(t);
        break;
      }
      y = decay_between_jumps(y, *wait, config.upsilon);
      t += *wait;
      if (!settled) mark_settled(t);
      y = apply_jump(y);
      result.jump_times.push_back(t);
      if (!settled) mark_settled(t);
    }
  } else {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    while (t + config.dt <= config.t_max && !done()) {
      y = decay_between_jumps(y, config.dt, config.upsilon);
      t += config.dt;
      if (!settled) mark_settled(t);
      double p_jump = jump_rate(y, config.upsilon) * config.dt;
      if (unif(rng) < p_jump) {
        y = apply_jump(y);
        result.jump_times.push_back(t);
        if (!settled) mark_settled(t);
      }
    }
  }

  result.final_state = y;
  return result;
}

CycleHistogram run_histogram(const TrajectoryConfig& config, long n_trajectories,
                             int worker_count) {
  if (n_trajectories < 1) throw std::invalid_argument("run_histogram: n_trajectories >= 1 required");
  if (worker_count < 1) worker_count = 1;
  config.validate();

  std::vector<CycleHistogram> partial(worker_count);
  std::atomic<long> next{0};
  auto work = [&](int w) {
    CycleHistogram& h = partial[w];
    for (long i = next.fetch_add(1); i < n_trajectories; i = next.fetch_add(1)) {
      TrajectoryConfig c = config;
      c.seed = stream_seed(config.seed, static_cast<std::uint64_t>(i));
      c.stop_after_settle = true;  // only settled_m feeds the histogram
      TrajectoryResult r = run_trajectory(c);
      if (r.settled_m)
        ++h.counts[*r.settled_m];
      else
        ++h.unsettled;
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(worker_count);
  for (int w = 0; w < worker_count; ++w) threads.emplace_back(work, w);
  for (auto& th : threads) th.join();

  CycleHistogram out;
  out.spin = config.spin;
  out.n_trajectories = n_trajectories;
  for (const auto& h : partial) {
    out.unsettled += h.unsettled;
    for (const auto& [m, c] : h.counts) out.counts[m] += c;
  }
  return out;
}

std::optional<int> estimate_cycle_from_rate(const std::vector<double>& jump_times,
                                            double window, double t_end, double upsilon) {
  if (window <= 0 || upsilon <= 0)
    throw std::invalid_argument("estimate_cycle_from_rate: window and upsilon must be > 0");
  long count = 0;
  for (double tj : jump_times)
    if (tj > t_end - window && tj <= t_end) ++count;
  if (count < 2) return std::nullopt;
  return static_cast<int>(std::llround(std::sqrt(count / (2.0 * upsilon * window))));
}

}  // namespace spincat
