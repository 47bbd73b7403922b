#include "spincat/ensemble.hpp"

#include <cmath>
#include <limits>

#include "spincat/wigner_d.hpp"

namespace spincat {

namespace {

double log_binom(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// <p, (m-sigma/2); 1/2, sigma/2 | j, m> for j = p +- 1/2; doubled arguments,
// sigma in {+1, -1}.
double cg_half(int two_p, int two_j, int two_m, int sigma) {
  if (std::abs(two_m) > two_j || std::abs(two_m - sigma) > two_p) return 0.0;
  double j = 0.5 * two_j, m = 0.5 * two_m;
  if (two_j == two_p + 1)
    return sigma > 0 ? std::sqrt((j + m) / (2 * j)) : std::sqrt((j - m) / (2 * j));
  if (two_j == two_p - 1)
    return sigma > 0 ? -std::sqrt((j - m + 1) / (2 * j + 2))
                     : std::sqrt((j + m + 1) / (2 * j + 2));
  throw std::logic_error("cg_half: j must be p +- 1/2");
}

int qubit_index(int sigma) { return sigma > 0 ? 1 : 0; }

}  // namespace

double sector_degeneracy(int n_particles, int two_j) {
  if (two_j < 0 || two_j > n_particles || (n_particles - two_j) % 2 != 0)
    throw std::invalid_argument("sector_degeneracy: invalid sector");
  double k = (n_particles - two_j) / 2;
  double d = std::exp(log_binom(n_particles, k));
  if (k >= 1) d -= std::exp(log_binom(n_particles, k - 1));
  return std::round(d);
}

PermInvariantState PermInvariantState::zero(int n_particles) {
  if (n_particles < 1) throw std::invalid_argument("PermInvariantState: N >= 1 required");
  PermInvariantState st;
  st.n_particles = n_particles;
  for (int tj = n_particles; tj >= 0; tj -= 2) {
    st.two_j.push_back(tj);
    st.degeneracy.push_back(sector_degeneracy(n_particles, tj));
    st.blocks.emplace_back(Matrix::Zero(tj + 1, tj + 1));
    if (tj <= 1) break;
  }
  return st;
}

PermInvariantState PermInvariantState::from_pure(int n_particles, const StateVector& psi) {
  if (psi.spin.two_s != n_particles)
    throw std::invalid_argument("PermInvariantState::from_pure: state spin must be N/2");
  PermInvariantState st = zero(n_particles);
  StateVector z = rotate_state(psi, Axis::Z);
  st.blocks[0] = z.amplitudes * z.amplitudes.adjoint();
  return st;
}

int PermInvariantState::block_index(int two_j_value) const {
  int idx = (n_particles - two_j_value) / 2;
  if (two_j_value < 0 || idx < 0 || idx >= static_cast<int>(blocks.size()) ||
      two_j[idx] != two_j_value)
    throw std::out_of_range("PermInvariantState: no such sector");
  return idx;
}

double PermInvariantState::trace() const {
  double t = 0.0;
  for (std::size_t k = 0; k < blocks.size(); ++k)
    t += degeneracy[k] * blocks[k].trace().real();
  return t;
}

double PermInvariantState::hermiticity_defect() const {
  double d = 0.0;
  for (const Matrix& b : blocks)
    d = std::max(d, (b - Matrix(b.adjoint())).cwiseAbs().maxCoeff());
  return d;
}

double PermInvariantState::min_eigenvalue() const {
  double lo = 0.0;
  for (const Matrix& b : blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + Matrix(b.adjoint())));
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

void EnsembleConfig::validate() const {
  if (n_particles < 1) throw std::invalid_argument("EnsembleConfig: N >= 1 required");
  if (n_particles > n_ceiling)
    throw std::invalid_argument("EnsembleConfig: N exceeds the configured ceiling");
  if (upsilon < 0) throw std::invalid_argument("EnsembleConfig: upsilon must be >= 0");
  if (upsilon == 0 && gamma_eff == 0)
    throw std::invalid_argument("EnsembleConfig: at least one rate must be positive");
  if (gamma_eff < 0) throw std::invalid_argument("EnsembleConfig: gamma_eff must be >= 0");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw std::invalid_argument("EnsembleConfig: t_grid must be ascending and non-negative");
  }
  if (initial && initial->spin.two_s != n_particles)
    throw std::invalid_argument("EnsembleConfig: initial state spin must equal N/2");
  if (!initial && n_particles % 2 != 0)
    throw std::invalid_argument("EnsembleConfig: odd N needs an explicit initial state");
}

PermInvariantState EnsembleConfig::initial_state() const {
  validate();
  if (initial) {
    StateVector psi = *initial;
    psi.normalize();
    return PermInvariantState::from_pure(n_particles, psi);
  }
  return PermInvariantState::from_pure(n_particles,
                                       dicke_state(Spin{n_particles}, 0, Axis::X));
}

EnsembleGenerator::EnsembleGenerator(const EnsembleConfig& config) : config_(config) {
  config_.validate();
  int n = config_.n_particles;
  PermInvariantState proto = PermInvariantState::zero(n);
  for (int tj : proto.two_j) {
    Matrix sy = op_sy(Spin{tj});
    sy_sq_.push_back(sy * sy);
    sy_.push_back(std::move(sy));
  }

  if (config_.gamma_eff > 0.0) {
    local_anticommutator_ = config_.gamma_eff * 1.25 * n;  // sum_A A^dag A = (5/4) I per atom
    // Single-qubit jump operators: sigma_z/2, sigma_+, sigma_- (index 0 = down).
    std::vector<Eigen::Matrix2d> ops(3, Eigen::Matrix2d::Zero());
    ops[0](0, 0) = -0.5;
    ops[0](1, 1) = 0.5;
    ops[1](1, 0) = 1.0;  // sigma_+
    ops[2](0, 1) = 1.0;  // sigma_-
    int two_p_min = (n - 1) % 2;
    for (int two_p = n - 1; two_p >= two_p_min; two_p -= 2) {
      double deg_p = sector_degeneracy(n - 1, two_p);
      for (int two_j : {two_p + 1, two_p - 1}) {
        if (two_j < 0 || two_j > n || (n - two_j) % 2 != 0) continue;
        int src = proto.block_index(two_j);
        for (int two_jp : {two_p + 1, two_p - 1}) {
          if (two_jp < 0 || two_jp > n || (n - two_jp) % 2 != 0) continue;
          int dst = proto.block_index(two_jp);
          double weight = n * deg_p / proto.degeneracy[dst];
          for (const Eigen::Matrix2d& a : ops) {
            Matrix e = Matrix::Zero(two_jp + 1, two_j + 1);
            bool nonzero = false;
            for (int im = 0; im <= two_j; ++im) {
              int two_m = 2 * im - two_j;
              for (int sigma : {-1, 1}) {
                double c_in = cg_half(two_p, two_j, two_m, sigma);
                if (c_in == 0.0) continue;
                int two_m_sub = two_m - sigma;
                for (int sigma_p : {-1, 1}) {
                  double amp = a(qubit_index(sigma_p), qubit_index(sigma));
                  if (amp == 0.0) continue;
                  int two_mp = two_m_sub + sigma_p;
                  double c_out = cg_half(two_p, two_jp, two_mp, sigma_p);
                  if (c_out == 0.0) continue;
                  e((two_mp + two_jp) / 2, im) += c_out * amp * c_in;
                  nonzero = true;
                }
              }
            }
            if (nonzero) sandwich_.push_back({src, dst, weight, std::move(e)});
          }
        }
      }
    }
  }
}

PermInvariantState EnsembleGenerator::apply(const PermInvariantState& state) const {
  PermInvariantState out = PermInvariantState::zero(config_.n_particles);
  double two_upsilon = 2.0 * config_.upsilon;
  for (std::size_t k = 0; k < state.blocks.size(); ++k) {
    const Matrix& rho = state.blocks[k];
    out.blocks[k] = two_upsilon * (sy_[k] * rho * sy_[k] -
                                   0.5 * (sy_sq_[k] * rho + rho * sy_sq_[k]));
    if (local_anticommutator_ > 0.0) out.blocks[k] -= local_anticommutator_ * rho;
  }
  if (config_.gamma_eff > 0.0) {
    for (const SandwichTerm& term : sandwich_) {
      const Matrix& rho = state.blocks[term.src_block];
      out.blocks[term.dst_block] +=
          (config_.gamma_eff * term.weight) * (term.e * rho * term.e.adjoint());
    }
  }
  return out;
}

EnsembleGenerator build_liouvillian(const EnsembleConfig& config) {
  return EnsembleGenerator(config);
}

namespace {

Vector flatten(const PermInvariantState& st) {
  Eigen::Index total = 0;
  for (const Matrix& b : st.blocks) total += b.size();
  Vector v(total);
  Eigen::Index at = 0;
  for (const Matrix& b : st.blocks) {
    v.segment(at, b.size()) = Eigen::Map<const Vector>(b.data(), b.size());
    at += b.size();
  }
  return v;
}

void unflatten(const Vector& v, PermInvariantState& st) {
  Eigen::Index at = 0;
  for (Matrix& b : st.blocks) {
    b = Eigen::Map<const Matrix>(v.data() + at, b.rows(), b.cols());
    at += b.size();
  }
}

}  // namespace

std::vector<PermInvariantState> evolve(const PermInvariantState& initial,
                                       const EnsembleGenerator& generator,
                                       const std::vector<double>& t_grid) {
  PermInvariantState work = initial;
  auto rhs = [&](const Vector& v) {
    unflatten(v, work);
    return flatten(generator.apply(work));
  };

  // Dormand-Prince 5(4) coefficients.
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double tol = 1e-9;
  double t = 0.0;
  Vector y = flatten(initial);
  double rate_scale = std::max(2.0 * generator.config().upsilon *
                                   0.25 * generator.config().n_particles *
                                   generator.config().n_particles,
                               generator.config().gamma_eff * generator.config().n_particles);
  double h = 0.01 / std::max(rate_scale, 1e-300);

  std::vector<PermInvariantState> snapshots;
  snapshots.reserve(t_grid.size());
  PermInvariantState snap = initial;

  for (double t_target : t_grid) {
    if (t_target < t) throw std::invalid_argument("evolve: t_grid must be ascending");
    while (t < t_target) {
      bool clipped = false;
      double step = h;
      if (t + step >= t_target) {
        step = t_target - t;
        clipped = true;
      }
      Vector k1 = rhs(y);
      Vector k2 = rhs(y + step * (a21 * k1));
      Vector k3 = rhs(y + step * (a31 * k1 + a32 * k2));
      Vector k4 = rhs(y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      Vector k5 = rhs(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      Vector k6 = rhs(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Vector y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      Vector k7 = rhs(y_new);
      Vector err_vec =
          step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double err = err_vec.cwiseAbs().maxCoeff();
      if (err <= tol) {
        t += step;
        y = std::move(y_new);
        unflatten(y, snap);
        if (std::abs(snap.trace() - 1.0) > 1e-8)
          throw NumericError("evolve: trace drift exceeded 1e-8");
      }
      double factor = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
      factor = std::clamp(factor, 0.2, 5.0);
      if (!clipped || err > tol) h = step * factor;
      if (h < 1e-14 * std::max(t_target, 1.0))
        throw NumericError("evolve: step-size underflow (stiffness)");
    }
    unflatten(y, snap);
    snapshots.push_back(snap);
  }
  return snapshots;
}

double kitten_fidelity(const PermInvariantState& state, const KittenSpec& spec) {
  if (spec.spin.two_s != state.n_particles)
    throw std::invalid_argument("kitten_fidelity: spec spin must be N/2");
  StateVector chi = rotate_state(kitten_state(spec), Axis::Z);
  return std::real(chi.amplitudes.dot(state.blocks[0] * chi.amplitudes));
}

namespace {
double d_squared(Spin spin, int m) {
  LogD d = log_d_m0(spin, m);
  return d.sign == 0 ? 0.0 : std::exp(2.0 * d.log_abs);
}
}  // namespace

double kitten_fit_growth(Spin spin, int m, double upsilon, double gamma_eff, int n, double t) {
  return d_squared(spin, m) * std::exp(-gamma_eff * n * t) *
         (1.0 - std::exp(-4.0 * upsilon * m * m * t));
}

double kitten_fit_decay(Spin spin, int m, double upsilon, double gamma_eff, int n, double t) {
  return d_squared(spin, m) *
         (std::exp(-gamma_eff * n * t) + std::exp(-4.0 * upsilon * m * m * t));
}

DerivedRates rates(const RateParams& params) {
  if (params.delta == 0.0) throw std::invalid_argument("rates: delta must be nonzero");
  if (params.kappa <= 0.0) throw std::invalid_argument("rates: kappa must be > 0");
  DerivedRates out;
  double kappa_total = params.kappa_in + params.kappa_out;
  out.n_bar_effective =
      kappa_total > 0.0 ? params.kappa_in * params.n_th / kappa_total : params.n_bar;
  double d2 = params.delta * params.delta;
  out.upsilon = (2.0 * out.n_bar_effective + 1.0) * params.g * params.g * params.omega_rabi *
                params.omega_rabi / (72.0 * params.kappa * d2);
  out.gamma_eff = params.gamma * params.omega_rabi * params.omega_rabi / (12.0 * d2);
  out.cooperativity = params.gamma > 0.0
                          ? 2.0 * params.g * params.g / (params.kappa * params.gamma)
                          : std::numeric_limits<double>::infinity();
  out.ratio = out.upsilon > 0.0 ? out.gamma_eff / out.upsilon : 0.0;
  out.inverse_upsilon = out.upsilon > 0.0 ? 1.0 / out.upsilon : 0.0;
  return out;
}

TimescaleCheck timescale_check(double upsilon, double gamma_eff, int n_particles) {
  TimescaleCheck check;
  check.ok = upsilon > gamma_eff * n_particles;
  check.margin = gamma_eff > 0.0 ? upsilon / (gamma_eff * n_particles)
                                 : std::numeric_limits<double>::max();
  return check;
}

}  // namespace spincat
