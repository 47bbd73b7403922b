#include "spincat/metrology.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "spincat/wigner_d.hpp"

namespace spincat {

namespace {

constexpr double kPi = std::numbers::pi;

double quadratic_form(const Eigen::Matrix3d& cov, double theta, double phi) {
  Eigen::Vector3d n(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                    std::cos(theta));
  return 4.0 * n.dot(cov * n);
}

// Golden-section maximization of f on [a, b].
template <class F>
double golden_max(F f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

double stirling_summand(double s, double b) {
  return std::sqrt(s / (kPi * b * (s - b))) * (1.0 + 1.0 / (24.0 * b)) /
         ((1.0 + 1.0 / (12.0 * b)) * (1.0 + 1.0 / (12.0 * b)));
}

int integer_s(Spin spin, const char* who) {
  if (spin.is_half_integer())
    throw std::invalid_argument(std::string(who) + ": integer spin required");
  return spin.two_s / 2;
}

}  // namespace

Eigen::Vector3d GeneratorDirection::unit() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Eigen::Matrix3d spin_covariance(const StateVector& state) {
  OperatorSet ops = build_operators(state.spin, state.basis);
  const Matrix* s[3] = {&ops.sx.matrix, &ops.sy.matrix, &ops.sz.matrix};
  const Vector& psi = state.amplitudes;
  Eigen::Vector3d mean;
  std::array<Vector, 3> applied;
  for (int i = 0; i < 3; ++i) {
    applied[i] = (*s[i]) * psi;
    mean(i) = std::real(psi.dot(applied[i]));
  }
  Eigen::Matrix3d cov;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double sym = std::real(applied[i].dot(applied[j]));  // Re<S_i S_j> symmetrized
      cov(i, j) = cov(j, i) = sym - mean(i) * mean(j);
    }
  return cov;
}

double qfi(const StateVector& state, const GeneratorDirection& g) {
  Eigen::Vector3d n = g.unit();
  return 4.0 * n.dot(spin_covariance(state) * n);
}

QfiOptimum qfi_optimum(const StateVector& state) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(spin_covariance(state));
  Eigen::Vector3d n = es.eigenvectors().col(2);
  if (n(2) < 0) n = -n;
  QfiOptimum opt;
  opt.value = 4.0 * es.eigenvalues()(2);
  opt.direction.theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  opt.direction.phi = std::atan2(n(1), n(0));
  if (opt.direction.phi < 0) opt.direction.phi += 2 * kPi;
  return opt;
}

QfiScan qfi_scan(const StateVector& state, int grid_resolution) {
  if (grid_resolution < 8)
    throw std::invalid_argument("qfi_scan: grid_resolution >= 8 required");
  Eigen::Matrix3d cov = spin_covariance(state);

  QfiScan scan;
  int n_theta = grid_resolution + 1;
  int n_phi = 2 * grid_resolution;
  scan.grid.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  scan.values.resize(static_cast<Eigen::Index>(n_theta) * n_phi);
  double d_theta = kPi / grid_resolution;
  double d_phi = 2 * kPi / n_phi;
  Eigen::Index k = 0;
  double best = -1.0, best_theta = 0.0, best_phi = 0.0;
  for (int it = 0; it < n_theta; ++it)
    for (int ip = 0; ip < n_phi; ++ip, ++k) {
      double theta = it * d_theta, phi = ip * d_phi;
      double v = quadratic_form(cov, theta, phi);
      scan.grid.push_back({theta, phi});
      scan.values(k) = v;
      if (v > best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }

  // Coordinate-wise golden-section refinement around the grid maximum.
  double theta = best_theta, phi = best_phi;
  for (int round = 0; round < 80; ++round) {
    double t_prev = theta, p_prev = phi;
    theta = golden_max([&](double t) { return quadratic_form(cov, t, phi); },
                       theta - d_theta, theta + d_theta, 1e-13);
    phi = golden_max([&](double p) { return quadratic_form(cov, theta, p); },
                     phi - d_phi, phi + d_phi, 1e-13);
    if (std::abs(theta - t_prev) + std::abs(phi - p_prev) < 1e-12) break;
  }
  scan.optimum.direction = {theta, phi};
  scan.optimum.value = quadratic_form(cov, theta, phi);
  return scan;
}

double m_crit(Spin spin, int initial_m) {
  double s = spin.s();
  if (initial_m < 0 || initial_m > s) throw std::invalid_argument("m_crit: m0 outside [0, S]");
  return std::sqrt((s * (s + 1) - double(initial_m) * initial_m) / 2.0);
}

ApproxPair p_cat(Spin spin) {
  int s = integer_s(spin, "p_cat");
  if (s < 1) throw std::invalid_argument("p_cat: S >= 1 required");
  double log_exact = std::lgamma(2.0 * s + 1) - 2.0 * s * std::numbers::ln2 -
                     2.0 * std::lgamma(s + 1.0);
  return {2.0 * std::exp(log_exact), 2.0 / std::sqrt(kPi * s)};
}

double p_crit(Spin spin, int initial_m) {
  int s = integer_s(spin, "p_crit");
  if (s < 1) throw std::invalid_argument("p_crit: S >= 1 required");
  int m_start = static_cast<int>(std::ceil(m_crit(spin, initial_m)));
  double total = 0.0;
  for (int m = m_start; m <= s; ++m) {
    LogD d = log_d_m0(spin, m);
    if (d.sign == 0) continue;
    total += 2.0 * std::exp(2.0 * d.log_abs);
  }
  return total;
}

int p_crit_term_count(Spin spin, int initial_m) {
  int s = integer_s(spin, "p_crit_term_count");
  int m_start = static_cast<int>(std::ceil(m_crit(spin, initial_m)));
  return (s - m_start) / 2;
}

ApproxPair alpha_r(Spin spin, int r) {
  int s = integer_s(spin, "alpha_r");
  if (r < 0 || s - 2 * r < 0) throw std::invalid_argument("alpha_r: need 0 <= r <= S/2");
  LogD top = log_d_m0(spin, s);
  double exact = 0.0, stirling = 1.0;
  for (int b = 0; b <= r; ++b) {
    LogD d = log_d_m0(spin, s - 2 * b);
    exact += std::exp(2.0 * (d.log_abs - top.log_abs));
    if (b >= 1) stirling += stirling_summand(s, b);
  }
  return {exact, stirling};
}

double alpha_r_lower_bound(Spin spin, int r) {
  int s = integer_s(spin, "alpha_r_lower_bound");
  if (r < 0 || s - 2 * r < 0)
    throw std::invalid_argument("alpha_r_lower_bound: need 0 <= r <= S/2");
  if (r == 0) return 1.0;
  // Composite Simpson over [1, r+1]; the integrand is smooth there.
  int n = 2000;
  double a = 1.0, b = r + 1.0, h = (b - a) / n;
  double sum = stirling_summand(s, a) + stirling_summand(s, b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * stirling_summand(s, a + i * h);
  return 1.0 + sum * h / 3.0;
}

double p_crit_piecewise(Spin spin) {
  int s = integer_s(spin, "p_crit_piecewise");
  int r = p_crit_term_count(spin, 0);
  return 2.0 * alpha_r(spin, r).exact / std::sqrt(kPi * s);
}

double p_crit_limit(double f) {
  if (f < 0.0 || f > 4.0) throw std::invalid_argument("p_crit_limit: f outside [0, 4]");
  double rf = std::sqrt(f);
  return (4.0 / kPi) * std::atan(std::sqrt((2.0 - rf) / (2.0 + rf)));
}

}  // namespace spincat
