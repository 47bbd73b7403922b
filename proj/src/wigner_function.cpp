#include "spincat/wigner_function.hpp"

#include <cmath>
#include <numbers>

namespace spincat {

namespace {

constexpr double kPi = std::numbers::pi;

double log_fact(int n) { return std::lgamma(n + 1.0); }

}  // namespace

double clebsch_gordan(int j1, int m1, int j2, int m2, int big_j, int big_m) {
  if (m1 + m2 != big_m) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(big_m) > big_j) return 0.0;
  if (big_j < std::abs(j1 - j2) || big_j > j1 + j2) return 0.0;
  double log_delta = log_fact(j1 + j2 - big_j) + log_fact(j1 - j2 + big_j) +
                     log_fact(-j1 + j2 + big_j) - log_fact(j1 + j2 + big_j + 1);
  double log_pre = 0.5 * (std::log(2.0 * big_j + 1) + log_delta + log_fact(j1 + m1) +
                          log_fact(j1 - m1) + log_fact(j2 + m2) + log_fact(j2 - m2) +
                          log_fact(big_j + big_m) + log_fact(big_j - big_m));
  int t_min = std::max({0, j2 - big_j - m1, j1 - big_j + m2});
  int t_max = std::min({j1 + j2 - big_j, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    double log_term = log_fact(t) + log_fact(j1 + j2 - big_j - t) + log_fact(j1 - m1 - t) +
                      log_fact(j2 + m2 - t) + log_fact(big_j - j2 + m1 + t) +
                      log_fact(big_j - j1 - m2 + t);
    sum += (t % 2 == 0 ? 1.0 : -1.0) * std::exp(log_pre - log_term);
  }
  return sum;
}

Complex SpinMultipoles::at(int k, int q) const {
  if (k < 0 || k >= static_cast<int>(rho_kq.size()) || std::abs(q) > k)
    throw std::out_of_range("SpinMultipoles: (k, q) out of range");
  if (q >= 0) return rho_kq[k](q);
  Complex v = std::conj(rho_kq[k](-q));
  return (q % 2 == 0) ? v : -v;
}

SpinMultipoles multipole_decomposition(const StateVector& state) {
  if (state.spin.is_half_integer())
    throw std::invalid_argument("multipole_decomposition: integer spin required");
  int s = state.spin.two_s / 2;
  StateVector z = rotate_state(state, Axis::Z);
  SpinMultipoles mp;
  mp.spin = state.spin;
  mp.rho_kq.resize(2 * s + 1);
  double norm_k = 1.0 / std::sqrt(2.0 * s + 1.0);
  for (int k = 0; k <= 2 * s; ++k) {
    mp.rho_kq[k] = Vector::Zero(k + 1);
    for (int q = 0; q <= k; ++q) {
      // rho_kq = sum_{m} conj(T_kq[m+q, m]) rho[m+q, m] with
      // T_kq[m', m] = sqrt((2k+1)/(2S+1)) <S m; k q | S m'>.
      Complex acc = 0.0;
      for (int m = -s; m <= s; ++m) {
        int mp_out = m + q;
        if (std::abs(mp_out) > s) continue;
        double t = std::sqrt(2.0 * k + 1.0) * norm_k *
                   clebsch_gordan(s, m, k, q, s, mp_out);
        acc += t * z.amplitude(mp_out) * std::conj(z.amplitude(m));
      }
      mp.rho_kq[k](q) = acc;
    }
  }
  return mp;
}

double wigner_value(const SpinMultipoles& mp, double theta, double phi) {
  int k_max = static_cast<int>(mp.rho_kq.size()) - 1;
  double w = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    w += std::real(mp.rho_kq[k](0)) * std::sph_legendre(k, 0, theta);
    for (int q = 1; q <= k; ++q) {
      Complex y = std::sph_legendre(k, q, theta) * std::polar(1.0, q * phi);
      w += 2.0 * std::real(mp.rho_kq[k](q) * y);
    }
  }
  return w * std::sqrt(4.0 * kPi * (mp.spin.two_s + 1.0));
}

WignerGrid wigner_function(const StateVector& state, int n_theta, int n_phi) {
  if (n_theta < 32 || n_phi < 64)
    throw std::invalid_argument("wigner_function: resolution below 32x64");
  SpinMultipoles mp = multipole_decomposition(state);
  WignerGrid grid;
  grid.theta_points = Eigen::VectorXd::LinSpaced(n_theta, 0.0, kPi);
  grid.phi_points = Eigen::VectorXd::LinSpaced(n_phi, 0.0, 2 * kPi * (n_phi - 1.0) / n_phi);
  grid.values.resize(n_theta, n_phi);
  for (int it = 0; it < n_theta; ++it)
    for (int ip = 0; ip < n_phi; ++ip)
      grid.values(it, ip) = wigner_value(mp, grid.theta_points(it), grid.phi_points(ip));
  return grid;
}

double wigner_normalization(const StateVector& state, int n_nodes) {
  SpinMultipoles mp = multipole_decomposition(state);
  // Gauss-Legendre nodes/weights on [-1, 1] for cos(theta).
  std::vector<double> x(n_nodes), w(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n_nodes + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int n = 2; n <= n_nodes; ++n) {
        double p2 = ((2.0 * n - 1.0) * xi * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      double dp = n_nodes * (xi * p1 - p0) / (xi * xi - 1.0);
      double step = p1 / dp;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double p0 = 1.0, p1 = xi;
    for (int n = 2; n <= n_nodes; ++n) {
      double p2 = ((2.0 * n - 1.0) * xi * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    double dp = n_nodes * (xi * p1 - p0) / (xi * xi - 1.0);
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  int n_phi = std::max(2 * (static_cast<int>(mp.rho_kq.size())), 8);
  double integral = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    double theta = std::acos(x[i]);
    double ring = 0.0;
    for (int ip = 0; ip < n_phi; ++ip) ring += wigner_value(mp, theta, 2 * kPi * ip / n_phi);
    integral += w[i] * ring * (2 * kPi / n_phi);
  }
  return integral / (4 * kPi);
}

int wigner_sign_changes_about_y(const StateVector& state, int resolution) {
  SpinMultipoles mp = multipole_decomposition(state);
  int changes = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= resolution; ++i) {
    double alpha = 2 * kPi * i / resolution;
    // Great circle in the x-z plane: direction (sin a, 0, cos a).
    double theta = alpha <= kPi ? alpha : 2 * kPi - alpha;
    double phi = alpha <= kPi ? 0.0 : kPi;
    double v = wigner_value(mp, theta, phi);
    if (have_prev && prev * v < 0.0) ++changes;
    if (v != 0.0) {
      prev = v;
      have_prev = true;
    }
  }
  return changes;
}

}  // namespace spincat
