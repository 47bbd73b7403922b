#include "spincat/secret.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace spincat {

namespace {

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

int kitten_s(const KittenSpec& spec) { return spec.spin.two_s / 2; }

void check_qubit_count(int n, const char* who) {
  if (n > kMaxBruteForceQubits)
    throw std::invalid_argument(std::string(who) + ": qubit count exceeds brute-force ceiling");
}

// Coefficient vector over y-occupation bitmasks of n qubits: +1 where the
// popcount is k_plus, sign where it is k_minus; normalized.
Eigen::VectorXd occupation_sum(int n, int k_plus, int k_minus, int sign, const char* who) {
  check_qubit_count(n, who);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(std::int64_t(1) << n);
  for (std::int64_t mask = 0; mask < c.size(); ++mask) {
    int pc = std::popcount(static_cast<std::uint64_t>(mask));
    double v = 0.0;
    if (pc == k_plus) v += 1.0;
    if (pc == k_minus) v += sign;
    c(mask) = v;
  }
  double nrm = c.norm();
  if (nrm <= 0.0) throw std::domain_error(std::string(who) + ": empty permutation sum");
  return c / nrm;
}

int kitten_qubit_sign(const KittenSpec& spec) {
  int sign_s = (kitten_s(spec) % 2 == 0) ? +1 : -1;
  return parity_sign(spec.parity) * sign_s;
}

// Apply a single-qubit 2x2 matrix on qubit k of a 2^n amplitude vector.
void apply_single_qubit(Vector& psi, const Matrix& u, int k) {
  std::int64_t stride = std::int64_t(1) << k;
  for (std::int64_t base = 0; base < psi.size(); base += 2 * stride)
    for (std::int64_t i = base; i < base + stride; ++i) {
      Complex a = psi(i), b = psi(i + stride);
      psi(i) = u(0, 0) * a + u(0, 1) * b;
      psi(i + stride) = u(1, 0) * a + u(1, 1) * b;
    }
}

}  // namespace

double EavesdropState::norm() const {
  return std::sqrt(amp_a0_xi_e0 * amp_a0_xi_e0 + amp_a1_xibar_e0 * amp_a1_xibar_e0 +
                   amp_a1_xi_e1 * amp_a1_xi_e1);
}

double EavesdropState::alice_bob_weight() const {
  return amp_a0_xi_e0 * amp_a0_xi_e0 + amp_a1_xibar_e0 * amp_a1_xibar_e0;
}

double EavesdropState::alice_evan_weight() const { return amp_a1_xi_e1 * amp_a1_xi_e1; }

Eigen::VectorXd kitten_qubit_coefficients(const KittenSpec& spec) {
  int s = kitten_s(spec);
  if (spec.degenerate()) return occupation_sum(2 * s, s, s, 0, "kitten_qubit_coefficients");
  return occupation_sum(2 * s, s + spec.m, s - spec.m, kitten_qubit_sign(spec),
                        "kitten_qubit_coefficients");
}

Eigen::VectorXd xi_coefficients(const KittenSpec& spec) {
  int s = kitten_s(spec);
  if (spec.m < 1 || spec.m >= s)
    throw std::invalid_argument("xi_coefficients: need 1 <= m < S");
  return occupation_sum(2 * s - 1, s + spec.m, s - spec.m, kitten_qubit_sign(spec),
                        "xi_coefficients");
}

Eigen::VectorXd xibar_coefficients(const KittenSpec& spec) {
  int s = kitten_s(spec);
  if (spec.m < 1 || spec.m >= s)
    throw std::invalid_argument("xibar_coefficients: need 1 <= m < S");
  return occupation_sum(2 * s - 1, s + spec.m - 1, s - spec.m - 1, kitten_qubit_sign(spec),
                        "xibar_coefficients");
}

Vector kitten_lab_vector(const KittenSpec& spec) {
  int n = spec.spin.two_s;
  Eigen::VectorXd coeffs = kitten_qubit_coefficients(spec);
  Vector psi = coeffs.cast<Complex>();
  // Standard single-qubit y eigenstates |+-y> = (|0> +- i|1>)/sqrt(2)
  // (columns m = -1/2, +1/2). In this convention sigma_z^{x2S} reflects the
  // occupation branches with no net phase and sigma_x^{x2S} adds (-1)^m.
  Matrix u(2, 2);
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  u << Complex(inv_sqrt2, 0.0), Complex(inv_sqrt2, 0.0),
      Complex(0.0, -inv_sqrt2), Complex(0.0, inv_sqrt2);
  for (int k = 0; k < n; ++k) apply_single_qubit(psi, u, k);
  return psi;
}

double parity_expectation_collective(const KittenSpec& spec, Axis axis) {
  if (axis == Axis::Y)
    throw std::invalid_argument("parity_expectation: axis must be z or x");
  // In the lab convention of kitten_lab_vector, sigma_z^{x 2S} maps
  // |S,m>_y -> |S,-m>_y (the per-qubit phases -1 cancel over 2S qubits)
  // while sigma_x^{x 2S} maps |S,m>_y -> (-1)^m |S,-m>_y.
  StateVector chi = kitten_state(spec);
  int s = kitten_s(spec);
  double value = 0.0;
  for (int m = -s; m <= s; ++m) {
    double phase = (axis == Axis::X && m % 2 != 0) ? -1.0 : 1.0;
    value += phase * std::real(std::conj(chi.amplitude(-m)) * chi.amplitude(m));
  }
  return value;
}

double parity_expectation_bruteforce(const KittenSpec& spec, Axis axis) {
  if (axis == Axis::Y)
    throw std::invalid_argument("parity_expectation: axis must be z or x");
  int n = spec.spin.two_s;
  Vector psi = kitten_lab_vector(spec);
  Complex value = 0.0;
  if (axis == Axis::Z) {
    for (std::int64_t i = 0; i < psi.size(); ++i) {
      int minus = n - std::popcount(static_cast<std::uint64_t>(i));
      value += (minus % 2 == 0 ? 1.0 : -1.0) * std::norm(psi(i));
    }
  } else {
    std::int64_t full = psi.size() - 1;
    for (std::int64_t i = 0; i < psi.size(); ++i) value += std::conj(psi(i)) * psi(full ^ i);
  }
  if (std::abs(value.imag()) > 1e-10)
    throw std::logic_error("parity_expectation_bruteforce: non-real expectation");
  return value.real();
}

double parity_expectation(const KittenSpec& spec, Axis axis) {
  double collective = parity_expectation_collective(spec, axis);
  if (spec.spin.two_s <= 12) {
    double brute = parity_expectation_bruteforce(spec, axis);
    if (std::abs(brute - collective) > 1e-9)
      throw std::logic_error("parity_expectation: collective and tensor evaluations disagree");
  }
  return collective;
}

EavesdropState eavesdrop_state(const KittenSpec& spec, const AttackParams& attack) {
  int s = kitten_s(spec);
  if (spec.m < 1 || spec.m >= s)
    throw std::invalid_argument("eavesdrop_state: need 1 <= m < S for distinct |xi>, |xibar>");
  EavesdropState out{spec, attack.phi, 0.0, 0.0, 0.0};
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  out.amp_a0_xi_e0 = inv_sqrt2;
  out.amp_a1_xibar_e0 = std::cos(attack.phi) * inv_sqrt2;
  out.amp_a1_xi_e1 = std::sin(attack.phi) * inv_sqrt2;
  return out;
}

double p_crit_kitten(Spin spin, int m) {
  if (spin.is_half_integer())
    throw std::invalid_argument("p_crit_kitten: integer spin required");
  int s = spin.two_s / 2;
  if (s < 1 || m < 0 || m > s) throw std::invalid_argument("p_crit_kitten: m outside [0, S]");
  double log_ratio = std::log(std::sqrt(2.0) - 1.0) + (2.0 * s - 2.0) * std::numbers::ln2 -
                     log_binom(2 * s, s - m);
  return 1.0 / (1.0 + std::exp(log_ratio));
}

double p_crit_ghz(Spin spin) {
  if (spin.two_s < 1) throw std::invalid_argument("p_crit_ghz: S >= 1/2 required");
  return std::exp2(0.5 * (1.0 - spin.two_s));
}

std::vector<CriticalRatioRow> critical_ratio_scan(int s_min, int s_max) {
  if (s_min < 1 || s_max < s_min)
    throw std::invalid_argument("critical_ratio_scan: need 1 <= s_min <= s_max");
  std::vector<CriticalRatioRow> rows;
  rows.reserve(s_max - s_min + 1);
  for (int s = s_min; s <= s_max; ++s) {
    Spin spin = Spin::integer(s);
    double ghz = p_crit_ghz(spin);
    CriticalRatioRow row;
    row.s = s;
    row.m_star = -1;
    for (int m = 0; m <= s; ++m) {
      // Tolerate rounding at exact crossings (S = 1, m = 1 hits ghz exactly).
      if (p_crit_kitten(spin, m) <= ghz * (1.0 + 1e-12)) {
        row.m_star = m;
        break;
      }
    }
    if (row.m_star < 0) continue;  // no crossing: happens only at S = 2
    row.ratio = double(s - row.m_star) / s;
    row.p_kitten = p_crit_kitten(spin, row.m_star);
    row.p_ghz = ghz;
    rows.push_back(row);
  }
  return rows;
}

TwoPartyWeight reduced_two_party_weight(const NoisyKitten& noisy) {
  if (noisy.p == 0.0) return {0.0, false};
  int s = kitten_s(noisy.spec);
  double log_ratio = log_binom(2 * s, s - noisy.spec.m) - (2.0 * s - 2.0) * std::numbers::ln2 +
                     std::log1p(-noisy.p) - std::log(noisy.p);
  double w = 1.0 / (1.0 + std::exp(log_ratio));
  return {w, w > 1.0 / std::sqrt(2.0)};
}

ReconstructionTrial sample_reconstruction(const KittenSpec& spec, Axis axis,
                                          std::mt19937_64& rng) {
  if (axis == Axis::Y)
    throw std::invalid_argument("sample_reconstruction: axis must be z or x");
  int n = spec.spin.two_s;
  Vector psi = kitten_lab_vector(spec);
  if (axis == Axis::X) {
    Matrix u = axis_unitary(Spin{1}, Axis::X).adjoint();
    for (int k = 0; k < n; ++k) apply_single_qubit(psi, u, k);
  }
  // Sample one measurement record from the outcome distribution.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng), acc = 0.0;
  std::int64_t drawn = psi.size() - 1;
  for (std::int64_t i = 0; i < psi.size(); ++i) {
    acc += std::norm(psi(i));
    if (u < acc) {
      drawn = i;
      break;
    }
  }
  ReconstructionTrial trial;
  trial.outcomes.resize(n);
  for (int k = 0; k < n; ++k) trial.outcomes[k] = (drawn >> k) & 1 ? +1 : -1;
  trial.alice = trial.outcomes[0];
  int expectation = parity_expectation_collective(spec, axis) > 0 ? +1 : -1;
  int bob_product = 1;
  for (int k = 1; k < n; ++k) bob_product *= trial.outcomes[k];
  trial.reconstructed = expectation * bob_product;  // division by +-1 = multiplication
  trial.success = trial.reconstructed == trial.alice;
  return trial;
}

}  // namespace spincat
