#include "spincat/wigner_d.hpp"

#include <cmath>
#include <numbers>

namespace spincat {

LogD log_d_m0(Spin spin, int m) {
  if (spin.is_half_integer())
    throw std::invalid_argument("log_d_m0: |S,0> does not exist for half-integer spin");
  int s = spin.two_s / 2;
  if (std::abs(m) > s) throw std::out_of_range("log_d_m0: |m| > S");
  if ((s + m) % 2 != 0) return LogD{-std::numeric_limits<double>::infinity(), 0};
  // Gamma-ratio closed form: with j = (S+m)/2, b = (S-m)/2,
  //   d^S_{m,0}(-pi/2) = (-1)^{m+j} sqrt((2j)! (2b)!) / (2^S j! b!).
  int j = (s + m) / 2;
  int b = (s - m) / 2;
  double log_abs = 0.5 * (std::lgamma(2.0 * j + 1) + std::lgamma(2.0 * b + 1)) -
                   s * std::numbers::ln2 - std::lgamma(j + 1.0) - std::lgamma(b + 1.0);
  int sign = ((m + j) % 2 == 0) ? +1 : -1;
  return LogD{log_abs, sign};
}

WignerDColumn wigner_d_m0(Spin spin) {
  if (spin.is_half_integer())
    throw std::invalid_argument("wigner_d_m0: |S,0> does not exist for half-integer spin");
  int s = spin.two_s / 2;
  Eigen::VectorXd values = Eigen::VectorXd::Zero(spin.dim());
  for (int m = -s; m <= s; ++m) {
    LogD d = log_d_m0(spin, m);
    if (d.sign != 0) values(m + s) = d.sign * std::exp(d.log_abs);
  }
  return WignerDColumn{spin, std::move(values)};
}

Eigen::VectorXd wigner_d_column(Spin spin, int two_m_prime) {
  if (std::abs(two_m_prime) > spin.two_s)
    throw std::out_of_range("wigner_d_column: |m'| > S");
  if ((two_m_prime + spin.two_s) % 2 != 0)
    throw std::invalid_argument("wigner_d_column: m' incompatible with spin");
  // d_{m,m'}(beta) = <m| exp(-i beta Sy) |m'> at beta = -pi/2.
  Matrix rot = exp_i_hermitian(op_sy(spin), -std::numbers::pi / 2);
  int col = (two_m_prime + spin.two_s) / 2;
  return rot.col(col).real();
}

}  // namespace spincat
