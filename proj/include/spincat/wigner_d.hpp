#pragma once

#include <Eigen/Dense>

#include "spincat/spin.hpp"

namespace spincat {

/// The rotation-matrix column d^S_{m,0}(-pi/2), real, indexed by m = -S..S.
/// Entries vanish exactly when S+m is odd and obey d_{-m} = (-1)^S d_m.
struct WignerDColumn {
  Spin spin;
  Eigen::VectorXd values;

  double at(int m) const { return values(m + spin.two_s / 2); }
};

/// log |d^S_{m,0}(-pi/2)| and its sign (0 for parity-forbidden m).
/// Evaluated through log-Gamma so it stays finite far beyond S ~ 85.
struct LogD {
  double log_abs;
  int sign;
};
LogD log_d_m0(Spin spin, int m);

/// d^S_{m,0}(-pi/2) for integer spin. Half-integer spin is rejected: the
/// m' = 0 Dicke state does not exist there (use wigner_d_column with
/// two_m_prime = +-1 instead).
WignerDColumn wigner_d_m0(Spin spin);

/// Generic column d^S_{m,m'}(-pi/2) via the spectral rotation, any spin.
/// Intended for the half-integer m' = +-1/2 analogue; not log-stable.
Eigen::VectorXd wigner_d_column(Spin spin, int two_m_prime);

}  // namespace spincat
