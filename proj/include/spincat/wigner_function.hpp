#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spincat/spin.hpp"

namespace spincat {

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> for integer angular
/// momenta, evaluated through the Racah closed form with log-Gamma factorials.
double clebsch_gordan(int j1, int m1, int j2, int m2, int big_j, int big_m);

/// Spherical-tensor components rho_kq = Tr[T_kq^dag rho] of a pure state,
/// k = 0..2S, q = 0..k (negative q follows from Hermiticity).
struct SpinMultipoles {
  Spin spin;
  std::vector<Vector> rho_kq;  // rho_kq[k](q), q >= 0

  Complex at(int k, int q) const;  // any sign of q
};

SpinMultipoles multipole_decomposition(const StateVector& state);

/// Spin Wigner function W(theta, phi) = c sum_kq rho_kq Y_kq with
/// c = sqrt(4 pi (2S+1)), normalized so (1/4pi) integral W dOmega = 1.
double wigner_value(const SpinMultipoles& mp, double theta, double phi);

struct WignerGrid {
  Eigen::VectorXd theta_points;  // [0, pi]
  Eigen::VectorXd phi_points;    // [0, 2 pi)
  Eigen::MatrixXd values;        // theta x phi
};

/// Dense grid of the Wigner function; n_theta >= 32, n_phi >= 64.
WignerGrid wigner_function(const StateVector& state, int n_theta, int n_phi);

/// (1/4pi) integral W dOmega by Gauss-Legendre (theta) x trapezoid (phi)
/// quadrature on the evaluated function; 1 for a normalized state.
double wigner_normalization(const StateVector& state, int n_nodes = 64);

/// Sign changes of W along the great circle around the y axis (the x-z
/// plane), where the Kitten interference fringes live; a Kitten chi(m)
/// yields 4m changes, i.e. 2m fringes.
int wigner_sign_changes_about_y(const StateVector& state, int resolution = 4096);

}  // namespace spincat
