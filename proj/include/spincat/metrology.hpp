#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spincat/spin.hpp"

namespace spincat {

/// Unit direction on the sphere; the phase generator is
/// G = sin(theta)cos(phi) Sx + sin(theta)sin(phi) Sy + cos(theta) Sz.
struct GeneratorDirection {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)

  Eigen::Vector3d unit() const;
};

struct QfiOptimum {
  GeneratorDirection direction;
  double value = 0.0;
};

struct QfiScan {
  std::vector<GeneratorDirection> grid;
  Eigen::VectorXd values;
  QfiOptimum optimum;
};

/// Symmetrized 3x3 covariance of (Sx, Sy, Sz) on a pure state:
/// C_ij = <S_i S_j + S_j S_i>/2 - <S_i><S_j>. The QFI of direction n is
/// 4 n^T C n, so the optimum is 4 lambda_max(C).
Eigen::Matrix3d spin_covariance(const StateVector& state);

/// 4 x variance of the generator (pure-state quantum Fisher information).
double qfi(const StateVector& state, const GeneratorDirection& g);

/// Exact optimum via the covariance spectrum.
QfiOptimum qfi_optimum(const StateVector& state);

/// Dense angular scan plus golden-section refinement around the grid
/// maximum; the refined optimum reproduces qfi_optimum to ~1e-8 relative.
QfiScan qfi_scan(const StateVector& state, int grid_resolution);

/// Critical cycle index sqrt([S(S+1) - m0^2]/2): cycles at or above it beat
/// the initial state's phase sensitivity.
double m_crit(Spin spin, int initial_m = 0);

struct ApproxPair {
  double exact = 0.0;
  double stirling = 0.0;
};

/// Probability of settling in the Cat cycle m = S:
/// exact 2 (2S)! / (2^{2S} (S!)^2), Stirling 2/sqrt(pi S).
ApproxPair p_cat(Spin spin);

/// Cumulative probability of all cycles at or above ceil(m_crit):
/// sum over parity-allowed m of 2 d^S_{m,0}^2.
double p_crit(Spin spin, int initial_m = 0);

/// Number of distinct nonzero-population m values contributing to p_crit,
/// floor((S - ceil(m_crit))/2).
int p_crit_term_count(Spin spin, int initial_m = 0);

/// alpha_r(S) = sum_{b=0}^r [d^S_{S-2b,0} / d^S_{S,0}]^2; exact via log-Gamma
/// and the Stirling form 1 + sum_b sqrt(S/(pi b (S-b))) (1+1/24b)/(1+1/12b)^2.
ApproxPair alpha_r(Spin spin, int r);

/// Lower bound 1 + integral_1^{r+1} sqrt(S/(pi b (S-b))) (1+1/24b)/(1+1/12b)^2 db.
/// Strictly below alpha_r(spin, r).exact whenever r + 1 <= S/2, the regime
/// where the integrand is decreasing over the whole integration range.
double alpha_r_lower_bound(Spin spin, int r);

/// Piecewise approximation 2 alpha_r / sqrt(pi S) with r = p_crit_term_count.
double p_crit_piecewise(Spin spin);

/// Large-S limit of the cumulative probability to exceed a QFI of f S^2:
/// (4/pi) arctan sqrt((2 - sqrt(f))/(2 + sqrt(f))), f in [0, 4].
double p_crit_limit(double f);

}  // namespace spincat
