#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "spincat/spin.hpp"
#include "spincat/trajectory.hpp"  // NumericError

namespace spincat {

/// Density matrix of N spin-1/2 particles restricted to permutation-invariant
/// states: one (2j+1)x(2j+1) block per total-spin sector j (stored in the
/// z eigenbasis), each appearing with multiplicity degeneracy(j). The
/// physical trace is sum_j degeneracy(j) * tr(block(j)) = 1.
struct PermInvariantState {
  int n_particles = 0;
  std::vector<int> two_j;        // N, N-2, ..., (0 or 1)
  std::vector<double> degeneracy;
  std::vector<Matrix> blocks;

  static PermInvariantState zero(int n_particles);
  /// Pure symmetric state (top block j = N/2); accepts any basis tag.
  static PermInvariantState from_pure(int n_particles, const StateVector& psi);

  int block_index(int two_j_value) const;
  const Matrix& block(int two_j_value) const { return blocks[block_index(two_j_value)]; }
  double trace() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;
};

/// Multiplicity of the spin-j sector of n spin-1/2 particles:
/// binom(n, n/2-j) - binom(n, n/2-j-1).
double sector_degeneracy(int n_particles, int two_j);

struct EnsembleConfig {
  int n_particles = 0;      // N, spin-1/2 each
  double upsilon = 1.0;     // collective rate of Eq.-(5)-form D[Sy]
  double gamma_eff = 0.0;   // single-particle dephasing/pump/decay rate
  std::vector<double> t_grid;
  std::optional<StateVector> initial;  // default |S,0>_x, S = N/2
  int n_ceiling = 20;

  void validate() const;
  PermInvariantState initial_state() const;
};

/// Liouvillian over PermInvariantState: collective 2 Upsilon D_std[Sy] per
/// block plus, per atom, standard dissipators with jump operators
/// {sigma_z/2, sigma_+, sigma_-} each at rate gamma_eff (the paper's
/// (D[.]+D[.]+D[.]) gamma_eff/2 in its doubled-dissipator convention).
class EnsembleGenerator {
 public:
  explicit EnsembleGenerator(const EnsembleConfig& config);

  PermInvariantState apply(const PermInvariantState& state) const;
  const EnsembleConfig& config() const { return config_; }

 private:
  struct SandwichTerm {
    int src_block;
    int dst_block;
    double weight;  // N * degeneracy(p, N-1) / degeneracy(j', N)
    Matrix e;       // coupling matrix E_A(j', m'; j, m; p)
  };

  EnsembleConfig config_;
  std::vector<Matrix> sy_;       // per-block spin-y matrix
  std::vector<Matrix> sy_sq_;
  std::vector<SandwichTerm> sandwich_;
  double local_anticommutator_ = 0.0;  // gamma_eff * 5N/4
};

EnsembleGenerator build_liouvillian(const EnsembleConfig& config);

/// Adaptive Dormand-Prince RK45 integration with snapshots at config.t_grid.
/// Absolute tolerance 1e-9 on block entries; trace drift beyond 1e-8 or
/// step-size underflow raise NumericError.
std::vector<PermInvariantState> evolve(const PermInvariantState& initial,
                                       const EnsembleGenerator& generator,
                                       const std::vector<double>& t_grid);

/// <chi| rho_top |chi> for a pure Kitten target in the top block (S = N/2).
double kitten_fidelity(const PermInvariantState& state, const KittenSpec& spec);

/// Analytic fidelity fits: d^2 e^{-gamma N t} [1 - e^{-4 Upsilon m^2 t}]
/// and d^2 [e^{-gamma N t} + e^{-4 Upsilon m^2 t}], with d = d^S_{m,0}(-pi/2).
double kitten_fit_growth(Spin spin, int m, double upsilon, double gamma_eff, int n, double t);
double kitten_fit_decay(Spin spin, int m, double upsilon, double gamma_eff, int n, double t);

/// Experimental parameters of the dispersive cavity scheme.
struct RateParams {
  double g = 0.0;           // atom-cavity coupling
  double omega_rabi = 0.0;  // laser Rabi frequency
  double delta = 0.0;       // atom-laser detuning
  double kappa = 0.0;       // cavity linewidth
  double gamma = 0.0;       // atomic natural linewidth
  double n_bar = 0.0;       // thermal cavity occupation (used if kappas are 0)
  double kappa_in = 0.0;    // two-sided cavity input/output rates
  double kappa_out = 0.0;
  double n_th = 0.0;        // occupation of the input-side reservoir
};

struct DerivedRates {
  double upsilon = 0.0;        // (2n+1) g^2 Omega^2 / (72 kappa Delta^2)
  double gamma_eff = 0.0;      // gamma Omega^2 / (12 Delta^2)
  double cooperativity = 0.0;  // 2 g^2 / (kappa gamma)
  double n_bar_effective = 0.0;
  double ratio = 0.0;          // gamma_eff / upsilon = (12/C)/(2n+1)
  double inverse_upsilon = 0.0;
};

DerivedRates rates(const RateParams& params);

struct TimescaleCheck {
  bool ok = false;
  double margin = 0.0;  // Upsilon / (gamma_eff N); capped when gamma_eff = 0
};

TimescaleCheck timescale_check(double upsilon, double gamma_eff, int n_particles);

}  // namespace spincat
