#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <random>
#include <vector>

#include "spincat/spin.hpp"

namespace spincat {

/// Largest qubit count for explicit 2^N tensor computations.
inline constexpr int kMaxBruteForceQubits = 24;

/// Kitten state mixed with white noise: rho = p |chi><chi| + (1-p) I/2^{2S}.
struct NoisyKitten {
  KittenSpec spec;
  double p = 1.0;

  NoisyKitten(KittenSpec s, double prob) : spec(s), p(prob) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("NoisyKitten: p outside [0,1]");
  }
};

/// Eavesdropper attack strength; phi = 0 is no attack, pi/2 excluded.
struct AttackParams {
  double phi = 0.0;

  explicit AttackParams(double angle) : phi(angle) {
    if (phi < 0.0 || phi >= std::numbers::pi / 2)
      throw std::invalid_argument("AttackParams: phi outside [0, pi/2)");
  }
};

/// The post-attack tripartite state
///   (|0>_A |xi>_B |0>_E + cos(phi) |1>_A |xibar>_B |0>_E
///    + sin(phi) |1>_A |xi>_B |1>_E) / sqrt(2),
/// stored through its three branch amplitudes (the Bob states |xi>, |xibar>
/// are orthonormal, so the branch amplitudes carry the full geometry).
struct EavesdropState {
  KittenSpec spec;
  double phi = 0.0;
  double amp_a0_xi_e0 = 0.0;
  double amp_a1_xibar_e0 = 0.0;
  double amp_a1_xi_e1 = 0.0;

  double norm() const;
  /// Weight of the branches in which Evan's qubit stayed |0>.
  double alice_bob_weight() const;
  /// Weight of the Alice-Evan entangled branch, sin^2(phi)/2.
  double alice_evan_weight() const;
};

/// Kitten state written over N = 2S qubits in the y-occupation basis:
/// entry at bitmask b is the coefficient of the product state with qubit k
/// y-up where bit k of b is set. Sums of all permutations of S+m ones and,
/// with sign parity * (-1)^S, of S-m ones.
Eigen::VectorXd kitten_qubit_coefficients(const KittenSpec& spec);

/// Bob's (2S-1)-qubit states of the eavesdropping decomposition, same
/// y-occupation convention, normalized (divisor sqrt(binom(2S, S-m))).
Eigen::VectorXd xi_coefficients(const KittenSpec& spec);
Eigen::VectorXd xibar_coefficients(const KittenSpec& spec);

/// Kitten state as a full 2^{2S} lab-frame (z-product-basis) vector.
Vector kitten_lab_vector(const KittenSpec& spec);

/// <chi| sigma_axis^{x 2S} |chi> for axis z or x. Evaluated through the
/// collective branch-reflection algebra; for 2S <= kMaxBruteForceQubits the
/// explicit tensor-product computation is run as well and asserted to agree.
double parity_expectation(const KittenSpec& spec, Axis axis);

/// Collective-algebra branch only (any S).
double parity_expectation_collective(const KittenSpec& spec, Axis axis);

/// Explicit 2^{2S}-dimensional evaluation (2S <= kMaxBruteForceQubits).
double parity_expectation_bruteforce(const KittenSpec& spec, Axis axis);

EavesdropState eavesdrop_state(const KittenSpec& spec, const AttackParams& attack);

/// White-noise threshold for the Kitten state:
/// binom(2S, S-m) / [binom(2S, S-m) + (sqrt(2)-1) 2^{2S-2}].
double p_crit_kitten(Spin spin, int m);

/// GHZ-state reference threshold 2^{(1-2S)/2}.
double p_crit_ghz(Spin spin);

struct CriticalRatioRow {
  int s = 0;
  int m_star = 0;      // smallest m with p_crit_kitten <= p_crit_ghz
  double ratio = 0.0;  // (S - m_star)/S
  double p_kitten = 0.0;
  double p_ghz = 0.0;
};

/// For each integer S in [s_min, s_max], the crossing point where the Kitten
/// state stops being more noise-robust than the GHZ state. S values with no
/// crossing (only S = 2, where every cycle is less robust than GHZ) yield no row.
std::vector<CriticalRatioRow> critical_ratio_scan(int s_min, int s_max);

struct TwoPartyWeight {
  double psi_plus_fraction = 0.0;
  bool violates_local_realism = false;
};

/// |Psi+> fraction of the post-selected two-party state of a noisy Kitten:
/// 1 / [1 + (1-p) binom(2S, S-m) / (2^{2S-2} p)]; flag set above 1/sqrt(2).
TwoPartyWeight reduced_two_party_weight(const NoisyKitten& noisy);

/// One round of the secret-reconstruction protocol: all 2S parties measure
/// the same lab-frame axis; Alice's outcome is recovered from the known
/// parity expectation divided by the product of the Bobs' outcomes.
struct ReconstructionTrial {
  std::vector<int> outcomes;  // +-1 per qubit, index 0 is Alice
  int alice = 0;
  int reconstructed = 0;
  bool success = false;
};

ReconstructionTrial sample_reconstruction(const KittenSpec& spec, Axis axis,
                                          std::mt19937_64& rng);

}  // namespace spincat
