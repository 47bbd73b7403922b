#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace spincat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Total spin, stored doubled so half-integer values are exact.
struct Spin {
  int two_s = 0;

  constexpr double s() const { return 0.5 * two_s; }
  constexpr int dim() const { return two_s + 1; }
  constexpr bool is_half_integer() const { return two_s % 2 != 0; }

  static Spin from_two_s(int two_s) {
    if (two_s < 0) throw std::invalid_argument("Spin: two_s must be >= 0");
    return Spin{two_s};
  }
  static Spin integer(int s) {
    if (s < 0) throw std::invalid_argument("Spin: S must be >= 0");
    return Spin{2 * s};
  }
  friend bool operator==(const Spin&, const Spin&) = default;
};

enum class Axis { X, Y, Z };

/// Pure state over magnetic quantum numbers m = -S..S (index i holds m = i - S),
/// tagged with the axis whose eigenbasis the amplitudes refer to.
struct StateVector {
  Spin spin;
  Axis basis = Axis::Z;
  Vector amplitudes;

  StateVector() = default;
  StateVector(Spin sp, Axis b, Vector amps) : spin(sp), basis(b), amplitudes(std::move(amps)) {
    if (amplitudes.size() != spin.dim())
      throw std::invalid_argument("StateVector: amplitude length does not match spin dimension");
  }

  double norm() const { return amplitudes.norm(); }
  StateVector& normalize() {
    double n = norm();
    if (n <= 0.0) throw std::domain_error("StateVector: cannot normalize zero vector");
    amplitudes /= n;
    return *this;
  }
  /// Amplitude of |S,m> in the tagged basis.
  Complex amplitude(int m) const { return amplitudes(index_of(m)); }
  int index_of(int m) const {
    if (2 * std::abs(m) > spin.two_s) throw std::out_of_range("StateVector: |m| > S");
    return m + spin.two_s / 2;
  }
};

/// The five collective operators in one representation.
struct CollectiveOperator {
  Spin spin;
  Axis basis = Axis::Z;
  Matrix matrix;
};

struct OperatorSet {
  CollectiveOperator sx, sy, sz, sp, sm;
};

enum class Parity { Plus, Minus };

inline int parity_sign(Parity p) { return p == Parity::Plus ? +1 : -1; }

/// (|S,m>_y +- (-1)^S |S,-m>_y)/sqrt(2); at m = S a Cat state, at m = 0 a single Dicke state.
struct KittenSpec {
  Spin spin;
  int m = 0;
  Parity parity = Parity::Plus;

  KittenSpec(Spin sp, int mm, Parity par) : spin(sp), m(mm), parity(par) {
    if (sp.is_half_integer()) throw std::invalid_argument("KittenSpec: integer spin required");
    if (mm < 0 || 2 * mm > sp.two_s) throw std::invalid_argument("KittenSpec: m must lie in [0, S]");
  }
  bool degenerate() const { return m == 0; }
};

// Spin matrices in the z representation: Sz diagonal with entries m, ladder
// elements sqrt(S(S+1) - m(m+-1)), Sy = (S+ - S-)/2i.
Matrix op_sz(Spin spin);
Matrix op_sp(Spin spin);
Matrix op_sm(Spin spin);
Matrix op_sx(Spin spin);
Matrix op_sy(Spin spin);

/// exp(-i theta H) for Hermitian H via spectral decomposition.
Matrix exp_i_hermitian(const Matrix& h, double theta);

/// Unitary whose columns are the z-representation coordinates of the axis
/// eigenstates: U(x) = exp(-i pi/2 Sy), U(y) = e^{i pi S} exp(+i pi/2 Sx), U(z) = 1.
/// The global phase on U(y) makes |S,0>_x expand over |S,m>_y with the real
/// coefficients d^S_{m,0}(-pi/2).
Matrix axis_unitary(Spin spin, Axis axis);

/// All five collective operators expressed in the eigenbasis of the requested axis.
OperatorSet build_operators(Spin spin, Axis basis);

/// Dicke state |S,m> tagged with the given basis axis.
StateVector dicke_state(Spin spin, int m, Axis basis);

/// Re-express a state in another axis eigenbasis (norm-preserving).
StateVector rotate_state(const StateVector& state, Axis target);

/// Kitten state in the y basis.
StateVector kitten_state(const KittenSpec& spec);

/// <a|b>, rotating b into a's basis if needed.
Complex overlap(const StateVector& a, const StateVector& b);

}  // namespace spincat
