#include "spincat/spin.hpp"

#include <cmath>
#include <numbers>

namespace spincat {

namespace {
constexpr double kPi = std::numbers::pi;
}

Matrix op_sz(Spin spin) {
  int d = spin.dim();
  Matrix m = Matrix::Zero(d, d);
  double s = spin.s();
  for (int i = 0; i < d; ++i) m(i, i) = Complex(i - s, 0.0);
  return m;
}

Matrix op_sp(Spin spin) {
  int d = spin.dim();
  double s = spin.s();
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    double mm = i - s;
    m(i + 1, i) = std::sqrt(s * (s + 1) - mm * (mm + 1));
  }
  return m;
}

Matrix op_sm(Spin spin) { return op_sp(spin).adjoint(); }

Matrix op_sx(Spin spin) { return 0.5 * (op_sp(spin) + op_sm(spin)); }

Matrix op_sy(Spin spin) {
  return (op_sp(spin) - op_sm(spin)) / Complex(0.0, 2.0);
}

Matrix exp_i_hermitian(const Matrix& h, double theta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& v = es.eigenvectors();
  Vector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    phases(i) = std::polar(1.0, -theta * es.eigenvalues()(i));
  return v * phases.asDiagonal() * v.adjoint();
}

Matrix axis_unitary(Spin spin, Axis axis) {
  switch (axis) {
    case Axis::Z:
      return Matrix::Identity(spin.dim(), spin.dim());
    case Axis::X:
      return exp_i_hermitian(op_sy(spin), kPi / 2);
    case Axis::Y: {
      Matrix u = exp_i_hermitian(op_sx(spin), -kPi / 2);
      return std::polar(1.0, kPi * spin.s()) * u;
    }
  }
  throw std::logic_error("axis_unitary: bad axis");
}

OperatorSet build_operators(Spin spin, Axis basis) {
  Matrix u = axis_unitary(spin, basis);
  auto conj = [&](const Matrix& m) { return Matrix(u.adjoint() * m * u); };
  auto wrap = [&](Matrix m) { return CollectiveOperator{spin, basis, std::move(m)}; };
  return OperatorSet{
      wrap(conj(op_sx(spin))), wrap(conj(op_sy(spin))), wrap(conj(op_sz(spin))),
      wrap(conj(op_sp(spin))), wrap(conj(op_sm(spin)))};
}

StateVector dicke_state(Spin spin, int m, Axis basis) {
  if (2 * std::abs(m) > spin.two_s) throw std::invalid_argument("dicke_state: |m| > S");
  if (spin.is_half_integer()) throw std::invalid_argument("dicke_state: integer m with half-integer spin");
  Vector amps = Vector::Zero(spin.dim());
  amps(m + spin.two_s / 2) = 1.0;
  return StateVector(spin, basis, std::move(amps));
}

StateVector rotate_state(const StateVector& state, Axis target) {
  if (state.basis == target) return state;
  Matrix u_src = axis_unitary(state.spin, state.basis);
  Matrix u_dst = axis_unitary(state.spin, target);
  return StateVector(state.spin, target, u_dst.adjoint() * (u_src * state.amplitudes));
}

StateVector kitten_state(const KittenSpec& spec) {
  int s_int = spec.spin.two_s / 2;
  Vector amps = Vector::Zero(spec.spin.dim());
  if (spec.degenerate()) {
    amps(s_int) = 1.0;
  } else {
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    int sign_s = (s_int % 2 == 0) ? +1 : -1;
    amps(s_int + spec.m) = inv_sqrt2;
    amps(s_int - spec.m) = parity_sign(spec.parity) * sign_s * inv_sqrt2;
  }
  return StateVector(spec.spin, Axis::Y, std::move(amps));
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (!(a.spin == b.spin)) throw std::invalid_argument("overlap: spin mismatch");
  StateVector bb = rotate_state(b, a.basis);
  return a.amplitudes.dot(bb.amplitudes);
}

}  // namespace spincat
