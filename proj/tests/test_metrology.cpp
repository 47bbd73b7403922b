#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spincat/metrology.hpp"
#include "spincat/spin.hpp"
#include "spincat/wigner_d.hpp"

using namespace spincat;

namespace {
constexpr double kPi = std::numbers::pi;

const GeneratorDirection kAlongX{kPi / 2.0, 0.0};
const GeneratorDirection kAlongY{kPi / 2.0, kPi / 2.0};
const GeneratorDirection kAlongZ{0.0, 0.0};

StateVector kitten(int s, int m) {
  return kitten_state(KittenSpec(Spin::integer(s), m, Parity::Plus));
}
}  // namespace

TEST_CASE("qfi of a kitten along y is 4 m^2") {
  for (int m : {2, 16, 30}) {
    CHECK(qfi(kitten(30, m), kAlongY) ==
          doctest::Approx(4.0 * m * m).epsilon(1e-12));
  }
}

TEST_CASE("qfi of |S,0>_x along z is 2S^2 + 2S") {
  for (int s : {10, 30}) {
    StateVector x0 = dicke_state(Spin::integer(s), 0, Axis::X);
    CHECK(qfi(x0, kAlongZ) == doctest::Approx(2.0 * s * s + 2.0 * s).epsilon(1e-12));
    // Zero variance along the state's own quantization axis.
    CHECK(qfi(x0, kAlongX) == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("qfi is independent of the storage basis") {
  StateVector chi = kitten(7, 5);
  GeneratorDirection g{1.1, 2.3};
  double reference = qfi(chi, g);
  CHECK(qfi(rotate_state(chi, Axis::X), g) == doctest::Approx(reference).epsilon(1e-11));
  CHECK(qfi(rotate_state(chi, Axis::Z), g) == doctest::Approx(reference).epsilon(1e-11));
}

TEST_CASE("covariance spectral optimum dominates the axes and matches the scan") {
  for (int m : {2, 16, 30}) {
    StateVector chi = kitten(30, m);
    QfiOptimum opt = qfi_optimum(chi);
    CHECK(opt.value >= qfi(chi, kAlongX) - 1e-9);
    CHECK(opt.value >= qfi(chi, kAlongY) - 1e-9);
    CHECK(opt.value >= qfi(chi, kAlongZ) - 1e-9);
    // The optimum direction actually achieves the optimum.
    CHECK(qfi(chi, opt.direction) == doctest::Approx(opt.value).epsilon(1e-10));

    QfiScan scan = qfi_scan(chi, 32);
    CHECK(std::abs(scan.optimum.value - opt.value) <= 1e-8 * opt.value);
  }
}

TEST_CASE("cat state optimum is the Heisenberg value 4 S^2") {
  StateVector cat = kitten(30, 30);
  CHECK(qfi_optimum(cat).value == doctest::Approx(4.0 * 900.0).epsilon(1e-12));
}

TEST_CASE("m_crit") {
  CHECK(m_crit(Spin::integer(10)) == doctest::Approx(std::sqrt(55.0)).epsilon(1e-14));
  CHECK(m_crit(Spin::integer(30)) == doctest::Approx(std::sqrt(465.0)).epsilon(1e-14));
  CHECK(m_crit(Spin::integer(10), 10) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("p_cat exact values and Stirling approximation") {
  CHECK(p_cat(Spin::integer(1)).exact == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p_cat(Spin::integer(2)).exact == doctest::Approx(0.75).epsilon(1e-13));
  for (int s : {100, 1000}) {
    ApproxPair p = p_cat(Spin::integer(s));
    CHECK(p.stirling == doctest::Approx(2.0 / std::sqrt(kPi * s)).epsilon(1e-13));
    CHECK(std::abs(p.exact / p.stirling - 1.0) < 1.0 / (4.0 * s));
  }
}

TEST_CASE("p_crit sums the pair weights above ceil(m_crit)") {
  Spin s10 = Spin::integer(10);
  // ceil(sqrt(55)) = 8, so the contributing cycles are m = 8 and m = 10.
  WignerDColumn d = wigner_d_m0(s10);
  double expect = 2.0 * (d.at(8) * d.at(8) + d.at(10) * d.at(10));
  CHECK(p_crit(s10) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(p_crit_term_count(s10) == 1);
}

TEST_CASE("p_crit approaches 1/2 under a decreasing envelope at large S") {
  // The ceiling in m_crit toggles the boundary pair in and out of the sum, so
  // the exact p_crit oscillates around 1/2; the convergence statement that
  // does hold is a decreasing 1/sqrt(S) envelope on the gap.
  double first_scaled = std::abs(p_crit(Spin::integer(10)) - 0.5) * std::sqrt(10.0);
  double gap = 1.0;
  for (int s = 20; s <= 200; s += 10) {
    gap = std::abs(p_crit(Spin::integer(s)) - 0.5);
    CHECK(gap * std::sqrt(double(s)) <= first_scaled);
  }
  CHECK(gap < 0.005);
}

TEST_CASE("alpha_r exact values and Stirling accuracy") {
  CHECK(alpha_r(Spin::integer(10), 0).exact == doctest::Approx(1.0).epsilon(1e-14));
  Spin s10 = Spin::integer(10);
  WignerDColumn d = wigner_d_m0(s10);
  double ratio = d.at(8) / d.at(10);
  CHECK(alpha_r(s10, 1).exact == doctest::Approx(1.0 + ratio * ratio).epsilon(1e-12));
  for (int s : {10, 50, 100})
    for (int r : {1, 2, 3}) {
      ApproxPair a = alpha_r(Spin::integer(s), r);
      CHECK(std::abs(a.stirling / a.exact - 1.0) < 0.02);
    }
}

TEST_CASE("integral lower bound stays below alpha_r") {
  // The integral bounds the sum only while the integrand is decreasing on
  // [1, r+1], i.e. for r+1 <= S/2.
  for (int s = 4; s <= 100; ++s) {
    Spin spin = Spin::integer(s);
    int r_max = s / 2 - 1;
    for (int r = 1; r <= r_max; ++r) {
      double lb = alpha_r_lower_bound(spin, r);
      CHECK(lb < alpha_r(spin, r).exact);
    }
  }
}

TEST_CASE("piecewise approximation of p_crit within 10 percent") {
  for (int s = 10; s <= 100; s += 10) {
    Spin spin = Spin::integer(s);
    CHECK(std::abs(p_crit_piecewise(spin) / p_crit(spin) - 1.0) < 0.10);
  }
}

TEST_CASE("p_crit_limit closed form") {
  CHECK(p_crit_limit(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p_crit_limit(2.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p_crit_limit(4.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p_crit_limit(1.0) > 0.5);
  CHECK(p_crit_limit(3.0) < 0.5);
}

TEST_CASE("generator direction unit vector") {
  Eigen::Vector3d y = kAlongY.unit();
  CHECK(std::abs(y(1) - 1.0) < 1e-14);
  CHECK(kAlongZ.unit()(2) == doctest::Approx(1.0).epsilon(1e-14));
}
