#include <random>

#include "doctest.h"
#include "phaseint/error.hpp"
#include "phaseint/phase.hpp"

using namespace phaseint;

namespace {

RationalIntegrand weber(cplx delta) { return RationalIntegrand::polynomial({-delta * delta, 0.0, 1.0}); }
RationalIntegrand airy() { return RationalIntegrand::polynomial({0.0, 1.0}); }

// q^{-3/2} d^2/dz^2 q^{-1/2} by central differences, for q = sqrt(R) principal.
cplx epsilon_fd(const RationalIntegrand& R, cplx z) {
  auto f = [&](cplx w) { return std::pow(std::sqrt(R.value(w)), -0.5); };
  const double h = 1e-3;
  const cplx d2 = (-f(z + 2.0 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2.0 * h)) /
                  (12.0 * h * h);
  return std::pow(std::sqrt(R.value(z)), -1.5) * d2;
}

}  // namespace

TEST_CASE("weber phase integral across the cut") {
  for (double delta : {0.5, 1.0, 2.0}) {
    const cplx anchor(0.0, 1.0);
    const auto sheet = BranchSheet::asymptotic(weber(delta), anchor);
    const auto to_minus = phase_integral(sheet, straight(anchor, -delta), 1e-12);
    const auto to_plus = phase_integral(sheet, straight(anchor, delta), 1e-12);
    const cplx omega = to_minus.omega - to_plus.omega;
    CHECK(std::abs(omega - cplx(0.0, -kPi * delta * delta / 2.0)) < 1e-9);
  }
}

TEST_CASE("airy phase integral") {
  const auto sheet = BranchSheet(airy(), 1.0, 1.0);
  CHECK(std::abs(phase_integral(sheet, straight(1.0, 4.0), 1e-12).omega - 14.0 / 3.0) < 1e-10);
  // The zero of R is an admissible endpoint.
  CHECK(std::abs(phase_integral(sheet, straight(1.0, 0.0), 1e-12).omega + 2.0 / 3.0) < 1e-8);
  // Off-axis: (2/3)(z^{3/2} - 1) with the principal branch.
  const cplx z(2.0, 1.5);
  const cplx exact = 2.0 / 3.0 * (std::pow(z, 1.5) - 1.0);
  CHECK(std::abs(phase_integral(sheet, straight(1.0, z), 1e-12).omega - exact) < 1e-10);
}

TEST_CASE("path must start at the anchor") {
  const auto sheet = BranchSheet(airy(), 1.0, 1.0);
  try {
    (void)phase_integral(sheet, straight(2.0, 3.0));
    FAIL("expected BranchAmbiguity");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BranchAmbiguity);
  }
}

TEST_CASE("anchor value must square to R") {
  CHECK_THROWS_AS(BranchSheet(airy(), 4.0, 3.0), Error);
}

TEST_CASE("branch flips around a simple zero and not around a pair") {
  const auto sheet = BranchSheet(airy(), 2.0, std::sqrt(2.0));
  const auto loop = circle(0.0, 2.0, 16);
  const auto back = sheet.continued(loop);
  CHECK(std::abs(back.anchor_value() + sheet.anchor_value()) < 1e-12);

  const auto ws = BranchSheet::asymptotic(weber(1.0), 3.0);
  const auto wback = ws.continued(circle(0.0, 3.0, 24));
  CHECK(std::abs(wback.anchor_value() - ws.anchor_value()) < 1e-12);
  // rho = q^{1/2} picks up a sign around both zeros: q ~ z winds once.
  CHECK(std::abs(wback.anchor_root() + ws.anchor_root()) < 1e-12);
}

TEST_CASE("phase integral is additive along concatenated paths") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto R = weber(cplx(1.0, 0.3));
  for (int trial = 0; trial < 20; ++trial) {
    const cplx a(u(rng), 3.5 + std::abs(u(rng)));
    const cplx b(u(rng), 2.0 + std::abs(u(rng)));
    const cplx c(u(rng), 2.0 + std::abs(u(rng)));
    const auto sheet = BranchSheet::asymptotic(R, a);
    const auto whole = phase_integral(sheet, PathSpec({a, b, c}), 1e-12);
    const auto first = phase_integral(sheet, straight(a, b), 1e-12);
    const auto second = phase_integral(sheet.continued(straight(a, b)), straight(b, c), 1e-12);
    CHECK(std::abs(whole.omega - first.omega - second.omega) < 1e-10);
    CHECK(std::abs(whole.q_end - second.q_end) < 1e-12);
  }
}

TEST_CASE("epsilon closed form and finite-difference oracle") {
  CHECK(std::abs(epsilon(airy(), 1.0) - 5.0 / 16.0) < 1e-15);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  const RationalIntegrand fig1(Polynomial({4.0, 0.0, -1.0}), Polynomial({0.0, 1.0}));
  for (const auto& R : {weber(1.0), airy(), fig1}) {
    for (int k = 0; k < 10; ++k) {
      const cplx z(u(rng), u(rng));
      const cplx e = epsilon(R, z);
      CHECK(std::abs(e - epsilon_fd(R, z)) < 1e-6 * std::max(1.0, std::abs(e)));
    }
  }
  CHECK_THROWS_AS(epsilon(airy(), 0.0), Error);
  CHECK_THROWS_AS(epsilon(fig1, 0.0), Error);
}

TEST_CASE("base solutions have constant Wronskian -2i") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const auto R = weber(1.0);
  for (int k = 0; k < 50; ++k) {
    const cplx z(u(rng), u(rng));
    const cplx q = std::sqrt(R.value(z));
    const cplx rho = std::sqrt(q);
    const cplx omega(u(rng), u(rng) * 0.5);
    const auto b = basis_values_at(R, z, q, rho, omega);
    const cplx w = b.y_plus * b.y_minus_deriv - b.y_minus * b.y_plus_deriv;
    CHECK(std::abs(w - cplx(0.0, -2.0)) < 1e-12);
  }
}

TEST_CASE("basis values refuse to match where epsilon is large") {
  const auto sheet = BranchSheet::asymptotic(weber(1.0), cplx(0.0, 2.0));
  const auto near = phase_integral(sheet, straight(cplx(0.0, 2.0), cplx(0.0, 1.0)));
  try {
    (void)basis_values(weber(1.0), near, 1e-8);
    FAIL("expected ValidityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ValidityViolation);
  }
  CHECK_NOTHROW(basis_values(weber(1.0), near, 10.0));
}
