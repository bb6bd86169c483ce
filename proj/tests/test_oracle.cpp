#include "doctest.h"
#include "phaseint/error.hpp"
#include "phaseint/oracle.hpp"

using namespace phaseint;

namespace {

RationalIntegrand weber(double delta) { return RationalIntegrand::polynomial({-delta * delta, 0.0, 1.0}); }

// From the ray at angle a0 to the ray at a1 through the interior arc of
// radius rho.
PathSpec crossing(double r, double rho, double a0, double a1) {
  std::vector<cplx> pts{std::polar(r, a0)};
  const auto arc = arc_points(0.0, rho, a0, a1, 24);
  pts.insert(pts.end(), arc.begin(), arc.end());
  pts.push_back(std::polar(r, a1));
  return PathSpec(pts);
}

// Short-path settings: endpoints at |z| = 5 are accepted as matching points.
OracleOptions local_options() {
  OracleOptions o;
  o.matching_eps = 1e-2;
  o.extend = false;
  return o;
}

}  // namespace

TEST_CASE("plane waves are not coupled") {
  const auto R = RationalIntegrand::polynomial({1.0});
  const auto sheet = BranchSheet(R, 0.0, 1.0);
  for (double L : {1.0, 10.0, 57.3}) {
    const auto res = exact_fmatrix(sheet, straight(0.0, L), 0.0);
    CHECK(res.matrix.max_diff(ConnectionMatrix::identity(2)) < 10.0 * res.ode_tolerance);
  }
  const auto loop = monodromy(BranchSheet(R, 3.0, 1.0), circle(0.0, 3.0, 12));
  CHECK(loop.matrix.max_diff(ConnectionMatrix::identity(2)) < 1e-9);
}

TEST_CASE("airy solution transported against the exact solution") {
  // y = exp(i (2/3) z^{3/2}) z^{-1/4} solves y'' + (z - 5/(16 z^2)) y = 0 exactly.
  const RationalIntegrand R(Polynomial({-5.0 / 16.0, 0.0, 0.0, 1.0}), Polynomial({0.0, 0.0, 1.0}));
  auto exact = [](cplx z) { return std::exp(kI * 2.0 / 3.0 * std::pow(z, 1.5)) * std::pow(z, -0.25); };
  auto dexact = [&](cplx z) {
    return exact(z) * (kI * std::sqrt(z) - 0.25 / z);
  };
  const cplx a(1.0, 0.5), b(4.0, 2.0);
  OracleOptions o;
  const auto out = transport(R, PathSpec({a, cplx(2.5, 3.0), b}), {OdeState{exact(a), dexact(a)}, OdeState{1.0, 0.0}}, o);
  CHECK(std::abs(out[0].y - exact(b)) < 1e-9 * std::abs(exact(b)));
  CHECK(std::abs(out[0].dy - dexact(b)) < 1e-9 * std::abs(dexact(b)));
}

TEST_CASE("weber crossing of the upper-left domain matches the closed-form constant") {
  // Reference values: s = i (i)^{i/2} sqrt(2 pi) (2e)^{-i/2} / Gamma(1/2 + i/2)
  // at delta = 1, evaluated to 30 digits offline.
  const cplx s_ref(0.0977435833338857, 1.0166907642842164);
  const auto R = weber(1.0);
  const auto path = crossing(8.0, 2.0, kPi / 2, kPi);
  const auto res = exact_fmatrix(BranchSheet::asymptotic(R, path.front()), path, -1.0);
  CHECK(res.eps_start < 1e-8);
  CHECK(res.eps_end < 1e-8);
  const auto ex = extract_stokes_constant(res.matrix, StokesForm::S);
  CHECK(std::abs(ex.s - s_ref) < 1e-3);
  CHECK(ex.residual < 1e-2);
  CHECK(std::abs(res.matrix.det() - 1.0) < 10.0 * res.ode_tolerance);

  // The same crossing read in the transposed pattern is rejected.
  CHECK_THROWS_AS(extract_stokes_constant(res.matrix, StokesForm::ST), Error);
}

TEST_CASE("weber crossing at delta = 0") {
  const auto R = weber(0.0);
  const auto path = crossing(8.0, 1.0, kPi / 2, kPi);
  const auto res = exact_fmatrix(BranchSheet::asymptotic(R, path.front()), path, 0.0);
  const auto ex = extract_stokes_constant(res.matrix, StokesForm::S);
  CHECK(std::abs(ex.s - cplx(0.0, std::sqrt(2.0))) < 1e-3);
}

TEST_CASE("pattern extraction") {
  const auto s2i = make_generator(stokes(cplx(0.0, 2.0)), 2);
  const auto ex = extract_stokes_constant(s2i, StokesForm::S);
  CHECK(ex.s == cplx(0.0, 2.0));
  CHECK(ex.residual == 0.0);
  const auto t = extract_stokes_constant(make_generator(stokes_t(3.0), 2), StokesForm::ST);
  CHECK(t.s == cplx(3.0));
  CHECK_THROWS_AS(extract_stokes_constant(make_generator(reconnect(0.3), 2), StokesForm::S), Error);
}

TEST_CASE("monodromy around the weber interaction area") {
  const auto R = weber(1.0);
  const auto loop = circle(0.0, 8.0, 64);
  OracleOptions o;
  o.transport_path = contracted_loop(8.0, 2.0);
  const auto m = monodromy(BranchSheet::asymptotic(R, 8.0), loop, o);
  CHECK(std::abs(m.loop_phase - cplx(0.0, -kPi)) < 1e-9);
  CHECK(m.matrix.max_diff(ConnectionMatrix(-CMatrix::Identity(2, 2))) < 1e-6);
}

TEST_CASE("transport route must be homotopic around poles") {
  // -z + 4/z has a pole at the origin.
  const RationalIntegrand R(Polynomial({4.0, 0.0, -1.0}), Polynomial({0.0, 1.0}));
  const auto sheet = BranchSheet::asymptotic(R, cplx(0.0, 6.0));
  const PathSpec path({cplx(0.0, 6.0), cplx(-6.0, 0.0)});
  OracleOptions o = local_options();
  o.matching_eps = 1.0;
  o.transport_path = PathSpec({cplx(0.0, 6.0), cplx(1.0, -1.0), cplx(-6.0, 0.0)});
  try {
    (void)exact_fmatrix(sheet, path, cplx(0.0, 6.0), o);
    FAIL("expected HomotopyAmbiguous");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::HomotopyAmbiguous);
  }
}

TEST_CASE("step budget exhaustion is a stiffness failure") {
  const auto R = weber(1.0);
  OracleOptions o = local_options();
  o.max_steps = 10;
  const auto path = crossing(5.0, 2.0, kPi / 2, kPi);
  try {
    (void)exact_fmatrix(BranchSheet::asymptotic(R, path.front()), path, -1.0, o);
    FAIL("expected StiffnessFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::StiffnessFailure);
  }
}

TEST_CASE("endpoint validity is enforced") {
  OracleOptions o;
  o.extend = false;
  const auto path = crossing(5.0, 2.0, kPi / 2, kPi);
  CHECK_THROWS_AS(exact_fmatrix(BranchSheet::asymptotic(weber(1.0), path.front()), path, -1.0, o), Error);
}

TEST_CASE("oracle self-consistency on weber paths") {
  const auto R = weber(1.0);
  const auto o = local_options();
  const double tol20 = 20.0 * o.tol;
  const auto g1 = crossing(5.0, 2.0, kPi / 2, kPi);
  const auto g2 = crossing(5.0, 2.0, kPi, 3.0 * kPi / 2);
  const auto sheet = BranchSheet::asymptotic(R, g1.front());
  const cplx z0 = -1.0;

  const auto f1 = exact_fmatrix(sheet, g1, z0, o);
  const auto sheet2 = sheet.continued(g1);
  OracleOptions o2 = o;
  o2.omega_start = f1.omega_end;
  const auto f2 = exact_fmatrix(sheet2, g2, z0, o2);
  const auto f12 = exact_fmatrix(sheet, concat(g1, g2), z0, o);

  SUBCASE("composition") { CHECK(f12.matrix.max_diff(f2.matrix * f1.matrix) < tol20); }

  SUBCASE("reversal") {
    OracleOptions orev = o;
    orev.omega_start = f1.omega_end;
    const auto back = exact_fmatrix(sheet2, g1.reversed(), z0, orev);
    CHECK((back.matrix * f1.matrix).max_diff(ConnectionMatrix::identity(2)) < tol20);
  }

  SUBCASE("basepoint covariance") {
    const cplx z0t(0.0, 0.5);
    const auto ft = exact_fmatrix(sheet, g1, z0t, o);
    // x = integral of q from the new basepoint to the old one.
    const auto s0 = BranchSheet::asymptotic(R, g1.front());
    const cplx x = phase_integral(s0, straight(g1.front(), z0), 1e-13).omega -
                   phase_integral(s0, straight(g1.front(), z0t), 1e-13).omega;
    const auto expect = conjugate_basepoint(f1.matrix, -x);
    CHECK(ft.matrix.max_diff(expect) < tol20);
  }

  SUBCASE("sign-change covariance") {
    const auto fn = exact_fmatrix(sheet.negated(), g1, z0, o);
    CHECK(fn.matrix.max_diff(conjugate_sign_change(f1.matrix)) < tol20);
  }

  SUBCASE("unimodular") {
    CHECK(std::abs(f1.matrix.det() - 1.0) < 10.0 * o.tol);
    CHECK(std::abs(f12.matrix.det() - 1.0) < 10.0 * o.tol);
  }
}
