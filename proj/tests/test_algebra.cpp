#include <random>

#include "doctest.h"
#include "phaseint/algebra.hpp"
#include "phaseint/error.hpp"

using namespace phaseint;

namespace {

ConnectionMatrix M(const Generator& g) { return make_generator(g, 2); }

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Entrywise difference relative to the larger operand scale.
double rel_diff(const ConnectionMatrix& a, const ConnectionMatrix& b) {
  const double scale = std::max({1.0, a.matrix().cwiseAbs().maxCoeff(), b.matrix().cwiseAbs().maxCoeff()});
  return a.max_diff(b) / scale;
}

struct Rand {
  std::mt19937_64 rng;
  explicit Rand(unsigned seed) : rng(seed) {}
  double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  cplx disk(double r) {
    const double rad = r * std::sqrt(uni(0.0, 1.0));
    return std::polar(rad, uni(-kPi, kPi));
  }
  // |omega| <= 10 with |Im omega| <= 1 so that exp(+-i omega) stays O(e).
  cplx omega() { return {uni(-10.0, 10.0), uni(-1.0, 1.0)}; }
};

}  // namespace

TEST_CASE("generator matrices") {
  CHECK(M(stokes({2.0, 1.0})).max_diff(ConnectionMatrix(mat2(1.0, 0.0, cplx(2.0, 1.0), 1.0))) == 0.0);
  CHECK(M(stokes_t(3.0)).max_diff(ConnectionMatrix(mat2(1.0, 3.0, 0.0, 1.0))) == 0.0);
  CHECK(M(reconnect(0.0)).max_diff(ConnectionMatrix::identity(2)) == 0.0);
  CHECK(M(branch_cut(2)).max_diff(ConnectionMatrix(-CMatrix::Identity(2, 2))) < 1e-15);
  CHECK(M(branch_cut(-1)).max_diff(M(branch_cut(3))) == 0.0);
  CHECK(M(swap2()).max_diff(ConnectionMatrix(mat2(0.0, 1.0, 1.0, 0.0))) == 0.0);
  CHECK(make_generator(reconnect_n({0.0, kPi, 0.5 * kPi}), 3).matrix()(1, 1) == std::exp(kI * kPi));
}

TEST_CASE("generator errors") {
  try {
    (void)make_generator(branch_cut(1), 3);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
  CHECK_THROWS_AS(make_generator(stokes(1.0), 3), Error);
  CHECK_THROWS_AS(make_generator(reconnect_n({1.0, 2.0}), 3), Error);
  CHECK_THROWS_AS(make_generator(permutation({0, 0}), 2), Error);
  try {
    (void)evaluate_word({2, {reconnect_unresolved("gamma1")}});
    FAIL("expected UnresolvedPhase");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnresolvedPhase);
  }
}

TEST_CASE("word evaluation") {
  CHECK(evaluate_word({2, {}}).max_diff(ConnectionMatrix::identity(2)) == 0.0);
  const cplx s32(0.3, -1.2), s12(0.7, 0.4), omega(0.9, -0.2);
  const OperatorWord w{2, {stokes(s32), reconnect(omega), stokes_t(s12)}};
  CVector psi0(2);
  psi0 << 1.0, 0.0;
  const CVector psi = evaluate_word(w) * psi0;
  CHECK(std::abs(psi(0) - std::exp(kI * omega)) < 1e-14);
  CHECK(std::abs(psi(1) - std::exp(kI * omega) * s32) < 1e-14);

  // a = c, b = d, ab + e^{-2i omega} + 1 = 0  =>  C^2 (S W S^T)^2 = I.
  Rand r(17);
  for (int k = 0; k < 20; ++k) {
    const cplx om = r.omega();
    const cplx a = r.disk(3.0) + 0.5;
    const cplx b = -(std::exp(-2.0 * kI * om) + 1.0) / a;
    const OperatorWord loop{2, {branch_cut(2), stokes(a), reconnect(om), stokes_t(b), stokes(a),
                                reconnect(om), stokes_t(b)}};
    CHECK(rel_diff(evaluate_word(loop), ConnectionMatrix::identity(2)) < 1e-12);
  }
}

TEST_CASE("commute_SW examples and matrix identity") {
  CHECK(std::abs(commute_SW(1.0, 0.0, false) - 1.0) < 1e-15);
  CHECK(std::abs(commute_SW(1.0, kPi / 2.0, false) + 1.0) < 1e-15);
  CHECK(std::abs(commute_SW(kI, cplx(0.0, -kPi / 2.0), true) - kI * std::exp(-kPi)) < 1e-15);
}

TEST_CASE("canonical reduction examples") {
  const cplx a(1.0, 2.0), b(-0.5, 0.25);
  auto r1 = reduce_to_canonical({2, {stokes(a, "a"), stokes(b, "b")}});
  REQUIRE(r1.factors.size() == 2);
  CHECK(r1.factors[0].kind == GenKind::S);
  CHECK(std::abs(r1.factors[0].s - (a + b)) < 1e-15);
  CHECK(r1.factors[0].label == "a+b");
  CHECK(std::abs(r1.factors[1].omegas[0]) == 0.0);

  const cplx w1(0.3, 0.1), w2(-1.1, 0.4);
  auto r2 = reduce_to_canonical({2, {reconnect(w2), reconnect(w1)}});
  CHECK(std::abs(r2.factors[0].s) == 0.0);
  CHECK(std::abs(r2.factors[1].omegas[0] - (w1 + w2)) < 1e-15);

  // S[1] W[i pi] S[1]: moving W left of the right factor multiplies it by
  // e^{-2i * i pi} = e^{2 pi}; verified against direct evaluation.
  const OperatorWord w3{2, {stokes(1.0), reconnect(kI * kPi), stokes(1.0)}};
  auto r3 = reduce_to_canonical(w3);
  CHECK(std::abs(r3.factors[0].s - (1.0 + std::exp(2.0 * kPi))) < 1e-12 * std::exp(2.0 * kPi));
  CHECK(rel_diff(evaluate_word(r3), evaluate_word(w3)) < 1e-12);

  CHECK_THROWS_AS(reduce_to_canonical({2, {stokes(1.0), stokes_t(1.0)}}), Error);
  CHECK_THROWS_AS(reduce_to_canonical({2, {stokes(1.0), swap2()}}), Error);
}

TEST_CASE("basepoint and sign-change conjugation examples") {
  const cplx s(0.4, -0.3), w(0.2, 0.15);
  CHECK(conjugate_basepoint(ConnectionMatrix::identity(2), w).max_diff(ConnectionMatrix::identity(2)) < 1e-15);
  CHECK(conjugate_basepoint(M(stokes(s)), w).max_diff(M(stokes(s * std::exp(-2.0 * kI * w)))) < 1e-14);
  CHECK(std::abs(conjugate_basepoint(M(stokes(s)), w).det() - 1.0) < 1e-14);
  CHECK(conjugate_sign_change(M(stokes(s))).max_diff(M(stokes_t(s))) == 0.0);
  CHECK(conjugate_sign_change(M(reconnect(w))).max_diff(M(reconnect(-w))) < 1e-15);
  const auto F = M(stokes(s)) * M(reconnect(w)) * M(stokes_t(s));
  CHECK(conjugate_sign_change(conjugate_sign_change(F)).max_diff(F) == 0.0);
}

TEST_CASE("n-dimensional conjugation") {
  const std::vector<cplx> lam{2.0, kI, cplx(1.0, 1.0)};
  const std::vector<int> perm{2, 0, 1};
  const auto F = make_generator(reconnect_n({0.1, 0.2, 0.3}), 3);
  const auto G = conjugate_by(F, perm, lam);
  const auto P = make_generator(permutation(perm), 3);
  const auto L = make_generator(diagonal(lam), 3);
  CHECK((P * L * G).max_diff(F * P * L) < 1e-14);
}

TEST_CASE("randomized algebra properties") {
  Rand r(2024);
  double worst = 0.0, worst_det = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const cplx s1 = r.disk(10.0), s2 = r.disk(10.0);
    const cplx w1 = r.omega(), w2 = r.omega();
    worst = std::max(worst, rel_diff(M(stokes(s2)) * M(stokes(s1)), M(stokes(s1 + s2))));
    worst = std::max(worst, rel_diff(M(stokes_t(s2)) * M(stokes_t(s1)), M(stokes_t(s1 + s2))));
    worst = std::max(worst, rel_diff(M(reconnect(w2)) * M(reconnect(w1)), M(reconnect(w1 + w2))));
    for (bool t : {false, true}) {
      const auto lhs = M(t ? stokes_t(s1) : stokes(s1)) * M(reconnect(w1));
      const cplx s2c = commute_SW(s1, w1, t);
      const auto rhs = M(reconnect(w1)) * M(t ? stokes_t(s2c) : stokes(s2c));
      worst = std::max(worst, rel_diff(lhs, rhs));
    }
    // Random same-handed word of length <= 12.
    const bool t = trial % 2;
    OperatorWord w{2, {}};
    const int len = 1 + trial % 12;
    for (int k = 0; k < len; ++k) {
      if (r.uni(0.0, 1.0) < 0.5) w.factors.push_back(t ? stokes_t(r.disk(2.0)) : stokes(r.disk(2.0)));
      else w.factors.push_back(reconnect(r.omega() * 0.2));
    }
    const auto direct = evaluate_word(w);
    for (auto order : {CanonicalOrder::StokesLeft, CanonicalOrder::StokesRight})
      worst = std::max(worst, rel_diff(evaluate_word(reduce_to_canonical(w, order)), direct));
    const auto F = direct;
    worst = std::max(worst, rel_diff(conjugate_basepoint(conjugate_basepoint(F, w1), -w1), F));
    worst = std::max(worst, std::abs(conjugate_basepoint(F, w1).det() - F.det()) /
                                std::max(1.0, std::abs(F.det())));
    worst = std::max(worst, rel_diff(conjugate_sign_change(conjugate_sign_change(F)), F));
    worst_det = std::max(worst_det, std::abs(F.det() - 1.0));
  }
  CHECK(worst < 1e-12);
  CHECK(worst_det < 1e-10);
}
