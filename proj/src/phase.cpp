#include "phaseint/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phaseint/error.hpp"

namespace phaseint {

namespace {

cplx closer_sign(cplx candidate, cplx ref) {
  return (std::conj(ref) * candidate).real() >= 0.0 ? candidate : -candidate;
}

std::vector<cplx> singular_set(const ZerosPoles& zp) { return zp.points(); }

ZerosPoles safe_zeros_poles(const RationalIntegrand& R) {
  if (R.numerator().is_zero()) throw Error(Errc::DegenerateInput, "R is identically zero");
  return find_zeros_poles(R);
}

}  // namespace

cplx q_near(const RationalIntegrand& R, cplx z, cplx q_ref) {
  return closer_sign(std::sqrt(R.value(z)), q_ref);
}

BranchSheet::BranchSheet(RationalIntegrand R, cplx anchor, cplx q, cplx rho, double clearance,
                         ZerosPoles zp, std::vector<cplx> singular)
    : R_(std::move(R)),
      anchor_(anchor),
      q_(q),
      rho_(rho),
      clearance_(clearance),
      zp_(std::move(zp)),
      singular_(std::move(singular)) {}

BranchSheet::BranchSheet(RationalIntegrand R, cplx anchor, cplx anchor_value,
                         std::optional<cplx> anchor_root, double clearance)
    : R_(std::move(R)), anchor_(anchor), q_(anchor_value), clearance_(clearance) {
  const cplx r = evaluate(R_, anchor_);
  if (std::abs(q_ * q_ - r) > 1e-12 * std::max(1.0, std::abs(r)))
    throw Error(Errc::InvalidInput, "anchor value squared does not match R at the anchor");
  if (r == cplx{}) throw Error(Errc::BranchAmbiguity, "sheet anchored at a zero of R");
  rho_ = anchor_root.value_or(std::sqrt(q_));
  if (std::abs(rho_ * rho_ - q_) > 1e-12 * std::max(1.0, std::abs(q_)))
    throw Error(Errc::InvalidInput, "anchor root squared does not match anchor value");
  zp_ = safe_zeros_poles(R_);
  singular_ = singular_set(zp_);
}

BranchSheet BranchSheet::asymptotic(RationalIntegrand R, cplx anchor, double clearance) {
  const int n = R.growth_degree();
  const cplx c = R.growth_coefficient();
  const cplx model = std::sqrt(c) * std::pow(anchor, 0.5 * n);
  const cplx q = closer_sign(std::sqrt(evaluate(R, anchor)), model);
  return BranchSheet(std::move(R), anchor, q, std::nullopt, clearance);
}

BranchSheet BranchSheet::negated() const {
  return BranchSheet(R_, anchor_, -q_, rho_ * kI, clearance_, zp_, singular_);
}

BranchSheet BranchSheet::continued(const PathSpec& path) const {
  const auto pieces = track_branch(*this, path);
  if (pieces.empty()) return *this;
  const auto& last = pieces.back();
  const cplx q = q_near(R_, last.b, last.q_a);
  if (q == cplx{}) throw Error(Errc::BranchAmbiguity, "cannot anchor a sheet at a zero of R");
  const cplx rho = closer_sign(std::sqrt(q), last.rho_a);
  return BranchSheet(R_, last.b, q, rho, clearance_, zp_, singular_);
}

std::vector<BranchPiece> track_branch(const BranchSheet& sheet, const PathSpec& path) {
  path.validate();
  const cplx start = path.front();
  if (std::abs(start - sheet.anchor()) > 1e-12 * (1.0 + std::abs(start)))
    throw Error(Errc::BranchAmbiguity, "path does not start at the sheet anchor");

  const auto& R = sheet.integrand();
  const auto& sing = sheet.singular_points();
  const double clear = std::max(sheet.clearance(), path.clearance);
  const std::size_t nseg = path.segment_count();

  std::vector<BranchPiece> pieces;
  cplx q = sheet.anchor_value();
  cplx rho = sheet.anchor_root();
  for (std::size_t s = 0; s < nseg; ++s) {
    auto [a, b] = path.segment(s);
    const bool last_segment = (s + 1 == nseg);
    // A zero of R exactly at the final endpoint is approached along a ray,
    // so its factor keeps a constant argument and is excluded from stepping.
    std::optional<cplx> end_zero;
    if (last_segment) {
      for (const auto& z : sheet.zeros_poles().zeros)
        if (std::abs(z.value - b) <= 1e-12 * (1.0 + std::abs(b))) end_zero = z.value;
    }
    auto distance = [&](cplx p) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& sp : sing) {
        if (end_zero && sp == *end_zero) continue;
        d = std::min(d, std::abs(p - sp));
      }
      return d;
    };
    for (const auto& sp : sing) {
      if (end_zero && sp == *end_zero) continue;
      if (distance_to_segment(sp, a, b) < clear)
        throw Error(Errc::BranchAmbiguity, "path passes within clearance of a branch point");
    }
    cplx z = a;
    const double seg_len = std::abs(b - a);
    double travelled = 0.0;
    while (travelled < seg_len) {
      const double d = distance(z);
      double h = std::min(seg_len - travelled, 0.25 * d);
      if (h <= 0.0) throw Error(Errc::BranchAmbiguity, "branch tracking stalled");
      const bool final_piece = (travelled + h >= seg_len);
      const cplx znext = final_piece ? b : a + (b - a) * ((travelled + h) / seg_len);
      pieces.push_back({z, znext, q, rho});
      if (!(final_piece && end_zero)) {
        q = q_near(R, znext, q);
        rho = closer_sign(std::sqrt(q), rho);
      } else {
        q = 0.0;
        rho = 0.0;
      }
      z = znext;
      travelled = final_piece ? seg_len : travelled + h;
    }
  }
  return pieces;
}

PhaseValue phase_integral(const BranchSheet& sheet, const PathSpec& path, double tol) {
  PhaseValue pv;
  pv.basepoint = path.front();
  pv.endpoint = path.back();
  pv.path = path;
  if (path.waypoints.size() == 2 && !path.closed && path.waypoints[0] == path.waypoints[1]) {
    pv.omega = 0.0;
    pv.q_end = sheet.anchor_value();
    pv.rho_end = sheet.anchor_root();
    return pv;
  }
  const auto bp = track_branch(sheet, path);
  const auto& R = sheet.integrand();
  std::vector<ContourPiece> pieces;
  pieces.reserve(bp.size());
  for (const auto& p : bp) {
    const cplx ref = p.q_a;
    pieces.push_back({p.a, p.b, [&R, ref](cplx z) { return q_near(R, z, ref); }});
  }
  const auto res = integrate_pieces(pieces, tol);
  pv.omega = res.value;
  pv.err_estimate = res.err_estimate;
  const auto& last = bp.back();
  pv.q_end = q_near(R, last.b, last.q_a);
  pv.rho_end = pv.q_end == cplx{} ? cplx{} : closer_sign(std::sqrt(pv.q_end), last.rho_a);
  return pv;
}

cplx epsilon(const RationalIntegrand& R, cplx z) {
  cplx r, r1, r2;
  const cplx d = R.denominator()(z);
  if (std::abs(d) == 0.0) throw Error(Errc::SingularPoint, "epsilon at a pole of R");
  R.derivatives(z, r, r1, r2);
  if (r == cplx{} || !std::isfinite(std::abs(r)))
    throw Error(Errc::SingularPoint, "epsilon is infinite at a zero or pole of R");
  return 5.0 / 16.0 * r1 * r1 / (r * r * r) - 0.25 * r2 / (r * r);
}

BasisValues basis_values_at(const RationalIntegrand& R, cplx z, cplx q, cplx rho, cplx omega) {
  cplx r, r1, r2;
  R.derivatives(z, r, r1, r2);
  const cplx dq = r1 / (2.0 * q);
  const cplx log_drift = dq / (2.0 * q);
  BasisValues bv;
  bv.y_plus = std::exp(kI * omega) / rho;
  bv.y_minus = std::exp(-kI * omega) / rho;
  bv.y_plus_deriv = (kI * q - log_drift) * bv.y_plus;
  bv.y_minus_deriv = (-kI * q - log_drift) * bv.y_minus;
  return bv;
}

BasisValues basis_values(const RationalIntegrand& R, const PhaseValue& omega,
                         double eps_threshold) {
  const cplx z = omega.endpoint;
  const cplx eps = epsilon(R, z);
  if (std::abs(eps) > eps_threshold)
    throw Error(Errc::ValidityViolation,
                "|epsilon| = " + std::to_string(std::abs(eps)) + " exceeds the matching threshold");
  return basis_values_at(R, z, omega.q_end, omega.rho_end, omega.omega);
}

}  // namespace phaseint
