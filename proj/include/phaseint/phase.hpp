#pragma once

// Branch-tracked phase integrand q = sqrt(R), phase integrals, the validity
// parameter and the base phase-integral solutions y+-.

#include <optional>
#include <vector>

#include "phaseint/cplane.hpp"

namespace phaseint {

/// Lowest-order phase integrand q with a chosen branch at an anchor point.
///
/// The sheet also tracks rho = q^{1/2}, which fixes the prefactor q^{-1/2}
/// of the base solutions; both are continued together so that products of
/// basis values are never affected by hidden sign flips.
class BranchSheet {
 public:
  /// `anchor_value` must satisfy anchor_value^2 = R(anchor) to relative 1e-12.
  /// `anchor_root` defaults to the principal square root of `anchor_value`.
  BranchSheet(RationalIntegrand R, cplx anchor, cplx anchor_value,
              std::optional<cplx> anchor_root = std::nullopt, double clearance = 1e-6);

  /// Sheet whose q at `anchor` is the root of R closest to the asymptotic
  /// branch sqrt(c) z^{n/2} (principal powers), where R ~ c z^n.
  static BranchSheet asymptotic(RationalIntegrand R, cplx anchor, double clearance = 1e-6);

  const RationalIntegrand& integrand() const { return R_; }
  cplx anchor() const { return anchor_; }
  cplx anchor_value() const { return q_; }
  cplx anchor_root() const { return rho_; }
  double clearance() const { return clearance_; }
  /// Zeros and poles of R (the branch points and interaction centres).
  const std::vector<cplx>& singular_points() const { return singular_; }
  const ZerosPoles& zeros_poles() const { return zp_; }

  /// Sheet with q -> -q (rho continued as rho * i).
  BranchSheet negated() const;
  /// Sheet re-anchored at the end of `path` (which must start at the anchor).
  BranchSheet continued(const PathSpec& path) const;

 private:
  friend struct BranchTracker;
  BranchSheet(RationalIntegrand R, cplx anchor, cplx q, cplx rho, double clearance,
              ZerosPoles zp, std::vector<cplx> singular);

  RationalIntegrand R_;
  cplx anchor_;
  cplx q_;
  cplx rho_;
  double clearance_;
  ZerosPoles zp_;
  std::vector<cplx> singular_;
};

/// Sub-segment of a path over which the branch of q is fixed by a reference
/// value at its start.
struct BranchPiece {
  cplx a, b;
  cplx q_a, rho_a;
};

/// Splits `path` into pieces short enough that the branch of q is decided by
/// proximity to the previous value. The path must start at the sheet anchor.
/// The final waypoint may be a zero of R (integrable endpoint).
std::vector<BranchPiece> track_branch(const BranchSheet& sheet, const PathSpec& path);

/// Value of q on the branch selected by the reference q_ref.
cplx q_near(const RationalIntegrand& R, cplx z, cplx q_ref);

struct PhaseValue {
  cplx omega;
  cplx basepoint;
  cplx endpoint;
  PathSpec path;
  cplx q_end;    // continued q at the endpoint
  cplx rho_end;  // continued q^{1/2} at the endpoint
  double err_estimate = 0.0;
};

/// omega = integral of q along `path`, with branch continuity from the sheet
/// anchor. The path must start at the anchor.
PhaseValue phase_integral(const BranchSheet& sheet, const PathSpec& path, double tol = 1e-10);

/// Validity parameter for the lowest-order choice q^2 = R:
/// epsilon = 5/16 R'^2/R^3 - 1/4 R''/R^2.
cplx epsilon(const RationalIntegrand& R, cplx z);

struct BasisValues {
  cplx y_plus, y_plus_deriv;
  cplx y_minus, y_minus_deriv;
};

/// y+- = q^{-1/2} exp(+-i omega) and their z-derivatives at the endpoint of
/// `omega`. Throws ValidityViolation when |epsilon| exceeds `eps_threshold`.
BasisValues basis_values(const RationalIntegrand& R, const PhaseValue& omega,
                         double eps_threshold = 1e-8);

/// Same, from explicit q, q^{1/2} and omega at z.
BasisValues basis_values_at(const RationalIntegrand& R, cplx z, cplx q, cplx rho, cplx omega);

}  // namespace phaseint
