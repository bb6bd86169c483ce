#pragma once

// Symmetry transformations {f, g, h} of y'' + R(z, lambda) y = 0 and the
// relations they induce between F-matrices and effective Stokes constants.

#include <optional>
#include <string>

#include "phaseint/oracle.hpp"

namespace phaseint {

/// One-parameter integrand families R(z, lambda).
enum class FamilyKind { Fixed, Weber, Airy, Fig1, Quartic };

struct Family {
  FamilyKind kind = FamilyKind::Fixed;
  /// Used for Fixed only.
  std::optional<RationalIntegrand> fixed;

  /// Weber: z^2 - l^2; Airy: z - l; Fig1: -z + l^2/z; Quartic: z^4 - l.
  RationalIntegrand at(cplx lambda) const;
  std::string name() const;
  static Family from_name(const std::string& name);
};

/// z -> a z + b, or a conj(z) + b. `angle` fixes log(a) for homotopies
/// (defaults to arg a).
struct AffineMap {
  cplx a{1.0}, b{};
  bool conj = false;
  std::optional<double> angle;

  cplx apply(cplx z) const;
  cplx inverse(cplx w) const;
  double log_angle() const;
  /// g_mu with a_mu = |a|^mu e^{i mu angle}, b_mu = mu b (linear part only).
  AffineMap at_mu(double mu) const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// lambda -> c lambda, or c conj(lambda), with c = modulus e^{i angle}.
struct ParamMap {
  double modulus = 1.0;
  double angle = 0.0;
  bool conj = false;

  cplx factor() const { return std::polar(modulus, angle); }
  cplx apply(cplx lambda) const;
  ParamMap at_mu(double mu) const;
  /// Symbolic form, e.g. "i*l", "exp(i*pi)*l", "conj(l)".
  std::string expr(const std::string& var = "l") const;

  friend bool operator==(const ParamMap&, const ParamMap&) = default;
};

struct SymmetryTransform {
  cplx f{1.0};
  bool f_conj = false;
  AffineMap g;
  ParamMap h;
  int mu_steps = 64;

  bool antilinear() const { return g.conj; }
  /// Throws InvalidInput for a = 0 or mismatched conjugation flags.
  void validate() const;

  friend bool operator==(const SymmetryTransform&, const SymmetryTransform&) = default;
};

/// outer o inner.
SymmetryTransform compose(const SymmetryTransform& outer, const SymmetryTransform& inner);

struct SymmetryCheck {
  bool ok;
  double residual;
};

/// a^2 R(a z + b, h l) = R(z, l) (linear) or conj(a)^2 conj(R(a conj z + b, h l)) = R(z, l)
/// (antilinear) on `samples` deterministic points; ok iff residual < 1e-10.
SymmetryCheck check_is_symmetry(const Family& fam, cplx lambda, const SymmetryTransform& T, int samples = 16);

/// Whether the transformed basis exchanges y+ and y- (P_sigma = swap),
/// comparing the transformed phase integrand with q_lambda at zeta; both
/// sheets follow the asymptotic rule.
bool basis_swapped(const Family& fam, cplx lambda, const SymmetryTransform& T, cplx zeta);

/// Basepoint rule z0(lambda) = coeff * lambda + offset.
struct BasepointRule {
  cplx coeff{1.0}, offset{};
  cplx at(cplx lambda) const { return coeff * lambda + offset; }
};

/// Path p(mu) = g_mu^{-1}(z0(h_mu lambda)), mu in [0, 1]. Throws
/// HomotopyAmbiguous when an interior point meets a zero or pole of
/// R(., lambda).
PathSpec trace_basepoint_homotopy(const Family& fam, cplx lambda, const SymmetryTransform& T,
                                  const BasepointRule& z0, double clearance = 1e-6);

/// Throws HomotopyAmbiguous when an interior point of `hom` comes within
/// `clearance` of a zero or pole of R.
void validate_homotopy_path(const RationalIntegrand& R, const PathSpec& hom, double clearance = 1e-6);

/// Integral of q along `hom`; the branch is the asymptotic sheet at the
/// point of the path farthest from the zeros and poles.
cplx homotopy_phase(const RationalIntegrand& R, const PathSpec& hom);

struct FRelationResult {
  double residual;
  bool swapped;
  ConnectionMatrix lhs, rhs;
  cplx x;  // integral of q from z0_tilde to g^{-1} z0 along the homotopy path
};

/// LHS = P^{-1} {f F[g gamma, h l]} P (conjugated entrywise when antilinear),
/// RHS = W[x] F[gamma, l] W[-x]. `z0` is the basepoint of the transformed
/// system, `z0_tilde` that of the original one.
FRelationResult verify_fmatrix_relation(const Family& fam, cplx lambda, const SymmetryTransform& T,
                                        const PathSpec& gamma, cplx z0, cplx z0_tilde,
                                        const std::optional<PathSpec>& hom_path, const OracleOptions& opt = {});

struct DomainRef {
  std::string name;
  StokesForm form;  // in the frame of the system it belongs to
};

struct StokesConstantRelation {
  DomainRef lhs, rhs;
  std::string lhs_arg, rhs_arg;
  bool conj = false;     // f acts by conjugation
  bool negated = false;  // g reverses the crossing orientation
  cplx phase_factor{1.0};
  cplx x{};
  std::string provenance;

  /// "-conj(s_1/2(conj(l))) = s_-1/2(l) * (1+0i)".
  std::string to_string() const;
  /// |transformed lhs - rhs * phase_factor|.
  double residual(cplx s_lhs, cplx s_rhs) const;
};

/// f s(h l) = s~(l) e^{-+2ix}: minus for S form, plus for S^T; negated and
/// conjugated when T is antilinear. Throws HandednessMismatch when the
/// forms are inconsistent with P_sigma.
StokesConstantRelation derive_constant_relation(const SymmetryTransform& T, const DomainRef& lhs,
                                                const DomainRef& rhs, bool swapped, cplx x);

/// For a self-conjugate relation (conj, negated, same constant, unit phase
/// factor): true iff |Re s| < 1e-6 |s| for every value. Throws
/// NotApplicable otherwise.
bool purely_imaginary_check(const StokesConstantRelation& rel, const std::vector<cplx>& values);

}  // namespace phaseint
