#include "phaseint/symmetry.hpp"

#include <cmath>
#include <sstream>

#include "phaseint/error.hpp"

namespace phaseint {

RationalIntegrand Family::at(cplx l) const {
  switch (kind) {
    case FamilyKind::Fixed:
      if (!fixed) throw Error(Errc::InvalidInput, "fixed family without an integrand");
      return *fixed;
    case FamilyKind::Weber: return RationalIntegrand::polynomial({-l * l, 0.0, 1.0}, {{"delta", l}});
    case FamilyKind::Airy: return RationalIntegrand::polynomial({-l, 1.0}, {{"lambda", l}});
    case FamilyKind::Fig1:
      return RationalIntegrand(Polynomial({l * l, 0.0, -1.0}), Polynomial({0.0, 1.0}), {{"g", l}});
    case FamilyKind::Quartic: return RationalIntegrand::polynomial({-l, 0.0, 0.0, 0.0, 1.0}, {{"E", l}});
  }
  throw Error(Errc::InvalidInput, "unknown family");
}

std::string Family::name() const {
  switch (kind) {
    case FamilyKind::Fixed: return "fixed";
    case FamilyKind::Weber: return "weber";
    case FamilyKind::Airy: return "airy";
    case FamilyKind::Fig1: return "fig1";
    case FamilyKind::Quartic: return "quartic";
  }
  return "?";
}

Family Family::from_name(const std::string& name) {
  if (name == "weber") return {FamilyKind::Weber, std::nullopt};
  if (name == "airy") return {FamilyKind::Airy, std::nullopt};
  if (name == "fig1") return {FamilyKind::Fig1, std::nullopt};
  if (name == "quartic") return {FamilyKind::Quartic, std::nullopt};
  throw Error(Errc::InvalidInput, "unknown family '" + name + "'");
}

cplx AffineMap::apply(cplx z) const { return a * (conj ? std::conj(z) : z) + b; }

cplx AffineMap::inverse(cplx w) const {
  const cplx u = (w - b) / a;
  return conj ? std::conj(u) : u;
}

double AffineMap::log_angle() const { return angle.value_or(std::arg(a)); }

AffineMap AffineMap::at_mu(double mu) const {
  AffineMap m;
  m.a = std::polar(std::pow(std::abs(a), mu), mu * log_angle());
  m.b = mu * b;
  m.angle = mu * log_angle();
  return m;
}

cplx ParamMap::apply(cplx l) const { return factor() * (conj ? std::conj(l) : l); }

ParamMap ParamMap::at_mu(double mu) const { return {std::pow(modulus, mu), mu * angle, false}; }

std::string ParamMap::expr(const std::string& var) const {
  const std::string arg = conj ? "conj(" + var + ")" : var;
  if (modulus == 1.0 && angle == 0.0) return arg;
  std::ostringstream os;
  if (modulus == 1.0 && angle == 0.5 * kPi) return "i*" + arg;
  if (modulus == 1.0 && angle == -0.5 * kPi) return "-i*" + arg;
  if (modulus != 1.0) os << modulus << "*";
  if (angle != 0.0) {
    const double turns = angle / kPi;
    if (std::abs(turns - std::round(turns)) < 1e-15)
      os << "exp(" << std::lround(turns) << "*i*pi)*";
    else
      os << "exp(" << angle << "*i)*";
  }
  os << arg;
  return os.str();
}

void SymmetryTransform::validate() const {
  if (g.a == cplx{}) throw Error(Errc::InvalidInput, "g must have a nonzero linear coefficient");
  if (h.modulus <= 0.0) throw Error(Errc::InvalidInput, "h must have a positive modulus");
  if (f == cplx{}) throw Error(Errc::InvalidInput, "f must be nonzero");
  if (f_conj != g.conj) throw Error(Errc::InvalidInput, "f and g must agree on conjugation");
  if (mu_steps < 2) throw Error(Errc::InvalidInput, "mu_steps must be at least 2");
}

SymmetryTransform compose(const SymmetryTransform& outer, const SymmetryTransform& inner) {
  auto c = [](bool flag, cplx v) { return flag ? std::conj(v) : v; };
  SymmetryTransform t;
  t.g.a = outer.g.a * c(outer.g.conj, inner.g.a);
  t.g.b = outer.g.a * c(outer.g.conj, inner.g.b) + outer.g.b;
  t.g.conj = outer.g.conj != inner.g.conj;
  t.g.angle = outer.g.log_angle() + (outer.g.conj ? -1.0 : 1.0) * inner.g.log_angle();
  t.h.modulus = outer.h.modulus * inner.h.modulus;
  t.h.angle = outer.h.angle + (outer.h.conj ? -1.0 : 1.0) * inner.h.angle;
  t.h.conj = outer.h.conj != inner.h.conj;
  t.f = outer.f * c(outer.f_conj, inner.f);
  t.f_conj = outer.f_conj != inner.f_conj;
  t.mu_steps = std::max(outer.mu_steps, inner.mu_steps);
  return t;
}

namespace {

// Transformed integrand a^2 R'(g z) or conj(a)^2 conj(R'(g z)).
cplx transformed_R(const RationalIntegrand& Rh, const AffineMap& g, cplx z) {
  const cplx v = evaluate(Rh, g.apply(z));
  return g.conj ? std::conj(g.a * g.a * v) : g.a * g.a * v;
}

double min_distance(cplx z, const std::vector<cplx>& pts) {
  double d = std::numeric_limits<double>::infinity();
  for (const cplx p : pts) d = std::min(d, std::abs(z - p));
  return d;
}

}  // namespace

SymmetryCheck check_is_symmetry(const Family& fam, cplx lambda, const SymmetryTransform& T, int samples) {
  T.validate();
  if (samples < 4) throw Error(Errc::InvalidInput, "at least 4 sample points are required");
  const auto R = fam.at(lambda);
  const auto Rh = fam.at(T.h.apply(lambda));
  auto sing = find_zeros_poles(R).points();
  const auto singh = find_zeros_poles(Rh).points();
  for (const cplx p : singh) sing.push_back(T.g.inverse(p));
  const double scale = std::max(1.0, std::abs(lambda));
  double worst = 0.0;
  int used = 0;
  for (int k = 0; used < samples && k < 8 * samples; ++k) {
    // Points on a spiral, irrational angle steps.
    const double r = scale * (0.35 + 0.173 * k);
    const cplx z = std::polar(r, 2.399963229728653 * k + 0.3);
    if (min_distance(z, sing) < 1e-3 * scale) continue;
    const cplx lhs = transformed_R(Rh, T.g, z);
    const cplx rhs = evaluate(R, z);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    ++used;
  }
  return {worst < 1e-10, worst};
}

bool basis_swapped(const Family& fam, cplx lambda, const SymmetryTransform& T, cplx zeta) {
  const auto R = fam.at(lambda);
  const auto Rh = fam.at(T.h.apply(lambda));
  const cplx q = BranchSheet::asymptotic(R, zeta).anchor_value();
  const cplx w = T.g.apply(zeta);
  const cplx qh = BranchSheet::asymptotic(Rh, w).anchor_value();
  const cplx qt = T.g.conj ? std::conj(T.g.a) * std::conj(qh) : T.g.a * qh;
  const bool same = std::abs(qt - q) < std::abs(qt + q);
  // Conjugation sends exp(i w) to exp(-i conj w), exchanging the roles.
  return same == T.g.conj;
}

PathSpec trace_basepoint_homotopy(const Family& fam, cplx lambda, const SymmetryTransform& T,
                                  const BasepointRule& z0, double clearance) {
  T.validate();
  if (T.g.conj || T.h.conj)
    throw Error(Errc::InvalidInput, "antilinear transforms have no continuous basepoint homotopy");
  std::vector<cplx> pts;
  for (int k = 0; k <= T.mu_steps; ++k) {
    const double mu = static_cast<double>(k) / T.mu_steps;
    pts.push_back(T.g.at_mu(mu).inverse(z0.at(T.h.at_mu(mu).apply(lambda))));
  }
  PathSpec hom(pts);
  validate_homotopy_path(fam.at(lambda), hom, clearance);
  return hom;
}

void validate_homotopy_path(const RationalIntegrand& R, const PathSpec& hom, double clearance) {
  const auto sing = find_zeros_poles(R).points();
  const auto pts = hom.polyline();
  const cplx first = pts.front(), last = pts.back();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (const cplx p : sing) {
      const double d = distance_to_segment(p, pts[i], pts[i + 1]);
      if (d >= clearance) continue;
      // The end basepoints may themselves be zeros.
      if (i == 0 && std::abs(p - first) < clearance) continue;
      if (i + 2 == pts.size() && std::abs(p - last) < clearance) continue;
      std::ostringstream os;
      os << "basepoint homotopy meets a singular point at (" << p.real() << ", " << p.imag() << ")";
      throw Error(Errc::HomotopyAmbiguous, os.str());
    }
  }
}

cplx homotopy_phase(const RationalIntegrand& R, const PathSpec& hom) {
  const auto pts = hom.polyline();
  if (pts.size() < 2 || hom.length() == 0.0) return 0.0;
  const auto sing = find_zeros_poles(R).points();
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double d = min_distance(0.5 * (pts[i] + pts[i + 1]), sing);
    if (d > best_d) best_d = d, best = i;
  }
  const cplx ref = 0.5 * (pts[best] + pts[best + 1]);
  std::vector<cplx> fwd{ref}, bwd{ref};
  for (std::size_t i = best + 1; i < pts.size(); ++i) fwd.push_back(pts[i]);
  for (std::size_t i = best + 1; i-- > 0;) bwd.push_back(pts[i]);
  const auto sheet = BranchSheet::asymptotic(R, ref);
  const double tol = 1e-13 * std::max(1.0, hom.length());
  return phase_integral(sheet, PathSpec(fwd), tol).omega - phase_integral(sheet, PathSpec(bwd), tol).omega;
}

FRelationResult verify_fmatrix_relation(const Family& fam, cplx lambda, const SymmetryTransform& T,
                                        const PathSpec& gamma, cplx z0, cplx z0_tilde,
                                        const std::optional<PathSpec>& hom_path, const OracleOptions& opt) {
  const auto chk = check_is_symmetry(fam, lambda, T);
  if (!chk.ok) throw Error(Errc::InvalidInput, "transform is not a symmetry of the family");
  const auto R = fam.at(lambda);
  const cplx lh = T.h.apply(lambda);
  const auto Rh = fam.at(lh);

  std::vector<cplx> img;
  for (const cplx z : gamma.waypoints) img.push_back(T.g.apply(z));
  const PathSpec ggamma(img, gamma.closed, gamma.clearance);
  const auto singh = find_zeros_poles(Rh).points();
  ggamma.check_clearance(singh);
  for (std::size_t i = 0; i < ggamma.segment_count(); ++i) {
    const auto [a, b] = ggamma.segment(i);
    for (const cplx p : singh)
      if (distance_to_segment(p, a, b) < 1e-6) throw Error(Errc::PathClash, "transformed path meets a singular point");
  }

  const cplx p = T.g.inverse(z0);
  FRelationResult out;
  out.x = 0.0;
  if (hom_path) {
    if (std::abs(hom_path->front() - z0_tilde) > 1e-9 || std::abs(hom_path->back() - p) > 1e-9)
      throw Error(Errc::InvalidInput, "homotopy path must run from z0_tilde to g^{-1}(z0)");
    validate_homotopy_path(R, *hom_path);
    out.x = homotopy_phase(R, *hom_path);
  } else if (std::abs(p - z0_tilde) > 1e-9) {
    throw Error(Errc::InvalidInput, "basepoints differ; a homotopy path is required");
  }

  const auto fl = exact_fmatrix(BranchSheet::asymptotic(Rh, ggamma.front()), ggamma, z0, opt);
  const auto fr = exact_fmatrix(BranchSheet::asymptotic(R, gamma.front()), gamma, z0_tilde, opt);
  out.swapped = basis_swapped(fam, lambda, T, gamma.front());
  // A constant f cancels in F; only its conjugation acts.
  ConnectionMatrix lhs = T.f_conj ? fl.matrix.conj() : fl.matrix;
  if (out.swapped) lhs = conjugate_sign_change(lhs);
  out.lhs = lhs;
  out.rhs = conjugate_basepoint(fr.matrix, out.x);
  out.residual = out.lhs.max_diff(out.rhs);
  return out;
}

namespace {

StokesForm flipped(StokesForm f) { return f == StokesForm::S ? StokesForm::ST : StokesForm::S; }

std::string fmt(cplx v) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i)";
  return os.str();
}

}  // namespace

std::string StokesConstantRelation::to_string() const {
  std::string l = lhs.name + "(" + lhs_arg + ")";
  if (conj) l = "conj(" + l + ")";
  if (negated) l = "-" + l;
  return l + " = " + rhs.name + "(" + rhs_arg + ") * " + fmt(phase_factor);
}

double StokesConstantRelation::residual(cplx s_lhs, cplx s_rhs) const {
  cplx l = conj ? std::conj(s_lhs) : s_lhs;
  if (negated) l = -l;
  return std::abs(l - s_rhs * phase_factor);
}

StokesConstantRelation derive_constant_relation(const SymmetryTransform& T, const DomainRef& lhs,
                                                const DomainRef& rhs, bool swapped, cplx x) {
  T.validate();
  const StokesForm effective = swapped ? flipped(lhs.form) : lhs.form;
  if (effective != rhs.form)
    throw Error(Errc::HandednessMismatch, "domain forms of " + lhs.name + " and " + rhs.name +
                                              " disagree under the induced basis permutation");
  StokesConstantRelation rel;
  rel.lhs = lhs;
  rel.rhs = rhs;
  rel.lhs_arg = T.h.expr("l");
  rel.rhs_arg = "l";
  rel.conj = T.f_conj;
  rel.negated = T.antilinear();
  rel.x = x;
  rel.phase_factor = std::exp((rhs.form == StokesForm::S ? -2.0 : 2.0) * kI * x);
  std::ostringstream os;
  os << "F-matrix relation with P " << (swapped ? "swap" : "identity") << ", x = " << fmt(x)
     << (rel.negated ? ", orientation reversed" : "");
  rel.provenance = os.str();
  return rel;
}

bool purely_imaginary_check(const StokesConstantRelation& rel, const std::vector<cplx>& values) {
  const bool self = rel.conj && rel.negated && rel.lhs.name == rel.rhs.name &&
                    std::abs(rel.phase_factor - 1.0) < 1e-12;
  if (!self) throw Error(Errc::NotApplicable, "relation does not map the constant to minus its conjugate");
  for (const cplx s : values)
    if (std::abs(s.real()) >= 1e-6 * std::abs(s)) return false;
  return true;
}

}  // namespace phaseint
