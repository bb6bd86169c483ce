#include "phaseint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phaseint/error.hpp"

namespace phaseint {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

using State = std::array<cplx, 4>;  // y1, y1', y2, y2'

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [c, k] : terms)
    for (int i = 0; i < 4; ++i) out[i] += h * c * (*k)[i];
  return out;
}

double weight(const RationalIntegrand& R, cplx z) { return std::max(1.0, std::sqrt(std::abs(R.value(z)))); }

double phase_length(const RationalIntegrand& R, const PathSpec& path) {
  double phi = 0.0;
  constexpr int n = 64;
  for (std::size_t s = 0; s < path.segment_count(); ++s) {
    auto [a, b] = path.segment(s);
    for (int k = 0; k < n; ++k) phi += weight(R, a + (b - a) * ((k + 0.5) / n)) * std::abs(b - a) / n;
  }
  return phi;
}

// Absolute quadrature tolerance for phase integrals along `path`.
double phase_tol(const RationalIntegrand& R, const PathSpec& path) {
  return 1e-13 * std::max(1.0, phase_length(R, path));
}

double sol_norm(cplx y, cplx dy, double w) { return std::sqrt(w * std::norm(y) + std::norm(dy) / w); }

}  // namespace

std::array<OdeState, 2> transport(const RationalIntegrand& R, const PathSpec& path,
                                  std::array<OdeState, 2> init, const OracleOptions& opt, long* steps) {
  path.validate();
  const auto poles = find_zeros_poles(R).poles;
  std::vector<cplx> pole_pts;
  for (const auto& p : poles) pole_pts.push_back(p.value);
  for (std::size_t s = 0; s < path.segment_count(); ++s) {
    auto [a, b] = path.segment(s);
    for (const auto& p : pole_pts)
      if (distance_to_segment(p, a, b) < std::max(path.clearance, 1e-8))
        throw Error(Errc::PathClash, "ODE path runs into a pole of R");
  }

  const double phi = opt.error_per_phase ? phase_length(R, path) : 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  State y{init[0].y, init[0].dy, init[1].y, init[1].dy};
  long nsteps = 0;
  double h_carry = 0.0;

  for (std::size_t seg = 0; seg < path.segment_count(); ++seg) {
    auto [a, b] = path.segment(seg);
    const double L = std::abs(b - a);
    const cplx u = (b - a) / L;
    auto f = [&](double s, const State& Y) {
      const cplx z = a + u * s;
      const cplx r = R.value(z);
      return State{u * Y[1], -u * r * Y[0], u * Y[3], -u * r * Y[2]};
    };
    double s = 0.0;
    double h = h_carry > 0.0 ? std::min(h_carry, L) : std::min(L, 0.05 / weight(R, a));
    State k1 = f(0.0, y);
    while (s < L) {
      if (++nsteps > opt.max_steps) throw Error(Errc::StiffnessFailure, "step budget exhausted");
      const bool last = s + h >= L * (1.0 - 1e-14);
      if (last) h = L - s;
      const State k2 = f(s + C2 * h, axpy(y, h, {{A21, &k1}}));
      const State k3 = f(s + C3 * h, axpy(y, h, {{A31, &k1}, {A32, &k2}}));
      const State k4 = f(s + C4 * h, axpy(y, h, {{A41, &k1}, {A42, &k2}, {A43, &k3}}));
      const State k5 = f(s + C5 * h, axpy(y, h, {{A51, &k1}, {A52, &k2}, {A53, &k3}, {A54, &k4}}));
      const State k6 = f(s + h, axpy(y, h, {{A61, &k1}, {A62, &k2}, {A63, &k3}, {A64, &k4}, {A65, &k5}}));
      const State yn = axpy(y, h, {{B1, &k1}, {B3, &k3}, {B4, &k4}, {B5, &k5}, {B6, &k6}});
      const State k7 = f(s + h, yn);
      State err{};
      for (int i = 0; i < 4; ++i)
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);

      const double w = weight(R, a + u * (s + 0.5 * h));
      const double share = opt.error_per_phase && phi > 0.0 ? std::min(1.0, h * w / phi) : 1.0;
      double ratio = 0.0;
      for (int j = 0; j < 2; ++j) {
        const double scale = std::max(sol_norm(y[2 * j], y[2 * j + 1], w), sol_norm(yn[2 * j], yn[2 * j + 1], w));
        const double allowed = std::max(opt.tol * share, 16.0 * eps) * scale;
        ratio = std::max(ratio, sol_norm(err[2 * j], err[2 * j + 1], w) / allowed);
      }
      if (!std::isfinite(ratio)) throw Error(Errc::NonFinite, "ODE solution overflowed");
      const double grow = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      if (ratio <= 1.0) {
        s = last ? L : s + h;
        y = yn;
        k1 = k7;
        if (!last) h_carry = h;
        h *= grow;
      } else {
        h *= std::min(grow, 0.9);
        if (h < 1e-14 * std::max(1.0, L))
          throw Error(Errc::StiffnessFailure, "step size underflow near z = " + std::to_string(std::abs(a + u * s)));
      }
    }
  }
  if (steps) *steps += nsteps;
  return {OdeState{y[0], y[1]}, OdeState{y[2], y[3]}};
}

namespace {

cplx ray_centre(const BranchSheet& sheet) {
  const auto& pts = sheet.singular_points();
  if (pts.empty()) return 0.0;
  cplx c{};
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

double eps_abs(const RationalIntegrand& R, cplx z) {
  try {
    return std::abs(epsilon(R, z));
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Smallest point on the ray from `centre` through z (beyond z) with
// |epsilon| below the threshold; z itself when already valid.
cplx advance_outward(const RationalIntegrand& R, cplx centre, cplx z, double thr) {
  if (eps_abs(R, z) < thr) return z;
  const cplx d = z - centre;
  if (std::abs(d) == 0.0) throw Error(Errc::ValidityViolation, "cannot extend an endpoint at the centre");
  double lo = 1.0, hi = 2.0;
  while (eps_abs(R, centre + hi * d) >= thr) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw Error(Errc::ValidityViolation, "no matching point along the extension ray");
  }
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eps_abs(R, centre + mid * d) < thr ? hi : lo) = mid;
  }
  return centre + hi * d;
}

// Coefficients (c+, c-) of (y, y') in the basis b, using the exact
// Wronskian y+ y-' - y- y+' = -2i.
std::array<cplx, 2> decompose(const BasisValues& b, const OdeState& s) {
  const cplx w(0.0, -2.0);
  return {(s.y * b.y_minus_deriv - b.y_minus * s.dy) / w, (b.y_plus * s.dy - s.y * b.y_plus_deriv) / w};
}

std::vector<int> pole_windings(const std::vector<cplx>& loop, const ZerosPoles& zp) {
  std::vector<int> out;
  for (const auto& p : zp.poles) out.push_back(winding_number(loop, p.value));
  return out;
}

}  // namespace

ExactFResult exact_fmatrix(const BranchSheet& sheet, const PathSpec& path, cplx basepoint,
                           const OracleOptions& opt) {
  path.validate();
  const auto& R = sheet.integrand();
  const cplx z1 = path.front(), z2 = path.back();

  // Phase at the start point relative to the basepoint.
  cplx omega1 = 0.0;
  if (opt.omega_start) {
    omega1 = *opt.omega_start;
  } else if (std::abs(basepoint - z1) > 0.0) {
    const PathSpec leg = opt.basepoint_leg ? *opt.basepoint_leg : straight(z1, basepoint);
    if (std::abs(leg.front() - z1) > 1e-12 * (1.0 + std::abs(z1)) ||
        std::abs(leg.back() - basepoint) > 1e-12 * (1.0 + std::abs(basepoint)))
      throw Error(Errc::InvalidInput, "basepoint leg must run from the path start to the basepoint");
    omega1 = -phase_integral(sheet, leg, phase_tol(R, leg)).omega;
  }

  // Endpoint extension along rays from the centre of the singular points.
  const cplx centre = ray_centre(sheet);
  const double thr = opt.matching_eps;
  const cplx e1 = opt.extend ? advance_outward(R, centre, z1, thr) : z1;
  const cplx e2 = opt.extend ? advance_outward(R, centre, z2, thr) : z2;

  BranchSheet start_sheet = sheet;
  cplx omega_e1 = omega1;
  if (e1 != z1) {
    const auto ext = phase_integral(sheet, straight(z1, e1), phase_tol(R, straight(z1, e1)));
    omega_e1 += ext.omega;
    start_sheet = sheet.continued(straight(z1, e1));
  }

  std::vector<cplx> pts;
  if (e1 != z1) pts.push_back(e1);
  for (const auto& p : path.polyline()) pts.push_back(p);
  if (e2 != z2) pts.push_back(e2);
  PathSpec full(pts, false, path.clearance);

  const auto pv = phase_integral(start_sheet, full, phase_tol(R, full));
  const cplx omega_e2 = omega_e1 + pv.omega;

  ExactFResult out;
  out.path = full;
  out.basepoint = basepoint;
  out.eps_start = eps_abs(R, e1);
  out.eps_end = eps_abs(R, e2);
  out.ode_tolerance = opt.tol;
  out.omega_start = omega_e1;
  out.omega_end = omega_e2;
  if (out.eps_start >= thr || out.eps_end >= thr)
    throw Error(Errc::ValidityViolation, "matching point has |epsilon| above the threshold");

  const auto b1 = basis_values_at(R, e1, start_sheet.anchor_value(), start_sheet.anchor_root(), omega_e1);
  const auto b2 = basis_values_at(R, e2, pv.q_end, pv.rho_end, omega_e2);

  PathSpec ode_path = full;
  if (opt.transport_path) {
    const auto& tp = *opt.transport_path;
    tp.validate();
    if (std::abs(tp.front() - z1) > 1e-12 * (1.0 + std::abs(z1)) ||
        std::abs(tp.back() - z2) > 1e-12 * (1.0 + std::abs(z2)))
      throw Error(Errc::InvalidInput, "transport path must share endpoints with the branch path");
    std::vector<cplx> loop = path.polyline();
    const auto back = tp.reversed().polyline();
    loop.insert(loop.end(), back.begin() + 1, back.end());
    for (int w : pole_windings(loop, sheet.zeros_poles()))
      if (w != 0) throw Error(Errc::HomotopyAmbiguous, "transport path is not homotopic to the branch path");
    std::vector<cplx> tpts;
    if (e1 != z1) tpts.push_back(e1);
    for (const auto& p : tp.polyline()) tpts.push_back(p);
    if (e2 != z2) tpts.push_back(e2);
    ode_path = PathSpec(tpts, false, tp.clearance);
  }

  const auto sol = transport(R, ode_path, {OdeState{b1.y_plus, b1.y_plus_deriv}, OdeState{b1.y_minus, b1.y_minus_deriv}},
                             opt, &out.steps);
  CMatrix m(2, 2);
  for (int j = 0; j < 2; ++j) {
    const auto c = decompose(b2, sol[j]);
    m(0, j) = c[0];
    m(1, j) = c[1];
  }
  if (!m.allFinite())
    throw Error(Errc::NonFinite, "basis values overflow at the matching points; endpoints are far off the anti-Stokes lines");
  out.matrix = ConnectionMatrix(m);
  return out;
}

StokesExtraction extract_stokes_constant(const ConnectionMatrix& F, StokesForm form, double budget) {
  if (F.dim() != 2) throw Error(Errc::DimensionMismatch, "Stokes extraction needs a 2x2 matrix");
  const cplx off = form == StokesForm::S ? F(1, 0) : F(0, 1);
  const cplx zero_entry = form == StokesForm::S ? F(0, 1) : F(1, 0);
  const double residual =
      std::max({std::abs(F(0, 0) - 1.0), std::abs(F(1, 1) - 1.0), std::abs(zero_entry)});
  if (residual > budget)
    throw Error(Errc::WrongForm, "matrix deviates from the " + std::string(form == StokesForm::S ? "S" : "S^T") +
                                     " pattern by " + std::to_string(residual));
  return {off / std::sqrt(F(0, 0) * F(1, 1)), residual};
}

PathSpec contracted_loop(cplx start, double inner, int turns, int n) {
  const double r0 = std::abs(start);
  if (inner <= 0.0 || inner >= r0) throw Error(Errc::InvalidInput, "inner radius must lie inside the start point");
  const double a0 = std::arg(start);
  std::vector<cplx> pts{start};
  const auto arc = arc_points(0.0, inner, a0, a0 + 2.0 * kPi * turns, n * std::max(1, std::abs(turns)));
  pts.insert(pts.end(), arc.begin(), arc.end());
  pts.push_back(start);
  return PathSpec(pts);
}

MonodromyResult monodromy(const BranchSheet& sheet, const PathSpec& loop, const OracleOptions& opt) {
  if (!loop.closed) throw Error(Errc::InvalidInput, "monodromy needs a closed loop");
  OracleOptions o = opt;
  o.omega_start = 0.0;
  const auto res = exact_fmatrix(sheet, loop, loop.front(), o);
  const cplx big_omega = res.omega_end - res.omega_start;
  MonodromyResult out;
  out.continued = res.matrix;
  out.loop_phase = big_omega;
  out.matrix = make_generator(reconnect(big_omega), 2) * res.matrix;
  return out;
}

}  // namespace phaseint
