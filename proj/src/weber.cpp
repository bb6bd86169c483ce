#include "phaseint/weber.hpp"

#include <array>
#include <cmath>

#include "phaseint/error.hpp"

namespace phaseint {

namespace {

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                                         771.32342877765313,      -176.61502916214059,   12.507343278686905,
                                         -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// sin(pi z) with the real part reduced exactly.
cplx sin_pi(cplx z) {
  const double x = std::fmod(z.real(), 2.0);
  const double y = z.imag();
  return {std::sin(kPi * x) * std::cosh(kPi * y), std::cos(kPi * x) * std::sinh(kPi * y)};
}

cplx gamma_right(cplx z) {
  const cplx zm = z - 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (zm + static_cast<double>(i));
  const cplx t = zm + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::exp((zm + 0.5) * std::log(t) - t) * x;
}

const double kLog2e = 1.0 + std::log(2.0);

}  // namespace

cplx gamma_complex(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real()))
    throw Error(Errc::PoleOfGamma, "Gamma has a pole at " + std::to_string(z.real()));
  if (z.real() < 0.5) return kPi / (sin_pi(z) * gamma_right(1.0 - z));
  return gamma_right(z);
}

cplx weber_omega(cplx delta) { return cplx(0.0, -kPi / 2.0) * delta * delta; }

cplx p_function(cplx x) {
  return std::sqrt(2.0 * kPi) * std::exp(-0.5 * x * kLog2e) / gamma_complex(0.5 + 0.5 * x);
}

namespace {

cplx s_from_log(cplx x, cplx log_x) {
  const cplx power = x == cplx{} ? cplx(1.0) : std::exp(0.5 * x * log_x);
  return kI * power * p_function(x);
}

}  // namespace

cplx s_three_halves(cplx delta, std::optional<int> sheet) {
  const cplx x = kI * delta * delta;
  if (x == cplx{}) return s_from_log(x, 0.0);
  if (!sheet && x.real() < 0.0 && std::abs(x.imag()) <= 1e-15 * std::abs(x))
    throw Error(Errc::BranchSeam, "i delta^2 lies on the branch seam; pass a sheet index");
  return s_from_log(x, std::log(x) + 2.0 * kPi * kI * static_cast<double>(sheet.value_or(0)));
}

cplx s_three_halves_polar(double r, double theta) {
  if (r == 0.0) return s_from_log(0.0, 0.0);
  const double phi = 0.5 * kPi + 2.0 * theta;
  const cplx x = std::polar(r * r, phi);
  return s_from_log(x, cplx(2.0 * std::log(r), phi));
}

ScatteringResult scattering(cplx delta) {
  ScatteringResult out;
  out.s_value = s_three_halves(delta);
  out.R_coeff = 1.0 / out.s_value;
  out.T_coeff = kI * std::exp(-kI * weber_omega(delta)) / out.s_value;
  out.flux_residual = std::abs(std::norm(out.R_coeff) + std::norm(out.T_coeff) - 1.0);
  return out;
}

std::string to_string(WeberDomain d) {
  switch (d) {
    case WeberDomain::P1_2: return "s_1/2";
    case WeberDomain::P3_2: return "s_3/2";
    case WeberDomain::M1_2: return "s_-1/2";
    case WeberDomain::M3_2: return "s_-3/2";
  }
  return "?";
}

DomainInfo domain_info(WeberDomain d) {
  switch (d) {
    case WeberDomain::P1_2: return {0.0, 0.5 * kPi, StokesForm::ST, 1};
    case WeberDomain::P3_2: return {0.5 * kPi, kPi, StokesForm::S, -1};
    case WeberDomain::M1_2: return {-0.5 * kPi, 0.0, StokesForm::S, 1};
    case WeberDomain::M3_2: return {kPi, 1.5 * kPi, StokesForm::ST, -1};
  }
  throw Error(Errc::InvalidInput, "unknown domain");
}

WeberConstants closed_form_constants(cplx delta) {
  const double r = std::abs(delta), theta = std::arg(delta);
  WeberConstants c;
  c.s3_2 = s_three_halves_polar(r, theta);
  c.sm1_2 = c.s3_2;
  c.s1_2 = s_three_halves_polar(r, theta - 0.5 * kPi);
  c.sm3_2 = c.s1_2;
  return c;
}

WebtradResiduals verify_webtrad(cplx delta, const WeberConstants& s) {
  const cplx e = std::exp(-2.0 * kI * weber_omega(delta));
  return {std::abs(s.s1_2 - s.sm3_2), std::abs(s.s3_2 - s.sm1_2), std::abs(s.s1_2 * s.s3_2 + e + 1.0)};
}

RationalIntegrand weber_integrand(cplx delta) {
  return RationalIntegrand::polynomial({-delta * delta, 0.0, 1.0}, {{"delta", delta}});
}

PathSpec weber_crossing_path(cplx delta, WeberDomain d, double r) {
  const auto info = domain_info(d);
  const double rho = std::max(2.0 * std::abs(delta), 1.0);
  if (r <= rho) throw Error(Errc::InvalidInput, "crossing radius must exceed the interior arc");
  std::vector<cplx> pts{std::polar(r, info.from_angle)};
  const auto arc = arc_points(0.0, rho, info.from_angle, info.to_angle, 32);
  pts.insert(pts.end(), arc.begin(), arc.end());
  pts.push_back(std::polar(r, info.to_angle));
  return PathSpec(pts);
}

OracleConstant oracle_constant(cplx delta, WeberDomain d, const OracleOptions& opt, double r) {
  const auto info = domain_info(d);
  const auto R = weber_integrand(delta);
  const auto path = weber_crossing_path(delta, d, r);
  const auto sheet = BranchSheet::asymptotic(R, path.front());
  OracleConstant out;
  out.fmatrix = exact_fmatrix(sheet, path, static_cast<double>(info.basepoint_sign) * delta, opt);
  const auto ex = extract_stokes_constant(out.fmatrix.matrix, info.form);
  out.s = ex.s;
  out.residual = ex.residual;
  return out;
}

}  // namespace phaseint
