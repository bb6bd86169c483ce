#pragma once

// Weber equation y'' + (z^2 - delta^2) y = 0: closed-form effective Stokes
// constants, scattering coefficients and oracle cross-checks.

#include <algorithm>
#include <optional>
#include <string>

#include "phaseint/oracle.hpp"

namespace phaseint {

/// Gamma function; relative error below 1e-13 for |z| <= 20.
/// Throws PoleOfGamma at non-positive integers.
cplx gamma_complex(cplx z);

/// omega = -i pi delta^2 / 2, the phase integral above the cut from delta
/// to -delta.
cplx weber_omega(cplx delta);

/// i (i d^2)^{i d^2/2} sqrt(2 pi) (2e)^{-i d^2/2} / Gamma(1/2 + i d^2/2).
/// The power uses the principal logarithm of i d^2 plus 2 pi i * sheet.
/// Without a sheet, i d^2 on the negative real axis throws BranchSeam.
cplx s_three_halves(cplx delta, std::optional<int> sheet = std::nullopt);

/// Same constant for delta = r e^{i theta}, with log(i d^2) continued as
/// 2 ln r + i (pi/2 + 2 theta); no seam.
cplx s_three_halves_polar(double r, double theta);

/// p(x) = sqrt(2 pi) (2e)^{-x/2} / Gamma(1/2 + x/2).
cplx p_function(cplx x);

struct ScatteringResult {
  cplx R_coeff, T_coeff, s_value;
  double flux_residual;  // | |R|^2 + |T|^2 - 1 |
};

/// R = 1/s, T = i e^{-i omega}/s with s = s_{3/2}(delta).
ScatteringResult scattering(cplx delta);

enum class WeberDomain { P1_2, P3_2, M1_2, M3_2 };

std::string to_string(WeberDomain d);

struct DomainInfo {
  double from_angle, to_angle;  // bounding anti-Stokes rays, counterclockwise
  StokesForm form;
  int basepoint_sign;  // basepoint = sign * delta
};

DomainInfo domain_info(WeberDomain d);

struct WeberConstants {
  cplx s1_2, s3_2, sm1_2, sm3_2;
};

/// All four constants from the closed form, using s_{1/2}(d) = s_{3/2}(-i d)
/// and the pairings s_{-1/2} = s_{3/2}, s_{-3/2} = s_{1/2}.
WeberConstants closed_form_constants(cplx delta);

struct WebtradResiduals {
  double r1;  // |s_{1/2} - s_{-3/2}|
  double r2;  // |s_{3/2} - s_{-1/2}|
  double r3;  // |s_{1/2} s_{3/2} + e^{-2i omega} + 1|
  double max() const { return std::max({r1, r2, r3}); }
};

WebtradResiduals verify_webtrad(cplx delta, const WeberConstants& s);

/// Path from radius r on the `from` ray in through an arc of radius
/// max(2|delta|, 1) to radius r on the `to` ray.
PathSpec weber_crossing_path(cplx delta, WeberDomain d, double r = 8.0);

struct OracleConstant {
  cplx s;
  double residual;
  ExactFResult fmatrix;
};

/// Effective Stokes constant of a domain from the exact F-matrix across it.
OracleConstant oracle_constant(cplx delta, WeberDomain d, const OracleOptions& opt = {}, double r = 8.0);

RationalIntegrand weber_integrand(cplx delta);

}  // namespace phaseint
