#pragma once

// Complex-plane substrate: polynomials, rational integrands, piecewise-linear
// paths, root finding and adaptive contour quadrature.

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace phaseint {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Complex polynomial with coefficients in ascending degree. Trailing zero
/// coefficients are trimmed on construction, so `coeffs().back()` is the
/// leading coefficient unless the polynomial is identically zero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  cplx leading() const;
  double max_abs_coeff() const;

  cplx operator()(cplx z) const;
  Polynomial derivative() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<cplx> coeffs_;
};

Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(cplx s, const Polynomial& p);

/// Squared phase integrand R(z) = numerator(z) / denominator(z), with the
/// named parameter values it was built from.
class RationalIntegrand {
 public:
  RationalIntegrand() = default;
  RationalIntegrand(Polynomial num, Polynomial den, std::map<std::string, cplx> params = {});

  /// Polynomial integrand (denominator 1).
  static RationalIntegrand polynomial(std::vector<cplx> coeffs,
                                      std::map<std::string, cplx> params = {});

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  const std::map<std::string, cplx>& params() const { return params_; }

  /// n in R ~ z^n as z -> infinity.
  int growth_degree() const { return num_.degree() - den_.degree(); }
  /// Leading coefficient c in R ~ c z^n.
  cplx growth_coefficient() const { return num_.leading() / den_.leading(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  /// Unchecked evaluation (hot path).
  cplx value(cplx z) const { return num_(z) / den_(z); }
  /// R, R' and R'' at z.
  void derivatives(cplx z, cplx& r, cplx& r1, cplx& r2) const;

  /// Integrand with every coefficient conjugated: R*(z) = conj(R(conj z)).
  RationalIntegrand conjugated() const;

  friend bool operator==(const RationalIntegrand&, const RationalIntegrand&) = default;

 private:
  Polynomial num_{std::vector<cplx>{1.0}};
  Polynomial den_{std::vector<cplx>{1.0}};
  Polynomial num1_, num2_, den1_, den2_;
  std::map<std::string, cplx> params_;
};

/// Checked evaluation; throws PoleHit when z sits on a denominator root.
cplx evaluate(const RationalIntegrand& R, cplx z);

struct Root {
  cplx value;
  int order = 1;
};

struct ZerosPoles {
  std::vector<Root> zeros;
  std::vector<Root> poles;

  /// All zeros and poles as plain points.
  std::vector<cplx> points() const;
};

/// Roots of a polynomial with multiplicities (companion-matrix eigenvalues,
/// clustered, then Newton-polished on the (m-1)-th derivative).
std::vector<Root> polynomial_roots(const Polynomial& p);

/// Zeros and poles of R after cancelling common roots closer than
/// `coincidence_tol`.
ZerosPoles find_zeros_poles(const RationalIntegrand& R, double coincidence_tol = 1e-9);

/// Oriented piecewise-linear path. A closed path implicitly returns from the
/// last waypoint to the first.
struct PathSpec {
  std::vector<cplx> waypoints;
  bool closed = false;
  double clearance = 0.0;

  PathSpec() = default;
  PathSpec(std::vector<cplx> pts, bool is_closed = false, double clear = 0.0)
      : waypoints(std::move(pts)), closed(is_closed), clearance(clear) {}

  /// Throws InvalidInput when the waypoint invariants are broken.
  void validate() const;
  /// Throws PathClash when a segment comes closer than `clearance` to a point.
  void check_clearance(std::span<const cplx> singular_points) const;

  std::size_t segment_count() const;
  std::pair<cplx, cplx> segment(std::size_t i) const;
  cplx front() const { return waypoints.front(); }
  cplx back() const { return closed ? waypoints.front() : waypoints.back(); }
  double length() const;

  PathSpec reversed() const;
  /// Open copy with every segment split into pieces no longer than max_len.
  PathSpec densified(double max_len) const;
  /// Open polyline (closing segment made explicit).
  std::vector<cplx> polyline() const;

  friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

/// Concatenation; `b` must start where `a` ends.
PathSpec concat(const PathSpec& a, const PathSpec& b);
PathSpec straight(cplx a, cplx b);
/// Counterclockwise circle of `n` waypoints starting at center + radius.
PathSpec circle(cplx center, double radius, int n, double start_angle = 0.0);
/// Polyline arc from angle a0 to a1 (either direction) at fixed radius.
std::vector<cplx> arc_points(cplx center, double radius, double a0, double a1, int n);
/// Winding number of the closed polyline around p.
int winding_number(std::span<const cplx> closed_polyline, cplx p);
double distance_to_segment(cplx p, cplx a, cplx b);

struct QuadratureResult {
  cplx value;
  double err_estimate = 0.0;
  int evaluations = 0;
};

/// One straight piece of an integration contour with its own integrand.
struct ContourPiece {
  cplx a, b;
  std::function<cplx(cplx)> f;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over a list of pieces.
QuadratureResult integrate_pieces(std::span<const ContourPiece> pieces, double tol,
                                  int max_intervals = 20000);

QuadratureResult contour_integrate(const std::function<cplx(cplx)>& f, const PathSpec& path,
                                   double tol = 1e-10);

}  // namespace phaseint
