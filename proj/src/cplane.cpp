#include "phaseint/cplane.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "phaseint/error.hpp"

namespace phaseint {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == cplx{0.0, 0.0}) coeffs_.pop_back();
}

cplx Polynomial::leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  std::vector<cplx> c(a.coeffs().size() + b.coeffs().size() - 1);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] += a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] += b.coeffs()[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(cplx s, const Polynomial& p) {
  std::vector<cplx> c = p.coeffs();
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// RationalIntegrand

RationalIntegrand::RationalIntegrand(Polynomial num, Polynomial den,
                                     std::map<std::string, cplx> params)
    : num_(std::move(num)), den_(std::move(den)), params_(std::move(params)) {
  if (den_.is_zero()) throw Error(Errc::InvalidInput, "denominator is identically zero");
  num1_ = num_.derivative();
  num2_ = num1_.derivative();
  den1_ = den_.derivative();
  den2_ = den1_.derivative();
}

RationalIntegrand RationalIntegrand::polynomial(std::vector<cplx> coeffs,
                                                std::map<std::string, cplx> params) {
  return RationalIntegrand(Polynomial(std::move(coeffs)), Polynomial({1.0}), std::move(params));
}

void RationalIntegrand::derivatives(cplx z, cplx& r, cplx& r1, cplx& r2) const {
  const cplx n = num_(z), n1 = num1_(z), n2 = num2_(z);
  const cplx d = den_(z), d1 = den1_(z), d2 = den2_(z);
  r = n / d;
  r1 = (n1 - r * d1) / d;
  r2 = (n2 - 2.0 * r1 * d1 - r * d2) / d;
}

RationalIntegrand RationalIntegrand::conjugated() const {
  auto conj_poly = [](const Polynomial& p) {
    std::vector<cplx> c = p.coeffs();
    for (auto& x : c) x = std::conj(x);
    return Polynomial(std::move(c));
  };
  std::map<std::string, cplx> params;
  for (const auto& [k, v] : params_) params[k] = std::conj(v);
  return RationalIntegrand(conj_poly(num_), conj_poly(den_), std::move(params));
}

cplx evaluate(const RationalIntegrand& R, cplx z) {
  const auto& den = R.denominator();
  const cplx d = den(z);
  double scale = 0.0;
  double zp = 1.0;
  for (const auto& c : den.coeffs()) {
    scale += std::abs(c) * zp;
    zp *= std::abs(z);
  }
  if (std::abs(d) <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
    throw Error(Errc::PoleHit, "integrand evaluated at a pole");
  return R.numerator()(z) / d;
}

// ---------------------------------------------------------------------------
// Roots

namespace {

std::vector<cplx> companion_eigenvalues(const Polynomial& p) {
  const int n = p.degree();
  const auto& c = p.coeffs();
  if (n == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) M(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

Polynomial nth_derivative(const Polynomial& p, int k) {
  Polynomial d = p;
  for (int i = 0; i < k; ++i) d = d.derivative();
  return d;
}

// Newton on a simple root of q, starting from z.
cplx newton_polish(const Polynomial& q, cplx z, int iters = 8) {
  const Polynomial dq = q.derivative();
  for (int i = 0; i < iters; ++i) {
    const cplx f = q(z), df = dq(z);
    if (df == cplx{}) break;
    const cplx step = f / df;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    z -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z))) break;
  }
  return z;
}

// |p(z)| relative to the natural rounding scale sum |c_k| |z|^k.
double relative_residual(const Polynomial& p, cplx z) {
  double scale = 0.0, zp = 1.0;
  for (const auto& c : p.coeffs()) {
    scale += std::abs(c) * zp;
    zp *= std::abs(z);
  }
  return scale == 0.0 ? 0.0 : std::abs(p(z)) / scale;
}

bool cluster_consistent(const Polynomial& p, cplx z, int m) {
  for (int k = 0; k < m; ++k) {
    const Polynomial d = nth_derivative(p, k);
    if (relative_residual(d, z) > 1e-9) return false;
  }
  return true;
}

std::vector<std::vector<cplx>> cluster(const std::vector<cplx>& pts, double radius) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) < radius * (1.0 + std::abs(pts[i]))) parent[find(j)] = find(i);
  std::map<std::size_t, std::vector<cplx>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(pts[i]);
  std::vector<std::vector<cplx>> out;
  for (auto& [key, members] : groups) out.push_back(std::move(members));
  return out;
}

constexpr double kClusterRadii[] = {1e-2, 1e-3, 1e-4};

void split_clusters(const Polynomial& p, const std::vector<cplx>& pts, std::size_t level,
                    std::vector<Root>& roots) {
  for (const auto& members : cluster(pts, kClusterRadii[level])) {
    const int m = static_cast<int>(members.size());
    cplx center{};
    for (const auto& z : members) center += z;
    center /= static_cast<double>(m);
    const cplx refined = newton_polish(nth_derivative(p, m - 1), center);
    if (m == 1 || cluster_consistent(p, refined, m)) {
      roots.push_back({refined, m});
    } else if (level + 1 < std::size(kClusterRadii)) {
      split_clusters(p, members, level + 1, roots);
    } else {
      for (const auto& z : members) roots.push_back({newton_polish(p, z), 1});
    }
  }
}

}  // namespace

std::vector<Root> polynomial_roots(const Polynomial& p) {
  if (p.degree() <= 0) return {};
  std::vector<cplx> eig = companion_eigenvalues(p);
  std::sort(eig.begin(), eig.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // Eigenvalues of an m-fold root scatter by ~eps^{1/m}; cluster coarsely
  // first and fall back to finer radii when a cluster is inconsistent.
  std::vector<Root> roots;
  split_clusters(p, eig, 0, roots);
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    return a.value.real() != b.value.real() ? a.value.real() < b.value.real()
                                            : a.value.imag() < b.value.imag();
  });
  return roots;
}

std::vector<cplx> ZerosPoles::points() const {
  std::vector<cplx> out;
  for (const auto& r : zeros) out.push_back(r.value);
  for (const auto& r : poles) out.push_back(r.value);
  return out;
}

ZerosPoles find_zeros_poles(const RationalIntegrand& R, double coincidence_tol) {
  if (R.numerator().is_zero()) throw Error(Errc::DegenerateInput, "numerator is identically zero");
  ZerosPoles zp{polynomial_roots(R.numerator()), polynomial_roots(R.denominator())};
  for (auto& z : zp.zeros) {
    for (auto& p : zp.poles) {
      if (z.order == 0 || p.order == 0) continue;
      if (std::abs(z.value - p.value) < coincidence_tol * (1.0 + std::abs(z.value))) {
        const int common = std::min(z.order, p.order);
        z.order -= common;
        p.order -= common;
      }
    }
  }
  std::erase_if(zp.zeros, [](const Root& r) { return r.order == 0; });
  std::erase_if(zp.poles, [](const Root& r) { return r.order == 0; });
  return zp;
}

// ---------------------------------------------------------------------------
// Paths

void PathSpec::validate() const {
  if (closed && waypoints.size() < 3)
    throw Error(Errc::InvalidInput, "closed path needs at least 3 waypoints");
  if (waypoints.size() < 2) throw Error(Errc::InvalidInput, "path needs at least 2 waypoints");
  if (clearance < 0.0) throw Error(Errc::InvalidInput, "negative clearance");
  for (std::size_t i = 0; i < segment_count(); ++i) {
    auto [a, b] = segment(i);
    if (a == b) throw Error(Errc::InvalidInput, "consecutive waypoints coincide");
    if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b)))
      throw Error(Errc::InvalidInput, "non-finite waypoint");
  }
}

void PathSpec::check_clearance(std::span<const cplx> singular_points) const {
  for (std::size_t i = 0; i < segment_count(); ++i) {
    auto [a, b] = segment(i);
    for (const auto& s : singular_points) {
      if (distance_to_segment(s, a, b) < clearance)
        throw Error(Errc::PathClash, "path segment " + std::to_string(i) +
                                         " violates clearance to a singular point");
    }
  }
}

std::size_t PathSpec::segment_count() const {
  if (waypoints.size() < 2) return 0;
  return closed ? waypoints.size() : waypoints.size() - 1;
}

std::pair<cplx, cplx> PathSpec::segment(std::size_t i) const {
  const std::size_t j = (i + 1) % waypoints.size();
  return {waypoints[i], waypoints[j]};
}

double PathSpec::length() const {
  double L = 0.0;
  for (std::size_t i = 0; i < segment_count(); ++i) {
    auto [a, b] = segment(i);
    L += std::abs(b - a);
  }
  return L;
}

PathSpec PathSpec::reversed() const {
  std::vector<cplx> pts = polyline();
  std::reverse(pts.begin(), pts.end());
  if (closed) pts.pop_back();
  return PathSpec(std::move(pts), closed, clearance);
}

std::vector<cplx> PathSpec::polyline() const {
  std::vector<cplx> pts = waypoints;
  if (closed && !pts.empty()) pts.push_back(pts.front());
  return pts;
}

PathSpec PathSpec::densified(double max_len) const {
  std::vector<cplx> out{front()};
  for (std::size_t i = 0; i < segment_count(); ++i) {
    auto [a, b] = segment(i);
    const int k = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / max_len)));
    for (int j = 1; j <= k; ++j) out.push_back(a + (b - a) * (static_cast<double>(j) / k));
  }
  return PathSpec(std::move(out), false, clearance);
}

PathSpec concat(const PathSpec& a, const PathSpec& b) {
  std::vector<cplx> pts = a.polyline();
  const std::vector<cplx> tail = b.polyline();
  if (std::abs(pts.back() - tail.front()) > 1e-12 * (1.0 + std::abs(tail.front())))
    throw Error(Errc::InvalidInput, "concatenated paths do not meet");
  pts.insert(pts.end(), tail.begin() + 1, tail.end());
  return PathSpec(std::move(pts), false, std::max(a.clearance, b.clearance));
}

PathSpec straight(cplx a, cplx b) { return PathSpec({a, b}); }

std::vector<cplx> arc_points(cplx center, double radius, double a0, double a1, int n) {
  std::vector<cplx> pts;
  for (int k = 0; k <= n; ++k) {
    const double t = a0 + (a1 - a0) * static_cast<double>(k) / n;
    pts.push_back(center + std::polar(radius, t));
  }
  return pts;
}

PathSpec circle(cplx center, double radius, int n, double start_angle) {
  std::vector<cplx> pts;
  for (int k = 0; k < n; ++k) pts.push_back(center + std::polar(radius, start_angle + 2.0 * kPi * k / n));
  return PathSpec(std::move(pts), true);
}

int winding_number(std::span<const cplx> poly, cplx p) {
  double total = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = poly[i] - p, b = poly[(i + 1) % n] - p;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

double distance_to_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  std::size_t piece;
  double t0, t1;
  cplx value;
  double err;
};

struct ByErr {
  bool operator()(const Interval& a, const Interval& b) const { return a.err < b.err; }
};

Interval gk15(const ContourPiece& pc, std::size_t idx, double t0, double t1, int& evals) {
  const cplx dz = pc.b - pc.a;
  const double half = 0.5 * (t1 - t0);
  const double mid = 0.5 * (t0 + t1);
  auto f = [&](double t) {
    const cplx v = pc.f(pc.a + t * dz);
    ++evals;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(Errc::NonFinite, "integrand is not finite on the path");
    return v;
  };
  const cplx fc = f(mid);
  cplx kron = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = half * kXgk[j];
    const cplx f1 = f(mid - x), f2 = f(mid + x);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const cplx scale = dz * half;
  return {idx, t0, t1, kron * scale, std::abs((kron - gauss) * scale)};
}

}  // namespace

QuadratureResult integrate_pieces(std::span<const ContourPiece> pieces, double tol,
                                  int max_intervals) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidInput, "quadrature tolerance must be positive");
  QuadratureResult res;
  std::priority_queue<Interval, std::vector<Interval>, ByErr> heap;
  std::vector<Interval> done;
  double err_total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].a == pieces[i].b) continue;
    Interval iv = gk15(pieces[i], i, 0.0, 1.0, res.evaluations);
    err_total += iv.err;
    heap.push(iv);
  }
  int count = static_cast<int>(heap.size());
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  while (!heap.empty() && err_total > tol) {
    Interval worst = heap.top();
    if (worst.err <= kRoundoff * std::abs(worst.value) || worst.t1 - worst.t0 < 1e-14) {
      // Cannot usefully refine further; keep it.
      heap.pop();
      done.push_back(worst);
      err_total -= worst.err;
      res.err_estimate += worst.err;
      continue;
    }
    if (count >= max_intervals)
      throw Error(Errc::MaxRefinement, "quadrature tolerance not reached within budget");
    heap.pop();
    const double mid = 0.5 * (worst.t0 + worst.t1);
    Interval left = gk15(pieces[worst.piece], worst.piece, worst.t0, mid, res.evaluations);
    Interval right = gk15(pieces[worst.piece], worst.piece, mid, worst.t1, res.evaluations);
    err_total += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Deterministic summation order: by piece, then by parameter.
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(), [](const Interval& a, const Interval& b) {
    return a.piece != b.piece ? a.piece < b.piece : a.t0 < b.t0;
  });
  res.err_estimate = 0.0;
  for (const auto& iv : done) {
    res.value += iv.value;
    res.err_estimate += iv.err;
  }
  if (res.err_estimate > tol && res.err_estimate > kRoundoff * (1.0 + std::abs(res.value)) * 10.0)
    throw Error(Errc::MaxRefinement, "quadrature tolerance unreachable");
  return res;
}

QuadratureResult contour_integrate(const std::function<cplx(cplx)>& f, const PathSpec& path,
                                   double tol) {
  path.validate();
  std::vector<ContourPiece> pieces;
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    auto [a, b] = path.segment(i);
    pieces.push_back({a, b, f});
  }
  return integrate_pieces(pieces, tol);
}

}  // namespace phaseint
