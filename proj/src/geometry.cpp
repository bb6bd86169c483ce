#include "phaseint/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"
#include "phaseint/error.hpp"

namespace phaseint {

std::string to_string(LineKind k) { return k == LineKind::Stokes ? "stokes" : "antistokes"; }

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * kPi);
  return t < 0.0 ? t + 2.0 * kPi : t;
}

cplx poly_derivative_at(const Polynomial& p, cplx z, int k) {
  Polynomial d = p;
  double fact = 1.0;
  for (int i = 1; i <= k; ++i) {
    d = d.derivative();
    fact *= i;
  }
  return d(z) / fact;
}

double max_modulus(const std::vector<cplx>& pts) {
  double m = 0.0;
  for (const cplx p : pts) m = std::max(m, std::abs(p));
  return m;
}

cplx centroid(const std::vector<cplx>& pts) {
  cplx c{};
  for (const cplx p : pts) c += p;
  return pts.empty() ? c : c / static_cast<double>(pts.size());
}

struct Launch {
  cplx origin;
  int order;
  double angle;
};

class Tracer {
 public:
  Tracer(const RationalIntegrand& R, LineKind kind, std::vector<cplx> sing, double radius, double step, double clear)
      : R_(R), kind_(kind), sing_(std::move(sing)), radius_(radius), step_(step), clear_(clear) {}

  TracedLine run(const Launch& l, int max_steps) const {
    TracedLine out;
    out.kind = kind_;
    out.origin = l.origin;
    out.origin_order = l.order;
    out.launch_angle = l.angle;
    out.points = {l.origin};
    double d_other = std::numeric_limits<double>::infinity();
    for (const cplx p : sing_)
      if (p != l.origin) d_other = std::min(d_other, std::abs(p - l.origin));
    const double h0 = std::min(0.1 * step_, 0.1 * d_other);
    cplx u = std::polar(1.0, l.angle);
    cplx z = l.origin + h0 * u;
    out.points.push_back(z);
    out.length = h0;
    cplx q = std::sqrt(R_.value(z));
    cplx acc{};
    const double scale = step_ / 0.01;
    for (int n = 0; n < max_steps; ++n) {
      double d_all = std::numeric_limits<double>::infinity();
      for (const cplx p : sing_) {
        const double d = std::abs(z - p);
        d_all = std::min(d_all, d);
        if (p != l.origin && d < clear_) {
          out.points.push_back(p);
          out.ends_at = p;
          return out;
        }
      }
      if (std::abs(z) >= radius_) {
        out.reached_radius = true;
        return out;
      }
      const double h = std::min(step_, 0.5 * d_all);
      if (h < 1e-14 * scale) throw Error(Errc::TraceStall, "trace step collapsed away from a singularity");
      const cplx k1 = dir(z, u);
      const cplx k2 = dir(z + 0.5 * h * k1, k1);
      const cplx k3 = dir(z + 0.5 * h * k2, k2);
      const cplx k4 = dir(z + h * k3, k3);
      cplx zn = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (std::abs(zn) > radius_) zn = clip(z, zn);
      const cplx qm = q_near(R_, 0.5 * (z + zn), q);
      const cplx qn = q_near(R_, zn, qm);
      acc += (zn - z) / 6.0 * (q + 4.0 * qm + qn);
      out.residual = std::max(out.residual, std::abs(kind_ == LineKind::Stokes ? acc.real() : acc.imag()));
      out.length += std::abs(zn - z);
      u = (zn - z) / std::abs(zn - z);
      z = zn;
      q = qn;
      out.points.push_back(z);
    }
    throw Error(Errc::TraceStall, "trace exceeded the step budget");
  }

 private:
  cplx dir(cplx z, cplx ref) const {
    const cplx r = R_.value(z);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) || r == cplx{})
      throw Error(Errc::TraceStall, "direction field undefined off a singularity");
    const cplx q = std::sqrt(r);
    cplx v = std::conj(q) / std::abs(q);
    if (kind_ == LineKind::Stokes) v *= kI;
    return (v * std::conj(ref)).real() < 0.0 ? -v : v;
  }

  // Point where the segment a -> b meets |z| = radius.
  cplx clip(cplx a, cplx b) const {
    const cplx d = b - a;
    const double A = std::norm(d), B = 2.0 * (std::conj(a) * d).real(), C = std::norm(a) - radius_ * radius_;
    const double t = (-B + std::sqrt(std::max(0.0, B * B - 4.0 * A * C))) / (2.0 * A);
    return a + std::clamp(t, 0.0, 1.0) * d;
  }

  const RationalIntegrand& R_;
  LineKind kind_;
  std::vector<cplx> sing_;
  double radius_, step_, clear_;
};

}  // namespace

cplx local_coefficient(const RationalIntegrand& R, cplx z0, int order) {
  if (order > 0) return poly_derivative_at(R.numerator(), z0, order) / R.denominator()(z0);
  if (order < 0) return R.numerator()(z0) / poly_derivative_at(R.denominator(), z0, -order);
  return R.value(z0);
}

std::vector<double> launch_angles(cplx a, int m, LineKind kind) {
  const int k = m + 2;
  std::vector<double> out;
  if (k == 0) return out;
  const double target = kind == LineKind::Stokes ? 0.5 * kPi : 0.0;
  for (int j = 0; j < std::abs(k); ++j)
    out.push_back(wrap_angle(2.0 * (target - 0.5 * std::arg(a) + j * kPi) / k));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> asymptotic_angles(const RationalIntegrand& R, LineKind kind) {
  return launch_angles(R.growth_coefficient(), R.growth_degree(), kind);
}

double default_radius(const RationalIntegrand& R) {
  return std::max(5.0, 3.0 * max_modulus(find_zeros_poles(R).points()));
}

std::vector<TracedLine> trace_lines(const RationalIntegrand& R, LineKind kind, const TraceOptions& opt) {
  const auto zp = find_zeros_poles(R);
  const auto sing = zp.points();
  const double scale = std::max(1.0, max_modulus(sing));
  const double radius = opt.radius > 0.0 ? opt.radius : default_radius(R);
  if (radius <= max_modulus(sing)) throw Error(Errc::InvalidInput, "truncation radius must enclose the singularities");
  const double step = opt.step > 0.0 ? opt.step : 0.01 * scale;

  std::vector<Launch> jobs;
  for (const auto& z : zp.zeros)
    for (double t : launch_angles(local_coefficient(R, z.value, z.order), z.order, kind))
      jobs.push_back({z.value, z.order, t});
  for (const auto& p : zp.poles)
    for (double t : launch_angles(local_coefficient(R, p.value, -p.order), -p.order, kind))
      jobs.push_back({p.value, -p.order, t});

  const Tracer tracer(R, kind, sing, radius, step, opt.clearance * scale);
  std::vector<std::future<TracedLine>> futures;
  for (const auto& j : jobs)
    futures.push_back(std::async(std::launch::async, [&tracer, j, &opt] { return tracer.run(j, opt.max_steps); }));
  std::vector<TracedLine> out;
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

std::vector<Wedge> wedges(const RationalIntegrand& R) {
  const auto anti = asymptotic_angles(R, LineKind::AntiStokes);
  const auto st = asymptotic_angles(R, LineKind::Stokes);
  std::vector<Wedge> out;
  for (std::size_t i = 0; i < anti.size(); ++i) {
    const double from = anti[i];
    const double to = i + 1 < anti.size() ? anti[i + 1] : anti[0] + 2.0 * kPi;
    double dir = from;
    for (double s : st) {
      const double t = from + wrap_angle(s - from);
      if (t > from && t < to) dir = wrap_angle(t);
    }
    out.push_back({from, to, dir});
  }
  return out;
}

Dominance classify_dominance(const BranchSheet& sheet, const PhaseValue& omega) {
  const cplx q = omega.q_end;
  if (std::abs(q) < 1e-12) throw Error(Errc::AmbiguousDominance, "q vanishes at the probe");
  const cplx out = omega.endpoint - centroid(sheet.singular_points());
  if (std::abs(out) == 0.0) throw Error(Errc::AmbiguousDominance, "probe at the singularity centroid");
  cplx u = kI * std::conj(q) / std::abs(q);
  const double c = (u * std::conj(out)).real() / std::abs(out);
  if (std::abs(c) < 1e-3)
    throw Error(Errc::AmbiguousDominance, "local Stokes direction is tangential; probe lies on an anti-Stokes line");
  if (c < 0.0) u = -u;
  return (kI * q * u).real() > 0.0 ? Dominance::Plus : Dominance::Minus;
}

StokesDiagram build_diagram(const RationalIntegrand& R, const TraceOptions& opt,
                            std::optional<std::vector<std::vector<cplx>>> cuts) {
  StokesDiagram d;
  d.R = R;
  d.singularities = find_zeros_poles(R);
  d.radius = opt.radius > 0.0 ? opt.radius : default_radius(R);
  TraceOptions o = opt;
  o.radius = d.radius;
  d.stokes = trace_lines(R, LineKind::Stokes, o);
  d.antistokes = trace_lines(R, LineKind::AntiStokes, o);
  d.wedges = wedges(R);
  if (cuts) {
    d.cuts = std::move(*cuts);
  } else {
    const auto pts = d.singularities.points();
    const cplx c = centroid(pts);
    auto add = [&](cplx z) {
      const cplx dir = std::abs(z - c) > 1e-12 ? (z - c) / std::abs(z - c) : cplx(0.0, -1.0);
      d.cuts.push_back({z, z + dir * (d.radius - std::abs(z))});
    };
    for (const auto& z : d.singularities.zeros)
      if (z.order % 2) add(z.value);
    for (const auto& p : d.singularities.poles)
      if (p.order % 2) add(p.value);
  }
  return d;
}

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool near_any(cplx p, std::initializer_list<cplx> ends) {
  for (const cplx e : ends)
    if (std::abs(p - e) < 1e-9) return true;
  return false;
}

bool polylines_cross(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const cplx r = a[i + 1] - a[i], s = b[j + 1] - b[j];
      const double den = cross(r, s);
      if (std::abs(den) < 1e-300) continue;
      const double t = cross(b[j] - a[i], s) / den, u = cross(b[j] - a[i], r) / den;
      if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
      const cplx p = a[i] + t * r;
      if (near_any(p, {a.front(), a.back()}) && near_any(p, {b.front(), b.back()})) continue;
      return true;
    }
  return false;
}

}  // namespace

std::vector<std::pair<int, int>> EffectiveStokesDiagram::crossings() const {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(lines.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (polylines_cross(lines[i].points, lines[j].points)) out.emplace_back(i, j);
  if (continuation_path)
    for (int i = 0; i < n; ++i)
      if (polylines_cross(lines[i].points, continuation_path->polyline())) out.emplace_back(i, -1);
  return out;
}

EffectiveStokesDiagram make_effective_diagram(const StokesDiagram& base, const std::vector<std::string>& labels,
                                              const std::vector<cplx>& basepoints, std::optional<PathSpec> path) {
  EffectiveStokesDiagram e;
  e.base = base;
  e.continuation_path = std::move(path);
  const auto pts = base.singularities.points();
  for (std::size_t i = 0; i < base.wedges.size(); ++i) {
    const cplx far = std::polar(base.radius, base.wedges[i].direction);
    cplx bp{};
    if (i < basepoints.size()) {
      bp = basepoints[i];
    } else if (!pts.empty()) {
      bp = *std::min_element(pts.begin(), pts.end(),
                             [&](cplx a, cplx b) { return std::abs(a - far) < std::abs(b - far); });
    }
    std::string label;
    if (i < labels.size()) {
      label = labels[i];
    } else {
      std::ostringstream os;
      os << "s[" << std::lround(base.wedges[i].direction * 180.0 / kPi) << "]";
      label = os.str();
    }
    e.lines.push_back({label, bp, {bp, far}});
  }
  return e;
}

namespace {

using nlohmann::json;

json pt(cplx z) { return json::array({z.real(), z.imag()}); }

json polyline_json(const std::vector<cplx>& pts) {
  json a = json::array();
  for (const cplx z : pts) a.push_back(pt(z));
  return a;
}

json base_json(const StokesDiagram& d) {
  json j;
  j["singularities"] = json::array();
  for (const auto& z : d.singularities.zeros)
    j["singularities"].push_back({{"kind", "zero"}, {"z", pt(z.value)}, {"order", z.order}});
  for (const auto& p : d.singularities.poles)
    j["singularities"].push_back({{"kind", "pole"}, {"z", pt(p.value)}, {"order", p.order}});
  auto lines = [](const std::vector<TracedLine>& ls) {
    json a = json::array();
    for (const auto& l : ls) a.push_back(polyline_json(l.points));
    return a;
  };
  j["stokes"] = lines(d.stokes);
  j["antistokes"] = lines(d.antistokes);
  j["wedges"] = json::array();
  for (const auto& w : d.wedges) j["wedges"].push_back({{"from", w.from}, {"to", w.to}, {"direction", w.direction}});
  j["cuts"] = json::array();
  for (const auto& c : d.cuts) j["cuts"].push_back(polyline_json(c));
  j["radius"] = d.radius;
  return j;
}

class Svg {
 public:
  explicit Svg(double r) : r_(r) {
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << -1.05 * r << " " << -1.05 * r << " " << 2.1 * r
        << " " << 2.1 * r << "\">\n"
        << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
           "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n";
    w_ = 0.004 * r;
  }

  void polyline(const std::vector<cplx>& pts, const std::string& cls, const std::string& style) {
    os_ << "<polyline class=\"" << cls << "\" fill=\"none\" " << style << " points=\"";
    for (const cplx z : pts) os_ << z.real() << "," << -z.imag() << " ";
    os_ << "\"/>\n";
  }

  void dot(cplx z) {
    os_ << "<circle class=\"zero\" cx=\"" << z.real() << "\" cy=\"" << -z.imag() << "\" r=\"" << 3 * w_
        << "\" fill=\"black\"/>\n";
  }

  void star(cplx z) {
    os_ << "<polygon class=\"pole\" fill=\"black\" points=\"";
    for (int k = 0; k < 10; ++k) {
      const double rr = (k % 2 ? 2.0 : 5.0) * w_;
      const cplx p = z + std::polar(rr, kPi / 2 + k * kPi / 5);
      os_ << p.real() << "," << -p.imag() << " ";
    }
    os_ << "\"/>\n";
  }

  void text(cplx z, const std::string& s) {
    os_ << "<text x=\"" << z.real() << "\" y=\"" << -z.imag() << "\" font-size=\"" << 12 * w_ << "\">" << s
        << "</text>\n";
  }

  double w() const { return w_; }
  std::string str() { return os_.str() + "</svg>\n"; }

 private:
  double r_, w_;
  std::ostringstream os_;
};

std::string stroke(double w, const std::string& extra = {}) {
  std::ostringstream os;
  os << "stroke=\"black\" stroke-width=\"" << w << "\"" << (extra.empty() ? "" : " " + extra);
  return os.str();
}

void draw_base(Svg& svg, const StokesDiagram& d) {
  for (const auto& w : d.wedges)
    svg.polyline({0.0, std::polar(d.radius, w.direction)}, "wedge", stroke(0.5 * svg.w(), "stroke-opacity=\"0.3\""));
  for (const auto& c : d.cuts) svg.polyline(c, "cut", stroke(svg.w(), "stroke-dasharray=\"1,1\" stroke=\"gray\""));
  for (const auto& l : d.antistokes) svg.polyline(l.points, "antistokes", stroke(svg.w()));
  std::ostringstream dash;
  dash << "stroke-dasharray=\"" << 4 * svg.w() << "," << 3 * svg.w() << "\"";
  for (const auto& l : d.stokes) svg.polyline(l.points, "stokes", stroke(svg.w(), dash.str()));
  for (const auto& z : d.singularities.zeros) svg.dot(z.value);
  for (const auto& p : d.singularities.poles) svg.star(p.value);
}

}  // namespace

std::string diagram_json(const StokesDiagram& d) { return base_json(d).dump(2); }

std::string diagram_json(const EffectiveStokesDiagram& d) {
  json j = base_json(d.base);
  j["effective"] = json::array();
  for (const auto& l : d.lines)
    j["effective"].push_back({{"label", l.label}, {"basepoint", pt(l.basepoint)}, {"line", polyline_json(l.points)}});
  if (d.continuation_path) j["path"] = polyline_json(d.continuation_path->polyline());
  j["phases"] = json::object();
  for (const auto& [k, v] : d.phases) j["phases"][k] = pt(v);
  return j.dump(2);
}

std::string diagram_svg(const StokesDiagram& d) {
  Svg svg(d.radius);
  draw_base(svg, d);
  return svg.str();
}

std::string diagram_svg(const EffectiveStokesDiagram& d) {
  Svg svg(d.base.radius);
  draw_base(svg, d.base);
  for (const auto& l : d.lines) {
    svg.polyline(l.points, "effective", stroke(3.0 * svg.w()));
    svg.text(l.points.back() * 0.9, l.label);
  }
  if (d.continuation_path)
    svg.polyline(d.continuation_path->polyline(), "path", stroke(1.5 * svg.w(), "marker-end=\"url(#arrow)\""));
  double y = 0.95 * d.base.radius;
  for (const auto& [k, v] : d.phases) {
    std::ostringstream os;
    os << k << " = " << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i";
    svg.text(cplx(-0.95 * d.base.radius, y), os.str());
    y -= 0.08 * d.base.radius;
  }
  return svg.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(Errc::IOFailure, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(Errc::IOFailure, "write to " + path + " failed");
}

}  // namespace phaseint
