#include <algorithm>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "phaseint/error.hpp"
#include "phaseint/geometry.hpp"

using namespace phaseint;

namespace {

RationalIntegrand weber(double d) { return RationalIntegrand::polynomial({-d * d, 0.0, 1.0}); }
RationalIntegrand quartic(double E) { return RationalIntegrand::polynomial({-E, 0.0, 0.0, 0.0, 1.0}); }
RationalIntegrand fig1(double g) { return RationalIntegrand(Polynomial({g * g, 0.0, -1.0}), Polynomial({0.0, 1.0})); }

double angle_diff(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

std::vector<double> end_angles(const std::vector<TracedLine>& ls) {
  std::vector<double> out;
  for (const auto& l : ls)
    if (l.reached_radius) out.push_back(std::arg(l.points.back()));
  return out;
}

bool has_angle(const std::vector<double>& as, double t, double tol) {
  return std::any_of(as.begin(), as.end(), [&](double a) { return angle_diff(a, t) < tol; });
}

// Largest distance from a point of `a` to the polyline set `b`.
double directed_distance(const std::vector<TracedLine>& a, const std::vector<TracedLine>& b, cplx rot) {
  double worst = 0.0;
  for (const auto& la : a)
    for (std::size_t i = 0; i < la.points.size(); i += 7) {
      const cplx p = rot * la.points[i];
      double best = std::numeric_limits<double>::infinity();
      for (const auto& lb : b)
        for (std::size_t j = 0; j + 1 < lb.points.size(); ++j)
          best = std::min(best, distance_to_segment(p, lb.points[j], lb.points[j + 1]));
      worst = std::max(worst, best);
    }
  return worst;
}

PhaseValue probe_value(const BranchSheet& sheet) {
  PhaseValue v;
  v.omega = 0.0;
  v.basepoint = v.endpoint = sheet.anchor();
  v.q_end = sheet.anchor_value();
  v.rho_end = sheet.anchor_root();
  return v;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("launch angles from the local model") {
  const auto st = launch_angles(1.0, 1, LineKind::Stokes);
  REQUIRE(st.size() == 3);
  CHECK(st[0] == doctest::Approx(kPi / 3));
  CHECK(st[1] == doctest::Approx(kPi));
  CHECK(st[2] == doctest::Approx(5 * kPi / 3));
  const auto an = launch_angles(1.0, 1, LineKind::AntiStokes);
  CHECK(an[0] == doctest::Approx(0.0));
  CHECK(an[1] == doctest::Approx(2 * kPi / 3));
  CHECK(launch_angles(1.0, -2, LineKind::Stokes).empty());
  CHECK(launch_angles(1.0, -1, LineKind::Stokes).size() == 1);
  CHECK(launch_angles(cplx(0.3, 2.0), 3, LineKind::AntiStokes).size() == 5);

  // Weber zeros: R'(1) = 2, R'(-1) = -2.
  CHECK(local_coefficient(weber(1.0), 1.0, 1) == cplx(2.0));
  CHECK(local_coefficient(weber(1.0), -1.0, 1) == cplx(-2.0));
  CHECK(local_coefficient(fig1(2.0), 0.0, -1) == cplx(4.0));

  // At each zero the two kinds interleave.
  for (int m : {1, 2, 3}) {
    auto all = launch_angles(cplx(0.4, -1.1), m, LineKind::Stokes);
    const auto b = launch_angles(cplx(0.4, -1.1), m, LineKind::AntiStokes);
    std::vector<std::pair<double, int>> tagged;
    for (double t : all) tagged.emplace_back(t, 0);
    for (double t : b) tagged.emplace_back(t, 1);
    std::sort(tagged.begin(), tagged.end());
    for (std::size_t i = 0; i + 1 < tagged.size(); ++i) CHECK(tagged[i].second != tagged[i + 1].second);
  }
}

TEST_CASE("lines of the linear potential are rays") {
  const auto R = RationalIntegrand::polynomial({0.0, 1.0});
  const auto st = trace_lines(R, LineKind::Stokes);
  const auto an = trace_lines(R, LineKind::AntiStokes);
  REQUIRE(st.size() == 3);
  REQUIRE(an.size() == 3);
  const auto sa = end_angles(st), aa = end_angles(an);
  REQUIRE(sa.size() == 3);
  for (double t : {kPi / 3, kPi, 5 * kPi / 3}) CHECK(has_angle(sa, t, 1e-3));
  for (double t : {0.0, 2 * kPi / 3, 4 * kPi / 3}) CHECK(has_angle(aa, t, 1e-3));
  for (const auto& l : st) CHECK(std::abs(std::abs(l.points.back()) - 5.0) < 1e-9);
}

TEST_CASE("traced lines keep the defining integral real or imaginary") {
  for (const auto& R : {weber(1.0), quartic(1.0), fig1(2.0), RationalIntegrand::polynomial({cplx(0.5, 1.0), 0.3, 1.0})}) {
    for (auto kind : {LineKind::Stokes, LineKind::AntiStokes})
      for (const auto& l : trace_lines(R, kind)) {
        CHECK(l.residual < 1e-6 * std::max(1.0, l.length));
        CHECK((l.reached_radius || l.ends_at.has_value()));
      }
  }
}

TEST_CASE("the weber stokes line joins the two zeros") {
  const auto st = trace_lines(weber(1.0), LineKind::Stokes);
  CHECK(st.size() == 6);
  int joined = 0;
  for (const auto& l : st)
    if (l.ends_at) {
      ++joined;
      CHECK(std::abs(*l.ends_at + l.origin) < 1e-9);
    }
  CHECK(joined == 2);
}

TEST_CASE("wedge counts") {
  CHECK(wedges(weber(1.0)).size() == 4);
  CHECK(wedges(quartic(1.0)).size() == 6);
  CHECK(wedges(RationalIntegrand::polynomial({0.0, 1.0})).size() == 3);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 1; n <= 7; ++n) {
    std::vector<cplx> c;
    for (int k = 0; k <= n; ++k) c.emplace_back(u(rng), u(rng));
    const auto R = RationalIntegrand::polynomial(c);
    const auto w = wedges(R);
    CHECK(w.size() == static_cast<std::size_t>(n + 2));
    for (const auto& x : w) {
      CHECK(x.to > x.from);
      const double d = x.from + std::fmod(x.direction - x.from + 4 * kPi, 2 * kPi);
      CHECK(d > x.from);
      CHECK(d < x.to);
    }
  }
  // Weber wedges are bounded by the axes.
  for (const auto& w : wedges(weber(1.0))) CHECK(std::abs(std::remainder(w.from, kPi / 2)) < 1e-12);
}

TEST_CASE("quartic diagram under a quarter turn") {
  const auto R = quartic(1.0);
  const auto st = trace_lines(R, LineKind::Stokes);
  const auto an = trace_lines(R, LineKind::AntiStokes);
  // z -> iz maps q dz to i q dz: the two kinds exchange.
  CHECK(directed_distance(st, an, kI) < 0.01);
  CHECK(directed_distance(an, st, kI) < 0.01);
  CHECK(directed_distance(st, st, -1.0) < 0.01);
}

TEST_CASE("diagram equivariance under rotation") {
  const cplx c = std::polar(1.0, kPi / 7);
  const auto R = weber(1.0);
  // c^2 R(c z) = c^4 z^2 - c^2.
  const auto Rt = RationalIntegrand::polynomial({-c * c, 0.0, c * c * c * c});
  for (auto kind : {LineKind::Stokes, LineKind::AntiStokes}) {
    const auto a = trace_lines(R, kind), b = trace_lines(Rt, kind);
    CHECK(directed_distance(a, b, 1.0 / c) < 0.01);
    CHECK(directed_distance(b, a, c) < 0.01);
  }
}

TEST_CASE("dominance classification") {
  const auto one = RationalIntegrand::polynomial({1.0});
  CHECK(classify_dominance(BranchSheet(one, cplx(0.0, 5.0), 1.0), probe_value(BranchSheet(one, cplx(0.0, 5.0), 1.0))) ==
        Dominance::Minus);

  const auto R = weber(1.0);
  auto at = [&](cplx z) {
    const auto s = BranchSheet::asymptotic(R, z);
    return classify_dominance(s, probe_value(s));
  };
  for (double r : {6.0, 8.0, 12.0})
    for (double t : {0.6, 0.75, 0.9}) {
      CHECK(at(std::polar(r, t * kPi)) == Dominance::Plus);
      CHECK(at(std::polar(r, -t * kPi)) == Dominance::Minus);
      CHECK(at(std::polar(r, (1.0 - t) * kPi)) == Dominance::Minus);
      CHECK(at(std::polar(r, -(1.0 - t) * kPi)) == Dominance::Plus);
    }
  try {
    (void)at(cplx(0.0, 8.0));
    FAIL("expected AmbiguousDominance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AmbiguousDominance);
  }
}

TEST_CASE("diagram emission") {
  const auto d = build_diagram(weber(1.0));
  const auto svg = diagram_svg(d);
  CHECK(count(svg, "class=\"zero\"") == 2);
  CHECK(count(svg, "class=\"pole\"") == 0);
  CHECK(count(svg, "class=\"wedge\"") == 4);
  CHECK(count(svg, "class=\"stokes\"") == 6);
  CHECK(count(svg, "stroke-dasharray") >= 6);

  const auto f = build_diagram(fig1(2.0));
  const auto fsvg = diagram_svg(f);
  CHECK(count(fsvg, "class=\"zero\"") == 2);
  CHECK(count(fsvg, "class=\"pole\"") == 1);

  const auto j = nlohmann::json::parse(diagram_json(d));
  CHECK(j["singularities"].size() == 2);
  CHECK(j["stokes"].size() == d.stokes.size());
  CHECK(j["antistokes"].size() == d.antistokes.size());
  CHECK(j["wedges"].size() == 4);
  CHECK(j["stokes"][0].size() == d.stokes[0].points.size());
  CHECK(j["stokes"][0][1][0].get<double>() == d.stokes[0].points[1].real());

  const auto empty = build_diagram(RationalIntegrand::polynomial({2.0}));
  const auto je = nlohmann::json::parse(diagram_json(empty));
  CHECK(je["stokes"].empty());
  CHECK(je["antistokes"].empty());
  CHECK(je["singularities"].empty());
}

TEST_CASE("effective diagram") {
  const auto d = build_diagram(weber(1.0));
  auto e = make_effective_diagram(d);
  CHECK(e.lines.size() == 4);
  CHECK(e.crossings().empty());
  e.phases["omega"] = cplx(0.0, -kPi / 2);
  std::vector<cplx> path{std::polar(8.0, kPi / 2)};
  const auto arc = arc_points(0.0, 2.0, kPi / 2, kPi, 16);
  path.insert(path.end(), arc.begin(), arc.end());
  path.push_back(std::polar(8.0, kPi));
  e.continuation_path = PathSpec(path);
  const auto cr = e.crossings();
  REQUIRE(cr.size() == 1);
  CHECK(angle_diff(std::arg(e.lines[cr[0].first].points.back()), 0.75 * kPi) < 1e-9);
  CHECK(cr[0].second == -1);

  const auto svg = diagram_svg(e);
  CHECK(count(svg, "class=\"effective\"") == 4);
  CHECK(count(svg, "marker-end") == 1);
  const auto j = nlohmann::json::parse(diagram_json(e));
  CHECK(j["effective"].size() == 4);
  CHECK(j["phases"]["omega"][1].get<double>() == doctest::Approx(-kPi / 2));

  // Two lines crossing away from their endpoints.
  e.lines[1].points = {cplx(-3.0, 3.0), cplx(3.0, -3.0)};
  e.lines[2].points = {cplx(-3.0, -3.0), cplx(3.0, 3.0)};
  e.continuation_path.reset();
  CHECK_FALSE(e.crossings().empty());
}

TEST_CASE("failures") {
  TraceOptions o;
  o.max_steps = 5;
  try {
    (void)trace_lines(weber(1.0), LineKind::Stokes, o);
    FAIL("expected TraceStall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TraceStall);
  }
  const auto dir = std::filesystem::temp_directory_path() / "phaseint_no_such_dir" / "x.svg";
  try {
    write_text_file(dir.string(), "x");
    FAIL("expected IOFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IOFailure);
  }
  TraceOptions small;
  small.radius = 0.5;
  CHECK_THROWS_AS(trace_lines(weber(1.0), LineKind::Stokes, small), Error);
}
