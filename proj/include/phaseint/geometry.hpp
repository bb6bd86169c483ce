#pragma once

// Stokes and anti-Stokes lines, wedges at infinity, dominance, and Stokes
// diagram emission (JSON, SVG).

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phaseint/phase.hpp"

namespace phaseint {

/// Stokes: Re[q dz] = 0. Anti-Stokes: Im[q dz] = 0.
enum class LineKind { Stokes, AntiStokes };

std::string to_string(LineKind k);

struct TraceOptions {
  double radius = 0.0;     // 0: max(5, 3 * max |singularity|)
  double step = 0.0;       // 0: 0.01 * max(1, max |singularity|)
  double clearance = 1e-4; // termination distance to another singularity, relative to the scale
  int max_steps = 200000;
};

struct TracedLine {
  LineKind kind;
  cplx origin;
  int origin_order;       // order of the emanating zero (negative for poles)
  double launch_angle;
  std::vector<cplx> points;
  bool reached_radius = false;
  std::optional<cplx> ends_at;  // singularity hit instead of the radius
  double residual = 0.0;        // max |Re| (Stokes) or |Im| (anti-Stokes) of the integral of q dz
  double length = 0.0;
};

/// Launch angles at a singularity where R ~ a (z - z0)^m: |m + 2| directions
/// solving arg(a)/2 + (m + 2) theta / 2 = pi/2 (Stokes) or 0 (anti-Stokes)
/// mod pi. Empty for m = -2.
std::vector<double> launch_angles(cplx a, int m, LineKind kind);

/// Leading coefficient a of the local model at a zero (order > 0) or pole
/// (order < 0).
cplx local_coefficient(const RationalIntegrand& R, cplx z0, int order);

/// Asymptotic directions of lines at infinity, R ~ c z^n.
std::vector<double> asymptotic_angles(const RationalIntegrand& R, LineKind kind);

double default_radius(const RationalIntegrand& R);

/// Traces every line of `kind` from every zero and pole. Throws TraceStall
/// when the step collapses away from a singularity.
std::vector<TracedLine> trace_lines(const RationalIntegrand& R, LineKind kind, const TraceOptions& opt = {});

/// Sector at infinity between adjacent asymptotic anti-Stokes directions,
/// represented by the Stokes direction it contains.
struct Wedge {
  double from, to;   // counterclockwise, to > from
  double direction;  // asymptotic Stokes direction inside
};

std::vector<Wedge> wedges(const RationalIntegrand& R);

enum class Dominance { Plus, Minus };

/// Plus when Re(i omega) grows along the local Stokes direction oriented
/// away from the singularity centroid (y+ grows). Throws AmbiguousDominance
/// when that orientation is not defined (probe on an anti-Stokes line) or q
/// vanishes. Plus pairs with the S form, Minus with S^T.
Dominance classify_dominance(const BranchSheet& sheet, const PhaseValue& omega_at_probe);

struct StokesDiagram {
  RationalIntegrand R;
  ZerosPoles singularities;
  std::vector<TracedLine> stokes, antistokes;
  std::vector<Wedge> wedges;
  std::vector<std::vector<cplx>> cuts;
  double radius = 0.0;
};

/// Traces both kinds. Without explicit cuts, each odd-order singularity gets
/// a radial cut away from the centroid.
StokesDiagram build_diagram(const RationalIntegrand& R, const TraceOptions& opt = {},
                            std::optional<std::vector<std::vector<cplx>>> cuts = std::nullopt);

struct EffectiveLine {
  std::string label;
  cplx basepoint;
  std::vector<cplx> points;
};

struct EffectiveStokesDiagram {
  StokesDiagram base;
  std::vector<EffectiveLine> lines;
  std::optional<PathSpec> continuation_path;
  std::map<std::string, cplx> phases;  // omega annotations replacing cuts

  /// Pairs of effective lines (or a line and the path, index -1) that cross
  /// away from shared endpoints. Only non-crossing is checked.
  std::vector<std::pair<int, int>> crossings() const;
};

/// One effective line per wedge, from the given basepoint (default: the
/// singularity nearest to the wedge direction) out along the wedge
/// direction to the radius.
EffectiveStokesDiagram make_effective_diagram(const StokesDiagram& base, const std::vector<std::string>& labels = {},
                                              const std::vector<cplx>& basepoints = {},
                                              std::optional<PathSpec> path = std::nullopt);

std::string diagram_json(const StokesDiagram& d);
std::string diagram_json(const EffectiveStokesDiagram& d);
std::string diagram_svg(const StokesDiagram& d);
std::string diagram_svg(const EffectiveStokesDiagram& d);

/// Writes text to a file; throws IOFailure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace phaseint
