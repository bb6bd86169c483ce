#pragma once

// JSON problem files shared by the command-line tools, plus operator-word
// serialization.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phaseint/algebra.hpp"
#include "phaseint/symmetry.hpp"

namespace phaseint {

/// Either a named family at parameter `lambda`, or explicit coefficients
/// (lowest degree first).
struct IntegrandSpec {
  std::string family;
  cplx lambda{};
  std::vector<cplx> numerator;
  std::vector<cplx> denominator{1.0};
  std::map<std::string, cplx> params;

  RationalIntegrand build() const;
  /// Named family, or a fixed family around the explicit integrand.
  Family family_of() const;
  friend bool operator==(const IntegrandSpec&, const IntegrandSpec&) = default;
};

/// One F-matrix symmetry check: names refer to the problem's transforms,
/// paths and basepoints.
struct RelationCheck {
  std::string transform;
  std::string path;
  std::string z0;
  std::string z0_tilde;
  std::string hom_path;  // empty: none

  friend bool operator==(const RelationCheck&, const RelationCheck&) = default;
};

struct Tolerances {
  double ode = 1e-10;
  double matching_eps = 1e-8;
  double residual = 1e-5;  // verification threshold

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct OutputOptions {
  std::string svg;
  std::string json;

  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

struct ProblemFile {
  IntegrandSpec integrand;
  std::map<std::string, PathSpec> paths;
  std::map<std::string, cplx> basepoints;
  std::map<std::string, SymmetryTransform> transforms;
  std::map<std::string, cplx> constants;
  std::map<std::string, cplx> phases;
  std::map<std::string, OperatorWord> words;
  std::vector<RelationCheck> checks;
  Tolerances tol;
  OutputOptions output;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

/// Throws InvalidInput naming the JSON pointer of the offending value;
/// unknown keys are rejected.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string serialize_problem(const ProblemFile& p);

/// Path object {"points": [[x, y], ...], "closed", "clearance"}.
PathSpec parse_path(const std::string& text);

/// Transform in the documented JSON form; h may be {"map": "delta->i*delta"}
/// or {"modulus", "angle"}.
SymmetryTransform parse_transform(const std::string& text);
std::string serialize_transform(const SymmetryTransform& t);

/// h map expressions: "x->x", "x->i*x", "x->-x", "x->exp(i*pi)*x",
/// "x->exp(2*i*pi)*x", "x->2.5*x", "x->conj(x)".
ParamMap parse_param_map(const std::string& expr);

/// Word as a JSON array of factors, or an object {"dim", "word"}. S labels
/// and W phase references resolve through `constants` and `phases`; a W
/// reference missing from `phases` stays unresolved.
OperatorWord parse_word(const std::string& text, const std::map<std::string, cplx>& constants = {},
                        const std::map<std::string, cplx>& phases = {});
std::string serialize_word(const OperatorWord& w);

struct Diagnostic {
  std::string where;
  std::string message;
};

/// Everything the library would reject later: clearance violations,
/// unresolved references, non-invertible maps, non-symmetries, missing
/// homotopies.
std::vector<Diagnostic> validate(const ProblemFile& p);

std::string read_text_file(const std::string& path);

}  // namespace phaseint
