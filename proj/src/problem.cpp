#include "phaseint/problem.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "phaseint/error.hpp"

namespace phaseint {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::InvalidInput, (where.empty() ? std::string("/") : where) + ": " + what);
}

std::string child(const std::string& where, const std::string& key) {
  std::string k;
  for (char c : key) k += c == '~' ? "~0" : c == '/' ? "~1" : std::string(1, c);
  return where + "/" + k;
}

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) fail(child(where, k), "unknown key");
}

cplx get_cplx(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(where, "expected a number or [re, im]");
}

double get_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<cplx> get_cplx_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_cplx(j[i], where + "/" + std::to_string(i)));
  return out;
}

std::map<std::string, cplx> get_cplx_map(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  std::map<std::string, cplx> out;
  for (const auto& [k, v] : j.items()) out[k] = get_cplx(v, child(where, k));
  return out;
}

json put(cplx z) { return json::array({z.real(), z.imag()}); }

json put_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx z : v) a.push_back(put(z));
  return a;
}

json put_map(const std::map<std::string, cplx>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[k] = put(v);
  return o;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

// --- transforms ---

double parse_factor_angle(const std::string& f, double& modulus, const std::string& where) {
  modulus = 1.0;
  if (f == "i") return 0.5 * kPi;
  if (f == "-i") return -0.5 * kPi;
  if (f == "-1" || f == "-") return kPi;
  static const std::regex exp_pi(R"(exp\((?:([-+]?[0-9.eE+-]+)\*)?i\*pi\))");
  static const std::regex exp_a(R"(exp\(i\*([-+]?[0-9.eE+-]+)\))");
  std::smatch m;
  if (std::regex_match(f, m, exp_pi)) return (m[1].matched ? std::stod(m[1].str()) : 1.0) * kPi;
  if (std::regex_match(f, m, exp_a)) return std::stod(m[1].str());
  try {
    std::size_t used = 0;
    const double r = std::stod(f, &used);
    if (used == f.size() && r != 0.0) {
      modulus = std::abs(r);
      return r < 0.0 ? kPi : 0.0;
    }
  } catch (const std::exception&) {
  }
  fail(where, "unsupported parameter factor '" + f + "'");
}

ParamMap param_map_at(const std::string& expr, const std::string& where) {
  std::string s;
  for (char c : expr)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto arrow = s.find("->");
  if (arrow == std::string::npos || arrow == 0) fail(where, "h map must read 'var->expr'");
  const std::string var = s.substr(0, arrow), rhs = s.substr(arrow + 2);
  ParamMap h;
  std::string factor;
  if (rhs == var) return h;
  if (rhs == "conj(" + var + ")") {
    h.conj = true;
    return h;
  }
  if (rhs == "-" + var) {
    h.angle = kPi;
    return h;
  }
  for (const std::string& tail : {"*conj(" + var + ")", "*" + var}) {
    if (rhs.size() > tail.size() && rhs.compare(rhs.size() - tail.size(), tail.size(), tail) == 0) {
      factor = rhs.substr(0, rhs.size() - tail.size());
      h.conj = tail.find("conj") != std::string::npos;
      h.angle = parse_factor_angle(factor, h.modulus, where);
      return h;
    }
  }
  fail(where, "h map must be [factor*]" + var + " or [factor*]conj(" + var + ")");
}

SymmetryTransform transform_at(const json& j, const std::string& where) {
  require_keys(j, where, {"f", "g", "h", "mu_steps"});
  SymmetryTransform t;
  if (j.contains("g")) {
    const auto& g = j["g"];
    const auto w = child(where, "g");
    require_keys(g, w, {"a", "b", "conj", "angle"});
    if (g.contains("a")) t.g.a = get_cplx(g["a"], child(w, "a"));
    if (g.contains("b")) t.g.b = get_cplx(g["b"], child(w, "b"));
    if (g.contains("conj")) t.g.conj = get_bool(g["conj"], child(w, "conj"));
    if (g.contains("angle")) t.g.angle = get_double(g["angle"], child(w, "angle"));
  }
  if (j.contains("h")) {
    const auto& h = j["h"];
    const auto w = child(where, "h");
    require_keys(h, w, {"map", "modulus", "angle", "conj"});
    if (h.contains("map")) {
      if (h.contains("modulus") || h.contains("angle")) fail(w, "give either 'map' or 'modulus'/'angle'");
      t.h = param_map_at(get_string(h["map"], child(w, "map")), child(w, "map"));
    }
    if (h.contains("modulus")) t.h.modulus = get_double(h["modulus"], child(w, "modulus"));
    if (h.contains("angle")) t.h.angle = get_double(h["angle"], child(w, "angle"));
    if (h.contains("conj") && get_bool(h["conj"], child(w, "conj"))) t.h.conj = true;
  }
  // An antilinear g forces a conjugating f unless f says otherwise explicitly.
  t.f_conj = t.g.conj;
  if (j.contains("f")) {
    const auto& f = j["f"];
    const auto w = child(where, "f");
    if (f.is_string()) {
      const auto s = f.get<std::string>();
      if (s == "conj") {
        t.f_conj = true;
      } else {
        try {
          std::size_t used = 0;
          t.f = std::stod(s, &used);
          if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
          fail(w, "f must be a number, [re, im], \"conj\" or {\"value\", \"conj\"}");
        }
      }
    } else if (f.is_object()) {
      require_keys(f, w, {"value", "conj"});
      if (f.contains("value")) t.f = get_cplx(f["value"], child(w, "value"));
      if (f.contains("conj")) t.f_conj = get_bool(f["conj"], child(w, "conj"));
    } else {
      t.f = get_cplx(f, w);
    }
  }
  if (j.contains("mu_steps")) {
    if (!j["mu_steps"].is_number_integer()) fail(child(where, "mu_steps"), "expected an integer");
    t.mu_steps = j["mu_steps"].get<int>();
  }
  return t;
}

json transform_json(const SymmetryTransform& t) {
  json g = {{"a", put(t.g.a)}, {"b", put(t.g.b)}, {"conj", t.g.conj}};
  if (t.g.angle) g["angle"] = *t.g.angle;
  return {{"f", {{"value", put(t.f)}, {"conj", t.f_conj}}},
          {"g", g},
          {"h", {{"modulus", t.h.modulus}, {"angle", t.h.angle}, {"conj", t.h.conj}}},
          {"mu_steps", t.mu_steps}};
}

// --- words ---

Generator factor_at(const json& j, const std::string& where, const std::map<std::string, cplx>& constants,
                    const std::map<std::string, cplx>& phases) {
  if (!j.is_object() || !j.contains("op")) fail(where, "factor must be an object with 'op'");
  const auto op = get_string(j["op"], child(where, "op"));
  if (op == "S" || op == "ST") {
    require_keys(j, where, {"op", "s", "label"});
    if (!j.contains("s")) fail(where, "missing 's'");
    std::string label = j.contains("label") ? get_string(j["label"], child(where, "label")) : "";
    cplx s;
    if (j["s"].is_string()) {
      label = j["s"].get<std::string>();
      const auto it = constants.find(label);
      if (it == constants.end()) fail(child(where, "s"), "unknown constant '" + label + "'");
      s = it->second;
    } else {
      s = get_cplx(j["s"], child(where, "s"));
    }
    return op == "S" ? stokes(s, label) : stokes_t(s, label);
  }
  if (op == "W") {
    require_keys(j, where, {"op", "omega", "omegas", "label"});
    const std::string label = j.contains("label") ? get_string(j["label"], child(where, "label")) : "";
    if (j.contains("omegas")) return reconnect_n(get_cplx_list(j["omegas"], child(where, "omegas")));
    if (!j.contains("omega")) fail(where, "missing 'omega'");
    if (j["omega"].is_string()) {
      const auto ref = j["omega"].get<std::string>();
      const auto it = phases.find(ref);
      if (it == phases.end()) return reconnect_unresolved(ref);
      Generator g = reconnect(it->second, label);
      g.phase_ref = ref;
      return g;
    }
    return reconnect(get_cplx(j["omega"], child(where, "omega")), label);
  }
  if (op == "C") {
    require_keys(j, where, {"op", "power"});
    int p = 1;
    if (j.contains("power")) {
      if (!j["power"].is_number_integer()) fail(child(where, "power"), "expected an integer");
      p = j["power"].get<int>();
    }
    return branch_cut(p);
  }
  if (op == "P") {
    require_keys(j, where, {"op", "perm"});
    if (!j.contains("perm") || !j["perm"].is_array()) fail(where, "missing 'perm' array");
    std::vector<int> perm;
    for (const auto& v : j["perm"]) {
      if (!v.is_number_integer()) fail(child(where, "perm"), "expected integers");
      perm.push_back(v.get<int>());
    }
    return permutation(perm);
  }
  if (op == "Lambda") {
    require_keys(j, where, {"op", "diag"});
    if (!j.contains("diag")) fail(where, "missing 'diag'");
    return diagonal(get_cplx_list(j["diag"], child(where, "diag")));
  }
  fail(child(where, "op"), "unknown operator '" + op + "'");
}

json factor_json(const Generator& g) {
  json j;
  switch (g.kind) {
    case GenKind::S:
    case GenKind::ST:
      j = {{"op", g.kind == GenKind::S ? "S" : "ST"}, {"s", put(g.s)}};
      if (!g.label.empty()) j["label"] = g.label;
      break;
    case GenKind::W:
      j = {{"op", "W"}};
      if (g.omegas.empty()) {
        j["omega"] = g.phase_ref;
      } else if (g.omegas.size() == 1) {
        j["omega"] = put(g.omegas[0]);
        if (!g.label.empty()) j["label"] = g.label;
      } else {
        j["omegas"] = put_list(g.omegas);
      }
      break;
    case GenKind::C: j = {{"op", "C"}, {"power", g.power}}; break;
    case GenKind::P: j = {{"op", "P"}, {"perm", g.perm}}; break;
    case GenKind::Lambda: j = {{"op", "Lambda"}, {"diag", put_list(g.diag)}}; break;
  }
  return j;
}

OperatorWord word_at(const json& j, const std::string& where, std::map<std::string, cplx> constants,
                     std::map<std::string, cplx> phases) {
  OperatorWord w;
  const json* list = &j;
  std::string lw = where;
  if (j.is_object()) {
    require_keys(j, where, {"dim", "word", "constants", "phases"});
    if (j.contains("dim")) {
      if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) fail(child(where, "dim"), "expected a positive integer");
      w.dim = j["dim"].get<int>();
    }
    if (j.contains("constants"))
      for (const auto& [k, v] : get_cplx_map(j["constants"], child(where, "constants"))) constants[k] = v;
    if (j.contains("phases"))
      for (const auto& [k, v] : get_cplx_map(j["phases"], child(where, "phases"))) phases[k] = v;
    if (!j.contains("word")) fail(where, "missing 'word'");
    list = &j["word"];
    lw = child(where, "word");
  }
  if (!list->is_array()) fail(lw, "expected an array of factors");
  for (std::size_t i = 0; i < list->size(); ++i)
    w.factors.push_back(factor_at((*list)[i], lw + "/" + std::to_string(i), constants, phases));
  return w;
}

json word_json(const OperatorWord& w) {
  json a = json::array();
  for (const auto& g : w.factors) a.push_back(factor_json(g));
  return {{"dim", w.dim}, {"word", a}};
}

// --- problem ---

PathSpec path_at(const json& j, const std::string& where) {
  require_keys(j, where, {"points", "closed", "clearance"});
  if (!j.contains("points")) fail(where, "missing 'points'");
  PathSpec p(get_cplx_list(j["points"], child(where, "points")));
  if (j.contains("closed")) p.closed = get_bool(j["closed"], child(where, "closed"));
  if (j.contains("clearance")) p.clearance = get_double(j["clearance"], child(where, "clearance"));
  return p;
}

IntegrandSpec integrand_at(const json& j, const std::string& where) {
  require_keys(j, where, {"family", "lambda", "numerator", "denominator", "params"});
  IntegrandSpec s;
  if (j.contains("family")) {
    if (j.contains("numerator") || j.contains("denominator"))
      fail(where, "give either 'family' or explicit coefficients");
    s.family = get_string(j["family"], child(where, "family"));
    try {
      (void)Family::from_name(s.family);
    } catch (const Error& e) {
      fail(child(where, "family"), e.what());
    }
    if (j.contains("lambda")) s.lambda = get_cplx(j["lambda"], child(where, "lambda"));
  } else {
    if (!j.contains("numerator")) fail(where, "missing 'numerator' (or 'family')");
    if (j.contains("lambda")) fail(child(where, "lambda"), "'lambda' requires 'family'");
    s.numerator = get_cplx_list(j["numerator"], child(where, "numerator"));
    if (j.contains("denominator")) s.denominator = get_cplx_list(j["denominator"], child(where, "denominator"));
  }
  if (j.contains("params")) s.params = get_cplx_map(j["params"], child(where, "params"));
  return s;
}

template <class T, class F>
std::map<std::string, T> named(const json& j, const std::string& where, F&& f) {
  if (!j.is_object()) fail(where, "expected an object");
  std::map<std::string, T> out;
  for (const auto& [k, v] : j.items()) out[k] = f(v, child(where, k));
  return out;
}

}  // namespace

RationalIntegrand IntegrandSpec::build() const {
  if (!family.empty()) return Family::from_name(family).at(lambda);
  return RationalIntegrand(Polynomial(numerator), Polynomial(denominator), params);
}

Family IntegrandSpec::family_of() const {
  if (!family.empty()) return Family::from_name(family);
  return {FamilyKind::Fixed, build()};
}

PathSpec parse_path(const std::string& text) { return path_at(parse_json(text), ""); }

ParamMap parse_param_map(const std::string& expr) { return param_map_at(expr, "/h/map"); }

SymmetryTransform parse_transform(const std::string& text) { return transform_at(parse_json(text), ""); }

std::string serialize_transform(const SymmetryTransform& t) { return transform_json(t).dump(); }

OperatorWord parse_word(const std::string& text, const std::map<std::string, cplx>& constants,
                        const std::map<std::string, cplx>& phases) {
  return word_at(parse_json(text), "", constants, phases);
}

std::string serialize_word(const OperatorWord& w) { return word_json(w).dump(); }

ProblemFile parse_problem(const std::string& text) {
  const json j = parse_json(text);
  require_keys(j, "", {"integrand", "paths", "basepoints", "transforms", "constants", "phases", "words", "checks",
                       "tolerances", "output"});
  ProblemFile p;
  if (!j.contains("integrand")) fail("", "missing 'integrand'");
  p.integrand = integrand_at(j["integrand"], "/integrand");
  if (j.contains("paths")) p.paths = named<PathSpec>(j["paths"], "/paths", path_at);
  if (j.contains("basepoints")) p.basepoints = get_cplx_map(j["basepoints"], "/basepoints");
  if (j.contains("transforms")) p.transforms = named<SymmetryTransform>(j["transforms"], "/transforms", transform_at);
  if (j.contains("constants")) p.constants = get_cplx_map(j["constants"], "/constants");
  if (j.contains("phases")) p.phases = get_cplx_map(j["phases"], "/phases");
  if (j.contains("words"))
    p.words = named<OperatorWord>(j["words"], "/words",
                                  [&](const json& v, const std::string& w) { return word_at(v, w, p.constants, p.phases); });
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) fail("/checks", "expected an array");
    for (std::size_t i = 0; i < j["checks"].size(); ++i) {
      const auto& c = j["checks"][i];
      const auto w = "/checks/" + std::to_string(i);
      require_keys(c, w, {"transform", "path", "z0", "z0_tilde", "hom_path"});
      RelationCheck rc;
      for (const char* k : {"transform", "path", "z0", "z0_tilde"}) {
        if (!c.contains(k)) fail(w, std::string("missing '") + k + "'");
      }
      rc.transform = get_string(c["transform"], child(w, "transform"));
      rc.path = get_string(c["path"], child(w, "path"));
      rc.z0 = get_string(c["z0"], child(w, "z0"));
      rc.z0_tilde = get_string(c["z0_tilde"], child(w, "z0_tilde"));
      if (c.contains("hom_path")) rc.hom_path = get_string(c["hom_path"], child(w, "hom_path"));
      p.checks.push_back(rc);
    }
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    require_keys(t, "/tolerances", {"ode", "matching_eps", "residual"});
    if (t.contains("ode")) p.tol.ode = get_double(t["ode"], "/tolerances/ode");
    if (t.contains("matching_eps")) p.tol.matching_eps = get_double(t["matching_eps"], "/tolerances/matching_eps");
    if (t.contains("residual")) p.tol.residual = get_double(t["residual"], "/tolerances/residual");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    require_keys(o, "/output", {"svg", "json"});
    if (o.contains("svg")) p.output.svg = get_string(o["svg"], "/output/svg");
    if (o.contains("json")) p.output.json = get_string(o["json"], "/output/json");
  }
  return p;
}

std::string serialize_problem(const ProblemFile& p) {
  json j;
  json in;
  if (!p.integrand.family.empty()) {
    in = {{"family", p.integrand.family}, {"lambda", put(p.integrand.lambda)}};
  } else {
    in = {{"numerator", put_list(p.integrand.numerator)}, {"denominator", put_list(p.integrand.denominator)}};
  }
  if (!p.integrand.params.empty()) in["params"] = put_map(p.integrand.params);
  j["integrand"] = in;
  j["paths"] = json::object();
  for (const auto& [k, v] : p.paths)
    j["paths"][k] = {{"points", put_list(v.waypoints)}, {"closed", v.closed}, {"clearance", v.clearance}};
  j["basepoints"] = put_map(p.basepoints);
  j["transforms"] = json::object();
  for (const auto& [k, v] : p.transforms) j["transforms"][k] = transform_json(v);
  j["constants"] = put_map(p.constants);
  j["phases"] = put_map(p.phases);
  j["words"] = json::object();
  for (const auto& [k, v] : p.words) j["words"][k] = word_json(v);
  j["checks"] = json::array();
  for (const auto& c : p.checks) {
    json cj = {{"transform", c.transform}, {"path", c.path}, {"z0", c.z0}, {"z0_tilde", c.z0_tilde}};
    if (!c.hom_path.empty()) cj["hom_path"] = c.hom_path;
    j["checks"].push_back(cj);
  }
  j["tolerances"] = {{"ode", p.tol.ode}, {"matching_eps", p.tol.matching_eps}, {"residual", p.tol.residual}};
  j["output"] = json::object();
  if (!p.output.svg.empty()) j["output"]["svg"] = p.output.svg;
  if (!p.output.json.empty()) j["output"]["json"] = p.output.json;
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::IOFailure, "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

ProblemFile load_problem(const std::string& path) { return parse_problem(read_text_file(path)); }

std::vector<Diagnostic> validate(const ProblemFile& p) {
  std::vector<Diagnostic> out;
  auto diag = [&](std::string where, std::string msg) { out.push_back({std::move(where), std::move(msg)}); };

  std::optional<RationalIntegrand> R;
  try {
    R = p.integrand.build();
  } catch (const Error& e) {
    diag("/integrand", e.what());
  }
  std::vector<cplx> sing;
  if (R) {
    try {
      sing = find_zeros_poles(*R).points();
    } catch (const Error& e) {
      diag("/integrand", e.what());
    }
  }

  std::set<std::string> hom_paths;
  for (const auto& c : p.checks)
    if (!c.hom_path.empty()) hom_paths.insert(c.hom_path);

  for (const auto& [name, path] : p.paths) {
    const auto where = child("/paths", name);
    try {
      path.validate();
    } catch (const Error& e) {
      diag(where, e.what());
      continue;
    }
    // Homotopy paths run between basepoints, which may be turning points.
    if (hom_paths.count(name)) continue;
    const double clear = std::max(path.clearance, 1e-9);
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
      const auto [a, b] = path.segment(i);
      for (const cplx s : sing)
        if (distance_to_segment(s, a, b) < clear) {
          std::ostringstream os;
          os << "segment " << i << " passes within clearance " << clear << " of the singular point (" << s.real()
             << ", " << s.imag() << ")";
          diag(where, os.str());
        }
    }
  }

  for (const auto& [name, t] : p.transforms) {
    const auto where = child("/transforms", name);
    if (t.g.a == cplx{}) {
      diag(child(where, "g"), "g must be invertible: linear coefficient a = 0");
      continue;
    }
    try {
      t.validate();
      if (R) {
        const auto chk = check_is_symmetry(p.integrand.family_of(), p.integrand.lambda, t);
        if (!chk.ok) {
          std::ostringstream os;
          os << "not a symmetry of the integrand (residual " << chk.residual << ")";
          diag(where, os.str());
        }
      }
    } catch (const Error& e) {
      diag(where, e.what());
    }
  }

  for (const auto& [name, w] : p.words) {
    for (std::size_t i = 0; i < w.factors.size(); ++i)
      if (!w.factors[i].resolved())
        diag(child(child("/words", name), "word") + "/" + std::to_string(i),
             "unresolved phase '" + w.factors[i].phase_ref + "'");
  }

  for (std::size_t i = 0; i < p.checks.size(); ++i) {
    const auto& c = p.checks[i];
    const auto where = "/checks/" + std::to_string(i);
    bool ok = true;
    auto need = [&](bool present, const char* key, const std::string& val) {
      if (!present) {
        diag(child(where, key), "unknown reference '" + val + "'");
        ok = false;
      }
    };
    need(p.transforms.count(c.transform) > 0, "transform", c.transform);
    need(p.paths.count(c.path) > 0, "path", c.path);
    need(p.basepoints.count(c.z0) > 0, "z0", c.z0);
    need(p.basepoints.count(c.z0_tilde) > 0, "z0_tilde", c.z0_tilde);
    if (!c.hom_path.empty()) need(p.paths.count(c.hom_path) > 0, "hom_path", c.hom_path);
    if (!ok) continue;
    const auto& t = p.transforms.at(c.transform);
    if (t.g.a == cplx{}) continue;
    const cplx target = t.g.inverse(p.basepoints.at(c.z0));
    if (c.hom_path.empty()) {
      if (std::abs(target - p.basepoints.at(c.z0_tilde)) > 1e-9)
        diag(where, "missing homotopy: g^{-1}(z0) differs from z0_tilde and no hom_path is given");
    } else if (R) {
      try {
        validate_homotopy_path(*R, p.paths.at(c.hom_path));
      } catch (const Error& e) {
        diag(child(where, "hom_path"), e.what());
      }
    }
  }
  return out;
}

}  // namespace phaseint
