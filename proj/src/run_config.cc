#include "ridge/run_config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ridge {

using nlohmann::json;

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"stonr", "gda", "eg", "ogda", "ftr"};
  return names;
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

std::int64_t get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "expected an integer");
  return j.get<std::int64_t>();
}

std::vector<double> get_vector(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k) {
    v.push_back(get_number(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return v;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      field_error(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
    }
  }
}

AffineSpec parse_affine(const json& j) {
  if (!j.is_object()) field_error("affine", "expected an object");
  reject_unknown(j, {"name", "lower", "upper", "A", "b"}, "affine");
  AffineSpec a;
  if (j.contains("name")) {
    if (!j["name"].is_string()) field_error("affine.name", "expected a string");
    a.name = j["name"].get<std::string>();
  }
  for (const char* key : {"lower", "upper", "A", "b"}) {
    if (!j.contains(key)) field_error(std::string("affine.") + key, "missing");
  }
  a.lower = get_vector(j["lower"], "affine.lower");
  a.upper = get_vector(j["upper"], "affine.upper");
  a.b = get_vector(j["b"], "affine.b");
  if (!j["A"].is_array()) field_error("affine.A", "expected an array of rows");
  for (std::size_t r = 0; r < j["A"].size(); ++r) {
    a.a.push_back(get_vector(j["A"][r], "affine.A[" + std::to_string(r) + "]"));
  }
  return a;
}

}  // namespace

void RunConfig::validate() const {
  if (!affine) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), problem) == names.end()) {
      field_error("problem", "unknown builtin '" + problem + "'");
    }
  } else {
    const std::size_t n = affine->lower.size();
    if (n == 0 || n > 64) field_error("affine.lower", "dimension must be between 1 and 64");
    if (affine->upper.size() != n) field_error("affine.upper", "dimension mismatch");
    if (affine->b.size() != n) field_error("affine.b", "dimension mismatch");
    if (affine->a.size() != n) field_error("affine.A", "expected " + std::to_string(n) + " rows");
    for (std::size_t r = 0; r < n; ++r) {
      if (affine->a[r].size() != n) {
        field_error("affine.A[" + std::to_string(r) + "]", "expected " + std::to_string(n) + " entries");
      }
      if (!(affine->lower[r] < affine->upper[r])) {
        field_error("affine.lower", "each lower bound must be below its upper bound");
      }
    }
  }
  if (perturbation) {
    try {
      perturbation_kind_from_string(perturbation->kind);
    } catch (const std::invalid_argument& err) {
      field_error("perturbation.kind", err.what());
    }
    if (!(perturbation->magnitude >= 0.0)) field_error("perturbation.magnitude", "must be >= 0");
    if (perturbation->kind == "boundary_shrink" && perturbation->magnitude >= 0.5) {
      field_error("perturbation.magnitude", "boundary shrink needs a magnitude below 1/2");
    }
  }
  if (std::find(method_names().begin(), method_names().end(), method) == method_names().end()) {
    field_error("method", "unknown method '" + method + "'");
  }
  auto positive = [](double v, const char* f) {
    if (!(v > 0.0) || !std::isfinite(v)) field_error(f, "must be a positive number");
  };
  positive(gamma, "gamma");
  positive(epsilon, "epsilon");
  positive(alpha, "alpha");
  positive(eta, "eta");
  if (!(lambda >= 0.0)) field_error("lambda", "must be >= 0");
  if (steps && *steps < 0) field_error("steps", "must be >= 0");
  if (max_epochs <= 0) field_error("max_epochs", "must be positive");
  if (record_every <= 0) field_error("record_every", "must be positive");
  if (out.empty()) field_error("out", "must not be empty");
  try {
    solver_config().validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  const std::size_t n = affine ? affine->lower.size() : 2;
  for (std::size_t k = 0; k < inits.size(); ++k) {
    if (inits[k].size() != n) {
      field_error("init", "point " + std::to_string(k + 1) + " needs " + std::to_string(n) + " coordinates");
    }
  }
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig c;
  c.gamma = gamma;
  c.epsilon = epsilon;
  c.alpha = alpha;
  c.ridge_correction = ridge_correction;
  c.correction_tol = std::min(c.correction_tol, 0.5 * epsilon);
  c.max_epochs = max_epochs;
  c.max_steps_per_epoch = steps.value_or(0);
  c.record_every = record_every;
  return c;
}

BaselineMethod RunConfig::baseline_method() const {
  BaselineMethod m;
  if (method != "stonr") m.kind = baseline_kind_from_string(method);
  m.eta = eta;
  m.damping = lambda;
  m.steps = steps.value_or(100000);
  m.alpha = alpha;
  m.record_every = record_every;
  return m;
}

VIProblem RunConfig::make_problem() const {
  VIProblem base = [&] {
    if (!affine) return builtin_vi(problem);
    const int n = static_cast<int>(affine->lower.size());
    Vector lo = Eigen::Map<const Vector>(affine->lower.data(), n);
    Vector hi = Eigen::Map<const Vector>(affine->upper.data(), n);
    Matrix a(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a(r, c) = affine->a[r][c];
    }
    const Vector b = Eigen::Map<const Vector>(affine->b.data(), n);
    const BoxDomain dom(lo, hi);
    const Vector s = dom.scale();
    FieldFn v = [dom, a, b, s](const Vector& x) -> Vector {
      return (s.array() * (a * dom.from_unit(x) + b).array()).matrix();
    };
    const Matrix jn = s.asDiagonal() * a * s.asDiagonal();
    JacobianFn jac = [jn](const Vector&) -> Matrix { return jn; };
    return VIProblem(affine->name, dom, v, jac);
  }();
  if (!perturbation) return base;
  return perturb(base, {perturbation_kind_from_string(perturbation->kind),
                        perturbation->magnitude, seed});
}

std::vector<Vector> RunConfig::init_points(const BoxDomain& domain) const {
  std::vector<Vector> pts;
  for (const auto& p : inits) {
    pts.push_back(Eigen::Map<const Vector>(p.data(), static_cast<int>(p.size())));
  }
  if (pts.empty()) pts.push_back(0.5 * (domain.lower() + domain.upper()));
  return pts;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& err) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(err.byte == 0 ? 0 : err.byte - 1, json_text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (json_text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + err.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j,
                 {"schema", "problem", "affine", "perturbation", "method", "gamma", "epsilon",
                  "alpha", "eta", "lambda", "steps", "max_epochs", "record_every",
                  "ridge_correction", "init", "inits", "out", "seed"},
                 "");
  if (!j.contains("schema")) field_error("schema", "missing");
  if (get_int(j["schema"], "schema") != RunConfig::kSchema) {
    field_error("schema", "unsupported version, expected 1");
  }

  RunConfig c;
  auto str = [&](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) field_error(key, "expected a string");
    dst = j[key].get<std::string>();
  };
  auto num = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = get_number(j[key], key);
  };
  str("problem", c.problem);
  str("method", c.method);
  str("out", c.out);
  num("gamma", c.gamma);
  num("epsilon", c.epsilon);
  num("alpha", c.alpha);
  num("eta", c.eta);
  num("lambda", c.lambda);
  if (j.contains("steps")) c.steps = get_int(j["steps"], "steps");
  if (j.contains("max_epochs")) c.max_epochs = get_int(j["max_epochs"], "max_epochs");
  if (j.contains("record_every")) c.record_every = get_int(j["record_every"], "record_every");
  if (j.contains("ridge_correction")) {
    if (!j["ridge_correction"].is_boolean()) field_error("ridge_correction", "expected a boolean");
    c.ridge_correction = j["ridge_correction"].get<bool>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("init")) c.inits.push_back(get_vector(j["init"], "init"));
  if (j.contains("inits")) {
    if (!j["inits"].is_array()) field_error("inits", "expected an array of points");
    for (std::size_t k = 0; k < j["inits"].size(); ++k) {
      c.inits.push_back(get_vector(j["inits"][k], "inits[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("affine")) c.affine = parse_affine(j["affine"]);
  if (j.contains("perturbation")) {
    const json& pj = j["perturbation"];
    if (!pj.is_object()) field_error("perturbation", "expected an object");
    reject_unknown(pj, {"kind", "magnitude"}, "perturbation");
    PerturbationConfig pc;
    if (!pj.contains("kind") || !pj["kind"].is_string()) {
      field_error("perturbation.kind", "expected a string");
    }
    pc.kind = pj["kind"].get<std::string>();
    if (pj.contains("magnitude")) pc.magnitude = get_number(pj["magnitude"], "perturbation.magnitude");
    c.perturbation = pc;
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

std::string dump_run_config(const RunConfig& c) {
  json j;
  j["schema"] = RunConfig::kSchema;
  j["problem"] = c.problem;
  j["method"] = c.method;
  j["gamma"] = c.gamma;
  j["epsilon"] = c.epsilon;
  j["alpha"] = c.alpha;
  j["eta"] = c.eta;
  j["lambda"] = c.lambda;
  if (c.steps) j["steps"] = *c.steps;
  j["max_epochs"] = c.max_epochs;
  j["record_every"] = c.record_every;
  j["ridge_correction"] = c.ridge_correction;
  if (!c.inits.empty()) j["inits"] = c.inits;
  j["out"] = c.out;
  j["seed"] = c.seed;
  if (c.affine) {
    j["affine"] = {{"name", c.affine->name}, {"lower", c.affine->lower},
                   {"upper", c.affine->upper}, {"A", c.affine->a}, {"b", c.affine->b}};
  }
  if (c.perturbation) {
    j["perturbation"] = {{"kind", c.perturbation->kind}, {"magnitude", c.perturbation->magnitude}};
  }
  return j.dump(2);
}

}  // namespace ridge
