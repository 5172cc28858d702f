#include "vexp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace vexp {

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  require_object(j, path);
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(child(path, k), "unknown key");
}

const Json& need(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(child(path, key), "missing");
  return j.at(key);
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

double number(const Json& j, const std::string& path, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), child(path, key)) : fallback;
}

double positive(const Json& j, const std::string& path, const char* key, double fallback) {
  const double v = number(j, path, key, fallback);
  if (!(v > 0.0)) throw ConfigError(child(path, key), "must be positive");
  return v;
}

long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

int integer(const Json& j, const std::string& path, const char* key, int fallback, int lo, int hi) {
  if (!j.contains(key)) return fallback;
  const long long v = integer(j.at(key), child(path, key));
  if (v < lo || v > hi)
    throw ConfigError(child(path, key),
                      "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::uint64_t seed_of(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) return 0;
  const Json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError(child(path, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Point point(const Json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ConfigError(path, "expected an array of " + std::to_string(n) + " numbers");
  Point p{};
  for (int i = 0; i < n; ++i) p[i] = number(j[i], child(path, i));
  return p;
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], child(path, i)));
  return out;
}

Mat matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxMatrixDim))
    throw ConfigError(path, "expected a square array of rows, size 1.." +
                                std::to_string(kMaxMatrixDim));
  const int d = static_cast<int>(j.size());
  Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    const std::string rp = child(path, i);
    const auto row = numbers(j[i], rp);
    if (static_cast<int>(row.size()) != d) throw ConfigError(rp, "row length differs from size");
    for (int k = 0; k < d; ++k) m(i, k) = row[k];
  }
  return m;
}

std::vector<Weight> weight_list(const Json& j, int n, const std::string& path) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxMatrixDim))
    throw ConfigError(path, "expected 1.." + std::to_string(kMaxMatrixDim) + " weights");
  std::vector<Weight> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_weight(j[i], n, child(path, i)));
  return out;
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(path, e.what());
  }
}

ScalarField parse_function(const Json& j, int n, const std::string& path, std::string& label) {
  const std::string type = text(need(j, path, "type"), child(path, "type"));
  if (type == "constant") {
    allow_keys(j, path, {"type", "value"});
    const double c = number(need(j, path, "value"), child(path, "value"));
    label = "constant " + std::to_string(c);
    return ScalarField::constant(c);
  }
  if (type == "indicator") {
    allow_keys(j, path, {"type", "cube"});
    const Cube q = parse_cube(need(j, path, "cube"), n, child(path, "cube"));
    label = "indicator of " + q.describe();
    return ScalarField::indicator(q);
  }
  if (type == "power") {
    const Weight w = parse_weight(j, n, path);
    label = w.label();
    return w.field();
  }
  throw ConfigError(child(path, "type"), "unknown function type '" + type + "'");
}

}  // namespace

ExponentFunction parse_exponent(const Json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = text(need(j, path, "type"), child(path, "type"));
  return wrap(path, [&] {
    if (type == "constant") {
      allow_keys(j, path, {"type", "p"});
      return ExponentFunction::constant(number(need(j, path, "p"), child(path, "p")));
    }
    if (type == "piecewise") {
      allow_keys(j, path, {"type", "axis", "threshold", "below", "above"});
      return ExponentFunction::piecewise(integer(j, path, "axis", 0, 0, kMaxDim - 1),
                                         number(j, path, "threshold", 0.0),
                                         number(need(j, path, "below"), child(path, "below")),
                                         number(need(j, path, "above"), child(path, "above")));
    }
    if (type == "log_decay") {
      allow_keys(j, path, {"type", "base", "amplitude"});
      return ExponentFunction::log_decay(number(need(j, path, "base"), child(path, "base")),
                                         number(need(j, path, "amplitude"),
                                                child(path, "amplitude")));
    }
    throw ConfigError(child(path, "type"), "unknown exponent type '" + type + "'");
  });
}

Weight parse_weight(const Json& j, int n, const std::string& path) {
  require_object(j, path);
  const std::string type = text(need(j, path, "type"), child(path, "type"));
  return wrap(path, [&] {
    if (type == "constant") {
      allow_keys(j, path, {"type", "value"});
      return Weight::constant(positive(j, path, "value", 1.0));
    }
    if (type == "power") {
      allow_keys(j, path, {"type", "exponent", "center", "scale"});
      const Point c = j.contains("center") ? point(j.at("center"), n, child(path, "center"))
                                           : Point{};
      return Weight::power(number(need(j, path, "exponent"), child(path, "exponent")), c,
                           positive(j, path, "scale", 1.0));
    }
    if (type == "product") {
      allow_keys(j, path, {"type", "factors"});
      const Json& fs = need(j, path, "factors");
      const std::string fp = child(path, "factors");
      if (!fs.is_array() || fs.empty()) throw ConfigError(fp, "expected a non-empty array");
      Weight w = parse_weight(fs[0], n, child(fp, std::size_t{0}));
      for (std::size_t i = 1; i < fs.size(); ++i)
        w = Weight::product(w, parse_weight(fs[i], n, child(fp, i)));
      return w;
    }
    throw ConfigError(child(path, "type"), "unknown weight type '" + type + "'");
  });
}

MatrixWeight parse_matrix_weight(const Json& j, int n, const std::string& path) {
  require_object(j, path);
  const std::string type = text(need(j, path, "type"), child(path, "type"));
  return wrap(path, [&] {
    if (type == "diagonal") {
      allow_keys(j, path, {"type", "entries"});
      return MatrixWeight::diagonal(weight_list(need(j, path, "entries"), n,
                                                child(path, "entries")));
    }
    if (type == "constant") {
      allow_keys(j, path, {"type", "matrix"});
      return MatrixWeight::constant(matrix(need(j, path, "matrix"), child(path, "matrix")));
    }
    if (type == "congruence") {
      allow_keys(j, path, {"type", "matrix", "entries"});
      const Mat a = matrix(need(j, path, "matrix"), child(path, "matrix"));
      auto entries = weight_list(need(j, path, "entries"), n, child(path, "entries"));
      if (static_cast<int>(entries.size()) != a.rows())
        throw ConfigError(child(path, "entries"), "count differs from matrix size");
      return MatrixWeight::congruence(a, std::move(entries));
    }
    if (type == "scalar_identity") {
      allow_keys(j, path, {"type", "weight", "d"});
      return MatrixWeight::scalar_identity(
          parse_weight(need(j, path, "weight"), n, child(path, "weight")),
          integer(j, path, "d", 2, 1, kMaxMatrixDim));
    }
    throw ConfigError(child(path, "type"), "unknown matrix weight type '" + type + "'");
  });
}

Cube parse_cube(const Json& j, int n, const std::string& path) {
  allow_keys(j, path, {"center", "side"});
  return wrap(path, [&] {
    return Cube(n, point(need(j, path, "center"), n, child(path, "center")),
                number(need(j, path, "side"), child(path, "side")));
  });
}

FamilySpec parse_family(const Json& j, int n, const std::string& path) {
  allow_keys(j, path,
             {"level_min", "level_max", "dyadic", "bounds", "max_per_level", "shrink_targets",
              "shrink_levels", "shrink_side", "special_count", "random_count", "seed", "cubes"});
  FamilySpec s;
  s.dim = n;
  s.level_min = integer(j, path, "level_min", 0, -30, 60);
  s.level_max = integer(j, path, "level_max", s.level_min, -30, 60);
  if (j.contains("dyadic")) {
    if (!j.at("dyadic").is_boolean()) throw ConfigError(child(path, "dyadic"), "expected a boolean");
    s.dyadic = j.at("dyadic").get<bool>();
  }
  if (j.contains("bounds")) {
    const std::string bp = child(path, "bounds");
    const Json& b = j.at("bounds");
    allow_keys(b, bp, {"lo", "hi"});
    s.bounds.dim = n;
    s.bounds.lo = point(need(b, bp, "lo"), n, child(bp, "lo"));
    s.bounds.hi = point(need(b, bp, "hi"), n, child(bp, "hi"));
  } else {
    s.bounds.dim = n;
  }
  s.max_per_level = integer(j, path, "max_per_level", 64, 1, 1 << 20);
  if (j.contains("shrink_targets")) {
    const std::string tp = child(path, "shrink_targets");
    const Json& t = j.at("shrink_targets");
    if (!t.is_array()) throw ConfigError(tp, "expected an array of points");
    for (std::size_t i = 0; i < t.size(); ++i) s.shrink_targets.push_back(point(t[i], n, child(tp, i)));
  }
  s.shrink_levels = integer(j, path, "shrink_levels", 0, 0, 60);
  s.shrink_side = positive(j, path, "shrink_side", 2.0);
  s.special_count = integer(j, path, "special_count", 0, 0, 64);
  s.random_count = integer(j, path, "random_count", 0, 0, 1 << 20);
  s.seed = seed_of(j, path, "seed");
  if (j.contains("cubes")) {
    const std::string cp = child(path, "cubes");
    const Json& c = j.at("cubes");
    if (!c.is_array()) throw ConfigError(cp, "expected an array of cubes");
    for (std::size_t i = 0; i < c.size(); ++i) s.explicit_cubes.push_back(parse_cube(c[i], n, child(cp, i)));
  }
  wrap(path, [&] {
    s.validate();
    return 0;
  });
  return s;
}

namespace {

Tolerances parse_tolerances(const Json& j, const std::string& path) {
  allow_keys(j, path, {"quadrature", "norm", "assertion", "max_depth"});
  Tolerances t;
  t.quadrature = positive(j, path, "quadrature", t.quadrature);
  t.norm = positive(j, path, "norm", t.norm);
  t.assertion = positive(j, path, "assertion", t.assertion);
  t.max_depth = integer(j, path, "max_depth", t.max_depth, 1, 80);
  return t;
}

RunParams parse_params(const Json& j, int n, const std::string& path) {
  allow_keys(j, path,
             {"r", "s", "s_grid", "c_budget", "cap", "directions", "held_out", "test_directions",
              "side", "delta", "c1", "lemma", "k_holder", "c_p", "t_grid", "random_fields", "p0",
              "function", "cube", "lambda", "direction", "mode", "r_cap", "search_tol",
              "iterations", "random_pairs", "expect_boundary", "input", "seed"});
  RunParams p;
  const auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    return number(j.at(key), child(path, key));
  };
  p.r = opt("r");
  p.s = opt("s");
  if (j.contains("s_grid")) p.s_grid = numbers(j.at("s_grid"), child(path, "s_grid"));
  for (std::size_t i = 0; i < p.s_grid.size(); ++i)
    if (!(p.s_grid[i] >= 1.0)) throw ConfigError(child(child(path, "s_grid"), i), "s must be >= 1");
  p.c_budget = positive(j, path, "c_budget", p.c_budget);
  p.cap = positive(j, path, "cap", p.cap);
  p.directions = integer(j, path, "directions", 0, 0, 100000);
  p.held_out = integer(j, path, "held_out", 64, 1, 100000);
  p.test_directions = integer(j, path, "test_directions", 2, 0, 1000);
  if (j.contains("side")) {
    const std::string side = text(j.at("side"), child(path, "side"));
    if (side == "RIGHT" || side == "right")
      p.side = Side::Right;
    else if (side == "LEFT" || side == "left")
      p.side = Side::Left;
    else
      throw ConfigError(child(path, "side"), "expected RIGHT or LEFT");
  }
  p.delta = opt("delta");
  p.c1 = opt("c1");
  if (j.contains("lemma")) {
    const std::string name = text(j.at("lemma"), child(path, "lemma"));
    p.lemma = wrap(child(path, "lemma"), [&] { return parse_lemma_id(name); });
  }
  p.lemma_params.k_holder = positive(j, path, "k_holder", p.lemma_params.k_holder);
  if (p.r) p.lemma_params.r = *p.r;
  if (p.s) p.lemma_params.s = *p.s;
  p.lemma_params.c_p = number(j, path, "c_p", 0.0);
  if (j.contains("t_grid")) p.lemma_params.t_grid = numbers(j.at("t_grid"), child(path, "t_grid"));
  p.lemma_params.random_fields = integer(j, path, "random_fields", 6, 0, 10000);
  p.p0 = opt("p0");
  if (j.contains("function"))
    p.function = parse_function(j.at("function"), n, child(path, "function"), p.function_label);
  if (j.contains("cube")) p.cube = parse_cube(j.at("cube"), n, child(path, "cube"));
  p.lambda = opt("lambda");
  if (p.lambda && !(*p.lambda > 0.0)) throw ConfigError(child(path, "lambda"), "must be positive");
  if (j.contains("direction")) {
    const auto v = numbers(j.at("direction"), child(path, "direction"));
    if (v.empty() || v.size() > static_cast<std::size_t>(kMaxMatrixDim))
      throw ConfigError(child(path, "direction"), "expected 1.." + std::to_string(kMaxMatrixDim) +
                                                      " components");
    Vec e(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<int>(i)) = v[i];
    p.direction = e;
  }
  if (j.contains("mode")) {
    p.mode = text(j.at("mode"), child(path, "mode"));
    if (p.mode != "classical" && p.mode != "norm")
      throw ConfigError(child(path, "mode"), "expected classical or norm");
  }
  p.r_cap = positive(j, path, "r_cap", p.r_cap);
  p.search_tol = positive(j, path, "search_tol", p.search_tol);
  p.iterations = integer(j, path, "iterations", p.iterations, 1, 200);
  p.random_pairs = integer(j, path, "random_pairs", p.random_pairs, 0, 1000);
  p.expect_boundary = opt("expect_boundary");
  if (j.contains("input")) p.input = text(j.at("input"), child(path, "input"));
  p.seed = seed_of(j, path, "seed");
  p.lemma_params.seed = p.seed;
  return p;
}

}  // namespace

RunConfig parse_config(const Json& j) {
  allow_keys(j, "", {"dimension", "exponent", "weight", "matrix_weight", "family", "tolerances",
                     "params"});
  RunConfig c;
  c.raw = j;
  c.dimension = integer(j, "", "dimension", 1, 1, kMaxDim);
  if (j.contains("exponent")) c.exponent = parse_exponent(j.at("exponent"), "/exponent");
  if (j.contains("weight")) c.weight = parse_weight(j.at("weight"), c.dimension, "/weight");
  if (j.contains("matrix_weight"))
    c.matrix_weight = parse_matrix_weight(j.at("matrix_weight"), c.dimension, "/matrix_weight");
  if (j.contains("family")) c.family = parse_family(j.at("family"), c.dimension, "/family");
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j.at("tolerances"), "/tolerances");
  c.params = parse_params(j.contains("params") ? j.at("params") : Json::object(), c.dimension,
                          "/params");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

NormOptions RunConfig::norm_options() const {
  NormOptions o;
  o.tol = tolerances.norm;
  o.plan.rel_tol = tolerances.quadrature;
  o.plan.max_depth = tolerances.max_depth;
  return o;
}

MatrixOptions RunConfig::matrix_options() const {
  MatrixOptions o;
  // Inner norm stays tighter than the outer one (see MatrixOptions).
  o.outer.tol = std::max(tolerances.norm, 1e-8);
  o.outer.plan.rel_tol = std::max(tolerances.quadrature, 1e-8);
  o.outer.plan.max_depth = tolerances.max_depth;
  o.inner.plan.max_depth = tolerances.max_depth;
  o.cap = params.cap;
  return o;
}

ReducingOptions RunConfig::reducing_options() const {
  ReducingOptions o;
  o.directions = params.directions;
  o.held_out = params.held_out;
  o.seed = params.seed;
  o.norm = norm_options();
  return o;
}

CharOptions RunConfig::char_options() const { return CharOptions{norm_options(), params.cap}; }

const ExponentFunction& RunConfig::need_exponent() const {
  if (!exponent) throw ConfigError("/exponent", "missing");
  return *exponent;
}

const Weight& RunConfig::need_weight() const {
  if (!weight) throw ConfigError("/weight", "missing");
  return *weight;
}

const MatrixWeight& RunConfig::need_matrix_weight() const {
  if (!matrix_weight) throw ConfigError("/matrix_weight", "missing");
  return *matrix_weight;
}

CubeFamily RunConfig::need_family() const {
  if (!family) throw ConfigError("/family", "missing");
  return CubeFamily::generate(*family);
}

const Cube& RunConfig::need_cube() const {
  if (!params.cube) throw ConfigError("/params/cube", "missing");
  return *params.cube;
}

}  // namespace vexp
