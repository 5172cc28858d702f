#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vexp/averaging.hpp"
#include "vexp/matrix_characteristic.hpp"
#include "vexp/scalar_lemmas.hpp"

namespace vexp {

using Json = nlohmann::json;

// Schema violation; path is a JSON pointer to the offending entry.
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : InvalidInput(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Tolerances {
  double quadrature = 1e-10;  // relative, per adaptive cell
  double norm = 1e-8;         // relative bisection bracket
  double assertion = 1e-6;
  int max_depth = 40;
};

struct RunParams {
  std::optional<double> r;
  std::optional<double> s;
  std::vector<double> s_grid;
  double c_budget = 2.0;
  double cap = 1e12;
  int directions = 0;
  int held_out = 64;
  int test_directions = 2;
  Side side = Side::Right;
  std::optional<double> delta;
  std::optional<double> c1;
  std::optional<LemmaId> lemma;
  LemmaParams lemma_params;
  std::optional<double> p0;
  std::optional<ScalarField> function;
  std::string function_label;
  std::optional<Cube> cube;
  std::optional<double> lambda;
  std::optional<Vec> direction;
  std::string mode = "classical";  // rh-verify: classical | norm
  double r_cap = 4.0;
  double search_tol = 1e-3;
  int iterations = 20;
  int random_pairs = 8;
  std::optional<double> expect_boundary;
  std::string input;  // report: path of a JSON report
  std::uint64_t seed = 0;
};

struct RunConfig {
  Json raw;
  int dimension = 1;
  std::optional<ExponentFunction> exponent;
  std::optional<Weight> weight;
  std::optional<MatrixWeight> matrix_weight;
  std::optional<FamilySpec> family;
  Tolerances tolerances;
  RunParams params;

  NormOptions norm_options() const;
  MatrixOptions matrix_options() const;
  ReducingOptions reducing_options() const;
  CharOptions char_options() const;

  // Accessors that raise ConfigError naming the missing key.
  const ExponentFunction& need_exponent() const;
  const Weight& need_weight() const;
  const MatrixWeight& need_matrix_weight() const;
  CubeFamily need_family() const;
  const Cube& need_cube() const;
};

RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

// Component parsers, exposed for tests. `path` prefixes error messages.
ExponentFunction parse_exponent(const Json& j, const std::string& path);
Weight parse_weight(const Json& j, int n, const std::string& path);
MatrixWeight parse_matrix_weight(const Json& j, int n, const std::string& path);
Cube parse_cube(const Json& j, int n, const std::string& path);
FamilySpec parse_family(const Json& j, int n, const std::string& path);

}  // namespace vexp
