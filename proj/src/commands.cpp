#include "vexp/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>

namespace vexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> cube_columns(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("center_" + std::to_string(i));
  out.push_back("side");
  return out;
}

std::vector<double> cube_cells(const Cube& q) {
  std::vector<double> out;
  for (int i = 0; i < q.dim(); ++i) out.push_back(q.center()[i]);
  out.push_back(q.side());
  return out;
}

Json cube_json(const Cube& q) {
  std::vector<double> c(q.center().begin(), q.center().begin() + q.dim());
  return Json{{"center", c}, {"side", q.side()}};
}

double as_flag(bool b) { return b ? 1.0 : 0.0; }

void characteristic_rows(Report& rep, const CharacteristicReport& c, int n) {
  rep.columns = cube_columns(n);
  rep.columns.insert(rep.columns.end(), {"value", "divergent"});
  for (const auto& row : c.rows) {
    auto cells = cube_cells(row.cube);
    cells.push_back(row.value);
    cells.push_back(as_flag(row.divergent));
    rep.add_row(std::move(cells), row.note);
  }
  rep.summary["sup"] = c.sup() ? summary_number(*c.sup()) : Json(nullptr);
  rep.summary["divergent"] = c.divergent;
  if (c.divergent) rep.summary["divergence_reason"] = c.divergence_reason;
  rep.summary["cubes"] = c.rows.size();
  if (!c.rows.empty()) rep.summary["argmax"] = cube_json(c.rows[c.argmax].cube);
  rep.verdicts.push_back({"bounded_on_family", !c.divergent, c.divergence_reason});
}

const ScalarField& need_function(const RunConfig& cfg) {
  if (!cfg.params.function) throw ConfigError("/params/function", "missing");
  return *cfg.params.function;
}

std::vector<Cube> cubes_of(const RunConfig& cfg) {
  if (cfg.params.cube) return {*cfg.params.cube};
  return cfg.need_family().cubes();
}

Report cmd_norm(const RunConfig& cfg) {
  Report rep;
  const auto& p = cfg.need_exponent();
  const auto& f = need_function(cfg);
  const Cube& q = cfg.need_cube();
  const NormOptions opts = cfg.norm_options();
  rep.columns = {"norm", "lo", "hi", "modular_at_norm", "iterations", "rho"};
  const ModularCurve curve(f, p, q, opts.plan);
  const double rho = curve.at_one();
  if (!std::isfinite(rho)) {
    rep.add_row({kInf, kInf, kInf, kInf, 0, kInf}, "modular infinite for every lambda");
    rep.summary["norm"] = nullptr;
    rep.summary["divergent"] = true;
    rep.verdicts.push_back({"in_space", false, "|f|^p not integrable on " + q.describe()});
    return rep;
  }
  const NormResult nr = solve_norm(curve, opts);
  rep.add_row({nr.value, nr.lo, nr.hi, nr.modular_at_value, double(nr.iterations), rho});
  rep.summary["norm"] = nr.value;
  rep.summary["modular_at_norm"] = nr.modular_at_value;
  rep.summary["rho"] = rho;
  rep.summary["function"] = cfg.params.function_label;
  if (nr.value > 0.0) {
    const double m = nr.modular_at_value;
    rep.verdicts.push_back({"modular_at_norm", std::abs(m - 1.0) <= 1e-3,
                            "rho(f/||f||) = " + std::to_string(m)});
    // rho^{1/p+} <= ||f|| <= rho^{1/p-} when ||f|| > 1, sides swapped otherwise.
    const double a = std::pow(rho, 1.0 / p.p_plus()), b = std::pow(rho, 1.0 / p.p_minus());
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double slack = cfg.tolerances.assertion;
    rep.summary["sandwich"] = {lo, hi};
    rep.verdicts.push_back({"norm_modular_sandwich",
                            nr.value >= lo * (1 - slack) && nr.value <= hi * (1 + slack),
                            "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]"});
  }
  return rep;
}

Report cmd_modular(const RunConfig& cfg) {
  Report rep;
  const auto& p = cfg.need_exponent();
  const auto& f = need_function(cfg);
  const Cube& q = cfg.need_cube();
  const double lambda = cfg.params.lambda.value_or(1.0);
  const ModularCurve curve(f, p, q, cfg.norm_options().plan);
  const double v = curve(lambda);
  rep.columns = {"lambda", "modular"};
  rep.add_row({lambda, v});
  rep.summary["modular"] = summary_number(v);
  rep.summary["divergent"] = !std::isfinite(v);
  return rep;
}

Report cmd_char(const RunConfig& cfg) {
  Report rep;
  const auto c = app_characteristic(cfg.need_weight(), cfg.need_exponent(), cfg.need_family(),
                                    cfg.char_options());
  characteristic_rows(rep, c, cfg.dimension);
  return rep;
}

Report cmd_classical_char(const RunConfig& cfg) {
  Report rep;
  double p0;
  if (cfg.params.p0)
    p0 = *cfg.params.p0;
  else if (cfg.exponent && cfg.exponent->is_constant())
    p0 = cfg.exponent->p_minus();
  else
    throw ConfigError("/params/p0", "missing (or give a constant exponent)");
  if (!(p0 > 1.0)) throw ConfigError("/params/p0", "must exceed 1");
  const auto c = classical_ap_characteristic(cfg.need_weight(), p0, cfg.need_family(),
                                             cfg.char_options());
  characteristic_rows(rep, c, cfg.dimension);
  rep.summary["p0"] = p0;
  return rep;
}

AInftyEstimate fit(const RunConfig& cfg, const CubeFamily& family,
                   std::vector<SubsetPair>* pairs_out = nullptr) {
  auto pairs = sample_pairs(family, cfg.params.seed, cfg.params.random_pairs);
  auto est = ainfty_fit(cfg.need_weight(), cfg.need_exponent(), pairs, cfg.norm_options().plan);
  if (pairs_out) *pairs_out = std::move(pairs);
  return est;
}

Report cmd_ainfty(const RunConfig& cfg) {
  Report rep;
  const CubeFamily family = cfg.need_family();
  std::vector<SubsetPair> pairs;
  const AInftyEstimate est = fit(cfg, family, &pairs);
  rep.columns = cube_columns(cfg.dimension);
  rep.columns.insert(rep.columns.end(), {"e_fraction", "value"});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto cells = cube_cells(pairs[i].q);
    cells.push_back(pairs[i].e_measure() / pairs[i].q.measure());
    cells.push_back(est.values[i]);
    rep.add_row(std::move(cells));
  }
  rep.summary["delta"] = est.delta;
  rep.summary["c1"] = summary_number(est.c1);
  rep.summary["pairs"] = pairs.size();
  rep.summary["skipped"] = est.skipped.size();
  rep.summary["argmax"] = cube_json(pairs[est.argmax].q);
  rep.verdicts.push_back({"c1_finite", std::isfinite(est.c1), ""});
  return rep;
}

// r from (delta, c1) in params, else from a fit on the family.
double rh_from_ainfty(const RunConfig& cfg, Json& summary) {
  double delta, c1;
  if (cfg.params.delta && cfg.params.c1) {
    delta = *cfg.params.delta;
    c1 = *cfg.params.c1;
  } else {
    const AInftyEstimate est = fit(cfg, cfg.need_family());
    delta = est.delta;
    c1 = est.c1;
  }
  summary["delta"] = delta;
  summary["c1"] = summary_number(c1);
  return rh_exponent_from_ainfty(delta, c1, cfg.dimension);
}

Report cmd_rh_exponent(const RunConfig& cfg) {
  Report rep;
  const double r = rh_from_ainfty(cfg, rep.summary);
  const Json& c1 = rep.summary["c1"];
  rep.columns = {"delta", "c1", "r"};
  rep.add_row({rep.summary["delta"].get<double>(), c1.is_null() ? kInf : c1.get<double>(), r});
  rep.summary["r"] = r;
  rep.summary["n"] = cfg.dimension;
  return rep;
}

Report cmd_rh_verify(const RunConfig& cfg) {
  Report rep;
  const double r = cfg.params.r ? *cfg.params.r : rh_from_ainfty(cfg, rep.summary);
  const CubeFamily family = cfg.need_family();
  const RHCertificate cert =
      cfg.params.mode == "norm"
          ? verify_norm_rh(cfg.need_weight(), cfg.need_exponent(), r, family, cfg.params.c_budget,
                           cfg.norm_options())
          : verify_classical_rh(cfg.need_weight(), r, family, cfg.params.c_budget,
                                cfg.norm_options().plan);
  rep.columns = cube_columns(cfg.dimension);
  rep.columns.insert(rep.columns.end(), {"ratio", "passes"});
  for (const auto& row : cert.rows) {
    auto cells = cube_cells(row.cube);
    cells.push_back(row.ratio);
    cells.push_back(as_flag(row.passes));
    rep.add_row(std::move(cells));
  }
  rep.summary["r"] = r;
  rep.summary["mode"] = cfg.params.mode;
  rep.summary["budget"] = cert.budget;
  rep.summary["minimal_c"] = summary_number(cert.minimal_c);
  rep.summary["verified"] = cert.verified;
  std::size_t violations = 0;
  for (const auto& row : cert.rows) violations += !row.passes;
  rep.summary["violations"] = violations;
  if (!cert.rows.empty()) rep.summary["witness"] = cube_json(cert.witness_cube());
  rep.verdicts.push_back({"reverse_holder", cert.verified,
                          cert.verified ? "" : "worst cube " + cert.witness_cube().describe()});
  return rep;
}

Report cmd_rh_search(const RunConfig& cfg) {
  Report rep;
  rep.columns = {"r", "minimal_C"};
  rep.plot_x = "r";
  rep.plot_y = "minimal_C";
  try {
    const RHSearch s = empirical_rh_exponent(cfg.need_weight(), cfg.need_exponent(),
                                             cfg.params.c_budget, cfg.need_family(),
                                             cfg.params.search_tol, cfg.params.r_cap,
                                             cfg.params.iterations, cfg.norm_options());
    auto trail = s.trail;
    std::sort(trail.begin(), trail.end());
    for (const auto& [r, c] : trail) rep.add_row({r, c});
    rep.summary["r"] = s.r;
    rep.summary["hit_cap"] = s.hit_cap;
    rep.summary["budget"] = cfg.params.c_budget;
    rep.summary["monotonicity_violations"] = s.monotonicity_violations;
    std::string detail;
    for (const auto& v : s.monotonicity_violations) detail += v + "; ";
    rep.verdicts.push_back({"monotone_in_r", s.monotonicity_violations.empty(), detail});
  } catch (const NoCertificate& e) {
    rep.summary["r"] = nullptr;
    rep.verdicts.push_back({"certificate", false, e.what()});
  }
  return rep;
}

template <class Rows>
void openness_rows(Report& rep, const Rows& rows, std::optional<double> boundary, Side side,
                   const RunConfig& cfg) {
  rep.columns = {"s", "sup", "divergent"};
  rep.plot_x = "s";
  rep.plot_y = "sup";
  for (const auto& row : rows)
    rep.add_row({row.s, row.report.divergent ? kInf : row.report.sup_value,
                 as_flag(row.report.divergent)},
                row.report.divergence_reason);
  rep.summary["side"] = side == Side::Right ? "RIGHT" : "LEFT";
  rep.summary["boundary"] = boundary ? Json(*boundary) : Json(nullptr);
  if (cfg.params.expect_boundary) {
    const double b = *cfg.params.expect_boundary;
    bool ok = true;
    std::string detail;
    for (const auto& row : rows) {
      const bool should = row.s >= b;
      if (row.report.divergent != should) {
        ok = false;
        detail += "s=" + std::to_string(row.s) + (should ? " finite; " : " divergent; ");
      }
    }
    rep.verdicts.push_back({"boundary_matches", ok, detail});
  }
}

Report cmd_openness(const RunConfig& cfg) {
  Report rep;
  if (cfg.params.s_grid.empty()) throw ConfigError("/params/s_grid", "missing or empty");
  const CubeFamily family = cfg.need_family();
  if (cfg.matrix_weight) {
    const auto res = matrix_openness_sweep(*cfg.matrix_weight, cfg.need_exponent(),
                                           cfg.params.s_grid, family, cfg.params.side,
                                           cfg.matrix_options());
    openness_rows(rep, res.rows, res.boundary, res.side, cfg);
    rep.summary["matrix"] = true;
  } else {
    const auto res = openness_sweep(cfg.need_weight(), cfg.need_exponent(), cfg.params.s_grid,
                                    family, cfg.params.side, cfg.char_options());
    openness_rows(rep, res.rows, res.boundary, res.side, cfg);
    rep.summary["matrix"] = false;
  }
  return rep;
}

Report cmd_matrix_char(const RunConfig& cfg) {
  Report rep;
  const CubeFamily family = cfg.need_family();
  const auto& w = cfg.need_matrix_weight();
  const auto& p = cfg.need_exponent();
  const MatrixOptions mo = cfg.matrix_options();
  const auto c = matrix_app_characteristic(w, p, family, mo);
  characteristic_rows(rep, c, cfg.dimension);
  rep.summary["grid_nodes"] = c.grid_nodes;
  if (cfg.params.direction) {
    if (cfg.params.direction->size() != w.d())
      throw ConfigError("/params/direction", "length differs from the matrix size");
    // Reuses the scalar side only; [W] is already known.
    CharOptions co{mo.outer, mo.cap};
    const auto scalar = app_characteristic(w.direction_weight(*cfg.params.direction), p, family, co);
    const double k = cfg.params.lemma_params.k_holder;
    const bool ok = c.divergent || (!scalar.divergent &&
                                    scalar.sup_value <= 4.0 * k * c.sup_value * (1.0 + 1e-6));
    rep.summary["direction_characteristic"] =
        scalar.sup() ? summary_number(*scalar.sup()) : Json(nullptr);
    rep.verdicts.push_back({"matrix_to_scalar", ok,
                            "bound 4K[W] with K = " + std::to_string(k)});
  }
  return rep;
}

Report cmd_reduce(const RunConfig& cfg) {
  Report rep;
  const auto& w = cfg.need_matrix_weight();
  const auto& p = cfg.need_exponent();
  const ReducingOptions ro = cfg.reducing_options();
  const int d = w.d();
  const bool reduced = p.p_minus() > 1.0;
  rep.columns = cube_columns(cfg.dimension);
  rep.columns.insert(rep.columns.end(), {"sandwich_factor", "lower_slack"});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      rep.columns.push_back("R_" + std::to_string(i) + std::to_string(k));
  if (reduced) rep.columns.push_back("reduced_value");

  const double bound = std::sqrt(double(d)) * (1.0 + ro.tol);
  bool sandwich_ok = true, lower_ok = true;
  std::string sandwich_detail, lower_detail;
  double worst_factor = 0.0, worst_reduced = 0.0;
  for (const Cube& q : cubes_of(cfg)) {
    auto cells = cube_cells(q);
    try {
      const ReducingOperator r = reducing_operator(w, p, q, ro);
      cells.push_back(r.sandwich_factor);
      cells.push_back(r.lower_slack);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) cells.push_back(r.matrix(i, k));
      worst_factor = std::max(worst_factor, r.sandwich_factor);
      if (r.sandwich_factor > bound) {
        sandwich_ok = false;
        sandwich_detail += q.describe() + " ";
      }
      if (r.lower_slack > 1.0) {
        lower_ok = false;
        lower_detail += q.describe() + " ";
      }
      if (reduced) {
        const ReducingOperator rbar = reducing_operator(w.inverse(), p.conjugate(), q, ro);
        const double v = op_norm(r.matrix * rbar.matrix);
        cells.push_back(v);
        worst_reduced = std::max(worst_reduced, v);
      }
      rep.add_row(std::move(cells));
    } catch (const EllipsoidFitError& e) {
      cells.resize(rep.columns.size(), kInf);
      rep.add_row(std::move(cells), e.what());
      sandwich_ok = false;
      sandwich_detail += q.describe() + " ";
      worst_factor = kInf;
    } catch (const NotInSpace& e) {
      cells.resize(rep.columns.size(), kInf);
      rep.add_row(std::move(cells), e.what());
      worst_reduced = kInf;
    }
  }
  rep.summary["max_sandwich_factor"] = summary_number(worst_factor);
  rep.summary["sandwich_bound"] = bound;
  if (reduced) rep.summary["reduced_sup"] = summary_number(worst_reduced);
  rep.verdicts.push_back({"sandwich_upper", sandwich_ok, sandwich_detail});
  rep.verdicts.push_back({"sandwich_lower", lower_ok, lower_detail});
  return rep;
}

Report cmd_avg_norm(const RunConfig& cfg) {
  Report rep;
  const auto& w = cfg.need_matrix_weight();
  const auto& p = cfg.need_exponent();
  const NormOptions no = cfg.norm_options();
  const MatrixOptions mo = cfg.matrix_options();
  const ReducingOptions ro = cfg.reducing_options();
  const double k = cfg.params.lemma_params.k_holder;
  rep.columns = cube_columns(cfg.dimension);
  rep.columns.insert(rep.columns.end(), {"averaging_lb", "matrix_value"});
  if (cfg.params.s) rep.columns.push_back("aux_averaging_lb");
  bool ok = true;
  std::string detail;
  double sup_lb = 0.0;
  for (const Cube& q : cubes_of(cfg)) {
    const auto tests = default_test_fields(w, p, q, cfg.params.test_directions, cfg.params.seed);
    const AveragingBound b = averaging_norm_lower_bound(w, q, p, tests, no);
    const double mv = matrix_app_value(w, p, q, mo);
    auto cells = cube_cells(q);
    cells.push_back(b.value);
    cells.push_back(mv);
    if (cfg.params.s)
      cells.push_back(aux_averaging_norm_lower_bound(w, q, p, *cfg.params.s, tests, ro).value);
    rep.add_row(std::move(cells), tests.empty() ? "" : tests[b.argmax].label);
    sup_lb = std::max(sup_lb, b.value);
    if (std::isfinite(mv) && b.value > k * mv * (1.0 + cfg.tolerances.assertion)) {
      ok = false;
      detail += q.describe() + " ";
    }
  }
  rep.summary["sup_averaging_lb"] = summary_number(sup_lb);
  rep.summary["k_holder"] = k;
  rep.verdicts.push_back({"lower_bound_within_k_characteristic", ok, detail});
  return rep;
}

Report cmd_verify_lemma(const RunConfig& cfg) {
  Report rep;
  if (!cfg.params.lemma) throw ConfigError("/params/lemma", "missing");
  const CubeFamily family = cfg.need_family();
  const auto pairs = sample_pairs(family, cfg.params.seed, cfg.params.random_pairs);
  const LemmaReport lr = verify_scalar_lemma(*cfg.params.lemma, cfg.need_weight(),
                                             cfg.need_exponent(), family, pairs,
                                             cfg.params.lemma_params, cfg.norm_options());
  rep.columns = {"index", "sample"};
  for (std::size_t i = 0; i < lr.samples.size(); ++i) rep.add_row({double(i), lr.samples[i]});
  rep.summary["lemma"] = to_string(lr.id);
  rep.summary["fitted"] = summary_number(lr.fitted);
  rep.summary["structural"] = summary_number(lr.structural);
  rep.summary["detail"] = lr.detail;
  rep.summary["witnesses"] = lr.witnesses;
  std::string w;
  for (const auto& s : lr.witnesses) w += s + "; ";
  rep.verdicts.push_back({to_string(lr.id), lr.passes, lr.detail + (w.empty() ? "" : " " + w)});
  return rep;
}

// Re-ingests a JSON report and checks that its summary follows from its rows.
Report cmd_report(const RunConfig& cfg) {
  if (cfg.params.input.empty()) throw ConfigError("/params/input", "missing");
  std::ifstream in(cfg.params.input);
  if (!in) throw ConfigError("/params/input", "cannot open " + cfg.params.input);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("/params/input", std::string("malformed JSON: ") + e.what());
  }
  Report rep = report_from_json(j);
  const auto has = [&](const std::string& c) {
    return std::find(rep.columns.begin(), rep.columns.end(), c) != rep.columns.end();
  };
  if (has("value") && rep.summary.contains("sup")) {
    const std::size_t vc = rep.column("value");
    double sup = 0.0;
    bool inf = false;
    for (const auto& row : rep.rows) {
      if (std::isinf(row[vc])) inf = true;
      else if (!std::isnan(row[vc])) sup = std::max(sup, row[vc]);
    }
    const Json& s = rep.summary["sup"];
    const bool ok = s.is_null() ? (inf || rep.summary.value("divergent", false))
                                : (!inf && s.get<double>() == sup);
    rep.verdicts.push_back({"summary_reproducible", ok, "sup from rows " + std::to_string(sup)});
  }
  if (has("sup") && has("s") && rep.summary.contains("boundary")) {
    const std::size_t sc = rep.column("s"), uc = rep.column("sup");
    std::optional<double> b;
    for (const auto& row : rep.rows)
      if (std::isinf(row[uc])) {
        b = row[sc];
        break;
      }
    const Json& s = rep.summary["boundary"];
    const bool ok = s.is_null() ? !b : (b && *b == s.get<double>());
    rep.verdicts.push_back({"summary_reproducible", ok, ""});
  }
  return rep;
}

const std::map<std::string, std::function<Report(const RunConfig&)>>& table() {
  static const std::map<std::string, std::function<Report(const RunConfig&)>> t{
      {"norm", cmd_norm},
      {"modular", cmd_modular},
      {"char", cmd_char},
      {"classical-char", cmd_classical_char},
      {"ainfty", cmd_ainfty},
      {"rh-exponent", cmd_rh_exponent},
      {"rh-verify", cmd_rh_verify},
      {"rh-search", cmd_rh_search},
      {"openness", cmd_openness},
      {"matrix-char", cmd_matrix_char},
      {"reduce", cmd_reduce},
      {"avg-norm", cmd_avg_norm},
      {"verify-lemma", cmd_verify_lemma},
      {"report", cmd_report},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : table()) out.push_back(k);
    return out;
  }();
  return names;
}

Report run_command(const std::string& command, const RunConfig& config) {
  const auto it = table().find(command);
  if (it == table().end()) throw InvalidInput("unknown command '" + command + "'");
  const auto t0 = std::chrono::steady_clock::now();
  Report rep = it->second(config);
  if (command != "report") {
    rep.command = command;
    rep.config = config.raw;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace vexp
