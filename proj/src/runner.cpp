// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include "floquet/runner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include <fmt/format.h>

#include "floquet/error.hpp"
#include "floquet/floquet_transform.hpp"
#include "floquet/fourier.hpp"
#include "floquet/lambda.hpp"
#include "floquet/spectral.hpp"

namespace floquet {

namespace {

namespace fs = std::filesystem;
using cd = std::complex<double>;

// ---------------------------------------------------------------- parsing --

template <typename T>
T value_or(const Json& block, const char* key, T fallback) {
  return block.contains(key) ? block.at(key).get<T>() : fallback;
}

void check_keys(const Json& block, const std::set<std::string>& allowed, const std::string& where) {
  if (!block.is_object()) throw InvalidInput(fmt::format("'{}' must be an object", where));
  for (const auto& [key, value] : block.items()) {
    if (!allowed.count(key)) throw InvalidInput(fmt::format("unknown key '{}' in {}", key, where));
  }
}

cd parse_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InvalidInput(fmt::format("{}: expected a number or [re, im]", where));
}

RealVector parse_vector(const Json& j, int dimension, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dimension) {
    throw InvalidInput(fmt::format("{}: expected an array of {} numbers", where, dimension));
  }
  RealVector v(dimension);
  for (int l = 0; l < dimension; ++l) v[l] = j[static_cast<std::size_t>(l)].get<double>();
  return v;
}

FieldSpec parse_field(const Json& j, int dimension, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object() && j.size() == 1 && j.contains("expr")) {
    if (!j["expr"].is_string()) throw InvalidInput(fmt::format("{}: 'expr' must be a string", where));
    return parse_expr(j["expr"].get<std::string>(), dimension);
  }
  if (j.is_object() && j.size() == 1 && j.contains("fourier")) {
    std::vector<FourierTerm> terms;
    for (const Json& t : j["fourier"]) {
      if (!t.is_array() || t.size() != 2) throw InvalidInput(fmt::format("{}: Fourier terms are [mode, coeff]", where));
      FourierTerm term;
      if (t[0].is_number_integer()) {
        term.mode = {t[0].get<int>()};
      } else {
        term.mode = t[0].get<std::vector<int>>();
      }
      if (static_cast<int>(term.mode.size()) != dimension) {
        throw InvalidInput(fmt::format("{}: Fourier mode needs {} components", where, dimension));
      }
      term.coeff = parse_complex(t[1], where);
      terms.push_back(std::move(term));
    }
    return terms;
  }
  throw InvalidInput(fmt::format("{}: field must be a number, {{\"expr\": ...}} or {{\"fourier\": ...}}", where));
}

CoefficientSpec parse_coefficients(const Json& config, int n) {
  CoefficientSpec spec;
  if (!config.contains("a")) throw InvalidInput("config needs the diffusion matrix 'a'");
  const Json& a = config["a"];
  if (a.is_array()) {
    if (static_cast<int>(a.size()) != n) throw InvalidInput(fmt::format("'a' must be {}x{}", n, n));
    for (int i = 0; i < n; ++i) {
      const Json& row = a[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) throw InvalidInput(fmt::format("'a' must be {}x{}", n, n));
      std::vector<FieldSpec> fields;
      for (int j = 0; j < n; ++j) fields.push_back(parse_field(row[static_cast<std::size_t>(j)], n, fmt::format("a[{}][{}]", i, j)));
      spec.a.push_back(std::move(fields));
    }
  } else {
    // A single field means a(x) times the identity.
    const FieldSpec diag = parse_field(a, n, "a");
    for (int i = 0; i < n; ++i) {
      std::vector<FieldSpec> row;
      for (int j = 0; j < n; ++j) row.push_back(i == j ? diag : FieldSpec{0.0});
      spec.a.push_back(std::move(row));
    }
  }
  if (config.contains("b")) {
    const Json& b = config["b"];
    if (!b.is_array() || static_cast<int>(b.size()) != n) throw InvalidInput(fmt::format("'b' must have {} entries", n));
    for (int i = 0; i < n; ++i) spec.b.push_back(parse_field(b[static_cast<std::size_t>(i)], n, fmt::format("b[{}]", i)));
  }
  spec.c = config.contains("c") ? parse_field(config["c"], n, "c") : FieldSpec{0.0};
  return spec;
}

void require_positive(int v, const char* what) {
  if (v < 1) throw InvalidInput(fmt::format("{} must be positive, got {}", what, v));
}

void parse_blocks(RunConfig& cfg, const Json& j) {
  const int n = cfg.dimension;
  // bands
  cfg.bands.path.clear();
  const Json bands = j.value("bands", Json::object());
  check_keys(bands, {"path", "from", "to", "samples", "count"}, "bands");
  cfg.bands.count = value_or(bands, "count", 4);
  require_positive(cfg.bands.count, "bands.count");
  if (bands.contains("path")) {
    for (const Json& k : bands["path"]) cfg.bands.path.push_back(parse_vector(k, n, "bands.path"));
    if (cfg.bands.path.empty()) throw InvalidInput("bands.path is empty");
  } else {
    RealVector from = RealVector::Zero(n), to = RealVector::Zero(n);
    from[0] = -kPi;
    to[0] = kPi;
    if (bands.contains("from")) from = parse_vector(bands["from"], n, "bands.from");
    if (bands.contains("to")) to = parse_vector(bands["to"], n, "bands.to");
    const int samples = value_or(bands, "samples", 33);
    if (samples < 2) throw InvalidInput("bands.samples must be at least 2");
    for (int i = 0; i < samples; ++i) cfg.bands.path.push_back(from + (to - from) * (static_cast<double>(i) / (samples - 1)));
  }

  const Json lambda = j.value("lambda", Json::object());
  check_keys(lambda, {"lo", "hi", "samples"}, "lambda");
  cfg.lambda.lo = value_or(lambda, "lo", -2.0);
  cfg.lambda.hi = value_or(lambda, "hi", 2.0);
  cfg.lambda.samples = value_or(lambda, "samples", n == 1 ? 41 : 11);
  if (!(cfg.lambda.hi > cfg.lambda.lo) || cfg.lambda.samples < 2) throw InvalidInput("lambda needs lo < hi and samples >= 2");

  const Json xi = j.value("xi", Json::object());
  check_keys(xi, {"nodes", "directions"}, "xi");
  cfg.xi.nodes = value_or(xi, "nodes", 64);
  cfg.xi.directions = value_or(xi, "directions", 32);
  if (n == 2 && cfg.xi.nodes < 3) throw InvalidInput("xi.nodes must be at least 3");
  require_positive(cfg.xi.directions, "xi.directions");

  const Json synth = j.value("synth", Json::object());
  check_keys(synth, {"nodes", "measure", "rays", "radii", "samples", "residual"}, "synth");
  cfg.synth.nodes = value_or(synth, "nodes", 64);
  if (n == 2 && cfg.synth.nodes < 3) throw InvalidInput("synth.nodes must be at least 3");
  cfg.synth.rays = value_or(synth, "rays", 8);
  require_positive(cfg.synth.rays, "synth.rays");
  cfg.synth.measure = MeasureSpec{};
  const Json measure = synth.value("measure", Json{{"density", 1.0}});
  check_keys(measure, {"density", "atoms"}, "synth.measure");
  if (measure.contains("density")) {
    // A number is a constant density; an array lists per-node values (or one
    // value to broadcast), each a number or [re, im].
    const Json& d = measure["density"];
    if (d.is_array()) {
      for (const Json& v : d) cfg.synth.measure.density.push_back(parse_complex(v, "synth.measure.density"));
    } else {
      cfg.synth.measure.density.push_back(parse_complex(d, "synth.measure.density"));
    }
  }
  if (measure.contains("atoms")) {
    for (const Json& a : measure["atoms"]) {
      check_keys(a, {"s", "weight", "order"}, "synth.measure.atoms[]");
      Atom atom;
      atom.s = a.at("s").get<double>();
      atom.weight = a.contains("weight") ? parse_complex(a["weight"], "atom weight") : cd{1.0, 0.0};
      atom.order = value_or(a, "order", 0);
      cfg.synth.measure.atoms.push_back(atom);
    }
  }
  const Json radii = synth.value("radii", Json::object());
  check_keys(radii, {"max", "count"}, "synth.radii");
  const double rmax = value_or(radii, "max", 20.0);
  const int rcount = value_or(radii, "count", 20);
  if (!(rmax > 0.0 && rmax <= 50.0) || rcount < 2) throw InvalidInput("synth.radii needs 0 < max <= 50 and count >= 2");
  cfg.synth.radii.clear();
  for (int i = 1; i <= rcount; ++i) cfg.synth.radii.push_back(rmax * i / rcount);

  const Json samples = synth.value("samples", Json::object());
  check_keys(samples, {"lo", "hi", "count"}, "synth.samples");
  cfg.synth.sample_lo = samples.contains("lo") ? parse_vector(samples["lo"], n, "synth.samples.lo") : RealVector::Constant(n, -2.0);
  cfg.synth.sample_hi = samples.contains("hi") ? parse_vector(samples["hi"], n, "synth.samples.hi") : RealVector::Constant(n, 2.0);
  cfg.synth.samples = value_or(samples, "count", 11);
  if (cfg.synth.samples < 2) throw InvalidInput("synth.samples.count must be at least 2");

  const Json residual = synth.value("residual", Json::object());
  check_keys(residual, {"lo", "hi", "spacing"}, "synth.residual");
  cfg.synth.residual_lo = residual.contains("lo") ? parse_vector(residual["lo"], n, "synth.residual.lo") : RealVector::Constant(n, -1.0);
  cfg.synth.residual_hi = residual.contains("hi") ? parse_vector(residual["hi"], n, "synth.residual.hi") : RealVector::Constant(n, 1.0);
  cfg.synth.residual_spacing = value_or(residual, "spacing", n == 1 ? 0.05 : 0.1);
  if (!(cfg.synth.residual_spacing > 0.0 && cfg.synth.residual_spacing <= 0.25)) {
    throw InvalidInput("synth.residual.spacing must lie in (0, 0.25]");
  }

  const Json verify = j.value("verify", Json::object());
  check_keys(verify, {"samples", "pairs"}, "verify");
  cfg.verify.samples = value_or(verify, "samples", 50);
  cfg.verify.pairs = value_or(verify, "pairs", 20);
  require_positive(cfg.verify.samples, "verify.samples");
  require_positive(cfg.verify.pairs, "verify.pairs");
}

// ---------------------------------------------------------------- helpers --

std::vector<std::string> axis_columns(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int l = 1; l <= n; ++l) out.push_back(fmt::format("{}_{}", prefix, l));
  return out;
}

Json vec_json(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

template <typename T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, RealVector>) {
    return vec_json(*v);
  } else {
    return *v;
  }
}

// Tensor grid of `count` points per axis between lo and hi, x1 fastest.
std::vector<RealVector> tensor_points(const RealVector& lo, const RealVector& hi, int count) {
  const int n = static_cast<int>(lo.size());
  std::vector<RealVector> out;
  const int total = n == 1 ? count : count * count;
  for (int idx = 0; idx < total; ++idx) {
    RealVector x(n);
    int rest = idx;
    for (int l = 0; l < n; ++l) {
      x[l] = lo[l] + (hi[l] - lo[l]) * (rest % count) / (count - 1);
      rest /= count;
    }
    out.push_back(x);
  }
  return out;
}

std::vector<RealVector> envelope_rays(int n, int count) {
  std::vector<RealVector> out;
  if (n == 1) {
    out.push_back(RealVector::Constant(1, -1.0));
    out.push_back(RealVector::Constant(1, 1.0));
    return out;
  }
  for (int j = 0; j < count; ++j) {
    const double t = kTwoPi * j / count;
    RealVector w(2);
    w << std::cos(t), std::sin(t);
    out.push_back(w);
  }
  return out;
}

struct Context {
  const RunConfig& cfg;
  std::shared_ptr<const PeriodicCoefficients> coeffs;
  RunResult& result;

  void emit(const std::string& name, const std::string& contents) {
    const fs::path path = cfg.out_dir / name;
    write_file(path, contents);
    result.artifacts.push_back(path);
  }
};

Json sign_report_json(const SignReport& r) {
  return Json{{"min_c", r.min_c},
              {"c_nonnegative", r.c_nonnegative},
              {"c_claim", r.c_claim},
              {"c_identically_zero", r.c_identically_zero},
              {"drift_integral", optional_json(r.drift_integral)},
              {"gamma", optional_json(r.gamma)},
              {"gamma_xi", optional_json(r.gamma_xi)},
              {"lambda0", r.lambda0},
              {"xi_star", vec_json(r.xi_star)},
              {"lambda0_zero", r.lambda0_zero},
              {"drift_criterion_consistent", optional_json(r.drift_criterion_consistent)},
              {"gamma_criterion_consistent", optional_json(r.gamma_criterion_consistent)}};
}

// --------------------------------------------------------------- commands --

void run_bands(Context& ctx) {
  const int n = ctx.cfg.dimension;
  const BandStructure bs = band_functions(*ctx.coeffs, ctx.cfg.bands.path, ctx.cfg.bands.count);
  std::vector<std::string> cols = axis_columns("k", n);
  for (const auto& c : axis_columns("re_lambda", ctx.cfg.bands.count)) cols.push_back(c);
  for (const auto& c : axis_columns("im_lambda", ctx.cfg.bands.count)) cols.push_back(c);
  CsvTable table(ctx.cfg.meta(), cols);
  for (std::size_t i = 0; i < bs.path.size(); ++i) {
    std::vector<double> row(bs.path[i].data(), bs.path[i].data() + n);
    for (Eigen::Index j = 0; j < bs.bands[i].size(); ++j) row.push_back(bs.bands[i][j].real());
    for (Eigen::Index j = 0; j < bs.bands[i].size(); ++j) row.push_back(bs.bands[i][j].imag());
    table.add_row(row);
  }
  ctx.emit("bands.csv", table.str());
}

void run_lambda(Context& ctx) {
  const int n = ctx.cfg.dimension;
  const LambdaBlock& b = ctx.cfg.lambda;
  std::vector<std::string> cols = axis_columns("xi", n);
  cols.push_back("lambda");
  CsvTable table(ctx.cfg.meta(), cols);
  for (const RealVector& xi : tensor_points(RealVector::Constant(n, b.lo), RealVector::Constant(n, b.hi), b.samples)) {
    std::vector<double> row(xi.data(), xi.data() + n);
    row.push_back(lambda_at(*ctx.coeffs, xi).lambda);
    table.add_row(row);
  }
  ctx.emit("lambda_grid.csv", table.str());

  const LambdaMaximum max = maximize_lambda(*ctx.coeffs);
  const HessianResult hess = lambda_hessian(*ctx.coeffs, max.xi_star);
  const SignReport report = lambda0_sign_report(*ctx.coeffs, ctx.cfg.tol.zero);
  Json body{{"lambda0", max.lambda0},
            {"xi_star", vec_json(max.xi_star)},
            {"gradient_norm", max.gradient_norm},
            {"iterations", max.iterations},
            {"hessian_eigenvalues", vec_json(hess.eigenvalues)},
            {"lambda0_positive", max.lambda0 > ctx.cfg.tol.lambda0_positive},
            {"sign_report", sign_report_json(report)}};
  ctx.emit("lambda0.json", json_artifact(body, ctx.cfg.meta()));
}

XiSurface trace(const Context& ctx, int nodes) {
  const LambdaMaximum max = maximize_lambda(*ctx.coeffs);
  TraceOptions opts;
  opts.positivity_tol = ctx.cfg.tol.lambda0_positive;
  return trace_xi(*ctx.coeffs, max, nodes, opts);
}

void run_xi(Context& ctx) {
  const int n = ctx.cfg.dimension;
  const XiSurface surface = trace(ctx, ctx.cfg.xi.nodes);

  std::vector<std::string> cols{"param"};
  for (const auto& c : axis_columns("xi", n)) cols.push_back(c);
  cols.push_back("lambda_residual");
  CsvTable nodes(ctx.cfg.meta(), cols);
  double worst = 0.0;
  for (const XiNode& node : surface.nodes) {
    std::vector<double> row{node.param};
    for (int l = 0; l < n; ++l) row.push_back(node.xi[l]);
    row.push_back(node.lambda_residual);
    nodes.add_row(row);
    worst = std::max(worst, node.lambda_residual);
  }
  ctx.emit("xi_surface.csv", nodes.str());

  const IndicatorFn h(surface);
  std::vector<std::string> icols;
  if (n == 2) icols.push_back("theta");
  for (const auto& c : axis_columns("omega", n)) icols.push_back(c);
  icols.push_back("h");
  CsvTable ind(ctx.cfg.meta(), icols);
  if (n == 1) {
    for (double w : {-1.0, 1.0}) ind.add_row({w, h(RealVector::Constant(1, w))});
  } else {
    for (int j = 0; j < ctx.cfg.xi.directions; ++j) {
      const double t = kTwoPi * j / ctx.cfg.xi.directions;
      RealVector w(2);
      w << std::cos(t), std::sin(t);
      ind.add_row({t, w[0], w[1], h(w)});
    }
  }
  ctx.emit("indicator.csv", ind.str());

  Json hull = Json::array();
  for (std::size_t i : surface.hull) hull.push_back(i);
  const bool convex = surface.is_convex();
  const bool resolved = worst <= ctx.cfg.tol.xi_residual;
  Json body{{"center", vec_json(surface.center)},
            {"lambda0", surface.lambda0},
            {"node_count", surface.nodes.size()},
            {"hull", hull},
            {"max_lambda_residual", worst},
            {"invariants", {{"convex", convex}, {"lambda_residual_within_tolerance", resolved}}}};
  ctx.emit("xi_surface.json", json_artifact(body, ctx.cfg.meta()));
  if (!convex || !resolved) {
    ctx.result.exit_code = kExitInvariant;
    ctx.result.message = "invariant failure: traced surface is not convex or Λ residual exceeds tolerance";
  }
}

void run_synth(Context& ctx) {
  const int n = ctx.cfg.dimension;
  const SynthBlock& sb = ctx.cfg.synth;
  const XiSurface surface = trace(ctx, sb.nodes);
  const BlochFamily family(ctx.coeffs, surface);
  const MeasureOnXi mu = make_measure(sb.measure, surface);
  const SynthesizedSolution u = synthesize(family, mu);

  std::vector<std::string> cols = axis_columns("x", n);
  for (const char* c : {"re_u", "im_u", "log_abs_u"}) cols.emplace_back(c);
  CsvTable table(ctx.cfg.meta(), cols);
  for (const RealVector& x : tensor_points(sb.sample_lo, sb.sample_hi, sb.samples)) {
    const ScaledComplex v = u.eval_scaled(x);
    const cd value = v.value();
    std::vector<double> row(x.data(), x.data() + n);
    row.push_back(value.real());
    row.push_back(value.imag());
    row.push_back(v.log_abs());
    table.add_row(row);
  }
  ctx.emit("solution.csv", table.str());

  const IndicatorFn h(surface);
  const std::vector<EnvelopeRay> fits = envelope_fit(u, h, envelope_rays(n, sb.rays), sb.radii);
  Json rays = Json::array();
  bool bounded = true;
  for (const EnvelopeRay& r : fits) {
    const bool ok = r.skipped || r.max_excess <= 1e-6;
    bounded = bounded && ok;
    rays.push_back({{"omega", vec_json(r.omega)},
                    {"h", r.h},
                    {"slope", r.slope},
                    {"n_fit", r.n_fit},
                    {"log_c_fit", r.c_fit},
                    {"max_excess", r.skipped ? Json(nullptr) : Json(r.max_excess)},
                    {"skipped", r.skipped},
                    {"bound_holds", ok}});
  }
  Json envelope{{"declared_order", u.order()},
                {"radii", sb.radii},
                {"rays", rays},
                {"continuity_constant", family.continuity_constant()},
                {"all_bounded", bounded}};
  ctx.emit("envelope.json", json_artifact(envelope, ctx.cfg.meta()));

  const double h1 = sb.residual_spacing;
  const double r1 = residual_norm(*ctx.coeffs, u, sb.residual_lo, sb.residual_hi, h1);
  const double r2 = residual_norm(*ctx.coeffs, u, sb.residual_lo, sb.residual_hi, 0.5 * h1);
  const double ratio = r1 / r2;
  const bool second_order = (ratio >= 3.5 && ratio <= 4.5) || r1 <= 1e-10;
  Json residual{{"spacing", h1},
                {"residual", r1},
                {"residual_half_spacing", r2},
                {"ratio", ratio},
                {"second_order", second_order}};
  if (u.order() == 0) {
    bool nonnegative = true;
    for (const cd& w : mu.weights) nonnegative = nonnegative && w.imag() == 0.0 && w.real() >= 0.0;
    for (const Atom& a : mu.atoms) nonnegative = nonnegative && a.weight.imag() == 0.0 && a.weight.real() >= 0.0;
    const bool positive = positivity_check(u, tensor_points(sb.sample_lo, sb.sample_hi, sb.samples));
    residual["positive_measure"] = nonnegative;
    residual["positive_solution"] = positive;
    if (nonnegative && !positive) bounded = false;
  }
  ctx.emit("residual.json", json_artifact(residual, ctx.cfg.meta()));
  if (!bounded || !second_order) {
    ctx.result.exit_code = kExitInvariant;
    ctx.result.message = "invariant failure: growth envelope, positivity or residual order check failed";
  }
}

void run_verify(Context& ctx) {
  Json body = verify_properties(ctx.cfg);
  ctx.emit("verify.json", json_artifact(body, ctx.cfg.meta()));
  if (!body["all_pass"].get<bool>()) {
    ctx.result.exit_code = kExitInvariant;
    ctx.result.message = "invariant failure: see verify.json";
  }
}

// ----------------------------------------------------------- verify suite --

class PropertyList {
 public:
  void add(const std::string& name, bool pass, double value, double tolerance) {
    items_.push_back({{"name", name}, {"pass", pass}, {"status", pass ? "pass" : "fail"}, {"value", value},
                      {"tolerance", tolerance}});
    all_ = all_ && pass;
  }
  void not_applicable(const std::string& name, const std::string& reason) {
    items_.push_back({{"name", name}, {"pass", true}, {"status", "not_applicable"}, {"reason", reason},
                      {"value", nullptr}, {"tolerance", nullptr}});
  }
  // Runs `check`, recording a numerical failure as a failed property.
  void guarded(const std::string& name, double tolerance, const std::function<void()>& check) {
    try {
      check();
    } catch (const HypothesisViolation& e) {
      not_applicable(name, e.what());
    } catch (const Error& e) {
      items_.push_back({{"name", name}, {"pass", false}, {"status", "error"}, {"reason", e.what()},
                        {"value", nullptr}, {"tolerance", tolerance}});
      all_ = false;
    }
  }
  Json json() const { return Json{{"properties", items_}, {"all_pass", all_}, {"count", items_.size()}}; }

 private:
  Json items_ = Json::array();
  bool all_ = true;
};

double spectra_distance(const ComplexVector& a, const ComplexVector& b) {
  auto directed = [](const ComplexVector& from, const ComplexVector& to) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < from.size(); ++i) worst = std::max(worst, (to.array() - from[i]).abs().minCoeff());
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace

// ------------------------------------------------------------------ public --

Json Tolerances::to_json() const {
  return Json{{"lambda0_positive", lambda0_positive}, {"zero", zero}, {"xi_residual", xi_residual},
              {"invariant", invariant}};
}

ArtifactMeta RunConfig::meta() const { return {sha256, tol.to_json()}; }

RunConfig parse_config(Json j, const Overrides& overrides) {
  try {
    check_keys(j, {"dimension", "grid", "a", "b", "c", "seed", "tolerances", "out", "bands", "lambda", "xi", "synth",
                   "verify"},
               "config");
    RunConfig cfg;
    if (!j.contains("dimension")) throw InvalidInput("config needs 'dimension'");
    cfg.dimension = j["dimension"].get<int>();
    if (cfg.dimension != 1 && cfg.dimension != 2) throw InvalidInput(fmt::format("dimension unsupported: {}", cfg.dimension));
    const int n = cfg.dimension;

    if (overrides.grid) j["grid"] = std::vector<int>(static_cast<std::size_t>(n), *overrides.grid);
    if (overrides.seed) j["seed"] = *overrides.seed;
    if (overrides.tol) j["tolerances"]["lambda0_positive"] = *overrides.tol;
    if (overrides.out) {
      cfg.out_dir = *overrides.out;
    } else if (j.contains("out")) {
      cfg.out_dir = j["out"].get<std::string>();
    }
    j.erase("out");

    if (!j.contains("grid")) j["grid"] = std::vector<int>(static_cast<std::size_t>(n), n == 1 ? 32 : 16);
    cfg.grid = j["grid"].get<std::vector<int>>();
    cfg.seed = value_or<std::uint64_t>(j, "seed", 0);

    const Json tol = j.value("tolerances", Json::object());
    check_keys(tol, {"lambda0_positive", "zero", "xi_residual", "invariant"}, "tolerances");
    cfg.tol.lambda0_positive = value_or(tol, "lambda0_positive", cfg.tol.lambda0_positive);
    cfg.tol.zero = value_or(tol, "zero", cfg.tol.zero);
    cfg.tol.xi_residual = value_or(tol, "xi_residual", cfg.tol.xi_residual);
    cfg.tol.invariant = value_or(tol, "invariant", cfg.tol.invariant);
    for (double t : {cfg.tol.lambda0_positive, cfg.tol.zero, cfg.tol.xi_residual, cfg.tol.invariant}) {
      if (!(t > 0.0)) throw InvalidInput("tolerances must be positive");
    }

    cfg.coefficients = parse_coefficients(j, n);
    parse_blocks(cfg, j);
    // Validates grid and coefficients before any command runs.
    (void)make_coefficients(cfg.coefficients, build_grid(n, cfg.grid));

    cfg.canonical = j;
    cfg.sha256 = sha256_hex(j.dump());
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(fmt::format("config error: {}", e.what()));
  }
}

RunConfig load_config(const fs::path& path, const Overrides& overrides) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return parse_config(std::move(j), overrides);
}

RunResult run(const RunConfig& config, std::string_view command) {
  RunResult result;
  if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands)) {
    result.exit_code = kExitConfigError;
    result.message = fmt::format("unknown command '{}'", command);
    return result;
  }
  try {
    auto coeffs = std::make_shared<const PeriodicCoefficients>(
        make_coefficients(config.coefficients, build_grid(config.dimension, config.grid)));
    fs::create_directories(config.out_dir);
    Context ctx{config, coeffs, result};
    if (command == "bands") run_bands(ctx);
    if (command == "lambda") run_lambda(ctx);
    if (command == "xi") run_xi(ctx);
    if (command == "synth") run_synth(ctx);
    if (command == "verify") run_verify(ctx);
  } catch (const HypothesisViolation& e) {
    result.exit_code = kExitHypothesis;
    result.message = e.what();
  } catch (const InvalidInput& e) {
    result.exit_code = kExitConfigError;
    result.message = e.what();
  } catch (const Error& e) {
    result.exit_code = kExitInvariant;
    result.message = e.what();
  } catch (const fs::filesystem_error& e) {
    result.exit_code = kExitConfigError;
    result.message = e.what();
  }
  return result;
}

Json verify_properties(const RunConfig& cfg) {
  const int n = cfg.dimension;
  const double tol = cfg.tol.invariant;
  auto coeffs = std::make_shared<const PeriodicCoefficients>(
      make_coefficients(cfg.coefficients, build_grid(n, cfg.grid)));
  const PeriodicCoefficients& P = *coeffs;
  const TorusGrid& grid = P.grid();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_vec = [&](double lo, double hi) {
    RealVector v(n);
    for (int l = 0; l < n; ++l) v[l] = lo + (hi - lo) * unit(rng);
    return v;
  };
  PropertyList props;

  props.guarded("coefficient_resolution", 1e-10, [&] {
    double tail = std::max(fourier_tail(grid, P.c()), 0.0);
    for (int i = 0; i < n; ++i) {
      tail = std::max(tail, fourier_tail(grid, P.b(i)));
      for (int j = 0; j < n; ++j) tail = std::max(tail, fourier_tail(grid, P.a(i, j)));
    }
    props.add("coefficient_resolution", tail <= 1e-10, tail, 1e-10);
  });

  props.guarded("principal_eigenpair_residual", 1e-9, [&] {
    const LambdaSample s = lambda_at(P, RealVector::Zero(n));
    const double r = std::max(s.pair.right_residual, s.pair.left_residual);
    props.add("principal_eigenpair_residual", r <= 1e-9, r, 1e-9);
    const double ratio = std::min(s.pair.p.minCoeff() / s.pair.p.maxCoeff(), s.pair.psi.minCoeff() / s.pair.psi.maxCoeff());
    props.add("principal_eigenfunction_positivity", ratio > 0.0, ratio, 0.0);
  });

  props.guarded("quasimomentum_periodicity", tol, [&] {
    const RealVector k = random_vec(-kPi, kPi);
    RealVector shifted = k;
    shifted[0] += kTwoPi;
    const ComplexVector a = spectrum(assemble(P, k.cast<cd>()));
    const ComplexVector b = spectrum(assemble(P, shifted.cast<cd>()));
    const double d = spectra_distance(a, b) / (1.0 + a.cwiseAbs().maxCoeff());
    props.add("quasimomentum_periodicity", d <= tol, d, tol);
  });

  props.guarded("adjoint_lambda_reflection", tol, [&] {
    const AdjointResult adj = formal_adjoint(P);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const RealVector xi = random_vec(-1.0, 1.0);
      worst = std::max(worst, std::abs(lambda_at(adj.coefficients, xi).lambda - lambda_at(P, -xi).lambda));
    }
    props.add("adjoint_lambda_reflection", worst <= tol, worst, tol);
  });

  props.guarded("adjoint_dispersion_reflection", tol, [&] {
    const RealVector k = random_vec(-kPi, kPi);
    const DualDispersionReport rep = dual_dispersion_check(P, k.cast<cd>(), 6);
    const double scale = 1.0 + rep.adjoint_spectrum.cwiseAbs().maxCoeff();
    const double d = rep.max_distance / scale;
    props.add("adjoint_dispersion_reflection", d <= tol, d, tol);
  });

  std::optional<LambdaMaximum> max;
  props.guarded("lambda_gradient_at_maximum", tol, [&] {
    max = maximize_lambda(P);
    props.add("lambda_gradient_at_maximum", max->gradient_norm <= tol, max->gradient_norm, tol);
  });

  props.guarded("lambda_midpoint_concavity", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < cfg.verify.pairs; ++i) {
      const RealVector a = random_vec(-1.5, 1.5);
      const RealVector b = random_vec(-1.5, 1.5);
      const double mid = lambda_at(P, 0.5 * (a + b)).lambda;
      const double avg = 0.5 * (lambda_at(P, a).lambda + lambda_at(P, b).lambda);
      worst = std::max(worst, avg - mid);
    }
    props.add("lambda_midpoint_concavity", worst <= 1e-9, worst, 1e-9);
  });

  props.guarded("hessian_negative_definite", -1e-6, [&] {
    if (!max) throw NumericalFailure("no maximizer available");
    const double top = lambda_hessian(P, max->xi_star).eigenvalues.maxCoeff();
    props.add("hessian_negative_definite", top <= -1e-6, top, -1e-6);
  });

  props.guarded("lambda0_sign_criteria", cfg.tol.zero, [&] {
    const SignReport r = lambda0_sign_report(P, cfg.tol.zero);
    bool ok = !r.c_nonnegative || r.lambda0 >= -cfg.tol.zero;
    if (r.drift_criterion_consistent) ok = ok && *r.drift_criterion_consistent;
    if (r.gamma_criterion_consistent) ok = ok && *r.gamma_criterion_consistent;
    props.add("lambda0_sign_criteria", ok, r.lambda0, cfg.tol.zero);
  });

  // Properties that need Ξ.
  std::optional<XiSurface> surface;
  if (max && max->lambda0 > cfg.tol.lambda0_positive) {
    props.guarded("xi_lambda_residual", cfg.tol.xi_residual, [&] {
      TraceOptions opts;
      opts.positivity_tol = cfg.tol.lambda0_positive;
      surface = trace_xi(P, *max, n == 1 ? 2 : cfg.xi.nodes, opts);
      double worst = 0.0;
      for (const XiNode& node : surface->nodes) worst = std::max(worst, node.lambda_residual);
      props.add("xi_lambda_residual", worst <= cfg.tol.xi_residual, worst, cfg.tol.xi_residual);
      props.add("xi_convexity", surface->is_convex(), static_cast<double>(surface->hull.size()),
                static_cast<double>(surface->nodes.size()));
    });
  } else {
    const std::string reason = "theorem hypothesis violated: Λ₀ must be positive";
    for (const char* name : {"xi_lambda_residual", "xi_convexity", "bloch_multiplier_identity", "synthesis_linearity",
                             "positive_measure_positive_solution", "tube_exclusivity", "ode_completeness"}) {
      if (std::string(name) != "ode_completeness" || n == 1) props.not_applicable(name, reason);
    }
  }

  if (surface) {
    const BlochFamily family(coeffs, *surface);
    props.guarded("bloch_multiplier_identity", 1e-10, [&] {
      std::uniform_int_distribution<int> lattice(-3, 3);
      std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
      double worst = 0.0;
      for (int i = 0; i < 20; ++i) {
        const BlochMember& m = family.node(pick(rng));
        const RealVector x = random_vec(-2.0, 2.0);
        RealVector gamma(n);
        for (int l = 0; l < n; ++l) gamma[l] = lattice(rng);
        const cd lhs = bloch_eval(m, x + gamma).value();
        const cd rhs = std::exp(m.xi.dot(gamma)) * bloch_eval(m, x).value();
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      }
      props.add("bloch_multiplier_identity", worst <= 1e-10, worst, 1e-10);
    });

    props.guarded("synthesis_linearity", 1e-12, [&] {
      MeasureSpec s1, s2, s3;
      const cd alpha{0.7, -0.2}, beta{-1.3, 0.4};
      for (std::size_t i = 0; i < surface->nodes.size(); ++i) {
        const cd d1{unit(rng), 0.0}, d2{unit(rng), unit(rng)};
        s1.density.push_back(d1);
        s2.density.push_back(d2);
        s3.density.push_back(alpha * d1 + beta * d2);
      }
      const SynthesizedSolution u1 = synthesize(family, make_measure(s1, *surface));
      const SynthesizedSolution u2 = synthesize(family, make_measure(s2, *surface));
      const SynthesizedSolution u3 = synthesize(family, make_measure(s3, *surface));
      double worst = 0.0;
      for (int i = 0; i < 10; ++i) {
        const RealVector x = random_vec(-2.0, 2.0);
        const cd combo = alpha * u1(x) + beta * u2(x);
        worst = std::max(worst, std::abs(u3(x) - combo) / std::max(1.0, std::abs(combo)));
      }
      props.add("synthesis_linearity", worst <= 1e-12, worst, 1e-12);

      std::vector<RealVector> points;
      for (int i = 0; i < 20; ++i) points.push_back(random_vec(-3.0, 3.0));
      const bool positive = positivity_check(u1, points);
      props.add("positive_measure_positive_solution", positive, positive ? 1.0 : 0.0, 1.0);
    });

    props.guarded("tube_exclusivity", 1e-6, [&] {
      const TubeReport rep = tube_exclusivity_check(P, *surface, cfg.verify.samples, cfg.seed, 1e-6);
      props.add("tube_exclusivity", rep.passed(), rep.min_margin, 1e-6);
    });

    if (n == 1) {
      props.guarded("ode_completeness", 1e-6, [&] {
        const CompletenessResult r = ode_completeness_1d(family, unit(rng) * 2.0 - 1.0, unit(rng) * 2.0 - 1.0);
        props.add("ode_completeness", r.max_mismatch <= 1e-6, r.max_mismatch, 1e-6);
      });
    }
  }

  props.guarded("floquet_plancherel", 1e-12, [&] {
    CellField f{grid, {}};
    std::uniform_int_distribution<int> lattice(-3, 3);
    while (f.cells.size() < 7) {
      LatticePoint g{lattice(rng), n == 2 ? lattice(rng) : 0};
      ComplexVector v(static_cast<Eigen::Index>(grid.node_count()));
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cd{unit(rng) - 0.5, unit(rng) - 0.5};
      f.cells[g] = v;
    }
    const PlancherelResult pr = plancherel_check(f);
    props.add("floquet_plancherel", pr.relative_defect() <= 1e-12, pr.relative_defect(), 1e-12);

    const CellField back = floquet_inverse(floquet_forward(f, minimal_counts(f)));
    double worst = back.cells.size() == f.cells.size() ? 0.0 : 1.0;
    for (const auto& [g, v] : f.cells) {
      const auto it = back.cells.find(g);
      worst = std::max(worst, it == back.cells.end() ? 1.0 : cell_norm(it->second - v) / cell_norm(v));
    }
    props.add("floquet_roundtrip", worst <= 1e-12, worst, 1e-12);
  });

  return props.json();
}

}  // namespace floquet
