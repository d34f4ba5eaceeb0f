// chernlab: pointwise curvature calculator and identity verifier for
// Hermitian metrics given as component formulas on a holomorphic chart.
//
// Exit codes: 0 success, 1 bad input (CLI, formula, metric file),
// 2 metric singular or not evaluable at the requested point, 3 a
// verification suite reported failures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chernlab/curvature.hpp"
#include "chernlab/metric_file.hpp"
#include "chernlab/verify.hpp"
#include "chernlab/zoo.hpp"

namespace {

using namespace chernlab;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

json vec_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (Complex z : v) out.push_back(cjson(z));
  return out;
}

json mat_json(const CMatrix& m) {
  json out = json::array();
  for (int i = 0; i < m.n; ++i) {
    json row = json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(cjson(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

json t3_json(const Tensor3& t) {
  json out = json::array();
  for (int i = 0; i < t.n; ++i) {
    json plane = json::array();
    for (int j = 0; j < t.n; ++j) {
      json row = json::array();
      for (int k = 0; k < t.n; ++k) row.push_back(cjson(t(i, j, k)));
      plane.push_back(std::move(row));
    }
    out.push_back(std::move(plane));
  }
  return out;
}

json t4_json(const Tensor4& t) {
  json out = json::array();
  for (int i = 0; i < t.n; ++i) {
    json cube = json::array();
    for (int j = 0; j < t.n; ++j) {
      json plane = json::array();
      for (int k = 0; k < t.n; ++k) {
        json row = json::array();
        for (int l = 0; l < t.n; ++l) row.push_back(cjson(t(i, j, k, l)));
        plane.push_back(std::move(row));
      }
      cube.push_back(std::move(plane));
    }
    out.push_back(std::move(cube));
  }
  return out;
}

struct Options {
  std::string zoo_name;
  std::string metric_path;
  int n = 2;
  bool n_given = false;

  std::string point_text;
  std::vector<std::string> param_texts;
  bool with_frame = false;
  std::string direction_text;

  std::string suite = "all";
  std::string quantity = "mixed";
  std::uint64_t seed = 20240801;
  int samples = 20000;
  int points = 20;
  int vectors = 20;
  int frames = 10;
  int threads = 0;
  std::string conformal_text;

  int k = 2;
  double alpha = 1.0;
  double beta = 1.0;

  std::string output_path;
  double tol_scale = 1.0;
};

void emit(const json& j, const std::string& output_path) {
  const std::string text = j.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw MetricFileError("cannot write output file '" + output_path + "'");
  out << text;
  if (!out) throw MetricFileError("failed writing output file '" + output_path + "'");
}

std::map<std::string, double> parse_params(const std::vector<std::string>& texts) {
  std::map<std::string, double> out;
  for (const std::string& text : texts) {
    std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
      throw MetricFileError("parameter override '" + text +
                            "' must look like name=value");
    std::string name = text.substr(0, eq);
    try {
      std::size_t used = 0;
      double value = std::stod(text.substr(eq + 1), &used);
      if (used != text.size() - eq - 1 || !std::isfinite(value))
        throw std::invalid_argument("trailing characters");
      out[name] = value;
    } catch (const std::exception&) {
      throw MetricFileError("parameter override '" + text +
                            "' has a bad numeric value");
    }
  }
  return out;
}

/// Resolves --zoo/--metric into a context; fills meta fields.
struct Source {
  MetricContext ctx;
  json meta;
};

Source open_source(const Options& opts) {
  if (!opts.zoo_name.empty() && !opts.metric_path.empty())
    throw MetricFileError("give either --zoo or --metric, not both");
  if (opts.zoo_name.empty() && opts.metric_path.empty())
    throw MetricFileError("one of --zoo or --metric is required");

  std::optional<MetricContext> ctx;
  if (!opts.zoo_name.empty()) {
    ZooEntry entry = zoo_metric(opts.zoo_name, opts.n);
    ctx = make_context(entry);
  } else {
    MetricFile file = load_metric_file(opts.metric_path);
    if (opts.n_given && opts.n != file.spec.n)
      throw MetricFileError("--n disagrees with the metric file dimension");
    ctx = make_context(file);
  }

  json meta{{"tool", "chernlab"},
            {"version", kVersion},
            {"metric", ctx->name},
            {"n", ctx->eval.dim()},
            {"metric_hash", metric_hash(ctx->eval.spec())},
            {"tol_scale", opts.tol_scale}};
  return Source{std::move(*ctx), std::move(meta)};
}

int run_compute(const Options& opts) {
  Source src = open_source(opts);
  const int n = src.ctx.eval.dim();

  if (opts.point_text.empty()) throw MetricFileError("--point is required");
  ChartPoint p;
  p.z = parse_point(opts.point_text);
  if (static_cast<int>(p.z.size()) != n)
    throw MetricFileError("--point has " + std::to_string(p.z.size()) +
                          " coordinates but the metric needs " +
                          std::to_string(n));
  p.params = parse_params(opts.param_texts);

  PointCurvature pc = curvature_at(src.ctx.eval, p);

  json out;
  out["meta"] = src.meta;
  json params = json::object();
  for (const auto& [key, value] : p.params) params[key] = value;
  out["point"] = json{{"z", vec_json(p.z)}, {"params", std::move(params)}};
  out["metric"] = json{{"g", mat_json(pc.jet.g.m)},
                       {"g_inverse", mat_json(pc.jet.g_up)}};
  out["curvature"] = json{{"r", t4_json(pc.r)}, {"max_abs", max_abs(pc.r)}};
  out["ricci"] = json{{"ric1", mat_json(pc.ricci.ric1)},
                      {"ric2", mat_json(pc.ricci.ric2)},
                      {"ric3", mat_json(pc.ricci.ric3)},
                      {"ric4", mat_json(pc.ricci.ric4)},
                      {"u", pc.ricci.u},
                      {"v", pc.ricci.v}};
  out["torsion"] = json{{"t", t3_json(pc.torsion.t)},
                        {"eta", vec_json(pc.torsion.eta)},
                        {"eta_norm_sq", pc.torsion.eta_norm_sq}};

  if (opts.with_frame) {
    UnitaryFrame frame = unitary_frame(pc.jet.g);
    CurvatureTensor rf = frame_curvature(pc.r, frame);
    json block{{"e", mat_json(frame.e)}, {"curvature", t4_json(rf)}};
    if (n == 2) {
      WeylMinus w = weyl_minus(rf);
      block["weyl_minus"] = json{{"w1", cjson(w.w1)},
                                 {"w2", cjson(w.w2)},
                                 {"w3", cjson(w.w3)},
                                 {"max_abs", w.max_abs}};
    }
    out["frame"] = std::move(block);
  }

  if (!opts.direction_text.empty()) {
    std::vector<Complex> x = parse_point(opts.direction_text);
    if (static_cast<int>(x.size()) != n)
      throw MetricFileError("--direction has " + std::to_string(x.size()) +
                            " coordinates but the metric needs " +
                            std::to_string(n));
    MixedCurvatureParams params_k{opts.k, opts.alpha, opts.beta};
    out["direction"] =
        json{{"x", vec_json(x)},
             {"h", holomorphic_sectional(pc.r, pc.jet.g, x)},
             {"mixed", json{{"k", opts.k},
                            {"alpha", opts.alpha},
                            {"beta", opts.beta},
                            {"value", mixed_curvature(pc.r, pc.ricci, pc.jet.g,
                                                      x, params_k)}}}};
  }

  emit(out, opts.output_path);
  return 0;
}

int run_verify(const Options& opts) {
  Source src = open_source(opts);

  RunConfig config;
  config.seed = opts.seed;
  config.samples = opts.samples;
  config.points = opts.points;
  config.vectors = opts.vectors;
  config.frames = opts.frames;
  config.threads = opts.threads;
  config.tol_scale = opts.tol_scale;
  config.params = MixedCurvatureParams{opts.k, opts.alpha, opts.beta};
  if (!opts.conformal_text.empty())
    config.conformal_factor =
        parse_expression(opts.conformal_text, src.ctx.eval.dim());

  SuiteResult result = run_suite(src.ctx, opts.suite, config);

  for (const IdentityReport& r : result.identities)
    std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.id
              << " metric=" << r.metric << " residual=" << r.max_residual
              << " tol=" << r.tolerance << "\n";
  for (const ScanReport& r : result.scans)
    std::cerr << "[SCAN] " << r.quantity << " metric=" << r.metric
              << " spread=" << r.spread << " verdict="
              << (r.verdict ? "true" : "false") << "\n";

  json out{{"meta", src.meta}, {"suite", suite_to_json(result)}};
  out["meta"]["seed"] = opts.seed;
  out["meta"]["suite_name"] = opts.suite;
  emit(out, opts.output_path);
  return result.pass ? 0 : 3;
}

int run_scan(const Options& opts) {
  Source src = open_source(opts);

  ScanReport report;
  if (opts.quantity == "mixed") {
    report = constancy_scan(src.ctx,
                            MixedCurvatureParams{opts.k, opts.alpha, opts.beta},
                            opts.points, opts.vectors, opts.seed, opts.threads,
                            opts.tol_scale);
  } else if (opts.quantity == "weyl") {
    report = self_duality_scan(src.ctx, opts.points, opts.seed, opts.threads,
                               opts.tol_scale);
  } else {
    throw MetricFileError("--quantity must be 'mixed' or 'weyl'");
  }

  std::cerr << "[SCAN] " << report.quantity << " metric=" << report.metric
            << " min=" << report.min << " max=" << report.max
            << " spread=" << report.spread << " verdict="
            << (report.verdict ? "true" : "false") << "\n";

  json out{{"meta", src.meta}, {"scan", to_json(report)}};
  out["meta"]["seed"] = opts.seed;
  emit(out, opts.output_path);
  return 0;
}

int run_zoo_list(const Options& opts) {
  json metrics = json::array();
  for (const std::string& name : zoo_names()) {
    ZooEntry entry = zoo_metric(name, 2);
    std::string dims = "1..8";
    if (name == "product_case2") dims = "2";
    if (name == "hopf") dims = "2..8";
    json row{{"name", entry.name},
             {"dimensions", dims},
             {"kahler", entry.tags.kahler},
             {"balanced", entry.tags.balanced},
             {"constant_h", entry.tags.constant_h},
             {"self_dual", entry.tags.self_dual},
             {"oracle", entry.has_oracle}};
    row["expected_h"] =
        entry.expected_h ? json(*entry.expected_h) : json();
    metrics.push_back(std::move(row));
  }
  emit(json{{"metrics", std::move(metrics)}}, opts.output_path);
  return 0;
}

int run_zoo_emit(const Options& opts) {
  ZooEntry entry = zoo_metric(opts.zoo_name, opts.n);
  emit(metric_to_json(entry.spec, zoo_region_hint(entry)), opts.output_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;

  if (const char* env = std::getenv("CHERNLAB_TOL")) {
    try {
      std::size_t used = 0;
      opts.tol_scale = std::stod(env, &used);
      if (used != std::string(env).size() || !(opts.tol_scale > 0.0) ||
          !std::isfinite(opts.tol_scale))
        throw std::invalid_argument("bad");
    } catch (const std::exception&) {
      std::cerr << "error: CHERNLAB_TOL must be a positive number\n";
      return 1;
    }
  }

  CLI::App app{"curvature calculator and identity verifier for Hermitian "
               "metrics on holomorphic charts"};
  app.require_subcommand(1);

  auto add_source = [&opts](CLI::App* cmd) {
    cmd->add_option("--zoo", opts.zoo_name, "built-in metric name");
    cmd->add_option("--metric", opts.metric_path, "metric description file");
    cmd->add_option("--n", opts.n, "chart dimension for --zoo")
        ->check(CLI::Range(1, 8))
        ->each([&opts](const std::string&) { opts.n_given = true; });
    cmd->add_option("--output", opts.output_path, "write the JSON report here");
  };
  auto add_mixed = [&opts](CLI::App* cmd) {
    cmd->add_option("--k", opts.k, "Ricci trace selector, 1..4")
        ->check(CLI::Range(1, 4));
    cmd->add_option("--alpha", opts.alpha, "Ricci weight");
    cmd->add_option("--beta", opts.beta, "sectional weight");
  };
  auto add_sampling = [&opts](CLI::App* cmd) {
    cmd->add_option("--seed", opts.seed, "base seed for all sampling");
    cmd->add_option("--points", opts.points, "chart points per scan")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--vectors", opts.vectors, "directions per point")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", opts.threads,
                    "worker threads (0 = hardware); results do not depend on it")
        ->check(CLI::Range(0, 64));
  };

  CLI::App* compute =
      app.add_subcommand("compute", "all curvature quantities at one point");
  add_source(compute);
  add_mixed(compute);
  compute->add_option("--point", opts.point_text,
                      "chart coordinates, e.g. \"0.3+0.1i, -0.2\"");
  compute->add_option("--param", opts.param_texts,
                      "parameter override name=value (repeatable)");
  compute->add_flag("--frame", opts.with_frame,
                    "include curvature in a unitary frame (and Weyl for n=2)");
  compute->add_option("--direction", opts.direction_text,
                      "also evaluate H and the mixed curvature along this vector");

  CLI::App* verify =
      app.add_subcommand("verify", "run identity suites against the metric");
  add_source(verify);
  add_mixed(verify);
  add_sampling(verify);
  verify->add_option("--suite", opts.suite,
                     "pointwise | conformal | average | consequences | all");
  verify->add_option("--samples", opts.samples, "Monte-Carlo samples")
      ->check(CLI::PositiveNumber);
  verify->add_option("--frames", opts.frames, "random unitary frames")
      ->check(CLI::Range(0, 1000));
  verify->add_option("--conformal", opts.conformal_text,
                     "conformal factor F (replaces the built-in battery)");

  CLI::App* scan = app.add_subcommand(
      "scan", "sample one scalar quantity over points and directions");
  add_source(scan);
  add_mixed(scan);
  add_sampling(scan);
  scan->add_option("--quantity", opts.quantity, "mixed | weyl");

  CLI::App* zoo = app.add_subcommand("zoo", "built-in metric catalog");
  zoo->require_subcommand(1);
  CLI::App* zoo_list = zoo->add_subcommand("list", "list built-in metrics");
  zoo_list->add_option("--output", opts.output_path, "write the JSON here");
  CLI::App* zoo_emit =
      zoo->add_subcommand("emit", "write a built-in metric as a metric file");
  zoo_emit->add_option("name", opts.zoo_name, "built-in metric name")
      ->required();
  zoo_emit->add_option("--n", opts.n, "chart dimension")->check(CLI::Range(1, 8));
  zoo_emit->add_option("--output", opts.output_path, "write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (compute->parsed()) return run_compute(opts);
    if (verify->parsed()) return run_verify(opts);
    if (scan->parsed()) return run_scan(opts);
    if (zoo_list->parsed()) return run_zoo_list(opts);
    if (zoo_emit->parsed()) return run_zoo_emit(opts);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const SingularMatrixError& e) {
    std::cerr << "error: metric unusable at the requested point: " << e.what()
              << "\n";
    return 2;
  } catch (const EvalError& e) {
    std::cerr << "error: evaluation failed: " << e.what() << " in "
              << e.subtree() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << " (offset " << e.offset() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
