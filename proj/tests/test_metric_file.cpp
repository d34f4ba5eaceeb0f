#include <doctest.h>

#include <chernlab/metric_file.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace chernlab;

namespace {

nlohmann::json sample_file_json() {
  // Rows are built with json::array: a brace-initialized pair of strings
  // would be swallowed as a key/value object by the json initializer rules.
  nlohmann::json components = nlohmann::json::array(
      {nlohmann::json::array({"exp(s) + a*z1*zb1", "0.1*z2*zb1"}),
       nlohmann::json::array({"0.1*z1*zb2", "1 + log(1 + z2*zb2)"})});
  return nlohmann::json{
      {"name", "disc_bundle"},
      {"dimension", 2},
      {"parameters", {{"a", 1.5}, {"s", -0.25}}},
      {"components", components},
      {"valid_region", {{"box", 0.7}, {"min_norm_sq", 0.01}, {"max_norm_sq", 0.9}}}};
}

std::string temp_path(const char* stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("metric files round-trip bit for bit") {
  MetricFile file = parse_metric_json(sample_file_json());
  CHECK(file.spec.n == 2);
  CHECK(file.spec.name == "disc_bundle");
  CHECK(file.spec.parameter_defaults.at("a") == 1.5);
  CHECK(file.region.box == 0.7);
  CHECK(file.region.min_norm_sq == 0.01);
  CHECK(file.region.max_norm_sq == 0.9);

  const std::string path = temp_path("chernlab_roundtrip.json");
  save_metric_file(path, file.spec, file.region);
  MetricFile loaded = load_metric_file(path);

  // Formulas re-render identically, values match bit for bit, and a second
  // save produces identical bytes.
  ChartPoint p{{Complex(0.2, -0.1), Complex(0.3, 0.25)}, file.spec.parameter_defaults};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(to_string(loaded.spec.component(i, j)) ==
            to_string(file.spec.component(i, j)));
      CHECK(evaluate(loaded.spec.component(i, j), p) ==
            evaluate(file.spec.component(i, j), p));
    }
  }
  CHECK(metric_hash(loaded.spec) == metric_hash(file.spec));

  const std::string path2 = temp_path("chernlab_roundtrip2.json");
  save_metric_file(path2, loaded.spec, loaded.region);
  CHECK(slurp(path) == slurp(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("schema violations are rejected with specific messages") {
  auto expect_error = [](nlohmann::json j, const char* needle) {
    try {
      parse_metric_json(j);
      FAIL("expected MetricFileError for: ", j.dump());
    } catch (const MetricFileError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_error(nlohmann::json::array(), "top level must be an object");
  // A missing name falls back to "metric"; only an explicit empty one fails.
  CHECK(parse_metric_json({{"dimension", 1}, {"components", {{"1"}}}}).spec.name ==
        "metric");
  expect_error({{"name", ""}, {"dimension", 1}, {"components", {{"1"}}}},
               "name must be nonempty");
  expect_error({{"name", "x"}}, "dimension");
  expect_error({{"name", "x"}, {"dimension", 0}}, "dimension must be in 1..8");
  expect_error({{"name", "x"}, {"dimension", 9}}, "dimension must be in 1..8");
  expect_error({{"name", "x"}, {"dimension", 1}}, "components");
  expect_error({{"name", "x"},
                {"dimension", 2},
                {"components", nlohmann::json::array({nlohmann::json::array({"1", "0"})})}},
               "exactly 2");
  expect_error({{"name", "x"}, {"dimension", 1}, {"components", {{3}}}},
               "component (1, 1)");
  expect_error({{"name", "x"}, {"dimension", 1}, {"components", {{"1 +"}}}},
               "unexpected end of input");
  expect_error({{"name", "x"},
                {"dimension", 1},
                {"components", {{"1"}}},
                {"parameters", {{"z1", 2.0}}}},
               "invalid parameter name");
  expect_error({{"name", "x"},
                {"dimension", 1},
                {"components", {{"1"}}},
                {"parameters", {{"i", 2.0}}}},
               "invalid parameter name");
  expect_error({{"name", "x"},
                {"dimension", 1},
                {"components", {{"1"}}},
                {"parameters", {{"exp", 2.0}}}},
               "invalid parameter name");
  expect_error({{"name", "x"},
                {"dimension", 1},
                {"components", {{"1"}}},
                {"parameters", {{"a", "two"}}}},
               "must be a number");
  expect_error({{"name", "x"},
                {"dimension", 1},
                {"components", {{"1"}}},
                {"valid_region", {{"box", -1.0}}}},
               "box must be positive");
  expect_error({{"name", "x"},
                {"dimension", 1},
                {"components", {{"1"}}},
                {"valid_region", {{"min_norm_sq", 2.0}, {"max_norm_sq", 1.0}}}},
               "max_norm_sq must exceed min_norm_sq");

  // Formula errors carry the component position and the byte offset.
  try {
    parse_metric_json({{"name", "x"},
                       {"dimension", 2},
                       {"components",
                        nlohmann::json::array({nlohmann::json::array({"1", "z3"}),
                                               nlohmann::json::array({"0", "1"})})}});
    FAIL("expected MetricFileError");
  } catch (const MetricFileError& e) {
    std::string msg = e.what();
    CHECK(msg.find("component (1, 2)") != std::string::npos);
    CHECK(msg.find("out of range") != std::string::npos);
  }

  // Unknown top-level keys are tolerated so files can carry annotations.
  CHECK_NOTHROW(parse_metric_json({{"name", "x"}, {"dimension", 1},
                                   {"components", {{"1"}}}, {"note", "hi"}}));

  CHECK_THROWS_AS(load_metric_file("/nonexistent/metric.json"), MetricFileError);
}

TEST_CASE("complex scalar grammar") {
  CHECK(parse_complex("0.3") == Complex(0.3, 0.0));
  CHECK(parse_complex("-1.2i") == Complex(0.0, -1.2));
  CHECK(parse_complex("0.3+0.1i") == Complex(0.3, 0.1));
  CHECK(parse_complex("1e-2-2e-3i") == Complex(0.01, -0.002));
  CHECK(parse_complex("i") == Complex(0.0, 1.0));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("2i+1") == Complex(1.0, 2.0));
  CHECK(parse_complex("0.5i-1") == Complex(-1.0, 0.5));
  CHECK(parse_complex(" 1 + 2i ") == Complex(1.0, 2.0));
  CHECK(parse_complex("1.5e+2i") == Complex(0.0, 150.0));

  CHECK_THROWS_AS(parse_complex(""), MetricFileError);
  CHECK_THROWS_AS(parse_complex("z"), MetricFileError);
  CHECK_THROWS_AS(parse_complex("1+2"), MetricFileError);
  CHECK_THROWS_AS(parse_complex("--1"), MetricFileError);
  CHECK_THROWS_AS(parse_complex("1i1"), MetricFileError);

  auto pt = parse_point("0.3+0.1i, -0.2, 1i");
  REQUIRE(pt.size() == 3);
  CHECK(pt[0] == Complex(0.3, 0.1));
  CHECK(pt[1] == Complex(-0.2, 0.0));
  CHECK(pt[2] == Complex(0.0, 1.0));
  CHECK_THROWS_AS(parse_point(""), MetricFileError);
  CHECK_THROWS_AS(parse_point("0.1,,0.2"), MetricFileError);
}

TEST_CASE("metric hashes identify formulas, names and parameters") {
  ZooEntry flat = zoo_metric("flat", 2);
  // Frozen: the hash is part of the reporting contract, so a change to the
  // canonical rendering shows up here first.
  CHECK(metric_hash(flat.spec) == "23daed21326b8280");
  CHECK(metric_hash(zoo_metric("hopf", 2).spec) == "f1281a497a1b3a58");

  MetricSpec renamed = flat.spec;
  renamed.name = "flat2";
  CHECK(metric_hash(renamed) != metric_hash(flat.spec));

  MetricSpec reparam = flat.spec;
  reparam.parameter_defaults["a"] = 1.0;
  CHECK(metric_hash(reparam) != metric_hash(flat.spec));

  MetricSpec bent = perturb_component(flat.spec, 0, 1,
                                      parse_expression("0.001*z2*zb1", 2), true);
  CHECK(metric_hash(bent) != metric_hash(flat.spec));
  CHECK(metric_hash(flat.spec) == metric_hash(zoo_metric("flat", 2).spec));
}

TEST_CASE("sampling contexts honor the region and reject impossible ones") {
  MetricFile file = parse_metric_json(sample_file_json());
  MetricContext ctx = make_context(file);
  CHECK(ctx.name == "disc_bundle");
  CHECK_FALSE(ctx.zoo.has_value());
  for (std::uint64_t key = 0; key < 30; ++key) {
    ChartPoint p = ctx.sampler(key);
    double norm_sq = 0.0;
    for (auto c : p.z) {
      CHECK(std::abs(c.real()) <= 0.7);
      CHECK(std::abs(c.imag()) <= 0.7);
      norm_sq += std::norm(c);
    }
    CHECK(norm_sq > 0.01);
    CHECK(norm_sq < 0.9);
    // Parameter defaults live in the spec, not the sampled point: the
    // evaluator merges them, so a bare point evaluates fine.
    CHECK(p.params.empty());
    CHECK_NOTHROW(ctx.eval.metric_values(p));
    // Same key, same point.
    CHECK(ctx.sampler(key).z == p.z);
  }

  // A window no point can satisfy: min above the box's reach.
  MetricFile impossible = file;
  impossible.region.box = 0.1;
  impossible.region.min_norm_sq = 50.0;
  impossible.region.max_norm_sq = 60.0;
  MetricContext bad = make_context(impossible);
  CHECK_THROWS_AS(bad.sampler(0), MetricFileError);

  // A metric that has lost positivity everywhere the region can sample is
  // rejected after the attempt budget.
  nlohmann::json sig = {{"name", "sig"},
                        {"dimension", 1},
                        {"components", {{"1 - 2*z1*zb1"}}},
                        {"valid_region", {{"box", 2.0}, {"min_norm_sq", 0.6}}}};
  MetricContext never_pd = make_context(parse_metric_json(sig));
  CHECK_THROWS_AS(never_pd.sampler(3), MetricFileError);
}

TEST_CASE("zoo entries export with safe sampling windows") {
  for (const auto& name : zoo_names()) {
    ZooEntry entry = zoo_metric(name, 2);
    RegionSpec region = zoo_region_hint(entry);
    nlohmann::json j = metric_to_json(entry.spec, region);
    MetricFile file = parse_metric_json(j);
    MetricContext ctx = make_context(file);
    MetricEvaluator eval(entry.spec);
    for (std::uint64_t key = 0; key < 20; ++key) {
      ChartPoint p = ctx.sampler(key);
      // Every sampled point lies in the zoo entry's own valid region, so the
      // exported file is usable wherever the built-in is.
      CHECK(entry.in_valid_region(p));
      CHECK(check_hermitian_pd(eval.metric_values(p)).positive_definite);
    }
  }
}

TEST_CASE("exported json carries the component formulas verbatim") {
  ZooEntry hopf = zoo_metric("hopf", 2);
  nlohmann::json j = metric_to_json(hopf.spec, zoo_region_hint(hopf));
  CHECK(j["name"] == "hopf");
  CHECK(j["dimension"] == 2);
  REQUIRE(j["components"].size() == 2);
  CHECK(j["components"][0][0].get<std::string>() ==
        to_string(hopf.spec.component(0, 0)));
  CHECK(j.contains("valid_region"));
  CHECK_FALSE(j.contains("parameters"));  // omitted when empty

  MetricFile round = parse_metric_json(j);
  CHECK(metric_hash(round.spec) == metric_hash(hopf.spec));
}
