#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chernlab/curvature.hpp"
#include "chernlab/verify.hpp"

namespace chernlab {

class MetricFileError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sampling region for a metric loaded from a file. Points are drawn from
/// the box [-box, box]^2 per coordinate (real and imaginary parts), then
/// rejected unless min_norm_sq < |z|^2, |z|^2 < max_norm_sq (when set), and
/// the metric is Hermitian positive definite at the point. The region is a
/// safe sampling window, not the maximal domain of the metric.
struct RegionSpec {
  double box = 1.0;
  double min_norm_sq = 0.0;
  std::optional<double> max_norm_sq;
};

/// On-disk description of a metric:
///   {
///     "name": "example",
///     "dimension": 2,
///     "parameters": {"a": 1.5},           // optional
///     "components": [["1 + a*z1*zb1", "0"],
///                    ["0", "1"]],
///     "valid_region": {"box": 1.0,        // optional, all fields optional
///                      "min_norm_sq": 0.0,
///                      "max_norm_sq": 0.8}
///   }
/// components[i][j] is the formula for g_{i jbar}.
struct MetricFile {
  MetricSpec spec;
  RegionSpec region;
};

MetricFile parse_metric_json(const nlohmann::json& j);
MetricFile load_metric_file(const std::string& path);

nlohmann::json metric_to_json(const MetricSpec& spec, const RegionSpec& region);
void save_metric_file(const std::string& path, const MetricSpec& spec,
                      const RegionSpec& region);

/// Region used when writing a built-in metric to a file; chosen so that
/// rejection sampling inside it stays within the metric's chart.
RegionSpec zoo_region_hint(const ZooEntry& entry);

/// Verifier context for a loaded metric; the sampler rejection-samples the
/// file's region. Throws MetricFileError if 1000 attempts at one key fail to
/// produce a positive definite point.
MetricContext make_context(const MetricFile& file);

/// FNV-1a over the canonical rendering (name, dimension, component
/// formulas, parameter defaults); identifies a metric in report metadata.
std::string metric_hash(const MetricSpec& spec);

/// Complex scalar in calculator syntax: "0.3", "-1.2i", "0.3+0.1i",
/// "1e-2-2e-3i", "i". Throws MetricFileError on anything else.
Complex parse_complex(const std::string& text);

/// Comma-separated list of complex scalars, e.g. "0.3+0.1i, -0.2, 1i".
std::vector<Complex> parse_point(const std::string& text);

}  // namespace chernlab
