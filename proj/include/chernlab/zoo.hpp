#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chernlab/curvature.hpp"
#include "chernlab/rng.hpp"

namespace chernlab {

enum class ZooKind { Flat, FubiniStudy, ComplexHyperbolic, Hopf, ProductCase2 };

struct ZooTags {
  bool kahler = false;
  bool balanced = false;
  bool constant_h = false;
  bool self_dual = false;  // meaningful for n = 2
};

/// Closed-form expectations at a point, expressed against the entry's
/// canonical unitary frame (which coincides with the triangular frame for
/// every zoo metric, all of them diagonal).
struct ZooOracleValues {
  CMatrix frame;  // frame matrix E
  Tensor4 frame_curvature;
  CMatrix frame_ric1, frame_ric2, frame_ric3, frame_ric4;
  double u = 0.0;
  double v = 0.0;
  double eta_norm_sq = 0.0;
};

struct ZooEntry {
  ZooKind kind = ZooKind::Flat;
  std::string name;
  MetricSpec spec;
  ZooTags tags;
  std::optional<double> expected_h;  // for constant-H entries
  bool has_oracle = false;           // hopf and product_case2 only

  bool in_valid_region(const ChartPoint& p) const;

  /// Deterministic sample from the valid region; `key` is the fully mixed
  /// per-sample seed.
  ChartPoint sample_point(std::uint64_t key) const;
};

std::vector<std::string> zoo_names();

/// Builds a named metric:
///   flat                delta_ij
///   fubini_study        delta_ij/(1+|z|^2) - zb_i z_j/(1+|z|^2)^2
///   complex_hyperbolic  delta_ij/(1-|z|^2) + zb_i z_j/(1-|z|^2)^2, |z| < 1
///   hopf                delta_ij/|z|^2, z != 0
///   product_case2       diag(2/(1-|z1|^2)^2, 2/(1+|z2|^2)^2), n = 2 only
/// Throws std::invalid_argument for unknown names or unsupported dimensions.
ZooEntry zoo_metric(const std::string& name, int n);

/// Closed-form values for entries with a pointwise oracle (hopf,
/// product_case2). Throws std::invalid_argument otherwise.
ZooOracleValues zoo_oracle(const ZooEntry& entry, const ChartPoint& p);

}  // namespace chernlab
