#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "chernlab/curvature.hpp"
#include "chernlab/zoo.hpp"

namespace chernlab {

/// Outcome of checking one identity over a set of points.
struct IdentityReport {
  std::string id;
  std::string metric;
  int points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string notes;
};

/// Summary statistics of a sampled scalar quantity.
struct ScanReport {
  std::string quantity;
  std::string metric;
  int samples = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double spread = 0.0;  // max - min
  std::uint64_t seed = 0;
  double threshold = 0.0;
  bool verdict = false;  // meaning depends on the scan (constant / self-dual)
};

struct ClassifyResult {
  std::string metric;
  int points = 0;
  std::uint64_t seed = 0;
  double max_torsion = 0.0;
  double max_eta = 0.0;
  double max_curvature = 0.0;
  std::optional<double> max_weyl_minus;  // n = 2 only
  bool kahler = false;
  bool balanced = false;
  bool chern_flat = false;
  std::optional<bool> self_dual;
};

nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const ScanReport& r);
nlohmann::json to_json(const ClassifyResult& r);

/// Deterministic point source: maps a fully mixed per-sample key to a chart
/// point, so scans can parallelize without changing their output.
using PointSampler = std::function<ChartPoint(std::uint64_t key)>;

PointSampler zoo_sampler(const ZooEntry& entry);

/// A metric plus everything scans need to exercise it. For zoo metrics the
/// entry is kept so suites can use its tags and closed forms as expectations.
struct MetricContext {
  MetricEvaluator eval;
  PointSampler sampler;
  std::string name;
  std::optional<ZooEntry> zoo;
};

MetricContext make_context(const ZooEntry& entry);
MetricContext make_context(MetricSpec spec, PointSampler sampler);

struct RunConfig {
  std::uint64_t seed = 20240801;
  int samples = 20000;  // Monte-Carlo sample count
  int points = 20;      // scan points
  int vectors = 20;     // directions per point
  int frames = 10;      // random unitary frames for frame-dependent checks
  int threads = 0;      // 0 = hardware
  double tol_scale = 1.0;
  MixedCurvatureParams params{2, 1.0, 1.0};
  std::optional<Expr> conformal_factor;
};

/// Draws a vector uniform on the g-unit sphere: a standard complex Gaussian
/// in the g-orthonormal frame, normalized.
std::vector<Complex> g_unit_vector(SplitMix64& rng, const UnitaryFrame& frame);

// ---------------------------------------------------------------------------
// Pointwise structural identities

/// Runs the unconditional identities at the given points: curvature reality,
/// derivative conjugation, trace consistency of u and v, Hermitian-ness of
/// the Ricci traces, and for surfaces the Ricci combination
/// ric1 + ric2 - (ric3 + ric4) = (u - v) g. Points where the torsion
/// vanishes additionally get the Kahler degeneracies (all Ricci traces
/// coincide; R symmetric under exchanging its unbarred or barred slots).
std::vector<IdentityReport> verify_pointwise_identities(
    const MetricEvaluator& eval, std::span<const ChartPoint> points,
    const std::string& metric_name, double tol_scale = 1.0);

/// The symmetrized first-Ricci identity satisfied by the standard metric on
/// the Hopf chart, checked in its canonical frame, together with the
/// pointwise match of u - v against |eta|^2.
std::vector<IdentityReport> verify_hopf_identities(
    const ZooEntry& entry, std::span<const ChartPoint> points,
    double tol_scale = 1.0);

/// Compares engine output against a zoo entry's closed-form oracle.
IdentityReport verify_zoo_oracle(const ZooEntry& entry,
                                 std::span<const ChartPoint> points,
                                 double tol_scale = 1.0);

// ---------------------------------------------------------------------------
// Sphere averages (Monte Carlo)

/// Per-sample values of the four Ricci pairings (real parts) and of H over
/// the g-unit sphere at one point. Sample i is drawn from a generator seeded
/// by (seed, i), so results do not depend on thread count.
struct SphereSamples {
  std::vector<double> ric[4];
  std::vector<double> h;
  std::uint64_t seed = 0;
};

SphereSamples sphere_samples(const PointCurvature& pc, const UnitaryFrame& frame,
                             int n_samples, std::uint64_t seed, int threads = 0);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(std::span<const double> values);

/// Monte-Carlo check of the closed-form sphere averages at one point:
///   avg Ric^(1,2)(Z,Zbar) = u/n          avg Re Ric^(3,4)(Z,Zbar) = v/n
///   avg H(Z)              = (u+v)/(n(n+1))
///   avg C^(k)             = (((n+1)a+b)u + bv)/(n(n+1))   (k = 1,2)
///                           (((n+1)a+b)v + bu)/(n(n+1))   (k = 3,4)
/// Passes when every estimate is within 4 standard errors (plus a small
/// absolute floor for exactly-constant integrands).
IdentityReport sphere_average_check(const MetricEvaluator& eval,
                                    const ChartPoint& p,
                                    const MixedCurvatureParams& params,
                                    int n_samples, std::uint64_t seed,
                                    int threads = 0,
                                    const std::string& metric_name = "");

/// Closed-form averages used by the check; exposed for tests.
double closed_form_average_ric(int k, double u, double v, int n);
double closed_form_average_h(double u, double v, int n);
double closed_form_average_c(const MixedCurvatureParams& params, double u,
                             double v, int n);

// ---------------------------------------------------------------------------
// Scans

/// Samples C^(k)_{alpha,beta} over points x directions. The verdict is
/// "constant": spread < 1e-7 (1 + |mean|) tol_scale.
ScanReport constancy_scan(const MetricContext& ctx,
                          const MixedCurvatureParams& params, int n_points,
                          int n_vectors, std::uint64_t seed, int threads = 0,
                          double tol_scale = 1.0);

/// Max anti-self-dual Weyl component per point (n = 2). The verdict is
/// "self-dual": max < 1e-7 tol_scale.
ScanReport self_duality_scan(const MetricContext& ctx, int n_points,
                             std::uint64_t seed, int threads = 0,
                             double tol_scale = 1.0);

ClassifyResult classify_metric(const MetricContext& ctx, int n_points,
                               std::uint64_t seed, int threads = 0,
                               double tol_scale = 1.0);

// ---------------------------------------------------------------------------
// Conformal checks

/// Componentwise check of the conformal transformation law
///   Rtilde_{i jbar k lbar} = e^{2F} (R_{i jbar k lbar} - 2 g_{k lbar} F_{i jbar})
/// with gtilde = e^{2F} g, where the left side is computed directly from the
/// transformed metric. For surfaces, also cross-checks the symmetrized
/// second-Ricci combination of gtilde against the conformally transformed
/// combination of g, which pins the Laplacian multiplier (4 alpha tr_g F'')
/// in the transformed identity; the measured multiplier is reported.
std::vector<IdentityReport> conformal_formula_check(
    const MetricEvaluator& eval, const Expr& f,
    std::span<const ChartPoint> points, const std::string& metric_name,
    double tol_scale = 1.0);

// ---------------------------------------------------------------------------
// Constant mixed-curvature consequences

/// Tensor identities that hold when C^(k)_{alpha,beta} is the constant c at
/// the sampled points:
///  - the symmetrized polarization
///      alpha sym4(ric_k (x) g) + beta sym4(R) = 2 c (g_{i jbar} g_{k lbar}
///                                                    + g_{i lbar} g_{k jbar})
///    (for k = 3, 4 the Hermitian part of the trace enters);
///  - for k = 2, its metric trace
///      [alpha(n+2)+beta] ric2 + beta ric1 + 2 beta Re ric3
///        = [2(n+1)c - alpha u] g;
///  - for surfaces, the frame combination
///      Rf(1,1,1,1)+Rf(2,2,2,2)-Rf(1,1,2,2)-Rf(2,2,1,1)-Rf(1,2,2,1)-Rf(2,1,1,2)
///    which must vanish in every unitary frame (it is 6 w3).
/// With expect_fail set, the polarization report passes only when its
/// residual is decisively nonzero — the negative control for metrics whose
/// mixed curvature is not constant.
std::vector<IdentityReport> constant_curvature_consequences(
    const MetricEvaluator& eval, const MixedCurvatureParams& params, double c,
    std::span<const ChartPoint> points, int random_frames, std::uint64_t seed,
    bool expect_fail, const std::string& metric_name, double tol_scale = 1.0);

// ---------------------------------------------------------------------------
// Suites

struct SuiteResult {
  std::vector<IdentityReport> identities;
  std::vector<ScanReport> scans;
  std::optional<ClassifyResult> classification;
  bool pass = true;
};

/// Named suites: "pointwise", "conformal", "average", "consequences", "all".
SuiteResult run_suite(const MetricContext& ctx, const std::string& suite,
                      const RunConfig& config);

nlohmann::json suite_to_json(const SuiteResult& result);

}  // namespace chernlab
