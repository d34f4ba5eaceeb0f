#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "chernlab/expr.hpp"
#include "chernlab/linalg.hpp"

namespace chernlab {

/// A Hermitian metric on a chart: component expressions g_{i jbar} indexed
/// row i, column j (0-based in code, 1-based in the surface syntax). The
/// Hermitian pairing components[i][j] == conj-swap(components[j][i]) is a
/// numeric property of the expressions, checked at sample points rather than
/// syntactically.
struct MetricSpec {
  int n = 0;
  std::string name;
  std::vector<Expr> components;  // n*n, row-major
  std::map<std::string, double> parameter_defaults;

  const Expr& component(int i, int j) const {
    return components[static_cast<std::size_t>(i) * n + j];
  }
  Expr& component(int i, int j) {
    return components[static_cast<std::size_t>(i) * n + j];
  }
};

/// First and second Wirtinger derivatives of the metric at a point, plus the
/// inverse. Index conventions:
///   g(k, l)        = g_{k lbar}
///   g_up(k, l)     = g^{k lbar}   (so sum_l g(i, l) g_up(j, l) = delta_ij
///                                  and sum_k g(k, j) g_up(k, l) = delta_jl)
///   dg(i, k, l)    = d_i g_{k lbar}
///   dgb(j, k, l)   = dbar_j g_{k lbar}
///   ddg(i, j, k, l)= d_i dbar_j g_{k lbar}
struct MetricJet {
  HermitianMatrix g;
  CMatrix g_up;
  Tensor3 dg;
  Tensor3 dgb;
  Tensor4 ddg;

  int dim() const { return g.dim(); }
};

/// Differentiates all metric components once, then evaluates the jet at any
/// number of points. Construction is the expensive step; jet() is pure and
/// safe to call concurrently.
class MetricEvaluator {
 public:
  explicit MetricEvaluator(MetricSpec spec);

  const MetricSpec& spec() const { return spec_; }
  int dim() const { return spec_.n; }

  MetricJet jet(const ChartPoint& p) const;

  /// Metric values only (no derivatives); used by samplers to test
  /// positivity cheaply.
  CMatrix metric_values(const ChartPoint& p) const;

 private:
  MetricSpec spec_;
  std::vector<Expr> dg_;   // n * n * n,   (i, k, l)
  std::vector<Expr> dgb_;  // n * n * n,   (j, k, l)
  std::vector<Expr> ddg_;  // n^4,         (i, j, k, l)
};

/// One-off convenience wrapper around MetricEvaluator::jet.
MetricJet metric_jet(const MetricSpec& spec, const ChartPoint& p);

/// Chern curvature in chart coordinates, direction pair first:
///   R(i, j, k, l) = R_{i jbar k lbar}
///     = -d_i dbar_j g_{k lbar} + g^{p qbar} (d_i g_{k qbar}) (dbar_j g_{p lbar}).
using CurvatureTensor = Tensor4;

CurvatureTensor chern_curvature(const MetricJet& jet);

/// The four metric traces of the Chern curvature and the two scalars.
/// Matrices are stored so that M(a, b) pairs with X^a conj(X^b):
///   ric1(i, j) = g^{k lbar} R_{i jbar k lbar}
///   ric2(k, l) = g^{i jbar} R_{i jbar k lbar}
///   ric3(i, l) = g^{k jbar} R_{i jbar k lbar}
///   ric4(k, j) = g^{i lbar} R_{i jbar k lbar}
///   u = tr_g ric1 = tr_g ric2,  v = tr_g ric3 = tr_g ric4.
struct RicciSummary {
  CMatrix ric1, ric2, ric3, ric4;
  double u = 0.0;
  double v = 0.0;
};

RicciSummary ricci_summary(const CurvatureTensor& r, const MetricJet& jet);

/// Chern torsion:
///   t(k, i, j)  = T^k_ij = g^{k lbar} (d_i g_{j lbar} - d_j g_{i lbar})
///   eta_i       = sum_k T^k_ik
///   eta_norm_sq = g^{i jbar} eta_i conj(eta_j).
struct TorsionData {
  Tensor3 t;
  std::vector<Complex> eta;
  double eta_norm_sq = 0.0;
};

TorsionData torsion_data(const MetricJet& jet);

/// R(X, Xbar, Y, Ybar) extended sesquilinearly from coordinates.
Complex curvature_form(const CurvatureTensor& r, std::span<const Complex> x,
                       std::span<const Complex> y);

/// |X|^2_g = g_{i jbar} X^i conj(X^j).
double metric_norm_sq(const HermitianMatrix& g, std::span<const Complex> x);

/// Holomorphic sectional curvature H(X) = R(X,Xbar,X,Xbar) / |X|^4_g.
/// Scale invariant; throws std::invalid_argument on a zero vector.
double holomorphic_sectional(const CurvatureTensor& r, const HermitianMatrix& g,
                             std::span<const Complex> x);

struct MixedCurvatureParams {
  int k = 2;  // which Ricci trace, 1..4
  double alpha = 1.0;
  double beta = 1.0;
};

/// C^(k)_{alpha,beta}(X) = alpha Ric^(k)(X,Xbar)/|X|^2 + beta H(X).
/// The Ricci pairing is complex for k = 3, 4; its real part is used so the
/// result is real for every k.
double mixed_curvature(const CurvatureTensor& r, const RicciSummary& ricci,
                       const HermitianMatrix& g, std::span<const Complex> x,
                       const MixedCurvatureParams& params);

/// Curvature components against a g-orthonormal frame:
///   Rf(a, b, c, d) = R(e_a, ebar_b, e_c, ebar_d)
///                  = E(i,a) conj(E(j,b)) E(k,c) conj(E(l,d)) R(i, j, k, l).
CurvatureTensor frame_curvature(const CurvatureTensor& r, const UnitaryFrame& frame);

/// Anti-self-dual Weyl components of a surface (n = 2), from curvature
/// components in a unitary frame:
///   w1 = Rf(1,2,1,2)
///   w2 = (Rf(1,2,2,2) + Rf(2,2,1,2) - Rf(1,2,1,1) - Rf(1,1,1,2)) / sqrt(2)
///   w3 = (Rf(1,1,1,1) + Rf(2,2,2,2) - Rf(1,1,2,2) - Rf(2,2,1,1)
///         - Rf(1,2,2,1) - Rf(2,1,1,2)) / 6
/// (1-based index pairs; the first of each pair is unbarred).
struct WeylMinus {
  Complex w1, w2, w3;
  double max_abs = 0.0;
};

WeylMinus weyl_minus(const CurvatureTensor& frame_r);

/// Metric spec for gtilde = e^{2F} g. F must be real-valued on the chart
/// (checked numerically elsewhere); the transformed curvature satisfies
///   Rtilde_{i jbar k lbar} = e^{2F} (R_{i jbar k lbar} - 2 g_{k lbar} F_{i jbar}).
MetricSpec conformal_metric(const MetricSpec& spec, const Expr& f);

/// Adds `delta` to component (i, j); when `hermitian` also adds its
/// conjugate swap to component (j, i). Used to build corrupted metrics for
/// negative-control tests.
MetricSpec perturb_component(const MetricSpec& spec, int i, int j,
                             const Expr& delta, bool hermitian);

/// Everything the verifier needs at one point.
struct PointCurvature {
  MetricJet jet;
  CurvatureTensor r;
  RicciSummary ricci;
  TorsionData torsion;
};

PointCurvature curvature_at(const MetricEvaluator& eval, const ChartPoint& p);

/// max over points and entries of |g_{i jbar} - conj(g_{j ibar})| evaluated
/// as expressions; the numeric Hermitian-pairing check for a MetricSpec.
double hermitian_symmetry_defect(const MetricSpec& spec,
                                 std::span<const ChartPoint> points);

}  // namespace chernlab
