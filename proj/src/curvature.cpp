#include "chernlab/curvature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace chernlab {

MetricEvaluator::MetricEvaluator(MetricSpec spec) : spec_(std::move(spec)) {
  int n = spec_.n;
  if (n < 1 || n > 8)
    throw std::invalid_argument("metric dimension must be between 1 and 8");
  if (spec_.components.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("metric component count does not match dimension");
  for (const Expr& e : spec_.components) {
    if (e.empty()) throw std::invalid_argument("empty metric component");
    if (max_variable_index(e) > n)
      throw std::invalid_argument("metric component uses a variable beyond the dimension");
  }

  auto at3 = [n](int i, int k, int l) {
    return (static_cast<std::size_t>(i) * n + k) * n + l;
  };
  dg_.resize(static_cast<std::size_t>(n) * n * n);
  dgb_.resize(static_cast<std::size_t>(n) * n * n);
  ddg_.resize(static_cast<std::size_t>(n) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Expr& g = spec_.component(k, l);
      for (int i = 0; i < n; ++i) {
        Expr di = wirtinger_derivative(g, i + 1, DerivKind::Holomorphic);
        dg_[at3(i, k, l)] = di;
        dgb_[at3(i, k, l)] =
            wirtinger_derivative(g, i + 1, DerivKind::Antiholomorphic);
        for (int j = 0; j < n; ++j)
          ddg_[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l] =
              wirtinger_derivative(di, j + 1, DerivKind::Antiholomorphic);
      }
    }
}

namespace {

std::map<std::string, double> merged_params(const MetricSpec& spec,
                                            const ChartPoint& p) {
  std::map<std::string, double> params = spec.parameter_defaults;
  for (const auto& [name, value] : p.params) params[name] = value;
  return params;
}

}  // namespace

CMatrix MetricEvaluator::metric_values(const ChartPoint& p) const {
  int n = spec_.n;
  if (p.dim() != n)
    throw std::invalid_argument("point dimension does not match the metric");
  std::vector<Complex> zb(p.z.size());
  for (std::size_t k = 0; k < p.z.size(); ++k) zb[k] = std::conj(p.z[k]);
  auto params = merged_params(spec_, p);
  EvalContext ctx(p.z, zb, &params);
  CMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = ctx.eval(spec_.component(i, j));
  return g;
}

MetricJet MetricEvaluator::jet(const ChartPoint& p) const {
  int n = spec_.n;
  if (p.dim() != n)
    throw std::invalid_argument("point dimension does not match the metric");
  std::vector<Complex> zb(p.z.size());
  for (std::size_t k = 0; k < p.z.size(); ++k) zb[k] = std::conj(p.z[k]);
  auto params = merged_params(spec_, p);
  EvalContext ctx(p.z, zb, &params);  // one shared cache for the whole jet

  CMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = ctx.eval(spec_.component(i, j));

  Tensor3 dg(n), dgb(n);
  Tensor4 ddg(n);
  auto at3 = [n](int i, int k, int l) {
    return (static_cast<std::size_t>(i) * n + k) * n + l;
  };
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        dg(i, k, l) = ctx.eval(dg_[at3(i, k, l)]);
        dgb(i, k, l) = ctx.eval(dgb_[at3(i, k, l)]);
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          ddg(i, j, k, l) = ctx.eval(
              ddg_[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l]);

  HermitianMatrix gh(std::move(g));
  HermitianMatrix g_inv = invert_hermitian(gh);
  // g_up(k, l) = g^{k lbar} is the transposed inverse, so that both
  // contractions sum_l g(i,l) g_up(j,l) and sum_k g(k,j) g_up(k,l) give
  // Kronecker deltas.
  CMatrix g_up(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) g_up(k, l) = g_inv(l, k);

  return MetricJet{std::move(gh), std::move(g_up), std::move(dg),
                   std::move(dgb), std::move(ddg)};
}

MetricJet metric_jet(const MetricSpec& spec, const ChartPoint& p) {
  return MetricEvaluator(spec).jet(p);
}

CurvatureTensor chern_curvature(const MetricJet& jet) {
  int n = jet.dim();
  CurvatureTensor r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex second(0.0, 0.0);
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              second += jet.g_up(p, q) * jet.dg(i, k, q) * jet.dgb(j, p, l);
          r(i, j, k, l) = -jet.ddg(i, j, k, l) + second;
        }
  return r;
}

RicciSummary ricci_summary(const CurvatureTensor& r, const MetricJet& jet) {
  int n = jet.dim();
  RicciSummary s{CMatrix(n), CMatrix(n), CMatrix(n), CMatrix(n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex r1(0.0, 0.0), r2(0.0, 0.0), r3(0.0, 0.0), r4(0.0, 0.0);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Complex w = jet.g_up(c, d);
          r1 += w * r(a, b, c, d);  // trace over the metric pair
          r2 += w * r(c, d, a, b);  // trace over the direction pair
          r3 += w * r(a, d, c, b);  // g^{k jbar} R_{i jbar k lbar}
          r4 += w * r(c, b, a, d);  // g^{i lbar} R_{i jbar k lbar}
        }
      s.ric1(a, b) = r1;
      s.ric2(a, b) = r2;
      s.ric3(a, b) = r3;
      s.ric4(a, b) = r4;
    }
  Complex u(0.0, 0.0), v(0.0, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      u += jet.g_up(a, b) * s.ric1(a, b);
      v += jet.g_up(a, b) * s.ric3(a, b);
    }
  s.u = u.real();
  s.v = v.real();
  return s;
}

TorsionData torsion_data(const MetricJet& jet) {
  int n = jet.dim();
  TorsionData t{Tensor3(n), std::vector<Complex>(n), 0.0};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex s(0.0, 0.0);
        for (int l = 0; l < n; ++l)
          s += jet.g_up(k, l) * (jet.dg(i, j, l) - jet.dg(j, i, l));
        t.t(k, i, j) = s;
      }
  for (int i = 0; i < n; ++i) {
    Complex s(0.0, 0.0);
    for (int k = 0; k < n; ++k) s += t.t(k, i, k);
    t.eta[i] = s;
  }
  Complex norm(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      norm += jet.g_up(i, j) * t.eta[i] * std::conj(t.eta[j]);
  t.eta_norm_sq = norm.real();
  return t;
}

Complex curvature_form(const CurvatureTensor& r, std::span<const Complex> x,
                       std::span<const Complex> y) {
  int n = r.n;
  // Contract the direction pair first; the metric pair reuses the result.
  CMatrix m(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      Complex s(0.0, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += x[i] * std::conj(x[j]) * r(i, j, k, l);
      m(k, l) = s;
    }
  Complex total(0.0, 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) total += m(k, l) * y[k] * std::conj(y[l]);
  return total;
}

double metric_norm_sq(const HermitianMatrix& g, std::span<const Complex> x) {
  Complex s(0.0, 0.0);
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) s += g(i, j) * x[i] * std::conj(x[j]);
  return s.real();
}

double holomorphic_sectional(const CurvatureTensor& r, const HermitianMatrix& g,
                             std::span<const Complex> x) {
  double norm_sq = metric_norm_sq(g, x);
  if (norm_sq <= 0.0)
    throw std::invalid_argument("holomorphic sectional curvature of a null vector");
  return curvature_form(r, x, x).real() / (norm_sq * norm_sq);
}

double mixed_curvature(const CurvatureTensor& r, const RicciSummary& ricci,
                       const HermitianMatrix& g, std::span<const Complex> x,
                       const MixedCurvatureParams& params) {
  if (params.k < 1 || params.k > 4)
    throw std::invalid_argument("mixed curvature index k must be 1..4");
  const CMatrix* m = nullptr;
  switch (params.k) {
    case 1: m = &ricci.ric1; break;
    case 2: m = &ricci.ric2; break;
    case 3: m = &ricci.ric3; break;
    default: m = &ricci.ric4; break;
  }
  double norm_sq = metric_norm_sq(g, x);
  if (norm_sq <= 0.0)
    throw std::invalid_argument("mixed curvature of a null vector");
  Complex ric_val(0.0, 0.0);
  for (int a = 0; a < g.dim(); ++a)
    for (int b = 0; b < g.dim(); ++b)
      ric_val += (*m)(a, b) * x[a] * std::conj(x[b]);
  return params.alpha * ric_val.real() / norm_sq +
         params.beta * holomorphic_sectional(r, g, x);
}

CurvatureTensor frame_curvature(const CurvatureTensor& r, const UnitaryFrame& frame) {
  int n = r.n;
  const CMatrix& e = frame.e;
  // Contract one index at a time: O(n^5) instead of O(n^8).
  Tensor4 t1(n), t2(n), t3(n), out(n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s(0.0, 0.0);
          for (int i = 0; i < n; ++i) s += e(i, a) * r(i, j, k, l);
          t1(a, j, k, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex s(0.0, 0.0);
          for (int j = 0; j < n; ++j) s += std::conj(e(j, b)) * t1(a, j, k, l);
          t2(a, b, k, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int l = 0; l < n; ++l) {
          Complex s(0.0, 0.0);
          for (int k = 0; k < n; ++k) s += e(k, c) * t2(a, b, k, l);
          t3(a, b, c, l) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Complex s(0.0, 0.0);
          for (int l = 0; l < n; ++l) s += std::conj(e(l, d)) * t3(a, b, c, l);
          out(a, b, c, d) = s;
        }
  return out;
}

WeylMinus weyl_minus(const CurvatureTensor& frame_r) {
  if (frame_r.n != 2)
    throw std::invalid_argument("anti-self-dual Weyl components require n = 2");
  const CurvatureTensor& rf = frame_r;
  WeylMinus w;
  w.w1 = rf(0, 1, 0, 1);
  w.w2 = (rf(0, 1, 1, 1) + rf(1, 1, 0, 1) - rf(0, 1, 0, 0) - rf(0, 0, 0, 1)) /
         std::sqrt(2.0);
  w.w3 = (rf(0, 0, 0, 0) + rf(1, 1, 1, 1) - rf(0, 0, 1, 1) - rf(1, 1, 0, 0) -
          rf(0, 1, 1, 0) - rf(1, 0, 0, 1)) /
         6.0;
  w.max_abs = std::max({std::abs(w.w1), std::abs(w.w2), std::abs(w.w3)});
  return w;
}

MetricSpec conformal_metric(const MetricSpec& spec, const Expr& f) {
  if (f.empty()) throw std::invalid_argument("empty conformal factor");
  if (max_variable_index(f) > spec.n)
    throw std::invalid_argument("conformal factor uses a variable beyond the dimension");
  MetricSpec out = spec;
  out.name = spec.name.empty() ? "conformal" : spec.name + "_conformal";
  Expr scale = exp_of(mul(constant(2.0), f));
  for (Expr& component : out.components) component = mul(scale, component);
  return out;
}

MetricSpec perturb_component(const MetricSpec& spec, int i, int j,
                             const Expr& delta, bool hermitian) {
  MetricSpec out = spec;
  out.name = spec.name + "_perturbed";
  out.component(i, j) = add(out.component(i, j), delta);
  if (hermitian && i != j)
    out.component(j, i) = add(out.component(j, i), conjugate_swap(delta));
  return out;
}

PointCurvature curvature_at(const MetricEvaluator& eval, const ChartPoint& p) {
  MetricJet jet = eval.jet(p);
  CurvatureTensor r = chern_curvature(jet);
  RicciSummary ricci = ricci_summary(r, jet);
  TorsionData torsion = torsion_data(jet);
  return PointCurvature{std::move(jet), std::move(r), std::move(ricci),
                        std::move(torsion)};
}

double hermitian_symmetry_defect(const MetricSpec& spec,
                                 std::span<const ChartPoint> points) {
  double defect = 0.0;
  for (const ChartPoint& p : points) {
    auto params = merged_params(spec, p);
    std::vector<Complex> zb(p.z.size());
    for (std::size_t k = 0; k < p.z.size(); ++k) zb[k] = std::conj(p.z[k]);
    EvalContext ctx(p.z, zb, &params);
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.n; ++j) {
        Complex a = ctx.eval(spec.component(i, j));
        Complex b = ctx.eval(spec.component(j, i));
        defect = std::max(defect, std::abs(a - std::conj(b)));
      }
  }
  return defect;
}

}  // namespace chernlab
