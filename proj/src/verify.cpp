#include "chernlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "chernlab/parallel.hpp"
#include "chernlab/rng.hpp"

namespace chernlab {

namespace {

/// (M + M^H) / 2. The Ricci pairing enters real quantities through its
/// Hermitian part only.
CMatrix hermitian_part(const CMatrix& m) {
  CMatrix out(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return out;
}

/// Pushes a Hermitian form into a frame: out(a, b) = M(e_a, ebar_b).
CMatrix frame_form(const CMatrix& m, const CMatrix& e) {
  const int n = m.n;
  CMatrix out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += m(i, j) * e(i, a) * std::conj(e(j, b));
      out(a, b) = acc;
    }
  return out;
}

/// tr_g M = g^{a bbar} M_{a bbar}.
Complex trace_g(const CMatrix& g_up, const CMatrix& m) {
  Complex acc = 0.0;
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b) acc += g_up(a, b) * m(a, b);
  return acc;
}

/// pair_sym(M, g)_{i jbar k lbar}
///   = M_ij g_kl + M_kj g_il + M_il g_kj + M_kl g_ij.
Tensor4 pair_symmetrization(const CMatrix& m, const CMatrix& g) {
  const int n = m.n;
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = m(i, j) * g(k, l) + m(k, j) * g(i, l) +
                            m(i, l) * g(k, j) + m(k, l) * g(i, j);
  return out;
}

/// curv_sym(R)_{i jbar k lbar} = R_{ijkl} + R_{kjil} + R_{ilkj} + R_{klij}:
/// the part of R seen by X -> R(X, Xbar, X, Xbar).
Tensor4 curvature_symmetrization(const Tensor4& r) {
  const int n = r.n;
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) =
              r(i, j, k, l) + r(k, j, i, l) + r(i, l, k, j) + r(k, l, i, j);
  return out;
}

/// S_{i jbar k lbar} = g_ij g_kl + g_il g_kj.
Tensor4 metric_pair(const CMatrix& g) {
  const int n = g.n;
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = g(i, j) * g(k, l) + g(i, l) * g(k, j);
  return out;
}

const CMatrix& ric_by_k(const RicciSummary& ricci, int k) {
  switch (k) {
    case 1: return ricci.ric1;
    case 2: return ricci.ric2;
    case 3: return ricci.ric3;
    case 4: return ricci.ric4;
    default: throw std::invalid_argument("Ricci selector k must be 1..4");
  }
}

std::vector<ChartPoint> draw_points(const PointSampler& sampler, int count,
                                    std::uint64_t seed, std::uint64_t stream) {
  std::vector<ChartPoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    points.push_back(sampler(mix_seed(seed, stream, static_cast<std::uint64_t>(i))));
  return points;
}

CMatrix random_unitary(SplitMix64& rng, int n) {
  CMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.normal_complex();
  return gram_schmidt_unitary(m);
}

}  // namespace

nlohmann::json to_json(const IdentityReport& r) {
  return nlohmann::json{{"id", r.id},
                        {"metric", r.metric},
                        {"points", r.points},
                        {"max_residual", r.max_residual},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass},
                        {"notes", r.notes}};
}

nlohmann::json to_json(const ScanReport& r) {
  return nlohmann::json{{"quantity", r.quantity},
                        {"metric", r.metric},
                        {"samples", r.samples},
                        {"min", r.min},
                        {"max", r.max},
                        {"mean", r.mean},
                        {"spread", r.spread},
                        {"seed", r.seed},
                        {"threshold", r.threshold},
                        {"verdict", r.verdict}};
}

nlohmann::json to_json(const ClassifyResult& r) {
  nlohmann::json j{{"metric", r.metric},
                   {"points", r.points},
                   {"seed", r.seed},
                   {"max_torsion", r.max_torsion},
                   {"max_eta", r.max_eta},
                   {"max_curvature", r.max_curvature},
                   {"kahler", r.kahler},
                   {"balanced", r.balanced},
                   {"chern_flat", r.chern_flat}};
  j["max_weyl_minus"] =
      r.max_weyl_minus ? nlohmann::json(*r.max_weyl_minus) : nlohmann::json();
  j["self_dual"] = r.self_dual ? nlohmann::json(*r.self_dual) : nlohmann::json();
  return j;
}

PointSampler zoo_sampler(const ZooEntry& entry) {
  return [entry](std::uint64_t key) { return entry.sample_point(key); };
}

MetricContext make_context(const ZooEntry& entry) {
  return MetricContext{MetricEvaluator(entry.spec), zoo_sampler(entry),
                       entry.name, entry};
}

MetricContext make_context(MetricSpec spec, PointSampler sampler) {
  std::string name = spec.name;
  return MetricContext{MetricEvaluator(std::move(spec)), std::move(sampler),
                       std::move(name), std::nullopt};
}

std::vector<Complex> g_unit_vector(SplitMix64& rng, const UnitaryFrame& frame) {
  const int n = frame.dim();
  std::vector<Complex> w(static_cast<std::size_t>(n));
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& entry : w) {
      entry = rng.normal_complex();
      norm += std::norm(entry);
    }
    norm = std::sqrt(norm);
  } while (norm < 1e-12);
  for (auto& entry : w) entry /= norm;
  return matvec(frame.e, w);
}

// ---------------------------------------------------------------------------
// Pointwise structural identities

std::vector<IdentityReport> verify_pointwise_identities(
    const MetricEvaluator& eval, std::span<const ChartPoint> points,
    const std::string& metric_name, double tol_scale) {
  const int n = eval.dim();
  const double structural_tol = 1e-9 * tol_scale;
  const double identity_tol = 1e-8 * tol_scale;

  double reality = 0.0;
  double conjugation = 0.0;
  double traces = 0.0;
  double hermitian = 0.0;
  double surface = 0.0;
  double kahler = 0.0;
  int kahler_points = 0;

  for (const ChartPoint& p : points) {
    PointCurvature pc = curvature_at(eval, p);
    const CurvatureTensor& r = pc.r;
    const MetricJet& jet = pc.jet;

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            reality = std::max(
                reality, std::abs(r(i, j, k, l) - std::conj(r(j, i, l, k))));

    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          conjugation = std::max(
              conjugation, std::abs(jet.dgb(j, k, l) - std::conj(jet.dg(j, l, k))));

    const CMatrix* rics[4] = {&pc.ricci.ric1, &pc.ricci.ric2, &pc.ricci.ric3,
                              &pc.ricci.ric4};
    Complex tr[4];
    for (int m = 0; m < 4; ++m) tr[m] = trace_g(jet.g_up, *rics[m]);
    traces = std::max({traces, std::abs(tr[0] - tr[1]), std::abs(tr[2] - tr[3]),
                       std::abs(tr[0].imag()), std::abs(tr[2].imag()),
                       std::abs(tr[0].real() - pc.ricci.u),
                       std::abs(tr[2].real() - pc.ricci.v)});

    hermitian = std::max({hermitian, hermitian_defect(pc.ricci.ric1),
                          hermitian_defect(pc.ricci.ric2)});
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        hermitian = std::max(
            hermitian,
            std::abs(pc.ricci.ric4(a, b) - std::conj(pc.ricci.ric3(b, a))));

    if (n == 2) {
      double gap = pc.ricci.u - pc.ricci.v;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Complex lhs = pc.ricci.ric1(a, b) + pc.ricci.ric2(a, b) -
                        pc.ricci.ric3(a, b) - pc.ricci.ric4(a, b);
          surface = std::max(surface, std::abs(lhs - gap * jet.g(a, b)));
        }
    }

    if (max_abs(pc.torsion.t) < 1e-10) {
      ++kahler_points;
      for (int m = 1; m < 4; ++m)
        kahler = std::max(kahler, max_abs_diff(*rics[0], *rics[m]));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              kahler = std::max({kahler,
                                 std::abs(r(i, j, k, l) - r(k, j, i, l)),
                                 std::abs(r(i, j, k, l) - r(i, l, k, j))});
    }
  }

  const int count = static_cast<int>(points.size());
  std::vector<IdentityReport> reports;
  auto push = [&](std::string id, double residual, double tol, int pts,
                  std::string notes) {
    reports.push_back(IdentityReport{std::move(id), metric_name, pts, residual,
                                     tol, residual <= tol, std::move(notes)});
  };

  push("curvature_reality", reality, structural_tol, count,
       "R(i,jbar,k,lbar) = conj(R(j,ibar,l,kbar))");
  push("derivative_conjugation", conjugation, structural_tol, count,
       "dbar_j g_{k lbar} = conj(d_j g_{l kbar})");
  push("ricci_trace_consistency", traces, structural_tol, count,
       "tr ric1 = tr ric2 = u and tr ric3 = tr ric4 = v, both real");
  push("ricci_hermitian", hermitian, structural_tol, count,
       "ric1, ric2 Hermitian; ric4 is the adjoint of ric3");
  if (n == 2)
    push("surface_ricci_identity", surface, identity_tol, count,
         "ric1 + ric2 - ric3 - ric4 = (u - v) g");
  if (kahler_points > 0)
    push("kahler_degeneracy", kahler, identity_tol, kahler_points,
         "vanishing torsion: all Ricci traces agree and R is symmetric in "
         "unbarred and in barred slots");
  else
    push("kahler_degeneracy", 0.0, identity_tol, 0,
         "no torsion-free points sampled; nothing to check");
  return reports;
}

std::vector<IdentityReport> verify_hopf_identities(
    const ZooEntry& entry, std::span<const ChartPoint> points,
    double tol_scale) {
  if (entry.kind != ZooKind::Hopf)
    throw std::invalid_argument("verify_hopf_identities needs the hopf metric");
  MetricEvaluator eval(entry.spec);
  const int n = eval.dim();
  const double tol = 1e-8 * tol_scale;

  double symmetrization = 0.0;
  double scalar_gap = 0.0;
  for (const ChartPoint& p : points) {
    PointCurvature pc = curvature_at(eval, p);
    UnitaryFrame frame = unitary_frame(pc.jet.g);
    CurvatureTensor rf = frame_curvature(pc.r, frame);
    CMatrix ric1f = frame_form(pc.ricci.ric1, frame.e);
    Tensor4 lhs = pair_symmetrization(ric1f, CMatrix::identity(n));
    Tensor4 rhs = curvature_symmetrization(rf);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            symmetrization =
                std::max(symmetrization, std::abs(lhs(i, j, k, l) -
                                                  double(n) * rhs(i, j, k, l)));
    scalar_gap = std::max(scalar_gap, std::abs((pc.ricci.u - pc.ricci.v) -
                                               pc.torsion.eta_norm_sq));
  }

  const int count = static_cast<int>(points.size());
  std::vector<IdentityReport> reports;
  reports.push_back(IdentityReport{
      "hopf_ricci_symmetrization", entry.name, count, symmetrization, tol,
      symmetrization <= tol,
      "sym4(ric1 (x) g) = n sym4(R) in a unitary frame"});
  reports.push_back(IdentityReport{
      "hopf_scalar_gap_torsion", entry.name, count, scalar_gap, tol,
      scalar_gap <= tol, "u - v = |eta|^2_g pointwise"});
  return reports;
}

IdentityReport verify_zoo_oracle(const ZooEntry& entry,
                                 std::span<const ChartPoint> points,
                                 double tol_scale) {
  if (!entry.has_oracle)
    throw std::invalid_argument("metric '" + entry.name +
                                "' has no pointwise oracle");
  MetricEvaluator eval(entry.spec);
  const double tol = 1e-8 * tol_scale;

  double residual = 0.0;
  for (const ChartPoint& p : points) {
    ZooOracleValues oracle = zoo_oracle(entry, p);
    PointCurvature pc = curvature_at(eval, p);
    UnitaryFrame frame{oracle.frame};

    residual = std::max(
        residual, max_abs_diff(frame_curvature(pc.r, frame), oracle.frame_curvature));
    const CMatrix* expected[4] = {&oracle.frame_ric1, &oracle.frame_ric2,
                                  &oracle.frame_ric3, &oracle.frame_ric4};
    const CMatrix* computed[4] = {&pc.ricci.ric1, &pc.ricci.ric2,
                                  &pc.ricci.ric3, &pc.ricci.ric4};
    for (int m = 0; m < 4; ++m)
      residual = std::max(
          residual, max_abs_diff(frame_form(*computed[m], frame.e), *expected[m]));
    residual = std::max(residual, std::abs(pc.ricci.u - oracle.u));
    residual = std::max(residual, std::abs(pc.ricci.v - oracle.v));
    residual =
        std::max(residual, std::abs(pc.torsion.eta_norm_sq - oracle.eta_norm_sq));
  }

  return IdentityReport{
      "closed_form_oracle",
      entry.name,
      static_cast<int>(points.size()),
      residual,
      tol,
      residual <= tol,
      "frame curvature, four Ricci traces, u, v and |eta|^2 against closed forms"};
}

// ---------------------------------------------------------------------------
// Sphere averages

SphereSamples sphere_samples(const PointCurvature& pc, const UnitaryFrame& frame,
                             int n_samples, std::uint64_t seed, int threads) {
  SphereSamples out;
  out.seed = seed;
  for (auto& series : out.ric) series.resize(static_cast<std::size_t>(n_samples));
  out.h.resize(static_cast<std::size_t>(n_samples));

  const CMatrix* rics[4] = {&pc.ricci.ric1, &pc.ricci.ric2, &pc.ricci.ric3,
                            &pc.ricci.ric4};
  const int n = frame.dim();
  parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
    SplitMix64 rng(mix_seed(seed, 0, static_cast<std::uint64_t>(i)));
    std::vector<Complex> zvec = g_unit_vector(rng, frame);
    for (int m = 0; m < 4; ++m) {
      Complex acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          acc += (*rics[m])(a, b) * zvec[static_cast<std::size_t>(a)] *
                 std::conj(zvec[static_cast<std::size_t>(b)]);
      out.ric[m][i] = acc.real();
    }
    out.h[i] = curvature_form(pc.r, zvec, zvec).real();
  });
  return out;
}

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double x : values) sum += x;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double x : values) {
    double d = x - out.mean;
    ss += d * d;
  }
  double variance = ss / static_cast<double>(n - 1);
  out.stderr_ = std::sqrt(variance / static_cast<double>(n));
  return out;
}

double closed_form_average_ric(int k, double u, double v, int n) {
  if (k == 1 || k == 2) return u / n;
  if (k == 3 || k == 4) return v / n;
  throw std::invalid_argument("Ricci selector k must be 1..4");
}

double closed_form_average_h(double u, double v, int n) {
  return (u + v) / (static_cast<double>(n) * (n + 1));
}

double closed_form_average_c(const MixedCurvatureParams& params, double u,
                             double v, int n) {
  const double lead = (n + 1) * params.alpha + params.beta;
  const double denom = static_cast<double>(n) * (n + 1);
  if (params.k == 1 || params.k == 2) return (lead * u + params.beta * v) / denom;
  if (params.k == 3 || params.k == 4) return (lead * v + params.beta * u) / denom;
  throw std::invalid_argument("Ricci selector k must be 1..4");
}

IdentityReport sphere_average_check(const MetricEvaluator& eval,
                                    const ChartPoint& p,
                                    const MixedCurvatureParams& params,
                                    int n_samples, std::uint64_t seed,
                                    int threads, const std::string& metric_name) {
  const int n = eval.dim();
  PointCurvature pc = curvature_at(eval, p);
  UnitaryFrame frame = unitary_frame(pc.jet.g);
  SphereSamples samples = sphere_samples(pc, frame, n_samples, seed, threads);

  const double u = pc.ricci.u;
  const double v = pc.ricci.v;

  std::vector<double> c_series(static_cast<std::size_t>(n_samples));
  const std::vector<double>& base = samples.ric[params.k - 1];
  for (std::size_t i = 0; i < c_series.size(); ++i)
    c_series[i] = params.alpha * base[i] + params.beta * samples.h[i];

  struct Item {
    const char* label;
    std::span<const double> series;
    double closed;
  };
  const Item items[] = {
      {"ric1", samples.ric[0], closed_form_average_ric(1, u, v, n)},
      {"ric2", samples.ric[1], closed_form_average_ric(2, u, v, n)},
      {"ric3", samples.ric[2], closed_form_average_ric(3, u, v, n)},
      {"ric4", samples.ric[3], closed_form_average_ric(4, u, v, n)},
      {"h", samples.h, closed_form_average_h(u, v, n)},
      {"c", c_series, closed_form_average_c(params, u, v, n)},
  };

  double worst_ratio = 0.0;
  std::ostringstream notes;
  notes.precision(12);
  notes << "samples=" << n_samples << " k=" << params.k
        << " alpha=" << params.alpha << " beta=" << params.beta;
  for (const Item& item : items) {
    MeanStderr ms = mean_stderr(item.series);
    double budget = 4.0 * ms.stderr_ + 1e-12 * (1.0 + std::abs(item.closed));
    double ratio = std::abs(ms.mean - item.closed) / budget;
    worst_ratio = std::max(worst_ratio, ratio);
    notes << "; " << item.label << ": mean=" << ms.mean
          << " closed=" << item.closed << " stderr=" << ms.stderr_;
  }

  return IdentityReport{"sphere_average",
                        metric_name,
                        1,
                        worst_ratio,
                        1.0,
                        worst_ratio <= 1.0,
                        notes.str()};
}

// ---------------------------------------------------------------------------
// Scans

ScanReport constancy_scan(const MetricContext& ctx,
                          const MixedCurvatureParams& params, int n_points,
                          int n_vectors, std::uint64_t seed, int threads,
                          double tol_scale) {
  const std::size_t total =
      static_cast<std::size_t>(n_points) * static_cast<std::size_t>(n_vectors);
  std::vector<double> values(total);
  parallel_for(static_cast<std::size_t>(n_points), threads, [&](std::size_t s) {
    ChartPoint p = ctx.sampler(mix_seed(seed, 1, static_cast<std::uint64_t>(s)));
    PointCurvature pc = curvature_at(ctx.eval, p);
    UnitaryFrame frame = unitary_frame(pc.jet.g);
    for (int t = 0; t < n_vectors; ++t) {
      SplitMix64 rng(mix_seed(
          seed, 2, static_cast<std::uint64_t>(s) * n_vectors + t));
      std::vector<Complex> zvec = g_unit_vector(rng, frame);
      values[s * static_cast<std::size_t>(n_vectors) + t] =
          mixed_curvature(pc.r, pc.ricci, pc.jet.g, zvec, params);
    }
  });

  ScanReport rep;
  rep.quantity = "mixed_curvature_k" + std::to_string(params.k);
  rep.metric = ctx.name;
  rep.samples = static_cast<int>(total);
  rep.seed = seed;
  rep.min = *std::min_element(values.begin(), values.end());
  rep.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double x : values) sum += x;
  rep.mean = sum / static_cast<double>(total);
  rep.spread = rep.max - rep.min;
  rep.threshold = 1e-7 * (1.0 + std::abs(rep.mean)) * tol_scale;
  rep.verdict = rep.spread < rep.threshold;
  return rep;
}

ScanReport self_duality_scan(const MetricContext& ctx, int n_points,
                             std::uint64_t seed, int threads, double tol_scale) {
  if (ctx.eval.dim() != 2)
    throw std::invalid_argument(
        "anti-self-dual Weyl components are defined for n = 2");
  std::vector<double> values(static_cast<std::size_t>(n_points));
  parallel_for(static_cast<std::size_t>(n_points), threads, [&](std::size_t s) {
    ChartPoint p = ctx.sampler(mix_seed(seed, 1, static_cast<std::uint64_t>(s)));
    PointCurvature pc = curvature_at(ctx.eval, p);
    UnitaryFrame frame = unitary_frame(pc.jet.g);
    values[s] = weyl_minus(frame_curvature(pc.r, frame)).max_abs;
  });

  ScanReport rep;
  rep.quantity = "weyl_minus_max";
  rep.metric = ctx.name;
  rep.samples = n_points;
  rep.seed = seed;
  rep.min = *std::min_element(values.begin(), values.end());
  rep.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double x : values) sum += x;
  rep.mean = sum / static_cast<double>(n_points);
  rep.spread = rep.max - rep.min;
  rep.threshold = 1e-7 * tol_scale;
  rep.verdict = rep.max < rep.threshold;
  return rep;
}

ClassifyResult classify_metric(const MetricContext& ctx, int n_points,
                               std::uint64_t seed, int threads,
                               double tol_scale) {
  const int n = ctx.eval.dim();
  struct Row {
    double torsion = 0.0;
    double eta = 0.0;
    double curvature = 0.0;
    double weyl = 0.0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n_points));
  parallel_for(static_cast<std::size_t>(n_points), threads, [&](std::size_t s) {
    ChartPoint p = ctx.sampler(mix_seed(seed, 4, static_cast<std::uint64_t>(s)));
    PointCurvature pc = curvature_at(ctx.eval, p);
    UnitaryFrame frame = unitary_frame(pc.jet.g);
    CurvatureTensor rf = frame_curvature(pc.r, frame);
    Row& row = rows[s];
    row.torsion = max_abs(pc.torsion.t);
    row.eta = std::sqrt(std::max(0.0, pc.torsion.eta_norm_sq));
    row.curvature = max_abs(rf);
    if (n == 2) row.weyl = weyl_minus(rf).max_abs;
  });

  ClassifyResult out;
  out.metric = ctx.name;
  out.points = n_points;
  out.seed = seed;
  for (const Row& row : rows) {
    out.max_torsion = std::max(out.max_torsion, row.torsion);
    out.max_eta = std::max(out.max_eta, row.eta);
    out.max_curvature = std::max(out.max_curvature, row.curvature);
  }
  out.kahler = out.max_torsion < 1e-9 * tol_scale;
  out.balanced = out.max_eta < 1e-9 * tol_scale;
  out.chern_flat = out.max_curvature < 1e-10 * tol_scale;
  if (n == 2) {
    double w = 0.0;
    for (const Row& row : rows) w = std::max(w, row.weyl);
    out.max_weyl_minus = w;
    out.self_dual = w < 1e-7 * tol_scale;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conformal checks

std::vector<IdentityReport> conformal_formula_check(
    const MetricEvaluator& eval, const Expr& f,
    std::span<const ChartPoint> points, const std::string& metric_name,
    double tol_scale) {
  const int n = eval.dim();
  const double tol = 1e-8 * tol_scale;

  MetricEvaluator transformed(conformal_metric(eval.spec(), f));
  std::vector<Expr> fij(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    Expr di = wirtinger_derivative(f, i + 1, DerivKind::Holomorphic);
    for (int j = 0; j < n; ++j)
      fij[static_cast<std::size_t>(i) * n + j] =
          wirtinger_derivative(di, j + 1, DerivKind::Antiholomorphic);
  }

  double law_residual = 0.0;
  double combo_residual = 0.0;
  double worst_multiplier_gap = 0.0;
  bool multiplier_measured = false;
  const double alpha = 1.0;
  const double beta = 1.0;

  for (const ChartPoint& p : points) {
    Complex fval = evaluate(f, p);
    if (std::abs(fval.imag()) > 1e-9)
      throw std::invalid_argument(
          "conformal factor is not real-valued at a sample point");
    const double e2f = std::exp(2.0 * fval.real());

    CMatrix fh(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        fh(i, j) = evaluate(fij[static_cast<std::size_t>(i) * n + j], p);

    PointCurvature pc = curvature_at(eval, p);
    PointCurvature tpc = curvature_at(transformed, p);

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Complex expected =
                e2f * (pc.r(i, j, k, l) - 2.0 * pc.jet.g(k, l) * fh(i, j));
            law_residual =
                std::max(law_residual, std::abs(tpc.r(i, j, k, l) - expected));
          }

    if (n == 2) {
      // Combination check: with K the (alpha, beta) second-Ricci combination
      // of the transformed metric and L the same combination of g minus the
      // Hessian correction, K = e^{2F} (L - 4 alpha (tr_g F'') S).
      const double trf = trace_g(pc.jet.g_up, fh).real();
      Tensor4 kk = pair_symmetrization(tpc.ricci.ric2, tpc.jet.g.m);
      Tensor4 curvk = curvature_symmetrization(tpc.r);
      Tensor4 ll = pair_symmetrization(pc.ricci.ric2, pc.jet.g.m);
      Tensor4 curvl = curvature_symmetrization(pc.r);
      Tensor4 fcorr = pair_symmetrization(fh, pc.jet.g.m);
      Tensor4 s = metric_pair(pc.jet.g.m);

      double best_s = 0.0;
      Complex best_num = 0.0;
      Complex best_den = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              Complex kval = alpha * kk(i, j, k, l) + beta * curvk(i, j, k, l);
              Complex lval = alpha * ll(i, j, k, l) + beta * curvl(i, j, k, l) -
                             2.0 * beta * fcorr(i, j, k, l);
              Complex expected = e2f * (lval - 4.0 * alpha * trf * s(i, j, k, l));
              combo_residual = std::max(combo_residual, std::abs(kval - expected));
              if (std::abs(s(i, j, k, l)) > best_s) {
                best_s = std::abs(s(i, j, k, l));
                best_num = lval - kval / e2f;
                best_den = alpha * trf * s(i, j, k, l);
              }
            }
      if (std::abs(best_den) > 1e-6) {
        multiplier_measured = true;
        Complex m = best_num / best_den;
        worst_multiplier_gap =
            std::max(worst_multiplier_gap, std::abs(m - Complex(4.0)));
      }
    }
  }

  const int count = static_cast<int>(points.size());
  std::vector<IdentityReport> reports;
  reports.push_back(IdentityReport{
      "conformal_transformation", metric_name, count, law_residual, tol,
      law_residual <= tol,
      "componentwise curvature law for e^{2F} g, factor: " + to_string(f)});
  if (n == 2) {
    std::ostringstream notes;
    notes.precision(12);
    notes << "second-Ricci combination under e^{2F} g, factor: " << to_string(f);
    bool mult_ok = true;
    if (multiplier_measured) {
      notes << "; trace multiplier gap |m - 4| = " << worst_multiplier_gap;
      mult_ok = worst_multiplier_gap <= 1e-5 * tol_scale;
    } else {
      notes << "; trace multiplier not identifiable (tr_g F'' ~ 0)";
    }
    reports.push_back(IdentityReport{
        "conformal_ricci_combination", metric_name, count, combo_residual, tol,
        combo_residual <= tol && mult_ok, notes.str()});
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Constant mixed-curvature consequences

std::vector<IdentityReport> constant_curvature_consequences(
    const MetricEvaluator& eval, const MixedCurvatureParams& params, double c,
    std::span<const ChartPoint> points, int random_frames, std::uint64_t seed,
    bool expect_fail, const std::string& metric_name, double tol_scale) {
  const int n = eval.dim();
  const double tol = 1e-7 * tol_scale;

  double polarization = 0.0;
  double trace_residual = 0.0;
  double frame_residual = 0.0;

  std::size_t point_index = 0;
  for (const ChartPoint& p : points) {
    PointCurvature pc = curvature_at(eval, p);
    const CMatrix& g = pc.jet.g.m;
    CMatrix mh = hermitian_part(ric_by_k(pc.ricci, params.k));

    Tensor4 lhs = pair_symmetrization(mh, g);
    Tensor4 curv = curvature_symmetrization(pc.r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Complex value = params.alpha * lhs(i, j, k, l) +
                            params.beta * curv(i, j, k, l);
            Complex target =
                2.0 * c * (g(i, j) * g(k, l) + g(i, l) * g(k, j));
            polarization = std::max(polarization, std::abs(value - target));
          }

    if (!expect_fail && params.k == 2) {
      const double u = pc.ricci.u;
      const double lead = params.alpha * (n + 2) + params.beta;
      const double rhs_scalar = 2.0 * (n + 1) * c - params.alpha * u;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Complex value = lead * pc.ricci.ric2(a, b) +
                          params.beta * pc.ricci.ric1(a, b) +
                          params.beta * (pc.ricci.ric3(a, b) +
                                         pc.ricci.ric4(a, b));
          trace_residual = std::max(
              trace_residual, std::abs(value - rhs_scalar * g(a, b)));
        }
    }

    if (!expect_fail && n == 2) {
      UnitaryFrame base = unitary_frame(pc.jet.g);
      for (int t = 0; t <= random_frames; ++t) {
        UnitaryFrame frame = base;
        if (t > 0) {
          SplitMix64 rng(mix_seed(seed, 3, point_index * 64 + t));
          frame = rotate_frame(base, random_unitary(rng, n));
        }
        CurvatureTensor rf = frame_curvature(pc.r, frame);
        Complex combo = rf(0, 0, 0, 0) + rf(1, 1, 1, 1) - rf(0, 0, 1, 1) -
                        rf(1, 1, 0, 0) - rf(0, 1, 1, 0) - rf(1, 0, 0, 1);
        frame_residual = std::max(frame_residual, std::abs(combo));
      }
    }
    ++point_index;
  }

  const int count = static_cast<int>(points.size());
  std::vector<IdentityReport> reports;

  IdentityReport pol;
  pol.id = "polarization_k" + std::to_string(params.k);
  pol.metric = metric_name;
  pol.points = count;
  pol.max_residual = polarization;
  std::ostringstream pol_notes;
  pol_notes.precision(12);
  pol_notes << "alpha=" << params.alpha << " beta=" << params.beta
            << " c=" << c;
  if (expect_fail) {
    pol.tolerance = 100.0 * tol;
    pol.pass = polarization > pol.tolerance;
    pol_notes << "; negative control: residual must exceed the tolerance";
  } else {
    pol.tolerance = tol;
    pol.pass = polarization <= tol;
    pol_notes << "; alpha sym4(ric_k (x) g) + beta sym4(R) = 2c sym(g (x) g)";
  }
  pol.notes = pol_notes.str();
  reports.push_back(std::move(pol));

  if (!expect_fail && params.k == 2)
    reports.push_back(IdentityReport{
        "trace_consequence_k2", metric_name, count, trace_residual, tol,
        trace_residual <= tol,
        "[alpha(n+2)+beta] ric2 + beta ric1 + beta(ric3+ric4) = "
        "[2(n+1)c - alpha u] g"});

  if (!expect_fail && n == 2)
    reports.push_back(IdentityReport{
        "frame_combination_w3", metric_name, count, frame_residual, tol,
        frame_residual <= tol,
        "Rf(1111)+Rf(2222)-Rf(1122)-Rf(2211)-Rf(1221)-Rf(2112) vanishes in " +
            std::to_string(random_frames + 1) + " unitary frames per point"});

  return reports;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

std::vector<Expr> default_conformal_factors(int n) {
  std::vector<std::string> texts = {
      "0.3",
      "0.2*z1 + 0.2*zb1",
      "0.1*z1*zb1",
      "log(1 + 0.2*z1*zb1)",
  };
  if (n >= 2)
    texts.push_back("0.05*(z1*zb2 + z2*zb1) + 0.1*z2*zb2");
  else
    texts.push_back("0.05*z1^2*zb1^2");
  std::vector<Expr> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) out.push_back(parse_expression(text, n));
  return out;
}

}  // namespace

SuiteResult run_suite(const MetricContext& ctx, const std::string& suite,
                      const RunConfig& config) {
  const bool all = suite == "all";
  if (!all && suite != "pointwise" && suite != "conformal" &&
      suite != "average" && suite != "consequences")
    throw std::invalid_argument("unknown suite '" + suite + "'");

  const int n = ctx.eval.dim();
  SuiteResult result;
  std::vector<ChartPoint> points =
      draw_points(ctx.sampler, config.points, config.seed, 10);

  auto absorb = [&result](std::vector<IdentityReport> reports) {
    for (IdentityReport& r : reports) {
      result.pass = result.pass && r.pass;
      result.identities.push_back(std::move(r));
    }
  };

  if (all || suite == "pointwise") {
    absorb(verify_pointwise_identities(ctx.eval, points, ctx.name,
                                       config.tol_scale));
    if (ctx.zoo && ctx.zoo->kind == ZooKind::Hopf)
      absorb(verify_hopf_identities(*ctx.zoo, points, config.tol_scale));
    if (ctx.zoo && ctx.zoo->has_oracle)
      absorb({verify_zoo_oracle(*ctx.zoo, points, config.tol_scale)});
  }

  if (all || suite == "conformal") {
    std::vector<Expr> factors;
    if (config.conformal_factor)
      factors.push_back(*config.conformal_factor);
    else
      factors = default_conformal_factors(n);
    for (const Expr& f : factors)
      absorb(conformal_formula_check(ctx.eval, f, points, ctx.name,
                                     config.tol_scale));
  }

  if (all || suite == "average") {
    const int avg_points = std::min<int>(3, static_cast<int>(points.size()));
    for (int i = 0; i < avg_points; ++i)
      absorb({sphere_average_check(
          ctx.eval, points[static_cast<std::size_t>(i)], config.params,
          config.samples, mix_seed(config.seed, 20, static_cast<std::uint64_t>(i)),
          config.threads, ctx.name)});
  }

  if (all || suite == "consequences") {
    double c = 0.0;
    bool expect_fail = false;
    if (ctx.zoo && ctx.zoo->tags.constant_h && ctx.zoo->expected_h) {
      c = (config.params.alpha * (n + 1) + 2.0 * config.params.beta) *
          (*ctx.zoo->expected_h) / 2.0;
    } else {
      ScanReport scan =
          constancy_scan(ctx, config.params, config.points, config.vectors,
                         config.seed, config.threads, config.tol_scale);
      c = scan.mean;
      expect_fail = !scan.verdict;
      result.scans.push_back(std::move(scan));
    }
    absorb(constant_curvature_consequences(
        ctx.eval, config.params, c, points, config.frames, config.seed,
        expect_fail, ctx.name, config.tol_scale));
  }

  if (all) {
    ScanReport scan =
        constancy_scan(ctx, config.params, config.points, config.vectors,
                       config.seed, config.threads, config.tol_scale);
    if (ctx.zoo && ctx.zoo->tags.constant_h && !scan.verdict)
      result.pass = false;
    result.scans.push_back(std::move(scan));

    if (n == 2) {
      ScanReport weyl = self_duality_scan(ctx, config.points, config.seed,
                                          config.threads, config.tol_scale);
      if (ctx.zoo && weyl.verdict != ctx.zoo->tags.self_dual)
        result.pass = false;
      result.scans.push_back(std::move(weyl));
    }

    ClassifyResult cls = classify_metric(ctx, config.points, config.seed,
                                         config.threads, config.tol_scale);
    if (ctx.zoo) {
      const ZooTags& tags = ctx.zoo->tags;
      if (cls.kahler != tags.kahler || cls.balanced != tags.balanced)
        result.pass = false;
      if ((ctx.zoo->kind == ZooKind::Flat) != cls.chern_flat)
        result.pass = false;
      if (cls.self_dual && *cls.self_dual != tags.self_dual)
        result.pass = false;
    }
    result.classification = std::move(cls);
  }

  return result;
}

nlohmann::json suite_to_json(const SuiteResult& result) {
  nlohmann::json identities = nlohmann::json::array();
  for (const IdentityReport& r : result.identities) identities.push_back(to_json(r));
  nlohmann::json scans = nlohmann::json::array();
  for (const ScanReport& r : result.scans) scans.push_back(to_json(r));
  nlohmann::json j{{"identities", std::move(identities)},
                   {"scans", std::move(scans)},
                   {"pass", result.pass}};
  j["classification"] = result.classification ? to_json(*result.classification)
                                              : nlohmann::json();
  return j;
}

}  // namespace chernlab
