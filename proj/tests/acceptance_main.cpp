// Acceptance gate: runs the ten go/no-go checks for the curvature toolkit
// at their stated tolerances and prints exactly one [PASS]/[FAIL] line per
// criterion. Exit status 0 iff all ten pass.

#include <chernlab/metric_file.hpp>
#include <chernlab/verify.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

using namespace chernlab;

namespace {

int g_failures = 0;

void report(int number, const std::string& label, bool ok, const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", number,
              label.c_str(), detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<ChartPoint> draw_points(const ZooEntry& entry, int count,
                                    std::uint64_t seed) {
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i)
    pts.push_back(entry.sample_point(mix_seed(seed, 1, static_cast<std::uint64_t>(i))));
  return pts;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Punctured-chart closed forms: frame curvature, second Ricci trace,
//    scalars, for n = 2, 3, 4 at 50 random points each, to 1e-8. Under 5 s.
void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    ZooEntry entry = zoo_metric("hopf", n);
    auto pts = draw_points(entry, 50, 1001 + n);
    IdentityReport r = verify_zoo_oracle(entry, pts);
    worst = std::max(worst, r.max_residual);
    ok = ok && r.pass && r.max_residual < 1e-8;
  }
  double elapsed = seconds_since(start);
  ok = ok && elapsed < 5.0;
  report(1, "closed-form frame curvature and Ricci data on the punctured chart",
         ok, "n=2,3,4 x 50 points, worst residual " + fmt(worst) + ", " +
                 fmt(elapsed) + " s");
}

// --------------------------------------------------------------------------
// 2. Symmetrized first-Ricci identity and the scalar-gap/torsion match on the
//    punctured chart, n = 2 and 3, 50 points, residual < 1e-8.
void criterion_2() {
  bool ok = true;
  double worst = 0.0;
  for (int n : {2, 3}) {
    ZooEntry entry = zoo_metric("hopf", n);
    auto pts = draw_points(entry, 50, 2002 + n);
    for (const IdentityReport& r : verify_hopf_identities(entry, pts)) {
      worst = std::max(worst, r.max_residual);
      ok = ok && r.pass && r.max_residual < 1e-8;
    }
  }
  report(2, "symmetrized Ricci identity and scalar gap on the punctured chart",
         ok, "n=2,3 x 50 points, worst residual " + fmt(worst));
}

// --------------------------------------------------------------------------
// 3. The vanishing combination: k = 1, (alpha, beta) = (1, -2) on the n = 2
//    punctured chart over 10^4 samples: |mean| < 1e-8 and spread < 1e-7.
void criterion_3() {
  MetricContext ctx = make_context(zoo_metric("hopf", 2));
  ScanReport scan = constancy_scan(ctx, MixedCurvatureParams{1, 1.0, -2.0}, 100, 100,
                                   3003);
  bool ok = scan.samples == 10000 && std::abs(scan.mean) < 1e-8 &&
            scan.spread < 1e-7 && scan.verdict;
  report(3, "mixed curvature vanishes identically for k=1, beta = -n alpha", ok,
         "10^4 samples, |mean| " + fmt(std::abs(scan.mean)) + ", spread " +
             fmt(scan.spread));
}

// --------------------------------------------------------------------------
// 4. Anti-self-dual Weyl components vanish (max < 1e-7) over 100 points for
//    all five surface metrics; the product metric additionally matches its
//    frame-space closed form (-1, +1, zeros). Under 10 s.
void criterion_4() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"flat", "fubini_study", "complex_hyperbolic", "hopf",
                           "product_case2"}) {
    MetricContext ctx = make_context(zoo_metric(name, 2));
    ScanReport scan = self_duality_scan(ctx, 100, 4004);
    worst = std::max(worst, scan.max);
    ok = ok && scan.verdict && scan.max < 1e-7;
  }
  ZooEntry prod = zoo_metric("product_case2", 2);
  IdentityReport oracle = verify_zoo_oracle(prod, draw_points(prod, 100, 4005));
  ok = ok && oracle.pass;
  double elapsed = seconds_since(start);
  ok = ok && elapsed < 10.0;
  report(4, "self-duality of the five surface metrics", ok,
         "5 metrics x 100 points, worst |W-| " + fmt(worst) + ", product oracle " +
             (oracle.pass ? "ok" : "FAILED") + ", " + fmt(elapsed) + " s");
}

// --------------------------------------------------------------------------
// 5. Conformal transformation law, componentwise to 1e-8: five metrics x
//    five randomly drawn real factors x 20 points.
void criterion_5() {
  SplitMix64 rng(5005);
  std::vector<std::string> factors;
  for (int t = 0; t < 5; ++t) {
    double c1 = rng.uniform(-0.2, 0.2);
    double c2 = rng.uniform(-0.2, 0.2);
    double c3 = rng.uniform(-0.1, 0.1);
    double c4 = rng.uniform(0.05, 0.2);
    std::ostringstream f;
    switch (t % 5) {
      case 0:
        f << c1 << " + " << c2 << "*z1*zb1 + " << c3 << "*z2*zb2";
        break;
      case 1:
        f << c3 << "*(z1*zb2 + z2*zb1) + " << c2 << "*z2*zb2";
        break;
      case 2:
        f << "log(1 + " << c4 << "*z1*zb1 + " << c4 << "*z2*zb2)";
        break;
      case 3:
        f << c1 << "*(z1 + zb1) + " << c3 << "*(z2 + zb2)";
        break;
      case 4:
        f << c3 << "*exp(" << -c4 << "*(z1*zb1 + z2*zb2))";
        break;
    }
    factors.push_back(f.str());
  }

  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"flat", "fubini_study", "complex_hyperbolic", "hopf",
                           "product_case2"}) {
    ZooEntry entry = zoo_metric(name, 2);
    MetricEvaluator eval(entry.spec);
    auto pts = draw_points(entry, 20, 5006);
    for (const std::string& text : factors) {
      Expr f = parse_expression(text, 2);
      for (const IdentityReport& r : conformal_formula_check(eval, f, pts, entry.name)) {
        if (r.id == "conformal_transformation") {
          worst = std::max(worst, r.max_residual);
          ok = ok && r.max_residual < 1e-8;
        }
        ok = ok && r.pass;
      }
    }
  }
  report(5, "conformal transformation law, componentwise", ok,
         "5 metrics x 5 factors x 20 points, worst residual " + fmt(worst));
}

// --------------------------------------------------------------------------
// 6. Monte-Carlo sphere averages: u/n, v/n, (u+v)/(n(n+1)) and the combined
//    mixed-curvature average for k = 1..4, each within 4 standard errors at
//    N = 2*10^5; doubling N halves the variance within 20%. Under 60 s.
void criterion_6() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double worst_sigmas = 0.0;
  struct Target {
    const char* name;
    int n;
  };
  for (Target t : {Target{"hopf", 2}, Target{"complex_hyperbolic", 2},
                   Target{"fubini_study", 3}}) {
    ZooEntry entry = zoo_metric(t.name, t.n);
    MetricEvaluator eval(entry.spec);
    for (int pi = 0; pi < 3; ++pi) {
      ChartPoint p = entry.sample_point(mix_seed(6006, 1, pi));
      PointCurvature pc = curvature_at(eval, p);
      UnitaryFrame frame = unitary_frame(pc.jet.g);
      SphereSamples s = sphere_samples(pc, frame, 200000, 6007 + pi);
      int n = t.n;
      double u = pc.ricci.u, v = pc.ricci.v;

      auto gap = [&](MeanStderr m, double closed) {
        double sigmas = std::abs(m.mean - closed) /
                        (m.stderr_ + 1e-12 * (1.0 + std::abs(closed)) / 4.0);
        worst_sigmas = std::max(worst_sigmas, sigmas);
        return sigmas < 4.0;
      };
      for (int k = 1; k <= 4; ++k)
        ok = ok && gap(mean_stderr(s.ric[k - 1]), closed_form_average_ric(k, u, v, n));
      ok = ok && gap(mean_stderr(s.h), closed_form_average_h(u, v, n));
      for (int k = 1; k <= 4; ++k) {
        MixedCurvatureParams params{k, 1.0, 1.0};
        std::vector<double> c(s.h.size());
        for (std::size_t i = 0; i < c.size(); ++i)
          c[i] = params.alpha * s.ric[k - 1][i] + params.beta * s.h[i];
        ok = ok && gap(mean_stderr(c), closed_form_average_c(params, u, v, n));
      }
    }
  }

  // Variance halving at one representative point.
  {
    ZooEntry entry = zoo_metric("hopf", 2);
    MetricEvaluator eval(entry.spec);
    PointCurvature pc = curvature_at(eval, entry.sample_point(mix_seed(6006, 1, 0)));
    UnitaryFrame frame = unitary_frame(pc.jet.g);
    double s1 = mean_stderr(sphere_samples(pc, frame, 100000, 6100).h).stderr_;
    double s2 = mean_stderr(sphere_samples(pc, frame, 200000, 6101).h).stderr_;
    double ratio = (s2 * s2) / (s1 * s1);
    ok = ok && ratio > 0.4 && ratio < 0.6;
  }

  double elapsed = seconds_since(start);
  ok = ok && elapsed < 60.0;
  report(6, "sphere averages match their closed forms", ok,
         "3 metrics x 3 points x k=1..4, N=2e5, worst " + fmt(worst_sigmas) +
             " sigma, " + fmt(elapsed) + " s");
}

// --------------------------------------------------------------------------
// 7. The surface Ricci combination ric1 + ric2 - ric3 - ric4 = (u - v) g on
//    every n = 2 metric (residual < 1e-8), and the torsion-free degeneracy:
//    on Kahler entries all four Ricci traces agree to 1e-8 and the torsion
//    vanishes below 1e-10.
void criterion_7() {
  bool ok = true;
  double worst_surface = 0.0, worst_torsion = 0.0, worst_ricci_gap = 0.0;
  for (const char* name : {"flat", "fubini_study", "complex_hyperbolic", "hopf",
                           "product_case2"}) {
    ZooEntry entry = zoo_metric(name, 2);
    MetricEvaluator eval(entry.spec);
    auto pts = draw_points(entry, 50, 7007);
    for (const IdentityReport& r : verify_pointwise_identities(eval, pts, entry.name)) {
      ok = ok && r.pass;
      if (r.id == "surface_ricci_identity") {
        worst_surface = std::max(worst_surface, r.max_residual);
        ok = ok && r.max_residual < 1e-8;
      }
    }
    if (entry.tags.kahler) {
      for (const ChartPoint& p : pts) {
        PointCurvature pc = curvature_at(eval, p);
        worst_torsion = std::max(worst_torsion, max_abs(pc.torsion.t));
        const CMatrix* rics[4] = {&pc.ricci.ric1, &pc.ricci.ric2, &pc.ricci.ric3,
                                  &pc.ricci.ric4};
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b)
            worst_ricci_gap =
                std::max(worst_ricci_gap, max_abs_diff(*rics[a], *rics[b]));
      }
    }
  }
  ok = ok && worst_torsion < 1e-10 && worst_ricci_gap < 1e-8;
  report(7, "surface Ricci combination and torsion-free degeneracy", ok,
         "worst residual " + fmt(worst_surface) + ", Kahler torsion " +
             fmt(worst_torsion) + ", Ricci spread " + fmt(worst_ricci_gap));
}

// --------------------------------------------------------------------------
// 8. Consequences of constant mixed curvature on the round surface (k = 2,
//    alpha = beta = 1, c = 5): the symmetrized polarization to 1e-7 and the
//    frame combination to 1e-7 across 20 random unitary frames.
void criterion_8() {
  ZooEntry entry = zoo_metric("fubini_study", 2);
  MetricEvaluator eval(entry.spec);
  auto pts = draw_points(entry, 20, 8008);
  bool ok = true;
  double worst = 0.0;
  bool saw_polarization = false, saw_frames = false;
  for (const IdentityReport& r : constant_curvature_consequences(
           eval, MixedCurvatureParams{2, 1.0, 1.0}, 5.0, pts, 20, 8009, false,
           entry.name)) {
    ok = ok && r.pass && r.max_residual < 1e-7;
    worst = std::max(worst, r.max_residual);
    if (r.id.rfind("polarization_k", 0) == 0) saw_polarization = true;
    if (r.id == "frame_combination_w3") saw_frames = true;
  }
  ok = ok && saw_polarization && saw_frames;
  report(8, "constant-curvature polarization and frame combination", ok,
         "20 points, 20 random frames, worst residual " + fmt(worst));
}

// --------------------------------------------------------------------------
// 9. Negative controls: a 1e-3 perturbation of a single metric component
//    must trip the detectors that the honest metrics pass.
void criterion_9() {
  Expr delta = parse_expression("0.001*z2*zb1", 2);

  // (a) the closed-form oracle stops matching;
  ZooEntry hopf = zoo_metric("hopf", 2);
  ZooEntry bent = hopf;
  bent.spec = perturb_component(hopf.spec, 0, 1, delta, true);
  bool oracle_detects = !verify_zoo_oracle(bent, draw_points(hopf, 30, 9009)).pass;

  // (b) the anti-self-dual components stop vanishing;
  ZooEntry flat = zoo_metric("flat", 2);
  MetricContext warped = make_context(
      perturb_component(flat.spec, 0, 1, delta, true), zoo_sampler(flat));
  ScanReport weyl = self_duality_scan(warped, 30, 9010);
  bool weyl_detects = !weyl.verdict && weyl.max > 1e-5;

  // (c) the constant-curvature polarization stops holding;
  ZooEntry fs = zoo_metric("fubini_study", 2);
  MetricSpec warm = perturb_component(fs.spec, 0, 1, constant(0.001), true);
  MetricEvaluator warm_eval(warm);
  bool polarization_detects = false;
  for (const IdentityReport& r : constant_curvature_consequences(
           warm_eval, MixedCurvatureParams{2, 1.0, 1.0}, 5.0,
           draw_points(fs, 20, 9011), 0, 9012, false, "perturbed")) {
    if (!r.pass) polarization_detects = true;
  }

  // (d) a non-Hermitian corruption cannot even build a curvature tensor.
  MetricSpec broken = perturb_component(flat.spec, 0, 1, constant(0.001), false);
  MetricEvaluator broken_eval(broken);
  bool hermitian_detects = false;
  try {
    curvature_at(broken_eval, flat.sample_point(9013));
  } catch (const SingularMatrixError&) {
    hermitian_detects = true;
  }

  bool ok = oracle_detects && weyl_detects && polarization_detects && hermitian_detects;
  report(9, "1e-3 perturbations trip the detectors", ok,
         std::string("oracle ") + (oracle_detects ? "fires" : "SILENT") + ", weyl " +
             (weyl_detects ? "fires" : "SILENT") + ", polarization " +
             (polarization_detects ? "fires" : "SILENT") + ", hermitian check " +
             (hermitian_detects ? "fires" : "SILENT"));
}

// --------------------------------------------------------------------------
// 10. Determinism: the same seed produces byte-identical JSON reports,
//     independent of thread count and repetition.
void criterion_10() {
  RunConfig serial;
  serial.samples = 20000;
  serial.points = 20;
  serial.vectors = 20;
  serial.frames = 10;
  serial.threads = 1;
  RunConfig parallel = serial;
  parallel.threads = 0;  // hardware concurrency

  MetricContext ctx = make_context(zoo_metric("hopf", 2));
  std::string a = suite_to_json(run_suite(ctx, "all", serial)).dump(2);
  std::string b = suite_to_json(run_suite(ctx, "all", parallel)).dump(2);
  std::string c = suite_to_json(run_suite(ctx, "all", parallel)).dump(2);

  MetricContext prod = make_context(zoo_metric("product_case2", 2));
  std::string s1 = to_json(constancy_scan(prod, MixedCurvatureParams{2, 1.0, 1.0},
                                          25, 25, 1234, 1))
                       .dump();
  std::string s2 = to_json(constancy_scan(prod, MixedCurvatureParams{2, 1.0, 1.0},
                                          25, 25, 1234, 0))
                       .dump();

  bool ok = a == b && b == c && s1 == s2 && !a.empty();
  report(10, "byte-identical reports across threads and reruns", ok,
         "suite dump " + std::to_string(a.size()) + " bytes, scan dump " +
             std::to_string(s1.size()) + " bytes");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();

  if (g_failures > 0) {
    std::printf("ACCEPTANCE: %d of 10 criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all 10 criteria passed\n");
  return 0;
}
