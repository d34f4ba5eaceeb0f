#include "chernlab/zoo.hpp"

#include <cmath>
#include <stdexcept>

namespace chernlab {

namespace {

double abs_sq(const ChartPoint& p) {
  double s = 0.0;
  for (const Complex& z : p.z) s += std::norm(z);
  return s;
}

// s = z1*zb1 + ... + zn*zbn, built once so components share the subtree.
Expr norm_sq_expr(int n) {
  Expr s = mul(holo_var(1), anti_var(1));
  for (int i = 2; i <= n; ++i) s = add(s, mul(holo_var(i), anti_var(i)));
  return s;
}

MetricSpec flat_spec(int n) {
  MetricSpec spec;
  spec.n = n;
  spec.name = "flat";
  spec.components.resize(static_cast<std::size_t>(n) * n, constant(0.0));
  for (int i = 0; i < n; ++i) spec.component(i, i) = constant(1.0);
  return spec;
}

MetricSpec fubini_study_spec(int n) {
  MetricSpec spec;
  spec.n = n;
  spec.name = "fubini_study";
  spec.components.resize(static_cast<std::size_t>(n) * n);
  Expr d = add(constant(1.0), norm_sq_expr(n));
  Expr d2 = pow_int(d, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr cross = quotient(mul(anti_var(i + 1), holo_var(j + 1)), d2);
      spec.component(i, j) =
          i == j ? sub(quotient(constant(1.0), d), cross) : negate(cross);
    }
  return spec;
}

MetricSpec complex_hyperbolic_spec(int n) {
  MetricSpec spec;
  spec.n = n;
  spec.name = "complex_hyperbolic";
  spec.components.resize(static_cast<std::size_t>(n) * n);
  Expr d = sub(constant(1.0), norm_sq_expr(n));
  Expr d2 = pow_int(d, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr cross = quotient(mul(anti_var(i + 1), holo_var(j + 1)), d2);
      spec.component(i, j) =
          i == j ? add(quotient(constant(1.0), d), cross) : cross;
    }
  return spec;
}

MetricSpec hopf_spec(int n) {
  MetricSpec spec;
  spec.n = n;
  spec.name = "hopf";
  spec.components.resize(static_cast<std::size_t>(n) * n, constant(0.0));
  Expr s = norm_sq_expr(n);
  Expr diag = quotient(constant(1.0), s);
  for (int i = 0; i < n; ++i) spec.component(i, i) = diag;
  return spec;
}

MetricSpec product_case2_spec() {
  MetricSpec spec;
  spec.n = 2;
  spec.name = "product_case2";
  spec.components.resize(4, constant(0.0));
  spec.component(0, 0) = quotient(
      constant(2.0),
      pow_int(sub(constant(1.0), mul(holo_var(1), anti_var(1))), 2));
  spec.component(1, 1) = quotient(
      constant(2.0),
      pow_int(add(constant(1.0), mul(holo_var(2), anti_var(2))), 2));
  return spec;
}

}  // namespace

bool ZooEntry::in_valid_region(const ChartPoint& p) const {
  switch (kind) {
    case ZooKind::Flat:
    case ZooKind::FubiniStudy:
      return true;
    case ZooKind::ComplexHyperbolic:
      return abs_sq(p) < 0.99;
    case ZooKind::Hopf:
      return abs_sq(p) > 1e-6;
    case ZooKind::ProductCase2:
      return std::norm(p.z[0]) < 0.99;
  }
  return false;
}

ChartPoint ZooEntry::sample_point(std::uint64_t key) const {
  SplitMix64 rng(key);
  int n = spec.n;
  ChartPoint p;
  p.z.resize(n);
  switch (kind) {
    case ZooKind::Flat:
    case ZooKind::FubiniStudy:
      for (int i = 0; i < n; ++i)
        p.z[i] = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      return p;
    case ZooKind::ComplexHyperbolic:
      for (;;) {
        for (int i = 0; i < n; ++i)
          p.z[i] = Complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
        if (abs_sq(p) <= 0.8) return p;
      }
    case ZooKind::Hopf: {
      // Radius uniform in [0.5, 2], direction from normalized Gaussians.
      double target = rng.uniform(0.5, 2.0);
      for (;;) {
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
          p.z[i] = rng.normal_complex();
          norm += std::norm(p.z[i]);
        }
        norm = std::sqrt(norm);
        if (norm > 1e-8) {
          for (int i = 0; i < n; ++i) p.z[i] *= target / norm;
          return p;
        }
      }
    }
    case ZooKind::ProductCase2:
      for (;;) {
        p.z[0] = Complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8));
        if (std::norm(p.z[0]) <= 0.64) break;
      }
      p.z[1] = Complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
      return p;
  }
  return p;
}

std::vector<std::string> zoo_names() {
  return {"flat", "fubini_study", "complex_hyperbolic", "hopf", "product_case2"};
}

ZooEntry zoo_metric(const std::string& name, int n) {
  if (n < 1 || n > 8)
    throw std::invalid_argument("zoo dimension must be between 1 and 8");
  ZooEntry entry;
  entry.name = name;
  if (name == "flat") {
    entry.kind = ZooKind::Flat;
    entry.spec = flat_spec(n);
    entry.tags = {true, true, true, true};
    entry.expected_h = 0.0;
  } else if (name == "fubini_study") {
    entry.kind = ZooKind::FubiniStudy;
    entry.spec = fubini_study_spec(n);
    entry.tags = {true, true, true, true};
    entry.expected_h = 2.0;
  } else if (name == "complex_hyperbolic") {
    entry.kind = ZooKind::ComplexHyperbolic;
    entry.spec = complex_hyperbolic_spec(n);
    entry.tags = {true, true, true, true};
    entry.expected_h = -2.0;
  } else if (name == "hopf") {
    // At n = 1 this chart metric is the flat cylinder: Kahler, Chern-flat,
    // torsion-free, so none of the tags below would hold. Require n >= 2.
    if (n < 2)
      throw std::invalid_argument("hopf needs dimension n >= 2");
    entry.kind = ZooKind::Hopf;
    entry.spec = hopf_spec(n);
    entry.tags = {false, false, false, true};
    entry.has_oracle = true;
  } else if (name == "product_case2") {
    if (n != 2)
      throw std::invalid_argument("product_case2 is a surface (n = 2)");
    entry.kind = ZooKind::ProductCase2;
    entry.spec = product_case2_spec();
    entry.tags = {true, true, false, true};
    entry.has_oracle = true;
  } else {
    throw std::invalid_argument("unknown zoo metric '" + name + "'");
  }
  return entry;
}

ZooOracleValues zoo_oracle(const ZooEntry& entry, const ChartPoint& p) {
  int n = entry.spec.n;
  ZooOracleValues o{CMatrix(n), Tensor4(n), CMatrix(n), CMatrix(n),
                    CMatrix(n), CMatrix(n), 0.0, 0.0, 0.0};

  if (entry.kind == ZooKind::Hopf) {
    // Frame e_a = |z| d/dz_a. With q_ab = zb_a z_b / |z|^2:
    //   R(e_a, ebar_b, e_c, ebar_d) = (delta_ab - q_ab) delta_cd
    //   ric1 = n (I - q), ric2 = (n-1) I, ric3 = ric4 = I - q
    //   u = n^2 - n, v = n - 1, |eta|^2 = (n-1)^2.
    double s = abs_sq(p);
    if (s <= 0.0) throw std::invalid_argument("hopf oracle needs z != 0");
    double h = std::sqrt(s);
    CMatrix q(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        q(a, b) = std::conj(p.z[a]) * p.z[b] / s;
    for (int a = 0; a < n; ++a) o.frame(a, a) = Complex(h, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Complex base = (a == b ? Complex(1.0, 0.0) : Complex(0.0, 0.0)) - q(a, b);
        for (int c = 0; c < n; ++c) o.frame_curvature(a, b, c, c) = base;
        o.frame_ric1(a, b) = static_cast<double>(n) * base;
        o.frame_ric3(a, b) = base;
        o.frame_ric4(a, b) = base;
      }
    for (int c = 0; c < n; ++c)
      o.frame_ric2(c, c) = Complex(static_cast<double>(n - 1), 0.0);
    o.u = static_cast<double>(n) * n - n;
    o.v = static_cast<double>(n - 1);
    o.eta_norm_sq = static_cast<double>(n - 1) * (n - 1);
    return o;
  }

  if (entry.kind == ZooKind::ProductCase2) {
    // Frame e_1 = (1-|z1|^2)/sqrt(2) d/dz_1, e_2 = (1+|z2|^2)/sqrt(2) d/dz_2.
    // The factors are curves of constant curvature -1 and +1, so the only
    // nonzero frame components are R(1,1,1,1) = -1 and R(2,2,2,2) = +1.
    double s1 = std::norm(p.z[0]);
    double s2 = std::norm(p.z[1]);
    o.frame(0, 0) = Complex((1.0 - s1) / std::sqrt(2.0), 0.0);
    o.frame(1, 1) = Complex((1.0 + s2) / std::sqrt(2.0), 0.0);
    o.frame_curvature(0, 0, 0, 0) = Complex(-1.0, 0.0);
    o.frame_curvature(1, 1, 1, 1) = Complex(1.0, 0.0);
    for (CMatrix* ric : {&o.frame_ric1, &o.frame_ric2, &o.frame_ric3, &o.frame_ric4}) {
      (*ric)(0, 0) = Complex(-1.0, 0.0);
      (*ric)(1, 1) = Complex(1.0, 0.0);
    }
    o.u = 0.0;
    o.v = 0.0;
    o.eta_norm_sq = 0.0;
    return o;
  }

  throw std::invalid_argument("no pointwise oracle for zoo metric '" +
                              entry.name + "'");
}

}  // namespace chernlab
