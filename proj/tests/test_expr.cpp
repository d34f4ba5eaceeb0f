#include <doctest.h>

#include <chernlab/expr.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

using namespace chernlab;

namespace {

Complex ev(const std::string& text, const ChartPoint& p, int n) {
  return evaluate(parse_expression(text, n), p);
}

ChartPoint point2(Complex z1, Complex z2) { return ChartPoint{{z1, z2}, {}}; }

// Expressions exercising every node kind over two variables.
const std::vector<std::string> kBattery = {
    "z1",
    "zb2",
    "1.5 - 0.5*i",
    "z1 + 2*zb1 - z2",
    "z1*z2*zb1",
    "z1 / (1 + z2*zb2)",
    "-z1^3",
    "(z1 + zb2)^2",
    "exp(z1 - zb2)",
    "log(2 + z1*zb1 + z2*zb2)",
    "conj(z1*z2 + i)",
    "exp(log(1 + z1*zb1))",
    "(1 + z1*zb2)^(-2)",
    "a + b*z1*zb1",
};

const std::map<std::string, double> kParams = {{"a", 0.7}, {"b", -1.3}};

const std::vector<ChartPoint> kPoints = {
    {{Complex(0.3, 0.1), Complex(-0.2, 0.4)}, kParams},
    {{Complex(-0.5, -0.6), Complex(0.1, 0.0)}, kParams},
    {{Complex(0.0, 0.9), Complex(0.7, -0.3)}, kParams},
};

}  // namespace

TEST_CASE("arithmetic, precedence and literals") {
  ChartPoint p = point2({2.0, 0.0}, {0.0, 0.0});
  CHECK(ev("1 + 2*3", p, 2) == Complex(7.0, 0.0));
  CHECK(ev("2^3^2", p, 2) == Complex(512.0, 0.0));  // right associative
  CHECK(ev("6/4/2", p, 2) == Complex(0.75, 0.0));   // left associative
  CHECK(ev("(1+i)*(1-i)", p, 2) == Complex(2.0, 0.0));
  CHECK(ev("-z1^2", p, 2) == Complex(-4.0, 0.0));  // unary minus binds looser than ^
  CHECK(ev(".5", p, 2) == Complex(0.5, 0.0));
  CHECK(ev("2e-3", p, 2) == Complex(0.002, 0.0));
  CHECK(ev("1.5e+2", p, 2) == Complex(150.0, 0.0));
  CHECK(ev("2*i^2", p, 2) == Complex(-2.0, 0.0));
}

TEST_CASE("variables, conjugates and parameters") {
  ChartPoint p{{Complex(0.3, 0.1), Complex(-0.2, 0.4)}, {{"a", 2.5}}};
  CHECK(ev("z1", p, 2) == Complex(0.3, 0.1));
  CHECK(ev("zb1", p, 2) == Complex(0.3, -0.1));  // zb_k evaluates to conj(z_k)
  CHECK(std::abs(ev("z2*zb2", p, 2) - Complex(0.2, 0.0)) < 1e-16);
  CHECK(ev("a*z1", p, 2) == 2.5 * Complex(0.3, 0.1));

  // conj(...) is rewritten at parse time: evaluating it gives the conjugate.
  Complex inner = ev("z1*z2 + i*zb2", p, 2);
  CHECK(ev("conj(z1*z2 + i*zb2)", p, 2) == std::conj(inner));

  // Identifiers that are not z<k>/zb<k>/i/functions are parameters.  In
  // particular "z0" is a parameter name (variable indices are 1-based), so
  // evaluating it unbound fails rather than silently aliasing a coordinate.
  Expr z0 = parse_expression("z0", 2);
  CHECK_THROWS_AS(evaluate(z0, p), EvalError);

  CHECK(max_variable_index(parse_expression("z1 + zb2", 4)) == 2);
  CHECK(max_variable_index(parse_expression("3.5", 4)) == 0);
}

TEST_CASE("parse errors carry byte offsets") {
  auto offset_of = [](const std::string& text, int n) -> std::size_t {
    try {
      parse_expression(text, n);
    } catch (const ParseError& e) {
      return e.offset();
    }
    FAIL("expected ParseError for: ", text);
    return 0;
  };
  CHECK(offset_of("z1 +", 2) == 4);     // unexpected end of input
  CHECK(offset_of("z3", 2) == 0);       // index out of range for n = 2
  CHECK(offset_of("(z1", 2) == 3);      // missing ')'
  CHECK(offset_of("z1 @ z2", 2) == 3);  // trailing garbage
  CHECK(offset_of("1 + )", 2) == 4);    // unexpected character
  CHECK(offset_of("z1 ^ zb1", 2) == 5);
  CHECK(offset_of("z1^2.5", 2) == 3);  // exponent must be an integer constant
  CHECK(offset_of("", 2) == 0);

  CHECK_THROWS_WITH_AS(parse_expression("z3", 2),
                       "variable index 3 out of range for dimension 2 (at byte 0)",
                       ParseError);
  CHECK_THROWS_AS(parse_expression("z1", 0), ParseError);
  CHECK_THROWS_AS(parse_expression("z1", 9), ParseError);
}

TEST_CASE("evaluation errors name the failing subexpression") {
  ChartPoint origin{{Complex(0.0, 0.0)}, {}};
  try {
    evaluate(parse_expression("1/z1", 1), origin);
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(e.subtree() == "1/z1");
    CHECK(std::string(e.what()).find("division by zero") != std::string::npos);
  }
  CHECK_THROWS_AS(evaluate(parse_expression("log(z1)", 1), origin), EvalError);
  CHECK_THROWS_AS(evaluate(parse_expression("z1^(-2)", 1), origin), EvalError);
  // Overflow is reported as a non-finite value, not returned as inf.
  ChartPoint big{{Complex(1e6, 0.0)}, {}};
  CHECK_THROWS_AS(evaluate(parse_expression("exp(z1)", 1), big), EvalError);
  ChartPoint one{{Complex(1.0, 0.0)}, {}};
  CHECK_THROWS_AS(evaluate(parse_expression("missing*z1", 1), one), EvalError);
}

TEST_CASE("wirtinger derivative catalog") {
  // d/dz and d/dzb treat z_k and zb_k as independent formal variables.
  Expr e = parse_expression("z1^2*zb1", 1);
  CHECK(to_string(wirtinger_derivative(e, 1, DerivKind::Holomorphic)) == "2*z1*zb1");
  CHECK(to_string(wirtinger_derivative(e, 1, DerivKind::Antiholomorphic)) == "z1^2");

  Expr f = parse_expression("log(1 + z1*zb1)", 1);
  CHECK(to_string(wirtinger_derivative(f, 1, DerivKind::Antiholomorphic)) ==
        "z1/(1+z1*zb1)");

  Expr g = parse_expression("exp(2*z1)", 1);
  CHECK(to_string(wirtinger_derivative(g, 1, DerivKind::Holomorphic)) == "exp(2*z1)*2");

  // Derivative in an absent variable is identically zero.
  Expr h = wirtinger_derivative(parse_expression("z1*zb1", 2), 2, DerivKind::Holomorphic);
  CHECK(evaluate(h, kPoints[0]) == Complex(0.0, 0.0));

  CHECK_THROWS_AS(wirtinger_derivative(e, 0, DerivKind::Holomorphic),
                  std::invalid_argument);
}

TEST_CASE("derivatives match central differences in the formal variables") {
  // evaluate_general lets z and zb vary independently, which is exactly the
  // formal independence the Wirtinger derivative encodes: perturb one while
  // holding the other fixed and compare against the symbolic derivative.
  const double h = 1e-5;
  for (const auto& text : kBattery) {
    Expr e = parse_expression(text, 2);
    for (const auto& p : kPoints) {
      std::vector<Complex> zb = {std::conj(p.z[0]), std::conj(p.z[1])};
      for (int idx = 1; idx <= 2; ++idx) {
        for (DerivKind kind : {DerivKind::Holomorphic, DerivKind::Antiholomorphic}) {
          Complex exact = evaluate_general(wirtinger_derivative(e, idx, kind), p.z,
                                           zb, p.params);
          auto shifted = [&](double step) {
            std::vector<Complex> z = p.z, zbv = zb;
            if (kind == DerivKind::Holomorphic)
              z[idx - 1] += step;
            else
              zbv[idx - 1] += step;
            return evaluate_general(e, z, zbv, p.params);
          };
          Complex numeric = (shifted(h) - shifted(-h)) / (2.0 * h);
          CHECK(std::abs(exact - numeric) < 1e-7 * (1.0 + std::abs(exact)));
        }
      }
    }
  }
}

TEST_CASE("mixed second derivatives commute") {
  for (const auto& text : kBattery) {
    Expr e = parse_expression(text, 2);
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        Expr di_dbj = wirtinger_derivative(
            wirtinger_derivative(e, j, DerivKind::Antiholomorphic), i,
            DerivKind::Holomorphic);
        Expr dbj_di = wirtinger_derivative(
            wirtinger_derivative(e, i, DerivKind::Holomorphic), j,
            DerivKind::Antiholomorphic);
        for (const auto& p : kPoints) {
          Complex a = evaluate(di_dbj, p);
          Complex b = evaluate(dbj_di, p);
          CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
        }
      }
    }
  }
}

TEST_CASE("conjugate swap commutes with evaluation") {
  for (const auto& text : kBattery) {
    Expr e = parse_expression(text, 2);
    Expr swapped = conjugate_swap(e);
    for (const auto& p : kPoints) {
      Complex direct = std::conj(evaluate(e, p));
      Complex via_swap = evaluate(swapped, p);
      CHECK(std::abs(direct - via_swap) < 1e-15 * (1.0 + std::abs(direct)));
    }
  }
  // Swapping twice restores the original values exactly.
  Expr e = parse_expression("exp(i*z1)/(1 + zb2^2)", 2);
  Expr twice = conjugate_swap(conjugate_swap(e));
  for (const auto& p : kPoints) CHECK(evaluate(e, p) == evaluate(twice, p));
}

TEST_CASE("rendering round-trips bit for bit") {
  for (const auto& text : kBattery) {
    Expr e = parse_expression(text, 2);
    Expr back = parse_expression(to_string(e), 2);
    for (const auto& p : kPoints) CHECK(evaluate(e, p) == evaluate(back, p));
  }
  // Derivatives round-trip too; they are what metric files ultimately drive.
  for (const auto& text : kBattery) {
    Expr d = wirtinger_derivative(parse_expression(text, 2), 1,
                                  DerivKind::Antiholomorphic);
    Expr back = parse_expression(to_string(d), 2);
    for (const auto& p : kPoints) CHECK(evaluate(d, p) == evaluate(back, p));
  }
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1.0 / 3.0) == "-0.3333333333333333");
  CHECK(format_complex(Complex(0.5, -2.0)) == "(0.5-i*2)");
  for (double v : {1e-17, 3.141592653589793, -0.7, 1e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("evaluation caches shared subtrees coherently") {
  // A DAG built by reusing one subtree several times must evaluate the same
  // as the equivalent tree parsed from text.
  Expr base = parse_expression("1 + z1*zb1", 1);
  Expr dag = mul(add(base, base), log_of(base));
  Expr flat = parse_expression("((1 + z1*zb1) + (1 + z1*zb1)) * log(1 + z1*zb1)", 1);
  ChartPoint p{{Complex(0.4, -0.3)}, {}};
  CHECK(evaluate(dag, p) == evaluate(flat, p));
}
