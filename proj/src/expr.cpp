#include "chernlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace chernlab {

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_const(const Expr& e, Complex v) {
  return e.node().kind == NodeKind::Constant && e.node().value == v;
}

Complex ipow(Complex base, int e) {
  if (e < 0) return Complex(1.0, 0.0) / ipow(base, -e);
  Complex r(1.0, 0.0);
  Complex b = base;
  unsigned k = static_cast<unsigned>(e);
  while (k != 0) {
    if (k & 1u) r *= b;
    b *= b;
    k >>= 1u;
  }
  return r;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

EvalError::EvalError(const std::string& message, std::string subtree)
    : std::runtime_error(message + " in subexpression: " + subtree),
      subtree_(std::move(subtree)) {}

Expr constant(Complex value) {
  Node n;
  n.kind = NodeKind::Constant;
  n.value = value;
  return Expr(make_node(std::move(n)));
}

Expr constant(double value) { return constant(Complex(value, 0.0)); }

Expr holo_var(int index) {
  Node n;
  n.kind = NodeKind::Var;
  n.index = index;
  return Expr(make_node(std::move(n)));
}

Expr anti_var(int index) {
  Node n;
  n.kind = NodeKind::AVar;
  n.index = index;
  return Expr(make_node(std::move(n)));
}

Expr parameter(std::string name) {
  Node n;
  n.kind = NodeKind::Param;
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

Expr add(Expr a, Expr b) {
  const Node& na = a.node();
  const Node& nb = b.node();
  if (na.kind == NodeKind::Constant && nb.kind == NodeKind::Constant)
    return constant(na.value + nb.value);
  if (is_const(a, {0.0, 0.0})) return b;
  if (is_const(b, {0.0, 0.0})) return a;
  Node n;
  n.kind = NodeKind::Add;
  n.a = a.ptr();
  n.b = b.ptr();
  return Expr(make_node(std::move(n)));
}

Expr sub(Expr a, Expr b) {
  const Node& na = a.node();
  const Node& nb = b.node();
  if (na.kind == NodeKind::Constant && nb.kind == NodeKind::Constant)
    return constant(na.value - nb.value);
  if (is_const(b, {0.0, 0.0})) return a;
  if (is_const(a, {0.0, 0.0})) return negate(b);
  Node n;
  n.kind = NodeKind::Sub;
  n.a = a.ptr();
  n.b = b.ptr();
  return Expr(make_node(std::move(n)));
}

Expr mul(Expr a, Expr b) {
  const Node& na = a.node();
  const Node& nb = b.node();
  if (na.kind == NodeKind::Constant && nb.kind == NodeKind::Constant)
    return constant(na.value * nb.value);
  if (is_const(a, {0.0, 0.0}) || is_const(b, {0.0, 0.0})) return constant(0.0);
  if (is_const(a, {1.0, 0.0})) return b;
  if (is_const(b, {1.0, 0.0})) return a;
  Node n;
  n.kind = NodeKind::Mul;
  n.a = a.ptr();
  n.b = b.ptr();
  return Expr(make_node(std::move(n)));
}

Expr quotient(Expr a, Expr b) {
  const Node& na = a.node();
  const Node& nb = b.node();
  if (is_const(b, {1.0, 0.0})) return a;
  if (is_const(a, {0.0, 0.0})) return constant(0.0);
  if (na.kind == NodeKind::Constant && nb.kind == NodeKind::Constant &&
      nb.value != Complex(0.0, 0.0))
    return constant(na.value / nb.value);
  Node n;
  n.kind = NodeKind::Div;
  n.a = a.ptr();
  n.b = b.ptr();
  return Expr(make_node(std::move(n)));
}

Expr negate(Expr a) {
  const Node& na = a.node();
  if (na.kind == NodeKind::Constant) return constant(-na.value);
  if (na.kind == NodeKind::Neg) return Expr(na.a);
  Node n;
  n.kind = NodeKind::Neg;
  n.a = a.ptr();
  return Expr(make_node(std::move(n)));
}

Expr pow_int(Expr base, int exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  const Node& nb = base.node();
  if (nb.kind == NodeKind::Constant &&
      !(exponent < 0 && nb.value == Complex(0.0, 0.0)))
    return constant(ipow(nb.value, exponent));
  Node n;
  n.kind = NodeKind::Pow;
  n.a = base.ptr();
  n.exponent = exponent;
  return Expr(make_node(std::move(n)));
}

Expr exp_of(Expr a) {
  Node n;
  n.kind = NodeKind::Exp;
  n.a = a.ptr();
  return Expr(make_node(std::move(n)));
}

Expr log_of(Expr a) {
  Node n;
  n.kind = NodeKind::Log;
  n.a = a.ptr();
  return Expr(make_node(std::move(n)));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  std::string_view text;
  int n = 0;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
            text[pos] == '\r'))
      ++pos;
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  Expr parse_full() {
    Expr e = parse_sum();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input", pos);
    return e;
  }

  Expr parse_sum() {
    Expr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (consume('+'))
        lhs = add(lhs, parse_term());
      else if (consume('-'))
        lhs = sub(lhs, parse_term());
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (consume('*'))
        lhs = mul(lhs, parse_unary());
      else if (consume('/'))
        lhs = quotient(lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    skip_ws();
    if (consume('-')) return negate(parse_unary());
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    if (consume('^')) {
      skip_ws();
      std::size_t at = pos;
      // The exponent subexpression (sign, nested ^, parentheses allowed)
      // must fold to an integer constant.
      Expr e = parse_unary();
      const Node& nd = e.node();
      if (nd.kind != NodeKind::Constant)
        fail("exponent must be an integer constant", at);
      double re = nd.value.real();
      if (nd.value.imag() != 0.0 || re != std::floor(re) ||
          std::abs(re) > 1073741824.0)
        fail("exponent must be an integer constant", at);
      return pow_int(base, static_cast<int>(re));
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    std::size_t at = pos;
    char c = peek();
    if (c == '(') {
      ++pos;
      Expr e = parse_sum();
      skip_ws();
      if (!consume(')')) fail("expected ')'", pos);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number(at);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident(at);
    if (pos >= text.size()) fail("unexpected end of input", pos);
    fail("unexpected character", pos);
  }

  Expr parse_number(std::size_t at) {
    double value = 0.0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("malformed number", at);
    pos += static_cast<std::size_t>(ptr - begin);
    return constant(value);
  }

  Expr parse_ident(std::size_t at) {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    std::string_view name = text.substr(start, pos - start);

    if (name == "exp" || name == "log" || name == "conj") {
      skip_ws();
      if (!consume('(')) fail("expected '(' after function name", pos);
      Expr arg = parse_sum();
      skip_ws();
      if (!consume(')')) fail("expected ')'", pos);
      if (name == "exp") return exp_of(arg);
      if (name == "log") return log_of(arg);
      return conjugate_swap(arg);
    }
    if (name == "i") return constant(Complex(0.0, 1.0));

    if (int index = variable_index(name, false); index != 0)
      return checked_var(index, at, false);
    if (int index = variable_index(name, true); index != 0)
      return checked_var(index, at, true);

    return parameter(std::string(name));
  }

  // "z<digits>" / "zb<digits>"; returns 0 when `name` is not of that shape.
  static int variable_index(std::string_view name, bool anti) {
    std::string_view prefix = anti ? "zb" : "z";
    if (name.size() <= prefix.size() || !name.starts_with(prefix)) return 0;
    int index = 0;
    const char* begin = name.data() + prefix.size();
    const char* end = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(begin, end, index);
    if (ec != std::errc() || ptr != end || index <= 0) return 0;
    return index;
  }

  Expr checked_var(int index, std::size_t at, bool anti) {
    if (index > n)
      fail("variable index " + std::to_string(index) +
               " out of range for dimension " + std::to_string(n),
           at);
    return anti ? anti_var(index) : holo_var(index);
  }
};

}  // namespace

Expr parse_expression(std::string_view text, int n) {
  if (n < 1 || n > 8)
    throw ParseError("dimension must be between 1 and 8", 0);
  Parser p{text, n};
  return p.parse_full();
}

// ---------------------------------------------------------------------------
// Derivative, conjugate swap

namespace {

struct DerivBuilder {
  int index;
  DerivKind kind;
  std::unordered_map<const Node*, Expr> memo;

  Expr run(const NodePtr& p) {
    if (auto it = memo.find(p.get()); it != memo.end()) return it->second;
    Expr result = build(p);
    memo.emplace(p.get(), result);
    return result;
  }

  Expr build(const NodePtr& p) {
    const Node& nd = *p;
    switch (nd.kind) {
      case NodeKind::Constant:
      case NodeKind::Param:
        return constant(0.0);
      case NodeKind::Var:
        return constant(kind == DerivKind::Holomorphic && nd.index == index
                            ? 1.0
                            : 0.0);
      case NodeKind::AVar:
        return constant(kind == DerivKind::Antiholomorphic && nd.index == index
                            ? 1.0
                            : 0.0);
      case NodeKind::Add:
        return add(run(nd.a), run(nd.b));
      case NodeKind::Sub:
        return sub(run(nd.a), run(nd.b));
      case NodeKind::Neg:
        return negate(run(nd.a));
      case NodeKind::Mul:
        return add(mul(run(nd.a), Expr(nd.b)), mul(Expr(nd.a), run(nd.b)));
      case NodeKind::Div:
        // (a'b - ab') / b^2
        return quotient(sub(mul(run(nd.a), Expr(nd.b)),
                            mul(Expr(nd.a), run(nd.b))),
                        pow_int(Expr(nd.b), 2));
      case NodeKind::Pow:
        return mul(constant(static_cast<double>(nd.exponent)),
                   mul(pow_int(Expr(nd.a), nd.exponent - 1), run(nd.a)));
      case NodeKind::Exp:
        return mul(Expr(p), run(nd.a));  // exp(f) f'
      case NodeKind::Log:
        return quotient(run(nd.a), Expr(nd.a));
    }
    return constant(0.0);  // unreachable
  }
};

struct SwapBuilder {
  std::unordered_map<const Node*, Expr> memo;

  Expr run(const NodePtr& p) {
    if (auto it = memo.find(p.get()); it != memo.end()) return it->second;
    Expr result = build(p);
    memo.emplace(p.get(), result);
    return result;
  }

  Expr build(const NodePtr& p) {
    const Node& nd = *p;
    switch (nd.kind) {
      case NodeKind::Constant:
        return constant(std::conj(nd.value));
      case NodeKind::Var:
        return anti_var(nd.index);
      case NodeKind::AVar:
        return holo_var(nd.index);
      case NodeKind::Param:
        return Expr(p);
      case NodeKind::Add:
        return add(run(nd.a), run(nd.b));
      case NodeKind::Sub:
        return sub(run(nd.a), run(nd.b));
      case NodeKind::Mul:
        return mul(run(nd.a), run(nd.b));
      case NodeKind::Div:
        return quotient(run(nd.a), run(nd.b));
      case NodeKind::Neg:
        return negate(run(nd.a));
      case NodeKind::Pow:
        return pow_int(run(nd.a), nd.exponent);
      case NodeKind::Exp:
        return exp_of(run(nd.a));
      case NodeKind::Log:
        return log_of(run(nd.a));
    }
    return Expr(p);  // unreachable
  }
};

}  // namespace

Expr wirtinger_derivative(const Expr& e, int index, DerivKind kind) {
  if (e.empty()) throw std::invalid_argument("empty expression");
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  DerivBuilder builder{index, kind, {}};
  return builder.run(e.ptr());
}

Expr conjugate_swap(const Expr& e) {
  if (e.empty()) throw std::invalid_argument("empty expression");
  SwapBuilder builder;
  return builder.run(e.ptr());
}

// ---------------------------------------------------------------------------
// Printing

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_complex(Complex v) {
  if (v.imag() == 0.0) return format_double(v.real());
  std::string s = "(" + format_double(v.real());
  s += v.imag() < 0.0 ? "-i*" + format_double(-v.imag())
                      : "+i*" + format_double(v.imag());
  return s + ")";
}

namespace {

// Rendering precedence: sums 1, products 2, unary minus 3, powers 4, atoms 5.
int node_precedence(const Node& nd) {
  switch (nd.kind) {
    case NodeKind::Add:
    case NodeKind::Sub:
      return 1;
    case NodeKind::Mul:
    case NodeKind::Div:
      return 2;
    case NodeKind::Neg:
      return 3;
    case NodeKind::Pow:
      return 4;
    case NodeKind::Constant:
      // negative reals print with a leading '-', which binds like unary minus
      return (nd.value.imag() == 0.0 && nd.value.real() < 0.0) ? 3 : 5;
    default:
      return 5;
  }
}

void print_node(const Node& nd, int context, std::string& out);

void print_child(const NodePtr& p, int context, std::string& out) {
  const Node& nd = *p;
  bool parens = node_precedence(nd) < context;
  if (parens) out += '(';
  print_node(nd, parens ? 0 : context, out);
  if (parens) out += ')';
}

void print_node(const Node& nd, int, std::string& out) {
  switch (nd.kind) {
    case NodeKind::Constant:
      out += format_complex(nd.value);
      return;
    case NodeKind::Var:
      out += "z" + std::to_string(nd.index);
      return;
    case NodeKind::AVar:
      out += "zb" + std::to_string(nd.index);
      return;
    case NodeKind::Param:
      out += nd.name;
      return;
    case NodeKind::Add:
      print_child(nd.a, 1, out);
      out += '+';
      print_child(nd.b, 2, out);
      return;
    case NodeKind::Sub:
      print_child(nd.a, 1, out);
      out += '-';
      print_child(nd.b, 2, out);
      return;
    case NodeKind::Mul:
      print_child(nd.a, 2, out);
      out += '*';
      print_child(nd.b, 3, out);
      return;
    case NodeKind::Div:
      print_child(nd.a, 2, out);
      out += '/';
      print_child(nd.b, 3, out);
      return;
    case NodeKind::Neg:
      out += '-';
      print_child(nd.a, 4, out);
      return;
    case NodeKind::Pow:
      print_child(nd.a, 5, out);
      out += '^';
      if (nd.exponent < 0)
        out += "(" + std::to_string(nd.exponent) + ")";
      else
        out += std::to_string(nd.exponent);
      return;
    case NodeKind::Exp:
    case NodeKind::Log:
      out += nd.kind == NodeKind::Exp ? "exp(" : "log(";
      print_child(nd.a, 0, out);
      out += ')';
      return;
  }
}

std::string node_to_string(const Node& nd) {
  std::string out;
  print_node(nd, 0, out);
  return out;
}

}  // namespace

std::string to_string(const Expr& e) {
  if (e.empty()) return "";
  return node_to_string(e.node());
}

int max_variable_index(const Expr& e) {
  if (e.empty()) return 0;
  int result = 0;
  // Iterative DFS; trees are DAGs, revisits are harmless here.
  std::vector<const Node*> stack{&e.node()};
  std::unordered_map<const Node*, bool> seen;
  while (!stack.empty()) {
    const Node* nd = stack.back();
    stack.pop_back();
    if (seen[nd]) continue;
    seen[nd] = true;
    if (nd->kind == NodeKind::Var || nd->kind == NodeKind::AVar)
      result = std::max(result, nd->index);
    if (nd->a) stack.push_back(nd->a.get());
    if (nd->b) stack.push_back(nd->b.get());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Evaluation

EvalContext::EvalContext(std::span<const Complex> z,
                         std::span<const Complex> zb,
                         const std::map<std::string, double>* params)
    : z_(z), zb_(zb), params_(params) {}

Complex EvalContext::eval(const Expr& e) {
  if (e.empty()) throw std::invalid_argument("empty expression");
  Complex v = eval_node(e.node());
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw EvalError("non-finite value", node_to_string(e.node()));
  return v;
}

Complex EvalContext::eval_node(const Node& nd) {
  switch (nd.kind) {
    case NodeKind::Constant:
      return nd.value;
    case NodeKind::Var:
      if (nd.index > static_cast<int>(z_.size()))
        throw EvalError("variable index exceeds point dimension",
                        node_to_string(nd));
      return z_[nd.index - 1];
    case NodeKind::AVar:
      if (nd.index > static_cast<int>(zb_.size()))
        throw EvalError("variable index exceeds point dimension",
                        node_to_string(nd));
      return zb_[nd.index - 1];
    case NodeKind::Param: {
      if (params_ != nullptr)
        if (auto it = params_->find(nd.name); it != params_->end())
          return Complex(it->second, 0.0);
      throw EvalError("unknown parameter '" + nd.name + "'",
                      node_to_string(nd));
    }
    default:
      break;
  }

  if (auto it = memo_.find(&nd); it != memo_.end()) return it->second;

  Complex v;
  switch (nd.kind) {
    case NodeKind::Add:
      v = eval_node(*nd.a) + eval_node(*nd.b);
      break;
    case NodeKind::Sub:
      v = eval_node(*nd.a) - eval_node(*nd.b);
      break;
    case NodeKind::Mul:
      v = eval_node(*nd.a) * eval_node(*nd.b);
      break;
    case NodeKind::Div: {
      Complex num = eval_node(*nd.a);
      Complex den = eval_node(*nd.b);
      if (den == Complex(0.0, 0.0))
        throw EvalError("division by zero", node_to_string(nd));
      v = num / den;
      break;
    }
    case NodeKind::Neg:
      v = -eval_node(*nd.a);
      break;
    case NodeKind::Pow: {
      Complex base = eval_node(*nd.a);
      if (nd.exponent < 0 && base == Complex(0.0, 0.0))
        throw EvalError("zero raised to a negative power",
                        node_to_string(nd));
      v = ipow(base, nd.exponent);
      break;
    }
    case NodeKind::Exp:
      v = std::exp(eval_node(*nd.a));
      break;
    case NodeKind::Log: {
      Complex arg = eval_node(*nd.a);
      if (arg == Complex(0.0, 0.0))
        throw EvalError("log of zero", node_to_string(nd));
      v = std::log(arg);
      break;
    }
    default:
      v = Complex(0.0, 0.0);  // unreachable
      break;
  }
  memo_.emplace(&nd, v);
  return v;
}

Complex evaluate(const Expr& e, const ChartPoint& p) {
  std::vector<Complex> zb(p.z.size());
  for (std::size_t k = 0; k < p.z.size(); ++k) zb[k] = std::conj(p.z[k]);
  EvalContext ctx(p.z, zb, &p.params);
  return ctx.eval(e);
}

Complex evaluate_general(const Expr& e, std::span<const Complex> z,
                         std::span<const Complex> zb,
                         const std::map<std::string, double>& params) {
  EvalContext ctx(z, zb, &params);
  return ctx.eval(e);
}

}  // namespace chernlab
