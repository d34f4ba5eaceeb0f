#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chernlab {

using Complex = std::complex<double>;

/// A point of a holomorphic chart: coordinates z_1..z_n plus real parameter
/// values. Evaluation substitutes zb_k := conj(z_k).
struct ChartPoint {
  std::vector<Complex> z;
  std::map<std::string, double> params;

  int dim() const { return static_cast<int>(z.size()); }
};

enum class NodeKind { Constant, Var, AVar, Param, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression node. Subtrees are shared freely; derivatives reuse
/// pieces of their input, so expressions are DAGs in practice.
struct Node {
  NodeKind kind = NodeKind::Constant;
  Complex value{0.0, 0.0};  // Constant
  int index = 0;            // Var / AVar, 1-based
  std::string name;         // Param
  NodePtr a;
  NodePtr b;
  int exponent = 0;  // Pow
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr node) : node_(std::move(node)) {}

  bool empty() const { return node_ == nullptr; }
  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }

 private:
  NodePtr node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& message, std::string subtree);
  const std::string& subtree() const { return subtree_; }

 private:
  std::string subtree_;
};

// Node builders. Binary builders fold constant operands and drop neutral
// elements; nothing else is simplified.
Expr constant(Complex value);
Expr constant(double value);
Expr holo_var(int index);
Expr anti_var(int index);
Expr parameter(std::string name);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr quotient(Expr a, Expr b);
Expr negate(Expr a);
Expr pow_int(Expr base, int exponent);
Expr exp_of(Expr a);
Expr log_of(Expr a);

/// Parses a formula over z1..zn, zb1..zn, conj(...), named parameters,
/// numeric literals, the imaginary unit i, operators + - * / ^, exp, log and
/// parentheses. `n` bounds the variable indices. Precedence: ^ (right
/// associative), unary -, * /, + - (left associative).
Expr parse_expression(std::string_view text, int n);

enum class DerivKind { Holomorphic, Antiholomorphic };

/// Exact symbolic Wirtinger derivative: z_i and zb_i are formally
/// independent, so d z_j/d z_i = delta_ij and d zb_j/d z_i = 0 (and
/// symmetrically for the antiholomorphic derivative).
Expr wirtinger_derivative(const Expr& e, int index, DerivKind kind);

/// Exchanges z_i <-> zb_i and conjugates constants. Evaluating the result at
/// a chart point yields the complex conjugate of the original value.
Expr conjugate_swap(const Expr& e);

/// Renders the tree in the input grammar; output reparses to an expression
/// that evaluates bit-identically.
std::string to_string(const Expr& e);

/// Largest chart-variable index appearing in the tree (0 if none).
int max_variable_index(const Expr& e);

/// Evaluator with a per-point cache of interior node values, so DAG-shaped
/// expressions evaluate in linear time. Use one context per point; a single
/// context may evaluate many expressions that share subtrees.
class EvalContext {
 public:
  EvalContext(std::span<const Complex> z, std::span<const Complex> zb,
              const std::map<std::string, double>* params);
  Complex eval(const Expr& e);

 private:
  Complex eval_node(const Node& node);

  std::span<const Complex> z_;
  std::span<const Complex> zb_;
  const std::map<std::string, double>* params_;
  std::unordered_map<const Node*, Complex> memo_;
};

Complex evaluate(const Expr& e, const ChartPoint& p);

/// Evaluates with independently prescribed antiholomorphic values; used by
/// difference-quotient checks that vary z while holding zb fixed.
Complex evaluate_general(const Expr& e, std::span<const Complex> z,
                         std::span<const Complex> zb,
                         const std::map<std::string, double>& params);

/// Shortest round-trip decimal rendering.
std::string format_double(double v);
std::string format_complex(Complex v);

}  // namespace chernlab
