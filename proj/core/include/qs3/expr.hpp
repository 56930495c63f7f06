#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qs3 {

enum class ExprKind { Var, Const, Add, Sub, Mul, Div, IntPow, Sqrt, Sin, Cos, Exp };

// Immutable scalar expression. Cheap to copy (shared node), so component
// functions of metrics / endomorphism fields are stored as plain values.
// Shared subtrees form a DAG; evaluation memoizes on node identity.
class Expr {
 public:
  struct Node {
    ExprKind kind;
    int var_index = -1;      // Var
    double cval = 0.0;       // Const (real value; exact rationals keep num/den)
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool exact_rational = false;
    int exponent = 0;        // IntPow
    std::vector<Expr> kids;
  };

  // Default-constructed expression is the constant 0.
  Expr();

  static Expr var(int index);
  static Expr constant(double v);
  static Expr rational(std::int64_t num, std::int64_t den);

  const Node& node() const { return *node_; }
  const Node* key() const { return node_.get(); }  // identity for memoization
  std::shared_ptr<const Node> node_ptr() const { return node_; }
  ExprKind kind() const { return node_->kind; }

  // Largest Var index + 1 appearing in the tree (0 if constant).
  int min_dimension() const;

  std::string to_string() const;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node&& n);
  std::shared_ptr<const Node> node_;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr pow_int(const Expr&, int);
  friend Expr sqrt(const Expr&);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr exp(const Expr&);
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }

Expr pow_int(const Expr& base, int exponent);
Expr sqrt(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);

}  // namespace qs3
