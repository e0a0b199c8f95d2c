#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "germkit/map_germ.hpp"
#include "germkit/polynomial.hpp"

namespace germkit {

/// Converts an exact rational to a numeric scalar type.
template <typename T>
T to_scalar(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return r;
  } else {
    // Numerator and denominator are converted separately so that small
    // fractions round once, in T's precision.
    return static_cast<T>(r.get_num().get_d()) / static_cast<T>(r.get_den().get_d());
  }
}

namespace detail {

template <typename T>
T scalar_abs(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return abs(x);
  } else {
    return std::abs(x);
  }
}

}  // namespace detail

/// Expression tree over variables, rational constants, + - *, abs, min and max.
/// Evaluates to a piecewise-polynomial function; used to express bi-Lipschitz maps.
class LipschitzExpr {
 public:
  enum class Op { variable, constant, add, sub, mul, neg, abs, min, max };

  static LipschitzExpr variable(std::size_t index) { return LipschitzExpr(make(Op::variable, index, 0, {}, {})); }
  static LipschitzExpr constant(const Rational& c) { return LipschitzExpr(make(Op::constant, 0, c, {}, {})); }

  friend LipschitzExpr operator+(const LipschitzExpr& a, const LipschitzExpr& b) { return binary(Op::add, a, b); }
  friend LipschitzExpr operator-(const LipschitzExpr& a, const LipschitzExpr& b) { return binary(Op::sub, a, b); }
  friend LipschitzExpr operator*(const LipschitzExpr& a, const LipschitzExpr& b) { return binary(Op::mul, a, b); }
  LipschitzExpr operator-() const { return LipschitzExpr(make(Op::neg, 0, 0, node_, {})); }
  friend LipschitzExpr abs(const LipschitzExpr& a) { return LipschitzExpr(make(Op::abs, 0, 0, a.node_, {})); }
  friend LipschitzExpr min(const LipschitzExpr& a, const LipschitzExpr& b) { return binary(Op::min, a, b); }
  friend LipschitzExpr max(const LipschitzExpr& a, const LipschitzExpr& b) { return binary(Op::max, a, b); }

  static LipschitzExpr from_polynomial(const Polynomial& p) {
    LipschitzExpr sum = constant(0);
    bool first = true;
    for (const auto& t : p.terms()) {
      LipschitzExpr term = constant(t.coefficient);
      for (std::size_t i = 0; i < t.exponents.size(); ++i) {
        for (Exponent k = 0; k < t.exponents[i]; ++k) term = term * variable(i);
      }
      sum = first ? term : sum + term;
      first = false;
    }
    return sum;
  }

  Op op() const noexcept { return node_->op; }

  /// True when the tree has no variable leaves.
  bool is_constant() const { return constant_node(*node_); }

  /// Largest variable index referenced plus one.
  std::size_t arity() const { return arity_of(*node_); }

  template <typename T>
  T eval(std::span<const T> x) const {
    return eval_node<T>(*node_, x);
  }

  std::string to_string(const std::vector<std::string>& names) const { return render(*node_, names); }

 private:
  struct Node {
    Op op;
    std::size_t var;
    Rational value;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit LipschitzExpr(NodePtr n) : node_(std::move(n)) {}

  static NodePtr make(Op op, std::size_t var, const Rational& value, NodePtr lhs, NodePtr rhs) {
    return std::make_shared<const Node>(Node{op, var, value, std::move(lhs), std::move(rhs)});
  }

  static LipschitzExpr binary(Op op, const LipschitzExpr& a, const LipschitzExpr& b) {
    return LipschitzExpr(make(op, 0, 0, a.node_, b.node_));
  }

  static bool constant_node(const Node& n) {
    switch (n.op) {
      case Op::variable: return false;
      case Op::constant: return true;
      default: return constant_node(*n.lhs) && (!n.rhs || constant_node(*n.rhs));
    }
  }

  static std::size_t arity_of(const Node& n) {
    switch (n.op) {
      case Op::variable: return n.var + 1;
      case Op::constant: return 0;
      default: return std::max(arity_of(*n.lhs), n.rhs ? arity_of(*n.rhs) : std::size_t{0});
    }
  }

  template <typename T>
  static T eval_node(const Node& n, std::span<const T> x) {
    switch (n.op) {
      case Op::variable:
        if (n.var >= x.size()) throw StructuralError("expression references a variable beyond the point dimension");
        return x[n.var];
      case Op::constant: return to_scalar<T>(n.value);
      case Op::add: return T(eval_node<T>(*n.lhs, x) + eval_node<T>(*n.rhs, x));
      case Op::sub: return T(eval_node<T>(*n.lhs, x) - eval_node<T>(*n.rhs, x));
      case Op::mul: return T(eval_node<T>(*n.lhs, x) * eval_node<T>(*n.rhs, x));
      case Op::neg: return T(-eval_node<T>(*n.lhs, x));
      case Op::abs: return detail::scalar_abs(eval_node<T>(*n.lhs, x));
      case Op::min: {
        T a = eval_node<T>(*n.lhs, x);
        T b = eval_node<T>(*n.rhs, x);
        return b < a ? b : a;
      }
      case Op::max: {
        T a = eval_node<T>(*n.lhs, x);
        T b = eval_node<T>(*n.rhs, x);
        return a < b ? b : a;
      }
    }
    return T(0);
  }

  static std::string render(const Node& n, const std::vector<std::string>& names) {
    switch (n.op) {
      case Op::variable: return n.var < names.size() ? names[n.var] : "x" + std::to_string(n.var + 1);
      case Op::constant: return n.value < 0 ? "(" + n.value.get_str() + ")" : n.value.get_str();
      case Op::add: return "(" + render(*n.lhs, names) + " + " + render(*n.rhs, names) + ")";
      case Op::sub: return "(" + render(*n.lhs, names) + " - " + render(*n.rhs, names) + ")";
      case Op::mul: return render(*n.lhs, names) + "*" + render(*n.rhs, names);
      case Op::neg: return "-(" + render(*n.lhs, names) + ")";
      case Op::abs: return "abs(" + render(*n.lhs, names) + ")";
      case Op::min: return "min(" + render(*n.lhs, names) + ", " + render(*n.rhs, names) + ")";
      case Op::max: return "max(" + render(*n.lhs, names) + ", " + render(*n.rhs, names) + ")";
    }
    return "?";
  }

  NodePtr node_;
};

/// A map R^n -> R^p given by Lipschitz expressions.
class LipschitzMap {
 public:
  LipschitzMap(std::size_t nvars, std::vector<LipschitzExpr> components)
      : nvars_(nvars), components_(std::move(components)) {
    if (components_.empty()) throw StructuralError("a map needs at least one component");
    for (const auto& c : components_) {
      if (c.arity() > nvars_) throw StructuralError("expression references an undeclared variable");
    }
  }

  static LipschitzMap from_germ(const MapGerm& f) {
    std::vector<LipschitzExpr> comps;
    for (const auto& c : f.components()) comps.push_back(LipschitzExpr::from_polynomial(c));
    return LipschitzMap(f.nvars(), std::move(comps));
  }

  static LipschitzMap identity(std::size_t n) {
    std::vector<LipschitzExpr> comps;
    for (std::size_t i = 0; i < n; ++i) comps.push_back(LipschitzExpr::variable(i));
    return LipschitzMap(n, std::move(comps));
  }

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<LipschitzExpr>& components() const noexcept { return components_; }

  template <typename T>
  std::vector<T> eval(std::span<const T> x) const {
    if (x.size() != nvars_) throw StructuralError("evaluation point has wrong length");
    std::vector<T> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.eval<T>(x));
    return out;
  }

 private:
  std::size_t nvars_;
  std::vector<LipschitzExpr> components_;
};

/// Double-precision evaluation of a Lipschitz map.
inline std::vector<double> eval_lipschitz(const LipschitzMap& e, std::span<const double> x) { return e.eval<double>(x); }

/// A polynomial compiled for repeated floating-point evaluation.
template <typename T>
class NumericPolynomial {
 public:
  explicit NumericPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
    for (const auto& t : p.terms()) {
      terms_.push_back({to_scalar<T>(t.coefficient), std::vector<Exponent>(t.exponents.begin(), t.exponents.end())});
    }
  }

  T operator()(std::span<const T> x) const {
    T sum = 0;
    for (const auto& [c, exps] : terms_) {
      T v = c;
      for (std::size_t i = 0; i < nvars_; ++i) {
        for (Exponent k = 0; k < exps[i]; ++k) v *= x[i];
      }
      sum += v;
    }
    return sum;
  }

 private:
  std::size_t nvars_;
  std::vector<std::pair<T, std::vector<Exponent>>> terms_;
};

/// A polynomial map compiled for floating-point evaluation.
template <typename T>
class NumericMap {
 public:
  explicit NumericMap(const MapGerm& f) : nvars_(f.nvars()) {
    for (const auto& c : f.components()) comps_.emplace_back(c);
  }

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t size() const noexcept { return comps_.size(); }

  std::vector<T> operator()(std::span<const T> x) const {
    if (x.size() != nvars_) throw StructuralError("evaluation point has wrong length");
    std::vector<T> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(c(x));
    return out;
  }

 private:
  std::size_t nvars_;
  std::vector<NumericPolynomial<T>> comps_;
};

}  // namespace germkit
