#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "germkit/matrix.hpp"
#include "germkit/polynomial.hpp"

namespace germkit {

/// Polynomial map germ K^n, 0 -> K^p, 0: p components in n variables, each
/// vanishing at the origin.
class MapGerm {
 public:
  MapGerm(std::size_t nvars, std::vector<Polynomial> components)
      : nvars_(nvars), components_(std::move(components)) {
    if (components_.empty()) throw StructuralError("a map germ needs at least one component");
    for (const auto& c : components_) {
      if (c.nvars() != nvars_) throw StructuralError("component has wrong number of variables");
      if (c.constant_term() != 0) throw GermConditionError("not a germ at 0: component has a nonzero constant term");
    }
  }

  static MapGerm identity(std::size_t n) {
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < n; ++i) comps.push_back(Polynomial::variable(n, i));
    return MapGerm(n, std::move(comps));
  }

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<Polynomial>& components() const noexcept { return components_; }
  const Polynomial& operator[](std::size_t i) const { return components_[i]; }

  bool is_zero() const noexcept {
    for (const auto& c : components_) {
      if (!c.is_zero()) return false;
    }
    return true;
  }

  friend bool operator==(const MapGerm&, const MapGerm&) = default;

 private:
  std::size_t nvars_;
  std::vector<Polynomial> components_;
};

/// p x n matrix of first partials.
inline PolyMatrix jacobian(std::span<const Polynomial> components, std::size_t nvars) {
  PolyMatrix j(components.size(), nvars, nvars);
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t k = 0; k < nvars; ++k) j.set(i, k, derive(components[i], k));
  }
  return j;
}

inline PolyMatrix jacobian(const MapGerm& f) { return jacobian(f.components(), f.nvars()); }

/// f(phi(x)).
inline MapGerm compose(const MapGerm& f, const MapGerm& phi) {
  if (phi.size() != f.nvars()) throw StructuralError("composition arity mismatch");
  std::vector<Polynomial> out;
  out.reserve(f.size());
  for (const auto& c : f.components()) out.push_back(substitute(c, phi.components()));
  return MapGerm(phi.nvars(), std::move(out));
}

/// Substitutes phi into every entry of a matrix.
inline PolyMatrix compose(const PolyMatrix& m, const MapGerm& phi) {
  if (phi.size() != m.nvars()) throw StructuralError("composition arity mismatch");
  std::vector<Polynomial> out;
  out.reserve(m.entries().size());
  for (const auto& e : m.entries()) out.push_back(substitute(e, phi.components()));
  PolyMatrix r(m.rows(), m.cols(), std::move(out));
  return r;
}

/// Matrix-vector product U * f, with f read as a column.
inline MapGerm apply_matrix(const PolyMatrix& u, const MapGerm& f) {
  if (u.cols() != f.size() || u.nvars() != f.nvars()) throw StructuralError("matrix does not act on this germ");
  std::vector<Polynomial> out;
  out.reserve(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    Polynomial s(f.nvars());
    for (std::size_t k = 0; k < u.cols(); ++k) s += u(i, k) * f[k];
    out.push_back(std::move(s));
  }
  return MapGerm(f.nvars(), std::move(out));
}

inline std::vector<Rational> eval(const MapGerm& f, std::span<const Rational> point) {
  std::vector<Rational> out;
  out.reserve(f.size());
  for (const auto& c : f.components()) out.push_back(eval(c, point));
  return out;
}

}  // namespace germkit
