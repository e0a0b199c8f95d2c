#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "germkit/equivlab.hpp"
#include "germkit/invariants.hpp"
#include "germkit/lipschitz.hpp"
#include "germkit/map_germ.hpp"

namespace germkit {

// Probes run in long double: D1 = 1/m has to come out to 1e-12 relative at m = 2^20.
using Real = long double;

/// Finite sample of [-1, 1]^n.
class SampleGrid {
 public:
  /// Regular lattice with the given step; 1/step must be an integer. The
  /// coordinates are (i - N)/N, so 0 and +-1 are hit exactly.
  static SampleGrid lattice(std::size_t dim, double step, bool skip_origin = false) {
    if (dim == 0) throw StructuralError("grid dimension must be positive");
    if (!(step > 0) || step > 1) throw StructuralError("grid step must lie in (0, 1]");
    const auto n = static_cast<long>(std::llround(1.0 / step));
    if (std::abs(static_cast<double>(n) * step - 1.0) > 1e-9) throw StructuralError("grid step must divide 1");
    std::vector<long> idx(dim, 0);
    SampleGrid g(dim);
    while (true) {
      bool origin = true;
      std::vector<Real> pt;
      for (auto i : idx) {
        pt.push_back(static_cast<Real>(i - n) / static_cast<Real>(n));
        origin = origin && i == n;
      }
      if (!(origin && skip_origin)) g.points_.push_back(std::move(pt));
      std::size_t k = 0;
      while (k < dim && idx[k] == 2 * n) idx[k++] = 0;
      if (k == dim) break;
      ++idx[k];
    }
    return g;
  }

  /// `count` seeded uniform samples.
  static SampleGrid uniform(std::size_t dim, std::size_t count, std::uint64_t seed) {
    if (dim == 0 || count == 0) throw StructuralError("grid must be nonempty");
    SplitMix64 rng(seed);
    SampleGrid g(dim);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<Real> pt;
      for (std::size_t d = 0; d < dim; ++d) {
        const Real u = static_cast<Real>(rng.next() >> 11) / static_cast<Real>(1ULL << 53);
        pt.push_back(2 * u - 1);
      }
      g.points_.push_back(std::move(pt));
    }
    return g;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<std::vector<Real>>& points() const noexcept { return points_; }

 private:
  explicit SampleGrid(std::size_t dim) : dim_(dim) {}

  std::size_t dim_;
  std::vector<std::vector<Real>> points_;
};

/// 1, 2, 4, ..., 2^max_exp.
inline std::vector<Real> power_scales(unsigned max_exp) {
  std::vector<Real> ms;
  for (unsigned e = 0; e <= max_exp; ++e) ms.push_back(std::ldexp(Real(1), static_cast<int>(e)));
  return ms;
}

inline Real norm(std::span<const Real> v) {
  Real s = 0;
  for (auto x : v) s += x * x;
  return std::sqrt(s);
}

inline Real distance(std::span<const Real> a, std::span<const Real> b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// m * e(x / m).
inline std::vector<Real> rescale(const LipschitzMap& e, Real m, std::span<const Real> x) {
  if (!(m > 0)) throw StructuralError("scale must be positive");
  std::vector<Real> y(x.begin(), x.end());
  for (auto& v : y) v /= m;
  auto out = e.eval<Real>(y);
  for (auto& v : out) v *= m;
  return out;
}

/// Largest |e(x) - e(y)| / |x - y| over pairs of grid points.
inline Real empirical_lipschitz(const LipschitzMap& e, const SampleGrid& grid, std::optional<Real> scale = {}) {
  std::vector<std::vector<Real>> vals;
  for (const auto& p : grid.points()) vals.push_back(scale ? rescale(e, *scale, p) : e.eval<Real>(p));
  Real best = 0;
  const auto& pts = grid.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Real d = distance(pts[i], pts[j]);
      if (d > 0) best = std::max(best, distance(vals[i], vals[j]) / d);
    }
  }
  return best;
}

struct DeviationRow {
  Real m_prev;
  Real m;
  Real deviation;
};

struct ConvergenceReport {
  std::vector<DeviationRow> rows;
  bool converged = false;
  std::vector<std::vector<Real>> limit_estimate;  // rescaled map at the last scale, per grid point
};

/// Sup-grid distance between consecutive rescalings. Converged when each of the
/// last three deviations is at most 1/1.5 of the one before (zeros count).
inline ConvergenceReport convergence_probe(const LipschitzMap& e, const SampleGrid& grid, const std::vector<Real>& ms) {
  if (e.nvars() != grid.dim()) throw StructuralError("grid dimension does not match the map");
  if (ms.size() < 2) throw StructuralError("need at least two scales");
  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (!(ms[i] > ms[i - 1]) || !(ms[0] > 0)) throw StructuralError("scales must be positive and strictly increasing");
  }
  ConvergenceReport rep;
  std::vector<std::vector<Real>> prev;
  for (const auto& p : grid.points()) prev.push_back(rescale(e, ms[0], p));
  for (std::size_t i = 1; i < ms.size(); ++i) {
    std::vector<std::vector<Real>> cur;
    Real dev = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      cur.push_back(rescale(e, ms[i], grid.points()[j]));
      dev = std::max(dev, distance(cur[j], prev[j]));
    }
    rep.rows.push_back({ms[i - 1], ms[i], dev});
    prev = std::move(cur);
  }
  rep.limit_estimate = prev;
  if (rep.rows.size() >= 4) {
    rep.converged = true;
    for (std::size_t i = rep.rows.size() - 3; i < rep.rows.size(); ++i) {
      const Real before = rep.rows[i - 1].deviation;
      const Real now = rep.rows[i].deviation;
      if (!(now == 0 || now * 1.5L <= before)) rep.converged = false;
    }
  }
  return rep;
}

/// Inverse of a unipotent triangular polynomial map (x_i + terms in x_0..x_{i-1},
/// or in x_{i+1}..x_{n-1}), by back-substitution. Verified exactly.
inline MapGerm unipotent_inverse(const MapGerm& phi) {
  const std::size_t n = phi.nvars();
  if (phi.size() != n) throw StructuralError("unipotent map must be square");
  auto depends_only_on = [&](const Polynomial& p, std::size_t lo, std::size_t hi) {
    for (const auto& t : p.terms()) {
      for (std::size_t v = 0; v < n; ++v) {
        if (t.exponents[v] > 0 && (v < lo || v >= hi)) return false;
      }
    }
    return true;
  };
  auto triangular = [&](bool lower) {
    for (std::size_t i = 0; i < n; ++i) {
      const Polynomial tail = phi[i] - Polynomial::variable(n, i);
      if (lower ? !depends_only_on(tail, 0, i) : !depends_only_on(tail, i + 1, n)) return false;
    }
    return true;
  };
  const bool lower = triangular(true);
  if (!lower && !triangular(false)) throw StructuralError("map is not unipotent triangular");
  std::vector<Polynomial> inv(n, Polynomial(n));
  std::vector<Polynomial> images;
  for (std::size_t v = 0; v < n; ++v) images.push_back(Polynomial::variable(n, v));
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t i = lower ? s : n - 1 - s;
    const Polynomial tail = phi[i] - Polynomial::variable(n, i);
    // tail only involves coordinates already inverted
    inv[i] = Polynomial::variable(n, i) - substitute(tail, images);
    images[i] = inv[i];
  }
  MapGerm result(n, std::move(inv));
  if (compose(phi, result) != MapGerm::identity(n)) throw StructuralError("inverse check failed");
  return result;
}

struct Equivalence {
  MapGerm f;
  MapGerm g;
};

/// g = core and f = psi o core o phi^-1, so that f o phi = psi o g exactly.
inline Equivalence construct_equivalence(const MapGerm& core, const MapGerm& phi, const MapGerm& psi) {
  if (phi.nvars() != core.nvars() || psi.nvars() != core.size()) throw StructuralError("arity mismatch");
  const MapGerm phi_inv = unipotent_inverse(phi);
  unipotent_inverse(psi);
  MapGerm f = compose(psi, compose(core, phi_inv));
  if (compose(f, phi) != compose(psi, core)) throw StructuralError("constructed pair does not commute");
  return {std::move(f), core};
}

struct Theorem31Row {
  Real m;
  Real d1;
  Real d2;
  Real r;
};

/// With k = ord f, at every scale m:
///   D1 = sup |m^k f(phi(x/m)) - H_f(m phi(x/m))|
///   D2 = sup |m^k psi(g(x/m)) - m^k psi(H_g(x)/m^k)|
///   R  = sup |m^k f(phi(x/m)) - m^k psi(g(x/m))|
inline std::vector<Theorem31Row> theorem31_probe(const MapGerm& f, const MapGerm& g, const MapGerm& phi,
                                                 const MapGerm& psi, const SampleGrid& grid,
                                                 const std::vector<Real>& ms) {
  const std::size_t n = f.nvars();
  if (g.nvars() != n || phi.nvars() != n || phi.size() != n || grid.dim() != n) {
    throw StructuralError("source dimensions disagree");
  }
  if (psi.nvars() != g.size() || psi.size() != f.size() || f.size() != g.size()) {
    throw StructuralError("target dimensions disagree");
  }
  unipotent_inverse(psi);
  const auto k = static_cast<int>(order(f));
  const NumericMap<Real> nf(f), ng(g), nphi(phi), npsi(psi);
  const NumericMap<Real> hf(first_homogeneous_part(f)), hg(first_homogeneous_part(g));
  std::vector<Theorem31Row> rows;
  for (Real m : ms) {
    if (!(m > 0)) throw StructuralError("scale must be positive");
    const Real mk = std::pow(m, static_cast<Real>(k));
    Theorem31Row row{m, 0, 0, 0};
    for (const auto& x : grid.points()) {
      std::vector<Real> xm(x);
      for (auto& v : xm) v /= m;
      const auto px = nphi(xm);
      auto a = nf(px);
      for (auto& v : a) v *= mk;
      std::vector<Real> mphi(px);
      for (auto& v : mphi) v *= m;
      const auto h1 = hf(mphi);
      auto b = npsi(ng(xm));
      for (auto& v : b) v *= mk;
      auto hgx = hg(x);
      for (auto& v : hgx) v /= mk;
      auto c = npsi(hgx);
      for (auto& v : c) v *= mk;
      row.d1 = std::max(row.d1, distance(a, h1));
      row.d2 = std::max(row.d2, distance(b, c));
      row.r = std::max(row.r, distance(a, b));
    }
    rows.push_back(row);
  }
  return rows;
}

struct RatioInterval {
  Real min;
  Real max;
  Real c;  // max(max, 1/min): the interval lies in [1/c, c]
  std::size_t samples;
};

/// Range of |f(x)| / |g(phi(x))| over grid points x != 0 with g(phi(x)) != 0.
inline RatioInterval lemma21_probe(const MapGerm& f, const MapGerm& g, const LipschitzMap& phi, const SampleGrid& grid) {
  if (phi.nvars() != f.nvars() || phi.size() != g.nvars() || grid.dim() != f.nvars()) {
    throw StructuralError("dimensions disagree");
  }
  const NumericMap<Real> nf(f), ng(g);
  RatioInterval out{std::numeric_limits<Real>::infinity(), 0, 0, 0};
  for (const auto& x : grid.points()) {
    if (norm(x) == 0) continue;
    const Real den = norm(ng(phi.eval<Real>(x)));
    if (den == 0) continue;
    const Real ratio = norm(nf(x)) / den;
    out.min = std::min(out.min, ratio);
    out.max = std::max(out.max, ratio);
    ++out.samples;
  }
  if (out.samples == 0) throw UndefinedInvariantError("ratio undefined: every grid point is degenerate");
  out.c = std::max(out.max, out.min > 0 ? 1 / out.min : std::numeric_limits<Real>::infinity());
  return out;
}

/// A commuting quadruple f o phi = psi o g ready for the probes.
struct Quadruple {
  std::string name;
  MapGerm f;
  MapGerm g;
  MapGerm phi;
  MapGerm psi;
};

inline Quadruple unipotent_quadruple() {
  const std::size_t n = 2;
  const auto x = Polynomial::variable(n, 0);
  const auto y = Polynomial::variable(n, 1);
  const MapGerm core(n, {x * x + y * y * y, x * x * y});
  const MapGerm phi(n, {x, y + x * x});
  const MapGerm psi(n, {x, y + x * x});
  auto eq = construct_equivalence(core, phi, psi);
  return {"unipotent", std::move(eq.f), std::move(eq.g), phi, psi};
}

inline Quadruple paper_f_quadruple() {
  const auto x = Polynomial::variable(2, 0);
  const auto y = Polynomial::variable(2, 1);
  const MapGerm f(2, {pow(x, 4) + pow(y, 5)});
  return {"paper-f", f, f, MapGerm::identity(2), MapGerm::identity(1)};
}

}  // namespace germkit
