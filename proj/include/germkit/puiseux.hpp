#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "germkit/errors.hpp"
#include "germkit/polynomial.hpp"

namespace germkit {

using Complex = std::complex<double>;

/// Support point: i is the power of x, j the (possibly fractional) power of y.
struct LatticePoint {
  long i;
  Rational j;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct PolygonEdge {
  LatticePoint from;  // larger i
  LatticePoint to;
  Rational slope;  // (to.j - from.j) / (from.i - to.i): the y-order of the roots it carries
};

struct NewtonPolygon {
  std::vector<LatticePoint> vertices;
  std::vector<PolygonEdge> edges;
};

struct PuiseuxTerm {
  Rational exponent;
  Complex coefficient;
};

struct PuiseuxBranch {
  std::vector<PuiseuxTerm> terms;
  long denominator = 1;
  std::vector<Rational> char_exponents;
  std::vector<std::pair<long, long>> pairs;
  bool complete = true;
};

struct PuiseuxOptions {
  std::size_t max_terms = 12;
  double root_tolerance = 1e-12;
  double cluster_tolerance = 1e-8;
  int max_iterations = 500;
};

namespace detail {

// Sum of a_ij x^i y^j with complex coefficients and rational j.
struct CurveTerm {
  long i;
  Rational j;
  Complex a;
};

inline NewtonPolygon polygon_of(const std::vector<CurveTerm>& terms) {
  if (terms.empty()) throw StructuralError("Newton polygon of the zero polynomial");
  // lowest j for each i
  std::map<long, Rational> low;
  for (const auto& t : terms) {
    auto it = low.find(t.i);
    if (it == low.end() || t.j < it->second) low[t.i] = t.j;
  }
  LatticePoint start{low.begin()->first, low.begin()->second};
  for (const auto& [i, j] : low) {
    if (j < start.j) start = {i, j};
  }
  const long end_i = low.begin()->first;
  NewtonPolygon poly;
  poly.vertices.push_back(start);
  LatticePoint cur = start;
  while (cur.i > end_i) {
    bool have = false;
    LatticePoint best{};
    Rational best_slope;
    for (const auto& [i, j] : low) {
      if (i >= cur.i) break;
      const Rational s = (j - cur.j) / Rational(cur.i - i);
      if (!have || s < best_slope || (s == best_slope && i < best.i)) {
        have = true;
        best = {i, j};
        best_slope = s;
      }
    }
    poly.edges.push_back({cur, best, best_slope});
    poly.vertices.push_back(best);
    cur = best;
  }
  return poly;
}

inline Complex eval_poly(const std::vector<Complex>& p, Complex z) {
  Complex v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + *it;
  return v;
}

inline std::vector<Complex> derivative(const std::vector<Complex>& p) {
  std::vector<Complex> d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<double>(k));
  return d;
}

// All complex roots of p (p[k] multiplies z^k), simultaneous iteration.
inline std::vector<Complex> durand_kerner(std::vector<Complex> p, const PuiseuxOptions& opt) {
  while (!p.empty() && p.back() == Complex(0)) p.pop_back();
  const std::size_t n = p.size() - 1;
  if (n == 0) return {};
  const Complex lead = p.back();
  for (auto& c : p) c /= lead;
  if (n == 1) return {-p[0]};
  double bound = 0;
  for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(p[k]));
  bound += 1;
  std::vector<Complex> z(n);
  const Complex seed(0.4, 0.9);
  for (std::size_t k = 0; k < n; ++k) z[k] = bound * std::pow(seed, static_cast<int>(k));
  auto scale = [&](Complex w) {
    double s = 0, a = 1;
    for (const auto& c : p) {
      s += std::abs(c) * a;
      a *= std::abs(w);
    }
    return s;
  };
  for (int it = 0; it < opt.max_iterations; ++it) {
    double step = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex den = 1;
      for (std::size_t l = 0; l < n; ++l) {
        if (l != k) den *= z[k] - z[l];
      }
      if (den == Complex(0)) den = 1e-300;
      const Complex d = eval_poly(p, z[k]) / den;
      z[k] -= d;
      step = std::max(step, std::abs(d) / (1 + std::abs(z[k])));
    }
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) ok = ok && std::abs(eval_poly(p, z[k])) <= opt.root_tolerance * scale(z[k]);
    if (ok && step < 1e-14) return z;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(eval_poly(p, z[k])) > opt.root_tolerance * scale(z[k])) {
      throw NonConvergenceError("edge polynomial root finder did not converge in " +
                                std::to_string(opt.max_iterations) + " iterations");
    }
  }
  return z;
}

struct RootCluster {
  Complex value;
  std::size_t multiplicity;
};

inline std::vector<RootCluster> cluster_roots(const std::vector<Complex>& p, const std::vector<Complex>& roots,
                                              const PuiseuxOptions& opt) {
  std::vector<bool> used(roots.size(), false);
  std::vector<RootCluster> out;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (used[k]) continue;
    Complex sum = roots[k];
    std::size_t m = 1;
    used[k] = true;
    for (std::size_t l = k + 1; l < roots.size(); ++l) {
      if (!used[l] && std::abs(roots[l] - roots[k]) <= opt.cluster_tolerance * (1 + std::abs(roots[k]))) {
        used[l] = true;
        sum += roots[l];
        ++m;
      }
    }
    // a root of multiplicity m is a simple root of the (m-1)st derivative
    std::vector<Complex> q = p;
    for (std::size_t d = 1; d < m; ++d) q = derivative(q);
    const auto dq = derivative(q);
    Complex z = sum / static_cast<double>(m);
    for (int it = 0; it < 20; ++it) {
      const Complex slope = eval_poly(dq, z);
      if (slope == Complex(0)) break;
      z -= eval_poly(q, z) / slope;
    }
    out.push_back({z, m});
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

inline long binomial(long n, long k) {
  long r = 1;
  for (long t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// G(c y^gamma + X, y), dropping coefficients that cancel to rounding level.
inline std::vector<CurveTerm> shift(const std::vector<CurveTerm>& g, const Complex& c, const Rational& gamma) {
  struct Acc {
    Complex sum;
    double mag;
  };
  std::map<std::pair<long, Rational>, Acc> acc;
  for (const auto& t : g) {
    for (long k = 0; k <= t.i; ++k) {
      const Complex v = t.a * static_cast<double>(binomial(t.i, k)) * std::pow(c, static_cast<int>(t.i - k));
      auto& a = acc[{k, t.j + gamma * Rational(t.i - k)}];
      a.sum += v;
      a.mag += std::abs(v);
    }
  }
  std::vector<CurveTerm> out;
  for (const auto& [key, a] : acc) {
    if (std::abs(a.sum) > 1e-9 * a.mag) out.push_back({key.first, key.second, a.sum});
  }
  return out;
}

inline long denominator_of(const Rational& q) { return q.get_den().get_si(); }

inline void finish_branch(PuiseuxBranch& b) {
  long running = 1;
  b.char_exponents.clear();
  for (const auto& t : b.terms) {
    const long d = denominator_of(t.exponent);
    const long next = std::lcm(running, d);
    if (next > running) b.char_exponents.push_back(t.exponent);
    running = next;
  }
  b.denominator = running;
  b.pairs.clear();
  long product = 1;
  for (const auto& e : b.char_exponents) {
    const Rational scaled = e * Rational(product);
    const long m = scaled.get_num().get_si();
    const long n = scaled.get_den().get_si();
    b.pairs.emplace_back(m, n);
    product *= n;
  }
}

inline void expand(const std::vector<CurveTerm>& g, const Rational& gamma_min, bool top, std::size_t roots,
                   const std::vector<PuiseuxTerm>& prefix, const PuiseuxOptions& opt,
                   std::vector<PuiseuxBranch>& out) {
  auto emit = [&](std::vector<PuiseuxTerm> terms, bool complete, std::size_t copies) {
    for (std::size_t k = 0; k < copies; ++k) {
      PuiseuxBranch b;
      b.terms = terms;
      b.complete = complete;
      finish_branch(b);
      out.push_back(std::move(b));
    }
  };
  long i_min = g.front().i;
  for (const auto& t : g) i_min = std::min(i_min, t.i);
  std::size_t found = 0;
  if (i_min > 0) {
    // X = 0 solves the working equation exactly
    emit(prefix, i_min == 1, static_cast<std::size_t>(i_min));
    found += static_cast<std::size_t>(i_min);
  }
  if (found >= roots) return;
  const auto poly = polygon_of(g);
  for (const auto& e : poly.edges) {
    if (!top && e.slope <= gamma_min) continue;
    std::vector<Complex> ep(static_cast<std::size_t>(e.from.i - e.to.i) + 1, Complex(0));
    for (const auto& t : g) {
      if (t.i < e.to.i || t.i > e.from.i) continue;
      if (t.j + e.slope * Rational(t.i) == e.from.j + e.slope * Rational(e.from.i)) {
        ep[static_cast<std::size_t>(t.i - e.to.i)] += t.a;
      }
    }
    const auto clusters = cluster_roots(ep, durand_kerner(ep, opt), opt);
    for (const auto& cl : clusters) {
      auto terms = prefix;
      terms.push_back({e.slope, cl.value});
      found += cl.multiplicity;
      if (cl.multiplicity == 1) {
        emit(std::move(terms), true, 1);
      } else if (terms.size() >= opt.max_terms) {
        emit(std::move(terms), false, cl.multiplicity);
      } else {
        expand(shift(g, cl.value, e.slope), e.slope, false, cl.multiplicity, terms, opt, out);
      }
    }
  }
}

}  // namespace detail

inline std::vector<detail::CurveTerm> curve_terms(const Polynomial& f) {
  if (f.nvars() != 2) throw StructuralError("plane curve needs exactly two variables");
  std::vector<detail::CurveTerm> terms;
  for (const auto& t : f.terms()) {
    terms.push_back({static_cast<long>(t.exponents[0]), Rational(t.exponents[1]), Complex(t.coefficient.get_d(), 0)});
  }
  return terms;
}

/// Lower-left hull of the support of F (x-exponent first).
inline NewtonPolygon newton_polygon(const Polynomial& f) {
  if (f.is_zero()) throw StructuralError("Newton polygon of the zero polynomial");
  return detail::polygon_of(curve_terms(f));
}

/// One branch per root x(y) of F(x, y) = 0.
inline std::vector<PuiseuxBranch> puiseux_expansions(const Polynomial& f, const PuiseuxOptions& opt = {}) {
  if (f.nvars() != 2) throw StructuralError("plane curve needs exactly two variables");
  if (f.is_zero()) throw StructuralError("curve equation is zero");
  long a = -1;
  for (const auto& t : f.terms()) {
    if (t.exponents[0] == 0 && t.exponents[1] == 0) throw GermConditionError("curve does not pass through the origin");
    if (t.exponents[1] == 0 && (a < 0 || static_cast<long>(t.exponents[0]) < a)) a = t.exponents[0];
  }
  if (a < 0) throw GermConditionError("curve has a factor free of x");
  if (opt.max_terms == 0) throw StructuralError("max_terms must be positive");
  std::vector<PuiseuxBranch> out;
  detail::expand(curve_terms(f), Rational(0), true, static_cast<std::size_t>(a), {}, opt, out);
  return out;
}

/// F with the roles of x and y exchanged.
inline Polynomial transpose_curve(const Polynomial& f) {
  if (f.nvars() != 2) throw StructuralError("plane curve needs exactly two variables");
  std::vector<Term> terms;
  for (auto t : f.terms()) {
    std::swap(t.exponents[0], t.exponents[1]);
    terms.push_back(std::move(t));
  }
  return Polynomial::from_terms(2, std::move(terms));
}

/// Char exponents m1/n1, m2/(n1 n2), ... as pairs (m_k, n_k).
inline std::vector<std::pair<long, long>> puiseux_pairs(const PuiseuxBranch& b) {
  if (!b.complete) throw NonConvergenceError("branch expansion is incomplete");
  return b.pairs;
}

inline bool topologically_equal(const std::vector<std::pair<long, long>>& a, const std::vector<std::pair<long, long>>& b) {
  return a == b;
}

namespace detail {

struct ResidualParts {
  long double value;    // |F(x(y), y)|
  long double largest;  // largest |a x(y)^i y^j| over the terms of F
};

inline ResidualParts residual_parts(const Polynomial& f, const PuiseuxBranch& b, long double t) {
  using C = std::complex<long double>;
  const long d = b.denominator;
  const long double y = std::pow(t, static_cast<long double>(d));
  C x = 0;
  for (const auto& term : b.terms) {
    const Rational scaled = term.exponent * Rational(d);
    const long power = scaled.get_num().get_si();
    x += C(term.coefficient.real(), term.coefficient.imag()) * std::pow(t, static_cast<long double>(power));
  }
  C sum = 0;
  long double largest = 0;
  for (const auto& term : f.terms()) {
    C v = static_cast<long double>(term.coefficient.get_d());
    for (Exponent k = 0; k < term.exponents[0]; ++k) v *= x;
    v *= std::pow(y, static_cast<long double>(term.exponents[1]));
    sum += v;
    largest = std::max(largest, std::abs(v));
  }
  return {std::abs(sum), largest};
}

}  // namespace detail

/// |F(x(y), y)| at y = t^d, in long double.
inline long double branch_residual(const Polynomial& f, const PuiseuxBranch& b, long double t) {
  return detail::residual_parts(f, b, t).value;
}

/// |F(x(y), y)| relative to the largest single term: small only when the terms cancel.
inline long double relative_residual(const Polynomial& f, const PuiseuxBranch& b, long double t) {
  const auto r = detail::residual_parts(f, b, t);
  return r.largest == 0 ? 0 : r.value / r.largest;
}

/// Residual bound 10 t^(d E), E the last exponent of the branch.
inline bool residual_ok(const Polynomial& f, const PuiseuxBranch& b, long double t) {
  if (b.terms.empty()) return branch_residual(f, b, t) == 0;
  const Rational de = b.terms.back().exponent * Rational(b.denominator);
  const long double bound = 10 * std::pow(t, static_cast<long double>(de.get_num().get_si()));
  return branch_residual(f, b, t) <= bound;
}

}  // namespace germkit
