#pragma once

// Slow, obviously-correct reference computations the library is checked against.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "germkit/matrix.hpp"
#include "germkit/polynomial.hpp"

namespace oracle {

using germkit::Monomial;
using germkit::Polynomial;
using germkit::PolyMatrix;
using germkit::Rational;

// Leibniz formula: sum over all permutations with their sign.
inline Polynomial permutation_det(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial sum(m.nvars());
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    Polynomial term = Polynomial::constant(m.nvars(), 1);
    for (std::size_t i = 0; i < n; ++i) term = term * m(i, perm[i]);
    if (inversions % 2) {
      sum -= term;
    } else {
      sum += term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

// Textbook Gaussian elimination over Q with rational pivots.
inline std::size_t gaussian_rank(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == rank || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Independent generator (std::mt19937_64) so test inputs do not share the library's RNG.
class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }

  Rational rational(long bound) {
    long num = 0;
    while (num == 0) num = integer(-bound, bound);
    Rational q(num, integer(1, 4));
    q.canonicalize();
    return q;
  }

  Polynomial polynomial(std::size_t nvars, std::size_t max_terms, unsigned max_deg, bool constant_ok = true) {
    std::vector<germkit::Term> terms;
    const long n = integer(0, static_cast<long>(max_terms));
    for (long t = 0; t < n; ++t) {
      Monomial m(nvars, 0);
      const long deg = integer(constant_ok ? 0 : 1, max_deg);
      for (long k = 0; k < deg; ++k) ++m[static_cast<std::size_t>(integer(0, static_cast<long>(nvars) - 1))];
      terms.push_back({m, rational(9)});
    }
    return Polynomial::from_terms(nvars, std::move(terms));
  }

  PolyMatrix matrix(std::size_t n, std::size_t nvars) {
    std::vector<Polynomial> e;
    for (std::size_t i = 0; i < n * n; ++i) e.push_back(polynomial(nvars, 3, 2));
    return PolyMatrix(n, n, std::move(e));
  }

 private:
  std::mt19937_64 gen_;
};

// Hand-run Boardman iteration for f = x^2 on R^2 (coordinates x, y):
//   I0 = (x^2)       J = [2x 0]         rank J(0) = 0  -> a1 = 2, critical extension adds 1x1 minors
//   I1 = (x^2, x)    J = [2x 0; 1 0]    rank J(0) = 1  -> a2 = 1, critical extension adds 2x2 minors
//   the only 2x2 minor is 2x*0 - 0*1 = 0, so I2 = I1 and every later step repeats a = 1.
struct TraceStep {
  std::vector<std::string> ideal;
  std::size_t value;
};

inline const std::vector<TraceStep>& x_squared_trace() {
  static const std::vector<TraceStep> t = {
      {{"x^2"}, 2},
      {{"x^2", "x"}, 1},
      {{"x^2", "x"}, 1},
  };
  return t;
}

}  // namespace oracle
