#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>
#include <span>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/container_hash/hash.hpp>
#include <gmpxx.h>

#include "germkit/errors.hpp"

namespace germkit {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long numerator, long denominator = 1) {
  if (denominator == 0) throw StructuralError("zero denominator");
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

using Exponent = std::uint32_t;
using Monomial = boost::container::small_vector<Exponent, 4>;

inline std::uint64_t total_degree(const Monomial& m) {
  std::uint64_t d = 0;
  for (Exponent e : m) d += e;
  return d;
}

/// Storage order of terms: ascending total degree, then descending lex
/// (x1^2 before x1*x2 before x2^2). Lowest-order terms come first, which is the
/// natural reading order for germs.
inline bool canonical_less(const Monomial& a, const Monomial& b) {
  const auto da = total_degree(a);
  const auto db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

/// Graded-lex monomial order (higher degree is larger, ties broken lex with x1 > x2 > ...).
inline bool grlex_less(const Monomial& a, const Monomial& b) {
  const auto da = total_degree(a);
  const auto db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return boost::hash_range(m.begin(), m.end()); }
};

struct Term {
  Monomial exponents;
  Rational coefficient;

  friend bool operator==(const Term& a, const Term& b) {
    return a.exponents == b.exponents && a.coefficient == b.coefficient;
  }
};

/// Exact sparse multivariate polynomial over the rationals.
///
/// Terms are kept in canonical order with nonzero coefficients, so two equal
/// polynomials always have identical term lists.
class Polynomial {
 public:
  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.push_back({Monomial(nvars, 0), c});
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw StructuralError("variable index out of range");
    Monomial m(nvars, 0);
    m[index] = 1;
    Polynomial p(nvars);
    p.terms_.push_back({std::move(m), Rational(1)});
    return p;
  }

  static Polynomial monomial(Monomial exponents, const Rational& c) {
    Polynomial p(exponents.size());
    if (c != 0) p.terms_.push_back({std::move(exponents), c});
    return p;
  }

  /// Builds a canonical polynomial from arbitrary terms (duplicates are summed).
  static Polynomial from_terms(std::size_t nvars, std::vector<Term> terms) {
    for (const auto& t : terms) {
      if (t.exponents.size() != nvars) throw StructuralError("exponent vector length mismatch");
    }
    Polynomial p(nvars);
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].exponents) == 0);
  }

  Rational coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& key) {
      return canonical_less(t.exponents, key);
    });
    if (it != terms_.end() && it->exponents == m) return it->coefficient;
    return Rational(0);
  }

  Rational constant_term() const {
    if (!terms_.empty() && total_degree(terms_.front().exponents) == 0) return terms_.front().coefficient;
    return Rational(0);
  }

  /// Highest total degree, or -1 for the zero polynomial.
  long degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<long>(total_degree(terms_.back().exponents));
  }

  /// Lowest total degree with a nonzero term, or -1 for the zero polynomial.
  long lowest_degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<long>(total_degree(terms_.front().exponents));
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coefficient = -t.coefficient;
    return r;
  }

  Polynomial& operator+=(const Polynomial& q) { return *this = combine(*this, q, false); }
  Polynomial& operator-=(const Polynomial& q) { return *this = combine(*this, q, true); }
  Polynomial& operator*=(const Polynomial& q) { return *this = *this * q; }

  Polynomial& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.coefficient *= c;
    }
    return *this;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return combine(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return combine(a, b, true); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    return product(a, b, std::numeric_limits<std::uint64_t>::max());
  }

  /// a * b with every term above max_degree dropped. Coefficients are summed as
  /// integers over the common denominator and reduced once per output term.
  static Polynomial product(const Polynomial& a, const Polynomial& b, std::uint64_t max_degree) {
    check_same(a, b);
    Polynomial r(a.nvars_);
    if (a.is_zero() || b.is_zero()) return r;
    const std::size_t n = a.nvars_;
    auto scaled = [](const Polynomial& p, Integer& den) {
      den = 1;
      for (const auto& t : p.terms_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coefficient.get_den_mpz_t());
      std::vector<Integer> out;
      out.reserve(p.terms_.size());
      for (const auto& t : p.terms_) out.push_back(t.coefficient.get_num() * (den / t.coefficient.get_den()));
      return out;
    };
    Integer da, db;
    const auto ca = scaled(a, da);
    const auto cb = scaled(b, db);
    std::unordered_map<Monomial, Integer, MonomialHash> acc;
    Monomial m(n);
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      const auto& ea = a.terms_[i].exponents;
      const auto dega = total_degree(ea);
      if (dega > max_degree) break;
      for (std::size_t j = 0; j < b.terms_.size(); ++j) {
        const auto& eb = b.terms_[j].exponents;
        if (dega + total_degree(eb) > max_degree) break;
        for (std::size_t v = 0; v < n; ++v) m[v] = ea[v] + eb[v];
        auto [it, fresh] = acc.try_emplace(m);
        mpz_addmul(it->second.get_mpz_t(), ca[i].get_mpz_t(), cb[j].get_mpz_t());
      }
    }
    const Integer den = da * db;
    r.terms_.reserve(acc.size());
    for (auto& [mono, num] : acc) {
      if (num == 0) continue;
      Rational c(num, den);
      c.canonicalize();
      r.terms_.push_back({mono, std::move(c)});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return canonical_less(x.exponents, y.exponents); });
    return r;
  }

  friend Polynomial operator*(Polynomial p, const Rational& c) { return p *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Total order on canonical term lists; used for ordered containers.
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) return a.nvars_ < b.nvars_;
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ta = a.terms_[i];
      const auto& tb = b.terms_[i];
      if (ta.exponents != tb.exponents) return canonical_less(ta.exponents, tb.exponents);
      if (ta.coefficient != tb.coefficient) return ta.coefficient < tb.coefficient;
    }
    return a.terms_.size() < b.terms_.size();
  }

 private:
  static void check_same(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw StructuralError("polynomials have different numbers of variables");
  }

  static Polynomial combine(const Polynomial& a, const Polynomial& b, bool subtract) {
    check_same(a, b);
    Polynomial r(a.nvars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && canonical_less(ia->exponents, ib->exponents))) {
        r.terms_.push_back(*ia++);
      } else if (ia == a.terms_.end() || canonical_less(ib->exponents, ia->exponents)) {
        r.terms_.push_back({ib->exponents, subtract ? Rational(-ib->coefficient) : ib->coefficient});
        ++ib;
      } else {
        Rational c = subtract ? Rational(ia->coefficient - ib->coefficient) : Rational(ia->coefficient + ib->coefficient);
        if (c != 0) r.terms_.push_back({ia->exponents, std::move(c)});
        ++ia;
        ++ib;
      }
    }
    return r;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return canonical_less(x.exponents, y.exponents); });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().exponents == t.exponents) {
        out.back().coefficient += t.coefficient;
      } else {
        if (!out.empty() && out.back().coefficient == 0) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().coefficient == 0) out.pop_back();
    terms_ = std::move(out);
  }

  std::size_t nvars_;
  std::vector<Term> terms_;
};

inline Polynomial derive(const Polynomial& p, std::size_t var) {
  if (var >= p.nvars()) throw StructuralError("derivative variable out of range");
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    const Exponent e = t.exponents[var];
    if (e == 0) continue;
    Monomial m = t.exponents;
    m[var] = e - 1;
    out.push_back({std::move(m), t.coefficient * e});
  }
  // Differentiation can reorder terms across degree blocks, so re-canonicalize.
  return Polynomial::from_terms(p.nvars(), std::move(out));
}

inline Rational eval(const Polynomial& p, std::span<const Rational> point) {
  if (point.size() != p.nvars()) throw StructuralError("evaluation point has wrong length");
  Rational sum = 0;
  for (const auto& t : p.terms()) {
    Rational v = t.coefficient;
    for (std::size_t i = 0; i < point.size(); ++i) {
      for (Exponent k = 0; k < t.exponents[i]; ++k) v *= point[i];
    }
    sum += v;
  }
  return sum;
}

/// Sum of the terms of total degree exactly d.
inline Polynomial homogeneous_component(const Polynomial& p, std::uint64_t d) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    if (total_degree(t.exponents) == d) out.push_back(t);
  }
  Polynomial r = Polynomial::from_terms(p.nvars(), std::move(out));
  return r;
}

inline bool is_homogeneous(const Polynomial& p) {
  return p.is_zero() || p.degree() == p.lowest_degree();
}

/// Drops all terms of total degree above max_degree.
inline Polynomial truncate(const Polynomial& p, std::uint64_t max_degree) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    if (total_degree(t.exponents) <= max_degree) out.push_back(t);
  }
  return Polynomial::from_terms(p.nvars(), std::move(out));
}

inline Polynomial pow(const Polynomial& base, std::uint64_t e) {
  Polynomial result = Polynomial::constant(base.nvars(), 1);
  Polynomial b = base;
  while (e > 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e > 0) b *= b;
  }
  return result;
}

/// Substitutes images[i] for variable i. All images must share one variable count.
inline Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images) {
  if (images.size() != p.nvars()) throw StructuralError("substitution arity mismatch");
  if (images.empty()) return p;
  const std::size_t target = images.front().nvars();
  for (const auto& img : images) {
    if (img.nvars() != target) throw StructuralError("substitution images disagree on variable count");
  }
  // powers[i][k] = images[i]^k, filled lazily
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](std::size_t i, Exponent k) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[i]);
    return cache[k];
  };
  Polynomial result(target);
  for (const auto& t : p.terms()) {
    Polynomial term = Polynomial::constant(target, t.coefficient);
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (t.exponents[i] > 0) term *= power(i, t.exponents[i]);
    }
    result += term;
  }
  return result;
}

/// Leading term under graded-lex order.
inline const Term& leading_term(const Polynomial& p) {
  if (p.is_zero()) throw StructuralError("zero polynomial has no leading term");
  const auto& terms = p.terms();
  return *std::max_element(terms.begin(), terms.end(),
                           [](const Term& a, const Term& b) { return grlex_less(a.exponents, b.exponents); });
}

/// Exact quotient a / b. Throws StructuralError when b does not divide a.
inline Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw StructuralError("polynomials have different numbers of variables");
  if (b.is_zero()) throw StructuralError("division by zero polynomial");
  const Term lb = leading_term(b);
  Polynomial remainder = a;
  std::vector<Term> quotient;
  while (!remainder.is_zero()) {
    const Term& lr = leading_term(remainder);
    Monomial m(a.nvars());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (lr.exponents[i] < lb.exponents[i]) throw StructuralError("inexact polynomial division");
      m[i] = lr.exponents[i] - lb.exponents[i];
    }
    Rational c = lr.coefficient / lb.coefficient;
    remainder -= Polynomial::monomial(m, c) * b;
    quotient.push_back({std::move(m), std::move(c)});
  }
  return Polynomial::from_terms(a.nvars(), std::move(quotient));
}

/// a * b with every term above max_degree dropped.
inline Polynomial multiply_truncated(const Polynomial& a, const Polynomial& b, std::uint64_t max_degree) {
  return Polynomial::product(a, b, max_degree);
}

// Substitution modulo terms of degree > max_degree. Variables mapped to
// themselves are handled as exponent shifts; products of powers of the other
// images are cached across calls.
class TruncatedSubstitution {
 public:
  TruncatedSubstitution(std::vector<Polynomial> images, std::uint64_t max_degree)
      : images_(std::move(images)), max_degree_(max_degree), powers_(images_.size()) {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i] != Polynomial::variable(images_[i].nvars(), i)) moving_.push_back(i);
    }
  }

  /// Coefficient products performed so far (a deterministic cost measure).
  std::uint64_t work() const noexcept { return work_; }

  Polynomial operator()(const Polynomial& p) {
    if (p.nvars() != images_.size()) throw StructuralError("substitution arity mismatch");
    const std::size_t n = p.nvars();
    struct Piece {
      const Scaled* prod;
      Monomial shift;
      std::uint64_t shift_degree;
      Integer num;
      Integer den;
    };
    std::vector<Piece> pieces;
    Integer common = 1;
    for (const auto& t : p.terms()) {
      Monomial key(moving_.size());
      Monomial shift = t.exponents;
      std::uint64_t shift_degree = 0;
      for (std::size_t k = 0; k < moving_.size(); ++k) {
        key[k] = t.exponents[moving_[k]];
        shift[moving_[k]] = 0;
      }
      for (auto e : shift) shift_degree += e;
      if (shift_degree > max_degree_) continue;
      const Scaled& prod = product(key);
      Integer den = t.coefficient.get_den() * prod.den;
      mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
      pieces.push_back({&prod, std::move(shift), shift_degree, t.coefficient.get_num(), std::move(den)});
    }
    std::unordered_map<Monomial, Integer, MonomialHash> acc;
    Monomial m(n);
    for (const auto& pc : pieces) {
      const Integer factor = pc.num * (common / pc.den);
      const auto& terms = pc.prod->poly.terms();
      for (std::size_t j = 0; j < terms.size(); ++j) {
        if (total_degree(terms[j].exponents) + pc.shift_degree > max_degree_) break;
        ++work_;
        for (std::size_t v = 0; v < n; ++v) m[v] = terms[j].exponents[v] + pc.shift[v];
        auto [it, fresh] = acc.try_emplace(m);
        mpz_addmul(it->second.get_mpz_t(), factor.get_mpz_t(), pc.prod->nums[j].get_mpz_t());
      }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [mono, num] : acc) {
      if (num == 0) continue;
      Rational c(num, common);
      c.canonicalize();
      out.push_back({mono, std::move(c)});
    }
    return Polynomial::from_terms(n, std::move(out));
  }

 private:
  const Polynomial& power(std::size_t i, Exponent k) {
    auto& cache = powers_[i];
    if (cache.empty()) cache.push_back(Polynomial::constant(images_[i].nvars(), 1));
    while (cache.size() <= k) {
      work_ += cache.back().size() * images_[i].size();
      cache.push_back(multiply_truncated(cache.back(), images_[i], max_degree_));
    }
    return cache[k];
  }

  struct Scaled {
    Polynomial poly;
    std::vector<Integer> nums;  // poly's coefficients times den
    Integer den;
  };

  const Scaled& product(const Monomial& key) {
    auto it = products_.find(key);
    if (it != products_.end()) return it->second;
    Polynomial r = Polynomial::constant(images_.size(), 1);
    for (std::size_t k = 0; k < key.size(); ++k) {
      if (key[k] > 0) {
        const auto& q = power(moving_[k], key[k]);
        work_ += r.size() * q.size();
        r = multiply_truncated(r, q, max_degree_);
      }
    }
    Scaled sc{std::move(r), {}, 1};
    for (const auto& t : sc.poly.terms()) mpz_lcm(sc.den.get_mpz_t(), sc.den.get_mpz_t(), t.coefficient.get_den_mpz_t());
    for (const auto& t : sc.poly.terms()) sc.nums.push_back(t.coefficient.get_num() * (sc.den / t.coefficient.get_den()));
    return products_.emplace(key, std::move(sc)).first->second;
  }

  std::vector<Polynomial> images_;
  std::uint64_t max_degree_;
  std::vector<std::size_t> moving_;
  std::vector<std::vector<Polynomial>> powers_;
  std::map<Monomial, Scaled> products_;
  std::uint64_t work_ = 0;
};

/// Rescales p so that its first canonical term has coefficient 1. Two nonzero
/// polynomials are rational multiples of each other iff their monic forms agree.
inline Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  Rational inv = 1 / p.terms().front().coefficient;
  return p * inv;
}

}  // namespace germkit
