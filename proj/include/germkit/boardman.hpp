#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "germkit/invariants.hpp"
#include "germkit/map_germ.hpp"

namespace germkit {

/// How candidate generators are pruned before they are stored.
enum class Pruning {
  /// Drop zeros and exact rational multiples of stored generators.
  multiples,
  /// Additionally replace each candidate by its remainder under multivariate
  /// division (graded-lex) by the stored generators, dropping zero remainders.
  /// Ideal-preserving: I + (g) = I + (g - sum q_i g_i).
  reduce,
};

/// Remainder of p under full multivariate division by `divisors` (graded-lex
/// leading terms). Zero means p lies in the ideal the divisors generate.
inline Polynomial reduce(const Polynomial& p, std::span<const Polynomial> divisors) {
  if (divisors.empty() || p.is_zero()) return p;
  std::vector<const Term*> leads;
  leads.reserve(divisors.size());
  for (const auto& d : divisors) leads.push_back(&leading_term(d));
  Polynomial rest = p;
  std::vector<Term> remainder;
  const std::size_t n = p.nvars();
  while (!rest.is_zero()) {
    const Term lt = leading_term(rest);
    bool divided = false;
    for (std::size_t k = 0; k < divisors.size(); ++k) {
      const Term& ld = *leads[k];
      bool divides = true;
      for (std::size_t i = 0; i < n && divides; ++i) divides = ld.exponents[i] <= lt.exponents[i];
      if (!divides) continue;
      Monomial m(n);
      for (std::size_t i = 0; i < n; ++i) m[i] = lt.exponents[i] - ld.exponents[i];
      rest -= Polynomial::monomial(std::move(m), lt.coefficient / ld.coefficient) * divisors[k];
      divided = true;
      break;
    }
    if (!divided) {
      rest -= Polynomial::monomial(lt.exponents, lt.coefficient);
      remainder.push_back(lt);
    }
  }
  return Polynomial::from_terms(n, std::move(remainder));
}

/// Finite generating set of an ideal of germs at 0, carried through the
/// Jacobian-extension iteration. Append-only; zero generators and rational
/// multiples of existing generators are never stored.
class GeneratorSet {
 public:
  /// Provenance tag of an original generator. Minors added at step k carry k.
  static constexpr std::size_t kOriginal = 0;

  explicit GeneratorSet(std::size_t nvars, Pruning pruning = Pruning::reduce) : nvars_(nvars), pruning_(pruning) {}

  GeneratorSet(std::size_t nvars, std::span<const Polynomial> gens, Pruning pruning = Pruning::reduce)
      : nvars_(nvars), pruning_(pruning) {
    for (const auto& g : gens) add(g, kOriginal);
  }

  explicit GeneratorSet(const MapGerm& f, Pruning pruning = Pruning::reduce)
      : GeneratorSet(f.nvars(), f.components(), pruning) {}

  /// Returns false when g was pruned.
  bool add(const Polynomial& g, std::size_t provenance) {
    if (g.nvars() != nvars_) throw StructuralError("generator has wrong number of variables");
    if (g.is_zero()) return false;
    if (keys_.count(monic(g)) != 0) return false;
    Polynomial kept = pruning_ == Pruning::reduce ? reduce(g, gens_) : g;
    if (kept.is_zero()) return false;
    if (!keys_.insert(monic(kept)).second) return false;
    gens_.push_back(std::move(kept));
    provenance_.push_back(provenance);
    return true;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  Pruning pruning() const noexcept { return pruning_; }
  std::size_t size() const noexcept { return gens_.size(); }
  bool empty() const noexcept { return gens_.empty(); }
  const std::vector<Polynomial>& gens() const noexcept { return gens_; }
  const std::vector<std::size_t>& provenance() const noexcept { return provenance_; }

  /// The ideal lies in the maximal ideal iff every generator vanishes at 0.
  bool proper() const {
    for (const auto& g : gens_) {
      if (g.constant_term() != 0) return false;
    }
    return true;
  }

 private:
  std::size_t nvars_;
  Pruning pruning_;
  std::vector<Polynomial> gens_;
  std::vector<std::size_t> provenance_;
  std::set<Polynomial> keys_;
};

/// n - rank of the Jacobian of the generators at the origin: the index of the
/// critical (largest proper) Jacobian extension.
inline std::size_t critical_index(const GeneratorSet& g) {
  return g.nvars() - rational_rank(linear_part(g.gens(), g.nvars()));
}

namespace detail {

// Incremental extension state: Jacobian rows are cached per generator, and for
// each minor size we remember how many generators were present the last time,
// so only row subsets touching a newer generator are recomputed.
class Extender {
 public:
  explicit Extender(std::size_t nvars) : nvars_(nvars) {}

  /// Adds all s x s minors of the Jacobian of g (pruned). Returns the number added.
  std::size_t extend(GeneratorSet& g, std::size_t s, std::size_t provenance) {
    while (rows_.size() < g.size()) {
      std::vector<Polynomial> row;
      row.reserve(nvars_);
      for (std::size_t j = 0; j < nvars_; ++j) row.push_back(derive(g.gens()[rows_.size()], j));
      rows_.push_back(std::move(row));
    }
    const std::size_t nrows = g.size();
    if (s < 1 || s > nvars_ || s > nrows) return 0;
    const std::size_t done = done_[s];
    const auto col_sets = combinations(nvars_, s);
    std::size_t added = 0;
    for (const auto& r : combinations(nrows, s)) {
      if (r.back() < done) continue;
      for (const auto& c : col_sets) {
        std::vector<Polynomial> entries;
        entries.reserve(s * s);
        for (auto i : r) {
          for (auto j : c) entries.push_back(rows_[i][j]);
        }
        PolyMatrix sub(s, s, std::move(entries));
        if (g.add(determinant(sub), provenance)) ++added;
      }
    }
    done_[s] = nrows;
    return added;
  }

 private:
  std::size_t nvars_;
  std::vector<std::vector<Polynomial>> rows_;
  std::map<std::size_t, std::size_t> done_;
};

}  // namespace detail

/// Delta_s I: the generators together with all s x s minors of their Jacobian,
/// pruned as the set's policy says.
inline GeneratorSet jacobian_extension(const GeneratorSet& g, std::size_t s, std::size_t provenance = 1) {
  if (s < 1 || s > std::min(g.size(), g.nvars())) throw StructuralError("minor size out of range");
  GeneratorSet out = g;
  detail::Extender ext(g.nvars());
  ext.extend(out, s, provenance);
  return out;
}

enum class SymbolStatus { stabilized_zero, steady_tail, truncated };

inline const char* to_string(SymbolStatus s) {
  switch (s) {
    case SymbolStatus::stabilized_zero: return "stabilized_zero";
    case SymbolStatus::steady_tail: return "steady_tail";
    case SymbolStatus::truncated: return "truncated";
  }
  return "?";
}

/// One run (a_i, alpha_i) of a Boardman symbol. An empty count means the run repeats forever.
struct SymbolRun {
  std::size_t value;
  std::optional<std::size_t> count;

  friend bool operator==(const SymbolRun&, const SymbolRun&) = default;
};

/// Run-length encoded non-increasing symbol sequence.
class BoardmanSymbol {
 public:
  BoardmanSymbol() = default;
  BoardmanSymbol(std::vector<SymbolRun> runs, SymbolStatus status) : runs_(std::move(runs)), status_(status) {}

  /// Encodes an explicit finite sequence. For non-truncated statuses the last
  /// value repeats forever.
  static BoardmanSymbol from_sequence(const std::vector<std::size_t>& values, SymbolStatus status) {
    std::vector<SymbolRun> runs;
    for (auto v : values) {
      if (!runs.empty() && runs.back().value == v) {
        ++*runs.back().count;
      } else {
        runs.push_back({v, 1});
      }
    }
    if (status != SymbolStatus::truncated && !runs.empty()) runs.back().count.reset();
    return BoardmanSymbol(std::move(runs), status);
  }

  const std::vector<SymbolRun>& runs() const noexcept { return runs_; }
  SymbolStatus status() const noexcept { return status_; }

  /// Number of entries that are actually known (unbounded when the last run is).
  std::optional<std::size_t> known_length() const {
    std::size_t n = 0;
    for (const auto& r : runs_) {
      if (!r.count) return std::nullopt;
      n += *r.count;
    }
    return n;
  }

  /// First `upto` entries, or fewer when the symbol is truncated earlier.
  std::vector<std::size_t> expand(std::size_t upto) const {
    std::vector<std::size_t> out;
    for (const auto& r : runs_) {
      const std::size_t k = r.count ? *r.count : upto;
      for (std::size_t i = 0; i < k && out.size() < upto; ++i) out.push_back(r.value);
      if (out.size() >= upto) break;
    }
    return out;
  }

  friend bool operator==(const BoardmanSymbol&, const BoardmanSymbol&) = default;

 private:
  std::vector<SymbolRun> runs_;
  SymbolStatus status_ = SymbolStatus::truncated;
};

/// A symbol computation ran out of resources. Carries the exact prefix computed so far.
class SymbolResourceError : public ResourceError {
 public:
  SymbolResourceError(const std::string& what, std::size_t step, BoardmanSymbol partial)
      : ResourceError(what), step_(step), partial_(std::move(partial)) {}

  std::size_t step() const noexcept { return step_; }
  const BoardmanSymbol& partial() const noexcept { return partial_; }

 private:
  std::size_t step_;
  BoardmanSymbol partial_;
};

class GeneratorBlowup : public SymbolResourceError {
 public:
  GeneratorBlowup(std::size_t step, std::size_t generators, BoardmanSymbol partial)
      : SymbolResourceError("generator cap exceeded at step " + std::to_string(step) + " (" +
                                std::to_string(generators) + " generators)",
                            step, std::move(partial)) {}
};

class WorkBudgetExceeded : public SymbolResourceError {
 public:
  WorkBudgetExceeded(std::size_t step, BoardmanSymbol partial)
      : SymbolResourceError("work budget exceeded at step " + std::to_string(step), step, std::move(partial)) {}
};

struct BoardmanOptions {
  std::size_t max_steps = 64;
  std::size_t generator_cap = 512;
  /// Coefficient operations allowed per jet computation (boardman_prefix); 0 means unlimited.
  std::uint64_t work_cap = 512'000'000;
};

/// Boardman symbol of the ideal generated by the given polynomials.
inline BoardmanSymbol boardman_symbol(const GeneratorSet& initial, const BoardmanOptions& opts = {}) {
  if (opts.max_steps < 1) throw StructuralError("max_steps must be positive");
  const std::size_t n = initial.nvars();
  if (initial.empty()) return BoardmanSymbol({{n, std::nullopt}}, SymbolStatus::steady_tail);

  GeneratorSet g = initial;
  detail::Extender ext(n);
  std::vector<std::size_t> values;
  for (std::size_t step = 1; step <= opts.max_steps; ++step) {
    const std::size_t i = critical_index(g);
    values.push_back(i);
    if (i == 0) return BoardmanSymbol::from_sequence(values, SymbolStatus::stabilized_zero);
    const std::size_t added = ext.extend(g, n - i + 1, step);
    if (g.size() > opts.generator_cap) {
      throw GeneratorBlowup(step, g.size(), BoardmanSymbol::from_sequence(values, SymbolStatus::truncated));
    }
    if (added == 0 && values.size() >= 2 && values[values.size() - 2] == i) {
      return BoardmanSymbol::from_sequence(values, SymbolStatus::steady_tail);
    }
  }
  return BoardmanSymbol::from_sequence(values, SymbolStatus::truncated);
}

inline BoardmanSymbol boardman_symbol(const MapGerm& f, const BoardmanOptions& opts = {}) {
  return boardman_symbol(GeneratorSet(f), opts);
}

namespace detail {

struct CanonicalOrder {
  bool operator()(const Monomial& a, const Monomial& b) const { return canonical_less(a, b); }
};

struct OutOfWork {};

// Deterministic cost counter (coefficient operations) with an optional cap.
struct Meter {
  std::uint64_t used = 0;
  std::uint64_t cap = 0;

  void charge(std::uint64_t w) {
    used += w;
    if (cap != 0 && used > cap) throw OutOfWork{};
  }
};

// Scales p to an integer polynomial with coprime coefficients and a positive
// first term.
inline Polynomial primitive(const Polynomial& p) {
  if (p.is_zero()) return p;
  Integer den = 1;
  Integer content = 0;
  for (const auto& t : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coefficient.get_den_mpz_t());
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Integer c = t.coefficient.get_num() * (den / t.coefficient.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    out.push_back({t.exponents, Rational(c)});
  }
  if (sgn(out.front().coefficient) < 0) content = -content;
  for (auto& t : out) {
    mpz_divexact(mpq_numref(t.coefficient.get_mpq_t()), mpq_numref(t.coefficient.get_mpq_t()), content.get_mpz_t());
  }
  return Polynomial::from_terms(p.nvars(), std::move(out));
}

// Echelon basis of the rational span of some polynomials, rows kept as
// primitive integer polynomials. The pivot of a row is its lowest canonical
// monomial.
class Echelon {
 public:
  explicit Echelon(Meter* meter = nullptr) : meter_(meter) {}

  bool add(const Polynomial& q) {
    Polynomial p = primitive(q);
    for (const auto& [piv, row] : rows_) {
      if (p.is_zero()) return false;
      if (canonical_less(piv, p.terms().front().exponents)) continue;
      const Rational c = p.coefficient(piv);
      if (c == 0) continue;
      const Rational& lead = row.terms().front().coefficient;
      if (meter_ != nullptr) meter_->charge(p.size() + row.size());
      p = p * lead - row * c;
    }
    if (p.is_zero()) return false;
    p = primitive(p);
    const Monomial piv = p.terms().front().exponents;
    rows_.emplace(piv, std::move(p));
    return true;
  }

  void truncate_to(std::uint64_t max_degree) {
    for (auto it = rows_.begin(); it != rows_.end();) {
      if (total_degree(it->first) > max_degree) {
        it = rows_.erase(it);
      } else {
        it->second = truncate(it->second, max_degree);
        ++it;
      }
    }
  }

  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const std::map<Monomial, Polynomial, CanonicalOrder>& rows() const noexcept { return rows_; }

 private:
  std::map<Monomial, Polynomial, CanonicalOrder> rows_;
  Meter* meter_;
};

// Power series solution of x_a = h_a(x), a in `solved`, modulo degree > top:
// returns the substitution images (x_a -> phi_a(other variables), others fixed).
// The h_a carry no linear terms in solved variables, so the Jacobian of
// x - h(x) in those variables is invertible and Newton's method doubles the
// number of correct degrees per pass.
inline std::vector<Polynomial> solve_implicit(const std::vector<Polynomial>& h, const std::vector<std::size_t>& solved,
                                              std::uint64_t top, Meter& meter) {
  const std::size_t r = solved.size();
  const std::size_t n = h.front().nvars();
  using Matrix = std::vector<std::vector<Polynomial>>;
  auto mul = [&](const Matrix& a, const Matrix& b, std::uint64_t deg) {
    Matrix c(r, std::vector<Polynomial>(r, Polynomial(n)));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t k = 0; k < r; ++k) {
          meter.charge(a[i][k].size() * b[k][j].size());
          c[i][j] += multiply_truncated(a[i][k], b[k][j], deg);
        }
      }
    }
    return c;
  };
  auto identity = [&] {
    Matrix m(r, std::vector<Polynomial>(r, Polynomial(n)));
    for (std::size_t i = 0; i < r; ++i) m[i][i] = Polynomial::constant(n, 1);
    return m;
  };
  std::vector<Matrix::value_type> dh(r);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t k = 0; k < r; ++k) dh[j].push_back(derive(h[j], solved[k]));
  }
  std::vector<Polynomial> images;
  for (std::size_t v = 0; v < n; ++v) images.push_back(Polynomial::variable(n, v));
  for (auto a : solved) images[a] = Polynomial(n);
  std::uint64_t d = 0;
  while (d < top) {
    const std::uint64_t next = std::min<std::uint64_t>(2 * d + 1, top);
    TruncatedSubstitution sub(images, next);
    std::uint64_t seen = 0;
    auto charged = [&](Polynomial q) {
      meter.charge(sub.work() - seen);
      seen = sub.work();
      return q;
    };
    std::vector<Polynomial> residual;
    for (std::size_t j = 0; j < r; ++j) residual.push_back(images[solved[j]] - charged(sub(h[j])));
    Matrix m = identity();
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < r; ++k) m[j][k] -= truncate(charged(sub(dh[j][k])), d);
    }
    // Newton-Schulz: v <- v (2 - m v), exact to degree 2e+1 from degree e
    Matrix v = identity();
    for (std::uint64_t e = 0; e < d;) {
      e = std::min<std::uint64_t>(2 * e + 1, d);
      Matrix mv = mul(m, v, e);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) mv[i][j] = (i == j ? Polynomial::constant(n, 2) : Polynomial(n)) - mv[i][j];
      }
      v = mul(v, mv, e);
    }
    for (std::size_t j = 0; j < r; ++j) {
      Polynomial step(n);
      for (std::size_t k = 0; k < r; ++k) step += multiply_truncated(v[j][k], residual[k], next);
      images[solved[j]] = truncate(images[solved[j]] - step, next);
    }
    d = next;
  }
  return images;
}

}  // namespace detail

/// Exact first `steps` entries of the symbol, computed on jets.
///
/// Works modulo a power of the maximal ideal that shrinks by one per step, which
/// leaves the first `steps` ranks untouched. Whenever generators with
/// independent linear parts show up, the variables they define are solved for as
/// truncated power series and substituted away; in those coordinates the critical
/// extension just adds all first partials in the surviving variables. The result
/// is stabilized_zero when 0 is reached, otherwise truncated.
inline BoardmanSymbol boardman_prefix(const MapGerm& f, std::size_t steps, std::size_t generator_cap = 512,
                                      std::uint64_t work_cap = 0) {
  if (steps < 1) throw StructuralError("steps must be positive");
  const std::size_t n = f.nvars();
  detail::Meter meter{0, work_cap};
  std::vector<bool> live(n, true);
  std::size_t free = n;
  std::vector<std::size_t> values;
  try {
    detail::Echelon e(&meter);
    for (const auto& c : f.components()) e.add(truncate(c, steps));
    for (std::size_t k = 1; k <= steps; ++k) {
      const std::uint64_t top = steps + 1 - k;
      while (!e.empty() && total_degree(e.rows().begin()->first) == 1) {
        std::vector<Polynomial> linear;
        std::vector<Polynomial> rest;
        std::vector<std::size_t> solved;
        for (const auto& [piv, row] : e.rows()) {
          if (total_degree(piv) == 1) {
            solved.push_back(static_cast<std::size_t>(std::find(piv.begin(), piv.end(), 1U) - piv.begin()));
            linear.push_back(row * (Rational(1) / row.terms().front().coefficient));
          } else {
            rest.push_back(row);
          }
        }
        for (std::size_t a = linear.size(); a-- > 0;) {
          for (std::size_t b = a + 1; b < linear.size(); ++b) {
            Monomial piv(n, 0);
            piv[solved[b]] = 1;
            const Rational c = linear[a].coefficient(piv);
            if (c != 0) linear[a] -= linear[b] * c;
          }
        }
        for (auto a : solved) live[a] = false;
        free -= solved.size();
        e = detail::Echelon(&meter);
        if (rest.empty()) break;
        std::vector<Polynomial> h;
        for (std::size_t j = 0; j < solved.size(); ++j) h.push_back(Polynomial::variable(n, solved[j]) - linear[j]);
        TruncatedSubstitution sub(detail::solve_implicit(h, solved, top, meter), top);
        std::uint64_t seen = 0;
        for (const auto& g : rest) {
          Polynomial r = sub(g);
          meter.charge(sub.work() - seen);
          seen = sub.work();
          e.add(r);
        }
      }
      values.push_back(free);
      if (free == 0) return BoardmanSymbol::from_sequence(values, SymbolStatus::stabilized_zero);
      if (e.empty()) {
        values.resize(steps, free);
        break;
      }
      if (k == steps) break;
      std::vector<Polynomial> partials;
      for (const auto& [piv, row] : e.rows()) {
        for (std::size_t v = 0; v < n; ++v) {
          if (live[v]) partials.push_back(truncate(derive(row, v), top - 1));
        }
      }
      e.truncate_to(top - 1);
      for (auto& p : partials) e.add(p);
      if (e.size() > generator_cap) {
        throw GeneratorBlowup(k, e.size(), BoardmanSymbol::from_sequence(values, SymbolStatus::truncated));
      }
    }
  } catch (const detail::OutOfWork&) {
    throw WorkBudgetExceeded(values.size() + 1, BoardmanSymbol::from_sequence(values, SymbolStatus::truncated));
  }
  return BoardmanSymbol::from_sequence(values, SymbolStatus::truncated);
}

/// boardman_prefix with jet length 8, 16, ... up to max_steps, stopping as soon
/// as the symbol reaches 0. When a level runs over opts.work_cap the longest
/// exact prefix obtained so far is returned (status truncated).
inline BoardmanSymbol boardman_prefix_deepening(const MapGerm& f, const BoardmanOptions& opts = {}) {
  std::size_t k = std::min<std::size_t>(8, opts.max_steps);
  BoardmanSymbol best;
  while (true) {
    try {
      best = boardman_prefix(f, k, opts.generator_cap, opts.work_cap);
    } catch (const SymbolResourceError& e) {
      if (e.partial().expand(opts.max_steps).size() > best.expand(opts.max_steps).size()) best = e.partial();
      return best;
    }
    if (best.status() == SymbolStatus::stabilized_zero || k >= opts.max_steps) return best;
    k = std::min(2 * k, opts.max_steps);
  }
}

inline bool symbol_prefix_equal(const BoardmanSymbol& a, const BoardmanSymbol& b, std::size_t upto) {
  return a.expand(upto) == b.expand(upto);
}

}  // namespace germkit
