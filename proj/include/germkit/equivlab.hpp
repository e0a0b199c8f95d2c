#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "germkit/boardman.hpp"
#include "germkit/invariants.hpp"
#include "germkit/map_germ.hpp"

namespace germkit {

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9e3779b97f4a7c15, then the
/// output is the state passed through two xor-shift-multiply rounds. Chosen for
/// its exact portability; corpora are reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi], unbiased (rejection on the top range).
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = span == 0 ? 0 : (~std::uint64_t{0} - span + 1) % span;
    std::uint64_t r;
    do {
      r = next();
    } while (r < limit);
    return lo + static_cast<std::int64_t>(span == 0 ? r : r % span);
  }

  bool chance(unsigned percent) { return uniform(0, 99) < percent; }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from (seed, stream tag, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  SplitMix64 mix(seed ^ (tag * 0x9e3779b97f4a7c15ULL));
  mix.next();
  SplitMix64 mix2(mix.next() ^ (index * 0xbf58476d1ce4e5b9ULL));
  return mix2.next();
}

struct CorpusSpec {
  std::uint64_t seed = 42;
  std::size_t count = 200;
  std::size_t max_vars = 3;
  std::size_t max_comps = 2;
  std::size_t max_degree = 5;
  std::int64_t coeff_bound = 9;
};

namespace detail {

inline Monomial random_monomial(SplitMix64& rng, std::size_t nvars, std::size_t degree) {
  Monomial m(nvars, 0);
  for (std::size_t k = 0; k < degree; ++k) ++m[static_cast<std::size_t>(rng.uniform(0, nvars - 1))];
  return m;
}

inline Rational random_nonzero(SplitMix64& rng, std::int64_t bound) {
  std::int64_t c = 0;
  while (c == 0) c = rng.uniform(-bound, bound);
  return Rational(static_cast<long>(c));
}

}  // namespace detail

/// Deterministic random germ number `index` of the corpus.
///
/// Draws n in [1, max_vars], p in [1, max_comps] and an order k in [1, max_degree];
/// each component gets one to four terms of degree in [k, max_degree], the first
/// component always carrying a degree-k term.
inline MapGerm random_germ(const CorpusSpec& spec, std::size_t index) {
  if (index >= spec.count) throw StructuralError("corpus index out of range");
  SplitMix64 rng(derive_seed(spec.seed, 0x6765726d, index));
  const auto n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(spec.max_vars)));
  const auto p = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(spec.max_comps)));
  const auto k = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(spec.max_degree)));
  std::vector<Polynomial> comps;
  for (std::size_t c = 0; c < p; ++c) {
    const auto nterms = rng.uniform(1, 4);
    std::vector<Term> terms;
    for (std::int64_t t = 0; t < nterms; ++t) {
      const auto deg = (c == 0 && t == 0) ? k : static_cast<std::size_t>(rng.uniform(k, spec.max_degree));
      terms.push_back({detail::random_monomial(rng, n, deg), detail::random_nonzero(rng, spec.coeff_bound)});
    }
    comps.push_back(Polynomial::from_terms(n, std::move(terms)));
  }
  // Cancellation can wipe the designated degree-k term; the germ stays valid
  // but must not be the zero map.
  if (comps.front().is_zero()) {
    comps.front() = Polynomial::monomial(detail::random_monomial(rng, n, k), detail::random_nonzero(rng, spec.coeff_bound));
  }
  return MapGerm(n, std::move(comps));
}

/// Smooth contact move g = U * (f o phi): phi a polynomial diffeo germ of the
/// source, U a polynomial matrix invertible at the origin.
struct ContactMove {
  MapGerm phi;
  PolyMatrix u;
};

inline Rational det_at_origin(const PolyMatrix& m) {
  const auto vals = value_at_origin(m);
  std::vector<Polynomial> consts;
  for (const auto& row : vals) {
    for (const auto& v : row) consts.push_back(Polynomial::constant(0, v));
  }
  return determinant(PolyMatrix(m.rows(), m.cols(), std::move(consts))).constant_term();
}

inline bool is_valid_move(const ContactMove& m) {
  if (m.phi.size() != m.phi.nvars() || m.u.rows() != m.u.cols()) return false;
  return det_at_origin(jacobian(m.phi)) != 0 && det_at_origin(m.u) != 0;
}

inline ContactMove identity_move(std::size_t n, std::size_t p) {
  PolyMatrix u(p, p, n);
  for (std::size_t i = 0; i < p; ++i) u.set(i, i, Polynomial::constant(n, 1));
  return {MapGerm::identity(n), std::move(u)};
}

/// Deterministic random move. Index 0 is the identity move.
///
/// phi = L x + up to two quadratic terms per component, L an integer matrix with
/// entries in [-3, 3] and nonzero determinant (rejection sampling). U = U0 plus
/// at most one term of degree 1 or 2 per entry, U0 integer and invertible.
inline ContactMove random_move(const CorpusSpec& spec, std::size_t index, std::size_t n, std::size_t p) {
  if (index == 0) return identity_move(n, p);
  SplitMix64 rng(derive_seed(spec.seed, 0x6d6f7665, index));
  auto random_invertible = [&](std::size_t dim) {
    while (true) {
      PolyMatrix m(dim, dim, 0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) m.set(i, j, Polynomial::constant(0, static_cast<long>(rng.uniform(-3, 3))));
      }
      if (!determinant(m).is_zero()) return m;
    }
  };
  const PolyMatrix lin = random_invertible(n);
  std::vector<Polynomial> phi;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial c(n);
    for (std::size_t j = 0; j < n; ++j) c += Polynomial::variable(n, j) * lin(i, j).constant_term();
    const auto extra = rng.uniform(0, 2);
    for (std::int64_t t = 0; t < extra; ++t) {
      c += Polynomial::monomial(detail::random_monomial(rng, n, 2), detail::random_nonzero(rng, 2));
    }
    phi.push_back(std::move(c));
  }
  const PolyMatrix u0 = random_invertible(p);
  PolyMatrix u(p, p, n);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      Polynomial e = Polynomial::constant(n, u0(i, j).constant_term());
      if (rng.chance(50)) {
        const auto deg = static_cast<std::size_t>(rng.uniform(1, 2));
        e += Polynomial::monomial(detail::random_monomial(rng, n, deg), detail::random_nonzero(rng, 2));
      }
      u.set(i, j, std::move(e));
    }
  }
  return {MapGerm(n, std::move(phi)), std::move(u)};
}

/// U * (f o phi).
inline MapGerm apply_contact_move(const MapGerm& f, const ContactMove& m) {
  if (m.phi.size() != f.nvars() || m.phi.nvars() != f.nvars()) throw StructuralError("move acts on a different source");
  if (m.u.rows() != f.size() || m.u.cols() != f.size()) throw StructuralError("move acts on a different target");
  return apply_matrix(m.u, compose(f, m.phi));
}

/// Order, rank and symbol of one germ. `error` is set when a piece could not be
/// computed; a resource error keeps the symbol prefix reached so far.
struct InvariantTriple {
  std::optional<std::size_t> order;
  std::size_t rank = 0;
  BoardmanSymbol symbol;
  std::optional<std::string> error;
};

enum class SymbolMethod {
  iteration,  // boardman_symbol
  jets,       // boardman_prefix_deepening
};

inline InvariantTriple compute_triple(const MapGerm& f, const BoardmanOptions& opts,
                                      SymbolMethod method = SymbolMethod::iteration) {
  InvariantTriple t;
  t.rank = rank(f);
  if (!f.is_zero()) t.order = order(f);
  try {
    if (method == SymbolMethod::iteration) {
      t.symbol = boardman_symbol(f, opts);
    } else {
      t.symbol = boardman_prefix_deepening(f, opts);
      const auto known = t.symbol.known_length();
      if (t.symbol.status() == SymbolStatus::truncated && known && *known < opts.max_steps) {
        t.error = "jet prefix stopped at " + std::to_string(*known) + " steps (work cap)";
      }
    }
  } catch (const SymbolResourceError& e) {
    t.symbol = e.partial();
    t.error = e.what();
  }
  return t;
}

/// Number of leading entries (at most upto) on which both symbols are known.
inline std::size_t comparable_prefix(const BoardmanSymbol& a, const BoardmanSymbol& b, std::size_t upto) {
  return std::min({upto, a.expand(upto).size(), b.expand(upto).size()});
}

struct InvarianceCase {
  std::size_t germ_index;
  std::size_t move_index;
  MapGerm germ;
  InvariantTriple before;
  InvariantTriple after;
  std::size_t compared_steps;
  bool violation;
};

struct InvarianceReport {
  std::vector<InvarianceCase> cases;
  std::size_t violations = 0;
  std::size_t incomplete = 0;  // cases compared on fewer than max_steps entries
};

/// Applies `moves` random contact moves (indices 1..moves) to each germ and
/// checks that order, rank and the symbol prefix are unchanged.
inline InvarianceReport invariance_report(const std::vector<MapGerm>& germs, const CorpusSpec& spec,
                                          std::size_t moves, const BoardmanOptions& opts) {
  InvarianceReport report;
  for (std::size_t gi = 0; gi < germs.size(); ++gi) {
    const MapGerm& f = germs[gi];
    const InvariantTriple before = compute_triple(f, opts);
    for (std::size_t mi = 1; mi <= moves; ++mi) {
      const ContactMove move = random_move(spec, gi * 1000 + mi, f.nvars(), f.size());
      const MapGerm g = apply_contact_move(f, move);
      InvariantTriple after = compute_triple(g, opts, SymbolMethod::jets);
      const std::size_t compared = comparable_prefix(before.symbol, after.symbol, opts.max_steps);
      const bool symbol_ok = [&] {
        auto a = before.symbol.expand(compared);
        auto b = after.symbol.expand(compared);
        return a == b;
      }();
      const bool violation = before.order != after.order || before.rank != after.rank || !symbol_ok;
      if (violation) ++report.violations;
      if (compared < opts.max_steps) ++report.incomplete;
      report.cases.push_back({gi, mi, g, before, std::move(after), compared, violation});
    }
  }
  return report;
}

/// `count` random combinations sum_i h_i f_i, h_i a small integer plus at most
/// one linear term. They lie in the ideal of f, so appending them leaves the ideal unchanged.
inline std::vector<Polynomial> redundant_combinations(const CorpusSpec& spec, std::size_t index, const MapGerm& f,
                                                      std::size_t count = 3) {
  SplitMix64 rng(derive_seed(spec.seed, 0x72656475, index));
  const std::size_t n = f.nvars();
  std::vector<Polynomial> out;
  while (out.size() < count) {
    Polynomial c(n);
    for (const auto& fi : f.components()) {
      Polynomial h = Polynomial::constant(n, static_cast<long>(rng.uniform(-2, 2)));
      if (rng.chance(50)) h += Polynomial::monomial(detail::random_monomial(rng, n, 1), detail::random_nonzero(rng, 2));
      c += h * fi;
    }
    if (!c.is_zero()) out.push_back(std::move(c));
  }
  return out;
}

struct IndependenceCase {
  std::size_t germ_index;
  MapGerm augmented;
  InvariantTriple before;
  InvariantTriple after;
  std::size_t compared_steps;
  bool violation;
};

struct IndependenceReport {
  std::vector<IndependenceCase> cases;
  std::size_t violations = 0;
  std::size_t incomplete = 0;
};

/// Appends redundant combinations to each germ's generators and compares symbol prefixes.
inline IndependenceReport independence_report(const std::vector<MapGerm>& germs, const CorpusSpec& spec,
                                              const BoardmanOptions& opts, std::size_t extra = 3) {
  IndependenceReport report;
  for (std::size_t gi = 0; gi < germs.size(); ++gi) {
    const MapGerm& f = germs[gi];
    auto comps = f.components();
    for (auto& c : redundant_combinations(spec, gi, f, extra)) comps.push_back(std::move(c));
    MapGerm g(f.nvars(), std::move(comps));
    const InvariantTriple before = compute_triple(f, opts);
    InvariantTriple after = compute_triple(g, opts);
    const std::size_t compared = comparable_prefix(before.symbol, after.symbol, opts.max_steps);
    const bool violation = before.symbol.expand(compared) != after.symbol.expand(compared);
    if (violation) ++report.violations;
    if (compared < opts.max_steps) ++report.incomplete;
    report.cases.push_back({gi, std::move(g), before, std::move(after), compared, violation});
  }
  return report;
}

inline std::vector<MapGerm> corpus(const CorpusSpec& spec) {
  std::vector<MapGerm> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(random_germ(spec, i));
  return out;
}

inline InvarianceReport invariance_report(const CorpusSpec& spec, std::size_t moves, const BoardmanOptions& opts) {
  return invariance_report(corpus(spec), spec, moves, opts);
}

}  // namespace germkit
