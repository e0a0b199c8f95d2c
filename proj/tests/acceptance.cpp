// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "germkit/germkit.hpp"
#include "oracles.hpp"

using namespace germkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d: %s -- %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

Outcome golden_symbols() {
  const std::pair<const char*, const char*> cases[] = {
      {"paper-f0", R"({"runs":[[2,3],[1,5],[0,null]],"status":"stabilized_zero"})"},
      {"paper-f1", R"({"runs":[[2,3],[1,4],[0,null]],"status":"stabilized_zero"})"},
      {"paper-f", R"({"runs":[[2,3],[1,1],[0,null]],"status":"stabilized_zero"})"},
      {"paper-g", R"({"runs":[[2,3],[1,1],[0,null]],"status":"stabilized_zero"})"},
  };
  std::string detail;
  bool ok = true;
  for (const auto& [name, want] : cases) {
    const auto t0 = Clock::now();
    const auto got = to_json(boardman_symbol(preset_germ(name).germ)).dump();
    const double dt = seconds_since(t0);
    const bool good = got == want && dt < 1.0;
    ok = ok && good;
    detail += std::string(name) + (good ? " ok " : " MISMATCH " + got + " ");
  }
  return {ok, detail};
}

Outcome two_component_example() {
  const auto f = preset_germ("cusp-pair").germ;
  const auto h = first_homogeneous_part(f);
  const std::vector<std::string> xy = {"x", "y"};
  const bool ok = order(f) == 2 && rank(f) == 0 && print_polynomial(h[0], xy) == "x^2" && h[1].is_zero();
  return {ok, "order " + std::to_string(order(f)) + ", rank " + std::to_string(rank(f)) + ", H_f = (" +
                  print_polynomial(h[0], xy) + ", " + print_polynomial(h[1], xy) + ")"};
}

Outcome property_one() {
  const auto t0 = Clock::now();
  const CorpusSpec spec;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto f = random_germ(spec, i);
    if (boardman_symbol(f).expand(1).at(0) != f.nvars() - rank(f)) ++bad;
  }
  const double dt = seconds_since(t0);
  return {bad == 0 && dt < 60, std::to_string(spec.count) + " germs, " + std::to_string(bad) + " failures"};
}

Outcome property_two() {
  const CorpusSpec spec;
  std::size_t seen = 0, bad = 0;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto f = random_germ(spec, i);
    if (rank(f) != 0) continue;
    ++seen;
    const auto s = boardman_symbol(f);
    if (s.runs().front().count.value_or(0) != order(f) - 1) ++bad;
  }
  return {bad == 0 && seen > 0, std::to_string(seen) + " rank-0 germs, " + std::to_string(bad) + " failures"};
}

Outcome invariance_campaign() {
  const auto t0 = Clock::now();
  const auto rep = invariance_report(CorpusSpec{}, 10, BoardmanOptions{});
  const double dt = seconds_since(t0);
  std::size_t shortest = 64;
  for (const auto& c : rep.cases) shortest = std::min(shortest, c.compared_steps);
  return {rep.violations == 0 && dt < 300,
          std::to_string(rep.cases.size()) + " cases, " + std::to_string(rep.violations) + " violations, " +
              std::to_string(rep.incomplete) + " compared on a shorter prefix (shortest " + std::to_string(shortest) +
              " steps)"};
}

Outcome generator_independence() {
  const CorpusSpec spec;
  const auto rep = independence_report(corpus(spec), spec, BoardmanOptions{});
  return {rep.violations == 0, std::to_string(rep.cases.size()) + " germs + 3 combinations each, " +
                                   std::to_string(rep.violations) + " violations, " +
                                   std::to_string(rep.incomplete) + " incomplete"};
}

Outcome rescaling_probe() {
  const auto grid = SampleGrid::lattice(2, 0.1);
  const auto ms = power_scales(20);
  const auto u = unipotent_quadruple();
  const auto rows = theorem31_probe(u.f, u.g, u.phi, u.psi, grid, ms);
  Real worst_r = 0;
  for (const auto& r : rows) worst_r = std::max(worst_r, r.r);
  bool halves = true;
  for (std::size_t i = rows.size() - 5; i < rows.size(); ++i) {
    const Real ratio = rows[i - 1].d1 / rows[i].d1;
    halves = halves && ratio >= 1.8L && ratio <= 2.2L;
  }
  const auto p = paper_f_quadruple();
  Real worst_rel = 0;
  for (const auto& r : theorem31_probe(p.f, p.g, p.phi, p.psi, grid, ms)) {
    worst_rel = std::max(worst_rel, std::fabs(r.d1 * r.m - 1));
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "unipotent max R %.3Le, D1 halving %s; paper-f max |m D1 - 1| %.3Le",
                worst_r, halves ? "yes" : "no", worst_rel);
  return {worst_r <= 1e-9L && halves && worst_rel <= 1e-12L, buf};
}

Outcome norm_ratio_probe() {
  const auto grid = SampleGrid::lattice(2, 0.05, true);
  const auto u = unipotent_quadruple();
  const auto r = lemma21_probe(u.f, u.g, LipschitzMap::from_germ(unipotent_inverse(u.phi)), grid);
  const auto f = preset_germ("cusp-pair").germ;
  const auto same = lemma21_probe(f, f, LipschitzMap::identity(2), grid);
  char buf[200];
  std::snprintf(buf, sizeof buf, "unipotent [%.4Lf, %.4Lf] c = %.4Lf; f = g [%.17Lg, %.17Lg]", r.min, r.max, r.c,
                same.min, same.max);
  const bool ok = r.min >= 1 / r.c && r.max <= r.c && r.c < 10 && same.min == 1 && same.max == 1;
  return {ok, buf};
}

Outcome puiseux_pairs_check() {
  const auto t0 = Clock::now();
  using Pairs = std::vector<std::pair<long, long>>;
  const auto f = preset_germ("paper-f").germ[0];
  const auto g = preset_germ("paper-g").germ[0];
  const auto bf = puiseux_expansions(f);
  const auto bg = puiseux_expansions(g);
  bool ok = !bf.empty() && !bg.empty();
  for (const auto& b : bf) ok = ok && puiseux_pairs(b) == Pairs{{5, 4}};
  for (const auto& b : bg) ok = ok && puiseux_pairs(b) == Pairs{{3, 2}, {7, 2}};
  ok = ok && !topologically_equal(puiseux_pairs(bf[0]), puiseux_pairs(bg[0]));
  bool residuals = true;
  for (const auto* set : {&bf, &bg}) {
    const auto& curve = set == &bf ? f : g;
    for (const auto& b : *set) residuals = residuals && residual_ok(curve, b, 1e-2L) && residual_ok(curve, b, 1e-3L);
  }
  const double dt = seconds_since(t0);
  return {ok && residuals && dt < 5,
          std::to_string(bf.size()) + " branches {(5,4)}, " + std::to_string(bg.size()) +
              " branches {(3,2),(7,2)}, residuals " + (residuals ? "ok" : "FAILED")};
}

Outcome oracle_equivalence() {
  oracle::Random rng(1234);
  std::size_t det_bad = 0, minor_count = 0;
  for (int i = 0; i < 100; ++i) {
    const auto m = rng.matrix(4, 2);
    for (std::size_t s = 1; s <= 4; ++s) {
      const auto got = minors(m, s);
      std::size_t k = 0;
      for (const auto& r : combinations(4, s)) {
        for (const auto& c : combinations(4, s)) {
          ++minor_count;
          if (got[k++] != oracle::permutation_det(m.submatrix(r, c))) ++det_bad;
        }
      }
    }
  }
  std::size_t trip_bad = 0;
  const std::vector<std::string> names = {"x", "y", "z"};
  for (int i = 0; i < 500; ++i) {
    const auto p = rng.polynomial(3, 6, 5);
    if (parse_polynomial(print_polynomial(p, names), names) != p) ++trip_bad;
  }
  bool trace_ok = true;
  const MapGerm sq(2, {parse_polynomial("x^2", {"x", "y"})});
  GeneratorSet gs(sq);
  for (const auto& step : oracle::x_squared_trace()) {
    std::vector<std::string> printed;
    for (const auto& p : gs.gens()) printed.push_back(print_polynomial(monic(p), {"x", "y"}));
    const auto i = critical_index(gs);
    trace_ok = trace_ok && printed == step.ideal && i == step.value;
    gs = jacobian_extension(gs, 2 - i + 1);
  }
  trace_ok = trace_ok && boardman_symbol(sq).expand(8) == std::vector<std::size_t>{2, 1, 1, 1, 1, 1, 1, 1} &&
             boardman_symbol(sq).status() == SymbolStatus::steady_tail;
  return {det_bad == 0 && trip_bad == 0 && trace_ok,
          std::to_string(minor_count) + " minors (" + std::to_string(det_bad) + " off), 500 round trips (" +
              std::to_string(trip_bad) + " off), x^2 trace " + (trace_ok ? "ok" : "MISMATCH")};
}

}  // namespace

int main() {
  report(1, "golden symbols of f0, f1, f, g", golden_symbols);
  report(2, "order, rank, H_f of (x^2+y^3, x^2 y)", two_component_example);
  report(3, "symbol[0] = n - rank on the corpus", property_one);
  report(4, "first run length = ord - 1 on rank-0 germs", property_two);
  report(5, "invariance under 10 smooth contact moves", invariance_campaign);
  report(6, "redundant generators leave symbols unchanged", generator_independence);
  report(7, "rescaling probe: R, D1 halving, paper-f D1 = 1/m", rescaling_probe);
  report(8, "norm-ratio probe bounded by its own c", norm_ratio_probe);
  report(9, "Puiseux pairs of f and g", puiseux_pairs_check);
  report(10, "oracle equivalence: minors, round trips, x^2 trace", oracle_equivalence);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
