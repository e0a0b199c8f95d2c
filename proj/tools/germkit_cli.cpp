#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "germkit/germkit.hpp"

using namespace germkit;

namespace {

enum Exit { ok = 0, usage = 1, parse = 2, germ = 3, undefined = 4, resource = 5, nonconvergence = 6, violations = 7 };

struct Config {
  std::string input;
  std::string preset;
  bool json = false;
  std::uint64_t seed = 42;
  std::size_t count = 200;
  std::size_t moves = 10;
  std::size_t max_steps = 64;
  std::size_t gen_cap = 512;
  std::uint64_t work_cap = BoardmanOptions{}.work_cap;
  double grid_step = 0.1;
  unsigned m_exp = 20;
  std::size_t max_terms = 12;
  std::size_t expand = 0;
  bool jets = false;
  bool transpose = false;
  std::string check = "moves";
  std::size_t redundant = 3;
  double lemma_step = 0.05;
};

BoardmanOptions symbol_options(const Config& c) { return {c.max_steps, c.gen_cap, c.work_cap}; }

NamedGerm load_germ(const Config& c) {
  if (!c.preset.empty()) return preset_germ(c.preset);
  if (c.input.empty()) throw StructuralError("no input: pass --input FILE, '-' for stdin, or --preset NAME");
  std::string text;
  if (c.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(c.input);
    if (!in) throw StructuralError("cannot open " + c.input);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const GermFile file = parse_germ_file(text);
  return {file.vars, file.polynomial_map()};
}

std::string components_text(const MapGerm& f, const std::vector<std::string>& vars) {
  std::string out = "(";
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? ", " : "") + print_polynomial(f[i], vars);
  return out + ")";
}

int cmd_invariants(const Config& c) {
  const auto g = load_germ(c);
  if (g.germ.is_zero()) throw UndefinedInvariantError("order undefined: the zero map has no lowest-degree part");
  const auto k = order(g.germ);
  const auto r = rank(g.germ);
  const auto h = first_homogeneous_part(g.germ);
  if (c.json) {
    std::cout << Json{{"order", k}, {"rank", r}, {"hf", components_json(h, g.vars)}}.dump() << "\n";
  } else {
    std::cout << "order " << k << "\nrank " << r << "\nH_f = " << components_text(h, g.vars) << "\n";
  }
  return ok;
}

int cmd_hpart(const Config& c) {
  const auto g = load_germ(c);
  if (g.germ.is_zero()) throw UndefinedInvariantError("order undefined: the zero map has no lowest-degree part");
  const auto h = first_homogeneous_part(g.germ);
  if (c.json) {
    std::cout << Json{{"order", order(g.germ)}, {"components", components_json(h, g.vars)}}.dump() << "\n";
  } else {
    std::cout << write_germ_file(h, g.vars);
  }
  return ok;
}

int cmd_symbol(const Config& c) {
  const auto g = load_germ(c);
  const auto opts = symbol_options(c);
  const BoardmanSymbol s = c.jets ? boardman_prefix_deepening(g.germ, opts) : boardman_symbol(g.germ, opts);
  if (c.json) {
    Json j = to_json(s);
    if (c.expand > 0) j["expanded"] = s.expand(c.expand);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << symbol_text(s) << "  [" << to_string(s.status()) << "]\n";
    if (c.expand > 0) {
      const auto v = s.expand(c.expand);
      for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? " " : "") << v[i];
      std::cout << "\n";
    }
  }
  return ok;
}

int cmd_puiseux(const Config& c) {
  const auto g = load_germ(c);
  if (g.germ.size() != 1 || g.germ.nvars() != 2) throw StructuralError("puiseux needs one component in two variables");
  const Polynomial f = c.transpose ? transpose_curve(g.germ[0]) : g.germ[0];
  PuiseuxOptions opt;
  opt.max_terms = c.max_terms;
  const auto branches = puiseux_expansions(f, opt);
  bool complete = true;
  for (const auto& b : branches) complete = complete && b.complete;
  const std::string xv = g.vars[c.transpose ? 1 : 0], yv = g.vars[c.transpose ? 0 : 1];
  if (c.json) {
    Json arr = Json::array();
    for (const auto& b : branches) arr.push_back(to_json(b));
    std::cout << Json{{"branches", arr}, {"complete", complete}}.dump() << "\n";
  } else {
    for (const auto& b : branches) {
      std::cout << xv << " =";
      if (b.terms.empty()) std::cout << " 0";
      bool first = true;
      for (const auto& t : b.terms) {
        std::ostringstream co;
        co.precision(6);
        co << "(" << t.coefficient.real() << (t.coefficient.imag() < 0 ? "" : "+") << t.coefficient.imag() << "i)";
        std::cout << (first ? " " : " + ") << co.str() << "*" << yv << "^(" << t.exponent.get_str() << ")";
        first = false;
      }
      std::cout << (b.complete ? "" : " + ...  [incomplete]") << "\n  pairs {";
      for (std::size_t i = 0; i < b.pairs.size(); ++i) {
        std::cout << (i ? "; " : "") << "(" << b.pairs[i].first << "," << b.pairs[i].second << ")";
      }
      std::cout << "}\n";
    }
  }
  if (!complete) {
    std::cerr << "error: some branches did not separate within " << c.max_terms << " terms\n";
    return nonconvergence;
  }
  return ok;
}

CorpusSpec corpus_spec(const Config& c) {
  CorpusSpec spec;
  spec.seed = c.seed;
  spec.count = c.count;
  return spec;
}

int cmd_invariance(const Config& c) {
  const CorpusSpec spec = corpus_spec(c);
  const auto opts = symbol_options(c);
  const auto germs = corpus(spec);
  const auto vars = [](std::size_t n) { return default_var_names(n); };
  Json cases = Json::array();
  std::size_t bad = 0, incomplete = 0, total = 0;
  if (c.check == "moves") {
    const auto rep = invariance_report(germs, spec, c.moves, opts);
    for (const auto& k : rep.cases) {
      cases.push_back(Json{{"germ", k.germ_index},
                           {"move", k.move_index},
                           {"moved", components_json(k.germ, vars(k.germ.nvars()))},
                           {"before", to_json(k.before)},
                           {"after", to_json(k.after)},
                           {"compared_steps", k.compared_steps},
                           {"violation", k.violation}});
    }
    bad = rep.violations;
    incomplete = rep.incomplete;
    total = rep.cases.size();
  } else if (c.check == "generators") {
    const auto rep = independence_report(germs, spec, opts, c.redundant);
    for (const auto& k : rep.cases) {
      cases.push_back(Json{{"germ", k.germ_index},
                           {"generators", components_json(k.augmented, vars(k.augmented.nvars()))},
                           {"before", to_json(k.before)},
                           {"after", to_json(k.after)},
                           {"compared_steps", k.compared_steps},
                           {"violation", k.violation}});
    }
    bad = rep.violations;
    incomplete = rep.incomplete;
    total = rep.cases.size();
  } else {
    throw StructuralError("--check must be 'moves' or 'generators'");
  }
  Json summary{{"cases", total}, {"violations", bad}, {"incomplete", incomplete}, {"seed", c.seed}};
  if (c.json) {
    std::cout << Json{{"cases", cases}, {"summary", summary}}.dump() << "\n";
  } else {
    for (const auto& k : cases) {
      if (k["violation"].get<bool>()) std::cout << "violation: " << k.dump() << "\n";
    }
    std::cout << "cases " << total << ", violations " << bad << ", compared on fewer than " << c.max_steps
              << " steps " << incomplete << "\n";
  }
  return bad == 0 ? ok : violations;
}

int cmd_tangent(const Config& c) {
  const std::vector<Real> ms = power_scales(c.m_exp);
  if (!c.input.empty()) {
    // convergence of the rescalings of a Lipschitz map
    std::string text;
    if (c.input == "-") {
      text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
      std::ifstream in(c.input);
      if (!in) throw StructuralError("cannot open " + c.input);
      text.assign(std::istreambuf_iterator<char>(in), {});
    }
    const auto file = parse_germ_file(text);
    const auto e = file.lipschitz_map();
    const auto rep = convergence_probe(e, SampleGrid::lattice(e.nvars(), c.grid_step), ms);
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      rows.push_back(Json{{"m", static_cast<double>(r.m)}, {"deviation", static_cast<double>(r.deviation)}});
    }
    if (c.json) {
      std::cout << Json{{"rows", rows}, {"converged", rep.converged}}.dump() << "\n";
    } else {
      for (const auto& r : rep.rows) {
        std::cout << "m " << static_cast<double>(r.m) << "  deviation " << static_cast<double>(r.deviation) << "\n";
      }
      std::cout << (rep.converged ? "converged" : "not converged") << "\n";
    }
    return rep.converged ? ok : nonconvergence;
  }
  const std::string name = c.preset.empty() ? "unipotent" : c.preset;
  Quadruple q = name == "unipotent" ? unipotent_quadruple() : name == "paper-f" ? paper_f_quadruple() : [&] {
    const auto g = preset_germ(name).germ;
    return Quadruple{name, g, g, MapGerm::identity(g.nvars()), MapGerm::identity(g.size())};
  }();
  const auto rows = theorem31_probe(q.f, q.g, q.phi, q.psi, SampleGrid::lattice(q.f.nvars(), c.grid_step), ms);
  const auto lemma = lemma21_probe(q.f, q.g, LipschitzMap::from_germ(unipotent_inverse(q.phi)),
                                   SampleGrid::lattice(q.f.nvars(), c.lemma_step, true));
  if (c.json) {
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    std::cout << Json{{"preset", q.name}, {"rows", arr}, {"lemma", to_json(lemma)}}.dump() << "\n";
  } else {
    std::cout << "preset " << q.name << "\n";
    std::printf("%12s %14s %14s %14s\n", "m", "D1", "D2", "R");
    for (const auto& r : rows) {
      std::printf("%12.0Lf %14.6Le %14.6Le %14.6Le\n", r.m, r.d1, r.d2, r.r);
    }
    std::printf("ratio |f|/|g o phi^-1| in [%.6Lf, %.6Lf], c = %.6Lf\n", lemma.min, lemma.max, lemma.c);
  }
  return ok;
}

int cmd_corpus(const Config& c) {
  const CorpusSpec spec = corpus_spec(c);
  const auto opts = symbol_options(c);
  Json arr = Json::array();
  for (std::size_t i = 0; i < spec.count; ++i) {
    const MapGerm f = random_germ(spec, i);
    const auto vars = default_var_names(f.nvars());
    const auto t = compute_triple(f, opts);
    if (c.json) {
      Json j = to_json(t);
      j["index"] = i;
      j["vars"] = vars;
      j["components"] = components_json(f, vars);
      arr.push_back(j);
    } else {
      std::cout << i << ": " << components_text(f, vars) << "  order " << (t.order ? std::to_string(*t.order) : "-")
                << "  rank " << t.rank << "  B = " << symbol_text(t.symbol) << (t.error ? "  (" + *t.error + ")" : "")
                << "\n";
    }
  }
  if (c.json) std::cout << Json{{"seed", c.seed}, {"germs", arr}}.dump() << "\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"germkit: invariants of polynomial map germs"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", c.input, "germ file, or - for stdin");
    sub->add_option("--preset", c.preset, "built-in germ: paper-f0, paper-f1, paper-f, paper-g, cusp-pair (tangent: unipotent)");
    sub->add_flag("--json", c.json, "emit JSON");
    sub->add_option("--seed", c.seed, "corpus seed");
    sub->add_option("--max-steps", c.max_steps, "symbol steps")->check(CLI::PositiveNumber);
    sub->add_option("--gen-cap", c.gen_cap, "generator cap")->check(CLI::PositiveNumber);
    sub->add_option("--work-cap", c.work_cap, "coefficient operations per jet computation (0: unlimited)");
    sub->add_option("--grid-step", c.grid_step, "sample lattice step");
    sub->add_option("--m-exp", c.m_exp, "largest scale exponent: m = 2^0 .. 2^k");
    sub->add_option("--max-terms", c.max_terms, "Puiseux terms per branch")->check(CLI::PositiveNumber);
    sub->add_option("--expand", c.expand, "print the first N symbol entries");
  };

  auto* inv = app.add_subcommand("invariants", "order, rank and first homogeneous part");
  auto* sym = app.add_subcommand("symbol", "Boardman symbol");
  auto* hp = app.add_subcommand("hpart", "first homogeneous part as a germ file");
  auto* pu = app.add_subcommand("puiseux", "Puiseux branches and pairs of a plane curve");
  auto* iv = app.add_subcommand("invariance", "invariance campaign over the random corpus");
  auto* tg = app.add_subcommand("tangent", "rescaling probes");
  auto* co = app.add_subcommand("corpus", "list the random corpus with invariants");
  for (auto* s : {inv, sym, hp, pu, iv, tg, co}) common(s);
  sym->add_flag("--jets", c.jets, "truncated-jet computation instead of the generator iteration");
  pu->add_flag("--transpose", c.transpose, "solve for the second variable instead");
  iv->add_option("--count", c.count, "corpus size");
  iv->add_option("--moves", c.moves, "contact moves per germ");
  iv->add_option("--check", c.check, "moves or generators");
  iv->add_option("--redundant", c.redundant, "redundant generators appended per germ (--check generators)");
  co->add_option("--count", c.count, "corpus size");
  tg->add_option("--lemma-step", c.lemma_step, "lattice step of the norm-ratio probe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (inv->parsed()) return cmd_invariants(c);
    if (sym->parsed()) return cmd_symbol(c);
    if (hp->parsed()) return cmd_hpart(c);
    if (pu->parsed()) return cmd_puiseux(c);
    if (iv->parsed()) return cmd_invariance(c);
    if (tg->parsed()) return cmd_tangent(c);
    if (co->parsed()) return cmd_corpus(c);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return parse;
  } catch (const GermConditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return germ;
  } catch (const UndefinedInvariantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return undefined;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return resource;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nonconvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}
