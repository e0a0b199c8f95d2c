#include <gtest/gtest.h>

#include <cmath>

#include "germkit/parse.hpp"
#include "germkit/tangent.hpp"

using namespace germkit;

namespace {

MapGerm germ(std::size_t n, std::initializer_list<const char*> comps) {
  const auto vars = default_var_names(n);
  std::vector<Polynomial> ps;
  for (auto c : comps) ps.push_back(parse_polynomial(c, vars));
  return MapGerm(n, std::move(ps));
}

LipschitzMap lip(const char* text) { return parse_germ_file(text).lipschitz_map(); }

}  // namespace

TEST(Grid, LatticeHitsTheCornersExactly) {
  const auto g = SampleGrid::lattice(2, 0.1);
  EXPECT_EQ(g.size(), 21u * 21u);
  EXPECT_EQ(g.points().front(), (std::vector<Real>{-1, -1}));
  EXPECT_EQ(g.points().back(), (std::vector<Real>{1, 1}));
  EXPECT_EQ(SampleGrid::lattice(2, 0.5, true).size(), 24u);
  EXPECT_THROW(SampleGrid::lattice(2, 0.3), StructuralError);
  EXPECT_THROW(SampleGrid::lattice(0, 0.1), StructuralError);
}

TEST(Grid, UniformIsSeededAndInTheCube) {
  const auto a = SampleGrid::uniform(3, 50, 9), b = SampleGrid::uniform(3, 50, 9);
  EXPECT_EQ(a.points(), b.points());
  for (const auto& p : a.points()) {
    for (auto v : p) {
      EXPECT_GE(v, -1);
      EXPECT_LT(v, 1);
    }
  }
}

TEST(Rescale, HomogeneousDegreeOneIsFixed) {
  const auto e = lip("format 1\nkind lipschitz-map\nvars x y\ncomponent abs(x) - 2*y\n");
  const std::vector<Real> x = {0.3L, -0.7L};
  for (Real m : {1.0L, 8.0L, 1024.0L}) EXPECT_NEAR(static_cast<double>(rescale(e, m, x)[0]), 1.7, 1e-15);
  const auto rep = convergence_probe(e, SampleGrid::lattice(2, 0.25), power_scales(6));
  EXPECT_TRUE(rep.converged);
  for (const auto& r : rep.rows) EXPECT_EQ(r.deviation, 0);
}

TEST(Rescale, QuadraticPerturbationConvergesAtRateOneOverM) {
  const auto e = lip("format 1\nkind lipschitz-map\nvars x y\ncomponent x + y^2\n");
  const auto rep = convergence_probe(e, SampleGrid::lattice(2, 0.1), power_scales(10));
  EXPECT_TRUE(rep.converged);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    EXPECT_NEAR(static_cast<double>(rep.rows[i - 1].deviation / rep.rows[i].deviation), 2.0, 1e-9);
  }
  EXPECT_NEAR(static_cast<double>(rep.limit_estimate.back()[0]), 1.0 + 1.0 / 1024, 1e-12);
}

TEST(Rescale, ConvergenceNeedsEnoughScales) {
  const auto e = lip("format 1\nkind lipschitz-map\nvars x\ncomponent x^2\n");
  EXPECT_TRUE(convergence_probe(e, SampleGrid::lattice(1, 0.5), power_scales(5)).converged);  // x^2 / m -> 0
  EXPECT_FALSE(convergence_probe(e, SampleGrid::lattice(1, 0.5), {1, 2}).converged);
  EXPECT_THROW(convergence_probe(e, SampleGrid::lattice(1, 0.5), {2, 1}), StructuralError);
  EXPECT_THROW(convergence_probe(e, SampleGrid::lattice(2, 0.5), {1, 2}), StructuralError);
}

TEST(Rescale, EmpiricalLipschitzConstant) {
  const auto e = lip("format 1\nkind lipschitz-map\nvars x y\ncomponent 3*x - 4*y\n");
  EXPECT_NEAR(static_cast<double>(empirical_lipschitz(e, SampleGrid::lattice(2, 0.5))), 5.0, 1e-12);
  const auto sq = LipschitzMap::from_germ(germ(1, {"x^2"}));
  EXPECT_NEAR(static_cast<double>(empirical_lipschitz(sq, SampleGrid::lattice(1, 0.5))), 1.5, 1e-12);
}

TEST(Unipotent, InverseByBackSubstitution) {
  const auto phi = germ(3, {"x", "y + x^2", "z - x*y + y^3"});
  const auto inv = unipotent_inverse(phi);
  EXPECT_EQ(compose(phi, inv), MapGerm::identity(3));
  EXPECT_EQ(compose(inv, phi), MapGerm::identity(3));
  const auto upper = germ(2, {"x + y^2", "y"});
  EXPECT_EQ(compose(upper, unipotent_inverse(upper)), MapGerm::identity(2));
  EXPECT_THROW(unipotent_inverse(germ(2, {"x + y^2", "y + x^2"})), StructuralError);
  EXPECT_THROW(unipotent_inverse(germ(2, {"2*x", "y"})), StructuralError);
}

TEST(Unipotent, ConstructedPairCommutes) {
  const auto q = unipotent_quadruple();
  EXPECT_EQ(compose(q.f, q.phi), compose(q.psi, q.g));
  EXPECT_EQ(q.g, germ(2, {"x^2 + y^3", "x^2*y"}));
}

TEST(Probe, PaperFHasDOneExactlyOneOverM) {
  const auto q = paper_f_quadruple();
  const auto rows = theorem31_probe(q.f, q.g, q.phi, q.psi, SampleGrid::lattice(2, 0.1), power_scales(20));
  ASSERT_EQ(rows.size(), 21u);
  for (const auto& r : rows) {
    EXPECT_LE(std::fabs(static_cast<double>(r.d1 * r.m - 1)), 1e-12);
    EXPECT_EQ(r.r, 0);
  }
}

TEST(Probe, UnipotentQuadrupleHalvesAndCommutes) {
  const auto q = unipotent_quadruple();
  const auto rows = theorem31_probe(q.f, q.g, q.phi, q.psi, SampleGrid::lattice(2, 0.1), power_scales(20));
  for (const auto& r : rows) EXPECT_LE(static_cast<double>(r.r), 1e-9);
  for (std::size_t i = rows.size() - 5; i < rows.size(); ++i) {
    EXPECT_NEAR(static_cast<double>(rows[i - 1].d1 / rows[i].d1), 2.0, 0.2);
    EXPECT_NEAR(static_cast<double>(rows[i - 1].d2 / rows[i].d2), 2.0, 0.2);
  }
}

TEST(Probe, DimensionMismatchIsStructural) {
  const auto q = unipotent_quadruple();
  EXPECT_THROW(theorem31_probe(q.f, q.g, q.phi, q.psi, SampleGrid::lattice(3, 0.5), {1}), StructuralError);
  EXPECT_THROW(theorem31_probe(q.f, q.g, q.phi, germ(2, {"2*x", "y"}), SampleGrid::lattice(2, 0.5), {1}),
               StructuralError);
}

TEST(Lemma, EqualGermsGiveRatioOne) {
  const auto f = germ(2, {"x^2 + y^3", "x^2*y"});
  const auto r = lemma21_probe(f, f, LipschitzMap::identity(2), SampleGrid::lattice(2, 0.05, true));
  EXPECT_EQ(r.min, 1);
  EXPECT_EQ(r.max, 1);
  EXPECT_EQ(r.c, 1);
}

TEST(Lemma, UnipotentPairIsBounded) {
  const auto q = unipotent_quadruple();
  const auto r = lemma21_probe(q.f, q.g, LipschitzMap::from_germ(unipotent_inverse(q.phi)),
                               SampleGrid::lattice(2, 0.05, true));
  EXPECT_GE(r.min, 1 / r.c);
  EXPECT_LE(r.max, r.c);
  EXPECT_LT(r.c, 10);
  EXPECT_GT(r.samples, 1000u);
}

TEST(Lemma, AllDegenerateIsUndefined) {
  const auto f = germ(1, {"x"});
  const auto z = germ(1, {"x - x"});
  EXPECT_THROW(lemma21_probe(f, z, LipschitzMap::identity(1), SampleGrid::lattice(1, 0.5, true)),
               UndefinedInvariantError);
}
