#pragma once

#include <cstddef>
#include <vector>

#include "germkit/map_germ.hpp"

namespace germkit {

/// Lowest total degree over all components.
inline std::size_t order(const MapGerm& f) {
  long best = -1;
  for (const auto& c : f.components()) {
    const long d = c.lowest_degree();
    if (d >= 0 && (best < 0 || d < best)) best = d;
  }
  if (best < 0) throw UndefinedInvariantError("order undefined (infinite) for the zero map");
  return static_cast<std::size_t>(best);
}

/// Linear coefficients of each polynomial: row i holds d(polys[i])/dx_j at 0.
inline std::vector<std::vector<Rational>> linear_part(std::span<const Polynomial> polys, std::size_t nvars) {
  std::vector<std::vector<Rational>> rows(polys.size(), std::vector<Rational>(nvars));
  for (std::size_t i = 0; i < polys.size(); ++i) {
    for (const auto& t : polys[i].terms()) {
      const auto d = total_degree(t.exponents);
      if (d > 1) break;  // terms are sorted by ascending degree
      if (d == 0) continue;
      for (std::size_t j = 0; j < nvars; ++j) {
        if (t.exponents[j] == 1) rows[i][j] = t.coefficient;
      }
    }
  }
  return rows;
}

/// Rank of the Jacobian at the origin, exact over Q.
inline std::size_t rank(const MapGerm& f) { return rational_rank(linear_part(f.components(), f.nvars())); }

/// Componentwise degree-ord(f) part. Components may be zero.
inline MapGerm first_homogeneous_part(const MapGerm& f) {
  const auto k = order(f);
  std::vector<Polynomial> comps;
  comps.reserve(f.size());
  for (const auto& c : f.components()) comps.push_back(homogeneous_component(c, k));
  return MapGerm(f.nvars(), std::move(comps));
}

/// x -> (x, f(x)).
inline MapGerm graph_map(const MapGerm& f) {
  std::vector<Polynomial> comps;
  comps.reserve(f.nvars() + f.size());
  for (std::size_t i = 0; i < f.nvars(); ++i) comps.push_back(Polynomial::variable(f.nvars(), i));
  for (const auto& c : f.components()) comps.push_back(c);
  return MapGerm(f.nvars(), std::move(comps));
}

}  // namespace germkit
