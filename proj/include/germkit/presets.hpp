#pragma once

#include <string>
#include <vector>

#include "germkit/errors.hpp"
#include "germkit/map_germ.hpp"
#include "germkit/parse.hpp"

namespace germkit {

struct NamedGerm {
  std::vector<std::string> vars;
  MapGerm germ;
};

/// The four plane-curve germs f0, f1, f, g, and the two-component map (x^2+y^3, x^2 y).
inline const std::vector<std::pair<std::string, std::string>>& preset_sources() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"paper-f0", "x^4 + y^9"},
      {"paper-f1", "x^4 + x^2*y^6 + y^9"},
      {"paper-f", "x^4 + y^5"},
      {"paper-g", "x^4 - 2*x^2*y^3 - 4*x*y^5 + y^6 + y^7"},
      {"cusp-pair", "x^2 + y^3; x^2*y"},
  };
  return table;
}

inline NamedGerm preset_germ(const std::string& name) {
  for (const auto& [key, src] : preset_sources()) {
    if (key != name) continue;
    const std::vector<std::string> vars = {"x", "y"};
    std::vector<Polynomial> comps;
    std::size_t start = 0;
    while (start <= src.size()) {
      const auto semi = src.find(';', start);
      comps.push_back(parse_polynomial(src.substr(start, semi - start), vars));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    return {vars, MapGerm(2, std::move(comps))};
  }
  throw StructuralError("unknown preset '" + name + "'");
}

}  // namespace germkit
