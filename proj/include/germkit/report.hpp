#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "germkit/boardman.hpp"
#include "germkit/equivlab.hpp"
#include "germkit/parse.hpp"
#include "germkit/puiseux.hpp"
#include "germkit/tangent.hpp"

namespace germkit {

using Json = nlohmann::json;

/// {"runs": [[2,3],[1,1],[0,null]], "status": "stabilized_zero"}
inline Json to_json(const BoardmanSymbol& s) {
  Json runs = Json::array();
  for (const auto& r : s.runs()) {
    runs.push_back(Json::array({r.value, r.count ? Json(*r.count) : Json(nullptr)}));
  }
  return Json{{"runs", runs}, {"status", to_string(s.status())}};
}

/// Paper-style notation, e.g. (2, 2, 2, 1, 0, ...). Truncated symbols end without the ellipsis.
inline std::string symbol_text(const BoardmanSymbol& s) {
  std::string out = "(";
  bool first = true;
  auto put = [&](std::size_t v) {
    if (!first) out += ", ";
    out += std::to_string(v);
    first = false;
  };
  for (const auto& r : s.runs()) {
    if (!r.count) {
      put(r.value);
      out += ", ...";
      break;
    }
    for (std::size_t k = 0; k < *r.count; ++k) put(r.value);
  }
  return out + ")";
}

inline Json components_json(const MapGerm& f, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (const auto& c : f.components()) out.push_back(print_polynomial(c, vars));
  return out;
}

inline Json to_json(const InvariantTriple& t) {
  Json j{{"order", t.order ? Json(*t.order) : Json(nullptr)}, {"rank", t.rank}, {"symbol", to_json(t.symbol)}};
  if (t.error) j["error"] = *t.error;
  return j;
}

inline std::string rational_text(const Rational& q) { return q.get_str(); }

inline Json to_json(const PuiseuxBranch& b) {
  Json exps = Json::array(), pairs = Json::array(), coeffs = Json::array();
  for (const auto& e : b.char_exponents) exps.push_back(rational_text(e));
  for (const auto& [m, n] : b.pairs) pairs.push_back(Json::array({m, n}));
  for (const auto& t : b.terms) {
    coeffs.push_back(Json{{"exponent", rational_text(t.exponent)},
                          {"coefficient", Json::array({t.coefficient.real(), t.coefficient.imag()})}});
  }
  return Json{{"exponents", exps}, {"pairs", pairs}, {"complete", b.complete}, {"terms", coeffs}};
}

inline Json to_json(const Theorem31Row& r) {
  return Json{{"m", static_cast<double>(r.m)},
              {"D1", static_cast<double>(r.d1)},
              {"D2", static_cast<double>(r.d2)},
              {"R", static_cast<double>(r.r)}};
}

inline Json to_json(const RatioInterval& r) {
  return Json{{"min", static_cast<double>(r.min)},
              {"max", static_cast<double>(r.max)},
              {"c", static_cast<double>(r.c)},
              {"samples", r.samples}};
}

}  // namespace germkit
