#pragma once

// JSON forms of metrics, points and detector reports. Scalars are strings:
// "p/q" in exact mode, 17 significant digits in float mode.

#include <string>
#include <string_view>
#include <vector>

#include "infgeom/detectors.hpp"
#include "infgeom/distribution.hpp"
#include "infgeom/errors.hpp"
#include "infgeom/expr_text.hpp"
#include "infgeom/laplacian.hpp"
#include "infgeom/metric.hpp"
#include "infgeom/weil_json.hpp"

namespace infgeom {

template <Scalar S>
Json scalar_json(const S& s) {
  return to_string(s);
}

/// Metric document: {"n": 2, "G": [["1", "0"], ["0", "x1^2"]]}.
inline MetricField metric_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw input_error("metric JSON must be an object");
    const auto n = j.at("n").get<std::size_t>();
    const auto& rows = j.at("G");
    if (!rows.is_array() || rows.size() != n) throw input_error("metric G must have n rows");
    std::vector<std::vector<Expr>> g;
    std::vector<std::vector<std::string>> text;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n) throw input_error("metric G rows must have n entries");
      g.emplace_back();
      text.emplace_back();
      for (const auto& cell : row) {
        std::string s = cell.is_string() ? cell.get<std::string>() : cell.dump();
        g.back().push_back(parse_expr(s, "x", n));
        text.back().push_back(to_string(g.back().back()));
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k)
        if (text[i][k] != text[k][i]) throw input_error("metric G must be symmetric (entries " + std::to_string(i + 1) + "," +
                                                        std::to_string(k + 1) + " differ)");
    return MetricField(n, g);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed metric JSON: ") + e.what());
  }
}

inline Json metric_to_json(const MetricField& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.n(); ++j) row.push_back(to_string(m.entry(i, j)));
    rows.push_back(std::move(row));
  }
  Json out;
  out["n"] = m.n();
  out["G"] = std::move(rows);
  return out;
}

/// "1,0" or "1/2, -3" or "0.7,0.3".
template <Scalar S>
std::vector<S> parse_point(std::string_view text) {
  std::vector<S> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw input_error("empty coordinate in point '" + std::string(text) + "'");
    out.push_back(from_rational<S>(parse_rational(item)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <Scalar S>
Json point_json(const std::vector<S>& x) {
  Json out = Json::array();
  for (const auto& c : x) out.push_back(scalar_json(c));
  return out;
}

template <Scalar S>
Json element_json(const WeilElement<S>& e) {
  Json out = Json::array();
  for (std::size_t i = 0; i < e.dimension(); ++i) out.push_back(scalar_json(e[i]));
  return out;
}

template <Scalar S>
Json to_json(const ConformalReport<S>& r) {
  Json out;
  out["conformal"] = r.conformal;
  out["k"] = r.k ? scalar_json(*r.k) : Json(nullptr);
  out["isometry"] = r.isometry;
  return out;
}

template <Scalar S>
Json to_json(const HarmonicReport<S>& r) {
  Json checks = Json::array();
  for (const auto& [s, ok] : r.affine_checks) {
    Json c;
    c["s"] = scalar_json(s);
    c["preserved"] = ok;
    checks.push_back(std::move(c));
  }
  Json out;
  out["harmonic"] = r.harmonic;
  out["laplacian"] = scalar_json(r.laplacian);
  out["affine_preserving"] = r.affine_preserving;
  out["affine_checks"] = std::move(checks);
  return out;
}

template <Scalar S>
Json to_json(const CrReport<S>& r) {
  auto opt = [](const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); };
  Json out;
  out["holomorphic_at"] = r.holomorphic_at;
  out["regular"] = r.regular;
  out["orientation_preserving"] = r.orientation_preserving;
  out["cr_equations"] = r.cr_equations;
  out["i_commutes"] = r.i_commutes;
  out["conformal"] = opt(r.conformal);
  out["preserves_L"] = opt(r.preserves_L);
  out["harmonic_components"] = r.harmonic_components;
  out["complex_differentiable"] = r.complex_differentiable;
  out["derivative"] = r.derivative ? Json::array({scalar_json(r.derivative->first), scalar_json(r.derivative->second)})
                                   : Json(nullptr);
  return out;
}

inline Json to_json(const Subcoalgebra& c) {
  Json basis = Json::array();
  for (const auto& b : c.basis) basis.push_back(b.to_string());
  Json counit = Json::array();
  for (const auto& e : c.counit) counit.push_back(to_string(e));
  Json comult = Json::array();
  for (const auto& m : c.comult) {
    Json terms = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0) terms.push_back(Json::array({to_string(m(i, j)), i, j}));
    comult.push_back(std::move(terms));
  }
  Json out;
  out["n"] = c.n;
  out["dimension"] = c.dimension();
  out["basis"] = std::move(basis);
  out["counit"] = std::move(counit);
  out["comultiplication"] = std::move(comult);
  return out;
}

}  // namespace infgeom
