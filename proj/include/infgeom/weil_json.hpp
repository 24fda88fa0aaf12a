#pragma once

// JSON form of a Weil algebra:
//   {"n": 2, "degree_bound": 2, "dimension": 4,
//    "basis": [[0,0],[1,0],[0,1],[0,2]],
//    "table": [[ [["1",0]], ... ], ...],      // table[i][j] = [[coeff, index], ...]
//    "generators": [ [["1",1]], [["1",2]] ]}  // class of each Z_i
// Coefficients are canonical rational strings ("p" or "p/q").

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "infgeom/errors.hpp"
#include "infgeom/weil_algebra.hpp"

namespace infgeom {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json sparse_to_json(const SparseVector& v) {
  Json out = Json::array();
  for (const auto& t : v) out.push_back(Json::array({to_string(t.coeff), t.index}));
  return out;
}

inline SparseVector sparse_from_json(const Json& j) {
  if (!j.is_array()) throw input_error("sparse vector must be an array");
  SparseVector v;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() || !entry[1].is_number_unsigned())
      throw input_error("sparse entry must be [\"p/q\", index]");
    v.push_back({parse_rational(entry[0].get<std::string>()), entry[1].get<std::size_t>()});
  }
  return v;
}

}  // namespace detail

inline Json to_json(const WeilAlgebra& a) {
  Json basis = Json::array();
  for (const auto& m : a.basis()) basis.push_back(m.exponents());
  Json table = Json::array();
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.dimension(); ++j) row.push_back(detail::sparse_to_json(a.product(i, j)));
    table.push_back(std::move(row));
  }
  Json generators = Json::array();
  for (const auto& g : a.generators()) generators.push_back(detail::sparse_to_json(g));
  Json out;
  out["n"] = a.n();
  out["degree_bound"] = a.degree_bound();
  out["dimension"] = a.dimension();
  out["basis"] = std::move(basis);
  out["table"] = std::move(table);
  out["generators"] = std::move(generators);
  return out;
}

inline AlgebraPtr algebra_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw input_error("algebra JSON must be an object");
    const auto n = j.at("n").get<std::size_t>();
    const auto bound = j.at("degree_bound").get<unsigned>();
    std::vector<Monomial> basis;
    for (const auto& e : j.at("basis")) basis.emplace_back(e.get<std::vector<unsigned>>());
    std::vector<SparseVector> table;
    const auto& rows = j.at("table");
    if (rows.size() != basis.size()) throw input_error("table row count != basis size");
    for (const auto& row : rows) {
      if (row.size() != basis.size()) throw input_error("table column count != basis size");
      for (const auto& cell : row) table.push_back(detail::sparse_from_json(cell));
    }
    std::vector<SparseVector> generators;
    if (j.contains("generators")) {
      for (const auto& g : j.at("generators")) generators.push_back(detail::sparse_from_json(g));
    } else {
      // Older documents without generator classes: every Z_i must be a basis monomial.
      for (std::size_t i = 0; i < n; ++i) {
        auto it = std::find(basis.begin(), basis.end(), Monomial::variable(n, i));
        if (it == basis.end()) throw input_error("generators missing and Z_" + std::to_string(i + 1) + " not in basis");
        generators.push_back({{Rational(1), static_cast<std::size_t>(it - basis.begin())}});
      }
    }
    if (j.contains("dimension") && j.at("dimension").get<std::size_t>() != basis.size())
      throw input_error("dimension field disagrees with basis size");
    return WeilAlgebra::from_parts(n, bound, std::move(basis), std::move(table), std::move(generators));
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed algebra JSON: ") + e.what());
  }
}

}  // namespace infgeom
