// Command-line front end. Every command prints one JSON document.
// Exit codes: 0 success, 2 input error, 3 mathematical precondition failure.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infgeom.hpp"
#include "infgeom/json_io.hpp"

namespace {

using namespace infgeom;

constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;

struct Config {
  std::string mode = "exact";
  double epsilon = kDefaultEpsilon;
  std::string output;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

MetricField load_metric(const std::string& path, std::size_t n) {
  if (path.empty()) return MetricField::euclidean(n);
  MetricField m = metric_from_json(read_json_file(path));
  if (m.n() != n) throw input_error("metric in '" + path + "' has dimension " + std::to_string(m.n()) + ", point has " + std::to_string(n));
  return m;
}

void forbid_primitives_in_exact(const Config& cfg, const std::vector<Expr>& exprs) {
  if (cfg.mode != "exact") return;
  for (const auto& e : exprs)
    if (uses_primitives(e)) throw input_error("exp/log/sin/cos/sqrt need --mode float");
}

void forbid_primitives_in_exact(const Config& cfg, const MetricField& m) {
  if (cfg.mode == "exact" && m.uses_primitives()) throw input_error("metric uses analytic primitives; they need --mode float");
}

Json header(const Config& cfg, const std::string& command, bool exact_only = false) {
  Json out;
  out["command"] = command;
  const bool exact = exact_only || cfg.mode == "exact";
  out["mode"] = exact ? "exact" : "float";
  if (!exact) out["epsilon"] = cfg.epsilon;
  return out;
}

/// Runs body<Rational> or body<double> according to the mode.
template <class Body>
Json dispatch(const Config& cfg, Body&& body) {
  if (cfg.mode == "exact") return body.template operator()<Rational>();
  return body.template operator()<double>();
}

std::vector<Polynomial<Rational>> parse_relations(const std::vector<std::string>& rels, std::size_t n) {
  std::vector<Polynomial<Rational>> out;
  for (const auto& r : rels) {
    auto p = to_polynomial(parse_expr(r, "x", n), n);
    if (!p) throw input_error("relation '" + r + "' is not a polynomial in x1..x" + std::to_string(n));
    if (!p->coefficient(Monomial::unit(n)).is_zero()) throw input_error("relation '" + r + "' has a nonzero constant term");
    out.push_back(std::move(*p));
  }
  return out;
}

struct AmbientSpec {
  std::string kind = "dl";
  int n = 0;
  int k = 2;
  std::string file;

  AlgebraPtr build(int default_n) const {
    if (kind == "json") {
      if (file.empty()) throw input_error("--ambient json needs --ambient-file");
      return algebra_from_json(read_json_file(file));
    }
    const int gens = n > 0 ? n : default_n;
    if (kind == "dl") return make_dl_algebra(gens);
    if (kind == "dk") return make_dk_algebra(gens, k);
    throw input_error("unknown ambient algebra kind '" + kind + "'");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infgeom: Weil algebras, jets and the infinitesimal Laplacian"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--mode", cfg.mode, "Scalar domain")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--epsilon", cfg.epsilon, "Absolute tolerance in float mode")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "Write the JSON report here instead of stdout");

  std::function<Json()> run;

  // algebra
  auto* algebra = app.add_subcommand("algebra", "Construct a Weil algebra");
  algebra->require_subcommand(1);
  int alg_n = 1, alg_k = 2, alg_bound = 2;
  std::vector<std::string> alg_rels;
  auto* dk = algebra->add_subcommand("dk", "Truncated polynomials k[Z]/(deg > k)");
  dk->add_option("--n", alg_n, "Generator count")->required();
  dk->add_option("--k", alg_k, "Neighbourhood order")->required();
  dk->callback([&] {
    run = [&] {
      Json out = header(cfg, "algebra dk", true);
      out["algebra"] = to_json(*make_dk_algebra(alg_n, alg_k));
      return out;
    };
  });
  auto* dl = algebra->add_subcommand("dl", "The L-neighbourhood algebra");
  dl->add_option("--n", alg_n, "Generator count")->required();
  dl->callback([&] {
    run = [&] {
      Json out = header(cfg, "algebra dl", true);
      out["algebra"] = to_json(*make_dl_algebra(alg_n));
      return out;
    };
  });
  auto* quotient = algebra->add_subcommand("quotient", "Quotient by polynomial relations in x1..xn");
  quotient->add_option("--n", alg_n, "Generator count")->required();
  quotient->add_option("--bound", alg_bound, "Degree bound")->required();
  quotient->add_option("--rel", alg_rels, "Relation (repeatable)");
  quotient->callback([&] {
    run = [&] {
      if (alg_n < 1) throw input_error("--n must be at least 1");
      Json out = header(cfg, "algebra quotient", true);
      out["algebra"] = to_json(*quotient_by_relations(alg_n, alg_bound, parse_relations(alg_rels, static_cast<std::size_t>(alg_n))));
      return out;
    };
  });

  // laplacian
  std::string metric_path, target_metric_path, fn_text, map_text, point_text, offsets_text;
  auto* lap = app.add_subcommand("laplacian", "Laplacian by the mirror-image average");
  lap->add_option("--metric", metric_path, "Metric JSON file (default: flat)");
  lap->add_option("--fn", fn_text, "Function of x1..xn")->required();
  lap->add_option("--point", point_text, "Base point, comma separated")->required();
  lap->callback([&] {
    run = [&] {
      return dispatch(cfg, [&]<class S>() {
        const auto x = parse_point<S>(point_text);
        const MetricField m = load_metric(metric_path, x.size());
        const Expr f = parse_expr(fn_text, "x", x.size());
        forbid_primitives_in_exact(cfg, m);
        forbid_primitives_in_exact(cfg, {f});
        const auto chart = GeodesicChart<S>::make(m, x, !is_exact_v<S>, cfg.epsilon);
        const auto r = laplacian_report<S>(chart, f);
        Json out = header(cfg, "laplacian");
        out["fn"] = to_string(f);
        out["point"] = point_json(x);
        out["value"] = scalar_json(r.value);
        out["trace_value"] = scalar_json(laplacian_trace<S>(m, f, x, cfg.epsilon));
        out["well_posed"] = r.well_posed;
        return out;
      });
    };
  });

  // check
  auto* check = app.add_subcommand("check", "Conformality, harmonicity, holomorphy and L-neighbour detectors");
  check->require_subcommand(1);
  AmbientSpec ambient;

  auto* conformal = check->add_subcommand("conformal", "Is the map conformal at the point?");
  conformal->add_option("--map", map_text, "Components, comma separated")->required();
  conformal->add_option("--point", point_text, "Base point")->required();
  conformal->add_option("--metric", metric_path, "Source metric file (default: flat)");
  conformal->add_option("--target-metric", target_metric_path, "Target metric file (default: flat)");
  conformal->callback([&] {
    run = [&] {
      return dispatch(cfg, [&]<class S>() {
        const auto x = parse_point<S>(point_text);
        const FunctionModel f(x.size(), parse_expr_list(map_text, "x", x.size()));
        forbid_primitives_in_exact(cfg, f.components());
        const MetricField src = load_metric(metric_path, x.size());
        const MetricField dst = load_metric(target_metric_path, f.n_out());
        forbid_primitives_in_exact(cfg, src);
        forbid_primitives_in_exact(cfg, dst);
        Json out = header(cfg, "check conformal");
        out["point"] = point_json(x);
        out["report"] = to_json(conformal_check<S>(f, src, dst, x, cfg.epsilon));
        return out;
      });
    };
  });

  auto* harmonic = check->add_subcommand("harmonic", "Is the function harmonic at the point?");
  harmonic->add_option("--fn", fn_text, "Function of x1..xn")->required();
  harmonic->add_option("--point", point_text, "Base point")->required();
  harmonic->add_option("--metric", metric_path, "Metric file (default: flat)");
  harmonic->callback([&] {
    run = [&] {
      return dispatch(cfg, [&]<class S>() {
        const auto x = parse_point<S>(point_text);
        const MetricField m = load_metric(metric_path, x.size());
        const Expr f = parse_expr(fn_text, "x", x.size());
        forbid_primitives_in_exact(cfg, m);
        forbid_primitives_in_exact(cfg, {f});
        Json out = header(cfg, "check harmonic");
        out["fn"] = to_string(f);
        out["point"] = point_json(x);
        out["report"] = to_json(harmonic_report<S>(m, f, x, cfg.epsilon));
        return out;
      });
    };
  });

  auto* cr = check->add_subcommand("cr", "Cauchy-Riemann and complex differentiability of a map R^2 -> R^2");
  cr->add_option("--map", map_text, "Components, comma separated")->required();
  cr->add_option("--point", point_text, "Base point")->required();
  cr->callback([&] {
    run = [&] {
      return dispatch(cfg, [&]<class S>() {
        const auto x = parse_point<S>(point_text);
        const FunctionModel f(x.size(), parse_expr_list(map_text, "x", x.size()));
        forbid_primitives_in_exact(cfg, f.components());
        Json out = header(cfg, "check cr");
        out["point"] = point_json(x);
        out["report"] = to_json(cr_check<S>(f, x, cfg.epsilon));
        return out;
      });
    };
  });

  auto* lneighbor = check->add_subcommand("l-neighbor", "Is x + offsets an L-neighbour of x?");
  lneighbor->add_option("--point", point_text, "Base point")->required();
  lneighbor->add_option("--offsets", offsets_text, "Offsets as polynomials in the ambient generators z1..zm")->required();
  lneighbor->add_option("--metric", metric_path, "Metric file (default: flat)");
  lneighbor->add_option("--ambient", ambient.kind, "Ambient algebra: dl, dk or json")->check(CLI::IsMember({"dl", "dk", "json"}));
  lneighbor->add_option("--ambient-n", ambient.n, "Ambient generator count (default: point dimension)");
  lneighbor->add_option("--ambient-k", ambient.k, "Order for --ambient dk");
  lneighbor->add_option("--ambient-file", ambient.file, "Algebra JSON for --ambient json");
  lneighbor->callback([&] {
    run = [&] {
      return dispatch(cfg, [&]<class S>() {
        const auto x = parse_point<S>(point_text);
        const MetricField m = load_metric(metric_path, x.size());
        forbid_primitives_in_exact(cfg, m);
        const AlgebraPtr a = ambient.build(static_cast<int>(x.size()));
        const auto exprs = parse_expr_list(offsets_text, "z", a->n());
        if (exprs.size() != x.size()) throw input_error("need one offset per coordinate");
        PointModel<S> z;
        for (std::size_t i = 0; i < x.size(); ++i) {
          auto p = to_polynomial(exprs[i], a->n());
          if (!p) throw input_error("offset '" + to_string(exprs[i], "z") + "' is not a polynomial");
          if (!p->coefficient(Monomial::unit(a->n())).is_zero()) throw input_error("offsets must have zero constant term");
          z.push_back(WeilElement<S>::from_polynomial(a, *p) + x[i]);
        }
        Json out = header(cfg, "check l-neighbor");
        out["point"] = point_json(x);
        out["ambient_dimension"] = a->dimension();
        out["second_order"] = is_neighbour_of_order<S>(GeodesicChart<S>::make(m, x, false, cfg.epsilon).to_chart(z), 2, cfg.epsilon);
        out["l_neighbor"] = is_L_neighbor<S>(m, x, z, cfg.epsilon);
        return out;
      });
    };
  });

  auto* preserves = check->add_subcommand("preserves-l", "Does the map send L-neighbours of x to L-neighbours of f(x)?");
  preserves->add_option("--map", map_text, "Components, comma separated")->required();
  preserves->add_option("--point", point_text, "Base point")->required();
  preserves->add_option("--metric", metric_path, "Source metric file (default: flat)");
  preserves->add_option("--target-metric", target_metric_path, "Target metric file (default: flat)");
  preserves->callback([&] {
    run = [&] {
      return dispatch(cfg, [&]<class S>() {
        const auto x = parse_point<S>(point_text);
        const FunctionModel f(x.size(), parse_expr_list(map_text, "x", x.size()));
        forbid_primitives_in_exact(cfg, f.components());
        const MetricField src = load_metric(metric_path, x.size());
        const MetricField dst = load_metric(target_metric_path, f.n_out());
        forbid_primitives_in_exact(cfg, src);
        forbid_primitives_in_exact(cfg, dst);
        Json out = header(cfg, "check preserves-l");
        out["point"] = point_json(x);
        out["preserves_L"] = preserves_L<S>(f, src, dst, x, cfg.epsilon);
        return out;
      });
    };
  });

  // coalgebra
  std::string dist_text;
  int dist_n = 1, dist_bound = -1;
  auto* coalg = app.add_subcommand("coalgebra", "Subcoalgebra generated by a distribution at 0 and its dual algebra");
  coalg->add_option("--dist", dist_text, "Polynomial in d1..dn, e.g. \"d1^2+d2^2\"")->required();
  coalg->add_option("--n", dist_n, "Dimension")->required();
  coalg->add_option("--bound", dist_bound, "Degree bound of the dual (default: max degree + 1)");
  coalg->callback([&] {
    run = [&] {
      if (dist_n < 1) throw input_error("--n must be at least 1");
      const auto d = DistributionAtZero::parse(dist_text, static_cast<std::size_t>(dist_n));
      const Subcoalgebra c = subcoalgebra_generated(d);
      const AlgebraPtr dual = dual_algebra(c, dist_bound);
      Json out = header(cfg, "coalgebra", true);
      out["dist"] = d.to_string();
      out["coalgebra"] = to_json(c);
      out["dual_algebra"] = to_json(*dual);
      out["dual_isomorphic_to_dl"] = match_tables(*dual, *make_dl_algebra(dist_n)).has_value();
      return out;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  auto fail = [](const char* kind, const std::exception& e, int code) {
    Json err;
    err["error"] = kind;
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return code;
  };
  try {
    const std::string text = run().dump(2) + "\n";
    if (cfg.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.output, std::ios::binary);
      if (!out) throw input_error("cannot write '" + cfg.output + "'");
      out << text;
    }
  } catch (const input_error& e) {
    return fail("input", e, kExitInput);
  } catch (const algebra_mismatch& e) {
    return fail("input", e, kExitInput);
  } catch (const precondition_error& e) {
    return fail("precondition", e, kExitPrecondition);
  } catch (const std::exception& e) {
    return fail("internal", e, 1);
  }
  return 0;
}
