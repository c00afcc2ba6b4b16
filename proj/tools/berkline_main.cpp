// berkline: exact local-global analysis of diagonal quadratic forms over
// Q_p(T), with probes into the Berkovich line, reduction models, and the
// disc-automorphism toolkit.
//
// Exit codes: 0 = local everywhere (or subcommand success), 1 = obstruction
// found (or a failed verification), 2 = inconclusive, 3 = bad input,
// 4 = internal error, >= 100 = command-line usage error.

#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "berk/analyze.hpp"
#include "berk/discauto.hpp"
#include "berk/parse.hpp"
#include "berk/render.hpp"

namespace {

using namespace berk;

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

Rat parse_rat(const std::string& text) {
  std::string s = strip_spaces(text);
  if (s.empty()) throw std::invalid_argument("empty rational number");
  try {
    return Rat(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
}

// "inf", "rigid(c)", "eta(a, s)"; a bare rational is shorthand for rigid.
BerkPoint parse_point(const std::string& text) {
  std::string s = strip_spaces(text);
  if (s == "inf" || s == "infinity" || s == "oo") return BerkPoint::infinity();
  auto inner = [&](const char* head) -> std::optional<std::string> {
    std::string h = std::string(head) + "(";
    if (s.rfind(h, 0) == 0 && s.back() == ')') {
      return s.substr(h.size(), s.size() - h.size() - 1);
    }
    return std::nullopt;
  };
  if (auto body = inner("rigid")) return BerkPoint::rigid(parse_rat(*body));
  if (auto body = inner("eta")) {
    std::size_t comma = body->find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("eta point needs a center and a log-radius");
    }
    return BerkPoint::eta(parse_rat(body->substr(0, comma)),
                          parse_rat(body->substr(comma + 1)));
  }
  return BerkPoint::rigid(parse_rat(s));
}

// "a:s, b:s2, ..." with integer log-radii.
std::vector<std::pair<Rat, long>> parse_vertices(const std::string& text) {
  std::vector<std::pair<Rat, long>> out;
  std::stringstream ss(strip_spaces(text));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("vertex '" + item + "' is not center:s");
    }
    Rat s = parse_rat(item.substr(colon + 1));
    if (den(s) != 1) {
      throw std::invalid_argument("vertex log-radius must be an integer");
    }
    out.emplace_back(parse_rat(item.substr(0, colon)), to_long(num(s)));
  }
  if (out.empty()) throw std::invalid_argument("no vertices given");
  return out;
}

std::vector<std::pair<Rat, Rat>> parse_pairs(const std::string& text) {
  std::vector<std::pair<Rat, Rat>> out;
  std::stringstream ss(strip_spaces(text));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("exclusion '" + item + "' is not center:r");
    }
    out.emplace_back(parse_rat(item.substr(0, colon)),
                     parse_rat(item.substr(colon + 1)));
  }
  return out;
}

Rat constant_of(const RatFunc& f) {
  if (f.num().degree() > 0 || f.den().degree() > 0) {
    throw std::invalid_argument("coefficient '" + f.str() +
                                "' is not constant");
  }
  return *f.eval(Rat(0));
}

std::vector<RatFunc> parse_list(const std::string& text) {
  std::vector<RatFunc> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_ratfunc(item));
  if (out.empty()) throw std::invalid_argument("no coefficients given");
  return out;
}

int verdict_exit(const IsotropyVerdict& v) {
  if (v.isotropic()) return 0;
  if (v.anisotropic()) return 1;
  return 2;
}

OutputFormat format_of(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "dot") return OutputFormat::Dot;
  return OutputFormat::Text;
}

EndNeighborhood make_neighborhood(std::int64_t p, const std::string& center,
                                  const std::string& log_radius,
                                  const std::string& exclude) {
  std::vector<EndNeighborhood::Excluded> excl;
  for (const auto& [a, r] : parse_pairs(exclude)) excl.push_back({a, r});
  return EndNeighborhood(p, parse_rat(center), parse_rat(log_radius), excl);
}

// Deterministic in-neighborhood samples: rigid points near the center and
// near each hole, plus boundary-parallel eta points.
std::vector<LPoint> sample_points(const EndNeighborhood& U,
                                  const TranslationPlan& plan, int count,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::int64_t p = U.p();
  long h = plan.h;
  Rat s = U.s();
  std::uniform_int_distribution<long> unit(1, p - 1);
  std::uniform_int_distribution<long> depth(1, 4);
  std::vector<LPoint> out;
  auto lift = [&](const Rat& c) { return EisElem::from_rat(p, h, c); };
  auto push = [&](const LPoint& x) {
    if (static_cast<int>(out.size()) < count && in_neighborhood(U, x)) {
      out.push_back(x);
    }
  };
  if (den(s) == 1) {
    long sl = to_long(num(s));
    for (int attempt = 0; attempt < 64 * count; ++attempt) {
      Rat off = Rat(unit(rng)) * pow_p(p, sl + depth(rng));
      if (attempt % 3 == 0) {
        push(LPoint::eta(lift(U.center()), sl + depth(rng)));
      } else if (attempt % 3 == 1) {
        push(LPoint::rigid(lift(U.center() + off)));
      } else if (!U.excluded().empty()) {
        const auto& e = U.excluded()[attempt % U.excluded().size()];
        if (den(e.r) == 1) {
          push(LPoint::rigid(
              lift(e.alpha + Rat(unit(rng)) * pow_p(p, to_long(num(e.r))))));
        }
      }
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  if (out.empty()) {
    throw std::invalid_argument(
        "could not sample the neighborhood (non-integer log-radius?)");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "berkline: certified local-global isotropy over Q_p(T), Berkovich "
      "line probes, reduction models, and disc automorphisms"};
  app.require_subcommand(1);

  std::function<int()> action;

  // ---- analyze -------------------------------------------------------
  std::string an_form, an_variant = "c1", an_format = "text";
  std::int64_t an_prime = 0;
  long an_precision = 32, an_maxdeg = 1;
  CLI::App* an = app.add_subcommand(
      "analyze", "run the full local-global pipeline on a diagonal form");
  an->add_option("form", an_form,
                 "comma-separated coefficients, e.g. \"1, -(1+3*T), T\"")
      ->required();
  an->add_option("-p,--prime", an_prime, "odd prime p")->required();
  an->add_option("--precision", an_precision,
                 "series truncation order for solution discs");
  an->add_option("--variant", an_variant, "vertex-set construction")
      ->check(CLI::IsMember({"c1", "c2", "c3"}));
  an->add_option("--format", an_format, "output format")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  an->add_option("--max-degree", an_maxdeg,
                 "degree bound for the best-effort global witness search");
  an->callback([&] {
    action = [&]() -> int {
      AnalyzeOptions opts;
      opts.precision = an_precision;
      opts.max_degree = an_maxdeg;
      opts.variant = an_variant == "c2"   ? ModelVariant::C2
                     : an_variant == "c3" ? ModelVariant::C3
                                          : ModelVariant::C1;
      HasseReport r = analyze_parsed(parse_form(an_form, an_prime), opts);
      std::cout << render(r, format_of(an_format));
      return r.exit_code();
    };
  });

  // ---- example183 ----------------------------------------------------
  std::string ex_format = "text";
  CLI::App* ex = app.add_subcommand(
      "example183",
      "golden scenario: <1, -(1+3T), T, -(T+3)> over Q_3(T), whose two "
      "certified solution discs cover the line");
  ex->add_option("--format", ex_format, "output format")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  ex->callback([&] {
    action = [&]() -> int {
      HasseReport r =
          analyze_parsed(parse_form("1, -(1+3*T), T, -(T+3)", 3), {});
      std::cout << render(r, format_of(ex_format));
      return r.exit_code();
    };
  });

  // ---- isotropy ------------------------------------------------------
  std::string iso_coeffs, iso_layer, iso_modulus = "0,1";
  std::int64_t iso_prime = 0;
  long iso_precision = 32, iso_maxdeg = 6;
  CLI::App* iso = app.add_subcommand(
      "isotropy", "decide isotropy of a diagonal form over a single layer");
  iso->add_option("coeffs", iso_coeffs, "comma-separated coefficients")
      ->required();
  iso->add_option("--layer", iso_layer,
                  "qp (rational constants), fqt (reduced mod p, rational "
                  "functions of t), fq (integer constants in an extension "
                  "of F_p)")
      ->required()
      ->check(CLI::IsMember({"qp", "fqt", "fq"}));
  iso->add_option("-p,--prime", iso_prime, "odd prime p")->required();
  iso->add_option("--precision", iso_precision, "qp witness precision");
  iso->add_option("--max-degree", iso_maxdeg, "fqt witness degree bound");
  iso->add_option("--modulus", iso_modulus,
                  "fq only: monic modulus over F_p, low-degree-first "
                  "coefficients, e.g. \"1,0,1\" for x^2+1");
  iso->callback([&] {
    action = [&]() -> int {
      IsotropyVerdict v;
      if (iso_layer == "qp") {
        std::vector<Rat> c;
        for (const RatFunc& f : parse_list(iso_coeffs)) {
          c.push_back(constant_of(f));
        }
        v = isotropic_qp(iso_prime, c, iso_precision);
      } else if (iso_layer == "fqt") {
        std::vector<FpRat> c;
        for (const RatFunc& f : parse_list(iso_coeffs)) {
          c.emplace_back(FpPoly::from_qpoly(f.num(), iso_prime),
                         FpPoly::from_qpoly(f.den(), iso_prime));
        }
        v = isotropic_fqt(iso_prime, c, iso_maxdeg);
      } else {
        std::vector<long> mod;
        {
          std::stringstream ss(strip_spaces(iso_modulus));
          std::string item;
          while (std::getline(ss, item, ',')) mod.push_back(std::stol(item));
        }
        FqField F(FpPoly(iso_prime, mod));
        std::vector<FpPoly> c;
        for (const RatFunc& f : parse_list(iso_coeffs)) {
          Rat a = constant_of(f);
          if (den(a) != 1) {
            throw std::invalid_argument("fq coefficients must be integers");
          }
          c.push_back(FpPoly::constant(iso_prime, to_long(num(a))));
        }
        v = isotropic_finite(F, c);
      }
      std::cout << v.str() << "\n";
      return verdict_exit(v);
    };
  });

  // ---- berk ----------------------------------------------------------
  CLI::App* bk = app.add_subcommand("berk", "Berkovich line probes");
  bk->require_subcommand(1);
  std::string bk_point, bk_other, bk_fn, bk_to;
  std::int64_t bk_prime = 0;

  CLI::App* bk_eval = bk->add_subcommand(
      "eval", "seminorm exponent of a rational function at a point");
  bk_eval->add_option("-p,--prime", bk_prime, "odd prime p")->required();
  bk_eval->add_option("--point", bk_point, "rigid(c), eta(a,s) or inf")
      ->required();
  bk_eval->add_option("--f", bk_fn, "rational function of T")->required();
  bk_eval->callback([&] {
    action = [&]() -> int {
      BerkPoint x = parse_point(bk_point);
      RatFunc f = parse_ratfunc(bk_fn);
      ValExt v = seminorm_val(f, x, bk_prime);
      std::cout << "v_x(f) = " << v.str() << "  (|f|_x = " << bk_prime
                << "^(-v))\n";
      return 0;
    };
  });

  CLI::App* bk_join =
      bk->add_subcommand("join", "smallest disc point above two points");
  bk_join->add_option("-p,--prime", bk_prime, "odd prime p")->required();
  bk_join->add_option("--x", bk_point, "first point")->required();
  bk_join->add_option("--y", bk_other, "second point")->required();
  bk_join->callback([&] {
    action = [&]() -> int {
      BerkPoint j =
          join(parse_point(bk_point), parse_point(bk_other), bk_prime);
      std::cout << j.str() << "  (type " << classify(j) << ")\n";
      return 0;
    };
  });

  CLI::App* bk_retract = bk->add_subcommand(
      "retract", "retract a point to the closed disc of log-radius b");
  bk_retract->add_option("-p,--prime", bk_prime, "odd prime p")->required();
  bk_retract->add_option("--point", bk_point, "point to retract")->required();
  bk_retract->add_option("--to", bk_to, "target log-radius b")->required();
  bk_retract->callback([&] {
    action = [&]() -> int {
      BerkPoint r =
          retract(parse_rat(bk_to), parse_point(bk_point), bk_prime);
      std::cout << r.str() << "\n";
      return 0;
    };
  });

  // ---- model ---------------------------------------------------------
  CLI::App* md = app.add_subcommand("model", "vertex sets and their fibers");
  md->require_subcommand(1);
  std::string md_vertices, md_point, md_fn, md_format = "text";
  std::int64_t md_prime = 0;
  long md_edge = -1, md_component = -1, md_class = 0;
  bool md_at_inf = false, md_generic = false;
  bool md_have_class = false;

  auto add_vertex_opts = [&](CLI::App* cmd) {
    cmd->add_option("-p,--prime", md_prime, "odd prime p")->required();
    cmd->add_option("--vertices", md_vertices,
                    "center:s list, e.g. \"0:0, 1:2\" (join closure is "
                    "applied)")
        ->required();
  };

  CLI::App* md_show =
      md->add_subcommand("show", "print the vertex set and its dual graph");
  add_vertex_opts(md_show);
  md_show->add_option("--format", md_format, "text or dot")
      ->check(CLI::IsMember({"text", "dot"}));
  md_show->callback([&] {
    action = [&]() -> int {
      VertexSet S =
          VertexSet(md_prime, parse_vertices(md_vertices)).join_closure();
      DualGraph G = dual_graph(S);
      if (md_format == "dot") {
        std::cout << "graph model {\n";
        for (std::size_t i = 0; i < S.size(); ++i) {
          std::cout << "  v" << i << " [shape=ellipse, label=\""
                    << S.point(i).str() << "\"];\n";
        }
        for (const Edge& e : G.edges) {
          std::cout << "  v" << e.parent << " -- v" << e.child
                    << " [label=\"" << e.length << "\"];\n";
        }
        std::cout << "}\n";
        return 0;
      }
      std::cout << S.str() << "\n";
      std::cout << "root: " << S.point(G.root).str() << "\n";
      for (const Edge& e : G.edges) {
        std::cout << "edge " << S.point(e.parent).str() << " -- "
                  << S.point(e.child).str() << " (length " << e.length
                  << ")\n";
      }
      return 0;
    };
  });

  CLI::App* md_spec = md->add_subcommand(
      "specialize", "closed fiber point a Berkovich point reduces to");
  add_vertex_opts(md_spec);
  md_spec->add_option("--point", md_point, "rigid(c), eta(a,s) or inf")
      ->required();
  md_spec->callback([&] {
    action = [&]() -> int {
      VertexSet S =
          VertexSet(md_prime, parse_vertices(md_vertices)).join_closure();
      BerkPoint x = parse_point(md_point);
      FiberPoint P = specialize(x, S);
      std::cout << P.str(S) << "\n";
      ComponentDesc C = complement_component(x, S);
      std::cout << "component: " << C.str(md_prime) << "\n";
      return 0;
    };
  });

  CLI::App* md_factor = md->add_subcommand(
      "factor", "factor a rational function at a closed fiber point as "
                "unit * alpha^n * beta^m");
  add_vertex_opts(md_factor);
  md_factor->add_option("--fn", md_fn, "rational function of T")->required();
  CLI::Option* oe =
      md_factor->add_option("--edge", md_edge, "double point of edge index");
  CLI::Option* oc = md_factor->add_option("--component", md_component,
                                          "smooth point on component index");
  md_factor->add_option("--class", md_class, "residue class c in F_p")
      ->needs(oc);
  md_factor->add_flag("--at-infinity", md_at_inf,
                      "the infinity class of the component")
      ->needs(oc);
  md_factor->add_flag("--generic", md_generic,
                      "the generic point of the component")
      ->needs(oc);
  oe->excludes(oc);
  md_factor->callback([&] {
    md_have_class = md_factor->count("--class") > 0;
    action = [&]() -> int {
      VertexSet S =
          VertexSet(md_prime, parse_vertices(md_vertices)).join_closure();
      FiberPoint P = [&] {
        if (md_edge >= 0) {
          return FiberPoint::double_point(static_cast<std::size_t>(md_edge),
                                          md_prime);
        }
        if (md_component < 0) {
          throw std::invalid_argument("pick --edge or --component");
        }
        std::size_t c = static_cast<std::size_t>(md_component);
        if (md_generic) return FiberPoint::generic(c, md_prime);
        if (md_at_inf) return FiberPoint::smooth_infinity(c, md_prime);
        if (md_have_class) {
          return FiberPoint::smooth_rational(c, md_prime, md_class);
        }
        return FiberPoint::smooth_rational(c, md_prime, 0);
      }();
      LocalParams lp = local_params(P, S);
      std::cout << "at " << P.str(S) << ": alpha = " << lp.alpha.str()
                << ", beta = " << lp.beta.str() << "\n";
      if (!lp.chart_note.empty()) std::cout << lp.chart_note << "\n";
      FactorAt f = factor_at(parse_ratfunc(md_fn), P, S);
      std::cout << "f = unit * alpha^" << f.n << " * beta^" << f.m
                << ", unit = " << f.unit.str() << "\n";
      std::cout << f.unit_certificate << "\n";
      if (f.residue) {
        std::cout << "unit residue in kappa(P): " << f.residue->str("t")
                  << "\n";
      }
      return 0;
    };
  });

  // ---- discauto ------------------------------------------------------
  CLI::App* da = app.add_subcommand(
      "discauto", "translation automorphisms of a disc minus closed holes");
  da->require_subcommand(1);
  std::string da_center = "0", da_radius, da_exclude;
  std::int64_t da_prime = 0;
  long da_m = 1;
  int da_samples = 12;
  std::uint64_t da_seed = 0;

  auto add_nbhd_opts = [&](CLI::App* cmd) {
    cmd->add_option("-p,--prime", da_prime, "odd prime p")->required();
    cmd->add_option("--center", da_center, "ambient disc center");
    cmd->add_option("--log-radius", da_radius, "ambient open disc log-radius")
        ->required();
    cmd->add_option("--exclude", da_exclude,
                    "closed holes as center:log-radius list");
  };

  CLI::App* da_gap = da->add_subcommand(
      "gap", "admissible translation sizes for the neighborhood");
  add_nbhd_opts(da_gap);
  da_gap->callback([&] {
    action = [&]() -> int {
      EndNeighborhood U =
          make_neighborhood(da_prime, da_center, da_radius, da_exclude);
      TranslationGap g = translation_gap(U);
      std::cout << U.str() << "\n";
      std::cout << "|w| must lie in " << g.str(da_prime) << "\n";
      return 0;
    };
  });

  CLI::App* da_choose = da->add_subcommand(
      "choose", "pick w = pi^j in an Eisenstein extension, degree coprime "
                "to m");
  add_nbhd_opts(da_choose);
  da_choose->add_option("--m", da_m, "degree the extension must avoid");
  da_choose->callback([&] {
    action = [&]() -> int {
      EndNeighborhood U =
          make_neighborhood(da_prime, da_center, da_radius, da_exclude);
      TranslationPlan plan = choose_w(translation_gap(U), da_prime, da_m);
      std::cout << U.str() << "\n" << plan.str() << "\n";
      return 0;
    };
  });

  CLI::App* da_verify = da->add_subcommand(
      "verify", "translate sampled points by w and check they stay inside");
  add_nbhd_opts(da_verify);
  da_verify->add_option("--m", da_m, "degree the extension must avoid");
  da_verify->add_option("--samples", da_samples, "number of sample points");
  da_verify->add_option("--seed", da_seed, "sampling seed");
  da_verify->callback([&] {
    action = [&]() -> int {
      EndNeighborhood U =
          make_neighborhood(da_prime, da_center, da_radius, da_exclude);
      TranslationPlan plan = choose_w(translation_gap(U), da_prime, da_m);
      std::cout << U.str() << "\n" << plan.str() << "\n";
      VerifyReport rep =
          verify_into(U, plan, sample_points(U, plan, da_samples, da_seed));
      std::cout << rep.str();
      return rep.pass ? 0 : 1;
    };
  });

  CLI11_PARSE(app, argc, argv);

  try {
    return action();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
