#include "doctest.h"

#include <algorithm>
#include <stdexcept>

#include "berk/analyze.hpp"
#include "berk/parse.hpp"

using namespace berk;

TEST_CASE("rational function parser: grammar") {
  CHECK(parse_ratfunc("T").str() == "T");
  CHECK(parse_ratfunc("t^2").str() == "T^2");
  CHECK(parse_ratfunc("1 + 2*T + T^2").str() == "T^2 + 2*T + 1");
  CHECK(parse_ratfunc("(1+T)*(1-T)").str() == "-1*T^2 + 1");
  CHECK(parse_ratfunc("-3").str() == "-3");
  CHECK(parse_ratfunc("1/2").str() == "1/2");
  CHECK(parse_ratfunc("1/(1+T)").str() == "(1)/(T + 1)");
  // precedence: ^ binds tighter than unary minus and *
  CHECK(parse_ratfunc("-T^2").str() == "-1*T^2");
  CHECK(parse_ratfunc("2*T^3").str() == "2*T^3");
  CHECK(parse_ratfunc("2^3").str() == "8");
  // negative exponents via the reciprocal
  CHECK(parse_ratfunc("T^-1").str() == "(1)/(T)");
  CHECK(parse_ratfunc("(1+T)^-2 * (1+T)^2").str() == "1");
  // sign runs collapse
  CHECK(parse_ratfunc("--T").str() == "T");
  CHECK(parse_ratfunc("+-+3").str() == "-3");
  // whitespace is free
  CHECK(parse_ratfunc("  1 +  T ").str() == "T + 1");
}

TEST_CASE("rational function parser: errors carry the position") {
  CHECK_THROWS_WITH_AS(parse_ratfunc(""),
                       doctest::Contains("position 1"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ratfunc("1 + "),
                       doctest::Contains("position 5"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ratfunc("T/0"),
                       doctest::Contains("division by the zero polynomial"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ratfunc("T/(T-T)"),
                       doctest::Contains("division by the zero polynomial"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ratfunc("T^100"),
                       doctest::Contains("exponent larger than 64"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ratfunc("0^-1"),
                       doctest::Contains("zero raised to a negative power"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ratfunc("1 + x"),
                       doctest::Contains("unexpected character 'x'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_ratfunc("(1+T"),
                       doctest::Contains("position 5"),
                       std::invalid_argument);
}

TEST_CASE("form parser: zero entries are stripped with a note") {
  ParsedForm f = parse_form("1, 0, -1", 3);
  CHECK(f.q.dim() == 2);
  CHECK(f.stripped == std::vector<std::size_t>{1});
  CHECK(f.note.find("zero coefficient") != std::string::npos);
  CHECK(parse_form("1, -1", 3).note.empty());
  CHECK_THROWS_WITH_AS(parse_form("0, 0", 3),
                       doctest::Contains("no regular part"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_form("T - T", 5),
                       doctest::Contains("no regular part"),
                       std::invalid_argument);
}

TEST_CASE("form parser: round trip through the printed coefficients") {
  ParsedForm f = parse_form("1, -(1+3*T), T, -(T+3)", 3);
  for (const RatFunc& a : f.q.coeffs()) {
    CHECK(parse_ratfunc(a.str()).str() == a.str());
  }
}

TEST_CASE("analyze: certified discs cover the line") {
  // the running example: <1, -(1+3T), T, -(T+3)> over Q_3(T)
  ParsedForm f = parse_form("1, -(1+3*T), T, -(T+3)", 3);
  HasseReport r = analyze_parsed(f, {});
  CHECK(r.conclusion == Conclusion::LocalEverywhere);
  CHECK(r.exit_code() == 0);
  CHECK(r.discs_cover_line);
  CHECK(!r.model.has_value());

  // bad locus: 0 (from T), -3 (from T+3), -1/3 (from 1+3T), infinity
  REQUIRE(r.bad_locus.size() == 4);
  CHECK(r.bad_locus[0].str() == "T=-3");
  CHECK(r.bad_locus[1].str() == "T=-1/3");
  CHECK(r.bad_locus[2].str() == "T=0");
  CHECK(r.bad_locus[3].is_infinity());

  for (const DiscReport& d : r.discs) {
    CHECK(d.completion.isotropic());
    REQUIRE(d.disc.has_value());
  }
  // at T = 0 the Newton bound certifies past log-radius -1 (radius 3)
  const DiscReport& d0 = r.discs[2];
  REQUIRE(d0.disc->threshold.finite());
  CHECK(d0.disc->threshold.value() <= Rat(-1));
  // at infinity the raw crossing lands at a nonpositive log-radius and is
  // clamped to the chart, so the certified radius is exactly 1
  const DiscReport& dinf = r.discs[3];
  REQUIRE(dinf.disc->threshold.finite());
  CHECK(dinf.disc->threshold.value() == Rat(0));
  CHECK(dinf.disc->clamped);

  CHECK(r.coverage_note.find("cover") != std::string::npos);
  CHECK(r.global_note.find("isotropic over Q_3(T)") != std::string::npos);
  REQUIRE(r.global_witness.has_value());
  RatFunc sum;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    sum = sum + r.coeffs[i] * r.global_witness->coords[i] *
              r.global_witness->coords[i];
  }
  CHECK(sum.is_zero());
}

TEST_CASE("analyze: an exact cancelling pair settles everything") {
  ParsedForm f = parse_form("1, -1, T", 5);
  HasseReport r = analyze_parsed(f, {});
  CHECK(r.conclusion == Conclusion::LocalEverywhere);
  CHECK(r.discs_cover_line);
  CHECK(r.coverage_note.find("exact") != std::string::npos);
  REQUIRE(r.global_witness.has_value());
  CHECK(r.global_witness->note.find("exact zero") != std::string::npos);
}

TEST_CASE("analyze: obstruction at the Gauss point") {
  ParsedForm f = parse_form("1, -2, T, -2*T", 3);
  HasseReport r = analyze_parsed(f, {});
  CHECK(r.conclusion == Conclusion::ObstructionAt);
  CHECK(r.exit_code() == 1);
  REQUIRE(r.model.has_value());
  CHECK(r.obstruction_site.find("eta(0, 0)") != std::string::npos);
  std::string cert = r.certificate.str();
  CHECK(cert.find("F_3") != std::string::npos);
  CHECK(cert.find("anisotropic") != std::string::npos);
  CHECK(cert.find("nonsquare") != std::string::npos);
  // both rigid completions at 0 and infinity are obstructed too, but the
  // type-2 site is reported
  for (const DiscReport& d : r.discs) CHECK(d.completion.anisotropic());
}

TEST_CASE("analyze: constant coefficients use the Gauss model alone") {
  {
    ParsedForm f = parse_form("1, -1", 7);
    HasseReport r = analyze_parsed(f, {});
    CHECK(r.bad_locus.empty());
    CHECK(r.conclusion == Conclusion::LocalEverywhere);
    REQUIRE(r.model.has_value());
    CHECK(r.model->size() == 1);
    CHECK(r.vertex_sites.size() == 1);
    CHECK(r.vertex_sites[0].verdict.isotropic());
    CHECK(r.components.size() == 1);
    CHECK(r.global_note.find("dimension 2") != std::string::npos);
  }
  {
    ParsedForm f = parse_form("1, -2", 3);
    HasseReport r = analyze_parsed(f, {});
    CHECK(r.conclusion == Conclusion::ObstructionAt);
    CHECK(r.obstruction_site.find("eta(0, 0)") != std::string::npos);
  }
}

TEST_CASE("analyze: a higher-degree bad point is inconclusive") {
  ParsedForm f = parse_form("1, -1, T^2+1", 3);
  HasseReport r = analyze_parsed(f, {});
  CHECK(r.conclusion == Conclusion::Inconclusive);
  CHECK(r.exit_code() == 2);
  CHECK(r.reason.find("degree-2") != std::string::npos);
}

TEST_CASE("analyze: refinement does not change the conclusion") {
  const char* forms[] = {"1, -(1+3*T), T, -(T+3)", "1, -2, T, -2*T",
                         "1, -1, T", "1, -2", "T, -T-3, 2"};
  for (const char* text : forms) {
    ParsedForm f = parse_form(text, 3);
    AnalyzeOptions a;
    a.variant = ModelVariant::C1;
    AnalyzeOptions b;
    b.variant = ModelVariant::C3;
    HasseReport ra = analyze_parsed(f, a);
    HasseReport rb = analyze_parsed(f, b);
    CHECK(ra.conclusion == rb.conclusion);
    if (ra.conclusion == Conclusion::ObstructionAt) {
      CHECK(ra.obstruction_site == rb.obstruction_site);
    }
  }
}

TEST_CASE("analyze: components carry the exceptional classes") {
  // discs certified but too small to cover, so the model path must finish
  ParsedForm f = parse_form("1, -(1+9*T), T", 3);
  HasseReport r = analyze_parsed(f, {});
  CHECK(r.conclusion == Conclusion::LocalEverywhere);
  CHECK(!r.discs_cover_line);
  REQUIRE(r.model.has_value());
  for (const SiteReport& v : r.vertex_sites) CHECK(v.verdict.isotropic());
  for (const SiteReport& e : r.edge_sites) CHECK(e.verdict.isotropic());
  std::size_t exceptional = 0;
  for (const ComponentReport& c : r.components) {
    for (const ExceptionalCheck& e : c.exceptional) {
      CHECK(e.covered_by_disc);
      ++exceptional;
    }
  }
  // one reduction class per point of the bad locus
  CHECK(exceptional == r.bad_locus.size());
  // the boundary vertices sit strictly inside the certified discs
  for (const DiscReport& d : r.discs) {
    REQUIRE(d.boundary_s.has_value());
    REQUIRE(d.disc.has_value());
    if (d.z.is_infinity()) {
      CHECK(Rat(-*d.boundary_s) > d.disc->threshold.value());
    } else {
      CHECK(Rat(*d.boundary_s) > d.disc->threshold.value());
    }
  }
}
