#include "doctest.h"

#include <random>
#include <vector>

#include "berk/model.hpp"

using namespace berk;

namespace {

std::size_t edge_index(const VertexSet& S, std::size_t parent,
                       std::size_t child) {
  DualGraph G = dual_graph(S);
  for (std::size_t e = 0; e < G.edges.size(); ++e) {
    if (G.edges[e].parent == parent && G.edges[e].child == child) return e;
  }
  throw std::runtime_error("edge not found");
}

Rat rnd_rat(std::mt19937_64& g, std::int64_t p) {
  std::uniform_int_distribution<long> num(-40, 40);
  std::uniform_int_distribution<long> den(1, 12);
  std::uniform_int_distribution<long> e(-2, 2);
  return Rat(num(g), den(g)) * pow_p(p, e(g));
}

VertexSet rnd_vertex_set(std::mt19937_64& g, std::int64_t p, int max_verts) {
  std::uniform_int_distribution<int> n(1, max_verts);
  std::uniform_int_distribution<long> sd(-2, 3);
  std::vector<std::pair<Rat, long>> vs;
  int k = n(g);
  for (int i = 0; i < k; ++i) vs.emplace_back(rnd_rat(g, p), sd(g));
  return VertexSet(p, vs).join_closure();
}

BerkPoint rnd_point(std::mt19937_64& g, std::int64_t p) {
  std::uniform_int_distribution<int> kind(0, 5);
  int k = kind(g);
  if (k == 0) return BerkPoint::infinity();
  if (k <= 2) return BerkPoint::rigid(rnd_rat(g, p));
  std::uniform_int_distribution<long> sd(-3, 4);
  std::uniform_int_distribution<int> half(0, 3);
  Rat s(sd(g));
  if (half(g) == 0) s += Rat(1, 2);
  return BerkPoint::eta(rnd_rat(g, p), s);
}

// Structured rigid/eta samples inside a component, for containment checks.
std::vector<BerkPoint> component_samples(const ComponentDesc& C,
                                         std::int64_t p) {
  std::vector<BerkPoint> out;
  switch (C.kind) {
    case ComponentDesc::Kind::InsideDisc: {
      long lo = to_long(num(C.lo));
      out.push_back(BerkPoint::rigid(C.center + pow_p(p, lo + 1)));
      out.push_back(BerkPoint::rigid(C.center + pow_p(p, lo + 2) * Rat(2)));
      out.push_back(BerkPoint::eta(C.center, C.lo + Rat(3, 2)));
      break;
    }
    case ComponentDesc::Kind::OutsideDisc: {
      long lo = to_long(num(C.lo));
      out.push_back(BerkPoint::rigid(C.center + pow_p(p, lo - 1)));
      out.push_back(BerkPoint::infinity());
      out.push_back(BerkPoint::eta(C.center, C.lo - Rat(1, 2)));
      break;
    }
    case ComponentDesc::Kind::Annulus: {
      Rat mid = (C.lo + C.hi) / 2;
      out.push_back(BerkPoint::eta(C.center, mid));
      if (C.lo + 1 < C.hi) {
        out.push_back(
            BerkPoint::rigid(C.center + pow_p(p, to_long(num(C.lo)) + 1)));
      }
      break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("vertex sets: canonical form, join closure") {
  const std::int64_t p = 3;
  VertexSet S(p, {{Rat(9), 2}, {Rat(0), 2}, {Rat(0), 2}});
  CHECK(S.size() == 1);  // eta(9, 2) = eta(0, 2)
  VertexSet T(p, {{Rat(0), 1}, {Rat(1), 1}});
  CHECK_FALSE(T.join_closed());
  VertexSet Tc = T.join_closure();
  CHECK(Tc.size() == 3);
  CHECK(Tc.index_of(BerkPoint::eta(Rat(0), Rat(0))).has_value());
  CHECK(Tc.join_closed());
  CHECK_THROWS_AS(dual_graph(T), std::invalid_argument);
}

TEST_CASE("dual graph of a join-closed set") {
  const std::int64_t p = 3;
  VertexSet S(p, {{Rat(0), 0}, {Rat(0), 1}, {Rat(1), 1}});
  DualGraph G = dual_graph(S);
  // Sorted vertices: eta(0,0), eta(0,1), eta(1,1); root is the Gauss point.
  CHECK(G.root == 0);
  REQUIRE(G.edges.size() == 2);
  CHECK(G.edges[0].parent == 0);
  CHECK(G.edges[0].child == 1);
  CHECK(G.edges[0].length == 1);
  CHECK(G.edges[1].parent == 0);
  CHECK(G.edges[1].child == 2);

  std::mt19937_64 g(5);
  for (int trial = 0; trial < 40; ++trial) {
    VertexSet R = rnd_vertex_set(g, p, 5);
    DualGraph GR = dual_graph(R);
    // Tree: n-1 edges, every non-root has a parent, parent discs contain.
    std::size_t with_parent = 0;
    for (std::size_t i = 0; i < R.size(); ++i) {
      if (GR.parent[i]) {
        ++with_parent;
        CHECK(leq(R.point(i), R.point(*GR.parent[i]), p));
      }
    }
    CHECK(with_parent == R.size() - 1);
    CHECK_FALSE(GR.parent[GR.root].has_value());
  }
}

TEST_CASE("specialize: frozen cases") {
  const std::int64_t p = 3;
  VertexSet S1(p, {{Rat(0), 0}});
  CHECK(specialize(BerkPoint::rigid(Rat(2)), S1) ==
        FiberPoint::smooth_rational(0, p, 2));
  CHECK(specialize(BerkPoint::rigid(Rat(1, 2)), S1) ==
        FiberPoint::smooth_rational(0, p, 2));  // 1/2 = 2 mod 3
  CHECK(specialize(BerkPoint::rigid(Rat(3)), S1) ==
        FiberPoint::smooth_rational(0, p, 0));
  CHECK(specialize(BerkPoint::rigid(Rat(1, 3)), S1) ==
        FiberPoint::smooth_infinity(0, p));
  CHECK(specialize(BerkPoint::infinity(), S1) ==
        FiberPoint::smooth_infinity(0, p));
  CHECK(specialize(BerkPoint::eta(Rat(0), Rat(2)), S1) ==
        FiberPoint::smooth_rational(0, p, 0));
  CHECK(specialize(BerkPoint::eta(Rat(0), Rat(0)), S1) ==
        FiberPoint::generic(0, p));

  VertexSet S2(p, {{Rat(0), 0}, {Rat(0), 1}});
  std::size_t e01 = edge_index(S2, 0, 1);
  CHECK(specialize(BerkPoint::rigid(Rat(3)), S2) ==
        FiberPoint::smooth_rational(1, p, 1));
  CHECK(specialize(BerkPoint::rigid(Rat(1)), S2) ==
        FiberPoint::smooth_rational(0, p, 1));
  CHECK(specialize(BerkPoint::eta(Rat(0), Rat(1, 2)), S2) ==
        FiberPoint::double_point(e01, p));
  CHECK(specialize(BerkPoint::eta(Rat(3), Rat(5)), S2) ==
        FiberPoint::smooth_rational(1, p, 1));
  // In the occupied direction but not inside the child disc: double point.
  CHECK(specialize(BerkPoint::eta(Rat(3), Rat(5)), S1) ==
        FiberPoint::smooth_rational(0, p, 0));
}

TEST_CASE("complement components partition the complement") {
  for (std::int64_t p : {3, 5}) {
    std::mt19937_64 g(60 + p);
    int checked = 0;
    for (int trial = 0; trial < 25; ++trial) {
      VertexSet S = rnd_vertex_set(g, p, 4);
      for (int i = 0; i < 10; ++i) {
        BerkPoint x = rnd_point(g, p);
        if (x.is_eta() && S.index_of(x)) {
          CHECK_THROWS_AS(complement_component(x, S), std::invalid_argument);
          continue;
        }
        ++checked;
        ComponentDesc C = complement_component(x, S);
        CHECK(component_contains(C, x, p));
        // The component's reduction agrees with direct specialization.
        CHECK(component_fiber_point(C, S) == specialize(x, S));
        // No vertex lies in the open component.
        for (std::size_t v = 0; v < S.size(); ++v) {
          CHECK_FALSE(component_contains(C, S.point(v), p));
        }
        // Structured samples of the component map to the same fiber point.
        for (const BerkPoint& y : component_samples(C, p)) {
          CHECK(component_contains(C, y, p));
          CHECK(specialize(y, S) == specialize(x, S));
        }
      }
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("refinement: components shrink when vertices are added") {
  const std::int64_t p = 3;
  std::mt19937_64 g(77);
  for (int trial = 0; trial < 30; ++trial) {
    VertexSet S = rnd_vertex_set(g, p, 3);
    auto verts = S.verts();
    VertexSet extra = rnd_vertex_set(g, p, 2);
    for (const auto& v : extra.verts()) verts.push_back(v);
    VertexSet Sp = VertexSet(p, verts).join_closure();
    for (int i = 0; i < 8; ++i) {
      BerkPoint x = rnd_point(g, p);
      if (x.is_eta() && (S.index_of(x) || Sp.index_of(x))) continue;
      ComponentDesc Cfine = complement_component(x, Sp);
      ComponentDesc Ccoarse = complement_component(x, S);
      CHECK(component_contains(Ccoarse, x, p));
      for (const BerkPoint& y : component_samples(Cfine, p)) {
        CHECK(component_contains(Ccoarse, y, p));
      }
    }
  }
}

TEST_CASE("closure of higher-degree points") {
  const std::int64_t p = 3;
  VertexSet S(p, {{Rat(0), 0}, {Rat(0), 1}});
  std::size_t e01 = edge_index(S, 0, 1);
  // T^2 + 3: conjugates at valuation 1/2, inside the open annulus.
  ClosedPoint z1 = ClosedPoint::irreducible(
      QPoly(std::vector<Rat>{Rat(3), Rat(0), Rat(1)}));
  CHECK(closure_contains(z1, FiberPoint::double_point(e01, p), S));
  CHECK_FALSE(closure_contains(z1, FiberPoint::smooth_rational(0, p, 1), S));
  CHECK_FALSE(closure_contains(z1, FiberPoint::smooth_infinity(0, p), S));
  CHECK_FALSE(closure_contains(z1, FiberPoint::generic(0, p), S));
  // T^2 - 2: unit conjugates with irreducible residue t^2 + 1 on the root.
  ClosedPoint z2 = ClosedPoint::irreducible(
      QPoly(std::vector<Rat>{Rat(-2), Rat(0), Rat(1)}));
  CHECK(closure_contains(z2, FiberPoint::smooth(0, FpPoly(p, {1, 0, 1})), S));
  CHECK_FALSE(closure_contains(z2, FiberPoint::smooth_rational(0, p, 1), S));
  CHECK_FALSE(closure_contains(z2, FiberPoint::double_point(e01, p), S));
  // T^2 - 6 over Q_5: 6 is a square mod 5, the roots split to classes 1, 4.
  ClosedPoint z3 = ClosedPoint::irreducible(
      QPoly(std::vector<Rat>{Rat(-6), Rat(0), Rat(1)}));
  VertexSet S5(5, {{Rat(0), 0}});
  CHECK(closure_contains(z3, FiberPoint::smooth_rational(0, 5, 1), S5));
  CHECK(closure_contains(z3, FiberPoint::smooth_rational(0, 5, 4), S5));
  CHECK_FALSE(closure_contains(z3, FiberPoint::smooth_rational(0, 5, 2), S5));
  // The point at infinity lands in the infinity class of the root.
  ClosedPoint zinf = ClosedPoint::infinity();
  CHECK(closure_contains(zinf, FiberPoint::smooth_infinity(0, p), S));
  CHECK_FALSE(closure_contains(zinf, FiberPoint::smooth_rational(0, p, 1), S));
}

TEST_CASE("local parameters: frozen charts") {
  const std::int64_t p = 3;
  VertexSet S1(p, {{Rat(0), 0}});
  LocalParams Ls = local_params(FiberPoint::smooth_rational(0, p, 1), S1);
  CHECK(Ls.alpha == RatFunc(Rat(3)));
  CHECK(Ls.beta == RatFunc::t() - RatFunc(Rat(1)));
  LocalParams Li = local_params(FiberPoint::smooth_infinity(0, p), S1);
  CHECK(Li.alpha == RatFunc(Rat(3)));
  CHECK(Li.beta == RatFunc(Rat(1)) / RatFunc::t());

  VertexSet S2(p, {{Rat(0), 0}, {Rat(0), 1}});
  std::size_t e01 = edge_index(S2, 0, 1);
  LocalParams Ld = local_params(FiberPoint::double_point(e01, p), S2);
  CHECK(Ld.alpha == RatFunc::t());
  CHECK(Ld.beta == RatFunc(Rat(3)) / RatFunc::t());
  CHECK(Ld.alpha * Ld.beta == RatFunc(Rat(3)));

  // The infinity class off the root is a double point, not smooth.
  CHECK_THROWS_AS(local_params(FiberPoint::smooth_infinity(1, p), S2),
                  std::invalid_argument);
  // A class occupied by an edge is not smooth either.
  CHECK_THROWS_AS(local_params(FiberPoint::smooth_rational(0, p, 0), S2),
                  std::invalid_argument);
  // Smooth point at a degree-two residue class.
  LocalParams Lq = local_params(FiberPoint::smooth(0, FpPoly(p, {1, 0, 1})), S1);
  CHECK(Lq.beta == RatFunc::t() * RatFunc::t() + RatFunc(Rat(1)));
}

TEST_CASE("factor_at: frozen examples") {
  const std::int64_t p = 3;
  VertexSet S1(p, {{Rat(0), 0}});
  RatFunc T = RatFunc::t();

  FactorAt f1 = factor_at(T, FiberPoint::smooth_rational(0, p, 1), S1);
  CHECK(f1.n == 0);
  CHECK(f1.m == 0);
  CHECK(f1.unit == T);

  FactorAt f2 = factor_at(T * RatFunc(Rat(3)), FiberPoint::smooth_rational(0, p, 1), S1);
  CHECK(f2.n == 1);
  CHECK(f2.m == 0);
  CHECK(f2.unit == T);

  CHECK_THROWS_AS(factor_at(T - RatFunc(Rat(1)),
                            FiberPoint::smooth_rational(0, p, 1), S1),
                  std::invalid_argument);

  VertexSet S2(p, {{Rat(0), 0}, {Rat(0), 1}});
  std::size_t e01 = edge_index(S2, 0, 1);
  FactorAt f3 = factor_at(RatFunc(Rat(3)), FiberPoint::double_point(e01, p), S2);
  CHECK(f3.n == 1);
  CHECK(f3.m == 1);
  CHECK(f3.unit == RatFunc(Rat(1)));

  FactorAt f4 = factor_at(T + RatFunc(Rat(3)), FiberPoint::double_point(e01, p), S2);
  CHECK(f4.n == 1);
  CHECK(f4.m == 0);

  // T itself vanishes on both branches' intersection neighborhood? No: its
  // divisor specializes inside the inner disc, so the double point is fine.
  FactorAt f5 = factor_at(T, FiberPoint::double_point(e01, p), S2);
  CHECK(f5.n == 1);
  CHECK(f5.m == 0);
  CHECK(f5.unit == RatFunc(Rat(1)));

  // A double point of a length-2 edge is rejected.
  VertexSet S3(p, {{Rat(0), 0}, {Rat(0), 2}});
  std::size_t e02 = edge_index(S3, 0, 1);
  CHECK_THROWS_AS(factor_at(RatFunc(Rat(3)), FiberPoint::double_point(e02, p), S3),
                  std::invalid_argument);

  // T^2 + 3 meets the double point: precondition rejects it.
  RatFunc q = T * T + RatFunc(Rat(3));
  CHECK_THROWS_AS(factor_at(q, FiberPoint::double_point(e01, p), S2),
                  std::invalid_argument);
}

TEST_CASE("factor_at: random units recombine exactly") {
  const std::int64_t p = 3;
  std::mt19937_64 g(99);
  int done = 0;
  for (int trial = 0; trial < 300 && done < 80; ++trial) {
    VertexSet S = rnd_vertex_set(g, p, 3);
    DualGraph G = dual_graph(S);
    // Random product of linear factors and a power of p.
    std::uniform_int_distribution<int> nf(0, 3);
    std::uniform_int_distribution<long> ed(-2, 2);
    RatFunc a(pow_p(p, ed(g)));
    int k = nf(g);
    for (int i = 0; i < k; ++i) {
      RatFunc lin = RatFunc::t() - RatFunc(rnd_rat(g, p));
      a = ed(g) % 2 == 0 ? a * lin : a / lin;
    }
    // Candidate fiber points: random smooth class and each unit-length edge.
    std::vector<FiberPoint> cands;
    std::uniform_int_distribution<std::size_t> vd(0, S.size() - 1);
    std::uniform_int_distribution<long> cd(0, p - 1);
    cands.push_back(FiberPoint::smooth_rational(vd(g), p, cd(g)));
    for (std::size_t e = 0; e < G.edges.size(); ++e) {
      if (G.edges[e].length == 1) cands.push_back(FiberPoint::double_point(e, p));
    }
    for (const FiberPoint& P : cands) {
      FactorAt F;
      try {
        F = factor_at(a, P, S);
      } catch (const std::invalid_argument&) {
        continue;  // divisor meets P or occupied class: precondition cases
      }
      ++done;
      LocalParams L = local_params(P, S);
      RatFunc recomposed = F.unit;
      for (long i = 0; i < (F.n >= 0 ? F.n : -F.n); ++i) {
        recomposed = F.n >= 0 ? recomposed * L.alpha : recomposed / L.alpha;
      }
      for (long i = 0; i < (F.m >= 0 ? F.m : -F.m); ++i) {
        recomposed = F.m >= 0 ? recomposed * L.beta : recomposed / L.beta;
      }
      CHECK(recomposed == a);
      CHECK_FALSE(F.unit_certificate.empty());
    }
  }
  CHECK(done >= 80);
}

TEST_CASE("coverage of the line by oriented open discs") {
  const std::int64_t p = 3;
  DiscDesc in1{Rat(0), Rat(1), false, true};    // {v(T) > 1}
  DiscDesc out1{Rat(0), Rat(-1), false, false}; // {v(T) < -1}
  DiscDesc in2{Rat(0), Rat(-1), false, true};   // {v(T) > -1}
  DiscDesc out2{Rat(0), Rat(1), false, false};  // {v(T) < 1}
  CHECK_FALSE(covers_line({in1, out1}, p));
  CHECK(covers_line({in2, out2}, p));
  CHECK_FALSE(covers_line({in1, in2}, p));  // infinity uncovered
  CHECK_FALSE(covers_line({out1}, p));
  // Two complement discs around different centers cover everything.
  DiscDesc outA{Rat(0), Rat(1), false, false};
  DiscDesc outB{Rat(1), Rat(1), false, false};
  CHECK(covers_line({outA, outB}, p));
}

TEST_CASE("build_model variants") {
  const std::int64_t p = 3;
  std::vector<BerkPoint> Z = {BerkPoint::rigid(Rat(0)), BerkPoint::infinity()};
  std::vector<DiscDesc> nb = {DiscDesc{Rat(0), Rat(1), false, true},
                              DiscDesc{Rat(0), Rat(-1), false, false}};
  VertexSet C1 = build_model(p, Z, nb, ModelVariant::C1);
  CHECK(C1.size() == 2);
  CHECK(C1.index_of(BerkPoint::eta(Rat(0), Rat(1))).has_value());
  CHECK(C1.index_of(BerkPoint::eta(Rat(0), Rat(-1))).has_value());

  VertexSet C3 = build_model(p, Z, nb, ModelVariant::C3);
  CHECK(C3.index_of(BerkPoint::eta(Rat(0), Rat(0))).has_value());
  CHECK(C3.size() == 3);
  CHECK(C3.join_closed());

  // Covering neighborhoods are rejected.
  std::vector<DiscDesc> cover = {DiscDesc{Rat(0), Rat(-1), false, true},
                                 DiscDesc{Rat(0), Rat(1), false, false}};
  CHECK_THROWS_AS(build_model(p, Z, cover, ModelVariant::C1),
                  std::invalid_argument);
  // A point outside its neighborhood is rejected.
  std::vector<BerkPoint> Zbad = {BerkPoint::rigid(Rat(1)), BerkPoint::infinity()};
  CHECK_THROWS_AS(build_model(p, Zbad, nb, ModelVariant::C1),
                  std::invalid_argument);

  // An explicit base point inside a neighborhood is rejected.
  CHECK_THROWS_AS(build_model(p, Z, nb, ModelVariant::C2,
                              std::make_pair(Rat(0), 2L)),
                  std::invalid_argument);
  VertexSet C2 = build_model(p, Z, nb, ModelVariant::C2,
                             std::make_pair(Rat(1), 0L));
  CHECK(C2.index_of(BerkPoint::eta(Rat(1), Rat(0))).has_value());
  CHECK(C2.join_closed());
}
