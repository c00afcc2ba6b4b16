#include "doctest.h"

#include <random>
#include <stdexcept>

#include "berk/discauto.hpp"
#include "berk/line.hpp"

using namespace berk;

namespace {

Rat p3(long e) {
  Rat r(1);
  for (long i = 0; i < e; ++i) r *= 3;
  for (long i = 0; i > e; --i) r /= 3;
  return r;
}

EisElem lift(std::int64_t p, long h, const Rat& a) {
  return EisElem::from_rat(p, h, a);
}

}  // namespace

TEST_CASE("end neighborhoods: construction enforces the disc invariants") {
  // unit disc minus the closed disc of radius 1/9 about 0
  EndNeighborhood u(3, Rat(0), Rat(0), {{Rat(0), Rat(2)}});
  CHECK(u.excluded().size() == 1);
  CHECK(u.str().find("minus") != std::string::npos);

  // excluded center outside the ambient disc
  CHECK_THROWS_AS(EndNeighborhood(3, Rat(0), Rat(0), {{Rat(1), Rat(2)}}),
                  std::invalid_argument);
  // excluded disc as large as the ambient disc
  CHECK_THROWS_AS(EndNeighborhood(3, Rat(0), Rat(0), {{Rat(3), Rat(0)}}),
                  std::invalid_argument);
  // second disc reaches the first center: v(3 - 0) = 1, radius exponent 1
  CHECK_THROWS_AS(EndNeighborhood(3, Rat(0), Rat(0),
                                  {{Rat(3), Rat(2)}, {Rat(0), Rat(1)}}),
                  std::invalid_argument);
  // duplicate centers can never satisfy r > v(0)
  CHECK_THROWS_AS(EndNeighborhood(3, Rat(0), Rat(0),
                                  {{Rat(3), Rat(2)}, {Rat(3), Rat(2)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EndNeighborhood(4, Rat(0), Rat(0), {}),
                  std::invalid_argument);

  // disjoint pair: v(0 - 3) = 1 < both radius exponents
  EndNeighborhood ok(3, Rat(0), Rat(0), {{Rat(0), Rat(2)}, {Rat(3), Rat(2)}});
  CHECK(ok.excluded().size() == 2);
}

TEST_CASE("end neighborhoods: membership at rigid and disc points") {
  EndNeighborhood u(3, Rat(0), Rat(0), {{Rat(0), Rat(2)}});
  auto rig = [](const Rat& a) { return LPoint::rigid(lift(3, 1, a)); };
  auto eta = [](const Rat& a, const Rat& s) {
    return LPoint::eta(lift(3, 1, a), s);
  };

  CHECK(in_neighborhood(u, rig(Rat(3))));       // v = 1, between 0 and 2
  CHECK(!in_neighborhood(u, rig(Rat(9))));      // v = 2, inside the hole
  CHECK(!in_neighborhood(u, rig(Rat(0))));      // center of the hole
  CHECK(!in_neighborhood(u, rig(Rat(1))));      // v = 0, outside the disc
  CHECK(!in_neighborhood(u, rig(Rat(1, 3))));   // v = -1, outside
  CHECK(in_neighborhood(u, eta(Rat(0), Rat(3, 2))));
  CHECK(!in_neighborhood(u, eta(Rat(0), Rat(3))));   // disc inside the hole
  CHECK(!in_neighborhood(u, eta(Rat(0), Rat(0))));   // Gauss point, too big
  CHECK(in_neighborhood(u, eta(Rat(9), Rat(1))));    // contains the hole

  // points over the quadratic extension: v(pi) = 1/2 splits the gap
  LPoint x = LPoint::rigid(EisElem::pi_power(3, 2, 1));
  CHECK(in_neighborhood(u, x));
  LPoint y = LPoint::rigid(EisElem::pi_power(3, 2, 4));
  CHECK(!in_neighborhood(u, y));  // v = 2
}

TEST_CASE("extension points: equality and seminorms") {
  CHECK(points_equal(LPoint::rigid(lift(3, 1, Rat(3))),
                     LPoint::rigid(lift(3, 1, Rat(3)))));
  CHECK(!points_equal(LPoint::rigid(lift(3, 1, Rat(3))),
                      LPoint::rigid(lift(3, 1, Rat(0)))));
  // eta(0, 1) and eta(3, 1): centers differ by valuation >= 1
  CHECK(points_equal(LPoint::eta(lift(3, 1, Rat(0)), Rat(1)),
                     LPoint::eta(lift(3, 1, Rat(3)), Rat(1))));
  CHECK(!points_equal(LPoint::eta(lift(3, 1, Rat(0)), Rat(1)),
                      LPoint::eta(lift(3, 1, Rat(1)), Rat(1))));
  CHECK(!points_equal(LPoint::rigid(lift(3, 1, Rat(0))),
                      LPoint::eta(lift(3, 1, Rat(0)), Rat(5))));

  RatFunc T = RatFunc::t();
  // T^2 - 3 vanishes at pi but at no rigid point over Q_3
  RatFunc f = T * T - RatFunc(Rat(3));
  LPoint pi = LPoint::rigid(EisElem::pi_power(3, 2, 1));
  CHECK(!seminorm_val(f, pi).finite());
  CHECK(seminorm_val(RatFunc::t(), pi) == ValExt(Rat(1, 2)));
  CHECK(seminorm_val(RatFunc(Rat(1)) / T,
                     LPoint::rigid(lift(3, 1, Rat(0)))) ==
        ValExt::minus_inf());
  // Gauss valuation at a shifted disc point over the extension
  CHECK(seminorm_val(RatFunc::t(),
                     LPoint::eta(EisElem::pi_power(3, 2, 1), Rat(2))) ==
        ValExt(Rat(1, 2)));
  // f(T + pi) = T^2 + 2 pi T, so the Gauss value is min(1/2 + 2, 4)
  CHECK(seminorm_val(f, LPoint::eta(EisElem::pi_power(3, 2, 1), Rat(2))) ==
        ValExt(Rat(5, 2)));
}

TEST_CASE("extension seminorms agree with the base line at rational data") {
  std::mt19937 rng(9901);
  std::uniform_int_distribution<long> coef(-9, 9);
  std::uniform_int_distribution<long> len(1, 4);
  std::uniform_int_distribution<long> sv(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Rat> nc, dc;
    for (long i = 0, n = len(rng); i < n; ++i) nc.emplace_back(coef(rng));
    for (long i = 0, n = len(rng); i < n; ++i) dc.emplace_back(coef(rng));
    dc.push_back(Rat(1));
    QPoly num(nc), den(dc);
    if (num.is_zero()) num = QPoly(Rat(1));
    RatFunc f(num, den);
    Rat a(coef(rng), 1 + (trial % 3));
    Rat s(sv(rng), 1 + (trial % 2));
    ValExt base = seminorm_val(f, BerkPoint::eta(a, s), 3);
    ValExt ext = seminorm_val(f, LPoint::eta(lift(3, 1, a), s));
    CHECK(base == ext);
    ValExt ext2 = seminorm_val(f, LPoint::eta(lift(3, 2, a), s));
    CHECK(base == ext2);
  }
}

TEST_CASE("translation gaps: frozen intervals") {
  // unit disc minus one closed disc of radius 1/9: gap radius (1/9, 1/3)
  EndNeighborhood u1(3, Rat(0), Rat(0), {{Rat(0), Rat(2)}});
  TranslationGap g1 = translation_gap(u1);
  CHECK(g1.hi_v == ValExt(Rat(2)));
  CHECK(g1.lo_v == Rat(1));
  CHECK(g1.str(3) == "(3^(-2), 3^(-1))");

  // disc of radius 3 minus discs about 0 and 1: distance 1 dominates
  EndNeighborhood u2(3, Rat(0), Rat(-1),
                     {{Rat(0), Rat(1)}, {Rat(1), Rat(1)}});
  TranslationGap g2 = translation_gap(u2);
  CHECK(g2.hi_v == ValExt(Rat(0)));
  CHECK(g2.lo_v == Rat(-1, 2));

  // unit disc minus discs about 0 and 3: distance v = 1 is the bound
  EndNeighborhood u3(3, Rat(0), Rat(0), {{Rat(0), Rat(2)}, {Rat(3), Rat(2)}});
  TranslationGap g3 = translation_gap(u3);
  CHECK(g3.hi_v == ValExt(Rat(1)));
  CHECK(g3.lo_v == Rat(1, 2));

  // no excluded discs: every short translation works
  EndNeighborhood u4(3, Rat(0), Rat(0), {});
  TranslationGap g4 = translation_gap(u4);
  CHECK(!g4.hi_v.finite());
  CHECK(g4.lo_v == Rat(0));
  CHECK(g4.str(3) == "(0, 3^(0))");
}

TEST_CASE("translation lengths: frozen degree and exponent choices") {
  TranslationGap third_to_one{Rat(0), ValExt(Rat(1))};
  TranslationPlan p1 = choose_w(third_to_one, 3, 1);
  CHECK(p1.h == 2);
  CHECK(p1.j == 1);
  CHECK(p1.w.valuation() == ValExt(Rat(1, 2)));
  CHECK(p1.ext.kind == BaseFieldDesc::Kind::PAdicExtension);
  CHECK(p1.ext.degree == 2);

  TranslationGap ninth_to_third{Rat(1), ValExt(Rat(2))};
  TranslationPlan p2 = choose_w(ninth_to_third, 3, 1);
  CHECK(p2.h == 2);
  CHECK(p2.j == 3);
  CHECK(p2.w.valuation() == ValExt(Rat(3, 2)));

  // m = 2 blocks h = 2, the next usable degree is 3
  TranslationPlan p3 = choose_w(ninth_to_third, 3, 2);
  CHECK(p3.h == 3);
  CHECK(p3.j == 4);
  CHECK(p3.w.valuation() == ValExt(Rat(4, 3)));

  // no excluded discs: w = p works and no extension is needed
  TranslationGap whole{Rat(0), ValExt::plus_inf()};
  TranslationPlan p4 = choose_w(whole, 3, 1);
  CHECK(p4.h == 1);
  CHECK(p4.j == 1);
  CHECK(p4.w == lift(3, 1, Rat(3)));
  CHECK(p4.ext.kind == BaseFieldDesc::Kind::PAdicRationals);

  // gap (1/2, 1) exponents: (1, 2) over h = 2 holds no admissible integer
  TranslationGap narrow{Rat(1, 2), ValExt(Rat(1))};
  TranslationPlan p5 = choose_w(narrow, 3, 1);
  CHECK(p5.h == 3);
  CHECK(p5.j == 2);
  CHECK(p5.w.valuation() == ValExt(Rat(2, 3)));

  CHECK_THROWS_AS(choose_w(third_to_one, 3, 0), std::invalid_argument);
  CHECK(p2.str().find("pi^3") != std::string::npos);
}

TEST_CASE("translation lengths: exponents stay strictly inside the gap") {
  std::mt19937 rng(4711);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  std::uniform_int_distribution<long> width_num(1, 5);
  std::uniform_int_distribution<long> mm(1, 6);
  for (int trial = 0; trial < 80; ++trial) {
    Rat lo(num(rng), den(rng));
    Rat hi = lo + Rat(width_num(rng), den(rng));
    long m = mm(rng);
    TranslationGap gap{lo, ValExt(hi)};
    TranslationPlan plan = choose_w(gap, 3, m);
    Rat v(plan.j, plan.h);
    CHECK(lo < v);
    CHECK(v < hi);
    CHECK(std::gcd(plan.h, m) == 1);
    CHECK(plan.j % plan.h != 0);
    CHECK(plan.w.valuation() == ValExt(v));
  }
}

TEST_CASE("translating points: frozen moves and the radius guard") {
  EisElem three = lift(3, 1, Rat(3));
  LPoint r0 = LPoint::rigid(lift(3, 1, Rat(0)));
  CHECK(points_equal(translate(r0, three, Rat(0)),
                     LPoint::rigid(lift(3, 1, Rat(3)))));
  // eta(0, 1) is fixed: the translation length sits inside that disc
  LPoint e01 = LPoint::eta(lift(3, 1, Rat(0)), Rat(1));
  CHECK(points_equal(translate(e01, three, Rat(0)), e01));
  LPoint e12 = LPoint::eta(lift(3, 1, Rat(1)), Rat(2));
  CHECK(points_equal(translate(e12, three, Rat(0)),
                     LPoint::eta(lift(3, 1, Rat(4)), Rat(2))));

  // |w| at or above the ambient radius cannot preserve the disc
  CHECK_THROWS_AS(translate(r0, three, Rat(1)), std::domain_error);
  CHECK_THROWS_AS(translate(r0, three, Rat(2)), std::domain_error);
  EisElem pi = EisElem::pi_power(3, 2, 1);
  CHECK_THROWS_AS(translate(LPoint::rigid(lift(3, 2, Rat(0))), pi, Rat(1, 2)),
                  std::domain_error);
}

TEST_CASE("translating points: an isometry for every rational function") {
  std::mt19937 rng(2237);
  std::uniform_int_distribution<long> coef(-9, 9);
  std::uniform_int_distribution<long> len(1, 4);
  std::uniform_int_distribution<long> hh(1, 3);
  std::uniform_int_distribution<long> sv(-3, 3);
  std::uniform_int_distribution<int> kind(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rat> nc, dc;
    for (long i = 0, n = len(rng); i < n; ++i) nc.emplace_back(coef(rng));
    for (long i = 0, n = len(rng); i < n; ++i) dc.emplace_back(coef(rng));
    dc.push_back(Rat(1));
    QPoly num(nc), den(dc);
    if (num.is_zero()) num = QPoly(Rat(1));
    RatFunc f(num, den);

    long h = hh(rng);
    std::vector<Rat> ac, wc;
    for (long i = 0; i < h; ++i) ac.emplace_back(coef(rng));
    for (long i = 0; i < h; ++i) wc.emplace_back(coef(rng));
    EisElem a(3, h, ac), w(3, h, wc);
    LPoint x = kind(rng) ? LPoint::eta(a, Rat(sv(rng), 2))
                         : LPoint::rigid(a);
    LPoint y = translate(x, w, Rat(-100));
    CHECK(seminorm_val(f, y) == seminorm_val_shift(f, w, x));
  }
}

TEST_CASE("translating points: inverse length undoes the move") {
  std::mt19937 rng(551);
  std::uniform_int_distribution<long> coef(-9, 9);
  std::uniform_int_distribution<long> hh(1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    long h = hh(rng);
    std::vector<Rat> ac, wc;
    for (long i = 0; i < h; ++i) ac.emplace_back(coef(rng));
    for (long i = 0; i < h; ++i) wc.emplace_back(coef(rng));
    EisElem a(3, h, ac), w(3, h, wc);
    EisElem minus_w = EisElem(3, h) - w;
    LPoint x = LPoint::eta(a, Rat(2));
    LPoint back = translate(translate(x, w, Rat(-100)), minus_w, Rat(-100));
    CHECK(points_equal(back, x));
  }
  // pi^j * pi^{-j} = 1 in the extension
  EisElem one = EisElem::pi_power(3, 2, 3) * EisElem::pi_power(3, 2, -3);
  CHECK(one == lift(3, 2, Rat(1)));
}

TEST_CASE("eisenstein extensions: the value group gains denominator h") {
  for (long h = 1; h <= 5; ++h) {
    EisElem pi = EisElem::pi_power(3, h, 1);
    CHECK(pi.valuation() == ValExt(Rat(1, h)));
    EisElem ph = EisElem::pi_power(3, h, h);
    CHECK(ph == lift(3, h, Rat(3)));
    CHECK(EisElem::pi_power(3, h, -1).valuation() == ValExt(Rat(-1, h)));
  }
}

TEST_CASE("verification harness: the worked one-hole example") {
  // unit disc minus the closed disc of radius 1/9 about 0, translation by
  // pi^3 with pi^2 = 3: |w| = 3^{-3/2} sits strictly inside the gap
  EndNeighborhood u(3, Rat(0), Rat(0), {{Rat(0), Rat(2)}});
  TranslationPlan plan = choose_w(translation_gap(u), 3, 1);
  CHECK(plan.h == 2);
  CHECK(plan.j == 3);

  std::vector<LPoint> samples;
  samples.push_back(LPoint::rigid(lift(3, 2, Rat(0))));    // hole center
  samples.push_back(LPoint::rigid(lift(3, 2, Rat(9))));    // in the hole
  samples.push_back(LPoint::rigid(lift(3, 2, Rat(27))));   // deeper
  samples.push_back(LPoint::rigid(lift(3, 2, Rat(3))));    // already in U
  samples.push_back(LPoint::eta(lift(3, 2, Rat(0)), Rat(3)));
  samples.push_back(LPoint::eta(lift(3, 2, Rat(0)), Rat(5, 2)));
  samples.push_back(LPoint::eta(lift(3, 2, Rat(3)), Rat(3, 2)));

  VerifyReport rep = verify_into(u, plan, samples);
  CHECK(rep.pass);
  CHECK(rep.samples.size() == 7);
  CHECK(!rep.samples[0].before_in_u);
  CHECK(rep.samples[0].after_in_u);
  CHECK(!rep.samples[1].before_in_u);
  CHECK(rep.samples[3].before_in_u);
  CHECK(rep.translated_disc_in_u.size() == 1);
  CHECK(rep.translated_disc_in_u[0]);
  CHECK(rep.str().find("PASS") != std::string::npos);

  // escape is exact: v(x + w) = 3/2 < 2 for every x in the hole
  LPoint moved = translate(samples[1], plan.w, u.s());
  CHECK(moved.a.valuation() == ValExt(Rat(3, 2)));

  // a sample outside the ambient disc is a caller error
  CHECK_THROWS_AS(
      verify_into(u, plan, {LPoint::rigid(lift(3, 2, Rat(1)))}),
      std::invalid_argument);
}

TEST_CASE("verification harness: random neighborhoods all verify") {
  std::mt19937 rng(7411);
  std::uniform_int_distribution<long> cc(-2, 2);
  std::uniform_int_distribution<long> ss(-1, 1);
  std::uniform_int_distribution<int> nex(0, 3);
  std::uniform_int_distribution<long> bump(0, 1);
  std::uniform_int_distribution<long> mm(1, 4);
  int built = 0;
  for (int trial = 0; trial < 50; ++trial) {
    long s = ss(rng);
    Rat center(cc(rng));
    int n = nex(rng);
    // centers c + k*3^{s+1} with distinct small k: pairwise distance
    // exponents sit in [s+1, s+3], radii one step above all of them
    std::vector<long> ks;
    for (long k = 1; ks.size() < static_cast<std::size_t>(n); ++k) {
      ks.push_back(k * (bump(rng) ? 1 : 2));
      k = ks.back();
    }
    long maxd = s + 1;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      for (std::size_t j = i + 1; j < ks.size(); ++j) {
        long d = s + 1;
        for (long t = ks[i] - ks[j]; t % 3 == 0; t /= 3) ++d;
        if (d > maxd) maxd = d;
      }
    }
    std::vector<EndNeighborhood::Excluded> ex;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      ex.push_back({center + Rat(ks[i]) * p3(s + 1),
                    Rat(maxd + 1 + bump(rng))});
    }
    EndNeighborhood u(3, center, Rat(s), ex);
    TranslationPlan plan = choose_w(translation_gap(u), 3, mm(rng));
    const long h = plan.h;

    std::vector<LPoint> samples;
    for (const auto& e : u.excluded()) {
      long r = to_long(floor_rat(e.r));
      samples.push_back(LPoint::rigid(lift(3, h, e.alpha)));
      samples.push_back(LPoint::rigid(lift(3, h, e.alpha + p3(r))));
      samples.push_back(LPoint::eta(lift(3, h, e.alpha), e.r + 1));
    }
    while (samples.size() < 20) {
      samples.push_back(
          LPoint::rigid(lift(3, h, center + Rat(cc(rng)) * p3(s + 1))));
      samples.push_back(LPoint::eta(lift(3, h, center), Rat(maxd + 4)));
    }
    VerifyReport rep = verify_into(u, plan, samples);
    CHECK(rep.pass);
    for (std::size_t i = 0; i < u.excluded().size(); ++i) {
      CHECK(!rep.samples[3 * i].before_in_u);
      CHECK(rep.samples[3 * i].after_in_u);
    }
    ++built;
  }
  CHECK(built == 50);
}

TEST_CASE("zero cycles: coprime rounds combine to degree one") {
  ZeroCycleDegrees z1 = zero_cycle_degrees({2}, {3});
  CHECK(z1.d1 == 2);
  CHECK(z1.d2 == 3);
  CHECK(z1.g == 1);

  ZeroCycleDegrees z2 = zero_cycle_degrees({2, 3}, {5, 7});
  CHECK(z2.d1 == 6);
  CHECK(z2.d2 == 35);
  CHECK(z2.g == 1);

  ZeroCycleDegrees z3 = zero_cycle_degrees({}, {});
  CHECK(z3.d1 == 1);
  CHECK(z3.d2 == 1);

  CHECK_THROWS_AS(zero_cycle_degrees({2}, {4}), std::invalid_argument);
  CHECK_THROWS_AS(zero_cycle_degrees({2, 5}, {15}), std::invalid_argument);
  CHECK_THROWS_AS(zero_cycle_degrees({0}, {3}), std::invalid_argument);
  CHECK_THROWS_AS(zero_cycle_degrees({2}, {-1}), std::invalid_argument);
}
