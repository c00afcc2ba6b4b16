#include "doctest.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "berk/isotropy.hpp"
#include "berk/padic.hpp"
#include "oracles.hpp"

using namespace berk;

namespace {

FpRat fpr(std::int64_t p, std::vector<long> c) {
  return FpRat(FpPoly(p, std::move(c)));
}

Rat rnd_qp_coeff(std::mt19937_64& g, std::int64_t p, long emax) {
  std::uniform_int_distribution<long> e(-emax, emax);
  std::uniform_int_distribution<long> u(1, p - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  Rat r = Rat(u(g)) * pow_p(p, e(g));
  return sign(g) ? -r : r;
}

FpRat rnd_fqt_coeff(std::mt19937_64& g, std::int64_t p) {
  std::uniform_int_distribution<long> digit(0, p - 1);
  std::uniform_int_distribution<long> deg(0, 2);
  std::uniform_int_distribution<int> denom(0, 3);
  FpPoly num(p);
  while (num.is_zero()) {
    std::vector<long> c(static_cast<std::size_t>(deg(g)) + 1, 0);
    for (long& d : c) d = digit(g);
    num = FpPoly(p, c);
  }
  FpPoly den = FpPoly::constant(p, 1);
  if (denom(g) == 0) den = FpPoly(p, {digit(g), 1});
  return FpRat(num, den);
}

}  // namespace

TEST_CASE("springer split: parities, units, and scales") {
  SpringerSplit sp = springer_split({Rat(1), Rat(-1), Rat(3), Rat(-3)}, 3);
  CHECK(sp.units1 == std::vector<Rat>{Rat(1), Rat(-1)});
  CHECK(sp.units2 == std::vector<Rat>{Rat(1), Rat(-1)});
  CHECK(sp.idx1 == std::vector<std::size_t>{0, 1});
  CHECK(sp.idx2 == std::vector<std::size_t>{2, 3});
  CHECK(sp.scale == std::vector<Rat>(4, Rat(1)));

  sp = springer_split({Rat(9), Rat(3)}, 3);
  CHECK(sp.units1 == std::vector<Rat>{Rat(1)});
  CHECK(sp.units2 == std::vector<Rat>{Rat(1)});
  CHECK(sp.scale == std::vector<Rat>{Rat(1, 3), Rat(1)});

  sp = springer_split({Rat(1), Rat(54)}, 3);  // 54 = 2 * 27
  CHECK(sp.units2 == std::vector<Rat>{Rat(2)});
  CHECK(sp.scale[1] == Rat(1, 3));
  CHECK(Rat(54) * sp.scale[1] * sp.scale[1] == Rat(6));

  sp = springer_split({Rat(1, 3)}, 3);
  CHECK(sp.units2 == std::vector<Rat>{Rat(1)});
  CHECK(sp.scale[0] == Rat(3));

  CHECK_THROWS_AS(springer_split({Rat(0)}, 3), std::invalid_argument);
}

TEST_CASE("hilbert symbol: frozen values and the mod-p^3 oracle") {
  CHECK(hilbert_symbol(Rat(-1), Rat(-1), 3) == 1);
  CHECK(hilbert_symbol(Rat(3), Rat(3), 3) == -1);
  CHECK(hilbert_symbol(Rat(3), Rat(-3), 3) == 1);
  CHECK(hilbert_symbol(Rat(2), Rat(3), 5) == 1);
  CHECK(hilbert_symbol(Rat(5), Rat(2), 5) == -1);
  CHECK_THROWS_AS(hilbert_symbol(Rat(0), Rat(1), 3), std::invalid_argument);

  // (a, b)_p = 1 iff z^2 = a x^2 + b y^2 has a primitive solution mod p^3.
  for (long p : {3L, 5L, 7L}) {
    for (long ua = 1; ua < p; ++ua) {
      for (long ub = 1; ub < p; ++ub) {
        for (long ea = 0; ea <= 1; ++ea) {
          for (long eb = 0; eb <= 1; ++eb) {
            long a = ea ? ua * p : ua;
            long b = eb ? ub * p : ub;
            bool sym = hilbert_symbol(Rat(a), Rat(b), p) == 1;
            CHECK(sym == oracle::hilbert_zero_mod_p3(a, b, p));
          }
        }
      }
    }
  }
}

TEST_CASE("qp_square: valuation parity plus unit residue") {
  CHECK(qp_square(Rat(1), 3));
  CHECK(qp_square(Rat(4), 3));
  CHECK_FALSE(qp_square(Rat(2), 3));
  CHECK_FALSE(qp_square(Rat(3), 3));
  CHECK(qp_square(Rat(9), 3));
  CHECK(qp_square(Rat(1, 9), 3));
  CHECK_FALSE(qp_square(Rat(2, 3), 3));
  CHECK(qp_square(Rat(-1), 5));
  CHECK_FALSE(qp_square(Rat(-1), 3));

  for (long p : {3L, 5L}) {
    long m = p * p * p;
    auto squares = oracle::squares_mod(m);
    for (long u = 1; u < m; ++u) {
      if (u % p == 0) continue;
      CHECK(qp_square(Rat(u), p) == (squares.count(u) > 0));
      CHECK_FALSE(qp_square(Rat(u) * p, p));
      CHECK(qp_square(Rat(u) * p * p, p) == qp_square(Rat(u), p));
    }
  }
}

TEST_CASE("finite-field forms: zeros and square-class obstructions") {
  FqField F3(FpPoly::x(3));
  auto one = FpPoly::constant(3, 1);
  auto two = FpPoly::constant(3, 2);

  IsotropyVerdict v = isotropic_finite(F3, {one, one, one});
  CHECK(v.isotropic());
  CHECK(check_witness(F3, {one, one, one}, std::get<FqWitness>(v.witness)));

  v = isotropic_finite(F3, {one, one});
  CHECK(v.anisotropic());
  CHECK(v.certificate.detail.find("nonsquare") != std::string::npos);

  v = isotropic_finite(F3, {one, two});  // -2 = 1 is a square
  CHECK(v.isotropic());

  v = isotropic_finite(F3, {two});
  CHECK(v.anisotropic());

  // F_9 = F_3[x]/(x^2+1): -1 becomes a square, so <1, 1> turns isotropic.
  FqField F9(FpPoly(3, {1, 0, 1}));
  v = isotropic_finite(F9, {one, one});
  CHECK(v.isotropic());
  CHECK(check_witness(F9, {one, one}, std::get<FqWitness>(v.witness)));

  CHECK_THROWS_AS(isotropic_finite(F3, {FpPoly(3)}), std::invalid_argument);
}

TEST_CASE("oracle_modpk: frozen searches and validity of hits") {
  CHECK_FALSE(oracle_modpk({Rat(1), Rat(1), Rat(3), Rat(3)}, 3, 3).has_value());
  CHECK_FALSE(oracle_modpk({Rat(1), Rat(1), Rat(3), Rat(3)}, 3, 8).has_value());
  CHECK_FALSE(oracle_modpk({Rat(9), Rat(9)}, 3, 3).has_value());

  auto hit = oracle_modpk({Rat(1), Rat(1), Rat(1)}, 3, 3);
  REQUIRE(hit.has_value());
  Int s = 0;
  bool unit = false;
  for (std::size_t i = 0; i < hit->size(); ++i) {
    s += (*hit)[i] * (*hit)[i];
    if ((*hit)[i] % 3 != 0) unit = true;
  }
  CHECK(unit);
  CHECK(s % 27 == 0);

  CHECK(oracle_modpk({Rat(1), Rat(-1)}, 3, 3).has_value());
  CHECK_THROWS_AS(oracle_modpk({Rat(1)}, 3, 12), std::invalid_argument);
  CHECK_THROWS_AS(oracle_modpk({}, 3, 3), std::invalid_argument);
}

TEST_CASE("oracle_modpk agrees with the plain odometer") {
  std::mt19937_64 g(911803);
  auto run = [&](std::int64_t p, int dim_max, int cases) {
    std::uniform_int_distribution<int> dim(1, dim_max);
    std::uniform_int_distribution<long> e(0, 1);
    std::uniform_int_distribution<long> u(1, p - 1);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int t = 0; t < cases; ++t) {
      int n = dim(g);
      std::vector<Rat> c;
      std::vector<long> cl;
      for (int i = 0; i < n; ++i) {
        long v = u(g) * (e(g) ? p : 1) * (sign(g) ? -1 : 1);
        c.push_back(Rat(v));
        cl.push_back(v);
      }
      auto hit = oracle_modpk(c, p, 3);
      CHECK(hit.has_value() == oracle::naive_primitive_zero(cl, p, 3));
      if (hit) {
        long m = p * p * p;
        Int s = 0;
        bool unit = false;
        for (int i = 0; i < n; ++i) {
          s += Int(cl[static_cast<std::size_t>(i)]) *
               (*hit)[static_cast<std::size_t>(i)] *
               (*hit)[static_cast<std::size_t>(i)];
          if ((*hit)[static_cast<std::size_t>(i)] % p != 0) unit = true;
        }
        CHECK(unit);
        CHECK(mod_m(Rat(s), Int(m)) == 0);
      }
    }
  };
  run(3, 4, 40);
  run(5, 2, 25);
}

TEST_CASE("Q_p verdicts: frozen forms") {
  IsotropyVerdict v = isotropic_qp(3, {Rat(1), Rat(1), Rat(3), Rat(3)});
  CHECK(v.anisotropic());
  CHECK(v.certificate.children.size() == 2);

  v = isotropic_qp(3, {Rat(1), Rat(1), Rat(1), Rat(3)});
  CHECK(v.isotropic());
  CHECK(check_witness(3, {Rat(1), Rat(1), Rat(1), Rat(3)},
                      std::get<QpWitness>(v.witness)));

  CHECK(isotropic_qp(3, {Rat(1), Rat(1), Rat(1)}).isotropic());
  CHECK(isotropic_qp(3, {Rat(1), Rat(-1)}).isotropic());
  CHECK(isotropic_qp(3, {Rat(1), Rat(1)}).anisotropic());
  CHECK(isotropic_qp(3, {Rat(1), Rat(3)}).anisotropic());
  CHECK(isotropic_qp(5, {Rat(2), Rat(3)}).isotropic());
  CHECK(isotropic_qp(3, {Rat(7), Rat(7), Rat(7), Rat(7), Rat(7)}).isotropic());

  // Negative valuations ride on the scale transport.
  v = isotropic_qp(3, {Rat(1, 9), Rat(1, 3), Rat(1)});
  CHECK(v.anisotropic());
  v = isotropic_qp(3, {Rat(1, 9), Rat(-1), Rat(3)});
  CHECK(v.isotropic());
  CHECK(check_witness(3, {Rat(1, 9), Rat(-1), Rat(3)},
                      std::get<QpWitness>(v.witness)));

  CHECK_THROWS_AS(isotropic_qp(3, {Rat(1), Rat(0)}), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_qp(4, {Rat(1)}), std::invalid_argument);
}

TEST_CASE("Q_p verdicts: random forms, invariances, witness replay") {
  std::mt19937_64 g(442201);
  std::uniform_int_distribution<int> dims(1, 6);
  const std::int64_t primes[] = {3, 5, 7};
  std::uniform_int_distribution<int> pi(0, 2);
  for (int t = 0; t < 200; ++t) {
    std::int64_t p = primes[pi(g)];
    int n = dims(g);
    std::vector<Rat> c;
    for (int i = 0; i < n; ++i) c.push_back(rnd_qp_coeff(g, p, 2));

    IsotropyVerdict v = isotropic_qp(p, c);  // triple agreement inside
    if (n >= 5) CHECK(v.isotropic());
    if (v.isotropic()) {
      CHECK(check_witness(p, c, std::get<QpWitness>(v.witness)));
    }

    // Whole-form scaling and coordinate permutation keep the verdict.
    std::vector<Rat> scaled = c;
    for (Rat& x : scaled) x *= Rat(p) * 4;
    CHECK(isotropic_qp(p, scaled).kind == v.kind);
    std::vector<Rat> perm = c;
    std::shuffle(perm.begin(), perm.end(), g);
    CHECK(isotropic_qp(p, perm).kind == v.kind);

    // Appending a hyperbolic pair makes anything isotropic.
    std::vector<Rat> hyp = c;
    hyp.push_back(c[0]);
    hyp.push_back(-c[0]);
    CHECK(isotropic_qp(p, hyp).isotropic());
  }
}

TEST_CASE("F_p(t) verdicts: frozen forms") {
  IsotropyVerdict v = isotropic_fqt(3, {fpr(3, {1}), fpr(3, {0, 2})});
  CHECK(v.anisotropic());
  CHECK(v.certificate.str().find("(t)") != std::string::npos);

  v = isotropic_fqt(3, {fpr(3, {0, 0, 1}), fpr(3, {2})});
  CHECK(v.isotropic());
  CHECK(check_witness(3, {fpr(3, {0, 0, 1}), fpr(3, {2})},
                      std::get<FqtWitness>(v.witness)));

  CHECK(isotropic_fqt(3, {fpr(3, {1}), fpr(3, {1}), fpr(3, {1})}).isotropic());
  CHECK(isotropic_fqt(3, {fpr(3, {1}), fpr(3, {2}), fpr(3, {0, 1})}).isotropic());

  v = isotropic_fqt(3, {fpr(3, {1}), fpr(3, {1}), fpr(3, {0, 1})});
  CHECK(v.anisotropic());
  CHECK(v.certificate.str().find("place (t)") != std::string::npos);

  v = isotropic_fqt(3, {fpr(3, {1}), fpr(3, {1}), fpr(3, {0, 1}), fpr(3, {0, 1})});
  CHECK(v.anisotropic());
  CHECK(v.certificate.str().find("place (t)") != std::string::npos);

  // q(1,1,1) = 1 + 2t + (t+2) = 0 mod 3.
  v = isotropic_fqt(3, {fpr(3, {1}), fpr(3, {0, 2}), fpr(3, {2, 1})});
  CHECK(v.isotropic());

  // Quaternion norm form of the place t: anisotropic for every odd p.
  v = isotropic_fqt(5, {fpr(5, {1}), fpr(5, {3}), fpr(5, {0, 4}), fpr(5, {0, 2})});
  CHECK(v.anisotropic());

  // Dimension five always has a zero.
  v = isotropic_fqt(3, {fpr(3, {1}), fpr(3, {1}), fpr(3, {0, 1}), fpr(3, {0, 1}),
                        fpr(3, {1, 0, 1})});
  CHECK(v.isotropic());
  CHECK(check_witness(3,
                      {fpr(3, {1}), fpr(3, {1}), fpr(3, {0, 1}), fpr(3, {0, 1}),
                       fpr(3, {1, 0, 1})},
                      std::get<FqtWitness>(v.witness)));

  CHECK(isotropic_fqt(3, {fpr(3, {0, 1}), fpr(3, {0, 1}), fpr(3, {0, 1})})
            .isotropic());

  CHECK_THROWS_AS(isotropic_fqt(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_fqt(3, {FpRat(3)}), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_fqt(4, {fpr(3, {1})}), std::invalid_argument);
}

TEST_CASE("oracle_poly_search: frozen") {
  auto hit = oracle_poly_search({fpr(3, {1}), fpr(3, {2})}, 0);
  REQUIRE(hit.has_value());
  CHECK_FALSE(oracle_poly_search({fpr(3, {1}), fpr(3, {0, 1})}, 1).has_value());
  CHECK(oracle_poly_search({fpr(3, {0, 0, 1}), fpr(3, {2})}, 1).has_value());
  CHECK_THROWS_AS(oracle_poly_search({fpr(3, {1})}, 40), std::invalid_argument);
}

TEST_CASE("F_p(t) verdicts: random forms, invariances, witness replay") {
  std::mt19937_64 g(775031);
  for (std::int64_t p : {3, 5}) {
    std::uniform_int_distribution<int> dims(2, 4);
    for (int t = 0; t < 50; ++t) {
      int n = dims(g);
      std::vector<FpRat> c;
      for (int i = 0; i < n; ++i) c.push_back(rnd_fqt_coeff(g, p));

      IsotropyVerdict v = isotropic_fqt(p, c);
      if (v.isotropic()) {
        CHECK(check_witness(p, c, std::get<FqtWitness>(v.witness)));
      } else {
        CHECK(!v.certificate.children.empty());
        // An independent bounded search must come up empty.
        long bound = p == 3 ? 1 : 0;
        CHECK_FALSE(oracle_poly_search(c, bound).has_value());
      }

      // Scaling the whole form and permuting coordinates keep the verdict.
      std::vector<FpRat> scaled = c;
      for (FpRat& x : scaled) x = x * FpRat(FpPoly(p, {0, 1}));
      CHECK(isotropic_fqt(p, scaled).kind == v.kind);
      std::vector<FpRat> perm = c;
      std::shuffle(perm.begin(), perm.end(), g);
      CHECK(isotropic_fqt(p, perm).kind == v.kind);

      std::vector<FpRat> hyp = c;
      hyp.push_back(c[0]);
      hyp.push_back(-c[0]);
      CHECK(isotropic_fqt(p, hyp).isotropic());
    }
  }
}

TEST_CASE("binary F_p(t) forms: the square-class test is exact") {
  std::mt19937_64 g(60493);
  for (int t = 0; t < 40; ++t) {
    std::int64_t p = t % 2 ? 3 : 5;
    std::vector<FpRat> c = {rnd_fqt_coeff(g, p), rnd_fqt_coeff(g, p)};
    bool square = (-(c[0] * c[1])).is_square();
    CHECK(isotropic_fqt(p, c).isotropic() == square);
  }
}

TEST_CASE("ternary F_p(t) forms: bounded search hits imply isotropy") {
  std::mt19937_64 g(331777);
  std::uniform_int_distribution<long> digit(0, 2);
  for (int t = 0; t < 10; ++t) {
    std::vector<FpRat> c;
    for (int i = 0; i < 3; ++i) {
      FpPoly f(3);
      while (f.is_zero()) f = FpPoly(3, {digit(g), digit(g)});
      c.push_back(FpRat(f));
    }
    IsotropyVerdict v = isotropic_fqt(3, c);
    auto hit = oracle_poly_search(c, 2);
    if (hit) CHECK(v.isotropic());
    if (v.anisotropic()) CHECK_FALSE(hit.has_value());
  }
}

TEST_CASE("residue dispatcher: layers, mismatches, reductions") {
  BaseFieldDesc Kf;
  Kf.kind = BaseFieldDesc::Kind::FiniteField;
  Kf.p = 3;
  BaseFieldDesc Kq;
  Kq.kind = BaseFieldDesc::Kind::PAdicRationals;
  Kq.p = 3;
  BaseFieldDesc Kt;
  Kt.kind = BaseFieldDesc::Kind::RationalFunctionField;
  Kt.p = 3;
  Kt.coordinate = "t";
  BaseFieldDesc Ke;
  Ke.kind = BaseFieldDesc::Kind::PAdicExtension;
  Ke.p = 3;

  RatFunc one(Rat(1));
  RatFunc T = RatFunc::t();

  QuadForm qc(3, {one, one, one});
  CHECK(isotropic_residue(qc, Kf).isotropic());
  CHECK(isotropic_residue(qc, Kq).isotropic());
  CHECK(isotropic_residue(qc, Kt).isotropic());

  QuadForm qt(3, {one, T});
  CHECK(isotropic_residue(qt, Kt).anisotropic());
  CHECK_THROWS_AS(isotropic_residue(qt, Kf), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_residue(qt, Kq), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_residue(qc, Ke), std::invalid_argument);

  // Coefficients that die mod p are rejected, not silently dropped.
  QuadForm q3(3, {RatFunc(Rat(3)), one});
  CHECK_THROWS_AS(isotropic_residue(q3, Kf), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_residue(q3, Kt), std::invalid_argument);
  CHECK(isotropic_residue(q3, Kq).anisotropic());

  BaseFieldDesc Kq5 = Kq;
  Kq5.p = 5;
  CHECK_THROWS_AS(isotropic_residue(qc, Kq5), std::invalid_argument);
}

TEST_CASE("witness checkers reject the wrong layer or a broken witness") {
  FqField F3(FpPoly::x(3));
  auto one = FpPoly::constant(3, 1);
  FqWitness wq{FpPoly::x(3), {one, one}};
  CHECK_FALSE(check_witness(F3, {one, one}, wq));  // 1 + 1 != 0
  FqWitness wt{FpPoly::x(3), {FpPoly(3), FpPoly(3)}};
  CHECK_FALSE(check_witness(F3, {one, one}, wt));  // trivial
  FqWitness wm{FpPoly(3, {1, 0, 1}), {one, one}};
  CHECK_FALSE(check_witness(F3, {one, one}, wm));  // modulus mismatch

  QpWitness qw;
  qw.p = 3;
  qw.coords = {Rat(1), Rat(1)};
  qw.precision = 8;
  qw.newton_index = 0;
  CHECK_FALSE(check_witness(3, {Rat(1), Rat(1)}, qw));  // q(x) = 2, v = 0

  FqtWitness fw{{fpr(3, {1}), fpr(3, {1})}};
  CHECK_FALSE(check_witness(3, {fpr(3, {1}), fpr(3, {1})}, fw));
  CHECK(check_witness(3, {fpr(3, {1}), fpr(3, {2})}, fw));  // 1 + 2 = 0
}
