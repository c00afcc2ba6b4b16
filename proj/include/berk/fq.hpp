#pragma once

// Polynomials over F_p, quotient fields F_p[x]/(m), rational functions over
// F_p, and the square-root utilities the residue-form machinery relies on.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "berk/numbers.hpp"
#include "berk/poly.hpp"

namespace berk {

class FpPoly {
 public:
  explicit FpPoly(std::int64_t p) : p_(p) { check_p(); }  // zero
  FpPoly(std::int64_t p, std::vector<long> c);
  static FpPoly constant(std::int64_t p, long c);
  static FpPoly x(std::int64_t p);
  // Reduce a rational polynomial whose denominators are p-units.
  static FpPoly from_qpoly(const QPoly& f, std::int64_t p);

  std::int64_t p() const { return p_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  long operator[](long k) const;
  long leading() const;
  const std::vector<long>& coeffs() const { return c_; }

  FpPoly operator+(const FpPoly& o) const;
  FpPoly operator-(const FpPoly& o) const;
  FpPoly operator-() const;
  FpPoly operator*(const FpPoly& o) const;
  FpPoly scale(long s) const;
  bool operator==(const FpPoly& o) const { return p_ == o.p_ && c_ == o.c_; }
  // Order by degree, then coefficients from the top; used for deterministic
  // factor lists and reports.
  bool operator<(const FpPoly& o) const;

  std::pair<FpPoly, FpPoly> divmod(const FpPoly& o) const;
  FpPoly monic() const;
  FpPoly derivative() const;
  long eval(long x) const;
  FpPoly compose_affine(long a, long b) const;  // f(a + b*x)

  std::string str(const std::string& var = "t") const;

 private:
  void check_p() const;
  void normalize();
  std::int64_t p_;
  std::vector<long> c_;
};

FpPoly fp_gcd(FpPoly a, FpPoly b);  // monic, zero if both zero
FpPoly fp_powmod(const FpPoly& b, Int e, const FpPoly& m);
bool fp_irreducible(const FpPoly& f);

// Monic irreducible factors with multiplicities, deterministically ordered;
// the unit is leading(f).
std::vector<std::pair<FpPoly, long>> fp_factor(const FpPoly& f);

// Least quadratic nonresidue mod p.
long fp_nonresidue(std::int64_t p);

// f = rep * h^2 with rep = (1 or the least nonresidue) * monic squarefree.
std::pair<FpPoly, FpPoly> fp_square_class(const FpPoly& f);

// F_p[x]/(m) with m monic irreducible; elements are FpPoly reduced mod m.
// Degree-one moduli give F_p itself, so every residue field goes through
// this one interface.
class FqField {
 public:
  explicit FqField(FpPoly m);

  std::int64_t p() const { return m_.p(); }
  long degree() const { return m_.degree(); }
  const Int& size() const { return q_; }
  const FpPoly& modulus() const { return m_; }

  FpPoly zero() const { return FpPoly(p()); }
  FpPoly one() const { return FpPoly::constant(p(), 1); }
  FpPoly reduce(const FpPoly& a) const;
  FpPoly add(const FpPoly& a, const FpPoly& b) const;
  FpPoly sub(const FpPoly& a, const FpPoly& b) const;
  FpPoly neg(const FpPoly& a) const;
  FpPoly mul(const FpPoly& a, const FpPoly& b) const;
  FpPoly inv(const FpPoly& a) const;
  FpPoly pow(const FpPoly& a, Int e) const;  // e >= 0

  bool is_square(const FpPoly& a) const;            // a nonzero
  std::optional<FpPoly> sqrt(const FpPoly& a) const;  // 0 -> 0
  // Element with the given base-p digit index; enumeration covers the field.
  FpPoly element(const Int& idx) const;
  FpPoly nonsquare() const;  // first nonsquare in enumeration order

 private:
  FpPoly m_;
  Int q_;
};

// Square root of r mod a squarefree monic A by CRT over its irreducible
// factors.  obstruction = a factor of A modulo which r is a nonsquare.
struct SqrtMod {
  std::optional<FpPoly> root;
  std::optional<FpPoly> obstruction;
};
SqrtMod sqrt_mod_squarefree(const FpPoly& r, const FpPoly& A);

// Nontrivial zero of sum a_i x_i^2 over the field; entries nonzero.
// nullopt exactly when the form is anisotropic (only possible for dim <= 2).
std::optional<std::vector<FpPoly>> fq_form_zero(const FqField& F,
                                                const std::vector<FpPoly>& a);

// (x, y) with a1 x^2 + a2 y^2 = v, v nonzero; a nondegenerate binary form
// over a finite field represents every nonzero value.
std::pair<FpPoly, FpPoly> fq_binary_represent(const FqField& F,
                                              const FpPoly& a1,
                                              const FpPoly& a2,
                                              const FpPoly& v);

// Rational functions over F_p in canonical form: coprime, monic denominator.
class FpRat {
 public:
  explicit FpRat(std::int64_t p) : n_(p), d_(FpPoly::constant(p, 1)) {}
  FpRat(FpPoly n, FpPoly d);
  explicit FpRat(FpPoly n);

  std::int64_t p() const { return n_.p(); }
  const FpPoly& num() const { return n_; }
  const FpPoly& den() const { return d_; }
  bool is_zero() const { return n_.is_zero(); }
  bool is_constant() const { return n_.is_constant() && d_.is_one(); }

  FpRat operator+(const FpRat& o) const;
  FpRat operator-(const FpRat& o) const;
  FpRat operator-() const;
  FpRat operator*(const FpRat& o) const;
  FpRat operator/(const FpRat& o) const;
  bool operator==(const FpRat& o) const { return n_ == o.n_ && d_ == o.d_; }

  long order_at(const FpPoly& pi) const;  // v_pi, this nonzero
  long order_at_infinity() const;         // deg den - deg num

  // this = rep * (cof)^2 with rep as in fp_square_class.
  std::pair<FpPoly, FpRat> square_class() const;
  bool is_square() const;
  std::optional<FpRat> sqrt() const;

  std::string str(const std::string& var = "t") const;

 private:
  FpPoly n_, d_;
};

}  // namespace berk
