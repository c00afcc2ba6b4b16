#pragma once

// Exact integer/rational arithmetic helpers shared by every module:
// p-adic valuations, residues mod p^k, canonical disc centers, and a
// rational line extended by +/- infinity for valuation bookkeeping.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace berk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

// Deterministic Miller-Rabin, sufficient for any 64-bit input.
bool is_prime(std::int64_t n);

// Throws std::invalid_argument unless p is an odd prime.
void require_odd_prime(std::int64_t p);

// Exponent of p in n. Requires n != 0.
long vp_int(const Int& n, std::int64_t p);

// v_p on nonzero rationals; vp(0) is the caller's business (see ValExt).
long vp(const Rat& q, std::int64_t p);

// Q extended by +infinity (valuation of 0) and -infinity (pole shorthand).
class ValExt {
 public:
  enum class Kind { Finite, PlusInf, MinusInf };

  ValExt() : kind_(Kind::Finite), v_(0) {}
  explicit ValExt(Rat v) : kind_(Kind::Finite), v_(std::move(v)) {}
  static ValExt plus_inf() { return ValExt(Kind::PlusInf); }
  static ValExt minus_inf() { return ValExt(Kind::MinusInf); }

  bool finite() const { return kind_ == Kind::Finite; }
  bool is_plus_inf() const { return kind_ == Kind::PlusInf; }
  bool is_minus_inf() const { return kind_ == Kind::MinusInf; }

  // Value of a finite element; throws std::domain_error otherwise.
  const Rat& value() const;

  ValExt operator+(const ValExt& o) const;
  ValExt operator-() const;
  bool operator==(const ValExt& o) const;
  std::strong_ordering operator<=>(const ValExt& o) const;

  std::string str() const;

 private:
  explicit ValExt(Kind k) : kind_(k), v_(0) {}
  Kind kind_;
  Rat v_;
};

// Valuation of q at p with vp(0) = +infinity.
ValExt vp_ext(const Rat& q, std::int64_t p);

// p^e for integer e of either sign.
Rat pow_p(std::int64_t p, const Rat& e_integral);
Rat pow_p(std::int64_t p, long e);

// Residue in [0, m) of a rational whose denominator is prime to m.
Int mod_m(const Rat& a, const Int& m);

// Inverse of a mod m (gcd(a, m) = 1).
Int inv_mod(const Int& a, const Int& m);

Int pow_mod(Int base, Int exp, const Int& m);

// Legendre symbol (a/p) in {-1, 0, +1} for odd prime p.
int legendre(const Rat& a_unit_or_int, std::int64_t p);

// Truncation of the p-adic expansion of a below exponent s: the unique
// r = sum_{i < s} d_i p^i with digits in [0, p) and v_p(a - r) >= s.
// Works for any rational a (digits may start at a negative exponent).
Rat canonical_center(const Rat& a, std::int64_t p, long s);

// floor/ceil of an exact rational.
Int floor_rat(const Rat& q);
Int ceil_rat(const Rat& q);
long to_long(const Int& n);

std::string rat_str(const Rat& q);

}  // namespace berk
