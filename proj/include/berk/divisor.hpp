#pragma once

// Closed points of the projective line over Q and principal divisors.

#include <string>
#include <vector>

#include "berk/qfactor.hpp"
#include "berk/ratfunc.hpp"

namespace berk {

// A closed point: a rational number, the point at infinity, or the orbit cut
// out by a monic irreducible polynomial of degree >= 2.
class ClosedPoint {
 public:
  static ClosedPoint rational(Rat a);
  static ClosedPoint infinity();
  static ClosedPoint irreducible(QPoly f);

  bool is_rational() const { return kind_ == Kind::Rational; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  bool is_irreducible() const { return kind_ == Kind::Irreducible; }

  const Rat& value() const;      // rational points only
  const QPoly& minpoly() const;  // irreducible points only
  long degree() const;

  bool operator==(const ClosedPoint& o) const;
  // Deterministic order: rationals by value, then irreducibles by degree and
  // coefficients, then infinity.
  bool operator<(const ClosedPoint& o) const;

  std::string str() const;

 private:
  enum class Kind { Rational, Infinity, Irreducible };
  ClosedPoint(Kind k, Rat a, QPoly f)
      : kind_(k), a_(std::move(a)), f_(std::move(f)) {}
  Kind kind_;
  Rat a_;
  QPoly f_;
};

struct Divisor {
  // Sorted by point, all multiplicities nonzero.
  std::vector<std::pair<ClosedPoint, long>> terms;

  long degree() const;
  long multiplicity(const ClosedPoint& pt) const;
  std::string str() const;
};

// Principal divisor of a nonzero rational function.
Divisor divisor(const RatFunc& f);

}  // namespace berk
