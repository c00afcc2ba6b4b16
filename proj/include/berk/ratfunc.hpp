#pragma once

// Rational functions in T over Q, kept in canonical form: numerator and
// denominator coprime, denominator monic, zero stored as 0/1.

#include <optional>
#include <string>

#include "berk/poly.hpp"

namespace berk {

class RatFunc {
 public:
  RatFunc() : num_(), den_(QPoly(Rat(1))) {}
  explicit RatFunc(Rat c) : num_(QPoly(std::move(c))), den_(QPoly(Rat(1))) {}
  explicit RatFunc(QPoly n) : num_(std::move(n)), den_(QPoly(Rat(1))) {}
  RatFunc(QPoly n, QPoly d);

  static RatFunc t() { return RatFunc(QPoly::x()); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  bool operator==(const RatFunc& o) const;

  RatFunc inverse() const;
  // f(1/T) as a rational function.
  RatFunc flip() const;
  // f(a + b*T)
  RatFunc compose_affine(const Rat& a, const Rat& b) const;

  // Value at T = x; nullopt at a pole.
  std::optional<Rat> eval(const Rat& x) const;

  // Order of vanishing at T = c (negative at a pole); +inf for f = 0.
  ValExt order_at(const Rat& c) const;
  ValExt order_at_infinity() const;

  // Exact square root in Q(T) if one exists.
  std::optional<RatFunc> sqrt_exact() const;

  // First n terms of the Laurent expansion at T = c (or at infinity in the
  // variable 1/T), starting at the exact order.
  LaurentSeries expand_at(const Rat& c, long n) const;
  LaurentSeries expand_at_infinity(long n) const;

  std::string str(const std::string& var = "T") const;

 private:
  QPoly num_, den_;
};

// Exact polynomial square root; nullopt if f is not a square in Q[T].
std::optional<QPoly> poly_sqrt(const QPoly& f);

// Exact square root of a nonnegative rational if it is a perfect square.
std::optional<Rat> rat_sqrt(const Rat& q);

}  // namespace berk
