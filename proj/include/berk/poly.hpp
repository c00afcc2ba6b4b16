#pragma once

// Dense polynomials over Q and truncated Laurent expansions.

#include <utility>
#include <vector>

#include "berk/numbers.hpp"

namespace berk {

class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(Rat c0) { c_.push_back(std::move(c0)); normalize(); }
  explicit QPoly(std::vector<Rat> c) : c_(std::move(c)) { normalize(); }

  static QPoly x();                      // T
  static QPoly monomial(long k, Rat c);  // c * T^k

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for 0
  const Rat& operator[](long k) const;   // 0 outside stored range
  const std::vector<Rat>& coeffs() const { return c_; }
  const Rat& leading() const;

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator-() const;
  QPoly operator*(const QPoly& o) const;
  QPoly operator*(const Rat& s) const;
  bool operator==(const QPoly& o) const { return c_ == o.c_; }

  // Euclidean division; o must be nonzero.
  std::pair<QPoly, QPoly> divmod(const QPoly& o) const;

  QPoly derivative() const;
  Rat eval(const Rat& x) const;
  // f(a + b*T)
  QPoly compose_affine(const Rat& a, const Rat& b) const;
  // T^deg * f(1/T)
  QPoly reversed() const;
  QPoly monic() const;

  // Gauss valuation min_k (v_p(c_k) + k*s); +inf for the zero polynomial.
  ValExt gauss_val(std::int64_t p, const Rat& s) const;

  // (slope k, v_p(c_k)) for each nonzero coefficient: the lines whose lower
  // envelope is s -> gauss_val(p, s).
  std::vector<std::pair<long, Rat>> val_lines(std::int64_t p) const;

  // Primitive integer multiple: (g, c) with this == c * g, g integral with
  // content 1 and positive leading coefficient.
  std::pair<std::vector<Int>, Rat> primitive_integral() const;

  std::string str(const std::string& var = "T") const;

 private:
  void normalize();
  std::vector<Rat> c_;
};

QPoly gcd(const QPoly& a, const QPoly& b);  // monic gcd, 0 if both zero

// sum_{k >= lead} c[k - lead] * X^k with c.front() != 0 unless c is empty.
struct LaurentSeries {
  long lead = 0;
  std::vector<Rat> c;
  long order() const { return lead; }  // exact order; c empty means 0
  std::string str(const std::string& var) const;
};

}  // namespace berk
